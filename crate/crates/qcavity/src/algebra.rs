//! Deformation algebra, effective couplings, and coherent-state amplitudes.
//!
//! The cavity mode is a deformed oscillator: the ordinary ladder operators are
//! replaced by R = a·f(n̂) and R† = a†·f(n̂+1), where f is a positive function
//! of the photon number. Two choices are supported:
//!
//! * identity, f(n) = 1, the ordinary oscillator;
//! * q-deformation, f(n) = √((1 − qⁿ)/(n(1 − q))) with q ∈ (0,1).
//!
//! The q-deformed factor is evaluated through the geometric-sum form
//! f(n)² = (1/n)·Σ_{k=0}^{n−1} qᵏ, which is finite and exact in the q → 1
//! limit instead of producing 0/0.
//!
//! Everything here is a pure function of its arguments.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Which deformation applies to the cavity ladder operators.
///
/// Constructed through [`DeformationSpec::identity`],
/// [`DeformationSpec::q_deformed`], or (for the growing regime q ≥ 1)
/// [`DeformationSpec::q_deformed_unrestricted`]; the parameter is validated
/// once here so every later evaluation can trust it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeformationSpec {
    kind: DeformationKind,
    q: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeformationKind {
    Identity,
    QDeformed,
}

impl DeformationSpec {
    /// The ordinary oscillator, f(n) = 1.
    pub const fn identity() -> Self {
        DeformationSpec {
            kind: DeformationKind::Identity,
            q: 1.0,
        }
    }

    /// q-deformation with q in the open interval (0,1).
    ///
    /// In this regime 0 < f(n) ≤ 1, f is non-increasing in n, and the
    /// effective coupling λf(n)√n saturates at λ/√(1−q) for large n.
    pub fn q_deformed(q: f64) -> Result<Self> {
        if !q.is_finite() || q <= 0.0 || q >= 1.0 {
            return Err(Error::DeformationParameter { q, range: "(0, 1)" });
        }
        Ok(DeformationSpec {
            kind: DeformationKind::QDeformed,
            q,
        })
    }

    /// q-deformation with any finite q > 0, including the growing regime
    /// q ≥ 1 in which f(n) is no longer bounded by 1.
    ///
    /// Nothing downstream breaks for q ≥ 1, but effective couplings grow
    /// with n, so truncation error is no longer controlled by the coherent
    /// tail alone. Use deliberately.
    pub fn q_deformed_unrestricted(q: f64) -> Result<Self> {
        if !q.is_finite() || q <= 0.0 {
            return Err(Error::DeformationParameter {
                q,
                range: "(0, inf)",
            });
        }
        Ok(DeformationSpec {
            kind: DeformationKind::QDeformed,
            q,
        })
    }

    pub fn kind(&self) -> DeformationKind {
        self.kind
    }

    /// The deformation parameter, or `None` for the identity deformation.
    pub fn q(&self) -> Option<f64> {
        match self.kind {
            DeformationKind::Identity => None,
            DeformationKind::QDeformed => Some(self.q),
        }
    }
}

impl Default for DeformationSpec {
    fn default() -> Self {
        DeformationSpec::identity()
    }
}

/// Physical parameters of the two-atom/cavity system.
///
/// * `lambda` — atom-field coupling λ; sets the time unit, so times are
///   reported as the dimensionless product λt.
/// * `kappa_d` — dipole-dipole strength κ_d (called g in some contexts).
/// * `delta` — detuning δ. The two atomic detunings are locked to exact
///   resonance, Δ₁ = δ and Δ₂ = −δ, so Δ₁ + Δ₂ = 0 always.
///
/// `lambda = 0` is accepted (it appears in degenerate-limit checks where the
/// atoms decouple from the field) but the physical regime is `lambda > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    lambda: f64,
    kappa_d: f64,
    delta: f64,
    deformation: DeformationSpec,
}

impl SystemParams {
    pub fn new(
        lambda: f64,
        kappa_d: f64,
        delta: f64,
        deformation: DeformationSpec,
    ) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::Parameter {
                name: "lambda",
                value: lambda,
                reason: "must be finite and >= 0",
            });
        }
        if !kappa_d.is_finite() || kappa_d < 0.0 {
            return Err(Error::Parameter {
                name: "kappa_d",
                value: kappa_d,
                reason: "must be finite and >= 0",
            });
        }
        if !delta.is_finite() {
            return Err(Error::Parameter {
                name: "delta",
                value: delta,
                reason: "must be finite",
            });
        }
        Ok(SystemParams {
            lambda,
            kappa_d,
            delta,
            deformation,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn kappa_d(&self) -> f64 {
        self.kappa_d
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn deformation(&self) -> &DeformationSpec {
        &self.deformation
    }
}

/// The deformation factor f(n) for n ≥ 1.
///
/// Identity gives 1 exactly. The q-deformed value is
/// f(n) = √((1/n)·Σ_{k=0}^{n−1} qᵏ), which equals √((1−qⁿ)/(n(1−q))) but
/// stays finite and exact as q → 1.
///
/// # Errors
///
/// `n = 0` is a domain error: the deformed operators only ever evaluate f
/// at n ≥ 1, and the closed form divides by n.
pub fn deformation_factor(n: usize, spec: &DeformationSpec) -> Result<f64> {
    if n == 0 {
        return Err(Error::DeformationDomain);
    }
    Ok(match spec.kind {
        DeformationKind::Identity => 1.0,
        DeformationKind::QDeformed => {
            let mut sum = 0.0;
            let mut power = 1.0;
            for _ in 0..n {
                sum += power;
                power *= spec.q;
            }
            (sum / n as f64).sqrt()
        }
    })
}

/// Effective coupling ν_j(n) = λ·f(n+j)·√(n+j) for j ∈ {1, 2}.
///
/// # Panics
///
/// Panics if `j` is not 1 or 2; it indexes which atom's transition the
/// coupling belongs to and has no other values.
pub fn coupling_nu(n: usize, j: usize, params: &SystemParams) -> f64 {
    assert!(j == 1 || j == 2, "coupling index j must be 1 or 2, got {j}");
    let m = n + j;
    // m >= 1 always, so the domain error cannot occur.
    let f = deformation_factor(m, &params.deformation).expect("n + j >= 1");
    params.lambda * f * (m as f64).sqrt()
}

/// Effective Rabi frequency μ(n) = √(δ² + 2(ν₁²(n) + ν₂²(n)) + κ_d²).
///
/// This is the single nonzero eigenvalue magnitude of the excitation-block
/// Hamiltonian, whose spectrum is {0, 0, +μ, −μ}.
///
/// # Errors
///
/// Returns a degenerate-block error when μ = 0 (all of δ, κ_d, ν₁, ν₂
/// vanish); the block dynamics are then trivially constant and the caller
/// must handle that case itself.
pub fn rabi_mu(n: usize, params: &SystemParams) -> Result<f64> {
    let mu = rabi_mu_unchecked(n, params);
    if mu == 0.0 {
        return Err(Error::DegenerateBlock { n });
    }
    Ok(mu)
}

/// μ(n) without the degeneracy check; 0 for an all-zero parameter set.
pub(crate) fn rabi_mu_unchecked(n: usize, params: &SystemParams) -> f64 {
    let nu1 = coupling_nu(n, 1, params);
    let nu2 = coupling_nu(n, 2, params);
    let d = params.delta;
    let k = params.kappa_d;
    (d * d + 2.0 * (nu1 * nu1 + nu2 * nu2) + k * k).sqrt()
}

/// Coherent-state amplitudes q_n = αⁿ/√(n!)·e^(−|α|²/2) for n = 0..=n_max.
///
/// |q_n|² is the Poisson(|α|²) weight at n. Amplitudes are evaluated in the
/// log domain, so |α|² well beyond n = 150 does not overflow.
///
/// # Errors
///
/// The cutoff must leave a discarded tail Σ_{n>n_max}|q_n|² below 1e−12;
/// otherwise a truncation error reports the smallest admissible `n_max`.
/// `n_max < 2` is rejected outright.
pub fn coherent_amplitudes(alpha: Complex64, n_max: usize) -> Result<Vec<Complex64>> {
    coherent_amplitudes_with_tail(alpha, n_max, tol::COHERENT_TAIL)
}

/// [`coherent_amplitudes`] with an explicit tail tolerance.
pub fn coherent_amplitudes_with_tail(
    alpha: Complex64,
    n_max: usize,
    tail_tol: f64,
) -> Result<Vec<Complex64>> {
    if n_max < 2 {
        return Err(Error::Parameter {
            name: "n_max",
            value: n_max as f64,
            reason: "cutoff must be at least 2",
        });
    }
    let mean = alpha.norm_sqr();
    if !mean.is_finite() {
        return Err(Error::Parameter {
            name: "alpha",
            value: alpha.norm(),
            reason: "must be finite",
        });
    }
    let tail = poisson_tail(mean, n_max);
    if tail >= tail_tol {
        return Err(Error::Truncation {
            n_max,
            tail,
            tol: tail_tol,
            minimal: minimal_n_max(mean, tail_tol),
        });
    }

    let mut q = Vec::with_capacity(n_max + 1);
    if mean == 0.0 {
        q.push(Complex64::new(1.0, 0.0));
        q.resize(n_max + 1, Complex64::new(0.0, 0.0));
        return Ok(q);
    }
    let ln_r = alpha.norm().ln();
    let arg = alpha.arg();
    let mut ln_fact = 0.0; // ln(n!)
    for n in 0..=n_max {
        if n > 0 {
            ln_fact += (n as f64).ln();
        }
        let ln_mod = n as f64 * ln_r - 0.5 * ln_fact - 0.5 * mean;
        q.push(Complex64::from_polar(ln_mod.exp(), arg * n as f64));
    }
    Ok(q)
}

/// Upper Poisson tail P[N > n_max] for N ~ Poisson(mean).
///
/// Summed forward from n_max+1 with the term recurrence, so it is accurate
/// in the deep tail where 1 − CDF would cancel.
pub fn poisson_tail(mean: f64, n_max: usize) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    let start = n_max + 1;
    let mut ln_fact = 0.0;
    for k in 1..=start {
        ln_fact += (k as f64).ln();
    }
    let mut term = (-mean + start as f64 * mean.ln() - ln_fact).exp();
    let mut sum = 0.0;
    let mut k = start;
    // Terms grow until k reaches the mean, then decay geometrically.
    loop {
        sum += term;
        k += 1;
        term *= mean / k as f64;
        if (k as f64) > mean && (term < sum * 1e-18 || term < 1e-300) {
            break;
        }
        if k > start + 200_000 {
            break;
        }
    }
    sum
}

/// Smallest cutoff whose Poisson tail is below `tail_tol`.
pub fn minimal_n_max(mean: f64, tail_tol: f64) -> usize {
    let mut n = (mean.ceil() as usize).max(2);
    while poisson_tail(mean, n) >= tail_tol {
        n += 1;
    }
    n
}
