//! SU(2) multipole kernel and the equal-angle two-qubit Wigner distribution.
//!
//! For one qubit the phase-space kernel is
//!
//! A(θ,φ) = √(2π)·Σ_{L≤1, |M|≤L} T̂†_{L,M}·Y_{L,M}(θ,φ) = (1 + √3 n̂·σ)/2,
//!
//! where n̂ is the unit vector at (θ,φ) and the multipole operators T̂_{L,M}
//! are the four spin-½ tensor combinations hard-coded below (their
//! Clebsch-Gordan content is fixed; a general coupling engine would be
//! overkill for four 2×2 matrices). A is Hermitian with constant trace 1 and
//! eigenvalues (1±√3)/2 at every angle.
//!
//! The two-qubit distribution evaluated here is the equal-angle slice
//! W(θ,φ) = Tr[ρ_AB·(A ⊗ A)], real for Hermitian ρ_AB and confined to
//! [−1/2, (1+√3)²/4] for any physical state. A second evaluation route
//! expands the same trace in the Λ functions (products of Y's); the two
//! routes agree to 1e−9 and guard each other against convention drift.
//!
//! Spherical harmonics use the Condon-Shortley phase: Y₁,±1 carries the
//! sign ∓ on its leading coefficient.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::Serialize;

use crate::density::{reduce_to_atoms, reduce_to_atoms_with_remainder, DensityMatrix4};
use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::tol;

type C64 = Complex64;

/// Y_{L,M}(θ,φ) for L ≤ 1:
///
/// * Y₀₀ = 1/(2√π)
/// * Y₁₀ = √(3/(4π))·cos θ
/// * Y₁,±1 = ∓√(3/(8π))·sin θ·e^(±iφ)
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> Result<C64> {
    match (l, m) {
        (0, 0) => Ok(C64::new(0.5 / std::f64::consts::PI.sqrt(), 0.0)),
        (1, 0) => Ok(C64::new(
            (3.0 / (4.0 * std::f64::consts::PI)).sqrt() * theta.cos(),
            0.0,
        )),
        (1, 1) => {
            let r = -(3.0 / (8.0 * std::f64::consts::PI)).sqrt() * theta.sin();
            Ok(C64::from_polar(r.abs(), phi) * r.signum())
        }
        (1, -1) => {
            let r = (3.0 / (8.0 * std::f64::consts::PI)).sqrt() * theta.sin();
            Ok(C64::from_polar(r.abs(), -phi) * r.signum())
        }
        _ => Err(Error::HarmonicIndex { l, m }),
    }
}

/// The conjugated multipole operators T̂†_{L,M} on the basis (|1⟩, |0⟩).
fn multipole_dagger(l: u32, m: i32) -> Matrix2<C64> {
    let z = C64::new(0.0, 0.0);
    let inv_sqrt2 = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let one = C64::new(1.0, 0.0);
    match (l, m) {
        // (|1><1| + |0><0|)/sqrt(2)
        (0, 0) => Matrix2::new(inv_sqrt2, z, z, inv_sqrt2),
        // (|1><1| - |0><0|)/sqrt(2)
        (1, 0) => Matrix2::new(inv_sqrt2, z, z, -inv_sqrt2),
        // |1><0|
        (1, -1) => Matrix2::new(z, one, z, z),
        // -|0><1|
        (1, 1) => Matrix2::new(z, z, -one, z),
        _ => unreachable!("multipole index outside the spin-1/2 set"),
    }
}

/// The single-qubit kernel A(θ,φ) with its angles.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelMatrix {
    a: Matrix2<C64>,
    theta: f64,
    phi: f64,
}

impl KernelMatrix {
    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.a
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// |trace(A) − 1|; identically ~0 because only T̂₀₀ carries trace.
    pub fn trace_residual(&self) -> f64 {
        (self.a.trace() - C64::new(1.0, 0.0)).norm()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        (self.a - self.a.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Largest distance of the eigenvalue pair from (1±√3)/2.
    pub fn eigenvalue_residual(&self) -> f64 {
        let mut eig: Vec<f64> = self
            .a
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        eig.sort_by(f64::total_cmp);
        let lo = (1.0 - 3.0_f64.sqrt()) / 2.0;
        let hi = (1.0 + 3.0_f64.sqrt()) / 2.0;
        (eig[0] - lo).abs().max((eig[1] - hi).abs())
    }
}

/// Builds A(θ,φ) by summing T̂†_{L,M}·Y_{L,M} over the four multipoles.
pub fn kernel(theta: f64, phi: f64) -> KernelMatrix {
    let mut a = Matrix2::zeros();
    for (l, m) in [(0u32, 0i32), (1, -1), (1, 0), (1, 1)] {
        let y = spherical_harmonic(l, m, theta, phi).expect("indices are in range");
        a += multipole_dagger(l, m) * y;
    }
    a *= C64::new((2.0 * std::f64::consts::PI).sqrt(), 0.0);
    KernelMatrix { a, theta, phi }
}

fn real_part_checked(w: C64) -> Result<f64> {
    if w.im.abs() >= tol::WIGNER_IMAG_HARD {
        return Err(Error::NonRealWigner { imag: w.im });
    }
    debug_assert!(
        w.im.abs() < tol::WIGNER_IMAG_SOFT,
        "Wigner imaginary residue {:.3e} above the soft bound",
        w.im
    );
    Ok(w.re)
}

/// Equal-angle Wigner value W = Tr[ρ·(A ⊗ A)] with A = kernel(θ,φ).
pub fn wigner_at(rho: &DensityMatrix4, theta: f64, phi: f64) -> Result<f64> {
    let a = kernel(theta, phi);
    wigner_two_angle(rho, &a, &a)
}

/// The general two-angle form Tr[ρ·(A_alice ⊗ A_bob)]. Every published
/// curve is the equal-angle slice, but the kernels factorize per atom, so
/// the general contraction costs nothing extra.
pub fn wigner_two_angle(
    rho: &DensityMatrix4,
    alice: &KernelMatrix,
    bob: &KernelMatrix,
) -> Result<f64> {
    let aa: Matrix4<C64> = alice.matrix().kronecker(bob.matrix());
    real_part_checked((rho.matrix() * aa).trace())
}

/// The same W through the Λ-function expansion:
///
/// * Λ₀₀ = (Y₀₀ + Y₁₀)/√2, Λ₁₁ = (Y₀₀ − Y₁₀)/√2 (both real)
/// * Λ₀₁ = −Y₁,₁, Λ₁₀ = Y₁,₋₁ = conj(Λ₀₁)
///
/// with coefficients read from the partial-trace ρ elements. Equivalent to
/// [`wigner_at`] term by term; kept as an independent route because the two
/// make different sign mistakes when a convention drifts.
pub fn wigner_lambda_form(rho: &DensityMatrix4, theta: f64, phi: f64) -> f64 {
    let y00 = spherical_harmonic(0, 0, theta, phi).unwrap().re;
    let y10 = spherical_harmonic(1, 0, theta, phi).unwrap().re;
    let l00 = (y00 + y10) * std::f64::consts::FRAC_1_SQRT_2;
    let l11 = (y00 - y10) * std::f64::consts::FRAC_1_SQRT_2;
    let l01 = -spherical_harmonic(1, 1, theta, phi).unwrap();

    let m = rho.matrix();
    let w = m[(0, 0)].re * l00 * l00
        + (m[(1, 1)].re + m[(2, 2)].re) * l11 * l00
        + m[(3, 3)].re * l11 * l11
        + 2.0 * l00 * ((m[(0, 1)] + m[(0, 2)]) * l01).re
        + 2.0 * l11 * ((m[(1, 3)] + m[(2, 3)]) * l01).re
        + 2.0 * m[(1, 2)].re * l01.norm_sqr()
        + 2.0 * (m[(0, 3)] * l01 * l01).re;
    2.0 * std::f64::consts::PI * w
}

/// One (λt, θ, φ, W) sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WignerPoint {
    pub lambda_t: f64,
    pub theta: f64,
    pub phi: f64,
    pub w: f64,
}

/// Everything needed to reproduce a series, written to the JSON sidecar.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesMetadata {
    pub preset: Option<String>,
    pub curve: Option<String>,
    pub atomic: String,
    pub atomic_amplitudes: Vec<[f64; 2]>,
    pub alpha: [f64; 2],
    pub n_max: usize,
    pub lambda: f64,
    pub kappa_d: f64,
    pub delta: f64,
    pub deformation: String,
    pub q: Option<f64>,
    pub theta: f64,
    pub phi: f64,
    pub t_max: f64,
    pub samples: usize,
    pub method: String,
    pub renormalized: bool,
    pub include_remainder: bool,
    pub norm_deficit: f64,
}

/// W(θ,φ) sampled along a trajectory, with its provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerSeries {
    points: Vec<WignerPoint>,
    metadata: SeriesMetadata,
}

impl WignerSeries {
    pub fn points(&self) -> &[WignerPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn metadata(&self) -> &SeriesMetadata {
        &self.metadata
    }

    pub fn metadata_mut(&mut self) -> &mut SeriesMetadata {
        &mut self.metadata
    }

    /// CSV with header `lambda_t,theta,phi,W` and 17-significant-digit
    /// values, identical across runs of the same closed-form configuration.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(16 + 80 * self.points.len());
        out.push_str("lambda_t,theta,phi,W\n");
        for p in &self.points {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e}\n",
                p.lambda_t, p.theta, p.phi, p.w
            ));
        }
        out
    }

    pub fn metadata_json(&self) -> String {
        serde_json::to_string_pretty(&self.metadata).expect("metadata serializes")
    }
}

/// Reduces every trajectory sample and evaluates W(θ,φ); blocks only.
pub fn wigner_series(traj: &Trajectory, theta: f64, phi: f64) -> Result<WignerSeries> {
    wigner_series_with(traj, theta, phi, false)
}

/// [`wigner_series`] with the option to fold the frozen remainder into the
/// reduction.
pub fn wigner_series_with(
    traj: &Trajectory,
    theta: f64,
    phi: f64,
    include_remainder: bool,
) -> Result<WignerSeries> {
    let a = kernel(theta, phi);
    let mut points = Vec::with_capacity(traj.len());
    for (&lt, state) in traj.times().iter().zip(traj.states()) {
        let rho = if include_remainder {
            reduce_to_atoms_with_remainder(state)
        } else {
            reduce_to_atoms(state)
        };
        let w = wigner_two_angle(&rho, &a, &a)?;
        points.push(WignerPoint {
            lambda_t: lt,
            theta,
            phi,
            w,
        });
    }

    let params = traj.params();
    let meta = traj.states()[0].meta();
    let metadata = SeriesMetadata {
        preset: None,
        curve: None,
        atomic: meta
            .atomic_label
            .map(|l| l.name().to_string())
            .unwrap_or_else(|| "explicit".to_string()),
        atomic_amplitudes: meta.atomic.iter().map(|a| [a.re, a.im]).collect(),
        alpha: [meta.alpha.re, meta.alpha.im],
        n_max: traj.states()[0].n_max(),
        lambda: params.lambda(),
        kappa_d: params.kappa_d(),
        delta: params.delta(),
        deformation: match params.deformation().q() {
            Some(_) => "q-deformed".to_string(),
            None => "identity".to_string(),
        },
        q: params.deformation().q(),
        theta,
        phi,
        t_max: *traj.times().last().unwrap(),
        samples: traj.len(),
        method: traj.method().name().to_string(),
        renormalized: meta.renormalized,
        include_remainder,
        norm_deficit: traj.states()[0].norm_deficit(),
    };
    Ok(WignerSeries { points, metadata })
}
