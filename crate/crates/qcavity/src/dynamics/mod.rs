//! Block Hamiltonians and time evolution.
//!
//! Conservation of total excitation splits the joint state into independent
//! 4-dimensional blocks. On the ordered basis (|1,1,n⟩, |1,0,n+1⟩,
//! |0,1,n+1⟩, |0,0,n+2⟩) block n is driven by the Hermitian matrix
//!
//! ```text
//!     ⎡ 0    ν₁    ν₁    0  ⎤
//! h = ⎢ ν₁   δ     iκ_d  ν₂ ⎥        ν_j = λ f(n+j) √(n+j)
//!     ⎢ ν₁  −iκ_d −δ     ν₂ ⎥
//!     ⎣ 0    ν₂    ν₂    0  ⎦
//! ```
//!
//! whose characteristic polynomial is x²(x² − μ²) with
//! μ² = δ² + 2(ν₁² + ν₂²) + κ_d². The cubic identity h³ = μ²h therefore
//! holds exactly, and the propagator collapses to three terms:
//!
//! e^(−iht) = I − i·(sin μt / μ)·h + ((cos μt − 1)/μ²)·h².
//!
//! Three independent evolution paths share this module: the closed form
//! above, an adaptive embedded Runge-Kutta integrator ([`ode`]), and a dense
//! full-space eigendecomposition propagator ([`oracle`]) that also moves the
//! low-excitation remainder. [`printed`] transcribes the published
//! coefficient-form solution for diagnostic comparison.

pub mod ode;
pub mod oracle;
pub mod printed;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::algebra::{coupling_nu, rabi_mu_unchecked, SystemParams};
use crate::error::{Error, Result};
use crate::state::JointState;
use crate::tol;

type C64 = Complex64;

/// Which propagation path [`evolve_joint`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Spectral closed form per block; exact up to rounding.
    Closed,
    /// Adaptive embedded Runge-Kutta integration of dC/dt = −ihC.
    Ode,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Ode => "ode",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "closed" => Ok(Method::Closed),
            "ode" => Ok(Method::Ode),
            other => Err(Error::Config(format!(
                "unknown method '{other}' (expected closed or ode)"
            ))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The Hamiltonian of one excitation block, with its Rabi frequency and the
/// residual of the cubic identity it is supposed to satisfy.
#[derive(Clone, Debug)]
pub struct BlockHamiltonian {
    n: usize,
    h: Matrix4<C64>,
    h_sq: Matrix4<C64>,
    mu: f64,
    spectral_residual: f64,
}

/// Builds the block-n Hamiltonian. Hermitian by construction: the only
/// complex entries are the conjugate pair ±iκ_d.
pub fn block_hamiltonian(n: usize, params: &SystemParams) -> BlockHamiltonian {
    BlockHamiltonian::new(n, params)
}

impl BlockHamiltonian {
    pub fn new(n: usize, params: &SystemParams) -> Self {
        let nu1 = C64::new(coupling_nu(n, 1, params), 0.0);
        let nu2 = C64::new(coupling_nu(n, 2, params), 0.0);
        let d = C64::new(params.delta(), 0.0);
        let ik = C64::new(0.0, params.kappa_d());
        let z = C64::new(0.0, 0.0);
        #[rustfmt::skip]
        let h = Matrix4::new(
            z,    nu1,  nu1,  z,
            nu1,  d,    ik,   nu2,
            nu1,  -ik,  -d,   nu2,
            z,    nu2,  nu2,  z,
        );
        let h_sq = h * h;
        let mu = rabi_mu_unchecked(n, params);
        let h_cube = h_sq * h;
        let mu_sq = mu * mu;
        let spectral_residual = h_cube
            .iter()
            .zip(h.iter())
            .map(|(c, e)| (c - e * mu_sq).norm())
            .fold(0.0, f64::max);
        BlockHamiltonian {
            n,
            h,
            h_sq,
            mu,
            spectral_residual,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.h
    }

    /// Effective Rabi frequency μ(n); 0 only for an all-zero parameter set.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// max |(h³ − μ²h)_{jk}|, the violation of the cubic identity.
    pub fn spectral_residual(&self) -> f64 {
        self.spectral_residual
    }

    /// The residual bound the closed form insists on: 1e−9·max(μ³, 1).
    pub fn spectral_tolerance(&self) -> f64 {
        tol::SPECTRAL_IDENTITY * (self.mu * self.mu * self.mu).max(1.0)
    }

    fn check_spectral(&self) -> Result<()> {
        if self.spectral_residual > self.spectral_tolerance() {
            return Err(Error::SpectralIdentity {
                n: self.n,
                residual: self.spectral_residual,
                tol: self.spectral_tolerance(),
            });
        }
        Ok(())
    }

    /// The propagator e^(−iht) as an explicit matrix.
    pub fn propagator(&self, t: f64) -> Result<Matrix4<C64>> {
        self.check_spectral()?;
        if self.mu == 0.0 {
            return Ok(Matrix4::identity());
        }
        let (sin_coef, cos_coef) = self.coefficients(t);
        Ok(Matrix4::identity() + self.h * sin_coef + self.h_sq * cos_coef)
    }

    /// (−i·sin(μt)/μ, (cos(μt) − 1)/μ²), the h and h² weights at time t.
    ///
    /// The second factor is evaluated as −2·sin²(μt/2)/μ² so small μt does
    /// not cancel catastrophically.
    fn coefficients(&self, t: f64) -> (C64, C64) {
        let half = (0.5 * self.mu * t).sin();
        let sin_coef = C64::new(0.0, -(self.mu * t).sin() / self.mu);
        let cos_coef = C64::new(-2.0 * half * half / (self.mu * self.mu), 0.0);
        (sin_coef, cos_coef)
    }

    /// Closed-form evolution of one initial amplitude vector over a whole
    /// time grid. h·c₀ and h²·c₀ are formed once; each sample is then two
    /// scaled vector additions.
    pub fn evolve_grid(&self, c0: &Vector4<C64>, times: &[f64]) -> Result<Vec<Vector4<C64>>> {
        self.check_spectral()?;
        if self.mu == 0.0 {
            return Ok(vec![*c0; times.len()]);
        }
        let hc = self.h * c0;
        let hhc = self.h_sq * c0;
        Ok(times
            .iter()
            .map(|&t| {
                let (sin_coef, cos_coef) = self.coefficients(t);
                c0 + hc * sin_coef + hhc * cos_coef
            })
            .collect())
    }
}

/// Closed-form evolution of a single block to time t.
///
/// `t` is the raw time conjugate to the Hamiltonian; the reported axis λt is
/// `params.lambda() * t`.
pub fn evolve_block_closed(
    n: usize,
    c0: &Vector4<C64>,
    params: &SystemParams,
    t: f64,
) -> Result<Vector4<C64>> {
    let bh = BlockHamiltonian::new(n, params);
    Ok(bh.evolve_grid(c0, std::slice::from_ref(&t))?.pop().unwrap())
}

/// Adaptive-ODE evolution of a single block over a raw-time grid; see
/// [`ode::evolve_block_ode`].
pub use ode::evolve_block_ode;

/// A time series of joint states on a strictly increasing λt grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    lambda_times: Vec<f64>,
    states: Vec<JointState>,
    params: SystemParams,
    method: Method,
}

impl Trajectory {
    /// The λt values of the samples.
    pub fn times(&self) -> &[f64] {
        &self.lambda_times
    }

    pub fn states(&self) -> &[JointState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.lambda_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda_times.is_empty()
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn method(&self) -> Method {
        self.method
    }
}

fn validate_lambda_grid(lambda_t_grid: &[f64], lambda: f64) -> Result<Vec<f64>> {
    if lambda_t_grid.is_empty() {
        return Err(Error::TimeGrid("grid is empty".into()));
    }
    if lambda_t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::TimeGrid("grid contains a non-finite value".into()));
    }
    if lambda_t_grid[0] < 0.0 {
        return Err(Error::TimeGrid(format!(
            "grid starts at {} but times must be >= 0",
            lambda_t_grid[0]
        )));
    }
    if lambda_t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::TimeGrid("grid is not strictly increasing".into()));
    }
    if lambda == 0.0 {
        if lambda_t_grid.iter().any(|&t| t != 0.0) {
            return Err(Error::TimeGrid(
                "lambda = 0 cannot reach a positive lambda_t".into(),
            ));
        }
        return Ok(lambda_t_grid.to_vec());
    }
    Ok(lambda_t_grid.iter().map(|&lt| lt / lambda).collect())
}

/// Evolves every block of `state` over the λt grid and reassembles joint
/// states per sample. The remainder rides along unchanged (the ansatz
/// freezes it); only the full-space oracle evolves it.
pub fn evolve_joint(
    state: &JointState,
    params: &SystemParams,
    lambda_t_grid: &[f64],
    method: Method,
) -> Result<Trajectory> {
    let times = validate_lambda_grid(lambda_t_grid, params.lambda())?;
    let n_blocks = state.blocks().len();
    let n_times = times.len();

    // per_block[n][k] = block n at times[k]
    let mut per_block = Vec::with_capacity(n_blocks);
    for (n, c0) in state.blocks().iter().enumerate() {
        let bh = BlockHamiltonian::new(n, params);
        let evolved = match method {
            Method::Closed => bh.evolve_grid(c0, &times)?,
            Method::Ode => ode::integrate(&bh, c0, &times, &ode::OdeOptions::default())?,
        };
        per_block.push(evolved);
    }

    let states = (0..n_times)
        .map(|k| {
            let blocks = (0..n_blocks).map(|n| per_block[n][k]).collect();
            state.with_blocks(blocks)
        })
        .collect();

    Ok(Trajectory {
        lambda_times: lambda_t_grid.to_vec(),
        states,
        params: *params,
        method,
    })
}

/// Full-space eigendecomposition evolution; see [`oracle`] for the cached
/// form when many times are needed.
pub use oracle::full_propagator_oracle;

/// The published coefficient-form solution, kept for diagnostics; see
/// [`printed`].
pub use printed::printed_closed_form;
