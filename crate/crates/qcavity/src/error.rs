//! Error type shared by the whole crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The deformation factor f(n) is only defined for photon number n >= 1.
    #[error("deformation factor is undefined at n = 0")]
    DeformationDomain,

    /// Deformation parameter outside the accepted range.
    #[error("deformation parameter q = {q} is outside {range}")]
    DeformationParameter { q: f64, range: &'static str },

    /// A scalar system parameter failed validation.
    #[error("parameter {name} = {value} is invalid: {reason}")]
    Parameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Atomic amplitudes must be normalized to unit probability.
    #[error(
        "atomic amplitudes have |a1|^2+|a2|^2+|a3|^2+|a4|^2 = {norm_sqr}, expected 1 within 1e-12"
    )]
    AtomicNormalization { norm_sqr: f64 },

    /// The Fock-space cutoff discards too much coherent-state weight.
    #[error(
        "photon cutoff n_max = {n_max} leaves coherent tail {tail:.6e} >= {tol:.0e}; \
         the smallest admissible cutoff for this amplitude is {minimal}"
    )]
    Truncation {
        n_max: usize,
        tail: f64,
        tol: f64,
        minimal: usize,
    },

    /// All of δ, κ_d, ν₁, ν₂ vanish, so the block frequency μ is zero.
    #[error("block n = {n} is degenerate: delta, kappa_d, and both couplings are all zero")]
    DegenerateBlock { n: usize },

    /// A block Hamiltonian violated its own cubic spectral identity.
    #[error(
        "block n = {n}: spectral identity residual {residual:.3e} exceeds {tol:.3e}; \
         refusing to apply the closed-form propagator"
    )]
    SpectralIdentity { n: usize, residual: f64, tol: f64 },

    /// The adaptive integrator could not satisfy its tolerance.
    #[error(
        "step size underflow at t = {t:.6e} (step {step:.3e}); tolerances are unattainable here"
    )]
    StepSizeUnderflow { t: f64, step: f64 },

    /// A sampling grid was empty, unsorted, or did not start at zero.
    #[error("invalid time grid: {0}")]
    TimeGrid(String),

    /// The dense cross-check propagator would be too large to factorize.
    #[error("full-space propagator dimension {dim} exceeds the cap of {cap}")]
    OracleTooLarge { dim: usize, cap: usize },

    /// A state was paired with a propagator built for a different cutoff.
    #[error("propagator was built for n_max = {expected} but the state has n_max = {got}")]
    CutoffMismatch { expected: usize, got: usize },

    /// The Wigner trace picked up a non-negligible imaginary part.
    #[error("Wigner value has imaginary residue {imag:.3e}; kernel or density matrix is corrupt")]
    NonRealWigner { imag: f64 },

    /// Spherical harmonic indices outside the implemented l <= 1 set.
    #[error("spherical harmonic Y_{{{l},{m}}} is outside the supported set (l <= 1, |m| <= l)")]
    HarmonicIndex { l: u32, m: i32 },

    /// A matrix that must be Hermitian was not.
    #[error("matrix is not Hermitian: residual {residual:.3e} exceeds 1e-12")]
    NonHermitian { residual: f64 },

    /// Malformed configuration file or flag combination.
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
