//! Numerical tolerances used across the crate.
//!
//! Every bound here is tied to a concrete failure mode. Loosening one of them
//! should be treated as a bug until proven otherwise.

/// Coherent-state truncation: the discarded Poisson tail must stay below this.
pub const COHERENT_TAIL: f64 = 1e-12;

/// Atomic amplitude normalization check at construction.
pub const ATOMIC_NORM: f64 = 1e-12;

/// Relative slack for the cubic spectral identity h^3 = mu^2 h.
///
/// The residual is compared against `SPECTRAL_IDENTITY * max(mu^3, 1)` so the
/// bound scales with the size of the entries being cancelled.
pub const SPECTRAL_IDENTITY: f64 = 1e-9;

/// Hermiticity residual allowed in a reduced density matrix.
pub const HERMITICITY: f64 = 1e-12;

/// Imaginary residue on a Wigner value above which we abort.
pub const WIGNER_IMAG_HARD: f64 = 1e-8;

/// Imaginary residue expected in practice; asserted in debug builds.
pub const WIGNER_IMAG_SOFT: f64 = 1e-10;

/// Default absolute tolerance for the adaptive integrator.
pub const ODE_ABS: f64 = 1e-10;

/// Default relative tolerance for the adaptive integrator.
pub const ODE_REL: f64 = 1e-10;

/// Largest matrix dimension the dense cross-check propagator will factorize.
pub const ORACLE_DIM_CAP: usize = 4096;
