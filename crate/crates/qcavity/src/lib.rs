//! Two two-level atoms coupled to a q-deformed cavity mode.
//!
//! The crate simulates a pair of two-level atoms (with a dipole-dipole
//! exchange interaction between them) exchanging excitations with a single
//! cavity mode whose ladder operators are deformed by a photon-number
//! dependent factor f(n̂). Because total excitation is conserved, the joint
//! state decomposes into independent 4-dimensional blocks, each driven by a
//! small Hermitian Hamiltonian with spectrum {0, 0, ±μ(n)}. That structure
//! gives a closed-form propagator per block, cross-checked here by an
//! adaptive integrator and by a dense full-space matrix exponential.
//!
//! From the evolved state the crate computes the two-atom reduced density
//! matrix and the equal-angle SU(2) Wigner distribution W(θ, φ, t), the
//! quantity all the bundled figure presets plot.
//!
//! ```
//! use num_complex::Complex64;
//! use qcavity::algebra::{DeformationSpec, SystemParams};
//! use qcavity::state::{atomic_preset, make_joint_state, AtomicPreset, FieldInit};
//! use qcavity::dynamics::{evolve_joint, Method};
//! use qcavity::density::reduce_to_atoms;
//! use qcavity::wigner::wigner_at;
//!
//! let params = SystemParams::new(
//!     1.0,                                   // coupling lambda
//!     5.0,                                   // dipole strength kappa_d
//!     1.0,                                   // detuning delta
//!     DeformationSpec::q_deformed(0.1)?,
//! )?;
//! let atomic = atomic_preset(AtomicPreset::Bell);
//! let field = FieldInit::auto(Complex64::new(5.0, 0.0))?;
//! let initial = make_joint_state(&atomic, &field);
//!
//! let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
//! let traj = evolve_joint(&initial, &params, &grid, Method::Closed)?;
//!
//! let rho = reduce_to_atoms(traj.states().last().unwrap());
//! let w = wigner_at(&rho, std::f64::consts::FRAC_PI_2, std::f64::consts::PI)?;
//! assert!((-0.5..=1.8660254038).contains(&w));
//! # Ok::<(), qcavity::Error>(())
//! ```
//!
//! Module map:
//!
//! * [`algebra`] — deformation factor f(n), effective couplings ν₁, ν₂, the
//!   Rabi frequency μ(n), coherent-state amplitudes.
//! * [`state`] — atomic presets, coherent field preparation, projection onto
//!   the excitation-block ansatz.
//! * [`dynamics`] — block Hamiltonians, closed-form and ODE propagation, the
//!   full-space cross-check, and the transcription of the published
//!   coefficient formulas for diagnostics.
//! * [`density`] — partial traces down to two-atom and one-atom density
//!   matrices.
//! * [`wigner`] — the SU(2) multipole kernel and Wigner evaluation.
//! * [`cli`] — configuration, figure presets, and the command implementations
//!   behind the `qcavity` binary.

pub mod algebra;
pub mod cli;
pub mod density;
pub mod dynamics;
pub mod error;
pub mod state;
pub mod tol;
pub mod wigner;

pub use error::{Error, Result};
