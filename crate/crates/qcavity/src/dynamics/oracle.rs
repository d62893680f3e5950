//! Dense full-space cross-check propagator.
//!
//! Assembles the interaction Hamiltonian on the whole truncated product
//! space (two qubits × Fock levels 0..n_max+2, dimension 4·(n_max+3)),
//! including the low-excitation states the block ansatz cannot represent,
//! and exponentiates it through a Hermitian eigendecomposition. This path
//! shares no code with the block construction beyond the scalar coupling
//! function, so agreement between the two is a real cross-validation.
//!
//! Basis index: j·nfock + m, with j ∈ {0:|1,1⟩, 1:|1,0⟩, 2:|0,1⟩, 3:|0,0⟩}
//! and m the photon number.

use nalgebra::{DMatrix, DVector, Vector4};
use num_complex::Complex64;

use crate::algebra::{coupling_nu, SystemParams};
use crate::error::{Error, Result};
use crate::state::{JointState, Remainder};
use crate::tol;

type C64 = Complex64;

/// Excitation count of atomic basis state j (number of excited atoms).
const ATOM_EXCITATION: [usize; 4] = [2, 1, 1, 0];

fn idx(j: usize, m: usize, nfock: usize) -> usize {
    j * nfock + m
}

/// The full interaction Hamiltonian on 4·nfock dimensions.
///
/// Every single-flip transition taking photon m to m+1 carries the coupling
/// λ·f(m+1)·√(m+1); the diagonal holds ±δ on the singly excited states and
/// the dipole exchange contributes the conjugate pair ±iκ_d between them.
pub fn full_hamiltonian(params: &SystemParams, nfock: usize) -> DMatrix<C64> {
    let dim = 4 * nfock;
    let mut h = DMatrix::zeros(dim, dim);
    let delta = C64::new(params.delta(), 0.0);
    let ik = C64::new(0.0, params.kappa_d());
    for m in 0..nfock {
        h[(idx(1, m, nfock), idx(1, m, nfock))] = delta;
        h[(idx(2, m, nfock), idx(2, m, nfock))] = -delta;
        h[(idx(1, m, nfock), idx(2, m, nfock))] = ik;
        h[(idx(2, m, nfock), idx(1, m, nfock))] = -ik;
    }
    for m in 0..nfock - 1 {
        // coupling_nu(m, 1, _) = lambda f(m+1) sqrt(m+1)
        let g = C64::new(coupling_nu(m, 1, params), 0.0);
        for (hi, lo) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            let a = idx(hi, m, nfock);
            let b = idx(lo, m + 1, nfock);
            h[(a, b)] = g;
            h[(b, a)] = g;
        }
    }
    h
}

/// Flattens blocks + remainder into the full-space vector.
pub fn assemble_full_vector(state: &JointState) -> DVector<C64> {
    let n_max = state.n_max();
    let nfock = n_max + 3;
    let mut v = DVector::zeros(4 * nfock);
    for (n, b) in state.blocks().iter().enumerate() {
        v[idx(0, n, nfock)] = b[0];
        v[idx(1, n + 1, nfock)] = b[1];
        v[idx(2, n + 1, nfock)] = b[2];
        v[idx(3, n + 2, nfock)] = b[3];
    }
    let r = state.remainder();
    v[idx(1, 0, nfock)] = r.c10_0;
    v[idx(2, 0, nfock)] = r.c01_0;
    v[idx(3, 0, nfock)] = r.c00_0;
    v[idx(3, 1, nfock)] = r.c00_1;
    v
}

/// Reads blocks + remainder back out of a full-space vector.
///
/// The two topmost |1,1,m⟩ slots (m = n_max+1, n_max+2) belong to manifolds
/// the initial data never populates; whatever numerical dust lands there is
/// dropped.
pub fn project_full_vector(v: &DVector<C64>, n_max: usize) -> (Vec<Vector4<C64>>, Remainder) {
    let nfock = n_max + 3;
    let blocks = (0..=n_max)
        .map(|n| {
            Vector4::new(
                v[idx(0, n, nfock)],
                v[idx(1, n + 1, nfock)],
                v[idx(2, n + 1, nfock)],
                v[idx(3, n + 2, nfock)],
            )
        })
        .collect();
    let remainder = Remainder {
        c10_0: v[idx(1, 0, nfock)],
        c01_0: v[idx(2, 0, nfock)],
        c00_0: v[idx(3, 0, nfock)],
        c00_1: v[idx(3, 1, nfock)],
    };
    (blocks, remainder)
}

/// ⟨N̂⟩ of a full-space vector: photon number plus excited-atom count.
pub fn excitation_expectation(v: &DVector<C64>, nfock: usize) -> f64 {
    let mut total = 0.0;
    for j in 0..4 {
        for m in 0..nfock {
            total += v[idx(j, m, nfock)].norm_sqr() * (ATOM_EXCITATION[j] + m) as f64;
        }
    }
    total
}

/// Cached eigendecomposition of the full Hamiltonian; amortizes the O(dim³)
/// factorization across many evolution times.
#[derive(Clone, Debug)]
pub struct FullPropagator {
    n_max: usize,
    nfock: usize,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<C64>,
}

impl FullPropagator {
    pub fn new(params: &SystemParams, n_max: usize) -> Result<Self> {
        let nfock = n_max + 3;
        let dim = 4 * nfock;
        if dim > tol::ORACLE_DIM_CAP {
            return Err(Error::OracleTooLarge {
                dim,
                cap: tol::ORACLE_DIM_CAP,
            });
        }
        let h = full_hamiltonian(params, nfock);
        let eig = h.symmetric_eigen();
        Ok(FullPropagator {
            n_max,
            nfock,
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn dim(&self) -> usize {
        4 * self.nfock
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// e^(−iHt)·v through the eigenbasis: V·e^(−iΛt)·V†·v.
    pub fn evolve_vector(&self, v: &DVector<C64>, t: f64) -> DVector<C64> {
        let mut w = self.eigenvectors.ad_mul(v);
        for (wi, &e) in w.iter_mut().zip(self.eigenvalues.iter()) {
            *wi *= C64::from_polar(1.0, -e * t);
        }
        &self.eigenvectors * w
    }

    /// Evolves a joint state (blocks and remainder both) to raw time t.
    pub fn evolve(&self, state: &JointState, t: f64) -> Result<JointState> {
        if state.n_max() != self.n_max {
            return Err(Error::CutoffMismatch {
                expected: self.n_max,
                got: state.n_max(),
            });
        }
        let v = assemble_full_vector(state);
        let vt = self.evolve_vector(&v, t);
        let (blocks, remainder) = project_full_vector(&vt, self.n_max);
        Ok(state.with_blocks_and_remainder(blocks, remainder))
    }
}

/// One-shot full-space evolution to raw time t.
///
/// Builds, factorizes, applies, and discards the dense Hamiltonian; use
/// [`FullPropagator`] directly when sampling many times.
pub fn full_propagator_oracle(
    state: &JointState,
    params: &SystemParams,
    t: f64,
) -> Result<JointState> {
    FullPropagator::new(params, state.n_max())?.evolve(state, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DeformationSpec;
    use crate::dynamics::{evolve_joint, Method};
    use crate::state::{atomic_preset, make_joint_state, AtomicPreset, FieldInit};

    fn test_params() -> SystemParams {
        SystemParams::new(1.0, 1.0, 1.0, DeformationSpec::q_deformed(0.4).unwrap()).unwrap()
    }

    fn bell_state(alpha: f64) -> JointState {
        let atomic = atomic_preset(AtomicPreset::Bell);
        let field = FieldInit::auto(C64::new(alpha, 0.0)).unwrap();
        make_joint_state(&atomic, &field)
    }

    #[test]
    fn hamiltonian_is_exactly_hermitian() {
        let h = full_hamiltonian(&test_params(), 12);
        assert_eq!(h, h.adjoint());
    }

    #[test]
    fn assemble_project_round_trip() {
        let s = bell_state(2.0);
        let v = assemble_full_vector(&s);
        let (blocks, remainder) = project_full_vector(&v, s.n_max());
        assert_eq!(blocks.as_slice(), s.blocks());
        assert_eq!(&remainder, s.remainder());
        // Norm carried exactly.
        assert!((v.norm_squared() - s.total_norm_sqr()).abs() < 1e-14);
    }

    #[test]
    fn evolution_at_zero_is_identity() {
        let s = bell_state(2.0);
        let out = full_propagator_oracle(&s, &test_params(), 0.0).unwrap();
        for (a, b) in out.blocks().iter().zip(s.blocks()) {
            assert!((a - b).norm() < 1e-13);
        }
        assert!((out.remainder().c00_0 - s.remainder().c00_0).norm() < 1e-13);
    }

    #[test]
    fn evolution_is_unitary_and_conserves_excitation() {
        let s = bell_state(2.0);
        let params = test_params();
        let prop = FullPropagator::new(&params, s.n_max()).unwrap();
        let v0 = assemble_full_vector(&s);
        let nfock = s.n_max() + 3;
        let n0 = excitation_expectation(&v0, nfock);
        for &t in &[0.7, 3.1, 9.5] {
            let vt = prop.evolve_vector(&v0, t);
            assert!((vt.norm() - v0.norm()).abs() < 1e-12);
            assert!(
                (excitation_expectation(&vt, nfock) - n0).abs() < 1e-10,
                "excitation drifted at t={t}"
            );
        }
    }

    #[test]
    fn blocks_match_closed_form_evolution() {
        // The ansatz subspace is exactly invariant, so the frozen-remainder
        // block evolution and the full-space evolution agree on blocks to
        // machine precision.
        let s = bell_state(2.0);
        let params = test_params();
        let t = 1.5;
        let traj = evolve_joint(&s, &params, &[0.0, t], Method::Closed).unwrap();
        let oracle = full_propagator_oracle(&s, &params, t).unwrap();
        let mut worst = 0.0f64;
        for (a, b) in traj.states()[1].blocks().iter().zip(oracle.blocks()) {
            worst = worst.max((a - b).camax());
        }
        assert!(worst < 1e-8, "sup deviation {worst:.3e}");
    }

    #[test]
    fn remainder_is_moved_by_the_full_space_only() {
        // With nonzero remainder weight (Bell at small alpha), the oracle
        // changes the remainder while the block path freezes it.
        let s = bell_state(1.0);
        let params = test_params();
        let oracle = full_propagator_oracle(&s, &params, 2.0).unwrap();
        let before = s.remainder();
        let after = oracle.remainder();
        let moved = (after.c00_1 - before.c00_1).norm() + (after.c10_0 - before.c10_0).norm();
        assert!(moved > 1e-3, "remainder did not evolve: {moved:.3e}");
        // |0,0,0> has zero excitation and is annihilated by every coupling.
        assert!((after.c00_0 - before.c00_0).norm() < 1e-13);
    }

    #[test]
    fn dimension_cap() {
        let err = FullPropagator::new(&test_params(), 1100).unwrap_err();
        assert!(matches!(err, Error::OracleTooLarge { dim: 4412, .. }));
    }

    #[test]
    fn cutoff_mismatch() {
        let s = bell_state(2.0);
        let prop = FullPropagator::new(&test_params(), s.n_max() + 5).unwrap();
        assert!(matches!(
            prop.evolve(&s, 1.0),
            Err(Error::CutoffMismatch { .. })
        ));
    }
}
