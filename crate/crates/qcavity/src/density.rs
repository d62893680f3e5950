//! Partial traces: joint state → two-atom ρ_AB → single-atom ρ_A.
//!
//! Tracing |ψ⟩⟨ψ| over the Fock index must pair amplitudes at the *same*
//! photon number, and the four block components live at staggered photon
//! numbers (n, n+1, n+1, n+2). The sums below therefore carry explicit
//! offsets: e.g. ⟨1,1|ρ|1,0⟩ = Σ_n C₁^{n+1}(C₂ⁿ)* pairs C₁ at photon n+1
//! with C₂ at the same photon n+1. Getting one of these offsets wrong still
//! yields a Hermitian, unit-trace matrix, which is why the tests lean on the
//! independent full-space reduction instead of internal consistency alone.
//!
//! The frozen low-excitation remainder is excluded by default (the ansatz
//! convention); [`reduce_to_atoms_with_remainder`] folds it in, after which
//! the trace accounts for the norm deficit as well.

use nalgebra::{DVector, Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::JointState;
use crate::tol;

type C64 = Complex64;

/// Two-atom density matrix on the ordered basis (|1,1⟩, |1,0⟩, |0,1⟩, |0,0⟩).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix4 {
    m: Matrix4<C64>,
}

/// Single-atom density matrix on the ordered basis (|1⟩, |0⟩).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix2 {
    m: Matrix2<C64>,
}

fn hermiticity_residual4(m: &Matrix4<C64>) -> f64 {
    let d = m - m.adjoint();
    d.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

impl DensityMatrix4 {
    /// Validates Hermiticity (residual ≤ 1e−12). Positivity is a statement
    /// about eigenvalues and is checked where it matters, not at every
    /// construction.
    pub fn from_matrix(m: Matrix4<C64>) -> Result<Self> {
        let residual = hermiticity_residual4(&m);
        if residual > tol::HERMITICITY {
            return Err(Error::NonHermitian { residual });
        }
        Ok(DensityMatrix4 { m })
    }

    /// Skips validation; for matrices Hermitian by construction and for
    /// deliberately corrupted negative controls.
    pub fn from_matrix_unchecked(m: Matrix4<C64>) -> Self {
        DensityMatrix4 { m }
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.m
    }

    /// Real trace. For a valid density matrix the imaginary part is zero by
    /// Hermiticity.
    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    /// trace(ρ²), real for Hermitian ρ.
    pub fn purity(&self) -> f64 {
        (self.m * self.m).trace().re
    }

    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual4(&self.m)
    }

    /// Smallest eigenvalue; ≥ −1e−10 for any physically produced ρ.
    pub fn min_eigenvalue(&self) -> f64 {
        self.m
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b))
    }
}

impl DensityMatrix2 {
    pub fn from_matrix(m: Matrix2<C64>) -> Result<Self> {
        let d = m - m.adjoint();
        let residual = d.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if residual > tol::HERMITICITY {
            return Err(Error::NonHermitian { residual });
        }
        Ok(DensityMatrix2 { m })
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn purity(&self) -> f64 {
        (self.m * self.m).trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.m
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b))
    }
}

/// ρ_AB from the blocks alone (remainder excluded; its weight is the gap
/// between trace(ρ) and 1).
pub fn reduce_to_atoms(state: &JointState) -> DensityMatrix4 {
    reduce(state, false)
}

/// ρ_AB with the frozen remainder folded in.
pub fn reduce_to_atoms_with_remainder(state: &JointState) -> DensityMatrix4 {
    reduce(state, true)
}

fn reduce(state: &JointState, include_remainder: bool) -> DensityMatrix4 {
    let blocks = state.blocks();
    let z = C64::new(0.0, 0.0);
    let mut d = [0.0f64; 4]; // diagonal, real by construction
    let mut r01 = z; // <1,1|rho|1,0> = sum C1^{n+1} (C2^n)*
    let mut r02 = z; // <1,1|rho|0,1> = sum C1^{n+1} (C3^n)*
    let mut r03 = z; // <1,1|rho|0,0> = sum C1^{n+2} (C4^n)*
    let mut r12 = z; // <1,0|rho|0,1> = sum C2^n (C3^n)*
    let mut r13 = z; // <1,0|rho|0,0> = sum C2^{n+1} (C4^n)*
    let mut r23 = z; // <0,1|rho|0,0> = sum C3^{n+1} (C4^n)*

    let last = blocks.len() - 1;
    for (n, b) in blocks.iter().enumerate() {
        d[0] += b[0].norm_sqr();
        d[1] += b[1].norm_sqr();
        d[2] += b[2].norm_sqr();
        d[3] += b[3].norm_sqr();
        r12 += b[1] * b[2].conj();
        if n < last {
            let up = &blocks[n + 1];
            r01 += up[0] * b[1].conj();
            r02 += up[0] * b[2].conj();
            r13 += up[1] * b[3].conj();
            r23 += up[2] * b[3].conj();
        }
        if n + 2 <= last {
            r03 += blocks[n + 2][0] * b[3].conj();
        }
    }

    if include_remainder {
        let r = state.remainder();
        d[1] += r.c10_0.norm_sqr();
        d[2] += r.c01_0.norm_sqr();
        d[3] += r.c00_0.norm_sqr() + r.c00_1.norm_sqr();
        // photon 0 pairings
        r01 += blocks[0][0] * r.c10_0.conj();
        r02 += blocks[0][0] * r.c01_0.conj();
        r03 += blocks[0][0] * r.c00_0.conj();
        r12 += r.c10_0 * r.c01_0.conj();
        r13 += r.c10_0 * r.c00_0.conj();
        r23 += r.c01_0 * r.c00_0.conj();
        // photon 1 pairings
        if last >= 1 {
            r03 += blocks[1][0] * r.c00_1.conj();
        }
        r13 += blocks[0][1] * r.c00_1.conj();
        r23 += blocks[0][2] * r.c00_1.conj();
    }

    let diag = |x: f64| C64::new(x, 0.0);
    #[rustfmt::skip]
    let m = Matrix4::new(
        diag(d[0]),  r01,         r02,         r03,
        r01.conj(),  diag(d[1]),  r12,         r13,
        r02.conj(),  r12.conj(),  diag(d[2]),  r23,
        r03.conj(),  r13.conj(),  r23.conj(),  diag(d[3]),
    );
    // Hermitian exactly: the upper triangle is mirrored by conjugation.
    DensityMatrix4::from_matrix_unchecked(m)
}

/// Trace out Bob: ρ_A(j,k) = Σ_b ρ_AB(jb, kb).
pub fn reduce_to_alice(rho: &DensityMatrix4) -> DensityMatrix2 {
    let m = rho.matrix();
    let a11 = m[(0, 0)] + m[(1, 1)];
    let a00 = m[(2, 2)] + m[(3, 3)];
    let a10 = m[(0, 2)] + m[(1, 3)];
    let m2 = Matrix2::new(a11, a10, a10.conj(), a00);
    DensityMatrix2 { m: m2 }
}

/// Direct two-subsystem partial trace of a full-space vector (basis
/// j·nfock + m with j ∈ {|1,1⟩, |1,0⟩, |0,1⟩, |0,0⟩}); the independent
/// route used to cross-check the offset bookkeeping above.
pub fn reduce_full_to_atoms(v: &DVector<C64>, nfock: usize) -> DensityMatrix4 {
    let mut m = Matrix4::zeros();
    for j in 0..4 {
        for k in 0..4 {
            let mut acc = C64::new(0.0, 0.0);
            for ph in 0..nfock {
                acc += v[j * nfock + ph] * v[k * nfock + ph].conj();
            }
            m[(j, k)] = acc;
        }
    }
    DensityMatrix4::from_matrix_unchecked(m)
}

/// Alice's marginal straight from a full-space vector.
pub fn reduce_full_to_alice(v: &DVector<C64>, nfock: usize) -> DensityMatrix2 {
    // Atomic index j = 2*(1 - a) + (1 - b) for Alice bit a, Bob bit b:
    // j in {0,1} means Alice excited.
    let mut m = Matrix2::zeros();
    for a in 0..2usize {
        for c in 0..2usize {
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..2usize {
                let j = 2 * a + b;
                let k = 2 * c + b;
                for ph in 0..nfock {
                    acc += v[j * nfock + ph] * v[k * nfock + ph].conj();
                }
            }
            m[(a, c)] = acc;
        }
    }
    DensityMatrix2 { m }
}
