//! Initial states and the excitation-manifold decomposition.
//!
//! The joint atom-field state is stored as amplitude blocks over excitation
//! manifolds: block n holds the four amplitudes (C₁ⁿ, C₂ⁿ, C₃ⁿ, C₄ⁿ) on the
//! ordered basis (|1,1,n⟩, |1,0,n+1⟩, |0,1,n+1⟩, |0,0,n+2⟩), which the
//! interaction Hamiltonian never mixes with any other block.
//!
//! The few low-excitation components of the initial product state that no
//! block can represent (|1,0,0⟩, |0,1,0⟩, |0,0,0⟩, |0,0,1⟩) are kept as a
//! read-only remainder. The block evolution freezes them; only the full-space
//! cross-check propagator moves them. Their total weight is the norm deficit.

use nalgebra::Vector4;
use num_complex::Complex64;

use crate::algebra::{coherent_amplitudes, minimal_n_max, poisson_tail};
use crate::error::{Error, Result};
use crate::tol;

type C64 = Complex64;

/// Named initial atomic states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtomicPreset {
    /// (|1,1⟩ + |0,0⟩)/√2, the maximally entangled pair.
    Bell,
    /// Both atoms in (|0⟩ + |1⟩)/√2, i.e. amplitudes (1,1,1,1)/2.
    Product,
    /// Both atoms excited, |1,1⟩.
    Excited,
}

impl AtomicPreset {
    pub fn name(&self) -> &'static str {
        match self {
            AtomicPreset::Bell => "bell",
            AtomicPreset::Product => "product",
            AtomicPreset::Excited => "excited",
        }
    }
}

impl std::str::FromStr for AtomicPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bell" => Ok(AtomicPreset::Bell),
            "product" => Ok(AtomicPreset::Product),
            "excited" => Ok(AtomicPreset::Excited),
            other => Err(Error::Config(format!(
                "unknown atomic preset '{other}' (expected bell, product, or excited)"
            ))),
        }
    }
}

impl std::fmt::Display for AtomicPreset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Initial atomic amplitudes (a₁, a₂, a₃, a₄) on (|1,1⟩, |1,0⟩, |0,1⟩, |0,0⟩).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomicInit {
    amplitudes: [C64; 4],
    label: Option<AtomicPreset>,
}

impl AtomicInit {
    /// Validates unit normalization: Σ|aᵢ|² must be 1 within 1e−12.
    pub fn new(amplitudes: [C64; 4]) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > tol::ATOMIC_NORM {
            return Err(Error::AtomicNormalization { norm_sqr });
        }
        Ok(AtomicInit {
            amplitudes,
            label: None,
        })
    }

    pub fn amplitudes(&self) -> [C64; 4] {
        self.amplitudes
    }

    /// The preset this state came from, if any.
    pub fn label(&self) -> Option<AtomicPreset> {
        self.label
    }
}

/// The amplitudes of a named atomic preset.
pub fn atomic_preset(preset: AtomicPreset) -> AtomicInit {
    let z = C64::new(0.0, 0.0);
    let r = |x: f64| C64::new(x, 0.0);
    let amplitudes = match preset {
        AtomicPreset::Bell => {
            let s = r(std::f64::consts::FRAC_1_SQRT_2);
            [s, z, z, s]
        }
        AtomicPreset::Product => [r(0.5); 4],
        AtomicPreset::Excited => [r(1.0), z, z, z],
    };
    AtomicInit {
        amplitudes,
        label: Some(preset),
    }
}

/// Coherent field preparation: amplitude α and Fock cutoff n_max.
///
/// Valid by construction: every `FieldInit` satisfies the 1e−12 tail bound,
/// so the amplitude vector can always be materialized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldInit {
    alpha: C64,
    n_max: usize,
}

impl FieldInit {
    /// Default cutoff policy: n_max = ⌈|α|² + 10|α| + 20⌉, grown further if
    /// that somehow misses the 1e−12 tail bound.
    pub fn auto(alpha: C64) -> Result<Self> {
        let mean = alpha.norm_sqr();
        if !mean.is_finite() {
            return Err(Error::Parameter {
                name: "alpha",
                value: alpha.norm(),
                reason: "must be finite",
            });
        }
        let mut n_max = (mean + 10.0 * mean.sqrt() + 20.0).ceil() as usize;
        if poisson_tail(mean, n_max) >= tol::COHERENT_TAIL {
            n_max = minimal_n_max(mean, tol::COHERENT_TAIL);
        }
        Ok(FieldInit { alpha, n_max })
    }

    /// Explicit cutoff; rejected if the discarded tail reaches 1e−12.
    pub fn with_n_max(alpha: C64, n_max: usize) -> Result<Self> {
        // Delegate validation (cutoff >= 2, finite alpha, tail bound).
        coherent_amplitudes(alpha, n_max)?;
        Ok(FieldInit { alpha, n_max })
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// The coherent amplitudes q_0 ..= q_{n_max}.
    pub fn amplitudes(&self) -> Vec<C64> {
        coherent_amplitudes(self.alpha, self.n_max).expect("validated at construction")
    }
}

/// Low-excitation amplitudes outside every block, in the order
/// (|1,0,0⟩, |0,1,0⟩, |0,0,0⟩, |0,0,1⟩).
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Remainder {
    pub c10_0: C64,
    pub c01_0: C64,
    pub c00_0: C64,
    pub c00_1: C64,
}

impl Remainder {
    pub fn norm_sqr(&self) -> f64 {
        self.c10_0.norm_sqr()
            + self.c01_0.norm_sqr()
            + self.c00_0.norm_sqr()
            + self.c00_1.norm_sqr()
    }
}

/// How a joint state was prepared; carried along for output metadata.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateMeta {
    pub alpha: C64,
    pub atomic: [C64; 4],
    pub atomic_label: Option<AtomicPreset>,
    pub renormalized: bool,
}

/// Joint atom-field state in block form.
#[derive(Clone, Debug, PartialEq)]
pub struct JointState {
    blocks: Vec<Vector4<C64>>,
    remainder: Remainder,
    norm_deficit: f64,
    meta: StateMeta,
}

impl JointState {
    /// Largest photon index the field amplitudes were kept to; blocks run
    /// n = 0 ..= n_max.
    pub fn n_max(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn blocks(&self) -> &[Vector4<C64>] {
        &self.blocks
    }

    pub fn block(&self, n: usize) -> &Vector4<C64> {
        &self.blocks[n]
    }

    pub fn remainder(&self) -> &Remainder {
        &self.remainder
    }

    /// Weight of the initial state outside the blocks, |q₀|²(|a₂|²+|a₃|²) +
    /// (|q₀|²+|q₁|²)|a₄|². Recorded at preparation; renormalization does not
    /// rewrite it.
    pub fn norm_deficit(&self) -> f64 {
        self.norm_deficit
    }

    pub fn meta(&self) -> &StateMeta {
        &self.meta
    }

    /// Σ|Cⱼⁿ|² over all blocks.
    pub fn block_norm_sqr(&self) -> f64 {
        self.blocks.iter().map(|b| b.norm_squared()).sum()
    }

    /// Block norm plus the frozen remainder weight.
    pub fn total_norm_sqr(&self) -> f64 {
        self.block_norm_sqr() + self.remainder.norm_sqr()
    }

    /// A copy with the given evolved blocks and everything else carried over.
    pub(crate) fn with_blocks(&self, blocks: Vec<Vector4<C64>>) -> JointState {
        debug_assert_eq!(blocks.len(), self.blocks.len());
        JointState {
            blocks,
            remainder: self.remainder,
            norm_deficit: self.norm_deficit,
            meta: self.meta,
        }
    }

    /// Rebuild with an explicitly evolved remainder (full-space oracle only).
    pub(crate) fn with_blocks_and_remainder(
        &self,
        blocks: Vec<Vector4<C64>>,
        remainder: Remainder,
    ) -> JointState {
        debug_assert_eq!(blocks.len(), self.blocks.len());
        JointState {
            blocks,
            remainder,
            norm_deficit: self.norm_deficit,
            meta: self.meta,
        }
    }
}

/// Project the initial product state |atomic⟩ ⊗ |α⟩ onto the block ansatz.
///
/// Block n receives (q_n·a₁, q_{n+1}·a₂, q_{n+1}·a₃, q_{n+2}·a₄), with q_m
/// taken as 0 beyond the cutoff; the four unrepresentable low-excitation
/// components (q₀a₂, q₀a₃, q₀a₄, q₁a₄) land in the remainder. Amplitudes are
/// not rescaled: the block norm at t = 0 is 1 minus the deficit, matching
/// the convention the closed-form solution assumes. See
/// [`make_joint_state_renormalized`] for the rescaled variant.
pub fn make_joint_state(atomic: &AtomicInit, field: &FieldInit) -> JointState {
    build_joint_state(atomic, field, false)
}

/// [`make_joint_state`] followed by dividing every block amplitude by
/// √(1 − deficit), for quantifying the impact of the frozen remainder.
pub fn make_joint_state_renormalized(atomic: &AtomicInit, field: &FieldInit) -> JointState {
    build_joint_state(atomic, field, true)
}

fn build_joint_state(atomic: &AtomicInit, field: &FieldInit, renormalize: bool) -> JointState {
    let [a1, a2, a3, a4] = atomic.amplitudes();
    let q = field.amplitudes();
    let n_max = field.n_max();
    let qn = |m: usize| if m <= n_max { q[m] } else { C64::new(0.0, 0.0) };

    let mut blocks = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        blocks.push(Vector4::new(
            qn(n) * a1,
            qn(n + 1) * a2,
            qn(n + 1) * a3,
            qn(n + 2) * a4,
        ));
    }
    let remainder = Remainder {
        c10_0: q[0] * a2,
        c01_0: q[0] * a3,
        c00_0: q[0] * a4,
        c00_1: qn(1) * a4,
    };
    let q0 = q[0].norm_sqr();
    let q1 = qn(1).norm_sqr();
    let norm_deficit = q0 * (a2.norm_sqr() + a3.norm_sqr()) + (q0 + q1) * a4.norm_sqr();

    if renormalize {
        let scale = C64::new(1.0 / (1.0 - norm_deficit).sqrt(), 0.0);
        for b in &mut blocks {
            *b *= scale;
        }
    }

    JointState {
        blocks,
        remainder,
        norm_deficit,
        meta: StateMeta {
            alpha: field.alpha(),
            atomic: atomic.amplitudes(),
            atomic_label: atomic.label(),
            renormalized: renormalize,
        },
    }
}
