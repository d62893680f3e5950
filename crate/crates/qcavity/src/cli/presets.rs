//! The published figure presets and their expansion into labeled curves.
//!
//! Each preset fixes the atomic state, the slice angles, the detuning and
//! the oscillator, then sweeps one parameter over the values the figure
//! plots. `kappa_d` is the dipole-dipole strength some panels label `g`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::state::AtomicPreset;

use super::config::{short, AtomicChoice, DeformationKind, Overrides, RunConfig};

/// The ten published panels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Fig1a,
    Fig1b,
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig5a,
    Fig5b,
}

impl Preset {
    pub const ALL: [Preset; 10] = [
        Preset::Fig1a,
        Preset::Fig1b,
        Preset::Fig2a,
        Preset::Fig2b,
        Preset::Fig3a,
        Preset::Fig3b,
        Preset::Fig4a,
        Preset::Fig4b,
        Preset::Fig5a,
        Preset::Fig5b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1a => "fig1a",
            Preset::Fig1b => "fig1b",
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig3a => "fig3a",
            Preset::Fig3b => "fig3b",
            Preset::Fig4a => "fig4a",
            Preset::Fig4b => "fig4b",
            Preset::Fig5a => "fig5a",
            Preset::Fig5b => "fig5b",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown preset '{s}' (expected fig1a..fig5b)")))
    }
}

/// Which field a preset sweeps across its curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Swept {
    Q,
    KappaD,
    Delta,
    Phi,
}

struct Definition {
    atomic: AtomicPreset,
    theta: f64,
    phi: f64,
    delta: f64,
    kappa_d: f64,
    /// Fixed deformation; `None` means the identity oscillator. Ignored
    /// when the preset sweeps q.
    q: Option<f64>,
    swept: Swept,
    values: &'static [f64],
}

fn definition(preset: Preset) -> Definition {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
    let (atomic, theta, phi, delta, kappa_d, q, swept, values): (
        AtomicPreset,
        f64,
        f64,
        f64,
        f64,
        Option<f64>,
        Swept,
        &'static [f64],
    ) = match preset {
        Preset::Fig1a => (
            AtomicPreset::Bell,
            FRAC_PI_2,
            PI,
            1.0,
            0.0,
            None,
            Swept::KappaD,
            &[1.0, 5.0],
        ),
        Preset::Fig1b => (
            AtomicPreset::Product,
            FRAC_PI_2,
            PI,
            1.0,
            0.0,
            None,
            Swept::KappaD,
            &[1.0, 5.0],
        ),
        Preset::Fig2a => (
            AtomicPreset::Bell,
            FRAC_PI_2,
            PI,
            1.0,
            5.0,
            None,
            Swept::Q,
            &[0.1, 0.4, 0.8],
        ),
        Preset::Fig2b => (
            AtomicPreset::Product,
            FRAC_PI_2,
            PI,
            1.0,
            5.0,
            None,
            Swept::Q,
            &[0.1, 0.4, 0.8],
        ),
        Preset::Fig3a => (
            AtomicPreset::Bell,
            FRAC_PI_2,
            PI,
            1.0,
            0.0,
            Some(0.1),
            Swept::KappaD,
            &[1.0, 5.0, 10.0],
        ),
        Preset::Fig3b => (
            AtomicPreset::Product,
            FRAC_PI_2,
            PI,
            1.0,
            0.0,
            Some(0.1),
            Swept::KappaD,
            &[1.0, 5.0, 10.0],
        ),
        Preset::Fig4a => (
            AtomicPreset::Bell,
            FRAC_PI_4,
            0.0,
            1.0,
            5.0,
            Some(0.1),
            Swept::Phi,
            &[FRAC_PI_4, FRAC_PI_2, PI],
        ),
        Preset::Fig4b => (
            AtomicPreset::Bell,
            FRAC_PI_4,
            0.0,
            1.0,
            5.0,
            Some(0.8),
            Swept::Phi,
            &[FRAC_PI_4, FRAC_PI_2, PI],
        ),
        Preset::Fig5a => (
            AtomicPreset::Bell,
            FRAC_PI_2,
            PI,
            0.0,
            5.0,
            Some(0.1),
            Swept::Delta,
            &[1.0, 5.0, 10.0],
        ),
        Preset::Fig5b => (
            AtomicPreset::Product,
            FRAC_PI_2,
            PI,
            0.0,
            5.0,
            Some(0.1),
            Swept::Delta,
            &[1.0, 5.0, 10.0],
        ),
    };
    Definition {
        atomic,
        theta,
        phi,
        delta,
        kappa_d,
        q,
        swept,
        values,
    }
}

/// Expands a preset into labeled single-curve configs. Explicit flag
/// overrides win over preset-determined fields and come back as warnings;
/// overriding the swept field collapses the preset to one curve.
pub fn expand(
    preset: Preset,
    base: &RunConfig,
    ov: &Overrides,
) -> (Vec<(String, RunConfig)>, Vec<String>) {
    let def = definition(preset);
    let mut warnings = Vec::new();
    let mut warn = |flag: &str| {
        warnings.push(format!(
            "--{flag} overrides the {preset} preset value",
            preset = preset.name()
        ));
    };

    let mut cfg = base.clone();
    cfg.preset = Some(preset);
    ov.apply_free_fields(&mut cfg);

    cfg.atomic = AtomicChoice::Preset(def.atomic);
    if let Some(a) = &ov.atomic {
        warn("atomic");
        cfg.atomic = a.clone();
    }
    cfg.theta = def.theta;
    if let Some(t) = ov.theta {
        warn("theta");
        cfg.theta = t;
    }
    if def.swept != Swept::Phi {
        cfg.phi = def.phi;
        if let Some(p) = ov.phi {
            warn("phi");
            cfg.phi = p;
        }
    }
    if def.swept != Swept::Delta {
        cfg.delta = def.delta;
        if let Some(d) = ov.delta {
            warn("delta");
            cfg.delta = d;
        }
    }
    if def.swept != Swept::KappaD {
        cfg.kappa_d = def.kappa_d;
        if let Some(k) = ov.kappa_d {
            warn("kappa-d");
            cfg.kappa_d = k;
        }
    }
    if def.swept != Swept::Q {
        match def.q {
            Some(q) => {
                cfg.deformation = DeformationKind::QDeformed;
                cfg.q = Some(q);
            }
            None => {
                cfg.deformation = DeformationKind::Identity;
                cfg.q = None;
            }
        }
        if let Some(kind) = ov.deformation {
            warn("deformation");
            cfg.deformation = kind;
            if kind == DeformationKind::Identity {
                cfg.q = None;
            }
        }
        if let Some(q) = ov.q {
            warn("q");
            cfg.deformation = DeformationKind::QDeformed;
            cfg.q = Some(q);
        }
    }

    let curve = |cfg: &RunConfig, field: Swept, v: f64| -> (String, RunConfig) {
        let mut c = cfg.clone();
        let label = match field {
            Swept::Q => {
                c.deformation = DeformationKind::QDeformed;
                c.q = Some(v);
                format!("q={}", short(v))
            }
            Swept::KappaD => {
                c.kappa_d = v;
                format!("kappa_d={}", short(v))
            }
            Swept::Delta => {
                c.delta = v;
                format!("delta={}", short(v))
            }
            Swept::Phi => {
                c.phi = v;
                format!("phi={}", short(v))
            }
        };
        (label, c)
    };

    let overridden_swept: Option<f64> = match def.swept {
        Swept::Q => {
            if ov.deformation == Some(DeformationKind::Identity) {
                // An identity override on a q-swept preset cancels the sweep.
                warn("deformation");
                cfg.deformation = DeformationKind::Identity;
                cfg.q = None;
                let label = "identity".to_string();
                return (vec![(label, cfg)], warnings);
            }
            ov.q.inspect(|_| warn("q"))
        }
        Swept::KappaD => ov.kappa_d.inspect(|_| warn("kappa-d")),
        Swept::Delta => ov.delta.inspect(|_| warn("delta")),
        Swept::Phi => ov.phi.inspect(|_| warn("phi")),
    };

    let curves = match overridden_swept {
        Some(v) => vec![curve(&cfg, def.swept, v)],
        None => def
            .values
            .iter()
            .map(|&v| curve(&cfg, def.swept, v))
            .collect(),
    };
    (curves, warnings)
}
