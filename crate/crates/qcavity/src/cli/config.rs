//! Run configuration: defaults, the flat key-value file format, and assembly
//! into simulation inputs.
//!
//! The file format is one `key = value` per line, `#` starts a comment,
//! complex numbers are written `re+imi` (for example `5+0i`). Serializing a
//! config and re-parsing it reproduces the config exactly; floats are written
//! with Rust's shortest round-trip formatting.

use std::collections::HashSet;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;

use crate::algebra::{DeformationSpec, SystemParams};
use crate::dynamics::Method;
use crate::error::{Error, Result};
use crate::state::{
    atomic_preset, make_joint_state, make_joint_state_renormalized, AtomicInit, AtomicPreset,
    FieldInit, JointState,
};

use super::presets::Preset;

type C64 = Complex64;

/// Which oscillator the cavity mode uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeformationKind {
    Identity,
    QDeformed,
}

impl DeformationKind {
    pub fn name(self) -> &'static str {
        match self {
            DeformationKind::Identity => "identity",
            DeformationKind::QDeformed => "q-deformed",
        }
    }
}

impl FromStr for DeformationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "identity" => Ok(DeformationKind::Identity),
            "q-deformed" | "q_deformed" => Ok(DeformationKind::QDeformed),
            other => Err(Error::Config(format!(
                "unknown deformation '{other}' (expected identity or q-deformed)"
            ))),
        }
    }
}

/// Atomic initial state: a named preset or an explicit amplitude quadruple
/// on (|1,1>, |1,0>, |0,1>, |0,0>).
#[derive(Clone, Debug, PartialEq)]
pub enum AtomicChoice {
    Preset(AtomicPreset),
    Explicit([C64; 4]),
}

impl AtomicChoice {
    pub fn name(&self) -> &'static str {
        match self {
            AtomicChoice::Preset(p) => p.name(),
            AtomicChoice::Explicit(_) => "explicit",
        }
    }
}

/// Parses `bell` style preset names or a comma-separated complex quadruple.
pub fn parse_atomic(s: &str) -> Result<AtomicChoice> {
    if s.contains(',') {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Config(format!(
                "atomic quadruple needs exactly 4 amplitudes, got {}",
                parts.len()
            )));
        }
        let mut amps = [C64::new(0.0, 0.0); 4];
        for (slot, part) in amps.iter_mut().zip(&parts) {
            *slot = parse_complex(part)?;
        }
        Ok(AtomicChoice::Explicit(amps))
    } else {
        Ok(AtomicChoice::Preset(AtomicPreset::from_str(s)?))
    }
}

/// One fully resolved run. Field defaults follow the published figures:
/// λ = 1, α = 5, the equal-angle slice (θ, φ) = (π/2, π), and 2000 samples
/// over λt ∈ [0, 50].
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub preset: Option<Preset>,
    pub deformation: DeformationKind,
    pub q: Option<f64>,
    pub lambda: f64,
    pub kappa_d: f64,
    pub delta: f64,
    pub alpha: C64,
    pub n_max: Option<usize>,
    pub atomic: AtomicChoice,
    pub theta: f64,
    pub phi: f64,
    pub t_max: f64,
    pub samples: usize,
    pub method: Method,
    pub renormalize: bool,
    pub include_remainder: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            preset: None,
            deformation: DeformationKind::Identity,
            q: None,
            lambda: 1.0,
            kappa_d: 0.0,
            delta: 0.0,
            alpha: C64::new(5.0, 0.0),
            n_max: None,
            atomic: AtomicChoice::Preset(AtomicPreset::Bell),
            theta: std::f64::consts::FRAC_PI_2,
            phi: std::f64::consts::PI,
            t_max: 50.0,
            samples: 2000,
            method: Method::Closed,
            renormalize: false,
            include_remainder: false,
        }
    }
}

impl RunConfig {
    /// Checks cross-field consistency before any numerics run.
    pub fn validate_semantics(&self) -> Result<()> {
        match (self.deformation, self.q) {
            (DeformationKind::QDeformed, None) => {
                return Err(Error::Config(
                    "deformation = q-deformed requires q".to_string(),
                ))
            }
            (DeformationKind::Identity, Some(_)) => {
                return Err(Error::Config(
                    "q is set but deformation = identity; drop q or set deformation = q-deformed"
                        .to_string(),
                ))
            }
            _ => {}
        }
        for (name, v) in [("theta", self.theta), ("phi", self.phi)] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite, got {v}")));
            }
        }
        if !self.t_max.is_finite() || self.t_max < 0.0 {
            return Err(Error::Config(format!(
                "t_max must be a nonnegative finite number, got {}",
                self.t_max
            )));
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".to_string()));
        }
        if self.samples > 1 && self.t_max == 0.0 {
            return Err(Error::Config(
                "t_max must be positive when samples > 1".to_string(),
            ));
        }
        Ok(())
    }

    pub fn deformation_spec(&self) -> Result<DeformationSpec> {
        match self.deformation {
            DeformationKind::Identity => Ok(DeformationSpec::identity()),
            DeformationKind::QDeformed => {
                let q = self.q.ok_or_else(|| {
                    Error::Config("deformation = q-deformed requires q".to_string())
                })?;
                DeformationSpec::q_deformed(q)
            }
        }
    }

    pub fn system_params(&self) -> Result<SystemParams> {
        SystemParams::new(
            self.lambda,
            self.kappa_d,
            self.delta,
            self.deformation_spec()?,
        )
    }

    pub fn atomic_init(&self) -> Result<AtomicInit> {
        match &self.atomic {
            AtomicChoice::Preset(p) => Ok(atomic_preset(*p)),
            AtomicChoice::Explicit(amps) => AtomicInit::new(*amps),
        }
    }

    pub fn field_init(&self) -> Result<FieldInit> {
        match self.n_max {
            Some(n) => FieldInit::with_n_max(self.alpha, n),
            None => FieldInit::auto(self.alpha),
        }
    }

    pub fn initial_state(&self) -> Result<JointState> {
        let atomic = self.atomic_init()?;
        let field = self.field_init()?;
        Ok(if self.renormalize {
            make_joint_state_renormalized(&atomic, &field)
        } else {
            make_joint_state(&atomic, &field)
        })
    }

    /// Uniform λt grid from 0 to `t_max` with `samples` points.
    pub fn time_grid(&self) -> Result<Vec<f64>> {
        self.validate_semantics()?;
        if self.samples == 1 {
            return Ok(vec![0.0]);
        }
        let last = (self.samples - 1) as f64;
        Ok((0..self.samples)
            .map(|i| self.t_max * i as f64 / last)
            .collect())
    }

    /// Serializes to the config-file format; `from_config_str` inverts this
    /// exactly.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        out.push_str("# qcavity run configuration\n");
        if let Some(p) = self.preset {
            out.push_str(&format!("preset = {}\n", p.name()));
        }
        out.push_str(&format!("deformation = {}\n", self.deformation.name()));
        if let Some(q) = self.q {
            out.push_str(&format!("q = {q}\n"));
        }
        out.push_str(&format!("lambda = {}\n", self.lambda));
        out.push_str(&format!("kappa_d = {}\n", self.kappa_d));
        out.push_str(&format!("delta = {}\n", self.delta));
        out.push_str(&format!("alpha = {}\n", fmt_complex(self.alpha)));
        if let Some(n) = self.n_max {
            out.push_str(&format!("n_max = {n}\n"));
        }
        out.push_str(&format!("atomic = {}\n", self.atomic.name()));
        if let AtomicChoice::Explicit(amps) = &self.atomic {
            for (i, a) in amps.iter().enumerate() {
                out.push_str(&format!("a{} = {}\n", i + 1, fmt_complex(*a)));
            }
        }
        out.push_str(&format!("theta = {}\n", self.theta));
        out.push_str(&format!("phi = {}\n", self.phi));
        out.push_str(&format!("t_max = {}\n", self.t_max));
        out.push_str(&format!("samples = {}\n", self.samples));
        out.push_str(&format!("method = {}\n", self.method.name()));
        out.push_str(&format!("renormalize = {}\n", self.renormalize));
        out.push_str(&format!("include_remainder = {}\n", self.include_remainder));
        out
    }

    pub fn from_config_str(text: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        let mut seen: HashSet<String> = HashSet::new();
        let mut atomic_name: Option<String> = None;
        let mut explicit: [Option<C64>; 4] = [None; 4];

        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "line {lineno}: expected 'key = value', got '{line}'"
                ))
            })?;
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_string()) {
                return Err(Error::Config(format!(
                    "line {lineno}: duplicate key '{key}'"
                )));
            }
            match key {
                "preset" => cfg.preset = Some(Preset::from_str(value)?),
                "deformation" => cfg.deformation = DeformationKind::from_str(value)?,
                "q" => cfg.q = Some(parse_f64(key, value)?),
                "lambda" => cfg.lambda = parse_f64(key, value)?,
                "kappa_d" => cfg.kappa_d = parse_f64(key, value)?,
                "delta" => cfg.delta = parse_f64(key, value)?,
                "alpha" => cfg.alpha = parse_complex(value)?,
                "n_max" => cfg.n_max = Some(parse_usize(key, value)?),
                "atomic" => atomic_name = Some(value.to_string()),
                "a1" => explicit[0] = Some(parse_complex(value)?),
                "a2" => explicit[1] = Some(parse_complex(value)?),
                "a3" => explicit[2] = Some(parse_complex(value)?),
                "a4" => explicit[3] = Some(parse_complex(value)?),
                "theta" => cfg.theta = parse_f64(key, value)?,
                "phi" => cfg.phi = parse_f64(key, value)?,
                "t_max" => cfg.t_max = parse_f64(key, value)?,
                "samples" => cfg.samples = parse_usize(key, value)?,
                "method" => cfg.method = Method::from_str(value)?,
                "renormalize" => cfg.renormalize = parse_bool(key, value)?,
                "include_remainder" => cfg.include_remainder = parse_bool(key, value)?,
                other => {
                    return Err(Error::Config(format!(
                        "line {lineno}: unknown key '{other}'"
                    )))
                }
            }
        }

        let has_explicit = explicit.iter().any(Option::is_some);
        match atomic_name.as_deref() {
            Some("explicit") => {
                let mut amps = [C64::new(0.0, 0.0); 4];
                for (i, slot) in explicit.iter().enumerate() {
                    amps[i] = slot.ok_or_else(|| {
                        Error::Config(format!("atomic = explicit requires a{}", i + 1))
                    })?;
                }
                cfg.atomic = AtomicChoice::Explicit(amps);
            }
            Some(name) => {
                if has_explicit {
                    return Err(Error::Config(
                        "a1..a4 are only allowed with atomic = explicit".to_string(),
                    ));
                }
                cfg.atomic = AtomicChoice::Preset(AtomicPreset::from_str(name)?);
            }
            None => {
                if has_explicit {
                    return Err(Error::Config(
                        "a1..a4 are only allowed with atomic = explicit".to_string(),
                    ));
                }
            }
        }
        Ok(cfg)
    }

    pub fn from_config_file(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)?;
        RunConfig::from_config_str(&text)
    }
}

/// CLI flag values layered on top of a config-file or default base.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub deformation: Option<DeformationKind>,
    pub q: Option<f64>,
    pub lambda: Option<f64>,
    pub kappa_d: Option<f64>,
    pub delta: Option<f64>,
    pub alpha: Option<C64>,
    pub n_max: Option<usize>,
    pub atomic: Option<AtomicChoice>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub t_max: Option<f64>,
    pub samples: Option<usize>,
    pub method: Option<Method>,
    pub renormalize: bool,
    pub include_remainder: bool,
}

impl Overrides {
    /// Fields a preset does not control; applied silently.
    pub(super) fn apply_free_fields(&self, cfg: &mut RunConfig) {
        if let Some(v) = self.lambda {
            cfg.lambda = v;
        }
        if let Some(v) = self.alpha {
            cfg.alpha = v;
        }
        if let Some(v) = self.n_max {
            cfg.n_max = Some(v);
        }
        if let Some(v) = self.t_max {
            cfg.t_max = v;
        }
        if let Some(v) = self.samples {
            cfg.samples = v;
        }
        if let Some(v) = self.method {
            cfg.method = v;
        }
        if self.renormalize {
            cfg.renormalize = true;
        }
        if self.include_remainder {
            cfg.include_remainder = true;
        }
    }

    /// Everything, for preset-free runs.
    pub(super) fn apply_all(&self, cfg: &mut RunConfig) {
        self.apply_free_fields(cfg);
        if let Some(v) = self.deformation {
            cfg.deformation = v;
        }
        if let Some(v) = self.q {
            cfg.q = Some(v);
            if self.deformation.is_none() {
                cfg.deformation = DeformationKind::QDeformed;
            }
        }
        if let Some(v) = self.kappa_d {
            cfg.kappa_d = v;
        }
        if let Some(v) = self.delta {
            cfg.delta = v;
        }
        if let Some(v) = &self.atomic {
            cfg.atomic = v.clone();
        }
        if let Some(v) = self.theta {
            cfg.theta = v;
        }
        if let Some(v) = self.phi {
            cfg.phi = v;
        }
    }
}

fn parse_f64(key: &str, s: &str) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse {key} = '{s}' as a number")))?;
    if !v.is_finite() {
        return Err(Error::Config(format!("{key} must be finite, got {s}")));
    }
    Ok(v)
}

fn parse_usize(key: &str, s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::Config(format!("cannot parse {key} = '{s}' as an integer")))
}

fn parse_bool(key: &str, s: &str) -> Result<bool> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(Error::Config(format!(
            "cannot parse {key} = '{other}' as true/false"
        ))),
    }
}

/// Parses `re+imi` (also plain `re` or `imi`) complex literals.
pub fn parse_complex(s: &str) -> Result<C64> {
    let c = C64::from_str(s.trim()).map_err(|_| {
        Error::Config(format!(
            "cannot parse complex number '{s}' (expected re+imi)"
        ))
    })?;
    if !c.re.is_finite() || !c.im.is_finite() {
        return Err(Error::Config(format!(
            "complex number '{s}' must be finite"
        )));
    }
    Ok(c)
}

/// `re+imi` form with negative zeros normalized away so it always re-parses.
pub fn fmt_complex(c: C64) -> String {
    let re = if c.re == 0.0 { 0.0 } else { c.re };
    let im = if c.im == 0.0 { 0.0 } else { c.im };
    if im < 0.0 {
        format!("{}-{}i", re, -im)
    } else {
        format!("{re}+{im}i")
    }
}

/// Compact value formatting for curve labels and file names.
pub(super) fn short(v: f64) -> String {
    let s = format!("{v:.6}");
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    if trimmed.is_empty() || trimmed == "-" {
        "0".to_string()
    } else {
        trimmed.to_string()
    }
}

pub(super) fn short_complex(c: C64) -> String {
    if c.im == 0.0 {
        short(c.re)
    } else if c.im < 0.0 {
        format!("{}-{}i", short(c.re), short(-c.im))
    } else {
        format!("{}+{}i", short(c.re), short(c.im))
    }
}
