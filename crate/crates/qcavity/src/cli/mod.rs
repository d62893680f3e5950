//! Command-line front end: figure presets, parameter sweeps, validation
//! reports, and data export.
//!
//! Subcommands: `simulate` (CSV curves plus JSON sidecars), `sweep` (one
//! labeled curve per value), `validate` (JSON invariant report), and
//! `dump-rho` (density-matrix snapshots). Exit status is 0 on success, 1 on
//! a usage error, 2 on a validation failure.

mod commands;
mod config;
mod presets;
mod validate;

pub use config::{
    fmt_complex, parse_atomic, parse_complex, AtomicChoice, DeformationKind, Overrides, RunConfig,
};
pub use presets::{expand as expand_preset, Preset};
pub use validate::{CheckResult, PresetDeviation, PrintedRhoNote, ValidationReport};

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::dynamics::Method;
use crate::error::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "qcavity",
    version,
    about = "Two two-level atoms in a q-deformed cavity: evolve the joint state and map the equal-angle Wigner distribution"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve one configuration (or a figure preset) and write W(theta,phi)
    /// time series as CSV with a JSON metadata sidecar
    Simulate(SimulateArgs),
    /// Evolve one curve per swept parameter value
    Sweep(SweepArgs),
    /// Run the invariant battery and emit a machine-readable JSON report
    Validate(ValidateArgs),
    /// Export reduced density matrices as JSON (row-major complex pairs)
    DumpRho(DumpRhoArgs),
}

/// Flags shared by every subcommand; each mirrors a RunConfig field and
/// overrides the config file and any preset (with a warning for
/// preset-determined fields).
#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// Figure preset: fig1a..fig5b
    #[arg(long)]
    preset: Option<String>,
    /// Deformation parameter q in (0,1); implies the q-deformed oscillator
    #[arg(long)]
    q: Option<f64>,
    /// Oscillator kind: identity | q-deformed
    #[arg(long)]
    deformation: Option<String>,
    /// Dipole-dipole strength (the figures' kappa_d, labeled g in some panels)
    #[arg(long)]
    kappa_d: Option<f64>,
    /// Detuning delta
    #[arg(long)]
    delta: Option<f64>,
    /// Atom-field coupling lambda (times are reported as lambda*t)
    #[arg(long)]
    lambda: Option<f64>,
    /// Coherent field amplitude, e.g. 5+0i
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Fock cutoff; omitted means automatic from the coherent tail bound
    #[arg(long)]
    n_max: Option<usize>,
    /// bell | product | excited, or four comma-separated complex amplitudes
    #[arg(long, allow_hyphen_values = true)]
    atomic: Option<String>,
    /// Polar angle of the equal-angle slice, radians
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Azimuthal angle of the equal-angle slice, radians
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    /// End of the time grid in lambda*t units
    #[arg(long)]
    t_max: Option<f64>,
    /// Number of grid samples
    #[arg(long)]
    samples: Option<usize>,
    /// Evolution method: closed | ode
    #[arg(long)]
    method: Option<String>,
    /// Rescale the in-manifold amplitudes to unit norm
    #[arg(long)]
    renormalize: bool,
    /// Fold the frozen remainder amplitudes into the reduction
    #[arg(long)]
    include_remainder: bool,
    /// Load a key = value config file first; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Output CSV path (stem for multi-curve presets); stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write per-sample density matrices to this JSON path
    #[arg(long, value_name = "PATH")]
    dump_rho: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Parameter to sweep: q | kappa_d | delta | theta | phi | alpha
    #[arg(long)]
    param: String,
    /// Comma-separated values, e.g. 0.1,0.4,0.8
    #[arg(long, allow_hyphen_values = true)]
    values: String,
    /// Output CSV stem; also receives the shared JSON sidecar
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Report path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Corrupt one matrix on purpose to prove the battery catches it
    #[arg(long)]
    inject_defect: bool,
}

#[derive(Args, Debug)]
struct DumpRhoArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Snapshot time in lambda*t units
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    t: f64,
    /// Output JSON path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn to_overrides(&self) -> Result<Overrides> {
        Ok(Overrides {
            deformation: self
                .deformation
                .as_deref()
                .map(DeformationKind::from_str)
                .transpose()?,
            q: self.q,
            lambda: self.lambda,
            kappa_d: self.kappa_d,
            delta: self.delta,
            alpha: self.alpha.as_deref().map(parse_complex).transpose()?,
            n_max: self.n_max,
            atomic: self.atomic.as_deref().map(parse_atomic).transpose()?,
            theta: self.theta,
            phi: self.phi,
            t_max: self.t_max,
            samples: self.samples,
            method: self.method.as_deref().map(Method::from_str).transpose()?,
            renormalize: self.renormalize,
            include_remainder: self.include_remainder,
        })
    }

    fn base_config(&self) -> Result<RunConfig> {
        match &self.config {
            Some(path) => RunConfig::from_config_file(path),
            None => Ok(RunConfig::default()),
        }
    }

    fn preset(&self, base: &RunConfig) -> Result<Option<Preset>> {
        match &self.preset {
            Some(s) => Ok(Some(Preset::from_str(s)?)),
            None => Ok(base.preset),
        }
    }

    /// Resolves flags, config file, and preset into labeled curve configs.
    /// Warnings go to stderr.
    fn resolve(&self) -> Result<Vec<(Option<String>, RunConfig)>> {
        let base = self.base_config()?;
        let overrides = self.to_overrides()?;
        match self.preset(&base)? {
            Some(p) => {
                let (curves, warnings) = presets::expand(p, &base, &overrides);
                for w in warnings {
                    eprintln!("warning: {w}");
                }
                Ok(curves.into_iter().map(|(l, c)| (Some(l), c)).collect())
            }
            None => {
                let mut cfg = base;
                overrides.apply_all(&mut cfg);
                cfg.preset = None;
                Ok(vec![(None, cfg)])
            }
        }
    }
}

impl Cli {
    pub fn execute(self) -> Result<i32> {
        match self.command {
            Command::Simulate(args) => commands::simulate(args),
            Command::Sweep(args) => commands::sweep(args),
            Command::Validate(args) => validate::run(args),
            Command::DumpRho(args) => commands::dump_rho(args),
        }
    }
}

/// Residuals above tolerance are validation failures (exit 2); everything
/// else that goes wrong is a usage problem (exit 1).
fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::SpectralIdentity { .. }
        | Error::NonRealWigner { .. }
        | Error::NonHermitian { .. }
        | Error::StepSizeUnderflow { .. }
        | Error::CutoffMismatch { .. }
        | Error::DegenerateBlock { .. } => 2,
        _ => 1,
    }
}

/// Binary entry point; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match cli.execute() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}
