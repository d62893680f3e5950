//! The simulate, sweep, and dump-rho subcommands and their file output.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::density::{
    reduce_to_alice, reduce_to_atoms, reduce_to_atoms_with_remainder, DensityMatrix2,
    DensityMatrix4,
};
use crate::dynamics::{evolve_joint, Trajectory};
use crate::error::{Error, Result};
use crate::state::JointState;
use crate::wigner::{wigner_series_with, SeriesMetadata, WignerSeries};

use super::config::{short_complex, RunConfig};
use super::{parse_complex, DeformationKind, DumpRhoArgs, SimulateArgs, SweepArgs};

/// One evolved curve with everything later stages need.
struct CurveRun {
    label: Option<String>,
    config: RunConfig,
    traj: Trajectory,
    series: WignerSeries,
}

fn run_curve(label: Option<String>, cfg: &RunConfig, grid: &[f64]) -> Result<CurveRun> {
    cfg.validate_semantics()?;
    let params = cfg.system_params()?;
    let state = cfg.initial_state()?;
    let traj = evolve_joint(&state, &params, grid, cfg.method)?;
    let mut series = wigner_series_with(&traj, cfg.theta, cfg.phi, cfg.include_remainder)?;
    series.metadata_mut().preset = cfg.preset.map(|p| p.name().to_string());
    series.metadata_mut().curve = label.clone();
    Ok(CurveRun {
        label,
        config: cfg.clone(),
        traj,
        series,
    })
}

fn run_curves(curves: &[(Option<String>, RunConfig)]) -> Result<Vec<CurveRun>> {
    curves
        .iter()
        .map(|(label, cfg)| {
            let grid = cfg.time_grid()?;
            run_curve(label.clone(), cfg, &grid)
        })
        .collect()
}

/// `out.csv` for a single unlabeled curve, `out-<label>.csv` per labeled one.
fn curve_path(out: &Path, label: Option<&str>, extension: &str) -> PathBuf {
    let stem: PathBuf = if out.extension().map(|e| e == "csv").unwrap_or(false) {
        out.with_extension("")
    } else {
        out.to_path_buf()
    };
    match label {
        Some(l) => {
            let safe = l.replace('=', "-");
            PathBuf::from(format!("{}-{safe}.{extension}", stem.display()))
        }
        None => stem.with_extension(extension),
    }
}

pub(super) fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, contents)?;
    Ok(())
}

pub(super) fn simulate(args: SimulateArgs) -> Result<i32> {
    let curves = args.common.resolve()?;
    let runs = run_curves(&curves)?;

    match &args.out {
        None if runs.len() == 1 => {
            print!("{}", runs[0].series.to_csv());
        }
        None => {
            return Err(Error::Config(
                "this preset produces multiple curves; provide --out".to_string(),
            ));
        }
        Some(out) => {
            for run in &runs {
                let csv_path = curve_path(out, run.label.as_deref(), "csv");
                write_file(&csv_path, &run.series.to_csv())?;
                let json_path = curve_path(out, run.label.as_deref(), "json");
                write_file(&json_path, &run.series.metadata_json())?;
                println!(
                    "wrote {} ({} samples)",
                    csv_path.display(),
                    run.series.len()
                );
            }
        }
    }

    if let Some(rho_out) = &args.dump_rho {
        for run in &runs {
            let dump = rho_dump_for(run, None);
            let text = serde_json::to_string(&dump).expect("dump serializes");
            let path = if runs.len() == 1 {
                rho_out.clone()
            } else {
                curve_path(rho_out, run.label.as_deref(), "json")
            };
            write_file(&path, &text)?;
            println!(
                "wrote {} ({} snapshots)",
                path.display(),
                dump.samples.len()
            );
        }
    }
    Ok(0)
}

/// Sweepable parameters for `sweep`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SweepParam {
    Q,
    KappaD,
    Delta,
    Theta,
    Phi,
    Alpha,
}

impl SweepParam {
    fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "q" => Ok(SweepParam::Q),
            "kappa_d" => Ok(SweepParam::KappaD),
            "delta" => Ok(SweepParam::Delta),
            "theta" => Ok(SweepParam::Theta),
            "phi" => Ok(SweepParam::Phi),
            "alpha" => Ok(SweepParam::Alpha),
            other => Err(Error::Config(format!(
                "unknown sweep parameter '{other}' (expected q, kappa_d, delta, theta, phi, or alpha)"
            ))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            SweepParam::Q => "q",
            SweepParam::KappaD => "kappa_d",
            SweepParam::Delta => "delta",
            SweepParam::Theta => "theta",
            SweepParam::Phi => "phi",
            SweepParam::Alpha => "alpha",
        }
    }

    /// Applies one swept value, returning the curve label.
    fn apply(self, cfg: &mut RunConfig, raw: &str) -> Result<String> {
        let real = |raw: &str| -> Result<f64> {
            raw.parse::<f64>()
                .map_err(|_| Error::Config(format!("cannot parse sweep value '{raw}' as a number")))
        };
        let label_value = match self {
            SweepParam::Q => {
                let v = real(raw)?;
                cfg.deformation = DeformationKind::QDeformed;
                cfg.q = Some(v);
                super::config::short(v)
            }
            SweepParam::KappaD => {
                let v = real(raw)?;
                cfg.kappa_d = v;
                super::config::short(v)
            }
            SweepParam::Delta => {
                let v = real(raw)?;
                cfg.delta = v;
                super::config::short(v)
            }
            SweepParam::Theta => {
                let v = real(raw)?;
                cfg.theta = v;
                super::config::short(v)
            }
            SweepParam::Phi => {
                let v = real(raw)?;
                cfg.phi = v;
                super::config::short(v)
            }
            SweepParam::Alpha => {
                let v = parse_complex(raw)?;
                cfg.alpha = v;
                short_complex(v)
            }
        };
        Ok(format!("{}={}", self.name(), label_value))
    }
}

#[derive(Serialize)]
struct SweepSidecar {
    param: String,
    values: Vec<String>,
    curves: Vec<SweepCurveEntry>,
}

#[derive(Serialize)]
struct SweepCurveEntry {
    label: String,
    file: Option<String>,
    metadata: SeriesMetadata,
}

pub(super) fn sweep(args: SweepArgs) -> Result<i32> {
    let param = SweepParam::parse(&args.param)?;
    let values: Vec<String> = args
        .values
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect();
    if values.is_empty() {
        return Err(Error::Config("sweep values list is empty".to_string()));
    }

    let resolved = args.common.resolve()?;
    if resolved.len() != 1 || resolved[0].1.preset.is_some() {
        return Err(Error::Config(
            "sweep does not combine with a preset; set base parameters with flags".to_string(),
        ));
    }
    let base = resolved.into_iter().next().unwrap().1;

    let mut labeled: Vec<(Option<String>, RunConfig)> = Vec::with_capacity(values.len());
    for raw in &values {
        let mut cfg = base.clone();
        let label = param.apply(&mut cfg, raw)?;
        labeled.push((Some(label), cfg));
    }
    let runs = run_curves(&labeled)?;

    match &args.out {
        None if runs.len() == 1 => {
            print!("{}", runs[0].series.to_csv());
        }
        None => {
            return Err(Error::Config(
                "sweeping multiple values produces multiple files; provide --out".to_string(),
            ));
        }
        Some(out) => {
            let mut entries = Vec::with_capacity(runs.len());
            for run in &runs {
                let csv_path = curve_path(out, run.label.as_deref(), "csv");
                write_file(&csv_path, &run.series.to_csv())?;
                println!(
                    "wrote {} ({} samples)",
                    csv_path.display(),
                    run.series.len()
                );
                entries.push(SweepCurveEntry {
                    label: run.label.clone().unwrap_or_default(),
                    file: Some(csv_path.display().to_string()),
                    metadata: run.series.metadata().clone(),
                });
            }
            let sidecar = SweepSidecar {
                param: param.name().to_string(),
                values,
                curves: entries,
            };
            let sidecar_path = curve_path(out, None, "json");
            write_file(
                &sidecar_path,
                &serde_json::to_string_pretty(&sidecar).expect("sidecar serializes"),
            )?;
            println!("wrote {}", sidecar_path.display());
        }
    }
    Ok(0)
}

/// Row-major complex pairs for a square matrix.
fn matrix_pairs<const N: usize>(
    m: &nalgebra::SMatrix<num_complex::Complex64, N, N>,
) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(N * N);
    for r in 0..N {
        for c in 0..N {
            out.push([m[(r, c)].re, m[(r, c)].im]);
        }
    }
    out
}

#[derive(Serialize)]
pub(super) struct RhoRecord {
    lambda_t: f64,
    trace: f64,
    purity: f64,
    min_eigenvalue: f64,
    hermiticity_residual: f64,
    rho_ab: Vec<[f64; 2]>,
    rho_alice: Vec<[f64; 2]>,
}

#[derive(Serialize)]
pub(super) struct RhoDump {
    basis: [&'static str; 4],
    include_remainder: bool,
    preset: Option<String>,
    curve: Option<String>,
    pub(super) samples: Vec<RhoRecord>,
    metadata: SeriesMetadata,
}

fn rho_record(lambda_t: f64, state: &JointState, include_remainder: bool) -> RhoRecord {
    let rho: DensityMatrix4 = if include_remainder {
        reduce_to_atoms_with_remainder(state)
    } else {
        reduce_to_atoms(state)
    };
    let alice: DensityMatrix2 = reduce_to_alice(&rho);
    RhoRecord {
        lambda_t,
        trace: rho.trace(),
        purity: rho.purity(),
        min_eigenvalue: rho.min_eigenvalue(),
        hermiticity_residual: rho.hermiticity_residual(),
        rho_ab: matrix_pairs(rho.matrix()),
        rho_alice: matrix_pairs(alice.matrix()),
    }
}

/// Snapshots for every trajectory sample, or a chosen subset of indices.
fn rho_dump_for(run: &CurveRun, only_index: Option<usize>) -> RhoDump {
    let indices: Vec<usize> = match only_index {
        Some(i) => vec![i],
        None => (0..run.traj.len()).collect(),
    };
    let samples = indices
        .into_iter()
        .map(|i| {
            rho_record(
                run.traj.times()[i],
                &run.traj.states()[i],
                run.config.include_remainder,
            )
        })
        .collect();
    RhoDump {
        basis: ["|1,1>", "|1,0>", "|0,1>", "|0,0>"],
        include_remainder: run.config.include_remainder,
        preset: run.config.preset.map(|p| p.name().to_string()),
        curve: run.label.clone(),
        samples,
        metadata: run.series.metadata().clone(),
    }
}

pub(super) fn dump_rho(args: DumpRhoArgs) -> Result<i32> {
    if !args.t.is_finite() || args.t < 0.0 {
        return Err(Error::Config(format!(
            "snapshot time must be a nonnegative finite number, got {}",
            args.t
        )));
    }
    let curves = args.common.resolve()?;
    let runs: Vec<CurveRun> = curves
        .iter()
        .map(|(label, cfg)| run_curve(label.clone(), cfg, &[args.t]))
        .collect::<Result<_>>()?;

    match &args.out {
        None if runs.len() == 1 => {
            let dump = rho_dump_for(&runs[0], None);
            println!(
                "{}",
                serde_json::to_string_pretty(&dump).expect("dump serializes")
            );
        }
        None => {
            return Err(Error::Config(
                "this preset produces multiple dumps; provide --out".to_string(),
            ));
        }
        Some(out) => {
            for run in &runs {
                let dump = rho_dump_for(run, None);
                let path = if runs.len() == 1 {
                    curve_path(out, None, "json")
                } else {
                    curve_path(out, run.label.as_deref(), "json")
                };
                write_file(
                    &path,
                    &serde_json::to_string_pretty(&dump).expect("dump serializes"),
                )?;
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(0)
}
