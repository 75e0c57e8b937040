//! Experiment orchestration: runs a configured model, writes snapshots and a
//! manifest, and maps outcomes onto process exit codes.

use crate::config::{ConfigError, RunConfig};
use crate::diagnostics::{self, ConeState, ConvergenceRow};
use crate::experiments::{errors_vs_exact, FieldErrors};
use crate::models::{MatchData, ModelError, Setup};
use crate::output;
use crate::scheme::{self, RunOptions, RunSummary, SchemeError, SimGrid, SimState, StopReason};
use rayon::prelude::*;
use serde::Serialize;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl RunError {
    /// 2 configuration, 3 horizon or coordinate singularity, 4 numerical failure,
    /// 1 for output I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Scheme(SchemeError::HorizonEncountered { .. }) => 3,
            RunError::Scheme(SchemeError::Model(ModelError::SuperluminalCoordinate { .. })) => 3,
            RunError::Scheme(SchemeError::InvalidGrid(_)) => 2,
            RunError::Scheme(_) => 4,
            RunError::Io { .. } => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Per-step diagnostics recorded in the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct StepEntry {
    pub step: usize,
    pub t_bar: f64,
    pub dt: f64,
    pub n: usize,
    pub bt: f64,
    pub mu_max: f64,
    pub mu_radius: f64,
    pub total_variation: f64,
    pub frw_border: Option<f64>,
    pub tov_border: Option<f64>,
    pub cones: Option<ConeState>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SnapshotEntry {
    pub file: String,
    pub step: usize,
    pub t_bar: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub config: RunConfig,
    pub setup: Setup,
    pub matching: Option<MatchData>,
    pub summary: RunSummary,
    pub snapshots: Vec<SnapshotEntry>,
    pub steps: Vec<StepEntry>,
}

/// Result of [`run_experiment`]; `exit_code` is 3 when the run stopped at a horizon.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub manifest: Manifest,
    pub manifest_path: PathBuf,
    pub exit_code: i32,
}

fn snapshot(dir: &Path, state: &SimState, k: usize, list: &mut Vec<SnapshotEntry>) -> Result<(), RunError> {
    let file = format!("snapshot_{k:05}.csv");
    let path = dir.join(&file);
    output::emit_plotdata(&path, &state.profile()).map_err(io_err(&path))?;
    list.push(SnapshotEntry {
        file,
        step: state.steps,
        t_bar: state.t_bar,
    });
    Ok(())
}

fn step_entry(state: &SimState, dt: f64, cones: Option<ConeState>) -> StepEntry {
    let (mu_max, mu_radius) = diagnostics::black_hole_number(state);
    let u0: Vec<f64> = (1..=state.n).map(|i| state.u[i].u0).collect();
    let matched = state.setup.r0.is_some();
    StepEntry {
        step: state.steps,
        t_bar: state.t_bar,
        dt,
        n: state.n,
        bt: state.bt,
        mu_max,
        mu_radius,
        total_variation: diagnostics::total_variation(&u0),
        frw_border: matched.then(|| diagnostics::detect_frw_border(state).ok()).flatten(),
        tov_border: matched.then(|| diagnostics::detect_tov_border(state).ok()).flatten(),
        cones,
    }
}

/// Runs the configured model for `duration`, writing `snapshot_*.csv` and
/// `manifest.json` into the output directory.
pub fn run_experiment(cfg: &RunConfig) -> Result<RunReport, RunError> {
    cfg.validate()?;
    let dir = cfg.output_dir.clone();
    std::fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let setup = cfg.setup().map_err(|e| ConfigError::Validation(e.to_string()))?;
    let eos = cfg.eos();
    let grid = SimGrid::new(cfg.r_min, cfg.r_max, cfg.n)?;
    let mut state = scheme::init(&setup, grid, cfg.eps)?;
    let t_end = state.t_bar + cfg.duration;

    let mut snapshots = vec![];
    snapshot(&dir, &state, 0, &mut snapshots)?;
    let mut cones = setup.r0.map(ConeState::at);
    let mut steps = vec![step_entry(&state, 0.0, cones)];
    let mut prev = state.clone();
    let mut write_error = None;
    let opts = RunOptions {
        continue_chop: cfg.continue_chop,
        ..RunOptions::default()
    };
    let summary = scheme::run(&mut state, t_end, opts, None, |s, r| {
        if r.dt > 0.0 {
            cones = cones.map(|c| diagnostics::advance_cones(&c, &prev, r.dt, &eos));
        }
        steps.push(step_entry(s, r.dt, cones));
        if cfg.snapshot_every > 0 && s.steps % cfg.snapshot_every == 0 {
            if let Err(e) = snapshot(&dir, s, snapshots.len(), &mut snapshots) {
                write_error = Some(e);
                return false;
            }
        }
        prev = s.clone();
        true
    })?;
    if let Some(e) = write_error {
        return Err(e);
    }
    if snapshots.last().map(|s| s.step) != Some(state.steps) {
        snapshot(&dir, &state, snapshots.len(), &mut snapshots)?;
    }
    let exit_code = if summary.stop == StopReason::Horizon { 3 } else { 0 };
    let manifest = Manifest {
        config: cfg.clone(),
        setup,
        matching: setup.matching,
        summary,
        snapshots,
        steps,
    };
    let manifest_path = dir.join("manifest.json");
    output::write_json(&manifest_path, &manifest).map_err(io_err(&manifest_path))?;
    Ok(RunReport {
        manifest,
        manifest_path,
        exit_code,
    })
}

/// One level of a convergence ladder against the closed form.
#[derive(Debug, Clone, Serialize)]
pub struct LadderLevel {
    pub errors: FieldErrors,
    pub snapshot: String,
    pub t_bar: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub config: RunConfig,
    pub levels: Vec<LadderLevel>,
    pub rho: Vec<ConvergenceRow>,
    pub v: Vec<ConvergenceRow>,
    pub a: Vec<ConvergenceRow>,
    pub b: Vec<ConvergenceRow>,
}

/// Runs a pure model at each grid size concurrently, compares with the closed
/// form and writes per-level snapshots, `convergence.csv` and `convergence.json`.
pub fn run_convergence(cfg: &RunConfig, levels: &[usize]) -> Result<ConvergenceReport, RunError> {
    cfg.validate()?;
    if cfg.model.is_matched() {
        return Err(ConfigError::Validation("convergence ladders need a pure model (frw1, frw2, tov)".into()).into());
    }
    if levels.is_empty() {
        return Err(ConfigError::Validation("no ladder levels".into()).into());
    }
    let dir = cfg.output_dir.clone();
    std::fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let setup = cfg.setup().map_err(|e| ConfigError::Validation(e.to_string()))?;
    let finals: Vec<SimState> = levels
        .par_iter()
        .map(|&n| {
            let mut st = scheme::init(&setup, SimGrid::new(cfg.r_min, cfg.r_max, n)?, cfg.eps)?;
            let t_end = st.t_bar + cfg.duration;
            let summary = scheme::run(&mut st, t_end, RunOptions::default(), None, |_, _| true)?;
            match summary.stop {
                StopReason::ReachedEnd => Ok(st),
                _ => Err(SchemeError::HorizonEncountered {
                    t_bar: summary.t_bar,
                    radius: f64::NAN,
                    a: 0.0,
                }),
            }
        })
        .collect::<Result<_, SchemeError>>()?;
    let mut out = vec![];
    for st in &finals {
        let file = format!("level_{:05}.csv", st.grid.n);
        let path = dir.join(&file);
        output::emit_plotdata(&path, &st.profile()).map_err(io_err(&path))?;
        out.push(LadderLevel {
            errors: errors_vs_exact(st)?,
            snapshot: file,
            t_bar: st.t_bar,
        });
    }
    let col = |f: fn(&FieldErrors) -> f64| {
        diagnostics::convergence_table(levels, &out.iter().map(|l| f(&l.errors)).collect::<Vec<_>>())
    };
    let report = ConvergenceReport {
        config: cfg.clone(),
        rho: col(|e| e.rho),
        v: col(|e| e.v),
        a: col(|e| e.a),
        b: col(|e| e.b),
        levels: out,
    };
    let csv = dir.join("convergence.csv");
    std::fs::write(&csv, convergence_csv(&report)).map_err(io_err(&csv))?;
    let json = dir.join("convergence.json");
    output::write_json(&json, &report).map_err(io_err(&json))?;
    Ok(report)
}

pub fn convergence_csv(r: &ConvergenceReport) -> String {
    let mut s = String::from("n,rho_error,rho_rate,v_error,v_rate,A_error,A_rate,B_error,B_rate\n");
    let rate = |x: Option<f64>| x.map(|x| format!("{x:.4}")).unwrap_or_default();
    for k in 0..r.levels.len() {
        s += &format!(
            "{},{:.9e},{},{:.9e},{},{:.9e},{},{:.9e},{}\n",
            r.rho[k].n,
            r.rho[k].error,
            rate(r.rho[k].rate),
            r.v[k].error,
            rate(r.v[k].rate),
            r.a[k].error,
            rate(r.a[k].rate),
            r.b[k].error,
            rate(r.b[k].rate),
        );
    }
    s
}

/// Parses `64..1024` (doubling) or `64,128,256`.
pub fn parse_levels(s: &str) -> Result<Vec<usize>, ConfigError> {
    let bad = || ConfigError::Validation(format!("cannot parse levels `{s}`"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        if a < 8 || b < a {
            return Err(bad());
        }
        Ok(std::iter::successors(Some(a), |n| Some(n * 2)).take_while(|n| *n <= b).collect())
    } else {
        s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect()
    }
}
