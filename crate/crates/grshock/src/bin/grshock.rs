//! Command-line front end. Exit codes: 0 ok, 2 configuration error,
//! 3 horizon or coordinate singularity, 4 numerical failure.

use clap::{Args, Parser, Subcommand};
use grshock::config::{self, ConfigError, ModelKind, RunConfig};
use grshock::output;
use grshock::relfluid::{EosParams, FluidState};
use grshock::riemann;
use grshock::run::{self, RunError};
use grshock::scheme::{self, SimGrid};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "grshock", version, about = "Shock-wave simulations for spherically symmetric perfect-fluid spacetimes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one special-relativistic Riemann problem and print the fan as JSON.
    Riemann(RiemannArgs),
    /// Write the initial profile of a model as CSV.
    EmitModel {
        #[command(flatten)]
        run: RunArgs,
        /// Output file (default: <output-dir>/model.csv).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a model, writing snapshots and a manifest.
    Simulate(RunArgs),
    /// Run a pure model on a ladder of grids and tabulate errors against the closed form.
    Converge {
        #[command(flatten)]
        run: RunArgs,
        /// `64..1024` (doubling) or a comma list.
        #[arg(long, default_value = "64..1024")]
        levels: String,
    },
    /// Time-reversed FRW-1/TOV run on [0.1, 20] until the interaction region reaches the boundary.
    Reverse(RunArgs),
}

#[derive(Args)]
struct RiemannArgs {
    #[arg(long, allow_negative_numbers = true)]
    rho_l: f64,
    #[arg(long, allow_negative_numbers = true)]
    v_l: f64,
    #[arg(long, allow_negative_numbers = true)]
    rho_r: f64,
    #[arg(long, allow_negative_numbers = true)]
    v_r: f64,
    /// `p/(ρc²)`; ignored when `--sound-speed` is given.
    #[arg(long, default_value_t = 1.0 / 3.0)]
    sigma: f64,
    /// Light speed in the units of the velocities (results are reported in the same units).
    #[arg(long, default_value_t = 1.0)]
    light_speed: f64,
    /// Sound speed in the units of the velocities; sets `σ = (a/c)²`.
    #[arg(long)]
    sound_speed: Option<f64>,
    #[arg(long, default_value_t = riemann::DEFAULT_EPS)]
    eps: f64,
    /// Also write `(xi, rho, v)` samples spanning the fan to this CSV.
    #[arg(long)]
    profile: Option<PathBuf>,
    #[arg(long, default_value_t = 401)]
    samples: usize,
}

/// Flags mirror the configuration file keys and override them.
#[derive(Args, Default)]
struct RunArgs {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    r_min: Option<f64>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    r0: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    duration: Option<f64>,
    #[arg(long)]
    reversed: bool,
    /// Keep going after a boundary hit by chopping one cell per step.
    #[arg(long)]
    continue_chop: bool,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    snapshot_every: Option<usize>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    t0: Option<f64>,
    #[arg(long)]
    psi0: Option<f64>,
    #[arg(long)]
    b0: Option<f64>,
}

impl RunArgs {
    fn resolve(&self, base: RunConfig) -> Result<RunConfig, ConfigError> {
        let mut c = match &self.config {
            Some(p) => config::parse_config(p)?,
            None => base,
        };
        if let Some(m) = &self.model {
            c.model = m.parse()?;
        }
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f.clone() { c.$f = v; } )* };
        }
        set!(r_min, r_max, r0, n, duration, sigma, eps, snapshot_every, output_dir, t0, b0);
        if self.psi0.is_some() {
            c.psi0 = self.psi0;
        }
        c.reversed |= self.reversed;
        c.continue_chop |= self.continue_chop;
        c.validate()?;
        Ok(c)
    }
}

fn riemann_cmd(a: &RiemannArgs) -> Result<(), RunError> {
    let c = a.light_speed;
    if !(c > 0.0) {
        return Err(ConfigError::Validation(format!("light speed must be positive, got {c}")).into());
    }
    let eos = EosParams::new(a.sound_speed.map_or(a.sigma, |s| (s / c).powi(2)));
    let (ul, ur) = (FluidState::new(a.rho_l, a.v_l / c), FluidState::new(a.rho_r, a.v_r / c));
    let fan = riemann::solve_middle_state(ul, ur, &eos, a.eps)
        .map_err(|e| ConfigError::Validation(e.to_string()))?;
    println!("{}", serde_json::to_string_pretty(&fan.report(c)).expect("fan serializes"));
    if let Some(path) = &a.profile {
        let mut s = String::from("xi,rho,v\n");
        let m = a.samples.max(2);
        let reach = (1.25 * fan.max_speed()).clamp(1e-12, 1.0);
        for k in 0..m {
            let xi = reach * (-1.0 + 2.0 * k as f64 / (m - 1) as f64);
            let f = fan.sample(xi);
            s += &format!("{:.9e},{:.9e},{:.9e}\n", xi * c, f.rho, f.v * c);
        }
        std::fs::write(path, s).map_err(|source| RunError::Io { path: path.clone(), source })?;
    }
    Ok(())
}

fn emit_model(cfg: &RunConfig, out: Option<PathBuf>) -> Result<(), RunError> {
    let setup = cfg.setup().map_err(|e| ConfigError::Validation(e.to_string()))?;
    let state = scheme::init(&setup, SimGrid::new(cfg.r_min, cfg.r_max, cfg.n)?, cfg.eps)?;
    let path = out.unwrap_or_else(|| cfg.output_dir.join("model.csv"));
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| RunError::Io { path: dir.to_path_buf(), source })?;
    }
    output::emit_plotdata(&path, &state.profile()).map_err(|source| RunError::Io { path: path.clone(), source })?;
    println!(
        "{}",
        serde_json::to_string_pretty(&serde_json::json!({
            "file": path,
            "t_bar": state.t_bar,
            "setup": setup,
        }))
        .expect("setup serializes")
    );
    Ok(())
}

fn simulate(cfg: &RunConfig) -> Result<i32, RunError> {
    let report = run::run_experiment(cfg)?;
    let s = &report.manifest.summary;
    let last = report.manifest.steps.last().expect("initial entry");
    println!(
        "{:?} after {} steps at t = {:.6}; mu_max = {:.4} at r = {:.4}; manifest {}",
        s.stop,
        s.steps,
        s.t_bar,
        last.mu_max,
        last.mu_radius,
        report.manifest_path.display()
    );
    if let Some(d) = &s.detail {
        println!("{d}");
    }
    Ok(report.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Riemann(a) => riemann_cmd(&a).map(|_| 0),
        Command::EmitModel { run, out } => run
            .resolve(RunConfig::default())
            .map_err(RunError::from)
            .and_then(|c| emit_model(&c, out).map(|_| 0)),
        Command::Simulate(run) => run.resolve(RunConfig::default()).map_err(RunError::from).and_then(|c| simulate(&c)),
        Command::Converge { run, levels } => {
            let base = RunConfig {
                model: ModelKind::Frw1,
                ..RunConfig::default()
            };
            run.resolve(base)
                .and_then(|c| run::parse_levels(&levels).map(|l| (c, l)))
                .map_err(RunError::from)
                .and_then(|(c, l)| run::run_convergence(&c, &l))
                .map(|r| {
                    print!("{}", run::convergence_csv(&r));
                    0
                })
        }
        Command::Reverse(run) => {
            let base = RunConfig {
                model: ModelKind::Frw1Tov,
                reversed: true,
                r_min: 0.1,
                r_max: 20.0,
                duration: 20.0,
                ..RunConfig::default()
            };
            run.resolve(base)
                .and_then(|mut c| {
                    c.model = ModelKind::Frw1Tov;
                    c.reversed = true;
                    c.validate().map(|_| c)
                })
                .map_err(RunError::from)
                .and_then(|c| simulate(&c))
        }
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
