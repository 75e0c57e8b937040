//! Reusable experiment drivers shared by the CLI, the examples and the
//! acceptance suite: convergence ladders against closed forms, the
//! matched shock run with cone tracking, the FRW-2/FRW-1 comparison, the
//! time-reversed collapse and weak-residual ladders.

use crate::diagnostics::{self, BumpTest, ConeState};
use crate::models::{ModelSpec, ModelVariant, Setup};
use crate::relfluid::EosParams;
use crate::scheme::{self, History, RunOptions, RunSummary, SchemeError, SimGrid, SimState, StopReason};
use rayon::prelude::*;
use serde::Serialize;

/// Parameters of the smooth-model runs: `[3, 7]`, starting at `t̄ = 15`, one time unit.
pub const CONT_R_MIN: f64 = 3.0;
pub const CONT_R_MAX: f64 = 7.0;
pub const CONT_T0: f64 = 15.0;

pub fn init_state(variant: ModelVariant, eos: EosParams, t0: f64, grid: SimGrid, eps: f64) -> Result<SimState, SchemeError> {
    let setup: Setup = ModelSpec::new(variant, eos).setup(t0)?;
    scheme::init(&setup, grid, eps)
}

/// 1-norm errors of `(ρ, v, A, B)` against the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldErrors {
    pub n: usize,
    pub rho: f64,
    pub v: f64,
    pub a: f64,
    pub b: f64,
}

impl FieldErrors {
    pub fn as_array(&self) -> [f64; 4] {
        [self.rho, self.v, self.a, self.b]
    }
}

/// Errors of a finished run against the exact solution of its own model.
pub fn errors_vs_exact(state: &SimState) -> Result<FieldErrors, SchemeError> {
    let s = &state.setup;
    let g = &state.grid;
    let (mut rho, mut v, mut a, mut b) = (0.0, 0.0, 0.0, 0.0);
    for i in 1..=state.n {
        let ex = s.exact(state.t_bar, g.x(i))?;
        rho += (state.fluid[i].rho - ex.fluid.rho).abs();
        v += (state.fluid[i].v - ex.fluid.v).abs();
    }
    for i in 2..=state.n {
        let ex = s.exact(state.t_bar, g.edge_x(i))?;
        a += (state.edges[i].a - ex.metric.a).abs();
        b += (state.edges[i].b - ex.metric.b).abs();
    }
    Ok(FieldErrors {
        n: g.n,
        rho: rho * g.dx,
        v: v * g.dx,
        a: a * g.dx,
        b: b * g.dx,
    })
}

/// Runs a smooth model on `[3, 7]` for `duration` and reports errors vs closed form.
pub fn pure_model_run(
    variant: ModelVariant,
    eos: EosParams,
    n: usize,
    duration: f64,
) -> Result<(SimState, FieldErrors), SchemeError> {
    let t0 = CONT_T0;
    let mut st = init_state(variant, eos, t0, SimGrid::new(CONT_R_MIN, CONT_R_MAX, n)?, crate::riemann::DEFAULT_EPS)?;
    let summary = scheme::run(&mut st, t0 + duration, RunOptions::default(), None, |_, _| true)?;
    expect_end(&summary)?;
    let e = errors_vs_exact(&st)?;
    Ok((st, e))
}

fn expect_end(summary: &RunSummary) -> Result<(), SchemeError> {
    match summary.stop {
        StopReason::ReachedEnd => Ok(()),
        StopReason::Horizon => Err(SchemeError::HorizonEncountered {
            t_bar: summary.t_bar,
            radius: f64::NAN,
            a: 0.0,
        }),
        _ => Err(SchemeError::BorderNotFound { t_bar: summary.t_bar }),
    }
}

/// Doubling ladder of pure-model runs, computed concurrently.
pub fn convergence_ladder(
    variant: ModelVariant,
    eos: EosParams,
    ns: &[usize],
    duration: f64,
) -> Result<Vec<FieldErrors>, SchemeError> {
    ns.par_iter()
        .map(|&n| pure_model_run(variant, eos, n, duration).map(|(_, e)| e))
        .collect()
}

/// Standard FRW-2 model: `Ψ₀ = √(2t̄₀)` so the light speed starts at one.
pub fn frw2_standard() -> ModelVariant {
    ModelVariant::Frw2 {
        psi0: (2.0 * CONT_T0).sqrt(),
    }
}

/// Relative drift of a static run: `max_i |f_end − f_start|/|f_start|` for `(ρ, B, M)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StaticDrift {
    pub rho: f64,
    pub b: f64,
    pub m: f64,
}

pub fn tov_drift(eos: EosParams, n: usize, duration: f64) -> Result<StaticDrift, SchemeError> {
    let mut st = init_state(ModelVariant::Tov { b0: 1.0 }, eos, 0.0, SimGrid::new(CONT_R_MIN, CONT_R_MAX, n)?, crate::riemann::DEFAULT_EPS)?;
    let before = st.clone();
    let summary = scheme::run(&mut st, duration, RunOptions::default(), None, |_, _| true)?;
    expect_end(&summary)?;
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    let mut d = StaticDrift { rho: 0.0, b: 0.0, m: 0.0 };
    for i in 1..=st.n {
        d.rho = d.rho.max(rel(st.fluid[i].rho, before.fluid[i].rho));
    }
    for i in 1..=st.n + 1 {
        d.b = d.b.max(rel(st.edges[i].b, before.edges[i].b));
        d.m = d.m.max(rel(st.edges[i].m, before.edges[i].m));
    }
    Ok(d)
}

/// Light speed across the grid over an FRW-2 run: `(time, min, max)` per step.
pub fn frw2_light_speed_history(n: usize, duration: f64) -> Result<Vec<(f64, f64, f64)>, SchemeError> {
    let eos = EosParams::default();
    let mut st = init_state(frw2_standard(), eos, CONT_T0, SimGrid::new(CONT_R_MIN, CONT_R_MAX, n)?, crate::riemann::DEFAULT_EPS)?;
    let spread = |s: &SimState| {
        let c: Vec<f64> = s.edges[1..=s.n + 1].iter().map(|e| e.light_speed()).collect();
        (
            s.t_bar,
            c.iter().cloned().fold(f64::INFINITY, f64::min),
            c.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        )
    };
    let mut out = vec![spread(&st)];
    scheme::run(&mut st, CONT_T0 + duration, RunOptions::default(), None, |s, _| {
        out.push(spread(s));
        true
    })?;
    Ok(out)
}

/// Outcome of a matched run.
#[derive(Debug, Clone, Serialize)]
pub struct MatchedOutcome {
    pub n: usize,
    pub t_end: f64,
    pub cones: ConeState,
    pub frw_border: Option<f64>,
    pub tov_border: Option<f64>,
    pub mu_max: f64,
    pub mu_radius: f64,
    pub bt: f64,
    pub summary: RunSummary,
    #[serde(skip)]
    pub state: SimState,
    /// `(t̄, μ_max, r̄ at max)` after every step.
    pub mu_history: Vec<(f64, f64, f64)>,
    pub dt_history: Vec<f64>,
    pub tv_history: Vec<f64>,
}

/// Runs a matched model from `t̄₀` for `duration`, tracking cones, μ and variation.
pub fn matched_run(
    variant: ModelVariant,
    grid: SimGrid,
    duration: f64,
    opts: RunOptions,
    mut observe: impl FnMut(&SimState),
) -> Result<MatchedOutcome, SchemeError> {
    let eos = EosParams::default();
    let mut st = init_state(variant, eos, 0.0, grid, crate::riemann::DEFAULT_EPS)?;
    let r0 = st.setup.r0.unwrap_or(0.5 * (grid.r_min + grid.r_max));
    let t_end = st.t_bar + duration;
    let mut cones = ConeState::at(r0);
    let mut mu_history = vec![];
    let mut dt_history = vec![];
    let mut tv_history = vec![];
    let mut prev = st.clone();
    let summary = scheme::run(&mut st, t_end, opts, None, |s, r| {
        if r.dt > 0.0 {
            cones = diagnostics::advance_cones(&cones, &prev, r.dt, &eos);
            dt_history.push(r.dt);
        }
        let (mu, at) = diagnostics::black_hole_number(s);
        mu_history.push((s.t_bar, mu, at));
        let u0: Vec<f64> = (1..=s.n).map(|i| s.u[i].u0).collect();
        tv_history.push(diagnostics::total_variation(&u0));
        observe(s);
        prev = s.clone();
        true
    })?;
    let (mu_max, mu_radius) = diagnostics::black_hole_number(&st);
    Ok(MatchedOutcome {
        n: grid.n,
        t_end: st.t_bar,
        cones,
        frw_border: diagnostics::detect_frw_border(&st).ok(),
        tov_border: diagnostics::detect_tov_border(&st).ok(),
        mu_max,
        mu_radius,
        bt: st.bt,
        summary,
        state: st,
        mu_history,
        dt_history,
        tv_history,
    })
}

pub fn forward_frw1_tov(n: usize) -> Result<MatchedOutcome, SchemeError> {
    matched_run(
        ModelVariant::MatchedFrw1Tov { r0: 5.0, reversed: false },
        SimGrid::new(CONT_R_MIN, CONT_R_MAX, n)?,
        1.0,
        RunOptions::default(),
        |_| {},
    )
}

/// Comparison of the FRW-2/TOV run against the FRW-1/TOV run at corresponding times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceRow {
    pub n: usize,
    pub t1_end: f64,
    pub t2_end: f64,
    /// Measured `(B₂max−B₂min)/(B₁max−B₁min)`.
    pub b_scale: f64,
    /// Predicted `4t̄₁/Ψ₀²`.
    pub b_scale_expected: f64,
    pub rho_error: f64,
    pub v_error: f64,
    pub b_error: f64,
}

pub fn covariance_row(n: usize) -> Result<CovarianceRow, SchemeError> {
    let grid = SimGrid::new(CONT_R_MIN, CONT_R_MAX, n)?;
    let f1 = forward_frw1_tov(n)?;
    let spec2 = ModelSpec::new(ModelVariant::MatchedFrw2Tov { r0: 5.0 }, EosParams::default());
    let m2 = crate::models::match_models(&spec2)?;
    let psi0 = m2.psi0.expect("FRW-2 matching fixes psi0");
    let t2_end = diagnostics::coordinate_time_map(f1.t_end, psi0);
    let f2 = matched_run(
        ModelVariant::MatchedFrw2Tov { r0: 5.0 },
        grid,
        t2_end - m2.t0,
        RunOptions::default(),
        |_| {},
    )?;
    let (s1, s2) = (&f1.state, &f2.state);
    let b1: Vec<f64> = (1..=n).map(|i| s1.b_at_cell(i)).collect();
    let b2: Vec<f64> = (1..=n).map(|i| s2.b_at_cell(i)).collect();
    let (b1m, scale) = diagnostics::b_affine_remap(&b1, &b2).map_err(|_| SchemeError::InvalidGrid("degenerate B".into()))?;
    let col = |s: &SimState, f: fn(&crate::relfluid::FluidState) -> f64| -> Vec<f64> {
        (1..=n).map(|i| f(&s.fluid[i])).collect()
    };
    let dx = grid.dx;
    let err = |a: &[f64], b: &[f64]| diagnostics::one_norm_error(a, b, 0..n, dx).unwrap_or(f64::NAN);
    Ok(CovarianceRow {
        n,
        t1_end: f1.t_end,
        t2_end: f2.t_end,
        b_scale: scale,
        b_scale_expected: diagnostics::time_map_scale(f1.t_end, psi0),
        rho_error: err(&col(s1, |f| f.rho), &col(s2, |f| f.rho)),
        v_error: err(&col(s1, |f| f.v), &col(s2, |f| f.v)),
        b_error: err(&b1m, &b2),
    })
}

/// Outcome of the time-reversed collapse run.
#[derive(Debug, Clone, Serialize)]
pub struct ReversedOutcome {
    pub run: MatchedOutcome,
    /// Largest relative drop of `μ_max` between consecutive steps.
    pub mu_max_decrease: f64,
    /// `μ_max` and its radius at the moment the right boundary was hit, if it was.
    pub at_boundary_hit: Option<(f64, f64, f64)>,
    pub metric_jump: f64,
}

pub fn reversed_run(n: usize, r_min: f64, r_max: f64, duration: f64, continue_chop: bool) -> Result<ReversedOutcome, SchemeError> {
    let grid = SimGrid::new(r_min, r_max, n)?;
    let opts = RunOptions {
        continue_chop,
        ..RunOptions::default()
    };
    let mut hit: Option<(f64, f64, f64)> = None;
    let mut chopped_seen = false;
    let run = matched_run(
        ModelVariant::MatchedFrw1Tov { r0: 5.0, reversed: true },
        grid,
        duration,
        opts,
        |s| {
            if !chopped_seen && s.right == scheme::RightBoundary::Chopped {
                chopped_seen = true;
            }
            if hit.is_none() && (chopped_seen || s.n < grid.n) {
                let (mu, at) = diagnostics::black_hole_number(s);
                hit = Some((s.t_bar, mu, at));
            }
        },
    )?;
    let at_boundary_hit = match run.summary.stop {
        StopReason::BoundaryHit => Some((run.t_end, run.mu_max, run.mu_radius)),
        _ => hit,
    };
    let mu_max_decrease = run
        .mu_history
        .windows(2)
        .map(|w| (w[0].1 - w[1].1) / w[0].1)
        .fold(0.0, f64::max);
    let metric_jump = diagnostics::metric_derivative_jump(&run.state);
    Ok(ReversedOutcome {
        run,
        mu_max_decrease,
        at_boundary_hit,
        metric_jump,
    })
}

/// Three fixed bump test functions inside `(t̄₀, t̄₀+1) × (3, 7)`.
pub fn standard_test_functions() -> [BumpTest; 3] {
    let t = CONT_T0;
    [
        BumpTest { t_center: t + 0.5, t_half_width: 0.45, x_center: 5.0, x_half_width: 1.5 },
        BumpTest { t_center: t + 0.4, t_half_width: 0.3, x_center: 4.0, x_half_width: 0.8 },
        BumpTest { t_center: t + 0.6, t_half_width: 0.35, x_center: 5.8, x_half_width: 1.0 },
    ]
}

/// Weak-form residuals of an FRW-1 run of one time unit for each test function.
pub fn frw1_weak_residuals(n: usize, tests: &[BumpTest]) -> Result<Vec<f64>, SchemeError> {
    let mut st = init_state(ModelVariant::Frw1, EosParams::default(), CONT_T0, SimGrid::new(CONT_R_MIN, CONT_R_MAX, n)?, crate::riemann::DEFAULT_EPS)?;
    let mut h = History::default();
    let opts = RunOptions {
        record_history: true,
        ..RunOptions::default()
    };
    scheme::run(&mut st, CONT_T0 + 1.0, opts, Some(&mut h), |_, _| true)?;
    Ok(tests
        .iter()
        .map(|phi| diagnostics::weak_residual(&h, &st, phi).unwrap_or(f64::NAN))
        .collect())
}
