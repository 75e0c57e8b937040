//! Fractional-step scheme: flat-space Riemann problems at every interface,
//! a Godunov average rescaled by the local light speed, then the source ODE.
//!
//! Fluid cells sit at `x_i = r_min + (i−1)Δx` (`i = 0` and `i = n+1` are
//! ghosts). Metric values live on the staggered edges `x_{i−1/2}`
//! (`i = 1..=n+1`), which are also where the Riemann problems are posed, so
//! fluid discontinuities sit on edges and metric discontinuities at cell
//! centres. One step is: Riemann solves at every edge, a Godunov average
//! using only the zero-speed states, one explicit source increment, and a
//! left-to-right integration of mass and metric.

use crate::diagnostics;
use crate::models::{ModelError, Setup, Side, KAPPA};
use crate::relfluid::{Conserved, EosParams, FluidError, FluidState};
use crate::riemann::{self, Region, RiemannError, WaveFan};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// `A` at or below this value stops the run: Schwarzschild coordinates break down.
pub const HORIZON_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchemeError {
    #[error("horizon forming: A = {a:e} at r = {radius} (t = {t_bar})")]
    HorizonEncountered { t_bar: f64, radius: f64, a: f64 },
    #[error("non-physical state in cell {index} at t = {t_bar}: {source}")]
    NonPhysicalState {
        index: usize,
        t_bar: f64,
        source: FluidError,
    },
    #[error("interaction region reached the right boundary at t = {t_bar}")]
    BorderNotFound { t_bar: f64 },
    #[error("only {remaining} cells left after chopping")]
    GridExhausted { remaining: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("Riemann solve at edge {edge}: {source}")]
    Riemann { edge: usize, source: RiemannError },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub n: usize,
    pub dx: f64,
}

impl SimGrid {
    pub fn new(r_min: f64, r_max: f64, n: usize) -> Result<Self, SchemeError> {
        if n < 8 || !(r_max > r_min) || !(r_min > 0.0) {
            return Err(SchemeError::InvalidGrid(format!(
                "need n >= 8 and 0 < r_min < r_max, got n = {n}, [{r_min}, {r_max}]"
            )));
        }
        Ok(Self {
            r_min,
            r_max,
            n,
            dx: (r_max - r_min) / (n as f64 - 1.0),
        })
    }

    /// Cell centre `x_i`; `i = 0` and `i = n+1` are ghosts.
    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.r_min + (i as f64 - 1.0) * self.dx
    }

    /// Edge `x_{i−1/2}`.
    #[inline]
    pub fn edge_x(&self, i: usize) -> f64 {
        self.x(i) - 0.5 * self.dx
    }
}

/// Metric and mass on one edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub a: f64,
    pub b: f64,
    pub m: f64,
}

impl Edge {
    pub fn light_speed(&self) -> f64 {
        (self.a * self.b).sqrt()
    }

    fn mean(&self, o: &Edge) -> Edge {
        Edge {
            a: 0.5 * (self.a + o.a),
            b: 0.5 * (self.b + o.b),
            m: 0.5 * (self.m + o.m),
        }
    }
}

/// What supplies the right ghost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RightBoundary {
    /// Outer closed-form chart (TOV with a rematched time scale, or FRW).
    Model,
    /// Frozen copy of a discarded cell after the grid has been chopped.
    Chopped,
}

#[derive(Debug, Clone)]
pub struct SimState {
    pub t_bar: f64,
    pub grid: SimGrid,
    /// Number of active interior cells; shrinks when chopping.
    pub n: usize,
    pub u: Vec<Conserved>,
    pub fluid: Vec<FluidState>,
    /// `edges[i]` sits at `x_{i−1/2}`; index 0 is unused.
    pub edges: Vec<Edge>,
    /// TOV time scale `B^t` used for the right boundary.
    pub bt: f64,
    pub right: RightBoundary,
    pub setup: Setup,
    pub eps: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct StepReport {
    pub dt: f64,
    pub t_bar: f64,
    pub max_light_speed: f64,
    /// Largest `|wave speed|·√(AB)` over all edges, for CFL auditing.
    pub max_wave_speed: f64,
    /// Count of Riemann problems per region I..IV.
    pub regions: [usize; 4],
    pub bt: f64,
}

fn region_index(r: Region) -> usize {
    match r {
        Region::I => 0,
        Region::II => 1,
        Region::III => 2,
        Region::IV => 3,
    }
}

/// Builds the initial state at `setup.t0`: fluid at cell centres, exact metric and mass on edges.
pub fn init(setup: &Setup, grid: SimGrid, eps: f64) -> Result<SimState, SchemeError> {
    let eos = setup.eos;
    let n = grid.n;
    let mut fluid = Vec::with_capacity(n + 2);
    for i in 0..=n + 1 {
        fluid.push(setup.initial_profile(grid.x(i))?.fluid);
    }
    let mut edges = vec![Edge { a: 1.0, b: 1.0, m: 0.0 }; n + 2];
    for (i, e) in edges.iter_mut().enumerate().skip(1) {
        let p = setup.initial_profile(grid.edge_x(i))?;
        *e = Edge {
            a: p.metric.a,
            b: p.metric.b,
            m: p.mass,
        };
    }
    let u = fluid.iter().map(|f| eos.to_conserved(*f)).collect();
    let bt = setup.matching.map(|m| m.b0).unwrap_or(match setup.outer {
        crate::models::Chart::Tov { b0 } => b0,
        _ => 1.0,
    });
    Ok(SimState {
        t_bar: setup.t0,
        grid,
        n,
        u,
        fluid,
        edges,
        bt,
        right: RightBoundary::Model,
        setup: *setup,
        eps,
        steps: 0,
    })
}

/// CFL step `min Δx/(2√(AB))` over the active edges.
pub fn cfl_dt(state: &SimState) -> f64 {
    let c = state.edges[1..=state.n + 1]
        .iter()
        .map(Edge::light_speed)
        .fold(0.0, f64::max);
    state.grid.dx / (2.0 * c)
}

/// Godunov average of cell `u_c` from the zero-speed states of its two
/// Riemann problems. Both half cells use the metric of the left edge.
pub fn godunov_cell_update(
    u_c: Conserved,
    star_left: FluidState,
    star_right: FluidState,
    c_state: FluidState,
    edge: &Edge,
    dt: f64,
    dx: f64,
    eos: &EosParams,
) -> Conserved {
    let alpha = edge.light_speed();
    let fc = eos.flux(c_state) * alpha;
    let fl = eos.flux(star_left) * alpha;
    let fr = eos.flux(star_right) * alpha;
    let left = u_c - (fc - fl) * (2.0 * dt / dx);
    let right = u_c - (fr - fc) * (2.0 * dt / dx);
    (left + right) * 0.5
}

/// Source `G = g − A'·∇_A f` after eliminating metric derivatives with the Einstein equations.
pub fn source_g(a: f64, b: f64, f: FluidState, x: f64, eos: &EosParams) -> Conserved {
    let sig = eos.sigma;
    let v = f.v;
    let rho = f.rho;
    let pre = -0.5 * (a * b).sqrt() * (1.0 + sig) / (1.0 - v * v) * rho / x;
    let g0 = pre * v * (2.0 * (1.0 / a + 1.0) - KAPPA / a * (1.0 - sig) * rho * x * x);
    let g1 = pre
        * (4.0 * v * v + (1.0 / a - 1.0) * (1.0 + v * v) + KAPPA / a * (sig - v * v) * rho * x * x);
    Conserved::new(g0, g1)
}

/// One forward-Euler source increment with the metric averaged over the two bounding edges.
pub fn ode_step(
    u_avg: Conserved,
    left: &Edge,
    right: &Edge,
    x: f64,
    dt: f64,
    eos: &EosParams,
) -> Result<Conserved, FluidError> {
    let f = eos.from_conserved(u_avg)?;
    let m = left.mean(right);
    Ok(u_avg + source_g(m.a, m.b, f, x, eos) * dt)
}

impl SimState {
    pub fn eos(&self) -> EosParams {
        self.setup.eos
    }

    /// Cell centres of the active interior cells.
    pub fn xs(&self) -> Vec<f64> {
        (1..=self.n).map(|i| self.grid.x(i)).collect()
    }

    /// `B` at cell centre `i`, averaged from its two edges.
    pub fn b_at_cell(&self, i: usize) -> f64 {
        0.5 * (self.edges[i].b + self.edges[i + 1].b)
    }

    pub fn a_at_cell(&self, i: usize) -> f64 {
        0.5 * (self.edges[i].a + self.edges[i + 1].a)
    }

    pub fn m_at_cell(&self, i: usize) -> f64 {
        0.5 * (self.edges[i].m + self.edges[i + 1].m)
    }

    fn set_cell(&mut self, i: usize, f: FluidState) {
        self.fluid[i] = f;
        self.u[i] = self.setup.eos.to_conserved(f);
    }

    /// Refreshes ghost cells and the left anchor edge at the current time.
    pub fn refresh_boundaries(&mut self) -> Result<(), SchemeError> {
        let g = self.grid;
        let left = self.setup.ghost(Side::Left, self.t_bar, g.x(0), g.edge_x(1))?;
        self.set_cell(0, left.fluid);
        self.edges[1] = Edge {
            a: left.metric.a,
            b: left.metric.b,
            m: left.mass,
        };
        if self.right == RightBoundary::Model {
            let n = self.n;
            let right = self.setup.ghost(Side::Right, self.t_bar, g.x(n + 1), g.edge_x(n + 1))?;
            self.set_cell(n + 1, right.fluid);
        }
        Ok(())
    }

    /// Integrates mass and metric from the left anchor over edges `2..=n+1`.
    pub fn update_mass_metric(&mut self) -> Result<(), SchemeError> {
        let eos = self.setup.eos;
        let dx = self.grid.dx;
        for i in 1..=self.n {
            let x = self.grid.edge_x(i);
            let e = self.edges[i];
            if e.a <= HORIZON_THRESHOLD {
                return Err(self.horizon(x, e.a));
            }
            let mid = (self.u[i - 1] + self.u[i]) * 0.5;
            let f = eos.from_conserved(mid).map_err(|source| SchemeError::NonPhysicalState {
                index: i,
                t_bar: self.t_bar,
                source,
            })?;
            let t11 = eos.stress(f, x).t11;
            let m = e.m + 0.5 * KAPPA * mid.u0 * x * x * dx;
            let x_next = self.grid.edge_x(i + 1);
            let a = 1.0 - 2.0 * m / x_next;
            let rate = (1.0 / e.a - 1.0) / x + KAPPA * x * t11 / e.a;
            self.edges[i + 1] = Edge {
                a,
                b: e.b * (rate * dx).exp(),
                m,
            };
        }
        let last = self.edges[self.n + 1];
        if last.a <= HORIZON_THRESHOLD {
            return Err(self.horizon(self.grid.edge_x(self.n + 1), last.a));
        }
        Ok(())
    }

    fn horizon(&self, radius: f64, a: f64) -> SchemeError {
        SchemeError::HorizonEncountered {
            t_bar: self.t_bar,
            radius,
            a,
        }
    }

    /// Rematches `B^t` at the TOV border and resets the right edge from the
    /// TOV chart. Without a detectable border the previous `B^t` is kept.
    pub fn rematch_tov_timescale(&mut self) -> Result<(), SchemeError> {
        let crate::models::Chart::Tov { .. } = self.setup.outer else {
            return Ok(());
        };
        if self.right != RightBoundary::Model {
            return Ok(());
        }
        let eos = self.setup.eos;
        let expo = crate::models::tov_b_exponent(&eos);
        match diagnostics::detect_tov_border_index(self, diagnostics::TOV_BORDER_THRESHOLD) {
            Some(i) if i == self.n => return Err(SchemeError::BorderNotFound { t_bar: self.t_bar }),
            Some(i) => self.bt = self.b_at_cell(i) * self.grid.x(i).powf(-expo),
            None => {}
        }
        let xe = self.grid.edge_x(self.n + 1);
        let tov = crate::models::tov_state(xe, self.bt, &eos);
        self.edges[self.n + 1] = Edge {
            a: tov.metric.a,
            b: tov.metric.b,
            m: tov.mass,
        };
        Ok(())
    }

    /// Solves the Riemann problem at edge `i` between cells `i−1` and `i`.
    pub fn riemann_at(&self, i: usize) -> Result<WaveFan, SchemeError> {
        riemann::solve_middle_state(self.fluid[i - 1], self.fluid[i], &self.setup.eos, self.eps)
            .map_err(|source| SchemeError::Riemann { edge: i, source })
    }

    /// One full step of length at most `max_dt`.
    pub fn advance(&mut self, max_dt: f64) -> Result<StepReport, SchemeError> {
        let eos = self.setup.eos;
        let n = self.n;
        let dx = self.grid.dx;
        let dt = cfl_dt(self).min(max_dt);
        let fans: Vec<Result<WaveFan, SchemeError>> =
            (1..=n + 1).into_par_iter().map(|i| self.riemann_at(i)).collect();
        let mut report = StepReport {
            dt,
            max_light_speed: dx / (2.0 * cfl_dt(self)),
            ..Default::default()
        };
        let mut star = vec![FluidState::new(0.0, 0.0); n + 2];
        for (k, fan) in fans.into_iter().enumerate() {
            let fan = fan?;
            let i = k + 1;
            star[i] = fan.sample(0.0);
            report.regions[region_index(fan.region)] += 1;
            report.max_wave_speed = report
                .max_wave_speed
                .max(fan.max_speed() * self.edges[i].light_speed());
        }
        let mut new_u = Vec::with_capacity(n);
        for i in 1..=n {
            let avg = godunov_cell_update(
                self.u[i],
                star[i],
                star[i + 1],
                self.fluid[i],
                &self.edges[i],
                dt,
                dx,
                &eos,
            );
            let u = ode_step(avg, &self.edges[i], &self.edges[i + 1], self.grid.x(i), dt, &eos)
                .map_err(|source| SchemeError::NonPhysicalState {
                    index: i,
                    t_bar: self.t_bar,
                    source,
                })?;
            new_u.push(u);
        }
        for (k, u) in new_u.into_iter().enumerate() {
            let i = k + 1;
            let f = eos.from_conserved(u).map_err(|source| SchemeError::NonPhysicalState {
                index: i,
                t_bar: self.t_bar,
                source,
            })?;
            self.u[i] = u;
            self.fluid[i] = f;
        }
        self.t_bar += dt;
        self.steps += 1;
        self.refresh_boundaries()?;
        self.update_mass_metric()?;
        self.rematch_tov_timescale()?;
        report.t_bar = self.t_bar;
        report.bt = self.bt;
        Ok(report)
    }

    /// Drops the rightmost active cell; it becomes the frozen right ghost.
    pub fn chop_right(&mut self, min_cells: usize) -> Result<(), SchemeError> {
        if self.n <= min_cells.max(3) {
            return Err(SchemeError::GridExhausted { remaining: self.n });
        }
        self.n -= 1;
        self.right = RightBoundary::Chopped;
        self.update_mass_metric()
    }

    /// Profiles of the active cells as `(x, fluid, A, B, M)` with metric averaged to centres.
    pub fn profile(&self) -> Vec<CellSample> {
        (1..=self.n)
            .map(|i| CellSample {
                x: self.grid.x(i),
                rho: self.fluid[i].rho,
                v: self.fluid[i].v,
                a: self.a_at_cell(i),
                b: self.b_at_cell(i),
                m: self.m_at_cell(i),
            })
            .collect()
    }
}

/// One row of a snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellSample {
    pub x: f64,
    pub rho: f64,
    pub v: f64,
    pub a: f64,
    pub b: f64,
    pub m: f64,
}

impl CellSample {
    pub fn light_speed(&self) -> f64 {
        (self.a * self.b).sqrt()
    }

    /// Black-hole number `1 − A`, the edge average of `2M/r̄`.
    pub fn mu(&self) -> f64 {
        1.0 - self.a
    }
}

/// Per-step record kept for weak-form residuals.
#[derive(Debug, Clone)]
pub struct StepRecord {
    pub t_bar: f64,
    pub dt: f64,
    pub n: usize,
    pub fluid: Vec<FluidState>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, Default)]
pub struct History {
    pub records: Vec<StepRecord>,
}

impl History {
    /// Records the state at the start of a step of length `dt`.
    pub fn push(&mut self, state: &SimState, dt: f64) {
        self.records.push(StepRecord {
            t_bar: state.t_bar,
            dt,
            n: state.n,
            fluid: state.fluid[..=state.n + 1].to_vec(),
            edges: state.edges[..=state.n + 1].to_vec(),
        });
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StopReason {
    ReachedEnd,
    Horizon,
    BoundaryHit,
    GridExhausted,
    Hook,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub steps: usize,
    pub t_bar: f64,
    pub stop: StopReason,
    pub detail: Option<String>,
}

/// Options for [`run`].
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Keep stepping past a boundary hit by chopping one cell per step.
    pub continue_chop: bool,
    pub min_cells: usize,
    pub record_history: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            continue_chop: false,
            min_cells: 8,
            record_history: false,
        }
    }
}

/// Steps until `t_end` (the last step is clamped to land on it exactly). The
/// hook sees the state after every step and may stop the run by returning `false`.
/// Horizons and boundary hits end the run with a flagged summary; other
/// failures are errors.
pub fn run(
    state: &mut SimState,
    t_end: f64,
    opts: RunOptions,
    history: Option<&mut History>,
    mut hook: impl FnMut(&SimState, &StepReport) -> bool,
) -> Result<RunSummary, SchemeError> {
    let mut history = history;
    let mut chopping = false;
    let finish = |state: &SimState, stop, detail: Option<String>| RunSummary {
        steps: state.steps,
        t_bar: state.t_bar,
        stop,
        detail,
    };
    loop {
        let remaining = t_end - state.t_bar;
        if remaining <= 1e-14 * t_end.abs().max(1.0) {
            return Ok(finish(state, StopReason::ReachedEnd, None));
        }
        if chopping {
            match state.chop_right(opts.min_cells) {
                Ok(()) => {}
                Err(SchemeError::GridExhausted { remaining }) => {
                    return Ok(finish(state, StopReason::GridExhausted, Some(format!("{remaining} cells left"))))
                }
                Err(e @ SchemeError::HorizonEncountered { .. }) => {
                    return Ok(finish(state, StopReason::Horizon, Some(e.to_string())))
                }
                Err(e) => return Err(e),
            }
        }
        if let Some(h) = history.as_deref_mut() {
            if opts.record_history {
                h.push(state, cfl_dt(state).min(remaining));
            }
        }
        match state.advance(remaining) {
            Ok(report) => {
                if !hook(state, &report) {
                    return Ok(finish(state, StopReason::Hook, None));
                }
            }
            Err(e @ SchemeError::HorizonEncountered { .. }) => {
                return Ok(finish(state, StopReason::Horizon, Some(e.to_string())))
            }
            Err(SchemeError::BorderNotFound { t_bar }) => {
                if opts.continue_chop {
                    chopping = true;
                    let report = StepReport {
                        t_bar,
                        bt: state.bt,
                        ..Default::default()
                    };
                    if !hook(state, &report) {
                        return Ok(finish(state, StopReason::Hook, None));
                    }
                } else {
                    return Ok(finish(
                        state,
                        StopReason::BoundaryHit,
                        Some(format!("interaction region reached r_max at t = {t_bar}")),
                    ));
                }
            }
            Err(e) => return Err(e),
        }
    }
}

/// Average of the half Godunov cell next to a Riemann problem, by adaptive
/// Gauss–Legendre quadrature of the exact self-similar solution, split at the
/// wave edges. `Side::Left` is the half to the right of the Riemann problem
/// (the left half of the cell owning its right state).
pub fn half_cell_average_quadrature(
    fan: &WaveFan,
    half: Side,
    light_speed: f64,
    dt: f64,
    dx: f64,
    eos: &EosParams,
) -> Conserved {
    let reach = 0.5 * dx / (light_speed * dt);
    let (lo, hi) = match half {
        Side::Left => (0.0, reach),
        Side::Right => (-reach, 0.0),
    };
    let mut cuts = vec![lo, hi];
    let (a1, b1) = fan.wave1.span();
    let (a2, b2) = fan.wave2.span();
    for c in [a1, b1, a2, b2] {
        if c > lo && c < hi {
            cuts.push(c);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let scale = [fan.left, fan.middle, fan.right]
        .iter()
        .map(|f| {
            let u = eos.to_conserved(*f);
            u.u0.abs().max(u.u1.abs())
        })
        .fold(0.0, f64::max);
    let u = |xi: f64| eos.to_conserved(fan.sample(xi));
    let mut acc = Conserved::new(0.0, 0.0);
    for w in cuts.windows(2) {
        let whole = gauss5(&u, w[0], w[1]);
        acc = acc + adaptive_gauss(&u, w[0], w[1], whole, 1e-12 * scale, 40);
    }
    acc * (1.0 / reach)
}

fn gauss5(u: &impl Fn(f64) -> Conserved, a: f64, b: f64) -> Conserved {
    const NODES: [(f64, f64); 5] = [
        (0.0, 0.568_888_888_888_888_9),
        (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
        (0.906_179_845_938_664, 0.236_926_885_056_189_1),
    ];
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    NODES
        .iter()
        .fold(Conserved::new(0.0, 0.0), |acc, &(x, w)| acc + u(mid + half * x) * (half * w))
}

/// Bisects until the two halves agree with the whole to `tol` per unit width.
fn adaptive_gauss(u: &impl Fn(f64) -> Conserved, a: f64, b: f64, whole: Conserved, tol: f64, depth: u32) -> Conserved {
    let m = 0.5 * (a + b);
    let (l, r) = (gauss5(u, a, m), gauss5(u, m, b));
    let sum = l + r;
    let diff = sum - whole;
    if depth == 0 || diff.u0.abs().max(diff.u1.abs()) <= tol * (b - a) {
        return sum;
    }
    adaptive_gauss(u, a, m, l, tol, depth - 1) + adaptive_gauss(u, m, b, r, tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{ModelSpec, ModelVariant};

    const EOS: EosParams = EosParams { sigma: 1.0 / 3.0 };

    fn frw1(n: usize) -> SimState {
        let setup = ModelSpec::new(ModelVariant::Frw1, EOS).setup(15.0).unwrap();
        init(&setup, SimGrid::new(3.0, 7.0, n).unwrap(), 1e-10).unwrap()
    }

    fn tov(n: usize) -> SimState {
        let setup = ModelSpec::new(ModelVariant::Tov { b0: 1.0 }, EOS).setup(0.0).unwrap();
        init(&setup, SimGrid::new(3.0, 7.0, n).unwrap(), 1e-10).unwrap()
    }

    #[test]
    fn grid_geometry() {
        let g = SimGrid::new(3.0, 7.0, 9).unwrap();
        assert_eq!(g.dx, 0.5);
        assert_eq!(g.x(1), 3.0);
        assert_eq!(g.x(9), 7.0);
        assert_eq!(g.edge_x(1), 2.75);
        assert!(SimGrid::new(3.0, 7.0, 4).is_err());
        assert!(SimGrid::new(7.0, 3.0, 64).is_err());
    }

    #[test]
    fn flat_cfl() {
        let mut s = frw1(41);
        for e in s.edges.iter_mut() {
            *e = Edge { a: 1.0, b: 1.0, m: 0.0 };
        }
        assert!((cfl_dt(&s) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn tov_cfl_set_by_right_edge() {
        let s = tov(64);
        let c = s.edges[s.n + 1].light_speed();
        assert!((cfl_dt(&s) - s.grid.dx / (2.0 * c)).abs() < 1e-15);
    }

    #[test]
    fn matched_discontinuity_lands_on_an_edge() {
        let setup = ModelSpec::new(ModelVariant::MatchedFrw1Tov { r0: 5.0, reversed: false }, EOS)
            .setup(0.0)
            .unwrap();
        let s = init(&setup, SimGrid::new(3.0, 7.0, 64).unwrap(), 1e-10).unwrap();
        let i = (1..=s.n).find(|&i| s.grid.x(i) > 5.0).unwrap();
        assert!(s.grid.x(i - 1) < 5.0);
        let ratio = s.fluid[i - 1].rho / s.fluid[i].rho;
        assert!(ratio > 2.9 && ratio < 3.1);
        assert!(s.edges[1..=s.n + 1].iter().all(|e| e.a > 0.0 && e.a <= 1.0 && e.b > 0.0));
    }

    #[test]
    fn godunov_with_equal_states_is_identity() {
        let f = FluidState::new(2.0, 0.3);
        let u = EOS.to_conserved(f);
        let e = Edge { a: 0.7, b: 1.3, m: 0.1 };
        assert_eq!(godunov_cell_update(u, f, f, f, &e, 0.01, 0.1, &EOS), u);
    }

    #[test]
    fn source_vanishing_cases() {
        let g = source_g(0.6, 1.2, FluidState::new(1.0, 0.0), 3.0, &EOS);
        assert_eq!(g.u0, 0.0);
        let g = source_g(1.0, 1.0, FluidState::new(1e-300, 0.2), 3.0, &EOS);
        assert!(g.u0.abs() < 1e-290 && g.u1.abs() < 1e-290);
        let u = Conserved::new(1.0, 0.1);
        let e = Edge { a: 0.9, b: 1.1, m: 0.0 };
        assert_eq!(ode_step(u, &e, &e, 3.0, 0.0, &EOS).unwrap(), u);
    }

    #[test]
    fn vacuum_like_mass_is_anchor_only() {
        let mut s = frw1(16);
        for i in 0..s.fluid.len() {
            s.set_cell(i, FluidState::new(1e-300, 0.0));
        }
        let m0 = s.edges[1].m;
        s.update_mass_metric().unwrap();
        for i in 1..=s.n + 1 {
            assert!((s.edges[i].m - m0).abs() < 1e-250);
            assert!((s.edges[i].a - (1.0 - 2.0 * m0 / s.grid.edge_x(i))).abs() < 1e-14);
        }
    }

    #[test]
    fn metric_integration_matches_closed_forms() {
        for n in [128usize, 256] {
            let mut s = tov(n);
            s.update_mass_metric().unwrap();
            let err_a = (1..=n + 1).map(|i| (s.edges[i].a - 4.0 / 7.0).abs()).fold(0.0, f64::max);
            let err_b = (1..=n + 1)
                .map(|i| (s.edges[i].b - s.grid.edge_x(i)).abs())
                .fold(0.0, f64::max);
            assert!(err_a < 10.0 * s.grid.dx && err_b < 10.0 * s.grid.dx);

            let mut f = frw1(n);
            f.update_mass_metric().unwrap();
            let err = (1..=n + 1)
                .map(|i| {
                    let v = crate::models::frw1_state(15.0, f.grid.edge_x(i)).unwrap().fluid.v;
                    (f.edges[i].a - (1.0 - v * v)).abs()
                })
                .fold(0.0, f64::max);
            assert!(err < 2.0 * f.grid.dx, "{err}");
        }
    }

    #[test]
    fn tov_step_is_nearly_static() {
        let mut errs = vec![];
        for n in [64usize, 128] {
            let mut s = tov(n);
            let before = s.fluid.clone();
            s.advance(f64::INFINITY).unwrap();
            let e = (1..=n)
                .map(|i| (s.fluid[i].rho - before[i].rho).abs() / before[i].rho)
                .fold(0.0, f64::max);
            errs.push(e);
            assert!((s.bt - 1.0).abs() < 1e-12);
        }
        assert!(errs[0] < 0.05, "{errs:?}");
    }

    #[test]
    fn frw1_single_step_tracks_exact_solution() {
        let mut errs = vec![];
        for n in [128usize, 256] {
            let mut s = frw1(n);
            s.advance(f64::INFINITY).unwrap();
            let e = (1..=n)
                .map(|i| {
                    let ex = crate::models::frw1_state(s.t_bar, s.grid.x(i)).unwrap().fluid;
                    (s.fluid[i].rho - ex.rho).abs() / ex.rho
                })
                .fold(0.0, f64::max);
            errs.push(e);
        }
        assert!(errs[1] < errs[0], "{errs:?}");
        assert!(errs[1] < 1e-4, "{errs:?}");
    }

    #[test]
    fn frw1_dt_is_constant_and_fluid_decays() {
        let mut s = frw1(64);
        let rho0 = s.fluid[32].rho;
        let mut dts = vec![];
        let sum = run(&mut s, 16.0, RunOptions::default(), None, |_, r| {
            dts.push(r.dt);
            true
        })
        .unwrap();
        assert_eq!(sum.stop, StopReason::ReachedEnd);
        assert!((s.t_bar - 16.0).abs() < 1e-12);
        for w in dts[..dts.len() - 1].windows(2) {
            assert!((w[0] - w[1]).abs() < 1e-2 * w[0]);
        }
        assert!(s.fluid[32].rho < rho0);
    }

    #[test]
    fn zero_length_run_returns_initial_state() {
        let mut s = frw1(32);
        let before = s.fluid.clone();
        let sum = run(&mut s, 15.0, RunOptions::default(), None, |_, _| true).unwrap();
        assert_eq!(sum.steps, 0);
        assert_eq!(s.fluid, before);
    }

    #[test]
    fn chopping_shrinks_and_exhausts() {
        let mut s = frw1(12);
        let before = s.fluid.clone();
        s.chop_right(8).unwrap();
        assert_eq!(s.n, 11);
        assert_eq!(s.right, RightBoundary::Chopped);
        assert_eq!(&s.fluid[..=12], &before[..=12]);
        for _ in 0..3 {
            s.chop_right(8).unwrap();
        }
        assert!(matches!(s.chop_right(8), Err(SchemeError::GridExhausted { remaining: 8 })));
    }

    #[test]
    fn cfl_respected_in_matched_run() {
        let setup = ModelSpec::new(ModelVariant::MatchedFrw1Tov { r0: 5.0, reversed: false }, EOS)
            .setup(0.0)
            .unwrap();
        let mut s = init(&setup, SimGrid::new(3.0, 7.0, 64).unwrap(), 1e-10).unwrap();
        let t_end = s.t_bar + 0.2;
        run(&mut s, t_end, RunOptions::default(), None, |st, r| {
            assert!(r.max_wave_speed * r.dt <= 0.5 * st.grid.dx * (1.0 + 1e-12));
            true
        })
        .unwrap();
    }

    #[test]
    fn quadrature_average_obeys_time_dilation_relation() {
        let ul = FluidState::new(2.0, 0.2);
        let uc = FluidState::new(1.0, -0.1);
        let fan = riemann::solve_middle_state(ul, uc, &EOS, 1e-12).unwrap();
        let (alpha, dx) = (1.3, 0.1);
        let full = dx / (2.0 * alpha);
        let dt = 0.37 * full;
        let a_full = half_cell_average_quadrature(&fan, Side::Left, alpha, full, dx, &EOS);
        let a_dt = half_cell_average_quadrature(&fan, Side::Left, alpha, dt, dx, &EOS);
        let c = EOS.to_conserved(uc);
        let affine = a_full * 0.37 + c * 0.63;
        assert!((a_dt.u0 - affine.u0).abs() < 1e-10 * c.u0);
        assert!((a_dt.u1 - affine.u1).abs() < 1e-10 * c.u0);
    }
}
