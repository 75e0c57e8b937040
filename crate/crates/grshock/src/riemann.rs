//! Exact Riemann solver for the flat-space relativistic Euler system with `p = σρ`.
//!
//! Wave curves are drawn in the plane of Riemann invariants `(r, s)`, where
//! they are independent of the base point: every curve is a rigid
//! translation of the one through the origin. Rarefactions are axis-parallel
//! lines; shock curves are parametrised by a strength `β ≥ 0`.

use crate::relfluid::{
    lorentz_compose, rapidity, EosParams, FluidState, InvariantBranch, RiemannInvariants,
};
use serde::Serialize;
use thiserror::Error;

/// Bisection cap; exceeding it surfaces as [`RiemannError::NoConvergence`].
pub const MAX_ITERATIONS: usize = 200;
/// Default rs-plane tolerance.
pub const DEFAULT_EPS: f64 = 1e-10;
/// Bracket search starts at `10^5`.
const INITIAL_POWER: i32 = 5;
/// Below `10^-20` a strength is treated as zero.
const MIN_POWER: i32 = -20;
const MAX_POWER: i32 = 300;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum RiemannError {
    #[error("bisection did not converge within {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("non-physical input state (rho = {rho}, v = {v})")]
    NonPhysicalInput { rho: f64, v: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WaveKind {
    Shock,
    Rarefaction,
}

/// Displacement `(Δr, Δs)` of a wave curve at strength `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveCurvePoint {
    pub beta: f64,
    pub dr: f64,
    pub ds: f64,
}

/// Wave pattern of the solution, named by the quadrant of `(Δr, Δs)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    /// 1-rarefaction, 2-shock.
    I,
    /// Two shocks.
    II,
    /// 1-shock, 2-rarefaction.
    III,
    /// Two rarefactions.
    IV,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Wave {
    Shock {
        beta: f64,
        speed: f64,
    },
    /// `head_speed` is the edge bordering the undisturbed outer state,
    /// `tail_speed` the edge bordering the middle state.
    Rarefaction {
        strength: f64,
        head_speed: f64,
        tail_speed: f64,
    },
}

impl Wave {
    /// Leftmost and rightmost speeds occupied by the wave.
    pub fn span(&self) -> (f64, f64) {
        match *self {
            Wave::Shock { speed, .. } => (speed, speed),
            Wave::Rarefaction {
                head_speed,
                tail_speed,
                ..
            } => (head_speed.min(tail_speed), head_speed.max(tail_speed)),
        }
    }

    pub fn is_shock(&self) -> bool {
        matches!(self, Wave::Shock { .. })
    }
}

/// Complete self-similar solution of one Riemann problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveFan {
    pub left: FluidState,
    pub middle: FluidState,
    pub right: FluidState,
    pub wave1: Wave,
    pub wave2: Wave,
    pub region: Region,
    #[serde(skip)]
    pub eos: EosParams,
}

/// `f₊(β) = 1 + β(1 − √(1+2/β))`, evaluated without cancellation; `f₊ ∈ (0, 1]`.
pub fn f_plus(beta: f64) -> f64 {
    1.0 / f_minus(beta)
}

/// `f₋(β) = 1 + β(1 + √(1+2/β)) = 1/f₊(β)`; `f₋ ≥ 1`.
pub fn f_minus(beta: f64) -> f64 {
    if beta <= 0.0 {
        return 1.0;
    }
    1.0 + beta + (beta * (beta + 2.0)).sqrt()
}

/// Shock strength for a density ratio `q` (either orientation): inverse of `f₋`.
pub fn beta_from_density_ratio(q: f64) -> f64 {
    (q - 1.0) * (q - 1.0) / (2.0 * q)
}

/// Shock strength joining velocities `v` and `vl` on a common shock curve.
pub fn beta_of(v: f64, vl: f64, eos: &EosParams) -> f64 {
    let dv = v - vl;
    dv * dv / ((1.0 - v * v) * (1.0 - vl * vl)) / eos.k()
}

/// Shock speed measured in the rest frame of the denser (post-shock) state.
pub fn shock_rest_speed(beta: f64, eos: &EosParams) -> f64 {
    let f = f_plus(beta);
    ((f + eos.sigma) / (f + 1.0 / eos.sigma)).sqrt()
}

/// Lab-frame shock speed given the post-shock velocity; 1-shocks move left in that frame.
pub fn shock_speed(family: Family, beta: f64, v_post: f64, eos: &EosParams) -> f64 {
    let w = shock_rest_speed(beta, eos);
    match family {
        Family::One => lorentz_compose(v_post, -w),
        Family::Two => lorentz_compose(v_post, w),
    }
}

pub fn wave_curve(family: Family, kind: WaveKind, beta: f64, eos: &EosParams) -> WaveCurvePoint {
    let (dr, ds) = match kind {
        WaveKind::Rarefaction => match family {
            Family::One => (beta, 0.0),
            Family::Two => (0.0, beta),
        },
        WaveKind::Shock => {
            let k = eos.k();
            let velocity_part = 0.5 * f_plus(2.0 * k * beta).ln();
            let density_part = (k / 2.0).sqrt() * f_plus(beta).ln();
            match family {
                Family::One => (velocity_part + density_part, velocity_part - density_part),
                Family::Two => (velocity_part - density_part, velocity_part + density_part),
            }
        }
    };
    WaveCurvePoint { beta, dr, ds }
}

/// Quadrant of `(r_R − r_L, s_R − s_L)`. The (−,−) quadrant is reported as
/// region II; [`solve_middle_state`] reassigns it to I or III when the
/// two-shock construction has no solution.
pub fn classify_region(ul: RiemannInvariants, ur: RiemannInvariants) -> Region {
    let dr = ur.r - ul.r;
    let ds = ur.s - ul.s;
    match (dr >= 0.0, ds >= 0.0) {
        (true, true) => Region::IV,
        (false, true) => Region::III,
        (true, false) => Region::I,
        (false, false) => Region::II,
    }
}

enum Root {
    Found(f64),
    /// Target lies closer to the curve origin than `10^-20` strength.
    Vanishing,
}

/// Solves `g(β) = target` for a strictly decreasing `g` with `g(0) = 0`.
fn solve_decreasing(g: impl Fn(f64) -> f64, target: f64, eps: f64) -> Result<Root, RiemannError> {
    if target.abs() < eps {
        return Ok(Root::Vanishing);
    }
    let mut k = INITIAL_POWER;
    let (mut lo, mut hi);
    if g(10f64.powi(k)) > target {
        loop {
            k += 1;
            if k > MAX_POWER {
                return Err(RiemannError::NoConvergence {
                    iterations: 0,
                    residual: target,
                });
            }
            if g(10f64.powi(k)) <= target {
                break;
            }
        }
        lo = 10f64.powi(k - 1);
        hi = 10f64.powi(k);
    } else {
        loop {
            k -= 1;
            if k < MIN_POWER {
                return Ok(Root::Vanishing);
            }
            if g(10f64.powi(k)) > target {
                break;
            }
        }
        lo = 10f64.powi(k);
        hi = 10f64.powi(k + 1);
    }
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        let val = g(mid) - target;
        residual = val.abs();
        if residual < eps || mid <= lo || mid >= hi {
            return Ok(Root::Found(mid));
        }
        if val > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(RiemannError::NoConvergence {
        iterations: MAX_ITERATIONS,
        residual,
    })
}

fn check_input(f: FluidState) -> Result<(), RiemannError> {
    if f.is_physical() && f.v.is_finite() {
        Ok(())
    } else {
        Err(RiemannError::NonPhysicalInput { rho: f.rho, v: f.v })
    }
}

fn root_value(root: Root) -> f64 {
    match root {
        Root::Found(b) => b,
        Root::Vanishing => 0.0,
    }
}

/// Finds the middle state and both waves.
pub fn solve_middle_state(
    ul: FluidState,
    ur: FluidState,
    eos: &EosParams,
    eps: f64,
) -> Result<WaveFan, RiemannError> {
    check_input(ul)?;
    check_input(ur)?;
    let il = eos.to_invariants(ul);
    let ir = eos.to_invariants(ur);
    if ul == ur {
        return Ok(build_fan(ul, ul, ur, Strength::Rare(0.0), Strength::Rare(0.0), Region::IV, eos));
    }
    let dr = ir.r - il.r;
    let ds = ir.s - il.s;
    let s1 = |b: f64| wave_curve(Family::One, WaveKind::Shock, b, eos);
    let s2 = |b: f64| wave_curve(Family::Two, WaveKind::Shock, b, eos);

    // Pattern and strengths; the middle state follows from the invariants.
    let solve_iii = || -> Result<(RiemannInvariants, f64), RiemannError> {
        let b = root_value(solve_decreasing(|b| s1(b).dr, dr, eps)?);
        let p = s1(b);
        Ok((RiemannInvariants { r: il.r + p.dr, s: il.s + p.ds }, b))
    };
    let solve_i = || -> Result<(RiemannInvariants, f64), RiemannError> {
        let b = root_value(solve_decreasing(|b| s2(b).ds, ds, eps)?);
        let p = s2(b);
        Ok((RiemannInvariants { r: ir.r - p.dr, s: il.s }, b))
    };

    let (region, middle, w1, w2) = match classify_region(il, ir) {
        Region::IV => {
            let m = RiemannInvariants { r: ir.r, s: il.s };
            (Region::IV, m, Strength::Rare(dr), Strength::Rare(ds))
        }
        Region::III => {
            let (m, b) = solve_iii()?;
            (Region::III, m, Strength::Shock(b), Strength::Rare(ir.s - m.s))
        }
        Region::I => {
            let (m, b) = solve_i()?;
            (Region::I, m, Strength::Rare(m.r - il.r), Strength::Shock(b))
        }
        Region::II => {
            let (m3, b3) = solve_iii()?;
            if ds >= s1(b3).ds {
                (Region::III, m3, Strength::Shock(b3), Strength::Rare(ir.s - m3.s))
            } else {
                let (m1, b1) = solve_i()?;
                if dr >= s2(b1).dr {
                    (Region::I, m1, Strength::Rare(m1.r - il.r), Strength::Shock(b1))
                } else {
                    let (m, b1, b2) = solve_two_shocks(ul, ur, il, eos, eps)?;
                    (Region::II, m, Strength::Shock(b1), Strength::Shock(b2))
                }
            }
        }
    };
    let mid = eos.from_invariants(middle);
    Ok(build_fan(ul, mid, ur, w1, w2, region, eos))
}

/// Two-shock case. Along the 1-shock curve from `U_L` the density rises
/// monotonically, which fixes the 2-shock strength in closed form from the
/// density ratio; the remaining rapidity mismatch is monotone in the
/// 1-shock strength and is bisected to zero.
fn solve_two_shocks(
    ul: FluidState,
    ur: FluidState,
    il: RiemannInvariants,
    eos: &EosParams,
    eps: f64,
) -> Result<(RiemannInvariants, f64, f64), RiemannError> {
    let k = eos.k();
    let target = rapidity(ur.v);
    let a_l = rapidity(ul.v);
    let beta2_for = |b1: f64| {
        let q = ul.rho * f_minus(b1) / ur.rho;
        beta_from_density_ratio(q.max(1.0))
    };
    let mismatch = |b1: f64| {
        let a_m = a_l + 0.5 * f_plus(2.0 * k * b1).ln();
        a_m + 0.5 * f_plus(2.0 * k * beta2_for(b1)).ln() - target
    };
    let mut lo = if ur.rho > ul.rho {
        beta_from_density_ratio(ur.rho / ul.rho)
    } else {
        0.0
    };
    let mut hi = lo.max(1e-12);
    while mismatch(hi) > 0.0 {
        hi *= 10.0;
        if hi > 1e300 {
            return Err(RiemannError::NoConvergence {
                iterations: 0,
                residual: mismatch(hi),
            });
        }
    }
    let mut iterations = 0;
    let mut b1 = 0.5 * (lo + hi);
    loop {
        let val = mismatch(b1);
        if val.abs() < eps || b1 <= lo || b1 >= hi {
            break;
        }
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(RiemannError::NoConvergence {
                iterations,
                residual: val.abs(),
            });
        }
        if val > 0.0 {
            lo = b1;
        } else {
            hi = b1;
        }
        b1 = 0.5 * (lo + hi);
    }
    let p = wave_curve(Family::One, WaveKind::Shock, b1, eos);
    let m = RiemannInvariants {
        r: il.r + p.dr,
        s: il.s + p.ds,
    };
    Ok((m, b1, beta2_for(b1)))
}

#[derive(Debug, Clone, Copy)]
enum Strength {
    Shock(f64),
    Rare(f64),
}

fn build_fan(
    ul: FluidState,
    um: FluidState,
    ur: FluidState,
    w1: Strength,
    w2: Strength,
    region: Region,
    eos: &EosParams,
) -> WaveFan {
    let wave1 = match w1 {
        Strength::Shock(beta) => Wave::Shock {
            beta,
            speed: shock_speed(Family::One, beta, um.v, eos),
        },
        Strength::Rare(strength) => Wave::Rarefaction {
            strength,
            head_speed: eos.eigenvalues(ul).0,
            tail_speed: eos.eigenvalues(um).0,
        },
    };
    let wave2 = match w2 {
        Strength::Shock(beta) => Wave::Shock {
            beta,
            speed: shock_speed(Family::Two, beta, um.v, eos),
        },
        Strength::Rare(strength) => Wave::Rarefaction {
            strength,
            head_speed: eos.eigenvalues(ur).1,
            tail_speed: eos.eigenvalues(um).1,
        },
    };
    WaveFan {
        left: ul,
        middle: um,
        right: ur,
        wave1,
        wave2,
        region,
        eos: *eos,
    }
}

/// A [`WaveFan`] with velocities and wave speeds expressed in units where the
/// light speed is `light_speed`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FanReport {
    pub light_speed: f64,
    pub left: FluidState,
    pub middle: FluidState,
    pub right: FluidState,
    pub wave1: Wave,
    pub wave2: Wave,
    pub region: Region,
}

impl Wave {
    fn scaled(self, c: f64) -> Wave {
        match self {
            Wave::Shock { beta, speed } => Wave::Shock { beta, speed: speed * c },
            Wave::Rarefaction {
                strength,
                head_speed,
                tail_speed,
            } => Wave::Rarefaction {
                strength,
                head_speed: head_speed * c,
                tail_speed: tail_speed * c,
            },
        }
    }
}

impl WaveFan {
    pub fn report(&self, light_speed: f64) -> FanReport {
        let c = light_speed;
        let scale = |f: FluidState| FluidState::new(f.rho, f.v * c);
        FanReport {
            light_speed: c,
            left: scale(self.left),
            middle: scale(self.middle),
            right: scale(self.right),
            wave1: self.wave1.scaled(c),
            wave2: self.wave2.scaled(c),
            region: self.region,
        }
    }

    /// State at self-similar coordinate `xi = x/t`.
    pub fn sample(&self, xi: f64) -> FluidState {
        let eos = &self.eos;
        let (a1, b1) = self.wave1.span();
        let (a2, b2) = self.wave2.span();
        if xi < a1 {
            return self.left;
        }
        if xi <= b1 && b1 > a1 {
            let v = eos.velocity_from_lambda1(xi);
            let s = eos.to_invariants(self.left).s;
            return FluidState::new(eos.partial_density(s, InvariantBranch::S, v), v);
        }
        if xi < a2 || (xi == a2 && self.wave2.is_shock()) {
            return self.middle;
        }
        if xi <= b2 && b2 > a2 {
            let v = eos.velocity_from_lambda2(xi);
            let r = eos.to_invariants(self.right).r;
            return FluidState::new(eos.partial_density(r, InvariantBranch::R, v), v);
        }
        self.right
    }

    /// Fastest absolute signal speed in the fan.
    pub fn max_speed(&self) -> f64 {
        let (a, _) = self.wave1.span();
        let (_, b) = self.wave2.span();
        a.abs().max(b.abs())
    }
}

/// Solves and samples in one call.
pub fn sample(
    ul: FluidState,
    ur: FluidState,
    xi: f64,
    eos: &EosParams,
    eps: f64,
) -> Result<FluidState, RiemannError> {
    Ok(solve_middle_state(ul, ur, eos, eps)?.sample(xi))
}

/// Max invariant mismatch after composing both waves of `fan` onto its left state.
pub fn recomposition_error(fan: &WaveFan, eos: &EosParams) -> f64 {
    let il = eos.to_invariants(fan.left);
    let ir = eos.to_invariants(fan.right);
    let step = |w: &Wave, fam: Family, base: RiemannInvariants| -> RiemannInvariants {
        let p = match *w {
            Wave::Shock { beta, .. } => wave_curve(fam, WaveKind::Shock, beta, eos),
            Wave::Rarefaction { strength, .. } => {
                wave_curve(fam, WaveKind::Rarefaction, strength, eos)
            }
        };
        RiemannInvariants {
            r: base.r + p.dr,
            s: base.s + p.ds,
        }
    };
    let m = step(&fan.wave1, Family::One, il);
    let end = step(&fan.wave2, Family::Two, m);
    (end.r - ir.r).abs().max((end.s - ir.s).abs())
}
