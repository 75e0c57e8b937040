//! Closed-form spacetimes in standard Schwarzschild coordinates
//! `ds² = −B dt̄² + A⁻¹ dr̄² + r̄² dΩ²` and their FRW/TOV matching.
//!
//! The two FRW charts describe the critical (k = 0) radiation universe and
//! are only defined for `σ = 1/3`. The TOV static isothermal sphere and the
//! matching formulas hold for any `σ ∈ (0, 1)`.

use crate::relfluid::{EosParams, FluidState};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Einstein coupling `8πG/c⁴` with `G = c = 1`.
pub const KAPPA: f64 = 8.0 * PI;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("self-similar coordinate r/t = {xi} is not subluminal")]
    SuperluminalCoordinate { xi: f64 },
    #[error("point (t = {t_bar}, r = {r_bar}) lies outside the chart")]
    OutsideDomain { t_bar: f64, r_bar: f64 },
    #[error("FRW charts require sigma = 1/3, got {sigma}")]
    UnsupportedEos { sigma: f64 },
    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricPoint {
    pub a: f64,
    pub b: f64,
}

impl MetricPoint {
    /// Coordinate speed of light `√(AB)`.
    pub fn light_speed(&self) -> f64 {
        (self.a * self.b).sqrt()
    }
}

/// Fluid, metric and enclosed mass at one spacetime point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelPoint {
    pub fluid: FluidState,
    pub metric: MetricPoint,
    pub mass: f64,
}

/// TOV density constant `γ` in `ρ = γ/r̄²`.
pub fn gamma(eos: &EosParams) -> f64 {
    let s = eos.sigma;
    s / (2.0 * PI * (1.0 + 6.0 * s + s * s))
}

fn require_radiation(eos: &EosParams) -> Result<(), ModelError> {
    if (eos.sigma - 1.0 / 3.0).abs() > 1e-12 {
        return Err(ModelError::UnsupportedEos { sigma: eos.sigma });
    }
    Ok(())
}

/// FRW velocity as a function of `ξ = r̄/t̄`, minus root; odd in `ξ`.
pub fn frw1_velocity(xi: f64) -> f64 {
    xi / (1.0 + (1.0 - xi * xi).sqrt())
}

/// FRW-1 chart (integrating factor `Ψ = 1`). Negative `t_bar` gives the time-reversed solution.
pub fn frw1_state(t_bar: f64, r_bar: f64) -> Result<ModelPoint, ModelError> {
    let xi = r_bar / t_bar;
    if !(xi.abs() < 1.0) {
        return Err(ModelError::SuperluminalCoordinate { xi });
    }
    let v = frw1_velocity(xi);
    let rho = 3.0 * v * v / (KAPPA * r_bar * r_bar);
    let a = 1.0 - v * v;
    Ok(ModelPoint {
        fluid: FluidState::new(rho, v),
        metric: MetricPoint { a, b: 1.0 / a },
        mass: 0.5 * r_bar * v * v,
    })
}

/// FRW comoving time `t` at chart point `(t̄, r̄)` of the FRW-2 chart.
pub fn frw2_comoving_time(t_bar: f64, r_bar: f64, psi0: f64) -> Result<f64, ModelError> {
    let p2 = psi0 * psi0;
    let disc = t_bar.powi(4) - r_bar * r_bar * p2 * p2;
    if !(disc >= 0.0) || t_bar <= 0.0 {
        return Err(ModelError::OutsideDomain { t_bar, r_bar });
    }
    Ok((t_bar * t_bar + disc.sqrt()) / (2.0 * p2))
}

/// Dynamical integrating factor `Ψ₀√(t/(4t²+r̄²))`.
pub fn dynamical_integrating_factor(t: f64, r_bar: f64, psi0: f64) -> f64 {
    psi0 * (t / (4.0 * t * t + r_bar * r_bar)).sqrt()
}

/// FRW-2 chart (dynamical integrating factor).
pub fn frw2_state(t_bar: f64, r_bar: f64, psi0: f64) -> Result<ModelPoint, ModelError> {
    let t = frw2_comoving_time(t_bar, r_bar, psi0)?;
    let v = r_bar / (2.0 * t);
    let rho = 3.0 / (4.0 * KAPPA * t * t);
    let psi = dynamical_integrating_factor(t, r_bar, psi0);
    let a = 1.0 - v * v;
    Ok(ModelPoint {
        fluid: FluidState::new(rho, v),
        metric: MetricPoint {
            a,
            b: 1.0 / (psi * psi * a),
        },
        mass: 0.5 * r_bar * v * v,
    })
}

/// Exponent of `r̄` in the TOV lapse, `4σ/(1+σ)`.
pub fn tov_b_exponent(eos: &EosParams) -> f64 {
    4.0 * eos.sigma / (1.0 + eos.sigma)
}

/// Static isothermal sphere.
pub fn tov_state(r_bar: f64, b0: f64, eos: &EosParams) -> ModelPoint {
    let g = gamma(eos);
    ModelPoint {
        fluid: FluidState::new(g / (r_bar * r_bar), 0.0),
        metric: MetricPoint {
            a: 1.0 - 8.0 * PI * g,
            b: b0 * r_bar.powf(tov_b_exponent(eos)),
        },
        mass: 4.0 * PI * g * r_bar,
    }
}

/// Which integrating factor to test in [`integrating_factor_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegratingFactor {
    Constant(f64),
    Dynamical { psi0: f64 },
}

/// Finite-difference residual of `∂_r̄[Ψ(1 − r̄²/4t²)] − ∂_t[Ψ r̄/2t]` with central step `h`.
pub fn integrating_factor_residual(psi: impl Fn(f64, f64) -> f64, t: f64, r_bar: f64, h: f64) -> f64 {
    let c = |t: f64, r: f64| psi(t, r) * (1.0 - r * r / (4.0 * t * t));
    let e = |t: f64, r: f64| psi(t, r) * r / (2.0 * t);
    (c(t, r_bar + h) - c(t, r_bar - h)) / (2.0 * h) - (e(t + h, r_bar) - e(t - h, r_bar)) / (2.0 * h)
}

pub fn integrating_factor_check(t: f64, r_bar: f64, which: IntegratingFactor, h: f64) -> f64 {
    match which {
        IntegratingFactor::Constant(p) => integrating_factor_residual(|_, _| p, t, r_bar, h),
        IntegratingFactor::Dynamical { psi0 } => integrating_factor_residual(
            |t, r| dynamical_integrating_factor(t, r, psi0),
            t,
            r_bar,
            h,
        ),
    }
}

/// Residuals of the FRW equations `ρ' = −3(1+σ)ρR'/R` and `(R'/R)² = κρ/3`
/// for `R = √|t|`, `ρ = 3/(4κt²)`, by central differences. Valid for both signs of `t`.
pub fn frw_constraint_residuals(t: f64, h: f64) -> (f64, f64) {
    let sigma = 1.0 / 3.0;
    let scale = |t: f64| t.abs().sqrt();
    let rho = |t: f64| 3.0 / (4.0 * KAPPA * t * t);
    let hubble = (scale(t + h) - scale(t - h)) / (2.0 * h) / scale(t);
    let drho = (rho(t + h) - rho(t - h)) / (2.0 * h);
    (
        (drho + 3.0 * (1.0 + sigma) * rho(t) * hubble) / rho(t).abs() * t.abs(),
        (hubble * hubble - KAPPA * rho(t) / 3.0) * t * t,
    )
}

/// Model selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelVariant {
    Frw1,
    Frw2 { psi0: f64 },
    Tov { b0: f64 },
    MatchedFrw1Tov { r0: f64, reversed: bool },
    MatchedFrw2Tov { r0: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub variant: ModelVariant,
    pub eos: EosParams,
}

/// Constants fixed by continuity of the metric across the initial discontinuity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchData {
    pub r0: f64,
    /// Start time `t̄₀` (negative for the reversed model).
    pub t0: f64,
    pub v0: f64,
    pub b0: f64,
    pub psi0: Option<f64>,
}

/// Fluid speed just inside the discontinuity, `√(4σ/(1+6σ+σ²))`.
pub fn match_velocity(eos: &EosParams) -> f64 {
    let s = eos.sigma;
    (4.0 * s / (1.0 + 6.0 * s + s * s)).sqrt()
}

/// Matching constants for a matched model. Unmatched variants yield `InvalidParameter`.
pub fn match_models(spec: &ModelSpec) -> Result<MatchData, ModelError> {
    let eos = &spec.eos;
    let v0 = match_velocity(eos);
    let b0_for = |r0: f64| r0.powf(-tov_b_exponent(eos)) / (1.0 - v0 * v0);
    match spec.variant {
        ModelVariant::MatchedFrw1Tov { r0, reversed } => {
            check_radius(r0)?;
            let sign = if reversed { -1.0 } else { 1.0 };
            Ok(MatchData {
                r0,
                t0: sign * r0 * (1.0 + v0 * v0) / (2.0 * v0),
                v0: sign * v0,
                b0: b0_for(r0),
                psi0: None,
            })
        }
        ModelVariant::MatchedFrw2Tov { r0 } => {
            check_radius(r0)?;
            let t_frw = r0 / (2.0 * v0);
            let psi0 = ((4.0 * t_frw * t_frw + r0 * r0) / t_frw).sqrt();
            Ok(MatchData {
                r0,
                t0: 0.5 * psi0 * psi0,
                v0,
                b0: b0_for(r0),
                psi0: Some(psi0),
            })
        }
        _ => Err(ModelError::InvalidParameter(
            "matching requires a matched model variant".into(),
        )),
    }
}

fn check_radius(r0: f64) -> Result<(), ModelError> {
    if r0 > 0.0 && r0.is_finite() {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter(format!("r0 must be positive, got {r0}")))
    }
}

/// One closed-form chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Chart {
    Frw1,
    Frw2 { psi0: f64 },
    Tov { b0: f64 },
}

impl Chart {
    pub fn point(&self, t_bar: f64, r_bar: f64, eos: &EosParams) -> Result<ModelPoint, ModelError> {
        match *self {
            Chart::Frw1 => frw1_state(t_bar, r_bar),
            Chart::Frw2 { psi0 } => frw2_state(t_bar, r_bar, psi0),
            Chart::Tov { b0 } => Ok(tov_state(r_bar, b0, eos)),
        }
    }

    pub fn is_static(&self) -> bool {
        matches!(self, Chart::Tov { .. })
    }
}

/// A model ready to be sampled: inner chart left of `r0`, outer chart right of it.
/// Pure models use the same chart on both sides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Setup {
    pub inner: Chart,
    pub outer: Chart,
    pub r0: Option<f64>,
    pub t0: f64,
    pub eos: EosParams,
    pub matching: Option<MatchData>,
}

/// Which boundary a ghost cell sits at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Ghost-cell data: fluid at the ghost centre and metric/mass at the adjacent half point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ghost {
    pub fluid: FluidState,
    pub metric: MetricPoint,
    pub mass: f64,
}

impl ModelSpec {
    pub fn new(variant: ModelVariant, eos: EosParams) -> Self {
        Self { variant, eos }
    }

    /// Resolves matching constants. `t0_pure` is the start time for unmatched models.
    pub fn setup(&self, t0_pure: f64) -> Result<Setup, ModelError> {
        let eos = self.eos;
        let pure = |c: Chart| Setup {
            inner: c,
            outer: c,
            r0: None,
            t0: t0_pure,
            eos,
            matching: None,
        };
        match self.variant {
            ModelVariant::Frw1 => {
                require_radiation(&eos)?;
                Ok(pure(Chart::Frw1))
            }
            ModelVariant::Frw2 { psi0 } => {
                require_radiation(&eos)?;
                if !(psi0 > 0.0) {
                    return Err(ModelError::InvalidParameter(format!("psi0 must be positive, got {psi0}")));
                }
                Ok(pure(Chart::Frw2 { psi0 }))
            }
            ModelVariant::Tov { b0 } => {
                if !(b0 > 0.0) {
                    return Err(ModelError::InvalidParameter(format!("b0 must be positive, got {b0}")));
                }
                Ok(pure(Chart::Tov { b0 }))
            }
            ModelVariant::MatchedFrw1Tov { .. } | ModelVariant::MatchedFrw2Tov { .. } => {
                require_radiation(&eos)?;
                let m = match_models(self)?;
                let inner = match m.psi0 {
                    Some(psi0) => Chart::Frw2 { psi0 },
                    None => Chart::Frw1,
                };
                Ok(Setup {
                    inner,
                    outer: Chart::Tov { b0: m.b0 },
                    r0: Some(m.r0),
                    t0: m.t0,
                    eos,
                    matching: Some(m),
                })
            }
        }
    }
}

impl Setup {
    /// Initial data: inner chart for `r̄ < r0`, outer chart otherwise.
    pub fn initial_profile(&self, r_bar: f64) -> Result<ModelPoint, ModelError> {
        self.exact(self.t0, r_bar)
    }

    /// Closed-form value at `(t̄, r̄)`. For matched models this is only the
    /// true solution outside the region of interaction.
    pub fn exact(&self, t_bar: f64, r_bar: f64) -> Result<ModelPoint, ModelError> {
        match self.r0 {
            Some(r0) if r_bar >= r0 => self.outer.point(t_bar, r_bar, &self.eos),
            _ => self.inner.point(t_bar, r_bar, &self.eos),
        }
    }

    /// Ghost data at time `t̄`: fluid at `x_ghost`, metric and mass at `x_half`.
    /// Right-boundary `B` for a TOV chart uses the initial time scale; the
    /// scheme replaces it with the rematched one.
    pub fn ghost(&self, side: Side, t_bar: f64, x_ghost: f64, x_half: f64) -> Result<Ghost, ModelError> {
        let chart = match side {
            Side::Left => self.inner,
            Side::Right => self.outer,
        };
        let f = chart.point(t_bar, x_ghost, &self.eos)?;
        let m = chart.point(t_bar, x_half, &self.eos)?;
        Ok(Ghost {
            fluid: f.fluid,
            metric: m.metric,
            mass: m.mass,
        })
    }
}

/// Conversion from geometric mass units (`M⊙ = 1`).
pub mod units {
    /// `G M⊙/c²` in km.
    pub const MSUN_KM: f64 = 1.47664;
    pub const LIGHT_SPEED_KM_S: f64 = 3.0e5;

    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub enum Target {
        LengthKm,
        TimeSec,
        DensityMsunPerKm3,
    }

    pub fn convert(value: f64, to: Target) -> f64 {
        match to {
            Target::LengthKm => MSUN_KM * value,
            Target::TimeSec => MSUN_KM / LIGHT_SPEED_KM_S * value,
            Target::DensityMsunPerKm3 => value / MSUN_KM.powi(3),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EOS: EosParams = EosParams { sigma: 1.0 / 3.0 };

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn gamma_closed_form() {
        assert!(rel(gamma(&EOS), 3.0 / (56.0 * PI)) < 1e-14);
        assert!(gamma(&EosParams { sigma: 1e-12 }) < 1e-12);
        assert!((1.0 - 8.0 * PI * gamma(&EOS) - 4.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn frw1_flat_limit_and_identities() {
        let p = frw1_state(1e6, 1e-3).unwrap();
        assert!(p.fluid.v.abs() < 1e-9 && (p.metric.a - 1.0).abs() < 1e-15);
        for &(t, r) in &[(15.0, 3.0), (15.0, 7.0), (5.4554, 5.0), (-5.0, 4.0)] {
            let p = frw1_state(t, r).unwrap();
            assert!(rel(KAPPA * r * r * p.fluid.rho, 3.0 * p.fluid.v * p.fluid.v) < 1e-14);
            assert!((p.metric.light_speed() - 1.0).abs() < 1e-15);
            assert!((p.metric.a - (1.0 - 2.0 * p.mass / r)).abs() < 1e-15);
        }
        assert!(matches!(frw1_state(1.0, 1.0), Err(ModelError::SuperluminalCoordinate { .. })));
    }

    #[test]
    fn frw1_velocity_textbook_form() {
        for &xi in &[0.1_f64, 0.5, 0.9, -0.6] {
            let v = (1.0 - (1.0 - xi * xi).sqrt()) / xi;
            assert!((frw1_velocity(xi) - v).abs() < 1e-15);
        }
    }

    #[test]
    fn frw1_initial_velocity_range() {
        let lo = frw1_state(15.0, 3.0).unwrap().fluid.v;
        let hi = frw1_state(15.0, 7.0).unwrap().fluid.v;
        assert!((lo - 0.1010).abs() < 5e-5 && (hi - 0.2476).abs() < 5e-5);
    }

    #[test]
    fn frw2_reduces_and_is_uniform() {
        let t0: f64 = 15.0;
        let psi0 = (2.0 * t0).sqrt();
        let t = frw2_comoving_time(t0, 1e-9, psi0).unwrap();
        assert!(rel(t, t0 * t0 / (psi0 * psi0)) < 1e-12);
        let start: Vec<f64> = (0..=40)
            .map(|i| frw2_state(t0, 3.0 + 0.1 * i as f64, psi0).unwrap().metric.light_speed())
            .collect();
        for c in &start {
            assert!((c - 1.0).abs() < 1e-10);
        }
        let end = frw2_state(t0 + 1.0, 5.0, psi0).unwrap().metric.light_speed();
        assert!((end - 16.0 / 15.0).abs() < 1e-12);
        assert!(frw2_state(1.0, 10.0, psi0).is_err());
    }

    #[test]
    fn integrating_factors_solve_the_pde_at_second_order() {
        for which in [IntegratingFactor::Constant(1.3), IntegratingFactor::Dynamical { psi0: 4.0 }] {
            let e1 = integrating_factor_check(2.0, 3.0, which, 1e-2).abs();
            let e2 = integrating_factor_check(2.0, 3.0, which, 5e-3).abs();
            assert!(e1 < 1e-4, "{which:?}: {e1}");
            if e1 > 1e-12 {
                assert!((e1 / e2).log2() > 1.8, "{which:?} order {}", (e1 / e2).log2());
            }
        }
        let bad = integrating_factor_residual(
            |t, r| dynamical_integrating_factor(t, r, 4.0) * (1.0 + 0.01 * r),
            2.0,
            3.0,
            1e-4,
        );
        assert!(bad.abs() > 1e-3);
    }

    #[test]
    fn tov_closed_forms() {
        let p = tov_state(3.0, 1.0, &EOS);
        assert!((p.metric.a - 4.0 / 7.0).abs() < 1e-15);
        assert!((tov_b_exponent(&EOS) - 1.0).abs() < 1e-15);
        assert!((p.metric.b - 3.0).abs() < 1e-14);
        assert!((2.0 * p.mass / 3.0 - 3.0 / 7.0).abs() < 1e-15);
        let ratio = p.metric.light_speed() / tov_state(7.0, 1.0, &EOS).metric.light_speed();
        assert!((ratio - (3.0_f64 / 7.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn tov_is_hydrostatic() {
        // B'/B from the metric equation equals d/dr ln(B0 r^{4σ/(1+σ)}).
        for &sigma in &[0.1, 1.0 / 3.0, 0.7] {
            let eos = EosParams { sigma };
            for &r in &[0.5, 3.0, 11.0] {
                let p = tov_state(r, 2.0, &eos);
                let a = p.metric.a;
                let t11 = sigma * p.fluid.rho;
                let lhs = (1.0 / a - 1.0) / r + KAPPA * r * t11 / a;
                assert!((lhs - tov_b_exponent(&eos) / r).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn forward_match_reference_values() {
        let spec = ModelSpec::new(ModelVariant::MatchedFrw1Tov { r0: 5.0, reversed: false }, EOS);
        let m = match_models(&spec).unwrap();
        assert!((m.t0 - 5.4554).abs() < 1e-3);
        assert!((m.v0 - (3.0_f64 / 7.0).sqrt()).abs() < 1e-15);
        let frw = frw1_state(m.t0, 5.0).unwrap();
        let tov = tov_state(5.0, m.b0, &EOS);
        assert!((frw.fluid.v - m.v0).abs() < 1e-12);
        assert!((frw.metric.a - tov.metric.a).abs() < 1e-12);
        assert!((frw.metric.b - tov.metric.b).abs() < 1e-12);
        assert!((frw.fluid.rho / tov.fluid.rho - 3.0).abs() < 1e-12);

        let far = ModelSpec::new(ModelVariant::MatchedFrw1Tov { r0: 95.0, reversed: false }, EOS);
        assert!(rel(match_models(&far).unwrap().t0, 19.0 * m.t0) < 1e-12);
    }

    #[test]
    fn frw2_match_reference_values() {
        let f1 = match_models(&ModelSpec::new(
            ModelVariant::MatchedFrw1Tov { r0: 5.0, reversed: false },
            EOS,
        ))
        .unwrap();
        let spec = ModelSpec::new(ModelVariant::MatchedFrw2Tov { r0: 5.0 }, EOS);
        let m = match_models(&spec).unwrap();
        assert!((m.t0 - 10.9109).abs() < 1e-3);
        assert!(rel(m.t0, 2.0 * f1.t0) < 1e-12);
        let psi0 = m.psi0.unwrap();
        assert!(rel(psi0, 2.0 * f1.t0.sqrt()) < 1e-12);
        let s = spec.setup(0.0).unwrap();
        let left = s.exact(m.t0, 5.0 - 1e-12).unwrap();
        let right = s.exact(m.t0, 5.0).unwrap();
        assert!((left.metric.a - right.metric.a).abs() < 1e-10);
        assert!((left.metric.b - right.metric.b).abs() < 1e-10);
        assert!((left.metric.light_speed() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reversed_match_flips_velocity_and_time() {
        let spec = ModelSpec::new(ModelVariant::MatchedFrw1Tov { r0: 5.0, reversed: true }, EOS);
        let m = match_models(&spec).unwrap();
        assert!((m.t0 + 5.4554).abs() < 1e-3 && m.v0 < 0.0);
        let p = frw1_state(m.t0, 5.0).unwrap();
        assert!((p.fluid.v - m.v0).abs() < 1e-12);
        let (a, b) = frw_constraint_residuals(m.t0, 1e-4);
        assert!(a.abs() < 1e-6 && b.abs() < 1e-6);
        let (a, b) = frw_constraint_residuals(-m.t0, 1e-4);
        assert!(a.abs() < 1e-6 && b.abs() < 1e-6);
    }

    #[test]
    fn ghosts_use_half_point_metric() {
        let s = ModelSpec::new(ModelVariant::Frw1, EOS).setup(15.0).unwrap();
        let g = s.ghost(Side::Left, 15.0, 2.9, 2.95).unwrap();
        assert_eq!(g.fluid, s.initial_profile(2.9).unwrap().fluid);
        assert_eq!(g.metric, s.initial_profile(2.95).unwrap().metric);
        let t = ModelSpec::new(ModelVariant::Tov { b0: 1.0 }, EOS).setup(0.0).unwrap();
        assert_eq!(
            t.ghost(Side::Right, 0.0, 7.1, 7.05).unwrap().fluid,
            t.ghost(Side::Right, 9.0, 7.1, 7.05).unwrap().fluid
        );
    }

    #[test]
    fn frw_requires_radiation_eos() {
        let e = ModelSpec::new(ModelVariant::Frw1, EosParams { sigma: 0.2 }).setup(15.0);
        assert!(matches!(e, Err(ModelError::UnsupportedEos { .. })));
    }

    #[test]
    fn unit_conversions() {
        use units::{convert, Target};
        assert!((convert(3.0, Target::LengthKm) - 4.43).abs() < 5e-3);
        assert!((convert(7.0, Target::LengthKm) - 10.34).abs() < 5e-3);
        assert!((convert(1.0, Target::TimeSec) * 1e6 - 4.9).abs() < 0.05);
        assert_eq!(convert(0.0, Target::DensityMsunPerKm3), 0.0);
    }
}
