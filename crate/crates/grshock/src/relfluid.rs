//! Pointwise relativistic fluid physics for the isothermal law `p = σρ`.
//!
//! Units are geometric with `c = 1`. Three coordinate systems are used for
//! the same state: fluid variables `(ρ, v)`, conserved densities `(u⁰, u¹)`
//! measured in a locally Minkowski frame, and Riemann invariants `(r, s)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum FluidError {
    #[error("conserved pair ({u0}, {u1}) has negative discriminant")]
    NegativeDiscriminant { u0: f64, u1: f64 },
    #[error("conserved pair ({u0}, {u1}) maps to non-positive density")]
    NonpositiveDensity { u0: f64, u1: f64 },
}

/// Primitive state: energy density and radial velocity (fraction of c).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidState {
    pub rho: f64,
    pub v: f64,
}

impl FluidState {
    pub const fn new(rho: f64, v: f64) -> Self {
        Self { rho, v }
    }

    pub fn is_physical(&self) -> bool {
        self.rho > 0.0 && self.rho.is_finite() && self.v.abs() < 1.0
    }
}

/// Minkowski-frame energy and momentum densities `(T⁰⁰, T⁰¹)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conserved {
    pub u0: f64,
    pub u1: f64,
}

impl Conserved {
    pub const fn new(u0: f64, u1: f64) -> Self {
        Self { u0, u1 }
    }

    pub fn lerp(self, other: Conserved, t: f64) -> Conserved {
        Conserved::new(
            self.u0 + t * (other.u0 - self.u0),
            self.u1 + t * (other.u1 - self.u1),
        )
    }
}

impl std::ops::Add for Conserved {
    type Output = Conserved;
    fn add(self, o: Conserved) -> Conserved {
        Conserved::new(self.u0 + o.u0, self.u1 + o.u1)
    }
}

impl std::ops::Sub for Conserved {
    type Output = Conserved;
    fn sub(self, o: Conserved) -> Conserved {
        Conserved::new(self.u0 - o.u0, self.u1 - o.u1)
    }
}

impl std::ops::Mul<f64> for Conserved {
    type Output = Conserved;
    fn mul(self, k: f64) -> Conserved {
        Conserved::new(self.u0 * k, self.u1 * k)
    }
}

/// Riemann invariants. Rarefaction curves are axis-parallel lines in `(r, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannInvariants {
    pub r: f64,
    pub s: f64,
}

/// The four independent stress components in the local Minkowski frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stress {
    pub t00: f64,
    pub t01: f64,
    pub t11: f64,
    pub t22: f64,
}

/// Which invariant stays constant when recovering density inside a fan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantBranch {
    /// `r` is constant (2-rarefaction).
    R,
    /// `s` is constant (1-rarefaction).
    S,
}

/// Equation of state `p = σρ`; `√σ` is the sound speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EosParams {
    pub sigma: f64,
}

impl Default for EosParams {
    fn default() -> Self {
        Self { sigma: 1.0 / 3.0 }
    }
}

/// Rapidity `½ ln((1+v)/(1−v))`.
#[inline]
pub fn rapidity(v: f64) -> f64 {
    v.atanh()
}

/// Relativistic velocity addition `(v + w)/(1 + vw)`.
#[inline]
pub fn lorentz_compose(v: f64, w: f64) -> f64 {
    (v + w) / (1.0 + v * w)
}

impl EosParams {
    pub fn new(sigma: f64) -> Self {
        assert!(sigma > 0.0 && sigma < 1.0, "σ must lie in (0, 1), got {sigma}");
        Self { sigma }
    }

    /// `K = 2σ/(1+σ)²`.
    #[inline]
    pub fn k(&self) -> f64 {
        2.0 * self.sigma / ((1.0 + self.sigma) * (1.0 + self.sigma))
    }

    #[inline]
    pub fn sound_speed(&self) -> f64 {
        self.sigma.sqrt()
    }

    pub fn to_conserved(&self, f: FluidState) -> Conserved {
        let sig = self.sigma;
        let w = f.rho / (1.0 - f.v * f.v);
        Conserved::new(w * (1.0 + sig * f.v * f.v), (1.0 + sig) * f.v * w)
    }

    /// Inverse of [`to_conserved`](Self::to_conserved), minus branch of the quadratic for `v`.
    pub fn from_conserved(&self, u: Conserved) -> Result<FluidState, FluidError> {
        let sig = self.sigma;
        if !(u.u0 > 0.0) {
            return Err(FluidError::NonpositiveDensity { u0: u.u0, u1: u.u1 });
        }
        if u.u1 == 0.0 {
            return Ok(FluidState::new(u.u0, 0.0));
        }
        let a = (1.0 + sig) * u.u0;
        let disc = a * a - 4.0 * sig * u.u1 * u.u1;
        if !(disc >= 0.0) {
            return Err(FluidError::NegativeDiscriminant { u0: u.u0, u1: u.u1 });
        }
        // Rationalised minus root avoids cancellation when u1 is small.
        let v = 2.0 * u.u1 / (a + disc.sqrt());
        if !(v.abs() < 1.0) {
            return Err(FluidError::NegativeDiscriminant { u0: u.u0, u1: u.u1 });
        }
        let rho = (1.0 - v * v) * u.u1 / ((1.0 + sig) * v);
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(FluidError::NonpositiveDensity { u0: u.u0, u1: u.u1 });
        }
        Ok(FluidState::new(rho, v))
    }

    pub fn to_invariants(&self, f: FluidState) -> RiemannInvariants {
        let a = rapidity(f.v);
        let b = (self.k() / 2.0).sqrt() * f.rho.ln();
        RiemannInvariants { r: a - b, s: a + b }
    }

    pub fn from_invariants(&self, ri: RiemannInvariants) -> FluidState {
        let rho = ((ri.s - ri.r) / (2.0 * self.k()).sqrt()).exp();
        // tanh((r+s)/2) is the closed form of −(1−e^{s+r})/(1+e^{s+r}) without overflow.
        let v = (0.5 * (ri.s + ri.r)).tanh();
        FluidState::new(rho, v)
    }

    /// Density recovered from one invariant and the velocity.
    pub fn partial_density(&self, invariant: f64, branch: InvariantBranch, v: f64) -> f64 {
        let scale = (2.0 / self.k()).sqrt();
        match branch {
            InvariantBranch::R => (-scale * (invariant - rapidity(v))).exp(),
            InvariantBranch::S => (scale * (invariant - rapidity(v))).exp(),
        }
    }

    /// Characteristic speeds `(λ₁, λ₂)`.
    pub fn eigenvalues(&self, f: FluidState) -> (f64, f64) {
        let cs = self.sound_speed();
        (lorentz_compose(f.v, -cs), lorentz_compose(f.v, cs))
    }

    /// Velocity whose 1-characteristic moves at `lambda`.
    pub fn velocity_from_lambda1(&self, lambda: f64) -> f64 {
        lorentz_compose(lambda, self.sound_speed())
    }

    /// Velocity whose 2-characteristic moves at `lambda`.
    pub fn velocity_from_lambda2(&self, lambda: f64) -> f64 {
        lorentz_compose(lambda, -self.sound_speed())
    }

    /// Stress components at areal radius `x`; `t00`/`t01` coincide with `u⁰`/`u¹`.
    pub fn stress(&self, f: FluidState, x: f64) -> Stress {
        let sig = self.sigma;
        let w = f.rho / (1.0 - f.v * f.v);
        Stress {
            t00: (1.0 + sig * f.v * f.v) * w,
            t01: (1.0 + sig) * f.v * w,
            t11: (f.v * f.v + sig) * w,
            t22: sig * f.rho / (x * x),
        }
    }

    /// Flat-space flux `(T⁰¹, T¹¹)`.
    pub fn flux(&self, f: FluidState) -> Conserved {
        let sig = self.sigma;
        let w = f.rho / (1.0 - f.v * f.v);
        Conserved::new((1.0 + sig) * f.v * w, (f.v * f.v + sig) * w)
    }
}
