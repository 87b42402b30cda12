//! Closed-form periodic orbits, their trace formulas, a Newton finder for
//! generic orbits, and parameter scans that locate parabolic thresholds.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::boundary::Curve;
use crate::error::{ImbError, Result};
use crate::geometry::Vec2;
use crate::imb_map::{iterate, PhasePoint};
use crate::stability::{compose, phase_distance, Composed, CLOSURE_TOL};

pub mod four;
pub mod newton;
pub mod scan;
pub mod three;
pub mod two;

pub use four::*;
pub use newton::*;
pub use scan::*;
pub use three::*;
pub use two::*;

/// Rotation number of a symmetric 3- or 4-periodic orbit. It fixes the
/// Larmor angle χ and selects the sign conventions of the trace formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rotation {
    #[serde(rename = "1/3")]
    OneThird,
    #[serde(rename = "2/3")]
    TwoThirds,
    #[serde(rename = "1/4")]
    OneQuarter,
    #[serde(rename = "3/4")]
    ThreeQuarters,
}

impl Rotation {
    pub fn chi(self) -> f64 {
        match self {
            Rotation::OneThird => PI / 3.0,
            Rotation::TwoThirds => 2.0 * PI / 3.0,
            Rotation::OneQuarter => PI / 4.0,
            Rotation::ThreeQuarters => 3.0 * PI / 4.0,
        }
    }
    pub fn period(self) -> usize {
        match self {
            Rotation::OneThird | Rotation::TwoThirds => 3,
            _ => 4,
        }
    }
    pub fn as_str(self) -> &'static str {
        match self {
            Rotation::OneThird => "1/3",
            Rotation::TwoThirds => "2/3",
            Rotation::OneQuarter => "1/4",
            Rotation::ThreeQuarters => "3/4",
        }
    }
    /// The other rotation of the same period.
    pub fn complement(self) -> Rotation {
        match self {
            Rotation::OneThird => Rotation::TwoThirds,
            Rotation::TwoThirds => Rotation::OneThird,
            Rotation::OneQuarter => Rotation::ThreeQuarters,
            Rotation::ThreeQuarters => Rotation::OneQuarter,
        }
    }
    pub(crate) fn expect_period(self, n: usize) -> Result<Rotation> {
        if self.period() == n {
            Ok(self)
        } else {
            Err(ImbError::Validation(format!("rotation {self} is not a period-{n} rotation")))
        }
    }
}

impl fmt::Display for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Rotation {
    type Err = ImbError;
    fn from_str(s: &str) -> Result<Rotation> {
        match s.trim() {
            "1/3" => Ok(Rotation::OneThird),
            "2/3" => Ok(Rotation::TwoThirds),
            "1/4" => Ok(Rotation::OneQuarter),
            "3/4" => Ok(Rotation::ThreeQuarters),
            other => Err(ImbError::Validation(format!("unknown rotation {other:?}"))),
        }
    }
}

/// A periodic orbit of the map. `points` holds the n phase points at the
/// start of each chord; `boundary` the 2n points P₀ … P₂ₙ₋₁ in visiting order.
#[derive(Debug, Clone)]
pub struct PeriodicOrbit {
    pub period: usize,
    pub points: Vec<PhasePoint>,
    pub boundary: Vec<Vec2>,
    pub mu: f64,
    pub rotation: Option<Rotation>,
    /// Largest phase distance between an iterate and the listed point.
    pub residual: f64,
}

impl PeriodicOrbit {
    /// Build from the boundary points and check the claim by running the map.
    pub fn from_boundary(curve: &Curve, mu: f64, boundary: Vec<Vec2>, rotation: Option<Rotation>) -> Result<Self> {
        if boundary.len() < 2 || boundary.len() % 2 != 0 {
            return Err(ImbError::Validation("an orbit needs an even number of boundary points".into()));
        }
        let n = boundary.len() / 2;
        let mut points = Vec::with_capacity(n);
        for j in 0..n {
            let (p, q) = (boundary[2 * j], boundary[2 * j + 1]);
            let s = curve.locate(p)?;
            let theta = curve.frame_at_point(p).t.angle_to((q - p).unit());
            points.push(PhasePoint::new(s, theta));
        }
        let mut orbit = PeriodicOrbit { period: n, points, boundary, mu, rotation, residual: 0.0 };
        orbit.residual = orbit.measure_residual(curve)?;
        if orbit.residual > CLOSURE_TOL {
            return Err(ImbError::NotPeriodic { residual: orbit.residual });
        }
        Ok(orbit)
    }

    /// Run the map n times from `z` and record what it visits.
    pub fn from_dynamics(curve: &Curve, mu: f64, z: PhasePoint, n: usize, rotation: Option<Rotation>) -> Result<Self> {
        let steps = iterate(curve, mu, z, n).into_result()?;
        let mut points = vec![z];
        let mut boundary = Vec::with_capacity(2 * n);
        for (k, (w, d)) in steps.iter().enumerate() {
            boundary.push(d.p0);
            boundary.push(d.p1);
            if k + 1 < n {
                points.push(*w);
            }
        }
        let residual = phase_distance(curve, steps[n - 1].0, z);
        if residual > CLOSURE_TOL {
            return Err(ImbError::NotPeriodic { residual });
        }
        Ok(PeriodicOrbit { period: n, points, boundary, mu, rotation, residual })
    }

    fn measure_residual(&self, curve: &Curve) -> Result<f64> {
        let steps = iterate(curve, self.mu, self.points[0], self.period).into_result()?;
        let mut worst: f64 = 0.0;
        for (j, (w, _)) in steps.iter().enumerate() {
            worst = worst.max(phase_distance(curve, *w, self.points[(j + 1) % self.period]));
        }
        Ok(worst)
    }

    /// The stability matrix composed along the actual dynamics.
    pub fn compose(&self, curve: &Curve) -> Result<Composed> {
        compose(curve, self.mu, self.points[0], self.period)
    }

    pub fn composed_trace(&self, curve: &Curve) -> Result<f64> {
        self.compose(curve).map(|c| c.matrix.trace())
    }
}

pub(crate) fn require_mu(mu: f64, max: f64) -> Result<()> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(ImbError::Validation(format!("Larmor radius must be positive, got {mu}")));
    }
    if mu >= max {
        return Err(ImbError::MuTooLarge { mu, max });
    }
    Ok(())
}

pub(crate) fn require_x0(x0: f64, lo: f64, hi: f64) -> Result<()> {
    if !(x0 > lo && x0 < hi) {
        return Err(ImbError::X0OutOfRange { x0, lo, hi });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_round_trip() {
        for r in [Rotation::OneThird, Rotation::TwoThirds, Rotation::OneQuarter, Rotation::ThreeQuarters] {
            assert_eq!(r.as_str().parse::<Rotation>().unwrap(), r);
            assert_eq!(r.complement().complement(), r);
        }
        assert!("1/5".parse::<Rotation>().is_err());
    }
}
