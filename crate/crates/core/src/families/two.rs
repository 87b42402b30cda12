//! Period-two orbits. Each is a stadium: two parallel chords of equal length
//! joined by Larmor half circles.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::{require_mu, require_x0, PeriodicOrbit};
use crate::boundary::Curve;
use crate::error::{ImbError, Result};
use crate::geometry::{v2, Vec2};
use crate::roots::brent;
use crate::stability::{classify, trace2_closed, StabilityVerdict, TwoPeriodicParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EllipseAxis {
    Major,
    Minor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StadiumKind {
    Sides,
    Caps,
}

#[derive(Debug, Clone)]
pub struct TwoPeriodic {
    pub curve: Curve,
    pub orbit: PeriodicOrbit,
    /// (α, β, δ) from the closed-form expressions.
    pub params: TwoPeriodicParams,
}

impl TwoPeriodic {
    pub fn trace(&self) -> f64 {
        trace2_closed(&self.params)
    }
    pub fn verdict(&self, tol: f64) -> StabilityVerdict {
        classify(self.trace(), tol)
    }
    /// (α, β, δ) read off the steps of the actual dynamics.
    pub fn measured_params(&self) -> Result<TwoPeriodicParams> {
        let c = self.orbit.compose(&self.curve)?;
        Ok(TwoPeriodicParams::from_steps(&c.steps[0], &c.steps[1]))
    }
    /// Both Larmor angles measured along the dynamics.
    pub fn measured_chis(&self) -> Result<[f64; 2]> {
        let c = self.orbit.compose(&self.curve)?;
        Ok([c.steps[0].chi, c.steps[1].chi])
    }
}

fn cot_from_cos(c: f64) -> f64 {
    c / (1.0 - c * c).sqrt()
}

fn build(curve: Curve, mu: f64, pts: [Vec2; 4], params: TwoPeriodicParams) -> Result<TwoPeriodic> {
    let orbit = match PeriodicOrbit::from_boundary(&curve, mu, pts.to_vec(), None) {
        Ok(o) => o,
        Err(ImbError::NotPeriodic { .. }) | Err(ImbError::TangentialContact { .. }) => {
            return Err(ImbError::InfeasibleStadium { mu })
        }
        Err(e) => return Err(e),
    };
    let t = TwoPeriodic { curve, orbit, params };
    if t.measured_chis()?.iter().any(|c| (c - FRAC_PI_2).abs() > 1e-9) {
        return Err(ImbError::InfeasibleStadium { mu });
    }
    Ok(t)
}

pub fn circle2_params(r: f64, mu: f64) -> TwoPeriodicParams {
    let w = (r * r - mu * mu).sqrt();
    let beta = 2.0 * mu / w;
    TwoPeriodicParams::new(2.0 * w / mu, beta, beta)
}

pub fn two_periodic_circle(r: f64, mu: f64) -> Result<TwoPeriodic> {
    require_mu(mu, r)?;
    let curve = Curve::circle(r)?;
    let w = (r * r - mu * mu).sqrt();
    build(curve, mu, [v2(-w, -mu), v2(w, -mu), v2(w, mu), v2(-w, mu)], circle2_params(r, mu))
}

/// α and β as printed for the ellipse; all four angles coincide so δ = β.
pub fn ellipse2_params(a: f64, b: f64, mu: f64, axis: EllipseAxis) -> TwoPeriodicParams {
    let (p, q) = match axis {
        EllipseAxis::Major => (a, b),
        EllipseAxis::Minor => (b, a),
    };
    let alpha = 2.0 * p * (q * q - mu * mu).sqrt() / (q * mu);
    let cos0 = p * mu / (q.powi(4) + mu * mu * (p * p - q * q)).sqrt();
    let beta = 2.0 * cot_from_cos(cos0);
    TwoPeriodicParams::new(alpha, beta, beta)
}

/// Largest feasible μ. Along the major axis the half circle must clear the
/// vertex, x + μ ≥ a, which gives 2ab²/(a² + b²). Along the minor axis the
/// same condition never binds before μ reaches a.
pub fn ellipse2_feasible_max(a: f64, b: f64, axis: EllipseAxis) -> f64 {
    match axis {
        EllipseAxis::Major => 2.0 * a * b * b / (a * a + b * b),
        EllipseAxis::Minor => a,
    }
}

pub fn two_periodic_ellipse(a: f64, b: f64, mu: f64, axis: EllipseAxis) -> Result<TwoPeriodic> {
    let curve = Curve::ellipse(a, b)?;
    let pts = match axis {
        EllipseAxis::Major => {
            require_mu(mu, b)?;
            let x = a * (1.0 - mu * mu / (b * b)).sqrt();
            [v2(-x, -mu), v2(x, -mu), v2(x, mu), v2(-x, mu)]
        }
        EllipseAxis::Minor => {
            require_mu(mu, a)?;
            let y = b * (1.0 - mu * mu / (a * a)).sqrt();
            [v2(mu, -y), v2(mu, y), v2(-mu, y), v2(-mu, -y)]
        }
    };
    build(curve, mu, pts, ellipse2_params(a, b, mu, axis))
}

fn superellipse_y(k: u32, x: f64) -> f64 {
    (1.0 - x.abs().powi(2 * k as i32)).powf(1.0 / (2 * k) as f64)
}

fn require_k(k: u32) -> Result<()> {
    if k < 2 {
        return Err(ImbError::Validation(format!("superellipse families need k >= 2, got {k}")));
    }
    Ok(())
}

/// (μ*, μ**) for the axis family.
pub fn superellipse_axis_thresholds(k: u32) -> (f64, f64) {
    let kf = k as f64;
    let star = (2f64.powf(kf / (kf - 1.0)) + 1.0).powf(-1.0 / (2.0 * kf));
    (star, 2f64.powf(-1.0 / (2.0 * kf)))
}

pub fn superellipse_axis2_params(k: u32, mu: f64) -> TwoPeriodicParams {
    let k2 = (2 * k) as f64;
    let x1 = superellipse_y(k, mu);
    let beta = 2.0 * (mu.powf(-k2) - 1.0).powf((1.0 - k2) / k2);
    TwoPeriodicParams::new(2.0 * x1 / mu, beta, beta)
}

/// Horizontal chords y = ±μ across the superellipse.
pub fn two_periodic_superellipse_axis(k: u32, mu: f64) -> Result<TwoPeriodic> {
    require_k(k)?;
    require_mu(mu, 1.0)?;
    let curve = Curve::superellipse(k)?;
    let x = superellipse_y(k, mu);
    build(curve, mu, [v2(-x, -mu), v2(x, -mu), v2(x, mu), v2(-x, mu)], superellipse_axis2_params(k, mu))
}

/// Σ y^{2k−2−j} x^j over Σ (−1)^j y^{2k−2−j} x^j, j = 0 … 2k−2.
pub fn f_k(k: u32, x: f64, y: f64) -> f64 {
    let n = 2 * k as i32 - 2;
    let (mut num, mut den) = (0.0, 0.0);
    for j in 0..=n {
        let t = y.powi(n - j) * x.powi(j);
        num += t;
        den += if j % 2 == 0 { t } else { -t };
    }
    num / den
}

pub fn superellipse_diag2_params(k: u32, x0: f64) -> TwoPeriodicParams {
    let y0 = superellipse_y(k, x0);
    let e = 2 * k as i32 - 1;
    let tan0 = (y0.powi(e) + x0.powi(e)) / (y0.powi(e) - x0.powi(e));
    let beta = 2.0 / tan0;
    TwoPeriodicParams::new(2.0 * (y0 + x0) / (y0 - x0), beta, beta)
}

/// The diagonal family: chords parallel to y = x through (x₀, y₀) and
/// (−x₀, −y₀), with μ = (y₀ − x₀)/√2. Also returns f_k(x₀, y₀).
pub fn two_periodic_superellipse_diag(k: u32, x0: f64) -> Result<(TwoPeriodic, f64)> {
    require_k(k)?;
    let c = 2f64.powf(-1.0 / (2 * k) as f64);
    require_x0(x0, -c, c)?;
    let curve = Curve::superellipse(k)?;
    let y0 = superellipse_y(k, x0);
    let mu = (y0 - x0) / 2f64.sqrt();
    let pts = [v2(x0, y0), v2(-y0, -x0), v2(-x0, -y0), v2(y0, x0)];
    let t = build(curve, mu, pts, superellipse_diag2_params(k, x0))?;
    Ok((t, f_k(k, x0, y0)))
}

/// The x₀ in (−2^{−1/(2k)}, 0) where f_k = 1/2.
pub fn diag_x_tilde(k: u32) -> Result<f64> {
    require_k(k)?;
    let c = 2f64.powf(-1.0 / (2 * k) as f64);
    brent(|x| f_k(k, x, superellipse_y(k, x)) - 0.5, -c * (1.0 - 1e-12), 0.0, 1e-15)
}

pub fn stadium2_params(side: f64, r: f64, mu: f64, kind: StadiumKind) -> TwoPeriodicParams {
    match kind {
        // Both chords end on flat sides: every cotangent is exactly zero.
        StadiumKind::Sides => TwoPeriodicParams::new(2.0 * r / mu, 0.0, 0.0),
        StadiumKind::Caps => {
            let m = (r * r - mu * mu).sqrt() / mu;
            TwoPeriodicParams::new(side / mu + 2.0 * m, 2.0 / m, 2.0 / m)
        }
    }
}

pub fn two_periodic_stadium(side: f64, r: f64, mu: f64, kind: StadiumKind) -> Result<TwoPeriodic> {
    let curve = Curve::stadium(side, r)?;
    let pts = match kind {
        StadiumKind::Sides => {
            require_mu(mu, 0.5 * side)?;
            [v2(mu, -r), v2(mu, r), v2(-mu, r), v2(-mu, -r)]
        }
        StadiumKind::Caps => {
            require_mu(mu, r)?;
            let x = 0.5 * side + (r * r - mu * mu).sqrt();
            [v2(-x, -mu), v2(x, -mu), v2(x, mu), v2(-x, mu)]
        }
    };
    build(curve, mu, pts, stadium2_params(side, r, mu, kind))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::{StabilityClass, TOL_CLOSED};
    use std::f64::consts::FRAC_PI_3;

    #[test]
    fn circle_half_radius() {
        let t = two_periodic_circle(1.0, 0.5).unwrap();
        assert!((t.orbit.points[0].theta - FRAC_PI_3).abs() < 1e-12);
        assert!((t.params.alpha - 2.0 * 3f64.sqrt()).abs() < 1e-12);
        assert!((t.trace() - 2.0).abs() < 1e-12);
        assert!((t.orbit.composed_trace(&t.curve).unwrap() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn circle_is_scale_free() {
        let a = two_periodic_circle(1.0, 0.5).unwrap();
        let b = two_periodic_circle(2.0, 1.0).unwrap();
        assert!((a.params.alpha - b.params.alpha).abs() < 1e-12);
        assert!((a.orbit.points[0].theta - b.orbit.points[0].theta).abs() < 1e-12);
    }

    #[test]
    fn circle_rejects_large_mu() {
        assert!(matches!(two_periodic_circle(1.0, 1.0), Err(ImbError::MuTooLarge { .. })));
    }

    #[test]
    fn ellipse_major_and_minor() {
        let t = two_periodic_ellipse(2.0, 1.0, 0.5, EllipseAxis::Major).unwrap();
        assert!((t.params.alpha - 4.0 * 3f64.sqrt()).abs() < 1e-12);
        assert!((t.params.beta - 4.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!((t.trace() - 194.0).abs() < 1e-9);
        assert!((t.orbit.composed_trace(&t.curve).unwrap() - 194.0).abs() < 1e-6);
        let m = two_periodic_ellipse(2.0, 1.0, 0.5, EllipseAxis::Minor).unwrap();
        assert!((m.trace() + 1.0).abs() < 1e-12);
        assert_eq!(m.verdict(TOL_CLOSED).class, StabilityClass::Elliptic);
    }

    #[test]
    fn feasibility_bound_is_sharp() {
        for (a, b) in [(2.0, 1.0), (3.0, 2.0), (1.5, 1.0)] {
            for axis in [EllipseAxis::Major, EllipseAxis::Minor] {
                let m = ellipse2_feasible_max(a, b, axis);
                assert!(two_periodic_ellipse(a, b, 0.98 * m, axis).is_ok(), "{a} {b} {axis:?}");
                let cap = if axis == EllipseAxis::Major { b } else { a };
                if 1.02 * m < cap {
                    assert!(matches!(
                        two_periodic_ellipse(a, b, 1.02 * m, axis),
                        Err(ImbError::InfeasibleStadium { .. })
                    ));
                }
            }
        }
    }

    #[test]
    fn measured_params_match_closed_form() {
        let t = two_periodic_ellipse(3.0, 2.0, 0.7, EllipseAxis::Major).unwrap();
        let m = t.measured_params().unwrap();
        assert!((m.alpha - t.params.alpha).abs() < 1e-9);
        assert!((m.beta - t.params.beta).abs() < 1e-9);
        assert!((m.delta - t.params.delta).abs() < 1e-9);
    }

    #[test]
    fn superellipse_thresholds_k2() {
        let (s, d) = superellipse_axis_thresholds(2);
        assert!((s - 5f64.powf(-0.25)).abs() < 1e-15);
        assert!((d - 2f64.powf(-0.25)).abs() < 1e-15);
        let p = superellipse_axis2_params(2, d);
        assert!((trace2_closed(&p) - 2.0).abs() < 1e-9);
        let p = superellipse_axis2_params(2, s);
        assert!((trace2_closed(&p) + 2.0).abs() < 1e-9);
    }

    #[test]
    fn superellipse_axis_identity() {
        for mu in [0.3, 0.6, 0.9] {
            let p = superellipse_axis2_params(3, mu);
            assert!((p.alpha - p.beta * (mu.powi(-6) - 1.0)).abs() < 1e-10 * p.alpha);
        }
        let t = two_periodic_superellipse_axis(3, 0.9).unwrap();
        assert_eq!(t.verdict(TOL_CLOSED).class, StabilityClass::Hyperbolic);
    }

    #[test]
    fn diag_parabolic_at_zero() {
        let (t, f) = two_periodic_superellipse_diag(2, 0.0).unwrap();
        assert!((f - 1.0).abs() < 1e-15);
        assert!((t.orbit.mu - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((t.trace() - 2.0).abs() < 1e-9);
        let a = t.params.alpha;
        assert!((a - 2.0 / t.params.beta * 2.0 * f).abs() < 1e-12);
    }

    #[test]
    fn diag_f_limits_and_tilde() {
        for k in [2u32, 3] {
            let c = 2f64.powf(-1.0 / (2 * k) as f64);
            let e = 1e-9;
            let lo = f_k(k, -c + e, superellipse_y(k, -c + e));
            let hi = f_k(k, c - e, superellipse_y(k, c - e));
            assert!((lo - 1.0 / (2 * k - 1) as f64).abs() < 1e-6);
            assert!((hi - (2 * k - 1) as f64).abs() < 1e-6);
            let xt = diag_x_tilde(k).unwrap();
            assert!(xt > -c && xt < 0.0);
            let p = superellipse_diag2_params(k, xt);
            assert!((trace2_closed(&p) + 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn stadium_families() {
        let s = two_periodic_stadium(2.0, 1.0, 0.9, StadiumKind::Sides).unwrap();
        assert_eq!(s.trace(), 2.0);
        let c = two_periodic_stadium(2.0, 1.0, 0.5, StadiumKind::Caps).unwrap();
        assert!((c.params.alpha - (4.0 + 2.0 * 3f64.sqrt())).abs() < 1e-12);
        assert_eq!(c.verdict(TOL_CLOSED).class, StabilityClass::Hyperbolic);
        let m = c.measured_params().unwrap();
        assert!((m.beta - c.params.beta).abs() < 1e-9);
    }

    #[test]
    fn sides_need_short_radius() {
        assert!(matches!(
            two_periodic_stadium(2.0, 1.0, 1.2, StadiumKind::Sides),
            Err(ImbError::MuTooLarge { .. })
        ));
    }
}
