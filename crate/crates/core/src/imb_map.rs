//! The inverse magnetic billiard map on the phase annulus and its derivative.

use std::f64::consts::PI;

use crate::boundary::Curve;
use crate::collision::{chord_exit, larmor_from, EPS_ANG};
use crate::error::{ImbError, Result};
use crate::geometry::{wrap_centered, Mat2, Vec2};

/// A point (s, θ) of the phase annulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub s: f64,
    pub theta: f64,
}

impl PhasePoint {
    pub fn new(s: f64, theta: f64) -> Self {
        PhasePoint { s, theta }
    }
    /// Area-preserving coordinate u = −cos θ.
    pub fn u(&self) -> f64 {
        -self.theta.cos()
    }
    pub fn from_su(s: f64, u: f64) -> Self {
        PhasePoint { s, theta: (-u).clamp(-1.0, 1.0).acos() }
    }
}

/// Everything measured during one step P0 -> P1 -> P2.
#[derive(Debug, Clone, Copy)]
pub struct StepData {
    pub s0: f64,
    pub theta0: f64,
    pub s1: f64,
    pub theta1: f64,
    pub s2: f64,
    pub theta2: f64,
    pub ell1: f64,
    pub ell2: f64,
    pub chi: f64,
    pub kappa0: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub mu: f64,
    pub p0: Vec2,
    pub p1: Vec2,
    pub p2: Vec2,
    pub center: Vec2,
    pub arc_sweep: f64,
}

impl StepData {
    /// sin θᵢ ≥ 1e−4 and ℓ₂ ≥ 1e−6 μ.
    pub fn is_well_conditioned(&self) -> bool {
        [self.theta0, self.theta1, self.theta2].iter().all(|t| t.sin() >= 1e-4) && self.ell2 >= 1e-6 * self.mu
    }
}

pub fn step(curve: &Curve, mu: f64, z: PhasePoint) -> Result<(PhasePoint, StepData)> {
    let f0 = curve.frame_at(z.s);
    let chord = chord_exit(curve, z.s, z.theta)?;
    let arc = larmor_from(curve, chord.p1, chord.v, mu)?;
    let d = StepData {
        s0: curve.wrap(z.s),
        theta0: z.theta,
        s1: chord.s1,
        theta1: chord.theta1,
        s2: arc.s2,
        theta2: arc.theta2,
        ell1: chord.ell1,
        ell2: arc.ell2,
        chi: arc.chi,
        kappa0: f0.kappa,
        kappa1: chord.kappa1,
        kappa2: arc.kappa2,
        mu,
        p0: f0.p,
        p1: chord.p1,
        p2: arc.p2,
        center: arc.center,
        arc_sweep: arc.arc_sweep,
    };
    Ok((PhasePoint::new(arc.s2, arc.theta2), d))
}

/// The map itself, extended by the identity on θ ∈ {0, π}.
pub fn map_point(curve: &Curve, mu: f64, z: PhasePoint) -> Result<PhasePoint> {
    if z.theta <= EPS_ANG || z.theta >= PI - EPS_ANG {
        return Ok(z);
    }
    step(curve, mu, z).map(|r| r.0)
}

/// Result of iterating: the successful steps and the error that stopped the
/// orbit early, if any.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub steps: Vec<(PhasePoint, StepData)>,
    pub error: Option<ImbError>,
}

impl Orbit {
    pub fn last_point(&self) -> Option<PhasePoint> {
        self.steps.last().map(|s| s.0)
    }
    pub fn into_result(self) -> Result<Vec<(PhasePoint, StepData)>> {
        match self.error {
            Some(e) => Err(e),
            None => Ok(self.steps),
        }
    }
}

pub fn iterate(curve: &Curve, mu: f64, z: PhasePoint, n: usize) -> Orbit {
    let mut steps = Vec::with_capacity(n);
    let mut cur = z;
    for _ in 0..n {
        match step(curve, mu, cur) {
            Ok((next, d)) => {
                steps.push((next, d));
                cur = next;
            }
            Err(e) => return Orbit { steps, error: Some(e) },
        }
    }
    Orbit { steps, error: None }
}

/// The derivative of the map in (s, u) coordinates, entry by entry from the
/// step geometry. Indices: θ₀ launch, θ₁ exit, θ₂ re-entry.
pub fn dt_entries(k0: f64, k2: f64, l1: f64, l2: f64, chi: f64, t0: f64, t1: f64, t2: f64) -> Mat2 {
    let (s0, s1, s2) = (t0.sin(), t1.sin(), t2.sin());
    let (sc, cc) = chi.sin_cos();
    let a = (2.0 * chi - t1).sin();
    let b = (2.0 * chi - t2).sin();
    let g = (2.0 * chi - t1 - t2).sin();
    let a11 = (k0 * l1 * a - s0 * a - k0 * l2 * cc * s1) / (s1 * s2);
    let a12 = (l1 * a - l2 * cc * s1) / (s0 * s1 * s2);
    let a21 = k2 * s0 * a / s1 + 2.0 * sc * g * (k0 * l1 - s0) / (l2 * s1)
        - k0 * (b + k2 * l1 * a / s1 - k2 * l2 * cc);
    let a22 = (2.0 * l1 * sc * g - k2 * l1 * l2 * a) / (l2 * s0 * s1) + (k2 * l2 * cc - b) / s0;
    Mat2::new(a11, a12, a21, a22)
}

pub fn jacobian_analytic(d: &StepData) -> Result<Mat2> {
    let den = [d.theta0.sin(), d.theta1.sin(), d.theta2.sin(), d.ell2];
    if den.iter().any(|x| x.abs() < 1e-12) {
        return Err(ImbError::DegenerateStep(format!(
            "vanishing denominator (sin θ = {:.3e}, {:.3e}, {:.3e}; ℓ₂ = {:.3e})",
            den[0], den[1], den[2], den[3]
        )));
    }
    Ok(dt_entries(d.kappa0, d.kappa2, d.ell1, d.ell2, d.chi, d.theta0, d.theta1, d.theta2))
}

/// The same derivative when the Larmor arc is a half turn (χ = π/2).
pub fn jacobian_half_turn(d: &StepData) -> Mat2 {
    let (k0, k2, l1, mu) = (d.kappa0, d.kappa2, d.ell1, d.mu);
    let (s0, s1, s2) = (d.theta0.sin(), d.theta1.sin(), d.theta2.sin());
    let w = (d.theta1 + d.theta2).sin() - k2 * mu * s1;
    Mat2::new(
        (k0 * l1 - s0) / s2,
        l1 / (s0 * s2),
        (k0 * l1 - s0) * w / (mu * s1) - k0 * s2,
        l1 * w / (mu * s0 * s1) - s2 / s0,
    )
}

/// Central differences of the map in (s, u). The s step is h·max(1, L); near
/// u = ±1 the u derivative falls back to a one-sided second-order stencil.
pub fn jacobian_numeric(curve: &Curve, mu: f64, z: PhasePoint, h: f64) -> Result<Mat2> {
    let l = curve.total_length();
    let hs = h * l.max(1.0);
    let u0 = z.u();
    let eval = |s: f64, u: f64| -> Result<(f64, f64)> {
        let (w, _) = step(curve, mu, PhasePoint::from_su(s, u))?;
        Ok((w.s, w.u()))
    };
    let (base_s, _) = eval(z.s, u0)?;
    let ds = |a: f64| wrap_centered(a - base_s, l);
    let (sp, up) = eval(z.s + hs, u0)?;
    let (sm, um) = eval(z.s - hs, u0)?;
    let col1 = ((ds(sp) - ds(sm)) / (2.0 * hs), (up - um) / (2.0 * hs));
    let col2 = if u0 + h < 1.0 && u0 - h > -1.0 {
        let (sp, up) = eval(z.s, u0 + h)?;
        let (sm, um) = eval(z.s, u0 - h)?;
        ((ds(sp) - ds(sm)) / (2.0 * h), (up - um) / (2.0 * h))
    } else {
        let sg = if u0 + h >= 1.0 { -1.0 } else { 1.0 };
        let (s0, v0) = eval(z.s, u0)?;
        let (s1, v1) = eval(z.s, u0 + sg * h)?;
        let (s2, v2) = eval(z.s, u0 + 2.0 * sg * h)?;
        let c = |a: f64, b: f64, c: f64| sg * (-3.0 * a + 4.0 * b - c) / (2.0 * h);
        (c(ds(s0), ds(s1), ds(s2)), c(v0, v1, v2))
    };
    Ok(Mat2::new(col1.0, col2.0, col1.1, col2.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::v2;

    #[test]
    fn iterate_zero_is_empty() {
        let c = Curve::circle(1.0).unwrap();
        let o = iterate(&c, 0.5, PhasePoint::new(0.3, 1.0), 0);
        assert!(o.steps.is_empty() && o.error.is_none());
    }

    #[test]
    fn boundary_angles_are_fixed() {
        let c = Curve::circle(1.0).unwrap();
        let z = PhasePoint::new(1.0, 0.0);
        assert_eq!(map_point(&c, 0.5, z).unwrap(), z);
    }

    #[test]
    fn det_is_one_on_circle_and_ellipse() {
        for c in [Curve::circle(1.0).unwrap(), Curve::ellipse(2.0, 1.0).unwrap()] {
            for (s, th, mu) in [(0.7, 1.2, 0.5), (2.0, 0.9, 0.8), (5.0, 2.0, 0.3)] {
                let (_, d) = step(&c, mu, PhasePoint::new(s, th)).unwrap();
                let j = jacobian_analytic(&d).unwrap();
                assert!((j.det() - 1.0).abs() < 1e-9, "{}", j.det());
            }
        }
    }

    #[test]
    fn analytic_matches_numeric() {
        let c = Curve::ellipse(2.0, 1.0).unwrap();
        let z = PhasePoint::new(0.7, 1.2);
        let (_, d) = step(&c, 0.5, z).unwrap();
        let a = jacobian_analytic(&d).unwrap();
        let n = jacobian_numeric(&c, 0.5, z, 1e-6).unwrap();
        assert!(a.sub(&n).max_abs() / a.max_abs() < 1e-5, "{a:?} {n:?}");
    }

    #[test]
    fn half_turn_form_agrees() {
        let c = Curve::ellipse(2.0, 1.0).unwrap();
        let mu: f64 = 0.5;
        let x = 2.0 * (1.0 - mu * mu).sqrt();
        let s = c.locate(v2(-x, -mu)).unwrap();
        let th = c.frame_at(s).t.angle_to(v2(1.0, 0.0));
        let (_, d) = step(&c, mu, PhasePoint::new(s, th)).unwrap();
        assert!((d.chi - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        let g = jacobian_analytic(&d).unwrap();
        let h = jacobian_half_turn(&d);
        assert!(g.sub(&h).max_abs() < 1e-8 * g.max_abs());
    }

    #[test]
    fn ell2_identity_along_orbit() {
        let c = Curve::ellipse(2.0, 1.0).unwrap();
        let o = iterate(&c, 0.4, PhasePoint::new(1.0, 1.1), 100);
        assert!(o.error.is_none(), "{:?}", o.error);
        for (_, d) in &o.steps {
            assert!((d.ell2 - 2.0 * d.mu * d.chi.sin()).abs() < 1e-10 * d.ell2.max(1.0));
        }
    }
}
