//! Symmetric period-four orbits: the circle, the ellipse family sharing the
//! ellipse's axes, and the two superellipse families with Larmor centres on
//! the diagonals or on the coordinate axes.

use std::f64::consts::{FRAC_PI_4, SQRT_2};

use serde::Serialize;

use super::three::circle_implicit_residual;
use super::{require_mu, require_x0, PeriodicOrbit, Rotation};
use crate::boundary::Curve;
use crate::dd::Dd;
use crate::error::{ImbError, Result};
use crate::geometry::{v2, Vec2};
use crate::imb_map::PhasePoint;
use crate::roots::brent;

#[derive(Debug, Clone)]
pub struct FourPeriodic {
    pub curve: Curve,
    pub orbit: PeriodicOrbit,
    /// Launch angle at P₀.
    pub theta: f64,
    /// α = ℓ₁/μ.
    pub alpha: f64,
    pub trace: f64,
    /// The literal printed trace display, where one exists.
    pub printed_trace: Option<f64>,
}

/// Tr S₄ for four equal chords, a constant angle θ and χ = π/4 or 3π/4,
/// as a quartic in α = ℓ/μ.
pub fn trace4_equal_angle(theta: f64, alpha: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let c2 = (2.0 * theta).cos();
    let (s2, s4) = (s * s, s.powi(4));
    let q0 = 32.0 + 2.0 * c.powi(4) / s4 - 44.0 / s2 + 14.0 / s4;
    let q1 = 16.0 * c * (-6.0 * c.powi(4) + 5.0 * c * c - 1.0) / s.powi(5);
    let q2 = -112.0 + 208.0 / s2 - 124.0 / s4 + 24.0 / s.powi(6);
    let q3 = -8.0 * c * c2.powi(3) / s.powi(7);
    let q4 = c2.powi(4) / s.powi(8);
    q0 + alpha * (q1 + alpha * (q2 + alpha * (q3 + alpha * q4)))
}

// ---------------------------------------------------------------- circle

/// Solve sin(χ − θ) = μ sin θ / √(R² + μ² − 2Rμ cos θ) for the 4-periodic θ.
pub fn circle4_theta(r: f64, mu: f64, rot: Rotation) -> Result<f64> {
    let chi = rot.expect_period(4)?.chi();
    let (lo, hi) = match rot {
        Rotation::OneQuarter => (1e-9, FRAC_PI_4),
        _ => (FRAC_PI_4, 3.0 * FRAC_PI_4),
    };
    brent(|t| circle_implicit_residual(r, mu, t, chi), lo, hi, 1e-15)
}

/// The circle quartic in A = R/μ, with the linear term carrying −cos θ.
pub fn circle_quartic(theta: f64, a_r: f64) -> f64 {
    circle_quartic_terms(theta, a_r, false)
}

/// The circle quartic exactly as displayed, without the −cos θ factor.
pub fn circle_quartic_printed(theta: f64, a_r: f64) -> f64 {
    circle_quartic_terms(theta, a_r, true)
}

fn circle_quartic_terms(theta: f64, a: f64, printed: bool) -> f64 {
    // Near μ → R the terms are O(10) and cancel to 2 sin⁴θ, so the numerator
    // is summed in double-double with c² and cos 2θ derived from one c.
    let (s, c) = theta.sin_cos();
    let cd = Dd::new(c);
    let cc = cd * cd;
    let c2 = cc * 2.0 - Dd::new(1.0);
    let a = Dd::new(a);
    let lin = if printed { Dd::new(1.0) } else { -cd };
    let num = (Dd::new(1.0) - cc * 10.0 + cc * cc * 17.0) * 2.0
        + a * lin * c2 * (cc * 3.0 - Dd::new(1.0)) * 32.0
        + a * a * c2 * c2 * (c2 * 7.0 + Dd::new(5.0)) * 8.0
        - a.powi(3) * c2.powi(3) * cd * 64.0
        + a.powi(4) * c2.powi(4) * 16.0;
    num.to_f64() / s.powi(4)
}

pub fn four_periodic_circle(r: f64, mu: f64, rot: Rotation) -> Result<FourPeriodic> {
    require_mu(mu, r)?;
    let theta = circle4_theta(r, mu, rot)?;
    let curve = Curve::circle(r)?;
    let orbit = PeriodicOrbit::from_dynamics(&curve, mu, PhasePoint::new(0.0, theta), 4, Some(rot))?;
    Ok(FourPeriodic {
        curve,
        orbit,
        theta,
        alpha: 2.0 * r * theta.sin() / mu,
        trace: circle_quartic(theta, r / mu),
        printed_trace: Some(circle_quartic_printed(theta, r / mu)),
    })
}

// --------------------------------------------------------------- ellipse

/// The quantities listed for the symmetric ellipse orbit.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EllipseFourGeometry {
    pub x0: f64,
    pub y0: f64,
    pub ell1: f64,
    pub x2: f64,
    pub y2: f64,
    pub mu: f64,
    pub ell3: f64,
    pub cos_theta0: f64,
    pub cos_theta2: f64,
}

#[derive(Debug, Clone)]
pub struct EllipseFour {
    pub four: FourPeriodic,
    pub geometry: EllipseFourGeometry,
}

/// (a(a² − b²)/(a² + b²), a) and the split a²/√(a² + b²) between the
/// rotation 3/4 piece (below) and the rotation 1/4 piece (above).
pub fn ellipse4_interval(a: f64, b: f64) -> (f64, f64, f64) {
    let (aa, bb) = (a * a, b * b);
    (a * (aa - bb) / (aa + bb), aa / (aa + bb).sqrt(), a)
}

/// The rational function for Tr S₄ in x₀ (with y₀ on the upper half). The
/// display drops the signs at three line breaks; all three are +.
pub fn ellipse4_trace(a: f64, b: f64, x0: f64) -> f64 {
    let (aa, bb) = (a * a, b * b);
    let x = x0;
    let y = b * (1.0 - x * x / aa).max(0.0).sqrt();
    let d = aa - bb;
    let (a2, a3, a4) = (aa * aa, aa.powi(3), aa.powi(4));
    let (b2, b3, b4) = (bb * bb, bb.powi(3), bb.powi(4));
    let n = 16.0 * b2 * d.powi(4) * x.powi(4)
        - 16.0 * bb * d.powi(3) * (2.0 * a2 - 3.0 * aa * bb + 2.0 * b2) * x.powi(3) * y
        + 2.0 * d * d * (8.0 * a4 - 40.0 * a3 * bb + 49.0 * a2 * b2 - 40.0 * aa * b3 + 8.0 * b4) * x * x * y * y
        + 8.0 * aa * d * (4.0 * a4 - 10.0 * a3 * bb + 13.0 * a2 * b2 - 10.0 * aa * b3 + 4.0 * b4) * x * y.powi(3)
        + 8.0 * a2 * (2.0 * a4 - 4.0 * a3 * bb + 5.0 * a2 * b2 - 4.0 * aa * b3 + 2.0 * b4) * y.powi(4);
    let den = a2 * b2 * y * y * (bb * x - aa * (x + 2.0 * y)).powi(2);
    n / den
}

/// The three parabolic values printed for a = 3, b = 2, in order x₀*, x₀**, x₀***.
pub fn ellipse4_printed_roots() -> [f64; 3] {
    let s13 = 13f64.sqrt();
    [
        291.0 / (9.0 * s13),
        ((88731.0 + 1575.0 * 217f64.sqrt()) / 14534.0).sqrt(),
        291.0 / (13.0 * 61f64.sqrt()),
    ]
}

pub fn ellipse4_geometry(a: f64, b: f64, x0: f64, rot: Rotation) -> Result<EllipseFourGeometry> {
    let rot = rot.expect_period(4)?;
    if !(a > b && b > 0.0) {
        return Err(ImbError::Validation(format!("the ellipse family needs a > b > 0, got a = {a}, b = {b}")));
    }
    let (lo, split, hi) = ellipse4_interval(a, b);
    let (aa, bb) = (a * a, b * b);
    match rot {
        Rotation::OneQuarter => require_x0(x0, split, hi)?,
        _ => require_x0(x0, lo, split)?,
    }
    let y0 = b * (1.0 - x0 * x0 / aa).sqrt();
    let (mu, x2, y2) = if rot == Rotation::OneQuarter {
        let mu = 2.0 * (bb * x0 - aa * y0) / (aa + bb);
        (mu, x0 - mu, y0 + mu)
    } else {
        let mu = 2.0 * (aa * y0 - bb * x0) / (aa + bb);
        (mu, x0 + mu, mu - y0)
    };
    let cos_theta0 = bb * x0 / (aa * aa * y0 * y0 + bb * bb * x0 * x0).sqrt();
    let cos_theta2 = aa * y2 / (aa * aa * y2 * y2 + bb * bb * x2 * x2).sqrt();
    Ok(EllipseFourGeometry { x0, y0, ell1: 2.0 * y0, x2, y2, mu, ell3: 2.0 * x2.abs(), cos_theta0, cos_theta2 })
}

fn ellipse4_points(g: &EllipseFourGeometry, rot: Rotation) -> [Vec2; 8] {
    let (x0, y0, x2, y2) = (g.x0, g.y0, g.x2, g.y2);
    if rot == Rotation::OneQuarter {
        [v2(x0, -y0), v2(x0, y0), v2(x2, y2), v2(-x2, y2), v2(-x0, y0), v2(-x0, -y0), v2(-x2, -y2), v2(x2, -y2)]
    } else {
        [v2(x0, y0), v2(x0, -y0), v2(x2, y2), v2(-x2, y2), v2(-x0, -y0), v2(-x0, y0), v2(-x2, -y2), v2(x2, -y2)]
    }
}

/// The orbit symmetric about both axes of the ellipse. Rotation 1/4 lives
/// above a²/√(a² + b²) and rotation 3/4 below it.
pub fn four_periodic_ellipse(a: f64, b: f64, x0: f64, rot: Rotation) -> Result<EllipseFour> {
    let g = ellipse4_geometry(a, b, x0, rot)?;
    let curve = Curve::ellipse(a, b)?;
    let orbit = PeriodicOrbit::from_boundary(&curve, g.mu, ellipse4_points(&g, rot).to_vec(), Some(rot))?;
    let trace = ellipse4_trace(a, b, x0);
    let four = FourPeriodic {
        theta: orbit.points[0].theta,
        alpha: g.ell1 / g.mu,
        curve,
        orbit,
        trace,
        printed_trace: Some(trace),
    };
    Ok(EllipseFour { four, geometry: g })
}

/// For the ellipse family the dual of the member at x₀ is the member of the
/// other rotation at x₂, with the same μ.
pub fn ellipse4_dual_parameter(g: &EllipseFourGeometry) -> f64 {
    g.x2
}

/// Reorder P₀ … P₇ as P₀, P₅, P₆, P₃, P₄, P₁, P₂, P₇. The same points and
/// Larmor radius give the orbit of the complementary rotation.
pub fn dual_orbit(curve: &Curve, o: &PeriodicOrbit) -> Result<PeriodicOrbit> {
    let rot = match o.rotation {
        Some(r) if r.period() == 4 && o.period == 4 && o.boundary.len() == 8 => r,
        _ => return Err(ImbError::NotSymmetric),
    };
    let p = &o.boundary;
    let nb = [0, 5, 6, 3, 4, 1, 2, 7].iter().map(|&i| p[i]).collect();
    PeriodicOrbit::from_boundary(curve, o.mu, nb, Some(rot.complement()))
}

// ---------------------------------------------------------- superellipse

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuperellipseCenters {
    /// Larmor centres on y = ±x.
    Diagonal,
    /// Larmor centres on the coordinate axes.
    Axis,
}

/// Points, radius and first chord length of a superellipse family member,
/// without running the dynamics.
#[derive(Debug, Clone, Copy)]
pub struct SuperellipseFourGeometry {
    pub points: [Vec2; 8],
    pub mu: f64,
    pub ell1: f64,
    pub theta: f64,
}

fn sup_y(k: u32, x: f64) -> f64 {
    (1.0 - x.abs().powi(2 * k as i32)).max(0.0).powf(1.0 / (2 * k) as f64)
}

fn corner(k: u32) -> f64 {
    2f64.powf(-1.0 / (2 * k) as f64)
}

/// Angle between the anticlockwise tangent (−y^{2k−1}, x^{2k−1}) at p and the
/// chord towards q.
fn sup_theta(k: u32, p: Vec2, q: Vec2) -> f64 {
    let e = 2 * k as i32 - 1;
    v2(-p.y.powi(e), p.x.powi(e)).unit().angle_to((q - p).unit())
}

/// The x₀ beyond which the diagonal rotation 1/4 Larmor circle meets the
/// curve four times: the centre (y₀, y₀) is then exactly μ from the corner.
pub fn x_hat(k: u32) -> Result<f64> {
    if k < 2 {
        return Err(ImbError::Validation(format!("superellipse families need k >= 2, got {k}")));
    }
    let c = corner(k);
    let g = |x: f64| {
        let y = sup_y(k, x);
        (x - y) - SQRT_2 * (c - y)
    };
    brent(g, c + 1e-9 * (1.0 - c), 1.0 - 1e-12, 1e-15)
}

/// Valid x₀ interval of a family. For the diagonal rotation 1/4 family this
/// is (c, 1); members past x̂ are refused separately.
pub fn superellipse4_interval(k: u32, centers: SuperellipseCenters, rot: Rotation) -> (f64, f64) {
    let c = corner(k);
    match (centers, rot) {
        (SuperellipseCenters::Diagonal, Rotation::OneQuarter) => (c, 1.0),
        (SuperellipseCenters::Diagonal, _) => (-1.0, c),
        (SuperellipseCenters::Axis, Rotation::OneQuarter) => (c, 1.0),
        (SuperellipseCenters::Axis, _) => (-c, 1.0),
    }
}

pub fn superellipse4_geometry(
    k: u32,
    centers: SuperellipseCenters,
    x0: f64,
    rot: Rotation,
) -> Result<SuperellipseFourGeometry> {
    let rot = rot.expect_period(4)?;
    if k < 2 {
        return Err(ImbError::Validation(format!("superellipse families need k >= 2, got {k}")));
    }
    let (lo, hi) = superellipse4_interval(k, centers, rot);
    require_x0(x0, lo, hi)?;
    let y0 = sup_y(k, x0);
    let (x, y) = (x0, y0);
    let r14 = rot == Rotation::OneQuarter;
    let (points, mu, ell1) = match centers {
        SuperellipseCenters::Diagonal if r14 => {
            let xh = x_hat(k)?;
            if x0 >= xh {
                return Err(ImbError::BeyondXHat { x0, x_hat: xh });
            }
            (
                [v2(x, -y), v2(x, y), v2(y, x), v2(-y, x), v2(-x, y), v2(-x, -y), v2(-y, -x), v2(y, -x)],
                x - y,
                2.0 * y,
            )
        }
        SuperellipseCenters::Diagonal => (
            [v2(x, y), v2(x, -y), v2(y, -x), v2(-y, -x), v2(-x, -y), v2(-x, y), v2(-y, x), v2(y, x)],
            y - x,
            2.0 * y,
        ),
        SuperellipseCenters::Axis if r14 => (
            [v2(x, y), v2(y, x), v2(-y, x), v2(-x, y), v2(-x, -y), v2(-y, -x), v2(y, -x), v2(x, -y)],
            SQRT_2 * y,
            SQRT_2 * (x - y),
        ),
        SuperellipseCenters::Axis => (
            [v2(x, y), v2(-y, -x), v2(y, -x), v2(-x, y), v2(-x, -y), v2(y, x), v2(-y, x), v2(x, -y)],
            SQRT_2 * y,
            SQRT_2 * (x + y),
        ),
    };
    let theta = sup_theta(k, points[0], points[1]);
    Ok(SuperellipseFourGeometry { points, mu, ell1, theta })
}

/// Tr S₄ from the equal-angle quartic, without running the map.
pub fn superellipse4_trace(k: u32, centers: SuperellipseCenters, x0: f64, rot: Rotation) -> Result<f64> {
    let g = superellipse4_geometry(k, centers, x0, rot)?;
    Ok(trace4_equal_angle(g.theta, g.ell1 / g.mu))
}

/// The printed diagonal display (stated for both rotations).
pub fn printed_trace_diag(k: u32, x0: f64) -> f64 {
    let (x, y) = (x0, sup_y(k, x0));
    let k = k as i32;
    let num = 16.0
        * x * x
        * (x.powi(2 * k - 2) - y.powi(2 * k - 2))
        * (x.powi(4 * k - 2) - y.powi(4 * k - 2))
        * (x.powi(2 * k - 2) - y.powi(2 * k - 2) + 2.0 * y.powi(2 * k - 1) / (x * x))
        * (y.powi(4 * k - 2) - x.powi(4 * k - 2) + (x - y) * x.powi(2 * k - 1) * y.powi(2 * k - 2)).powi(2);
    2.0 + num / (y.powi(16 * k - 12) * (x - y).powi(4))
}

/// The printed axis rotation 1/4 display.
pub fn printed_trace_axis14(k: u32, x0: f64) -> f64 {
    let (x, y) = (x0, sup_y(k, x0));
    let k = k as i32;
    let num = 64.0
        * x.powi(2 * k + 1)
        * y.powi(2 * k)
        * (x.powi(2 * k) * y * y - x * x * y.powi(2 * k))
        * (x.powi(2 * k) * (x - 2.0 * y) + 2.0 * x * y.powi(2 * k))
        * (x.powi(4 * k) * y * y - x * x * y.powi(4 * k) - 2.0 * (x - y) * x.powi(2 * k + 1) * y.powi(2 * k)).powi(2);
    2.0 - num / (x.powi(2 * k) * y - x * y.powi(2 * k)).powi(8)
}

/// 2 − Tr S₄ for the axis rotation 3/4 family, as the printed quotient.
pub fn axis34_defect(k: u32, x0: f64) -> f64 {
    let (x, y) = (x0, sup_y(k, x0));
    let k = k as i32;
    let num = 64.0
        * x.powi(2 * k)
        * y.powi(2 * k - 2)
        * (x.powi(2 * k - 2) - y.powi(2 * k - 2))
        * (x.powi(2 * k - 1) * (x + 2.0 * y) + y.powi(2 * k))
        * (x.powi(4 * k - 2) - y.powi(4 * k - 2) - 2.0 * (x + y) * x.powi(2 * k - 1) * y.powi(2 * k - 2)).powi(2);
    num / (x.powi(2 * k - 1) + y.powi(2 * k - 1)).powi(8)
}

pub fn printed_trace_axis34(k: u32, x0: f64) -> f64 {
    2.0 - axis34_defect(k, x0)
}

pub fn printed_trace(k: u32, centers: SuperellipseCenters, x0: f64, rot: Rotation) -> f64 {
    match (centers, rot) {
        (SuperellipseCenters::Diagonal, _) => printed_trace_diag(k, x0),
        (SuperellipseCenters::Axis, Rotation::OneQuarter) => printed_trace_axis14(k, x0),
        _ => printed_trace_axis34(k, x0),
    }
}

pub fn four_periodic_superellipse(
    k: u32,
    centers: SuperellipseCenters,
    x0: f64,
    rot: Rotation,
) -> Result<FourPeriodic> {
    let g = superellipse4_geometry(k, centers, x0, rot)?;
    let curve = Curve::superellipse(k)?;
    let orbit = PeriodicOrbit::from_boundary(&curve, g.mu, g.points.to_vec(), Some(rot))?;
    let alpha = g.ell1 / g.mu;
    Ok(FourPeriodic {
        curve,
        orbit,
        theta: g.theta,
        alpha,
        trace: trace4_equal_angle(g.theta, alpha),
        printed_trace: Some(printed_trace(k, centers, x0, rot)),
    })
}

pub fn four_periodic_superellipse_diag(k: u32, x0: f64, rot: Rotation) -> Result<FourPeriodic> {
    four_periodic_superellipse(k, SuperellipseCenters::Diagonal, x0, rot)
}

pub fn four_periodic_superellipse_axis(k: u32, x0: f64, rot: Rotation) -> Result<FourPeriodic> {
    four_periodic_superellipse(k, SuperellipseCenters::Axis, x0, rot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collision::{larmor_intersections, CrossingKind};
    use crate::stability::TOL_COMPOSED;

    #[test]
    fn circle_quartic_is_two() {
        for rot in [Rotation::OneQuarter, Rotation::ThreeQuarters] {
            let f = four_periodic_circle(1.0, 0.3, rot).unwrap();
            assert!((f.trace - 2.0).abs() < 1e-8, "{rot}: {}", f.trace);
            let eq = trace4_equal_angle(f.theta, f.alpha);
            assert!((eq - 2.0).abs() < 1e-8);
            let comp = f.orbit.composed_trace(&f.curve).unwrap();
            assert!((comp - 2.0).abs() < 1e-7, "{comp}");
        }
        let f = four_periodic_circle(1.0, 0.3, Rotation::OneQuarter).unwrap();
        assert!(f.theta < FRAC_PI_4);
        assert!((f.printed_trace.unwrap() - 2.0).abs() > 1.0);
    }

    #[test]
    fn ellipse_trace_matches_composition() {
        let (lo, split, hi) = ellipse4_interval(3.0, 2.0);
        assert!((lo - 15.0 / 13.0).abs() < 1e-15);
        for i in 1..12 {
            let x0 = lo + (hi - lo) * i as f64 / 12.0;
            let rot = if x0 > split { Rotation::OneQuarter } else { Rotation::ThreeQuarters };
            let e = four_periodic_ellipse(3.0, 2.0, x0, rot).unwrap();
            let comp = e.four.orbit.composed_trace(&e.four.curve).unwrap();
            assert!((comp - e.four.trace).abs() < TOL_COMPOSED * comp.abs().max(1.0), "{x0}: {comp} {}", e.four.trace);
        }
    }

    #[test]
    fn ellipse_wrong_piece_is_rejected() {
        assert!(matches!(
            four_periodic_ellipse(3.0, 2.0, 2.0, Rotation::OneQuarter),
            Err(ImbError::X0OutOfRange { .. })
        ));
    }

    #[test]
    fn dual_is_an_involution() {
        let e = four_periodic_ellipse(3.0, 2.0, 2.7, Rotation::OneQuarter).unwrap();
        let d = dual_orbit(&e.four.curve, &e.four.orbit).unwrap();
        assert_eq!(d.rotation, Some(Rotation::ThreeQuarters));
        assert!(d.residual <= 1e-7);
        let t = d.compose(&e.four.curve).unwrap().matrix.trace();
        let partner = four_periodic_ellipse(3.0, 2.0, e.geometry.x2, Rotation::ThreeQuarters).unwrap();
        assert!((partner.geometry.mu - e.geometry.mu).abs() < 1e-12);
        assert!((t - partner.four.trace).abs() < 1e-6 * t.abs().max(1.0));
        let dd = dual_orbit(&e.four.curve, &d).unwrap();
        for (p, q) in dd.boundary.iter().zip(&e.four.orbit.boundary) {
            assert!(p.dist(*q) < 1e-15);
        }
    }

    #[test]
    fn dual_needs_period_four() {
        let f = super::super::two_periodic_circle(1.0, 0.5).unwrap();
        assert!(matches!(dual_orbit(&f.curve, &f.orbit), Err(ImbError::NotSymmetric)));
    }

    #[test]
    fn superellipse_quartic_matches_composition() {
        use SuperellipseCenters::*;
        let cases = [
            (Diagonal, Rotation::OneQuarter, 0.86),
            (Diagonal, Rotation::ThreeQuarters, -0.5),
            (Diagonal, Rotation::ThreeQuarters, 0.3),
            (Axis, Rotation::OneQuarter, 0.9),
            (Axis, Rotation::ThreeQuarters, 0.5),
            (Axis, Rotation::ThreeQuarters, -0.3),
        ];
        for k in [2, 3] {
            for (c, rot, x0) in cases {
                let x0 = if c == Diagonal && rot == Rotation::OneQuarter {
                    corner(k) + 0.5 * (x_hat(k).unwrap() - corner(k))
                } else {
                    x0
                };
                let f = four_periodic_superellipse(k, c, x0, rot).unwrap();
                let comp = f.orbit.composed_trace(&f.curve).unwrap();
                assert!((comp - f.trace).abs() < TOL_COMPOSED * comp.abs().max(1.0), "{k} {c:?} {rot} {x0}: {comp} {}", f.trace);
            }
        }
    }

    #[test]
    fn axis34_display_is_exact() {
        for x0 in [-0.5, 0.3, 0.95] {
            let f = four_periodic_superellipse_axis(2, x0, Rotation::ThreeQuarters).unwrap();
            assert!((f.trace - f.printed_trace.unwrap()).abs() < 1e-8 * f.trace.abs().max(1.0));
        }
    }

    #[test]
    fn x_hat_separates_two_and_four_intersections() {
        let xh = x_hat(2).unwrap();
        assert!(xh > corner(2) && xh < 1.0);
        let count = |x0: f64| {
            let y0 = sup_y(2, x0);
            let c = Curve::superellipse(2).unwrap();
            larmor_intersections(&c, v2(x0, y0), v2(0.0, 1.0), x0 - y0)
                .iter()
                .filter(|h| h.kind == CrossingKind::Transversal)
                .count()
        };
        // The exit point itself is excluded from the count.
        assert_eq!(count(xh - 0.01), 1);
        assert_eq!(count(xh + 0.01), 3);
        assert!(matches!(
            four_periodic_superellipse_diag(2, xh + 0.01, Rotation::OneQuarter),
            Err(ImbError::BeyondXHat { .. })
        ));
    }
}
