//! Period-three orbits with dihedral symmetry: ℓ₁ = ℓ₃ = ℓ₅ and a common
//! Larmor angle χ = π/3 (rotation 1/3) or 2π/3 (rotation 2/3).

use std::f64::consts::PI;

use super::{require_mu, PeriodicOrbit, Rotation};
use crate::boundary::Curve;
use crate::error::Result;
use crate::imb_map::PhasePoint;

const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone)]
pub struct ThreePeriodic {
    pub curve: Curve,
    pub orbit: PeriodicOrbit,
    pub theta: f64,
    /// α = ℓ/μ.
    pub alpha: f64,
    pub trace: f64,
}

/// −1 for rotation 1/3, +1 for 2/3: the lower/upper reading of every ∓.
fn sg(rot: Rotation) -> f64 {
    if rot == Rotation::OneThird {
        -1.0
    } else {
        1.0
    }
}

/// cos θ = (3μ ± √(4R² − 3μ²))/(4R), + for rotation 1/3.
pub fn circle3_theta(r: f64, mu: f64, rot: Rotation) -> f64 {
    let root = (4.0 * r * r - 3.0 * mu * mu).sqrt();
    ((3.0 * mu - sg(rot) * root) / (4.0 * r)).acos()
}

/// sin(χ − θ) − μ sin θ/√(R² + μ² − 2Rμ cos θ); zero on the circle orbit.
pub fn circle_implicit_residual(r: f64, mu: f64, theta: f64, chi: f64) -> f64 {
    (chi - theta).sin() - mu * theta.sin() / (r * r + mu * mu - 2.0 * r * mu * theta.cos()).sqrt()
}

pub fn three_periodic_circle(r: f64, mu: f64, rot: Rotation) -> Result<ThreePeriodic> {
    let rot = rot.expect_period(3)?;
    require_mu(mu, r)?;
    let curve = Curve::circle(r)?;
    let theta = circle3_theta(r, mu, rot);
    let alpha = 2.0 * r * theta.sin() / mu;
    let orbit = PeriodicOrbit::from_dynamics(&curve, mu, PhasePoint::new(0.0, theta), 3, Some(rot))?;
    Ok(ThreePeriodic { curve, orbit, theta, alpha, trace: trace3_symmetric(theta, alpha, rot) })
}

/// Coefficients of Tr S₃ as a cubic in α when all six angles equal θ.
pub fn trace3_symmetric_coefficients(theta: f64, rot: Rotation) -> [f64; 4] {
    let (s, c) = theta.sin_cos();
    let x = c / s;
    let (s3, c3) = (3.0 * theta).sin_cos();
    let p6 = PI / 6.0;
    if rot == Rotation::OneThird {
        [
            2.0 - 9.0 * x * x - 3.0 * SQRT3 * x.powi(3),
            3.0 * c / (4.0 * s.powi(4)) * (5.0 * SQRT3 * c + SQRT3 * c3 - 3.0 * s + 9.0 * s3),
            -3.0 * (PI / 3.0 + 2.0 * theta).sin() * (c + (p6 + 3.0 * theta).sin()) / s.powi(5),
            (p6 - 2.0 * theta).cos().powi(3) / s.powi(6),
        ]
    } else {
        [
            2.0 - 9.0 * x * x + 3.0 * SQRT3 * x.powi(3),
            3.0 * c / (4.0 * s.powi(4)) * (-5.0 * SQRT3 * c - SQRT3 * c3 - 3.0 * s + 9.0 * s3),
            3.0 * (PI / 3.0 - 2.0 * theta).sin() * (c + (p6 - 3.0 * theta).sin()) / s.powi(5),
            -(p6 + 2.0 * theta).cos().powi(3) / s.powi(6),
        ]
    }
}

pub fn trace3_symmetric(theta: f64, alpha: f64, rot: Rotation) -> f64 {
    let k = trace3_symmetric_coefficients(theta, rot);
    k[0] + alpha * (k[1] + alpha * (k[2] + alpha * k[3]))
}

fn cots(thetas: &[f64; 6]) -> [f64; 6] {
    thetas.map(|t| t.cos() / t.sin())
}

/// Constant and cubic coefficients of Tr S₃ for six arbitrary angles.
///
/// The √3 term enters with + for rotation 1/3 and − for 2/3, which is what
/// composing the step matrices gives.
pub fn trace3_coefficients(thetas: &[f64; 6], rot: Rotation) -> (f64, f64) {
    let k = cots(thetas);
    let c01 = k[0] + k[1];
    let c23 = k[2] + k[3];
    let c45 = k[4] + k[5];
    let c2345 = c23 + c45;
    let c0 = 2.0 - 0.75 * c23 * c45 - 0.375 * c01 * (2.0 * c2345 - sg(rot) * SQRT3 * c23 * c45);
    (c0, cubic_coefficient(thetas, rot))
}

/// The constant coefficient with the ∓ read literally (− for rotation 1/3).
pub fn printed_c0(thetas: &[f64; 6], rot: Rotation) -> f64 {
    let k = cots(thetas);
    let (c01, c23, c45) = (k[0] + k[1], k[2] + k[3], k[4] + k[5]);
    2.0 - 0.75 * c23 * c45 - 0.375 * c01 * (2.0 * (c23 + c45) + sg(rot) * SQRT3 * c23 * c45)
}

fn cubic_coefficient(t: &[f64; 6], rot: Rotation) -> f64 {
    let g = sg(rot);
    let p6 = PI / 6.0;
    let num = (p6 + g * (t[1] + t[2])).cos() * (p6 + g * (t[3] + t[4])).cos() * (p6 + g * (t[0] + t[5])).cos();
    let den: f64 = t.iter().map(|x| x.sin()).product();
    -g * num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Mat2;
    use crate::imb_map::dt_entries;
    use crate::stability::TOL_COMPOSED;

    #[test]
    fn circle_closed_forms() {
        let t = three_periodic_circle(1.0, 0.5, Rotation::OneThird).unwrap();
        assert!((t.theta.cos() - (1.5 + 3.25f64.sqrt()) / 4.0).abs() < 1e-15);
        assert!(t.theta < PI / 3.0);
        assert!((t.trace.abs() - 2.0).abs() < 1e-9);
        let u = three_periodic_circle(1.0, 0.5, Rotation::TwoThirds).unwrap();
        assert!(u.theta > PI / 3.0 && u.theta < 2.0 * PI / 3.0);
        assert!((u.trace.abs() - 2.0).abs() < 1e-9);
        for x in [&t, &u] {
            let comp = x.orbit.composed_trace(&x.curve).unwrap();
            assert!((comp - x.trace).abs() < TOL_COMPOSED, "{comp} {}", x.trace);
        }
    }

    #[test]
    fn implicit_relation_uses_chi() {
        for rot in [Rotation::OneThird, Rotation::TwoThirds] {
            let th = circle3_theta(1.0, 0.4, rot);
            assert!(circle_implicit_residual(1.0, 0.4, th, rot.chi()).abs() < 1e-12);
        }
    }

    #[test]
    fn equal_angles_reduce_to_symmetric_display() {
        for rot in [Rotation::OneThird, Rotation::TwoThirds] {
            let th = 1.1;
            let (c0, c3) = trace3_coefficients(&[th; 6], rot);
            let k = trace3_symmetric_coefficients(th, rot);
            assert!((c0 - k[0]).abs() < 1e-12);
            assert!((c3 - k[3]).abs() < 1e-12);
        }
        let (c0, _) = trace3_coefficients(&[PI / 2.0; 6], Rotation::OneThird);
        assert!((c0 - 2.0).abs() < 1e-15);
    }

    /// Fit the cubic in α from composed step matrices with arbitrary
    /// curvatures, then compare its ends with the closed coefficients.
    #[test]
    fn coefficients_match_composition() {
        let th = [0.9, 1.3, 1.1, 0.7, 1.7, 1.2];
        let kap = [0.4, -0.2, 1.3];
        for rot in [Rotation::OneThird, Rotation::TwoThirds] {
            let chi = rot.chi();
            let mu = 1.0;
            let tr = |alpha: f64| {
                let mut m = Mat2::IDENTITY;
                for j in 0..3 {
                    let t = (th[2 * j], th[2 * j + 1], th[(2 * j + 2) % 6]);
                    let d = dt_entries(kap[j], kap[(j + 1) % 3], alpha * mu, 2.0 * mu * chi.sin(), chi, t.0, t.1, t.2);
                    m = d * m;
                }
                m.trace()
            };
            let y: Vec<f64> = (0..4).map(|i| tr(i as f64)).collect();
            let c3_fit = (y[3] - 3.0 * y[2] + 3.0 * y[1] - y[0]) / 6.0;
            let (c0, c3) = trace3_coefficients(&th, rot);
            assert!((c0 - y[0]).abs() < 1e-10, "{rot}: {c0} vs {}", y[0]);
            assert!((c3 - c3_fit).abs() < 1e-9, "{rot}: {c3} vs {c3_fit}");
            assert!((printed_c0(&th, rot) - y[0]).abs() > 1e-3);
        }
    }

    #[test]
    fn cubic_sign_flips_with_rotation() {
        let th = [0.9, 1.3, 1.1, 0.7, 1.7, 1.2];
        let a = trace3_coefficients(&th, Rotation::OneThird).1;
        let b = trace3_coefficients(&th, Rotation::TwoThirds).1;
        assert!(a * b < 0.0 || (a - b).abs() > 1e-6);
    }
}
