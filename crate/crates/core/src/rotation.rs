//! Confocal caustics of the elliptic billiard and the rotation function.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{ImbError, Result};
use crate::quad::adaptive;

const ABS_TOL: f64 = 1e-13;
const REL_TOL: f64 = 1e-12;
/// Relative offsets from b² used to extrapolate the logarithmic limit there.
const B2_OFFSETS: (f64, f64) = (1e-8, 1e-10);
/// Relative offset from a² used for the numeric limit there.
const A2_OFFSET: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CausticKind {
    /// λ < 0: the confocal ellipse lies outside the table.
    Exterior,
    EllipseCaustic,
    /// λ = b²: the segment between the foci.
    DegenerateMajor,
    HyperbolaCaustic,
    /// λ = a²: the minor axis.
    DegenerateMinor,
    /// λ > a².
    Imaginary,
}

fn check_axes(a: f64, b: f64) -> Result<()> {
    if !(a > b && b > 0.0 && a.is_finite()) {
        return Err(ImbError::Validation(format!("need a > b > 0, got a = {a}, b = {b}")));
    }
    Ok(())
}

pub fn caustic_kind(a: f64, b: f64, lambda: f64) -> CausticKind {
    let (aa, bb) = (a * a, b * b);
    if lambda < 0.0 {
        CausticKind::Exterior
    } else if lambda < bb {
        CausticKind::EllipseCaustic
    } else if lambda == bb {
        CausticKind::DegenerateMajor
    } else if lambda < aa {
        CausticKind::HyperbolaCaustic
    } else if lambda == aa {
        CausticKind::DegenerateMinor
    } else {
        CausticKind::Imaginary
    }
}

/// ν₀ = a²/(a² − b²): the member of x²/ν + y²/(ν − 1) = 1 similar to the table.
pub fn confocal_param(a: f64, b: f64) -> Result<f64> {
    check_axes(a, b)?;
    Ok(a * a / (a * a - b * b))
}

/// r = arccos(1 − 2/ν₀)/π.
pub fn limiting_rotation(nu0: f64) -> Result<f64> {
    if !(nu0 > 1.0) {
        return Err(ImbError::Nu0OutOfRange { nu0 });
    }
    Ok((1.0 - 2.0 / nu0).clamp(-1.0, 1.0).acos() / PI)
}

/// ∫ₚ^q Π|t − eᵢ|^(−1/2) dt. Each half is mapped with t = end ± w²; a root
/// sitting on an end contributes w² exactly, so the substituted integrand is
/// bounded and never evaluates a zero distance.
fn integrate_sqrt_ends(roots: &[f64], p: f64, q: f64) -> f64 {
    let len = q - p;
    let h = (0.5 * len).sqrt();
    // at_p: t = p + w², else t = q − w².
    let half = |at_p: bool| {
        move |w: f64| {
            let w2 = w * w;
            let (near, far) = if at_p { (p, q) } else { (q, p) };
            let t = if at_p { p + w2 } else { q - w2 };
            let mut prod = 1.0;
            let mut weight = 2.0 * w;
            for &e in roots {
                if e == near {
                    // √(w²) against dt = 2w dw.
                    weight = 2.0;
                } else if e == far {
                    prod *= len - w2;
                } else {
                    prod *= (t - e).abs();
                }
            }
            weight / prod.sqrt()
        }
    };
    adaptive(&half(true), 0.0, h, ABS_TOL, REL_TOL) + adaptive(&half(false), 0.0, h, ABS_TOL, REL_TOL)
}

/// The two integrals (N, D) with the confocal integrand 1/√|(λ − t)(b² − t)(a² − t)|.
pub fn rotation_integrals(a: f64, b: f64, lambda: f64) -> (f64, f64) {
    let (aa, bb) = (a * a, b * b);
    let roots = [lambda, bb, aa];
    let n = integrate_sqrt_ends(&roots, 0.0, bb.min(lambda));
    let d = integrate_sqrt_ends(&roots, bb.max(lambda), aa);
    (n, d)
}

/// The rotation function. It is N/D, twice the displayed ratio, so that it
/// rises from 0 to 1 on (0, b²) and falls from 1 on (b², a²).
pub fn rot_lambda(a: f64, b: f64, lambda: f64) -> Result<f64> {
    check_axes(a, b)?;
    let (aa, bb) = (a * a, b * b);
    if lambda == bb || lambda == aa {
        return Err(ImbError::LambdaDegenerate { lambda });
    }
    if !(lambda > 0.0 && lambda < aa) {
        return Err(ImbError::Validation(format!("λ = {lambda} is outside (0, a²)")));
    }
    let (n, d) = rotation_integrals(a, b, lambda);
    Ok(n / d)
}

/// The displayed ratio, whose integrand 1/√((λ − t)(b² − λ)(a² − λ)) has two
/// factors that do not depend on t. Kept for comparison; it is unbounded as
/// λ → a² and does not reach 1 at b².
pub fn rot_lambda_printed(a: f64, b: f64, lambda: f64) -> Result<f64> {
    check_axes(a, b)?;
    let (aa, bb) = (a * a, b * b);
    if lambda == bb || lambda == aa {
        return Err(ImbError::LambdaDegenerate { lambda });
    }
    let c = ((bb - lambda) * (aa - lambda)).abs().sqrt();
    let n = integrate_sqrt_ends(&[lambda], 0.0, bb.min(lambda)) / c;
    let d = integrate_sqrt_ends(&[lambda], bb.max(lambda), aa) / c;
    Ok(n / (2.0 * d))
}

/// Limit of rot at λ = b² from one side. N and D both diverge like
/// log(1/ε); the ratio of their changes between two offsets cancels the
/// constant parts.
pub fn rot_limit_at_b2(a: f64, b: f64, from_above: bool) -> Result<f64> {
    check_axes(a, b)?;
    let bb = b * b;
    let sg = if from_above { 1.0 } else { -1.0 };
    let (n1, d1) = rotation_integrals(a, b, bb * (1.0 + sg * B2_OFFSETS.0));
    let (n2, d2) = rotation_integrals(a, b, bb * (1.0 + sg * B2_OFFSETS.1));
    Ok((n1 - n2) / (d1 - d2))
}

/// rot evaluated just below a².
pub fn rot_limit_at_a2(a: f64, b: f64) -> Result<f64> {
    check_axes(a, b)?;
    let (aa, bb) = (a * a, b * b);
    rot_lambda(a, b, aa - A2_OFFSET * (aa - bb))
}

/// Closed form of the limit at a²: 2 arctan(√(b²/(a² − b²)))/π, which
/// equals 1 − r(ν₀).
pub fn rot_limit_at_a2_closed(a: f64, b: f64) -> Result<f64> {
    check_axes(a, b)?;
    let (aa, bb) = (a * a, b * b);
    Ok(2.0 * (bb / (aa - bb)).sqrt().atan() / PI)
}
