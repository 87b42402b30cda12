//! One step of the motion: the straight chord P0 -> P1 inside the table and
//! the anticlockwise Larmor arc P1 -> P2 outside it.

use std::f64::consts::TAU;

use crate::boundary::Curve;
use crate::error::{ImbError, Result};
use crate::geometry::Vec2;
use crate::roots::{brent, golden_min};

/// Launch angles this close to 0 or π are treated as tangential.
pub const EPS_ANG: f64 = 1e-9;
/// Sweep angles below this are the exit point itself.
pub const EPS_SWEEP: f64 = 1e-7;
/// Uniform samples along a chord or a Larmor circle.
pub const SAMPLES: usize = 512;
// A zero of the distance estimate closer than this without a sign change is
// a tangential contact.
const TOUCH_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy)]
pub struct ChordHit {
    pub s1: f64,
    pub p1: Vec2,
    pub theta1: f64,
    pub ell1: f64,
    pub kappa1: f64,
    /// Unit direction of the chord.
    pub v: Vec2,
}

#[derive(Debug, Clone, Copy)]
pub struct LarmorHit {
    pub s2: f64,
    pub p2: Vec2,
    pub theta2: f64,
    pub chi: f64,
    pub ell2: f64,
    pub arc_sweep: f64,
    pub kappa2: f64,
    pub center: Vec2,
    /// Velocity on arrival at P2.
    pub v2: Vec2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingKind {
    Transversal,
    Touch,
}

#[derive(Debug, Clone, Copy)]
pub struct Crossing {
    pub at: f64,
    pub kind: CrossingKind,
}

/// Zeros of `f` seen on the sorted grid `xs`. Sign changes are polished with
/// Brent. Interior extrema of |f| without a sign change are refined by golden
/// section: if they dip through zero both crossings are returned, and if they
/// come within `touch_tol` of it a touch is reported.
pub fn sampled_zeros(f: &dyn Fn(f64) -> f64, xs: &[f64], touch_tol: f64) -> Vec<Crossing> {
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut out = Vec::new();
    let polish = |a: f64, b: f64| brent(f, a, b, 1e-15).unwrap_or(0.5 * (a + b));
    for i in 0..xs.len().saturating_sub(1) {
        let (a, b) = (vals[i], vals[i + 1]);
        if a == 0.0 {
            out.push(Crossing { at: xs[i], kind: CrossingKind::Transversal });
        } else if a * b < 0.0 {
            out.push(Crossing { at: polish(xs[i], xs[i + 1]), kind: CrossingKind::Transversal });
        }
    }
    for i in 1..xs.len().saturating_sub(1) {
        let (l, m, r) = (vals[i - 1], vals[i], vals[i + 1]);
        let same = l * m > 0.0 && m * r > 0.0;
        if !same || m.abs() > l.abs() || m.abs() > r.abs() {
            continue;
        }
        let sg = m.signum();
        let (xm, gm) = golden_min(|x| sg * f(x), xs[i - 1], xs[i + 1], 90);
        if gm < 0.0 {
            out.push(Crossing { at: polish(xs[i - 1], xm), kind: CrossingKind::Transversal });
            out.push(Crossing { at: polish(xm, xs[i + 1]), kind: CrossingKind::Transversal });
        } else if gm < touch_tol {
            out.push(Crossing { at: xm, kind: CrossingKind::Touch });
        }
    }
    out.sort_by(|a, b| a.at.total_cmp(&b.at));
    out
}

fn grid(first: f64, end: f64) -> Vec<f64> {
    let h = end / SAMPLES as f64;
    let mut xs: Vec<f64> = (1..=24).rev().map(|m| h * 0.5f64.powi(m)).filter(|&x| x >= first).collect();
    xs.insert(0, first);
    xs.extend((1..=SAMPLES).map(|j| j as f64 * h));
    xs
}

/// Unit launch direction cos θ T + sin θ N.
pub fn launch_direction(curve: &Curve, s0: f64, theta0: f64) -> Vec2 {
    let f = curve.frame_at(s0);
    f.t * theta0.cos() + f.n * theta0.sin()
}

pub fn chord_exit(curve: &Curve, s0: f64, theta0: f64) -> Result<ChordHit> {
    if !(theta0 > EPS_ANG && theta0 < std::f64::consts::PI - EPS_ANG) {
        return Err(ImbError::TangentialChord { theta: theta0 });
    }
    let f0 = curve.frame_at(s0);
    let v = f0.t * theta0.cos() + f0.n * theta0.sin();
    chord_from(curve, f0.p, v)
}

/// First exit of the ray p0 + r v, r > 1e-9 L.
pub fn chord_from(curve: &Curve, p0: Vec2, v: Vec2) -> Result<ChordHit> {
    let eps_sep = 1e-9 * curve.total_length();
    let reach = 2.2 * curve.extent();
    let d = |r: f64| curve.distance_estimate(p0 + v * r);
    let xs = grid(eps_sep, reach);
    if d(xs[0]) >= 0.0 {
        return Err(ImbError::NoInteriorHit);
    }
    let hits = sampled_zeros(&d, &xs, TOUCH_TOL);
    let hit = hits.first().ok_or(ImbError::NoInteriorHit)?;
    if hit.kind == CrossingKind::Touch {
        return Err(ImbError::TangentialContact { sweep: hit.at });
    }
    let p1 = p0 + v * hit.at;
    let fr = curve.frame_at_point(p1);
    Ok(ChordHit {
        s1: curve.locate(p1)?,
        p1,
        theta1: fr.t.angle_to(v),
        ell1: hit.at,
        kappa1: fr.kappa,
        v,
    })
}

/// Point and velocity after sweeping `phi` anticlockwise around the Larmor
/// circle that leaves `p1` with velocity `v`.
pub fn arc_point(p1: Vec2, v: Vec2, mu: f64, phi: f64) -> (Vec2, Vec2) {
    let n = v.rot90();
    let c = p1 + n * mu;
    let (s, co) = phi.sin_cos();
    (c - n * (mu * co) + v * (mu * s), v * co + n * s)
}

/// Every boundary crossing of the full Larmor circle other than P1, by sweep.
pub fn larmor_intersections(curve: &Curve, p1: Vec2, v: Vec2, mu: f64) -> Vec<Crossing> {
    let d = |phi: f64| curve.distance_estimate(arc_point(p1, v, mu, phi).0);
    let mut xs = grid(EPS_SWEEP, TAU);
    xs.pop();
    xs.push(TAU - EPS_SWEEP);
    sampled_zeros(&d, &xs, TOUCH_TOL)
}

pub fn larmor_reentry(curve: &Curve, s1: f64, v: Vec2, mu: f64) -> Result<LarmorHit> {
    larmor_from(curve, curve.point_at(s1), v, mu)
}

/// Re-entry from an exit point given in Cartesian form.
pub fn larmor_from(curve: &Curve, p1: Vec2, v: Vec2, mu: f64) -> Result<LarmorHit> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(ImbError::Validation(format!("Larmor radius must be positive, got {mu}")));
    }
    let hits = larmor_intersections(curve, p1, v, mu);
    let hit = hits.first().ok_or(ImbError::NoReentry)?;
    if hit.kind == CrossingKind::Touch {
        return Err(ImbError::TangentialContact { sweep: hit.at });
    }
    let phi = hit.at;
    let (p2, v2) = arc_point(p1, v, mu, phi);
    let fr = curve.frame_at_point(p2);
    Ok(LarmorHit {
        s2: curve.locate(p2)?,
        p2,
        theta2: fr.t.angle_to(v2),
        chi: 0.5 * phi,
        ell2: p2.dist(p1),
        arc_sweep: phi,
        kappa2: fr.kappa,
        center: p1 + v.rot90() * mu,
        v2,
    })
}
