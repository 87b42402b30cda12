//! Newton's method for F(z) = Tⁿ(z) − z in the (s, u) chart.

use super::PeriodicOrbit;
use crate::boundary::Curve;
use crate::error::{ImbError, Result};
use crate::geometry::{wrap_centered, Mat2};
use crate::imb_map::{iterate, jacobian_analytic, PhasePoint};
use crate::stability::phase_distance;

pub const NEWTON_TOL: f64 = 1e-10;
pub const NEWTON_MAX_ITER: usize = 50;
pub const SINGULAR_DET: f64 = 1e-10;
const MAX_HALVINGS: usize = 10;

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub orbit: PeriodicOrbit,
    /// Newton steps taken before the residual fell below tolerance.
    pub iterations: usize,
}

struct Eval {
    /// F in (s, u); the s part is reduced modulo L.
    f: (f64, f64),
    jac: Mat2,
    residual: f64,
}

fn evaluate(curve: &Curve, mu: f64, z: PhasePoint, n: usize) -> Result<Eval> {
    let steps = iterate(curve, mu, z, n).into_result()?;
    let mut m = Mat2::IDENTITY;
    for (_, d) in &steps {
        m = jacobian_analytic(d)? * m;
    }
    let end = steps[n - 1].0;
    let l = curve.total_length();
    Ok(Eval {
        f: (wrap_centered(end.s - z.s, l), end.u() - z.u()),
        jac: m,
        residual: phase_distance(curve, end, z),
    })
}

fn shifted(z: PhasePoint, ds: f64, du: f64) -> Option<PhasePoint> {
    let u = z.u() + du;
    (u > -1.0 && u < 1.0).then(|| PhasePoint::from_su(z.s + ds, u))
}

/// Find an n-periodic point near `z0`. Steps that do not lower the residual
/// are halved up to ten times.
pub fn find_periodic_newton(curve: &Curve, mu: f64, n: usize, z0: PhasePoint) -> Result<NewtonOutcome> {
    if n == 0 {
        return Err(ImbError::Validation("period must be at least 1".into()));
    }
    let mut z = z0;
    let mut cur = evaluate(curve, mu, z, n)?;
    for it in 0..NEWTON_MAX_ITER {
        if cur.residual <= NEWTON_TOL {
            let orbit = PeriodicOrbit::from_dynamics(curve, mu, PhasePoint::new(curve.wrap(z.s), z.theta), n, None)?;
            return Ok(NewtonOutcome { orbit, iterations: it });
        }
        let a = cur.jac.sub(&Mat2::IDENTITY);
        let det = a.det();
        if det.abs() < SINGULAR_DET {
            return Err(ImbError::SingularJacobian { det });
        }
        let (ds, du) = a.solve(-cur.f.0, -cur.f.1).ok_or(ImbError::SingularJacobian { det })?;
        let mut t = 1.0;
        let mut next = None;
        for _ in 0..=MAX_HALVINGS {
            if let Some(w) = shifted(z, t * ds, t * du) {
                if let Ok(e) = evaluate(curve, mu, w, n) {
                    let better = e.residual < cur.residual;
                    next = Some((w, e));
                    if better {
                        break;
                    }
                }
            }
            t *= 0.5;
        }
        let (w, e) = next.ok_or(ImbError::NoConvergence { iterations: it + 1, residual: cur.residual })?;
        z = w;
        cur = e;
    }
    if cur.residual <= NEWTON_TOL {
        let orbit = PeriodicOrbit::from_dynamics(curve, mu, PhasePoint::new(curve.wrap(z.s), z.theta), n, None)?;
        return Ok(NewtonOutcome { orbit, iterations: NEWTON_MAX_ITER });
    }
    Err(ImbError::NoConvergence { iterations: NEWTON_MAX_ITER, residual: cur.residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{two_periodic_circle, two_periodic_ellipse, EllipseAxis};

    #[test]
    fn recovers_ellipse_major_orbit() {
        let t = two_periodic_ellipse(2.0, 1.0, 0.5, EllipseAxis::Major).unwrap();
        let z = t.orbit.points[0];
        let seed = PhasePoint::from_su(z.s + 1e-4, z.u() - 1e-4);
        let out = find_periodic_newton(&t.curve, 0.5, 2, seed).unwrap();
        let w = out.orbit.points[0];
        assert!(phase_distance(&t.curve, w, z) < 1e-9, "{w:?} {z:?}");
        assert!(out.orbit.residual <= NEWTON_TOL);
        assert!(out.iterations <= 10);
    }

    #[test]
    fn circle_family_is_singular() {
        let t = two_periodic_circle(1.0, 0.5).unwrap();
        let z = t.orbit.points[0];
        let seed = PhasePoint::from_su(z.s, z.u() + 1e-3);
        assert!(matches!(
            find_periodic_newton(&t.curve, 0.5, 2, seed),
            Err(ImbError::SingularJacobian { .. })
        ));
    }
}
