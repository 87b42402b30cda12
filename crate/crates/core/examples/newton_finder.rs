//! Newton's method on Tⁿ(z) − z recovers a known periodic orbit from a
//! perturbed seed.

use imbilliard::families::{find_periodic_newton, two_periodic_ellipse, EllipseAxis};
use imbilliard::stability::phase_distance;
use imbilliard::PhasePoint;

fn main() -> imbilliard::Result<()> {
    let known = two_periodic_ellipse(2.0, 1.0, 0.5, EllipseAxis::Minor)?;
    let z = known.orbit.points[0];
    let seed = PhasePoint::new(z.s + 0.02, z.theta - 0.01);

    let found = find_periodic_newton(&known.curve, 0.5, 2, seed)?;
    let p = found.orbit.points[0];
    println!("seed ({:.6}, {:.6}) -> ({:.12}, {:.12})", seed.s, seed.theta, p.s, p.theta);
    println!(
        "{} iterations, residual {:.1e}, distance to known orbit {:.1e}",
        found.iterations,
        found.orbit.residual,
        phase_distance(&known.curve, p, z)
    );
    println!("trace {:+.8}", found.orbit.composed_trace(&known.curve)?);
    Ok(())
}
