//! Period-two families: trace, verdict and the interval diagnosis for the
//! ellipse axes, the superellipse axis and the stadium.

use imbilliard::families::{
    superellipse_axis_thresholds, two_periodic_ellipse, two_periodic_stadium, two_periodic_superellipse_axis,
    EllipseAxis, StadiumKind,
};
use imbilliard::stability::{classify2_convex, TOL_CLOSED};

fn main() -> imbilliard::Result<()> {
    for axis in [EllipseAxis::Major, EllipseAxis::Minor] {
        for mu in [0.2, 0.5] {
            let o = two_periodic_ellipse(2.0, 1.0, mu, axis)?;
            let (v, diag) = classify2_convex(&o.params, TOL_CLOSED)?;
            let composed = o.orbit.composed_trace(&o.curve)?;
            println!(
                "ellipse {axis:?} mu={mu}: Tr {:+.6} (composed {:+.6}) {} via {:?}",
                v.trace,
                composed,
                v.class.as_str(),
                diag.interval
            );
        }
    }

    let (lo, hi) = superellipse_axis_thresholds(2);
    println!("superellipse k=2 axis thresholds: mu* = {lo:.6}, mu** = {hi:.6}");
    for mu in [0.5 * lo, 0.5 * (lo + hi), 0.5 * (hi + 1.0)] {
        let o = two_periodic_superellipse_axis(2, mu)?;
        println!("  mu={mu:.4}: Tr {:+.6} {}", o.trace(), o.verdict(TOL_CLOSED).class.as_str());
    }

    for kind in [StadiumKind::Sides, StadiumKind::Caps] {
        let o = two_periodic_stadium(2.0, 1.0, 0.5, kind)?;
        println!("stadium {kind:?}: Tr {:+.6} {}", o.trace(), o.verdict(TOL_CLOSED).class.as_str());
    }
    Ok(())
}
