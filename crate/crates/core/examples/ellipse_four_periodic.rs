//! The symmetric 4-periodic ellipse family for a = 3, b = 2: its parameter
//! interval, a few members, and the dual orbit of a rotation-1/4 member.

use imbilliard::families::{
    dual_orbit, ellipse4_dual_parameter, ellipse4_interval, ellipse4_trace, four_periodic_ellipse, Rotation,
};

fn main() -> imbilliard::Result<()> {
    let (a, b) = (3.0, 2.0);
    let (lo, split, hi) = ellipse4_interval(a, b);
    println!("x0 in ({lo:.6}, {hi}); rotation 3/4 below {split:.6}, 1/4 above");

    for x0 in [1.5, 2.0, 2.4, 2.6, 2.8, 2.9] {
        let rot = if x0 < split { Rotation::ThreeQuarters } else { Rotation::OneQuarter };
        let e = four_periodic_ellipse(a, b, x0, rot)?;
        let composed = e.four.orbit.composed_trace(&e.four.curve)?;
        println!(
            "x0={x0}: rot {} mu {:.6}, Tr {:+.8}, composed {:+.8}",
            rot.as_str(),
            e.geometry.mu,
            ellipse4_trace(a, b, x0),
            composed
        );
    }

    let e = four_periodic_ellipse(a, b, 2.7, Rotation::OneQuarter)?;
    let dual = dual_orbit(&e.four.curve, &e.four.orbit)?;
    let partner = ellipse4_dual_parameter(&e.geometry);
    println!(
        "dual of x0=2.7: residual {:.1e}, Tr {:+.8}; family trace at x2={partner:.6}: {:+.8}",
        dual.residual,
        dual.composed_trace(&e.four.curve)?,
        ellipse4_trace(a, b, partner)
    );
    Ok(())
}
