//! The four symmetric 4-periodic superellipse families (k = 2): true trace,
//! printed display and composition at a few members.

use imbilliard::families::{
    four_periodic_superellipse, printed_trace, superellipse4_interval, Rotation, SuperellipseCenters,
};
use imbilliard::stability::{classify, TOL_CLOSED};

fn main() -> imbilliard::Result<()> {
    let k = 2;
    for centers in [SuperellipseCenters::Diagonal, SuperellipseCenters::Axis] {
        for rot in [Rotation::OneQuarter, Rotation::ThreeQuarters] {
            let (lo, hi) = superellipse4_interval(k, centers, rot);
            println!("{centers:?} rot {}: x0 in ({lo:.6}, {hi:.6})", rot.as_str());
            for t in [0.2, 0.5, 0.8] {
                let x0 = lo + t * (hi - lo);
                let o = four_periodic_superellipse(k, centers, x0, rot)?;
                let composed = o.orbit.composed_trace(&o.curve)?;
                println!(
                    "  x0={x0:+.5}: Tr {:+.6e} printed {:+.6e} composed {:+.6e} {}",
                    o.trace,
                    printed_trace(k, centers, x0, rot),
                    composed,
                    classify(o.trace, TOL_CLOSED).class.as_str()
                );
            }
        }
    }
    Ok(())
}
