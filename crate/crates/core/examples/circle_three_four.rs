//! Circle orbits of period three and four are parabolic for every Larmor
//! radius: closed forms against the composed monodromy.

use imbilliard::families::{four_periodic_circle, three_periodic_circle, Rotation};

fn main() -> imbilliard::Result<()> {
    let r = 1.0;
    for mu in [0.1, 0.5, 0.9] {
        for rot in [Rotation::OneThird, Rotation::TwoThirds] {
            let o = three_periodic_circle(r, mu, rot)?;
            let composed = o.orbit.composed_trace(&o.curve)?;
            println!("mu={mu} rot {}: theta {:.6}, Tr {:+.12}, composed {:+.12}", rot.as_str(), o.theta, o.trace, composed);
        }
        for rot in [Rotation::OneQuarter, Rotation::ThreeQuarters] {
            let o = four_periodic_circle(r, mu, rot)?;
            let composed = o.orbit.composed_trace(&o.curve)?;
            println!("mu={mu} rot {}: theta {:.6}, Tr {:+.12}, composed {:+.12}", rot.as_str(), o.theta, o.trace, composed);
        }
    }
    Ok(())
}
