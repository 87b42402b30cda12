//! Period-two stability when the curvature at a bounce may vanish or change
//! sign: the case split on (β, δ) and the verdict from the trace.

use imbilliard::stability::{classify2_general, general_case, trace2_closed, TOL_CLOSED};
use imbilliard::TwoPeriodicParams;

fn main() {
    let alpha = 1.5;
    for (beta, delta) in [(0.8, 0.6), (0.0, 0.7), (0.0, 0.0), (-0.5, 0.4), (-0.5, -0.9)] {
        let p = TwoPeriodicParams::new(alpha, beta, delta);
        let (v, diag) = classify2_general(&p, TOL_CLOSED);
        println!(
            "beta={beta:+} delta={delta:+}: case {}, Tr {:+.6}, {} ({diag:?})",
            general_case(beta, delta).label(),
            trace2_closed(&p),
            v.class.as_str()
        );
    }
}
