//! One step of the return map on an ellipse, its analytic derivative against
//! central differences, and the determinant.

use imbilliard::imb_map::{jacobian_analytic, jacobian_numeric, step};
use imbilliard::{Curve, PhasePoint};

fn main() -> imbilliard::Result<()> {
    let curve = Curve::ellipse(2.0, 1.0)?;
    let mu = 0.4;
    let z = PhasePoint::new(0.7, 1.2);

    let (next, d) = step(&curve, mu, z)?;
    println!("P0 = ({:.6}, {:.6})  P1 = ({:.6}, {:.6})  P2 = ({:.6}, {:.6})", d.p0.x, d.p0.y, d.p1.x, d.p1.y, d.p2.x, d.p2.y);
    println!("chord {:.6}, arc chord {:.6}, chi {:.6}", d.ell1, d.ell2, d.chi);
    println!("(s, theta): ({:.6}, {:.6}) -> ({:.6}, {:.6})", z.s, z.theta, next.s, next.theta);

    let exact = jacobian_analytic(&d)?;
    let fd = jacobian_numeric(&curve, mu, z, 1e-5)?;
    println!("analytic  {exact:?}");
    println!("numeric   {fd:?}");
    println!("det - 1 = {:.2e}", exact.det() - 1.0);
    Ok(())
}
