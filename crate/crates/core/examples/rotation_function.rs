//! The rotation function of the elliptic billiard over the confocal
//! parameter, with its limits at b² and a².

use imbilliard::rotation::{
    caustic_kind, confocal_param, limiting_rotation, rot_lambda, rot_limit_at_a2, rot_limit_at_a2_closed,
    rot_limit_at_b2,
};

fn main() -> imbilliard::Result<()> {
    let (a, b) = (2f64.sqrt(), 1.0);
    let nu0 = confocal_param(a, b)?;
    println!("nu0 = {nu0}, r = {}", limiting_rotation(nu0)?);

    for lambda in [0.1, 0.5, 0.9, 1.1, 1.5, 1.9] {
        println!("lambda={lambda}: rot {:.8} ({:?})", rot_lambda(a, b, lambda)?, caustic_kind(a, b, lambda));
    }
    println!("limit at b2 from below {:.6}, above {:.6}", rot_limit_at_b2(a, b, false)?, rot_limit_at_b2(a, b, true)?);
    println!("limit at a2 {:.8} (closed form {:.8})", rot_limit_at_a2(a, b)?, rot_limit_at_a2_closed(a, b)?);
    Ok(())
}
