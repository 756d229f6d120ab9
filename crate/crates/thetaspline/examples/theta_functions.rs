//! Evaluate the theta-like limit functions and check their integrals.
//!
//! Theta_d(t) interpolates between 1 at t = 0 and fast decay at infinity;
//! the evaluator switches between a transformed series (small t) and the
//! direct alternating series (large t). The d = 1 total integral is also
//! compared against the two candidate closed-form constants; only 7 zeta(3)
//! survives the comparison.

use thetaspline::numerics::QuadratureRule;
use thetaspline::thetafn::{theta1_integral_diagnostic, theta_eval, ThetaSpec};

fn main() -> thetaspline::Result<()> {
    let spec = ThetaSpec::default();
    println!("{:>8} {:>22} {:>22}", "t", "Theta_0(t)", "Theta_1(t)");
    for t in [0.0, 0.5, 1.0, 3.0, 9.0, 25.0] {
        println!(
            "{t:>8} {:>22.15e} {:>22.15e}",
            theta_eval(0, t, &spec)?,
            theta_eval(1, t, &spec)?
        );
    }

    let rule = QuadratureRule::default();
    let rep = theta1_integral_diagnostic(&rule)?;
    println!("\nintegral of Theta_1 over (0, inf) = {:.12}", rep.measured);
    println!("  |integral - 7 zeta(3)|  = {:.3e}", rep.dist_to_7_zeta3);
    println!("  |integral - 14 zeta(3)| = {:.3e}", rep.dist_to_14_zeta3);
    Ok(())
}
