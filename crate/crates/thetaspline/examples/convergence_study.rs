//! Run the built-in convergence experiments and print their records.
//!
//! Each experiment scales a B-spline family so that it has a known limit:
//! cardinal splines approach the standard Gaussian, reciprocal-knot splines
//! approach 2/(pi cosh t), and squared-Chebyshev splines approach the
//! theta-like functions. Records carry the scaled value in log form along
//! with absolute and relative errors against the limit.

use std::io::stdout;

use thetaspline::experiments::{run_cosh, run_gaussian, run_theta_pointwise, write_csv};
use thetaspline::numerics::PrecisionContext;
use thetaspline::polyfamilies::FamilyKind;

fn main() -> thetaspline::Result<()> {
    let ctx = PrecisionContext::default().with_env_override();

    let mut records = run_gaussian(&[16, 64], &[0.0, 1.0, 2.0])?;
    records.extend(run_cosh(&[8, 32], &[0.0, 1.0], &ctx)?);
    records.extend(run_theta_pointwise(
        FamilyKind::ChebyshevU,
        1,
        1.0,
        &[1.0, 4.0],
        &[16, 64],
        &ctx,
    )?);

    // wall_ms varies run to run; zero it so the output is reproducible.
    for r in &mut records {
        r.wall_ms = 0;
    }
    write_csv(&records, &mut stdout())?;
    Ok(())
}
