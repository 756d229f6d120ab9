//! Test the scaled-spline limit numerically on families where it is only
//! conjectured.
//!
//! The pointwise convergence of scaled associated B-splines to Theta_d is
//! proved for squared Chebyshev knots. This probe runs the identical
//! scaling on Hermite and equidistant zero sets and reports the same error
//! columns, so a decreasing trend is evidence for (not proof of) the wider
//! conjecture. Record ids carry a CONJECTURE- prefix to keep the status
//! visible in downstream tooling.

use std::io::stdout;

use thetaspline::experiments::{conjecture_probe, write_csv};
use thetaspline::numerics::PrecisionContext;
use thetaspline::polyfamilies::FamilyKind;

fn main() -> thetaspline::Result<()> {
    let ctx = PrecisionContext::default().with_env_override();
    let mut records = conjecture_probe(
        FamilyKind::Hermite,
        0,
        2.0,
        &[0.25, 1.0, 4.0],
        &[16, 32, 64],
        &ctx,
    )?;
    records.extend(conjecture_probe(
        FamilyKind::Equidistant,
        1,
        1.3,
        &[0.25, 1.0],
        &[16, 32, 64],
        &ctx,
    )?);
    for r in &mut records {
        r.wall_ms = 0;
    }
    write_csv(&records, &mut stdout())?;
    Ok(())
}
