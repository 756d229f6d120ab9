//! Evaluate a B-spline three ways and watch the precision bookkeeping.
//!
//! The divided-difference form is exact but suffers catastrophic
//! cancellation in f64, so it runs at adaptive extended precision. The
//! Cox-de Boor recurrence stays in f64 and serves as a cross-check. The
//! associated spline B*_N(t) = t^{-N} B_N(t) is returned in log form so its
//! huge dynamic range never overflows.

use thetaspline::bspline::{eval_assoc, eval_divided_difference, eval_recurrence, integrate_bspline};
use thetaspline::numerics::{PrecisionContext, QuadratureRule};
use thetaspline::polyfamilies::{FamilyKind, KnotSet, PolyFamily};

fn main() -> thetaspline::Result<()> {
    let ctx = PrecisionContext::default().with_env_override();
    let fam = PolyFamily::new(FamilyKind::ChebyshevU, 1, 10)?;
    let ks = KnotSet::omega_squared(fam, 1.0)?;
    println!("degree-{} spline on {} knots", ks.degree, ks.knots_f64().len());

    for t in [0.05, 0.3, 0.7] {
        let dd = eval_divided_difference(&ks, t, &ctx)?;
        let rec = eval_recurrence(&ks, t);
        println!(
            "t = {t:>4}: divided-difference {:.12e} ({} bits), recurrence {:.12e}",
            dd.b_value.to_f64(),
            dd.precision_used,
            rec
        );
    }

    let a = eval_assoc(&ks, 0.2, &ctx)?;
    println!(
        "associated spline at t = 0.2: sign {}, ln|B*| = {:.6}, value {:.6e}",
        a.value_log.sign, a.value_log.log_mag, a.value
    );

    let total = integrate_bspline(&ks, &QuadratureRule::default())?;
    println!("integral over the support: {total:.15} (normalized to 1)");
    Ok(())
}
