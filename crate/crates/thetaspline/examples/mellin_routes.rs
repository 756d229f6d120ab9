//! Compare three independent routes to the same Mellin-transform values.
//!
//! For each finite N there is an exact equality between the transform of the
//! scaled associated B-spline (spline route) and a weighted contour integral
//! over the knot polynomial (contour route). As N grows, both approach the
//! closed-form transform of the theta-like limit function.

use thetaspline::mellin::{gn_contour, gn_via_spline, mellin_theta_closed};
use thetaspline::numerics::{PrecisionContext, QuadratureRule};
use thetaspline::polyfamilies::{FamilyKind, PolyFamily};

fn main() -> thetaspline::Result<()> {
    let ctx = PrecisionContext::default().with_env_override();
    let rule = QuadratureRule::default();

    let s = 3.0;
    let d = 1;
    println!("transform comparison at s = {s}, d = {d}, u = 1:");
    println!(
        "{:>5} {:>22} {:>22} {:>12}",
        "N", "spline route", "contour route", "rel gap"
    );
    for n in [6, 10, 20, 40] {
        let fam = PolyFamily::new(FamilyKind::ChebyshevU, d, n)?;
        let sp = gn_via_spline(&fam, 1.0, s, &rule, &ctx)?;
        let co = gn_contour(&fam, 1.0, s, &rule)?;
        let gap = (sp.value.re - co.value.re).abs() / co.value.re.abs();
        println!(
            "{n:>5} {:>22.15e} {:>22.15e} {gap:>12.2e}",
            sp.value.re, co.value.re
        );
    }

    let sigma = (s - f64::from(d)) / 2.0;
    let closed = mellin_theta_closed(d, sigma)?;
    println!("\nlimit value M(Theta_{d}, {sigma}) = {closed:.15}");
    println!("(the finite-N values above converge to it from one side)");

    let special = mellin_theta_closed(1, 1.0)?;
    println!("M(Theta_1, 1) = {special:.12} = 7 zeta(3)");

    let probe = thetaspline::mellin::mellin_theta_quadrature(0, 0.75, &rule)?;
    println!(
        "quadrature cross-check M(Theta_0, 0.75) = {probe:.12} vs closed {:.12}",
        mellin_theta_closed(0, 0.75)?
    );
    Ok(())
}
