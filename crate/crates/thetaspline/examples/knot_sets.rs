//! Build the four knot-set recipes and print them.
//!
//! The squared recipe takes the positive zeros of a parity-d polynomial
//! family, squares them, and adds 0 and u^2. The star recipe keeps the
//! Chebyshev cosine knots themselves on a shifted interval. Cardinal and
//! reciprocal sets are the two classical comparison cases.

use thetaspline::polyfamilies::{FamilyKind, KnotSet, PolyFamily};

fn main() -> thetaspline::Result<()> {
    let fam = PolyFamily::new(FamilyKind::ChebyshevT, 0, 4)?;
    let squared = KnotSet::omega_squared(fam, 1.0)?;
    println!("squared Chebyshev-T zeros, N = 4, u = 1:");
    for k in squared.knots_f64() {
        println!("  {k:.15}");
    }

    let star = KnotSet::omega_star(fam, 1.0)?;
    println!("shifted (star) image of the same set:");
    for k in star.knots_f64() {
        println!("  {k:.15}");
    }

    let herm = PolyFamily::new(FamilyKind::Hermite, 1, 5)?;
    let hset = KnotSet::omega_squared(herm, 2.0)?;
    println!("squared Hermite zeros, d = 1, N = 5, u = 2:");
    for k in hset.knots_f64() {
        println!("  {k:.15}");
    }

    println!("cardinal knots, N = 6: {:?}", KnotSet::cardinal(6)?.knots_f64());
    println!(
        "reciprocal knots, nu = 3: {:?}",
        KnotSet::reciprocal(3)?.knots_f64()
    );
    Ok(())
}
