//! Check the exact finite-N identities at near machine precision.
//!
//! Two independent identities tie interpolation errors to integrals:
//! the spline-route identity expresses u^sigma minus its interpolant as a
//! Mellin transform of the associated B-spline, and the contour-route
//! identity expresses |y|^s minus its interpolant on symmetric nodes as a
//! weighted integral over the node polynomial. Both hold exactly, so any
//! gap measures only numerical error.

use thetaspline::interp::{identity_cor39, identity_prop26, InterpCase};
use thetaspline::numerics::{PrecisionContext, QuadratureRule};
use thetaspline::polyfamilies::{FamilyKind, KnotSet, PolyFamily};

fn main() -> thetaspline::Result<()> {
    let ctx = PrecisionContext::default().with_env_override();
    let rule = QuadratureRule::default();

    let ks = KnotSet::custom(vec![0.0, 1.0, 2.0, 3.0])?;
    let rep = identity_cor39(&ks, 2.0, InterpCase::Power { s: 1.0 }, &ctx, &rule)?;
    println!("spline route, integer knots, f(v) = sqrt(v), u = 2:");
    println!("  lhs {:.15e}  rhs {:.15e}  rel gap {:.2e}", rep.lhs, rep.rhs, rep.rel_gap);

    let rep = identity_cor39(&ks, 2.0, InterpCase::Log { m: 1 }, &ctx, &rule)?;
    println!("same knots, logarithmic case f(v) = (1/2) v ln v:");
    println!("  lhs {:.15e}  rhs {:.15e}  rel gap {:.2e}", rep.lhs, rep.rhs, rep.rel_gap);

    let fam = PolyFamily::new(FamilyKind::ChebyshevT, 0, 8)?;
    let cheb = KnotSet::omega_squared(fam, 1.2)?;
    let rep = identity_cor39(&cheb, 1.2f64 * 1.2, InterpCase::Power { s: 1.5 }, &ctx, &rule)?;
    println!("squared Chebyshev-T knots, N = 8, s = 1.5:");
    println!("  lhs {:.15e}  rhs {:.15e}  rel gap {:.2e}", rep.lhs, rep.rhs, rep.rel_gap);

    let rep = identity_prop26(&[1.0], 2.0, 1.0, &ctx, &rule)?;
    println!("contour route, nodes {{0, 1, -1}}, y = 2, s = 1 (exact value -2):");
    println!("  lhs {:.15e}  rhs {:.15e}  rel gap {:.2e}", rep.lhs, rep.rhs, rep.rel_gap);
    Ok(())
}
