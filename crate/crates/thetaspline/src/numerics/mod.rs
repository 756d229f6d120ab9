//! Extended-precision arithmetic, adaptive precision escalation, and
//! deterministic quadrature used by every other module.

mod logvalue;
mod precision;
mod quadrature;

pub use logvalue::LogValue;
pub use precision::{adaptive_eval, AdaptiveResult, PrecisionContext};
pub use quadrature::{
    gauss_legendre_nodes, integrate, DecayHint, Integrand, QuadKind, QuadratureRule, Range,
};

/// Extended-precision real number. The precision in bits travels with the
/// value; field operations, integer powers, square root, and comparisons
/// round correctly at that precision (MPFR semantics).
pub type XReal = rug::Float;

/// Relative difference |a - b| / max(|b|, floor), computed at the precision
/// of the wider operand and returned as a machine double.
pub fn rel_diff(a: &XReal, b: &XReal) -> f64 {
    let prec = a.prec().max(b.prec());
    let diff = XReal::with_val(prec, a - b);
    if diff.is_zero() {
        return 0.0;
    }
    let scale = XReal::with_val(prec, b.clone().abs());
    if scale.is_zero() {
        // compare against a instead; both zero was handled above
        let scale_a = XReal::with_val(prec, a.clone().abs());
        return (diff.abs() / scale_a).to_f64();
    }
    (diff.abs() / scale).to_f64()
}
