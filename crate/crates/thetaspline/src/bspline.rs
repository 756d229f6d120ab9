//! Evaluation of the B-spline with simple knots and its associated form
//! t^{-N} B_N(t), in extended precision and in log-scaled form, plus the
//! structural properties (support, positivity, normalization, first-interval
//! closed form) used as invariants throughout.

use crate::error::{Error, Result};
use crate::numerics::{
    adaptive_eval, integrate, Integrand, LogValue, PrecisionContext, QuadratureRule, Range, XReal,
};
use crate::polyfamilies::KnotSet;

/// One B-spline evaluation with the precision bookkeeping attached.
#[derive(Clone, Debug)]
pub struct SplineEval {
    pub t: f64,
    /// B_N(t) at `precision_used` bits; exactly zero outside the support.
    pub b_value: XReal,
    /// Log-scaled copy of `b_value`.
    pub b_log: LogValue,
    pub precision_used: u32,
    /// Index i with knot_i <= t < knot_{i+1}; None outside the support.
    pub interval_index: Option<usize>,
}

// (N+1) * sum over knots of (v-t)^N_+ / W'(v), where W'(v) is the product of
// (v-w) over the other knots. The mirrored variant sums (t-v)^N_+ instead and
// carries the sign (-1)^{N+1}; both forms are exact rearrangements, and the
// one with fewer active terms halves the alternating-sum cancellation.
fn divided_difference_sum(knots: &[XReal], t: &XReal, mirrored: bool) -> XReal {
    let prec = t.prec();
    let n = knots.len() - 2;
    let mut total = XReal::with_val(prec, 0);
    for (i, v) in knots.iter().enumerate() {
        let diff = if mirrored {
            XReal::with_val(prec, t - v)
        } else {
            XReal::with_val(prec, v - t)
        };
        if diff <= 0 {
            continue;
        }
        let mut wprime = XReal::with_val(prec, 1);
        for (j, w) in knots.iter().enumerate() {
            if j != i {
                wprime *= XReal::with_val(prec, v - w);
            }
        }
        let mut power = XReal::with_val(prec, 1);
        for _ in 0..n {
            power *= &diff;
        }
        total += power / wprime;
    }
    total *= n as u32 + 1;
    if mirrored && n % 2 == 0 {
        // (-1)^{N+1}
        total = -total;
    }
    total
}

/// B_N(t) by the divided-difference sum under adaptive precision escalation.
pub fn eval_divided_difference(
    knots: &KnotSet,
    t: f64,
    ctx: &PrecisionContext,
) -> Result<SplineEval> {
    let k64 = knots.knots_f64();
    let (lo, hi) = (knots.min(), knots.max());
    if t < lo || t > hi {
        return Ok(SplineEval {
            t,
            b_value: XReal::with_val(ctx.start_bits, 0),
            b_log: LogValue::ZERO,
            precision_used: ctx.start_bits,
            interval_index: None,
        });
    }
    let mirrored = t > 0.5 * (lo + hi);
    let r = adaptive_eval(
        |p| {
            let kp = knots
                .knots_at(p)
                .expect("knot distinctness was vetted at construction");
            let tp = XReal::with_val(p, t);
            divided_difference_sum(&kp, &tp, mirrored)
        },
        ctx,
    )?;
    let interval_index = k64
        .windows(2)
        .position(|w| w[0] <= t && t < w[1])
        .or(Some(k64.len() - 2)); // t == max
    let b_log = LogValue::from_xreal(&r.value);
    Ok(SplineEval {
        t,
        b_value: r.value,
        b_log,
        precision_used: r.precision_bits,
        interval_index,
    })
}

/// B_N(t) by the triangular recurrence in doubles: an independent oracle for
/// the divided-difference path, normalized so the integral over the support
/// is 1. Stable (no subtractions of like-signed terms) but limited to double
/// range, so it underflows for large N where B_N is tiny.
pub fn eval_recurrence(knots: &KnotSet, t: f64) -> f64 {
    let k = knots.knots_f64();
    let n = k.len() - 2;
    let m = k.len() - 1; // number of degree-0 segments
    if t < k[0] || t > k[m] {
        return 0.0;
    }
    // Degree-0 indicators on [k_i, k_{i+1}), closed at the global right end.
    let mut vals: Vec<f64> = (0..m)
        .map(|i| {
            let inside = (k[i] <= t && t < k[i + 1]) || (i == m - 1 && t == k[m]);
            if inside {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    for deg in 1..=n {
        for i in 0..m - deg {
            let left = if vals[i] != 0.0 {
                (t - k[i]) / (k[i + deg] - k[i]) * vals[i]
            } else {
                0.0
            };
            let right = if vals[i + 1] != 0.0 {
                (k[i + deg + 1] - t) / (k[i + deg + 1] - k[i + 1]) * vals[i + 1]
            } else {
                0.0
            };
            vals[i] = left + right;
        }
    }
    (n as f64 + 1.0) / (k[m] - k[0]) * vals[0]
}

/// Associated B-spline t^{-N} B_N(t) for knot sets with min >= 0.
///
/// At t = 0 with min = 0 the right-limit jump value (-1)^{N+1}(N+1)/W'(0)
/// is returned. The result is log-scaled; `value` additionally holds the
/// double when the magnitude fits.
#[derive(Clone, Debug)]
pub struct AssocEval {
    pub t: f64,
    pub value_log: LogValue,
    pub value: f64,
    pub precision_used: u32,
}

pub fn eval_assoc(knots: &KnotSet, t: f64, ctx: &PrecisionContext) -> Result<AssocEval> {
    if knots.min() < 0.0 {
        return Err(Error::DomainError(format!(
            "associated B-spline needs knots with min >= 0, got min {}",
            knots.min()
        )));
    }
    if t < 0.0 {
        return Err(Error::DomainError(format!(
            "associated B-spline argument must be >= 0, got {t}"
        )));
    }
    let n = knots.knots_f64().len() - 2;
    if t == 0.0 {
        if knots.min() > 0.0 {
            return Ok(AssocEval {
                t,
                value_log: LogValue::ZERO,
                value: 0.0,
                precision_used: ctx.start_bits,
            });
        }
        // Jump value at the left endpoint 0: (-1)^{N+1}(N+1)/W'(0).
        let r = adaptive_eval(
            |p| {
                let kp = knots
                    .knots_at(p)
                    .expect("knot distinctness was vetted at construction");
                let mut wprime = XReal::with_val(p, 1);
                for w in kp.iter().skip(1) {
                    wprime *= XReal::with_val(p, -w.clone());
                }
                let sign = if n % 2 == 0 { -1i32 } else { 1 };
                XReal::with_val(p, (n as i32 + 1) * sign) / wprime
            },
            ctx,
        )?;
        let value_log = LogValue::from_xreal(&r.value);
        return Ok(AssocEval {
            t,
            value_log,
            value: value_log.to_f64(),
            precision_used: r.precision_bits,
        });
    }
    let b = eval_divided_difference(knots, t, ctx)?;
    let value_log = b.b_log.div(&LogValue::new(1, n as f64 * t.ln()));
    Ok(AssocEval {
        t,
        value_log,
        value: value_log.to_f64(),
        precision_used: b.precision_used,
    })
}

/// Integral of B_N over its support by per-knot-interval quadrature; equals
/// 1 for every valid knot set. Restricted to one interval B_N is a degree-N
/// polynomial, so Gauss panels integrate it exactly up to roundoff.
pub fn integrate_bspline(knots: &KnotSet, rule: &QuadratureRule) -> Result<f64> {
    let k = knots.knots_f64();
    let mut total = 0.0;
    for w in k.windows(2) {
        let f = |t: f64| eval_recurrence(knots, t);
        let integrand = Integrand::smooth(&f);
        let (val, _err) = integrate(&integrand, Range::Finite(w[0], w[1]), rule)?;
        total += val;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfamilies::{FamilyKind, PolyFamily};
    use approx::assert_abs_diff_eq;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn custom(k: &[f64]) -> KnotSet {
        KnotSet::custom(k.to_vec()).unwrap()
    }

    #[test]
    fn hat_function_peak() {
        let ks = custom(&[0.0, 1.0, 2.0]);
        let e = eval_divided_difference(&ks, 1.0, &ctx()).unwrap();
        assert!((e.b_value.clone() - 1u32).abs().to_f64() < 1e-30);
        assert_eq!(e.interval_index, Some(1));
    }

    #[test]
    fn cubic_knots_midpoint() {
        // Degree 2 on {0,1,2,3} at 1.5: 3 * [(0.5)^2/(-2) + (1.5)^2/6] = 0.75.
        let ks = custom(&[0.0, 1.0, 2.0, 3.0]);
        let e = eval_divided_difference(&ks, 1.5, &ctx()).unwrap();
        assert!((e.b_value.clone() - 0.75f64).abs().to_f64() < 1e-30);
    }

    #[test]
    fn zero_outside_support() {
        let ks = custom(&[0.0, 1.0, 2.0]);
        let e = eval_divided_difference(&ks, 2.5, &ctx()).unwrap();
        assert!(e.b_value.is_zero());
        assert_eq!(e.interval_index, None);
        assert_eq!(eval_recurrence(&ks, 2.5), 0.0);
    }

    #[test]
    fn recurrence_point_values() {
        assert_abs_diff_eq!(
            eval_recurrence(&custom(&[0.0, 1.0, 2.0]), 1.0),
            1.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            eval_recurrence(&custom(&[-1.0, 0.0, 1.0]), 0.0),
            1.0,
            epsilon = 1e-14
        );
        // First interval of {0,1,2,3}: B_2(t) = t^2/2.
        assert_abs_diff_eq!(
            eval_recurrence(&custom(&[0.0, 1.0, 2.0, 3.0]), 0.5),
            0.125,
            epsilon = 1e-14
        );
    }

    #[test]
    fn first_interval_closed_form() {
        // On [min, second knot]: B_N(t) = (-1)^{N+1}(N+1)(t - min)^N / W'(min).
        let fam = PolyFamily::new(FamilyKind::ChebyshevT, 0, 4).unwrap();
        let ks = KnotSet::omega_squared(fam, 1.0).unwrap();
        let k = ks.knots_f64();
        let n = ks.degree;
        let t = 0.5 * k[1];
        let e = eval_divided_difference(&ks, t, &ctx()).unwrap();
        let p = e.precision_used;
        let kp = ks.knots_at(p).unwrap();
        let mut wprime = XReal::with_val(p, 1);
        for w in kp.iter().skip(1) {
            wprime *= XReal::with_val(p, -w.clone());
        }
        let sign = if n % 2 == 0 { -1i32 } else { 1 };
        let tp = XReal::with_val(p, t);
        let mut tn = XReal::with_val(p, 1);
        for _ in 0..n {
            tn *= &tp;
        }
        let closed = XReal::with_val(p, (n as i32 + 1) * sign) * tn / wprime;
        let rel = ((e.b_value.clone() - &closed) / closed).abs().to_f64();
        assert!(rel < 1e-25, "rel {rel}");
    }

    #[test]
    fn plain_and_mirrored_forms_agree() {
        let ks = custom(&[0.0, 0.3, 1.1, 2.0, 5.0]);
        let kp = ks.knots_at(512).unwrap();
        for &t in &[0.1, 0.7, 1.5, 2.5, 4.0, 4.9] {
            let tp = XReal::with_val(512, t);
            let a = divided_difference_sum(&kp, &tp, false);
            let b = divided_difference_sum(&kp, &tp, true);
            let rel = ((a.clone() - &b) / b).abs().to_f64();
            assert!(rel < 1e-100, "t {t}: rel {rel}");
        }
    }

    #[test]
    fn recurrence_matches_divided_difference() {
        let fam = PolyFamily::new(FamilyKind::ChebyshevT, 0, 6).unwrap();
        let sets = [
            KnotSet::omega_squared(fam, 1.0).unwrap(),
            KnotSet::reciprocal(3).unwrap(),
        ];
        for ks in &sets {
            let (lo, hi) = (ks.min(), ks.max());
            for j in 1..40 {
                let t = lo + (hi - lo) * j as f64 / 40.0;
                let dd = eval_divided_difference(ks, t, &ctx()).unwrap();
                let rc = eval_recurrence(ks, t);
                if rc.abs() > 1e-250 {
                    let rel = (dd.b_value.to_f64() - rc).abs() / rc.abs();
                    assert!(rel < 1e-9, "t {t}: rel {rel}");
                }
            }
        }
    }

    #[test]
    fn positivity_inside_support() {
        let fam = PolyFamily::new(FamilyKind::ChebyshevU, 1, 5).unwrap();
        let ks = KnotSet::omega_squared(fam, 1.0).unwrap();
        let (lo, hi) = (ks.min(), ks.max());
        for j in 1..200 {
            let t = lo + (hi - lo) * j as f64 / 200.0;
            let e = eval_divided_difference(&ks, t, &ctx()).unwrap();
            assert!(e.b_value > 0u32, "B_N({t}) not positive");
        }
    }

    #[test]
    fn associated_spline_values() {
        let ks = custom(&[0.0, 1.0, 2.0]);
        // Jump value at 0: (N+1)/W'(0) with sign: 2/((-1)(-2)) = 1.
        let a = eval_assoc(&ks, 0.0, &ctx()).unwrap();
        assert_abs_diff_eq!(a.value, 1.0, epsilon = 1e-14);
        // Constant 1 on the first interval: t^{-1} * t.
        let a = eval_assoc(&ks, 0.5, &ctx()).unwrap();
        assert_abs_diff_eq!(a.value, 1.0, epsilon = 1e-13);
        let a = eval_assoc(&ks, 3.0, &ctx()).unwrap();
        assert_eq!(a.value, 0.0);
        assert!(a.value_log.is_zero());
        // Negative argument rejected.
        assert!(matches!(
            eval_assoc(&ks, -0.1, &ctx()),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn integral_is_one() {
        let rule = QuadratureRule::default();
        let hat = custom(&[0.0, 1.0, 2.0]);
        assert_abs_diff_eq!(integrate_bspline(&hat, &rule).unwrap(), 1.0, epsilon = 1e-12);
        let rec = KnotSet::reciprocal(3).unwrap();
        assert_abs_diff_eq!(integrate_bspline(&rec, &rule).unwrap(), 1.0, epsilon = 1e-10);
        let fam = PolyFamily::new(FamilyKind::ChebyshevT, 0, 8).unwrap();
        let om = KnotSet::omega_squared(fam, 1.0).unwrap();
        assert_abs_diff_eq!(integrate_bspline(&om, &rule).unwrap(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn precision_monotone_on_reeval() {
        let fam = PolyFamily::new(FamilyKind::ChebyshevT, 0, 8).unwrap();
        let ks = KnotSet::omega_squared(fam, 1.0).unwrap();
        let c = ctx();
        let t = 0.37;
        let e = eval_divided_difference(&ks, t, &c).unwrap();
        let p2 = 2 * e.precision_used;
        let kp = ks.knots_at(p2).unwrap();
        let tp = XReal::with_val(p2, t);
        let hi = divided_difference_sum(&kp, &tp, false);
        let rel = ((hi.clone() - &e.b_value) / hi).abs().to_f64();
        assert!(rel < c.target_rel_tol, "rel {rel}");
    }
}
