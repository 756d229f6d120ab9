use super::{rel_diff, XReal};
use crate::error::{Error, Result};

/// Policy for adaptive working-precision escalation.
///
/// No a-priori condition-number bound exists for arbitrary knot sets, so
/// every ill-conditioned sum is evaluated at increasing precision until two
/// successive precisions agree.
#[derive(Clone, Copy, Debug)]
pub struct PrecisionContext {
    pub start_bits: u32,
    pub max_bits: u32,
    pub target_rel_tol: f64,
    pub escalation_factor: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            start_bits: 128,
            max_bits: 16384,
            target_rel_tol: 1e-20,
            escalation_factor: 2,
        }
    }
}

impl PrecisionContext {
    pub fn validated(self) -> Result<Self> {
        if self.start_bits > self.max_bits {
            return Err(Error::InvalidInput(format!(
                "start_bits {} > max_bits {}",
                self.start_bits, self.max_bits
            )));
        }
        if !(self.target_rel_tol > 0.0) {
            return Err(Error::InvalidInput(
                "target_rel_tol must be positive".into(),
            ));
        }
        if self.escalation_factor < 2 {
            return Err(Error::InvalidInput(
                "escalation_factor must be at least 2".into(),
            ));
        }
        Ok(self)
    }

    /// Override max_bits from the THETASPLINE_MAX_BITS environment variable.
    pub fn with_env_override(mut self) -> Self {
        if let Ok(v) = std::env::var("THETASPLINE_MAX_BITS") {
            if let Ok(bits) = v.trim().parse::<u32>() {
                self.max_bits = bits;
            }
        }
        self
    }
}

/// Result of an adaptive evaluation: the value and the precision at which
/// agreement with the next escalation step was certified.
#[derive(Clone, Debug)]
pub struct AdaptiveResult {
    pub value: XReal,
    pub precision_bits: u32,
}

/// Evaluate a precision-parameterized computation, escalating the working
/// precision until results at `p` and `escalation_factor * p` bits agree to
/// `target_rel_tol`. The returned value is the one computed at `p`, so
/// re-running the computation at `precision_bits` reproduces it bit-for-bit.
pub fn adaptive_eval<F>(computation: F, ctx: &PrecisionContext) -> Result<AdaptiveResult>
where
    F: Fn(u32) -> XReal,
{
    let mut p = ctx.start_bits;
    let mut at_p = computation(p);
    let mut last_gap = f64::INFINITY;
    loop {
        let hi = p.saturating_mul(ctx.escalation_factor).min(ctx.max_bits);
        if hi <= p {
            return Err(Error::PrecisionExhausted {
                max_bits: ctx.max_bits,
                last_gap,
            });
        }
        let at_hi = computation(hi);
        last_gap = rel_diff(&at_p, &at_hi);
        if last_gap <= ctx.target_rel_tol {
            return Ok(AdaptiveResult {
                value: at_p,
                precision_bits: p,
            });
        }
        p = hi;
        at_p = at_hi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn exact_cancellation_recovers_tiny_epsilon() {
        let ctx = PrecisionContext::default();
        let r = adaptive_eval(
            |p| {
                let one = XReal::with_val(p, 1);
                let eps = XReal::with_val(p, XReal::with_val(p, 2).pow(-200));
                XReal::with_val(p, &one + &eps) - one
            },
            &ctx,
        )
        .unwrap();
        let expect = XReal::with_val(256, XReal::with_val(256, 2).pow(-200));
        assert!(rel_diff(&r.value, &expect) < 1e-20);
    }

    #[test]
    fn constant_zero_is_fixed_point() {
        let ctx = PrecisionContext::default();
        let r = adaptive_eval(|p| XReal::with_val(p, 0), &ctx).unwrap();
        assert!(r.value.is_zero());
        assert_eq!(r.precision_bits, ctx.start_bits);
    }

    #[test]
    fn alternating_sum_matches_decimal_oracle() {
        // sum_{k=0}^{40} (-1)^k 3^k / k!  --  partial sum of e^{-3}.
        // Oracle: the same sum accumulated exactly in rationals.
        use rug::Rational;
        let mut exact = Rational::new();
        let mut num = Rational::from(1); // 3^k / k!
        for k in 0..=40u32 {
            if k > 0 {
                num *= Rational::from((3, k));
            }
            if k % 2 == 0 {
                exact += num.clone();
            } else {
                exact -= num.clone();
            }
        }
        let oracle = XReal::with_val(256, &exact);

        let ctx = PrecisionContext::default();
        let r = adaptive_eval(
            |p| {
                let mut acc = XReal::with_val(p, 0);
                let mut term = XReal::with_val(p, 1);
                for k in 0..=40u32 {
                    if k > 0 {
                        term *= 3u32;
                        term /= k;
                    }
                    if k % 2 == 0 {
                        acc += &term;
                    } else {
                        acc -= &term;
                    }
                }
                acc
            },
            &ctx,
        )
        .unwrap();
        assert!(rel_diff(&r.value, &oracle) < 1e-20);
    }

    #[test]
    fn idempotent_at_returned_precision() {
        let ctx = PrecisionContext::default();
        let f = |p: u32| {
            let mut acc = XReal::with_val(p, 0);
            for k in 1..=100u32 {
                acc += XReal::with_val(p, 1) / k;
            }
            acc
        };
        let r = adaptive_eval(f, &ctx).unwrap();
        let again = f(r.precision_bits);
        assert_eq!(r.value, again);
    }

    #[test]
    fn precision_exhaustion_reported() {
        let ctx = PrecisionContext {
            start_bits: 64,
            max_bits: 256,
            target_rel_tol: 1e-30,
            escalation_factor: 2,
        };
        // A "computation" that never stabilizes: result depends on p.
        let err = adaptive_eval(|p| XReal::with_val(p, p), &ctx).unwrap_err();
        assert!(matches!(err, Error::PrecisionExhausted { .. }));
    }
}
