//! Classical polynomial families (Chebyshev, Gegenbauer, Hermite, and
//! polynomials with equidistant zeros), their positive zeros, the knot-set
//! builders derived from those zeros, and a diagnostic probe of the cosine
//! approximation property shared by all of them.
//!
//! Normalization convention: a family of parity d with degree 2N+d is stored
//! through its positive zeros x_1 < ... < x_N (plus a zero at the origin when
//! d = 1). The monic representative is z^d * prod_k (z^2 - x_k^2) up to the
//! sign (-1)^N; every downstream formula consumes zeros or ratios where that
//! sign cancels.

use num_complex::Complex64;
use rug::float::Constant;

use crate::error::{Error, Result};
use crate::numerics::{LogValue, XReal};
use crate::specialfn::hd_eval;

/// Chebyshev polynomial kind: first (T) or second (U).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChebKind {
    T,
    U,
}

/// T_m(x) or U_m(x) at extended precision, any real x.
///
/// Inside [-1, 1] the trigonometric form is used; outside, the hyperbolic
/// form, which MPFR's wide exponent range keeps free of overflow.
pub fn cheb_eval_xreal(kind: ChebKind, m: u32, x: &XReal) -> XReal {
    let prec = x.prec();
    let ax = x.clone().abs();
    let neg = *x < 0u32;
    // (-1)^m for T_m(-x) = (-1)^m T_m(x); U has the same parity.
    let parity = if neg && m % 2 == 1 { -1 } else { 1 };
    let val = if ax <= 1u32 {
        let theta = ax.acos();
        match kind {
            ChebKind::T => (theta * m).cos(),
            ChebKind::U => {
                let s = theta.clone().sin();
                if s.is_zero() {
                    // |x| = 1: U_m(1) = m + 1.
                    XReal::with_val(prec, m + 1)
                } else {
                    (theta * (m + 1)).sin() / s
                }
            }
        }
    } else {
        let theta = ax.acosh();
        match kind {
            ChebKind::T => (theta * m).cosh(),
            ChebKind::U => {
                let s = theta.clone().sinh();
                (theta * (m + 1)).sinh() / s
            }
        }
    };
    val * parity
}

/// T_m(x) or U_m(x) in doubles. Overflows for |x| well outside [-1, 1] with
/// large m; use [`cheb_eval_log`] there.
pub fn cheb_eval_f64(kind: ChebKind, m: u32, x: f64) -> f64 {
    let ax = x.abs();
    let parity = if x < 0.0 && m % 2 == 1 { -1.0 } else { 1.0 };
    let val = if ax <= 1.0 {
        let theta = ax.acos();
        match kind {
            ChebKind::T => (m as f64 * theta).cos(),
            ChebKind::U => {
                let s = theta.sin();
                if s == 0.0 {
                    (m + 1) as f64
                } else {
                    ((m + 1) as f64 * theta).sin() / s
                }
            }
        }
    } else {
        let theta = ax.acosh();
        match kind {
            ChebKind::T => (m as f64 * theta).cosh(),
            ChebKind::U => ((m + 1) as f64 * theta).sinh() / theta.sinh(),
        }
    };
    parity * val
}

/// T_m(x) or U_m(x) as a LogValue; stable for any m and |x| > 1 where the
/// double result would overflow.
pub fn cheb_eval_log(kind: ChebKind, m: u32, x: f64) -> LogValue {
    let ax = x.abs();
    if ax <= 1.0 {
        return LogValue::from_f64(cheb_eval_f64(kind, m, x));
    }
    let sign: i8 = if x < 0.0 && m % 2 == 1 { -1 } else { 1 };
    let theta = ax.acosh();
    let log_mag = match kind {
        ChebKind::T => {
            // cosh(m theta) = e^{m theta} (1 + e^{-2 m theta}) / 2
            let l = m as f64 * theta;
            l + (1.0 + (-2.0 * l).exp()).ln() - std::f64::consts::LN_2
        }
        ChebKind::U => {
            // sinh((m+1)t)/sinh(t) = e^{mt} (1 - e^{-2(m+1)t}) / (1 - e^{-2t})
            let num = (-(-2.0 * (m + 1) as f64 * theta).exp_m1()).ln();
            let den = (-(-2.0 * theta).exp_m1()).ln();
            m as f64 * theta + num - den
        }
    };
    LogValue::new(sign, log_mag)
}

/// T_m(i t) or U_m(i t) for real t. The value is i^p * r with p = m mod 4 and
/// r real; returns (r as LogValue, p). Uses a = t + sqrt(1 + t^2), so
/// ln a = asinh t, and never forms a^m directly.
pub fn cheb_imag_log(kind: ChebKind, m: u32, t: f64) -> (LogValue, u8) {
    let l = t.asinh(); // ln a
    let even = m % 2 == 0;
    // ln(e^x + e^{-x}) and ln|e^x - e^{-x}| with the sign of the difference.
    let log_sum = |x: f64| x.abs() + (-2.0 * x.abs()).exp().ln_1p();
    let log_diff = |x: f64| -> LogValue {
        if x == 0.0 {
            LogValue::ZERO
        } else {
            let s: i8 = if x > 0.0 { 1 } else { -1 };
            LogValue::new(s, x.abs() + (-(-2.0 * x.abs()).exp_m1()).ln())
        }
    };
    let r = match kind {
        ChebKind::T => {
            // (a^m + (-1)^m a^{-m}) / 2
            let lm = m as f64 * l;
            if even {
                LogValue::new(1, log_sum(lm) - std::f64::consts::LN_2)
            } else {
                let d = log_diff(lm);
                LogValue::new(d.sign, d.log_mag - std::f64::consts::LN_2)
            }
        }
        ChebKind::U => {
            // (a^{m+1} + (-1)^m a^{-(m+1)}) / (a + a^{-1})
            let lm = (m + 1) as f64 * l;
            let den = LogValue::new(1, log_sum(l));
            let num = if even {
                LogValue::new(1, log_sum(lm))
            } else {
                log_diff(lm)
            };
            num.div(&den)
        }
    };
    (r, (m % 4) as u8)
}

/// Family selector; Gegenbauer carries its index lambda >= 0 (lambda = 0
/// is routed through the Chebyshev T closed forms).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FamilyKind {
    ChebyshevT,
    ChebyshevU,
    Gegenbauer { lambda: f64 },
    Hermite,
    Equidistant,
}

/// A parity-d polynomial family member of degree 2N+d, identified by its
/// kind, parity d in {0, 1}, and index N >= 1.
#[derive(Clone, Copy, Debug)]
pub struct PolyFamily {
    pub kind: FamilyKind,
    pub d: u8,
    pub n: usize,
}

impl PolyFamily {
    pub fn new(kind: FamilyKind, d: u8, n: usize) -> Result<Self> {
        if d > 1 {
            return Err(Error::InvalidInput(format!("parity d must be 0 or 1, got {d}")));
        }
        if n < 1 {
            return Err(Error::InvalidInput("family index N must be >= 1".into()));
        }
        if let FamilyKind::Gegenbauer { lambda } = kind {
            if !(lambda >= 0.0) || !lambda.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "Gegenbauer index must be finite and >= 0, got {lambda}"
                )));
            }
        }
        Ok(Self { kind, d, n })
    }

    /// Polynomial degree 2N + d.
    pub fn degree(&self) -> u32 {
        (2 * self.n + self.d as usize) as u32
    }

    /// Gegenbauer index when the family has one (T -> 0, U -> 1).
    pub fn lambda(&self) -> Option<f64> {
        match self.kind {
            FamilyKind::ChebyshevT => Some(0.0),
            FamilyKind::ChebyshevU => Some(1.0),
            FamilyKind::Gegenbauer { lambda } => Some(lambda),
            _ => None,
        }
    }

    /// Scaling constant beta_N of the cosine approximation property.
    pub fn beta_n(&self) -> f64 {
        let m = self.degree() as f64;
        match self.kind {
            FamilyKind::ChebyshevT => m,
            FamilyKind::ChebyshevU => m + 1.0,
            FamilyKind::Gegenbauer { lambda } => m + lambda,
            FamilyKind::Hermite => (2.0 * m + 1.0).sqrt(),
            FamilyKind::Equidistant => (m - 1.0) * std::f64::consts::FRAC_PI_2,
        }
    }

    /// Default admissible radius gamma_N for the cosine approximation probe.
    ///
    /// Any gamma_N with log(N+1) <~ gamma_N = o(N^{2/3}) (Gegenbauer-type) or
    /// o(N^{1/2}) (Hermite, equidistant) is admissible; this picks a concrete
    /// representative.
    pub fn gamma_n(&self) -> f64 {
        let n = self.n as f64;
        let log = (n + 1.0).ln();
        match self.kind {
            FamilyKind::ChebyshevT | FamilyKind::ChebyshevU | FamilyKind::Gegenbauer { .. } => {
                log.max(n.powf(1.0 / 3.0))
            }
            FamilyKind::Hermite | FamilyKind::Equidistant => log.max(n.powf(0.25)),
        }
    }

    /// Default error scale delta_N matched to gamma_n(): gamma^3 / N^2 for
    /// the Gegenbauer class, gamma^2 / N otherwise.
    pub fn delta_n(&self) -> f64 {
        let n = self.n as f64;
        let g = self.gamma_n();
        match self.kind {
            FamilyKind::ChebyshevT | FamilyKind::ChebyshevU | FamilyKind::Gegenbauer { .. } => {
                g.powi(3) / (n * n)
            }
            FamilyKind::Hermite | FamilyKind::Equidistant => g * g / n,
        }
    }
}

// Gegenbauer C^lambda_m and Hermite H_m values in doubles, renormalized
// during the recurrence so only the sign is meaningful.
fn gegenbauer_sign(lambda: f64, m: u32, x: f64) -> f64 {
    let mut p0 = 1.0;
    let mut p1 = 2.0 * lambda * x;
    if m == 0 {
        return p0;
    }
    for k in 2..=m as u64 {
        let kf = k as f64;
        let next = (2.0 * (kf + lambda - 1.0) * x * p1 - (kf + 2.0 * lambda - 2.0) * p0) / kf;
        p0 = p1;
        p1 = next;
        let mag = p0.abs().max(p1.abs());
        if mag > 1e200 {
            p0 *= 1e-200;
            p1 *= 1e-200;
        } else if mag > 0.0 && mag < 1e-200 {
            p0 *= 1e200;
            p1 *= 1e200;
        }
    }
    p1
}

fn hermite_sign(m: u32, x: f64) -> f64 {
    let mut p0 = 1.0;
    let mut p1 = 2.0 * x;
    if m == 0 {
        return p0;
    }
    for k in 2..=m as u64 {
        let next = 2.0 * x * p1 - 2.0 * (k as f64 - 1.0) * p0;
        p0 = p1;
        p1 = next;
        let mag = p0.abs().max(p1.abs());
        if mag > 1e200 {
            p0 *= 1e-200;
            p1 *= 1e-200;
        } else if mag > 0.0 && mag < 1e-200 {
            p0 *= 1e200;
            p1 *= 1e200;
        }
    }
    p1
}

// Value and derivative at extended precision, for Newton polishing.
// C^lambda' = 2 lambda C^{lambda+1}_{m-1}; H' = 2m H_{m-1}.
fn gegenbauer_xreal(lambda: f64, m: u32, x: &XReal) -> XReal {
    let prec = x.prec();
    let lam = XReal::with_val(prec, lambda);
    let mut p0 = XReal::with_val(prec, 1);
    let mut p1 = XReal::with_val(prec, 2.0 * lambda) * x;
    if m == 0 {
        return p0;
    }
    for k in 2..=m {
        let a = XReal::with_val(prec, k - 1) + &lam;
        let b = XReal::with_val(prec, k - 2) + lam.clone() * 2u32;
        let next = (a * 2u32 * x.clone() * &p1 - b * &p0) / k;
        p0 = p1;
        p1 = next;
    }
    p1
}

fn hermite_xreal(m: u32, x: &XReal) -> XReal {
    let prec = x.prec();
    let mut p0 = XReal::with_val(prec, 1);
    let mut p1 = x.clone() * 2u32;
    if m == 0 {
        return p0;
    }
    for k in 2..=m {
        let next = x.clone() * 2u32 * &p1 - p0.clone() * (2 * (k - 1));
        p0 = p1;
        p1 = next;
    }
    p1
}

fn value_and_deriv(fam: &PolyFamily, x: &XReal) -> (XReal, XReal) {
    let m = fam.degree();
    match fam.kind {
        FamilyKind::Hermite => {
            let v = hermite_xreal(m, x);
            let dv = 2u32 * XReal::with_val(x.prec(), m) * hermite_xreal(m - 1, x);
            (v, dv)
        }
        FamilyKind::Gegenbauer { lambda } => {
            let v = gegenbauer_xreal(lambda, m, x);
            let dv = gegenbauer_xreal(lambda + 1.0, m - 1, x) * (2.0 * lambda);
            (v, dv)
        }
        _ => unreachable!("Newton polish only runs for recurrence families"),
    }
}

fn recurrence_sign(fam: &PolyFamily, x: f64) -> f64 {
    match fam.kind {
        FamilyKind::Hermite => hermite_sign(fam.degree(), x),
        FamilyKind::Gegenbauer { lambda } => gegenbauer_sign(lambda, fam.degree(), x),
        _ => unreachable!(),
    }
}

// Positive-zero search interval upper bound: all Gegenbauer zeros lie in
// (-1, 1); Hermite zeros lie inside (-sqrt(2m+1), sqrt(2m+1)) = (-beta, beta).
fn zero_upper_bound(fam: &PolyFamily) -> f64 {
    match fam.kind {
        FamilyKind::Hermite => fam.beta_n(),
        _ => 1.0,
    }
}

fn bracketed_zeros_f64(fam: &PolyFamily) -> Result<Vec<f64>> {
    let upper = zero_upper_bound(fam);
    let m = fam.degree() as usize;
    let grid = 8 * m + 16;
    // Zeros cluster toward the endpoint like cos of equispaced angles, so the
    // grid is uniform in angle, staying strictly inside (0, upper).
    let xs: Vec<f64> = (0..=grid)
        .map(|j| upper * (std::f64::consts::FRAC_PI_2 * j as f64 / (grid + 1) as f64).cos())
        .collect();
    let mut zeros = Vec::with_capacity(fam.n);
    let mut f_prev = recurrence_sign(fam, xs[0]);
    for w in 1..=grid {
        let f_here = recurrence_sign(fam, xs[w]);
        if f_prev == 0.0 {
            zeros.push(xs[w - 1]);
        } else if f_prev * f_here < 0.0 {
            // Certified sign change; bisect to double precision.
            let (mut a, mut b) = (xs[w], xs[w - 1]); // a < b
            let mut fa = f_here;
            for _ in 0..100 {
                let mid = 0.5 * (a + b);
                let fm = recurrence_sign(fam, mid);
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if fa * fm < 0.0 {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            zeros.push(0.5 * (a + b));
        }
        f_prev = f_here;
    }
    zeros.sort_by(|p, q| p.partial_cmp(q).unwrap());
    if zeros.len() != fam.n {
        return Err(Error::ZeroFindingFailure {
            family: format!("{:?}", fam.kind),
            index: zeros.len(),
        });
    }
    Ok(zeros)
}

/// Positive zeros x_1 < ... < x_N of the degree-2N+d family member,
/// ascending, in doubles. The zero at the origin (d = 1) is not included.
pub fn family_zeros(fam: &PolyFamily) -> Result<Vec<f64>> {
    let m = fam.degree();
    let n = fam.n;
    // Gegenbauer with index 0 degenerates as a recurrence; it is Chebyshev T
    // up to normalization and shares its closed-form zeros.
    let cheb_t_like = matches!(fam.kind, FamilyKind::ChebyshevT)
        || matches!(fam.kind, FamilyKind::Gegenbauer { lambda } if lambda == 0.0);
    if cheb_t_like {
        // cos((2j-1) pi / (2m)), positive for j = N .. 1.
        return Ok((1..=n)
            .rev()
            .map(|j| ((2 * j - 1) as f64 * std::f64::consts::PI / (2.0 * m as f64)).cos())
            .collect());
    }
    match fam.kind {
        FamilyKind::ChebyshevU => Ok((1..=n)
            .rev()
            .map(|j| (j as f64 * std::f64::consts::PI / (m as f64 + 1.0)).cos())
            .collect()),
        FamilyKind::Equidistant => Ok((1..=n)
            .map(|k| (2 * k + fam.d as usize - 1) as f64 / (m as f64 - 1.0))
            .collect()),
        FamilyKind::Gegenbauer { .. } | FamilyKind::Hermite => bracketed_zeros_f64(fam),
        FamilyKind::ChebyshevT => unreachable!(),
    }
}

/// Positive zeros at `prec` bits, ascending. Closed forms are re-evaluated
/// against pi at working precision; recurrence families are Newton-polished
/// from the certified double brackets.
pub fn family_zeros_at(fam: &PolyFamily, prec: u32) -> Result<Vec<XReal>> {
    let m = fam.degree();
    let n = fam.n;
    let pi = XReal::with_val(prec, Constant::Pi);
    let cheb_t_like = matches!(fam.kind, FamilyKind::ChebyshevT)
        || matches!(fam.kind, FamilyKind::Gegenbauer { lambda } if lambda == 0.0);
    if cheb_t_like {
        return Ok((1..=n)
            .rev()
            .map(|j| {
                let ang = pi.clone() * (2 * j as u32 - 1) / (2 * m);
                ang.cos()
            })
            .collect());
    }
    match fam.kind {
        FamilyKind::ChebyshevU => Ok((1..=n)
            .rev()
            .map(|j| (pi.clone() * j as u32 / (m + 1)).cos())
            .collect()),
        FamilyKind::Equidistant => Ok((1..=n)
            .map(|k| {
                XReal::with_val(prec, 2 * k as u32 + fam.d as u32 - 1) / (m - 1)
            })
            .collect()),
        FamilyKind::Gegenbauer { .. } | FamilyKind::Hermite => {
            let seeds = bracketed_zeros_f64(fam)?;
            let work = prec + 64;
            let steps = 3 + (prec as f64 / 52.0).log2().ceil().max(0.0) as usize;
            let mut out = Vec::with_capacity(n);
            for s in seeds {
                let mut x = XReal::with_val(work, s);
                for _ in 0..steps {
                    let (v, dv) = value_and_deriv(fam, &x);
                    x -= v / dv;
                }
                out.push(XReal::with_val(prec, &x));
            }
            Ok(out)
        }
        FamilyKind::ChebyshevT => unreachable!(),
    }
}

/// Knot-set species.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KnotKind {
    /// {0, u^2} together with the squared positive zeros of a family.
    OmegaSquared,
    /// {-1, 2u^2 - 1} together with Chebyshev cosine knots on (-1, 1);
    /// the image of OmegaSquared under y -> 2y - 1.
    OmegaStar,
    /// Integers shifted to be symmetric about 0: k - (N+1)/2, k = 0..N+1.
    Cardinal,
    /// Reciprocals of odd integers 1/(2k-1), -nu <= k <= nu+1.
    Reciprocal,
    /// Caller-supplied distinct knots.
    Custom,
}

#[derive(Clone, Debug)]
enum Recipe {
    SquaredZeros { fam: PolyFamily, u: f64 },
    Star { fam: PolyFamily, u: f64 },
    Cardinal { n: usize },
    Reciprocal { nu: usize },
    Custom { knots: Vec<f64> },
}

/// An immutable strictly-sorted set of N+2 knots for a degree-N B-spline.
///
/// The knots are stored as a recipe plus a double-precision cache;
/// `knots_at` re-materializes them at any requested precision (including
/// cosines of rational multiples of pi reduced against pi at that precision),
/// so adaptive evaluation never inherits double-rounded knots.
#[derive(Clone, Debug)]
pub struct KnotSet {
    pub kind: KnotKind,
    pub d: u8,
    pub lambda: Option<f64>,
    pub u_n: f64,
    /// B-spline degree N; the set has N+2 knots.
    pub degree: usize,
    /// True when beta_N * u_N < 10, i.e. the asymptotic scale is still small.
    pub small_scale: bool,
    knots64: Vec<f64>,
    recipe: Recipe,
}

fn check_sorted_distinct(knots: &[f64]) -> Result<()> {
    let scale = knots
        .iter()
        .fold(0.0f64, |acc, k| acc.max(k.abs()))
        .max(1.0);
    for w in knots.windows(2) {
        if w[1] - w[0] <= scale * 4.0 * f64::EPSILON {
            return Err(Error::DuplicateKnot(w[0]));
        }
    }
    Ok(())
}

impl KnotSet {
    fn finish(
        kind: KnotKind,
        d: u8,
        lambda: Option<f64>,
        u_n: f64,
        small_scale: bool,
        knots64: Vec<f64>,
        recipe: Recipe,
    ) -> Result<Self> {
        check_sorted_distinct(&knots64)?;
        let degree = knots64.len() - 2;
        Ok(Self {
            kind,
            d,
            lambda,
            u_n,
            degree,
            small_scale,
            knots64,
            recipe,
        })
    }

    /// {0, u^2, x_1^2, ..., x_N^2} for the family's positive zeros x_k.
    pub fn omega_squared(fam: PolyFamily, u: f64) -> Result<Self> {
        if !(u > 0.0) {
            return Err(Error::InvalidInput("u must be positive".into()));
        }
        let mut knots = vec![0.0, u * u];
        knots.extend(family_zeros(&fam)?.iter().map(|x| x * x));
        knots.sort_by(|p, q| p.partial_cmp(q).unwrap());
        let small = fam.beta_n() * u < 10.0;
        Self::finish(
            KnotKind::OmegaSquared,
            fam.d,
            fam.lambda(),
            u,
            small,
            knots,
            Recipe::SquaredZeros { fam, u },
        )
    }

    /// {-1, 2u^2 - 1} with the Chebyshev cosine knots; only defined for the
    /// Chebyshev families (lambda 0 or 1). Equals 2 * omega_squared - 1
    /// elementwise, which drives the exact rescaling identity
    /// B_N(y, Omega) = 2 B_N(2y - 1, Omega*).
    pub fn omega_star(fam: PolyFamily, u: f64) -> Result<Self> {
        if !matches!(fam.kind, FamilyKind::ChebyshevT | FamilyKind::ChebyshevU) {
            return Err(Error::InvalidInput(
                "omega_star knots are defined for Chebyshev families only".into(),
            ));
        }
        if !(u > 0.0) {
            return Err(Error::InvalidInput("u must be positive".into()));
        }
        let mut knots = vec![-1.0, 2.0 * u * u - 1.0];
        // cos(2 theta) for each squared-knot angle theta.
        knots.extend(family_zeros(&fam)?.iter().map(|x| 2.0 * x * x - 1.0));
        knots.sort_by(|p, q| p.partial_cmp(q).unwrap());
        let small = fam.beta_n() * u < 10.0;
        Self::finish(
            KnotKind::OmegaStar,
            fam.d,
            fam.lambda(),
            u,
            small,
            knots,
            Recipe::Star { fam, u },
        )
    }

    /// Integer knots k - (N+1)/2, k = 0..N+1.
    pub fn cardinal(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidInput("degree must be >= 1".into()));
        }
        let shift = (n + 1) as f64 / 2.0;
        let knots: Vec<f64> = (0..=n + 1).map(|k| k as f64 - shift).collect();
        Self::finish(
            KnotKind::Cardinal,
            0,
            None,
            1.0,
            false,
            knots,
            Recipe::Cardinal { n },
        )
    }

    /// Reciprocal knots 1/(2k-1) for -nu <= k <= nu+1; 2nu+2 knots, degree 2nu.
    pub fn reciprocal(nu: usize) -> Result<Self> {
        if nu < 1 {
            return Err(Error::InvalidInput("nu must be >= 1".into()));
        }
        let mut knots: Vec<f64> = (-(nu as i64)..=nu as i64 + 1)
            .map(|k| 1.0 / (2 * k - 1) as f64)
            .collect();
        knots.sort_by(|p, q| p.partial_cmp(q).unwrap());
        Self::finish(
            KnotKind::Reciprocal,
            0,
            None,
            1.0,
            false,
            knots,
            Recipe::Reciprocal { nu },
        )
    }

    /// Caller-supplied knots; must contain at least 3 distinct values.
    pub fn custom(mut knots: Vec<f64>) -> Result<Self> {
        if knots.len() < 3 {
            return Err(Error::InvalidInput(
                "a custom knot set needs at least 3 knots".into(),
            ));
        }
        knots.sort_by(|p, q| p.partial_cmp(q).unwrap());
        Self::finish(
            KnotKind::Custom,
            0,
            None,
            1.0,
            false,
            knots.clone(),
            Recipe::Custom { knots },
        )
    }

    /// Number of knots (degree + 2).
    pub fn len(&self) -> usize {
        self.knots64.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Double-precision view of the knots, ascending.
    pub fn knots_f64(&self) -> &[f64] {
        &self.knots64
    }

    pub fn min(&self) -> f64 {
        self.knots64[0]
    }

    pub fn max(&self) -> f64 {
        *self.knots64.last().unwrap()
    }

    /// Re-materialize the knots at `prec` bits, ascending.
    pub fn knots_at(&self, prec: u32) -> Result<Vec<XReal>> {
        let mut out: Vec<XReal> = match &self.recipe {
            Recipe::SquaredZeros { fam, u } => {
                let mut v = vec![
                    XReal::with_val(prec, 0),
                    XReal::with_val(prec, u).square(),
                ];
                v.extend(
                    family_zeros_at(fam, prec)?
                        .into_iter()
                        .map(|x| x.square()),
                );
                v
            }
            Recipe::Star { fam, u } => {
                let mut v = vec![
                    XReal::with_val(prec, -1),
                    2u32 * XReal::with_val(prec, u).square() - 1u32,
                ];
                v.extend(
                    family_zeros_at(fam, prec)?
                        .into_iter()
                        .map(|x| 2u32 * x.square() - 1u32),
                );
                v
            }
            Recipe::Cardinal { n } => (0..=*n as i64 + 1)
                .map(|k| XReal::with_val(prec, 2 * k - (*n as i64 + 1)) / 2u32)
                .collect(),
            Recipe::Reciprocal { nu } => (-(*nu as i64)..=*nu as i64 + 1)
                .map(|k| XReal::with_val(prec, 1) / XReal::with_val(prec, 2 * k - 1))
                .collect(),
            Recipe::Custom { knots } => {
                knots.iter().map(|k| XReal::with_val(prec, *k)).collect()
            }
        };
        out.sort_by(|p, q| p.partial_cmp(q).unwrap());
        for w in out.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateKnot(w[0].to_f64()));
            }
        }
        Ok(out)
    }
}

/// One sample of the cosine approximation probe.
#[derive(Clone, Copy, Debug)]
pub struct Def11Sample {
    pub z: Complex64,
    /// | beta^d P(z/beta) / P^(d)(0) - cos(z - d pi/2) |
    pub lhs_error: f64,
    /// delta_N * min(|z|^2, 1) * h_d(|z|)
    pub bound: f64,
    /// lhs_error / bound; NaN at z = 0 where both vanish.
    pub ratio: f64,
}

/// Measure how close the rescaled family member is to cos(z - d pi/2) on a
/// grid of complex points with |z| <= gamma_N. The comparison constant of
/// the underlying property is unspecified, so this reports ratios and makes
/// no pass/fail judgement.
///
/// The normalized ratio is evaluated as z^d * prod_k ((w^2 - x_k^2)/(-x_k^2))
/// with w = z/beta, which is exact in the zeros and free of overflow.
pub fn def11_probe(fam: &PolyFamily, z_grid: &[Complex64]) -> Result<Vec<Def11Sample>> {
    let zeros = family_zeros(fam)?;
    let beta = fam.beta_n();
    let delta = fam.delta_n();
    let mut out = Vec::with_capacity(z_grid.len());
    for &z in z_grid {
        let w = z / beta;
        let w2 = w * w;
        let mut p = if fam.d == 1 { z } else { Complex64::new(1.0, 0.0) };
        for x in &zeros {
            let x2 = x * x;
            p *= (w2 - x2) / (-x2);
        }
        let target = if fam.d == 0 { z.cos() } else { z.sin() };
        let lhs_error = (p - target).norm();
        let bound = delta * z.norm_sqr().min(1.0) * hd_eval(fam.d, z.norm());
        out.push(Def11Sample {
            z,
            lhs_error,
            bound,
            ratio: lhs_error / bound,
        });
    }
    Ok(out)
}
