//! Barycentric Lagrange interpolation of power and log-power functions, the
//! exact finite-N identities tying interpolation differences to weighted
//! integrals of the associated B-spline and to contour integrals, and the
//! scaled-difference limit experiments.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mellin::mellin_assoc_bspline;
use crate::numerics::{
    adaptive_eval, integrate, DecayHint, Integrand, PrecisionContext, QuadratureRule, Range,
    XReal,
};
use crate::polyfamilies::{family_zeros_at, KnotSet, PolyFamily};
use crate::specialfn::{hd_mellin_closed, log_gamma, log_gamma_signed};

/// Which interpolated function a finite-N identity uses: the power u^{(s-d)/2}
/// or the log-power (1/2) u^m log u.
#[derive(Clone, Copy, Debug)]
pub enum InterpCase {
    Power { s: f64 },
    Log { m: u32 },
}

/// An interpolation problem: distinct nodes, a function handle, and an
/// off-node evaluation point.
pub struct InterpProblem<'a> {
    pub nodes: Vec<XReal>,
    pub f: &'a dyn Fn(&XReal) -> XReal,
    pub eval_point: XReal,
}

fn check_distinct(nodes: &[XReal]) -> Result<()> {
    for (i, a) in nodes.iter().enumerate() {
        for b in nodes.iter().skip(i + 1) {
            if a == b {
                return Err(Error::DuplicateNode(a.to_f64()));
            }
        }
    }
    Ok(())
}

// Second barycentric form at the precision of the inputs. If y coincides
// with a node, the node value is returned.
fn barycentric(nodes: &[XReal], values: &[XReal], y: &XReal) -> XReal {
    let prec = y.prec();
    let mut num = XReal::with_val(prec, 0);
    let mut den = XReal::with_val(prec, 0);
    for (j, vj) in nodes.iter().enumerate() {
        let dy = XReal::with_val(prec, y - vj);
        if dy == 0 {
            return values[j].clone();
        }
        // w_j = 1 / prod_{i != j} (v_j - v_i)
        let mut w = XReal::with_val(prec, 1);
        for (i, vi) in nodes.iter().enumerate() {
            if i != j {
                w *= XReal::with_val(prec, vj - vi);
            }
        }
        let term = XReal::with_val(prec, &w * &dy).recip();
        num += XReal::with_val(prec, &term * &values[j]);
        den += term;
    }
    num / den
}

/// Evaluate the Lagrange interpolant of `p.f` through `p.nodes` at
/// `p.eval_point`, in the barycentric second form.
pub fn lagrange_eval(p: &InterpProblem<'_>) -> Result<XReal> {
    check_distinct(&p.nodes)?;
    let values: Vec<XReal> = p.nodes.iter().map(|v| (p.f)(v)).collect();
    Ok(barycentric(&p.nodes, &values, &p.eval_point))
}

/// Both sides of a finite-N identity and their relative gap.
#[derive(Clone, Copy, Debug)]
pub struct IdentityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_gap: f64,
}

fn gap(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE)
}

// f(v) = v^q with f(0) = 0 (q > 0), at the precision of v.
fn pow_node(v: &XReal, q: f64) -> XReal {
    use rug::ops::Pow;
    if *v == 0 {
        XReal::with_val(v.prec(), 0)
    } else {
        v.clone().pow(q)
    }
}

// f(v) = (1/2) v^m ln v with the limit value 0 at v = 0.
fn half_pow_log_node(v: &XReal, m: u32) -> XReal {
    use rug::ops::Pow;
    if *v == 0 {
        XReal::with_val(v.prec(), 0)
    } else {
        let ln = v.clone().ln();
        v.clone().pow(m) * ln / 2u32
    }
}

/// Interpolation-difference identity for a knot set with min = 0 and u a
/// knot: the difference f(u) - L(u) over the remaining knots equals a
/// factorial-ratio constant times w(u) = prod_{v != u}(u - v) times the
/// weighted integral of the associated B-spline. Exact at every finite N.
///
/// Power case (s real, s > d, s - d not an even integer):
///   f = u^{(s-d)/2}, constant (-1)^{N+1} Gamma(N+1-(s-d)/2) /
///   (Gamma((d-s)/2) (N+1)!), weight exponent (s-d)/2 - 1.
/// Log case (1 <= m < N+1):
///   f = (1/2) u^m log u, constant (1/2)(-1)^{m+N} m!(N-m)!/(N+1)!,
///   weight exponent m - 1.
pub fn identity_cor39(
    knots: &KnotSet,
    u: f64,
    case: InterpCase,
    ctx: &PrecisionContext,
    rule: &QuadratureRule,
) -> Result<IdentityReport> {
    if knots.min() != 0.0 {
        return Err(Error::DomainError("identity needs min knot = 0".into()));
    }
    let k64 = knots.knots_f64();
    let idx = k64
        .iter()
        .position(|&v| v == u)
        .ok_or_else(|| Error::DomainError(format!("u = {u} is not a knot")))?;
    let n = knots.degree;
    let d = knots.d as f64;
    let (sigma, constant) = match case {
        InterpCase::Power { s } => {
            let sigma = (s - d) / 2.0;
            if !(sigma > 0.0) {
                return Err(Error::DomainError(format!("need s > d, got s = {s}")));
            }
            let twice = s - d;
            if twice.fract() == 0.0 && (twice as i64) % 2 == 0 {
                return Err(Error::InvalidInput(
                    "s - d an even integer: power case degenerates, use the log case".into(),
                ));
            }
            if n as f64 + 1.0 - sigma <= 0.0 {
                return Err(Error::DomainError(format!(
                    "need (s-d)/2 < N+1, got {sigma} with N = {n}"
                )));
            }
            // (-1)^{N+1} Gamma(N+1-sigma) / (Gamma(-sigma) (N+1)!)
            let (lg_neg, sg_neg) = log_gamma_signed(-sigma)?;
            let ln_mag = log_gamma(n as f64 + 1.0 - sigma)? - lg_neg - log_gamma(n as f64 + 2.0)?;
            let sign = if n % 2 == 0 { -1.0 } else { 1.0 } * sg_neg as f64;
            (sigma, sign * ln_mag.exp())
        }
        InterpCase::Log { m } => {
            if m < 1 || (m as usize) >= n + 1 {
                return Err(Error::DomainError(format!(
                    "need 1 <= m < N+1, got m = {m} with N = {n}"
                )));
            }
            // (1/2)(-1)^{m+N} m! (N-m)! / (N+1)!
            let ln_mag = log_gamma(m as f64 + 1.0)? + log_gamma((n - m as usize) as f64 + 1.0)?
                - log_gamma(n as f64 + 2.0)?;
            let sign = if (m as usize + n) % 2 == 0 { 1.0 } else { -1.0 };
            (m as f64, 0.5 * sign * ln_mag.exp())
        }
    };

    // Left side and w(u) at adaptive precision: the difference cancels
    // catastrophically, which is the reason this module works in XReal.
    let lhs_eval = |p: u32| -> XReal {
        let all = knots.knots_at(p).expect("knot materialization");
        let u_x = all[idx].clone();
        let nodes: Vec<XReal> = all
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, v)| v.clone())
            .collect();
        let fv = |v: &XReal| match case {
            InterpCase::Power { .. } => pow_node(v, sigma),
            InterpCase::Log { m } => half_pow_log_node(v, m),
        };
        let values: Vec<XReal> = nodes.iter().map(&fv).collect();
        let l = barycentric(&nodes, &values, &u_x);
        fv(&u_x) - l
    };
    let lhs = adaptive_eval(lhs_eval, ctx)?.value.to_f64();

    let w_eval = |p: u32| -> XReal {
        let all = knots.knots_at(p).expect("knot materialization");
        let u_x = all[idx].clone();
        let mut w = XReal::with_val(p, 1);
        for (i, v) in all.iter().enumerate() {
            if i != idx {
                w *= XReal::with_val(p, &u_x - v);
            }
        }
        w
    };
    let w = adaptive_eval(w_eval, ctx)?.value.to_f64();

    let integral = mellin_assoc_bspline(knots, Complex64::new(sigma, 0.0), rule, ctx)?
        .value
        .re;
    let rhs = constant * w * integral;
    Ok(IdentityReport {
        lhs,
        rhs,
        rel_gap: gap(lhs, rhs),
    })
}

/// Contour identity for an even polynomial G(y) = prod (y^2 - z_k^2) with
/// simple real zeros: for 0 < s < 2N+1, s not an even integer,
///
///   |y|^s - L(y, |y|^s, y G(y))
///     = (2 sin(s pi/2) / pi) G(y) int_0^inf t^{s-1}
///         / ((1 + (t/y)^2) G(it)) dt,
///
/// with interpolation nodes 0, +-z_k. Exact at every finite N.
pub fn identity_prop26(
    g_zeros: &[f64],
    y: f64,
    s: f64,
    ctx: &PrecisionContext,
    rule: &QuadratureRule,
) -> Result<IdentityReport> {
    let n = g_zeros.len();
    if y == 0.0 || g_zeros.iter().any(|&z| z == y.abs()) {
        return Err(Error::DomainError(format!(
            "evaluation point {y} collides with an interpolation node"
        )));
    }
    if g_zeros.iter().any(|&z| !(z > 0.0)) {
        return Err(Error::InvalidInput("zeros must be positive".into()));
    }
    if !(s > 0.0 && s < (2 * n + 1) as f64) {
        return Err(Error::DomainError(format!(
            "need 0 < s < 2N+1, got s = {s} with N = {n}"
        )));
    }
    if s.fract() == 0.0 && (s as i64) % 2 == 0 {
        return Err(Error::InvalidInput("s must not be an even integer".into()));
    }

    let lhs_eval = |p: u32| -> XReal {
        let mut nodes = vec![XReal::with_val(p, 0)];
        for &z in g_zeros {
            nodes.push(XReal::with_val(p, z));
            nodes.push(XReal::with_val(p, -z));
        }
        let fv = |v: &XReal| pow_node(&v.clone().abs(), s);
        let values: Vec<XReal> = nodes.iter().map(&fv).collect();
        let y_x = XReal::with_val(p, y);
        fv(&y_x) - barycentric(&nodes, &values, &y_x)
    };
    let lhs = adaptive_eval(lhs_eval, ctx)?.value.to_f64();

    let g_at_y: f64 = g_zeros.iter().map(|&z| y * y - z * z).product();
    // G(it) = (-1)^N prod (t^2 + z_k^2); the integrand keeps one sign.
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let g = |t: f64| {
        let mut ln = -(t / y).powi(2).ln_1p();
        for &z in g_zeros {
            ln -= (t * t + z * z).ln();
        }
        ln.exp()
    };
    let integrand = Integrand { g: &g, sigma: s };
    let range = Range::SemiInfinite {
        a: 0.0,
        hint: DecayHint::Power {
            exponent: 2.0 * n as f64 + 3.0 - s,
        },
    };
    let (integral, _) = integrate(&integrand, range, rule)?;
    let rhs = 2.0 * (s * std::f64::consts::FRAC_PI_2).sin() / std::f64::consts::PI
        * g_at_y
        * sign
        * integral;
    Ok(IdentityReport {
        lhs,
        rhs,
        rel_gap: gap(lhs, rhs),
    })
}

/// One step of the scaled-difference limit experiment.
#[derive(Clone, Copy, Debug)]
pub struct LimitRecord {
    pub n: usize,
    pub scaled: f64,
    pub limit: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

/// Scaled interpolation differences along a family: with nodes 0, x_1^2, ...,
/// x_N^2 (squared positive zeros) and Q(v) = prod (v - x_k^2),
///
///   beta_N^{s-d} Q(0)/Q(u^2) (u^{s-d} - L(u^2, v^{(s-d)/2}))
///     -> (2 sin((s-d) pi/2) / pi) int_0^inf t^{s-1}/h_d(t) dt,
///
/// and the log-power analogue with limit (-1)^m int t^{2m+d-1}/h_d(t) dt.
/// Needs beta_N u -> infinity along `n_list`.
pub fn limit_cor24(
    fam_kind: PolyFamily,
    u: f64,
    case: InterpCase,
    n_list: &[usize],
    ctx: &PrecisionContext,
) -> Result<Vec<LimitRecord>> {
    let d = fam_kind.d as f64;
    let limit = match case {
        InterpCase::Power { s } => {
            if !(s > d) {
                return Err(Error::DomainError(format!("need s > d, got s = {s}")));
            }
            2.0 * ((s - d) * std::f64::consts::FRAC_PI_2).sin() / std::f64::consts::PI
                * hd_mellin_closed(fam_kind.d, s)?
        }
        InterpCase::Log { m } => {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sign * hd_mellin_closed(fam_kind.d, 2.0 * m as f64 + d)?
        }
    };
    let mut out = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let fam = PolyFamily::new(fam_kind.kind, fam_kind.d, n)?;
        let beta = fam.beta_n();
        let scaled_eval = |p: u32| -> XReal {
            use rug::ops::Pow;
            let zeros = family_zeros_at(&fam, p).expect("zero refinement");
            let u_x = XReal::with_val(p, u);
            let u2 = u_x.clone().square();
            let mut nodes = vec![XReal::with_val(p, 0)];
            for z in &zeros {
                nodes.push(z.clone().square());
            }
            let fv = |v: &XReal| match case {
                // In the squared variable the log-power node function is
                // (1/2) v^m ln v, matching u^{2m} log u at u = sqrt v.
                InterpCase::Power { s } => pow_node(v, (s - d) / 2.0),
                InterpCase::Log { m } => half_pow_log_node(v, m),
            };
            let values: Vec<XReal> = nodes.iter().map(&fv).collect();
            let diff = fv(&u2) - barycentric(&nodes, &values, &u2);
            // Q(0)/Q(u^2) = prod (-x_k^2) / (u^2 - x_k^2)
            let mut ratio = XReal::with_val(p, 1);
            for node in nodes.iter().skip(1) {
                let num = XReal::with_val(p, -node.clone());
                let den = XReal::with_val(p, &u2 - node);
                ratio *= num / den;
            }
            let exponent = match case {
                InterpCase::Power { s } => s - d,
                InterpCase::Log { m } => 2.0 * m as f64,
            };
            XReal::with_val(p, beta).pow(exponent) * ratio * diff
        };
        let scaled = adaptive_eval(scaled_eval, ctx)?.value.to_f64();
        out.push(LimitRecord {
            n,
            scaled,
            limit,
            abs_err: (scaled - limit).abs(),
            rel_err: (scaled - limit).abs() / limit.abs().max(f64::MIN_POSITIVE),
        });
    }
    Ok(out)
}
