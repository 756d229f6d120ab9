use crate::error::{Error, Result};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Quadrature engine selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadKind {
    GaussLegendreComposite,
    TanhSinh,
}

/// Deterministic quadrature rule. Every integral comes back with an error
/// estimate; refinement contains no randomness.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureRule {
    pub kind: QuadKind,
    pub points_per_panel: usize,
    pub panel_limit: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self {
            kind: QuadKind::GaussLegendreComposite,
            points_per_panel: 32,
            panel_limit: 20_000,
            abs_tol: 1e-13,
            rel_tol: 1e-12,
        }
    }
}

impl QuadratureRule {
    pub fn with_tols(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }
}

/// Tail behavior declared for integrals over [a, infinity).
#[derive(Clone, Copy, Debug)]
pub enum DecayHint {
    /// |f(t)| decays at least like exp(-rate * t) eventually.
    Exponential { rate: f64 },
    /// |f(t)| decays at least like t^{-exponent} with exponent > 1.
    Power { exponent: f64 },
}

/// Integration range.
#[derive(Clone, Copy, Debug)]
pub enum Range {
    Finite(f64, f64),
    SemiInfinite { a: f64, hint: DecayHint },
}

/// Integrand written as f(t) = (t - a)^{sigma - 1} * g(t) so that power
/// endpoint singularities at the lower limit can be removed exactly by the
/// substitution t - a = tau^{1/sigma}. Use sigma = 1.0 for a smooth integrand.
pub struct Integrand<'a> {
    pub g: &'a dyn Fn(f64) -> f64,
    pub sigma: f64,
}

impl<'a> Integrand<'a> {
    pub fn smooth(g: &'a dyn Fn(f64) -> f64) -> Self {
        Self { g, sigma: 1.0 }
    }

    fn full(&self, a: f64, t: f64) -> f64 {
        if (self.sigma - 1.0).abs() < 1e-15 {
            (self.g)(t)
        } else {
            (t - a).powf(self.sigma - 1.0) * (self.g)(t)
        }
    }
}

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes
// ---------------------------------------------------------------------------

fn gl_cache() -> &'static Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Nodes and weights on [-1, 1], computed by Newton iteration on the
/// Legendre recurrence and cached per point count.
pub fn gauss_legendre_nodes(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    if let Some(hit) = gl_cache().lock().unwrap().get(&n) {
        return hit.clone();
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative via the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    let arc = Arc::new((nodes, weights));
    gl_cache().lock().unwrap().insert(n, arc.clone());
    arc
}

fn gl_panel(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let nw = gauss_legendre_nodes(n);
    let (nodes, weights) = (&nw.0, &nw.1);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights.iter()) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

// ---------------------------------------------------------------------------
// Adaptive composite driver
// ---------------------------------------------------------------------------

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

fn make_panel(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Panel {
    let whole = gl_panel(f, a, b, n);
    let mid = 0.5 * (a + b);
    let halves = gl_panel(f, a, mid, n) + gl_panel(f, mid, b, n);
    Panel {
        a,
        b,
        value: halves,
        err: (whole - halves).abs(),
    }
}

fn adaptive_gl(
    f: &dyn Fn(f64) -> f64,
    breakpoints: &[f64],
    rule: &QuadratureRule,
) -> Result<(f64, f64)> {
    let n = rule.points_per_panel;
    let mut panels: Vec<Panel> = breakpoints
        .windows(2)
        .map(|w| make_panel(f, w[0], w[1], n))
        .collect();
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        let tol = rule.abs_tol.max(rule.rel_tol * total.abs());
        if err <= tol {
            return Ok((total, err));
        }
        if panels.len() >= rule.panel_limit {
            return Err(Error::NonConvergent {
                panels: panels.len(),
                err_estimate: err,
            });
        }
        // Split the worst panel; ties resolved by position for determinism.
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            if p.err > panels[worst].err {
                worst = i;
            }
        }
        let Panel { a, b, .. } = panels[worst];
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // Panel width at rounding limit; accept its current estimate.
            panels[worst].err = 0.0;
            continue;
        }
        panels[worst] = make_panel(f, a, mid, n);
        panels.push(make_panel(f, mid, b, n));
    }
}

// ---------------------------------------------------------------------------
// Tanh-sinh driver (finite intervals)
// ---------------------------------------------------------------------------

fn tanh_sinh(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rule: &QuadratureRule) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let umax = 4.0;
    let eval = |u: f64| -> f64 {
        let pi2 = std::f64::consts::FRAC_PI_2;
        let s = pi2 * u.sinh();
        let w = pi2 * u.cosh() / s.cosh().powi(2);
        // Distance from the nearer endpoint, formed without cancellation:
        // 1 - |tanh s| = 2 / (1 + exp(2|s|)).
        let offset = half * 2.0 / (1.0 + (2.0 * s.abs()).exp());
        let t = if u <= 0.0 { a + offset } else { b - offset };
        if t <= a || t >= b {
            return 0.0;
        }
        w * f(t)
    };
    let mut h = 1.0;
    let mut sum = eval(0.0);
    let mut k = 1;
    loop {
        let u = k as f64 * h;
        if u > umax {
            break;
        }
        sum += eval(u) + eval(-u);
        k += 1;
    }
    let mut prev = sum * h * half;
    let mut err = f64::INFINITY;
    for _level in 1..=12 {
        h *= 0.5;
        // Add the odd multiples of the new h.
        let mut k = 1;
        loop {
            let u = k as f64 * h;
            if u > umax {
                break;
            }
            sum += eval(u) + eval(-u);
            k += 2;
        }
        let cur = sum * h * half;
        err = (cur - prev).abs();
        let tol = rule.abs_tol.max(rule.rel_tol * cur.abs());
        prev = cur;
        if err <= tol {
            break;
        }
    }
    (prev, err)
}

// ---------------------------------------------------------------------------
// Public entry point
// ---------------------------------------------------------------------------

/// Integrate `f` over `range`. Semi-infinite ranges are truncated where the
/// decay hint bounds the tail below abs_tol / 10; power singularities at the
/// lower endpoint are removed by substitution before panel quadrature.
pub fn integrate(f: &Integrand<'_>, range: Range, rule: &QuadratureRule) -> Result<(f64, f64)> {
    let (a, upper, tail_err) = match range {
        Range::Finite(a, b) => {
            if !(b > a) {
                return Err(Error::InvalidInput(format!("empty range [{a}, {b}]")));
            }
            (a, b, 0.0)
        }
        Range::SemiInfinite { a, hint } => {
            let (t, tail) = truncate_tail(f, a, hint, rule.abs_tol)?;
            (a, t, tail)
        }
    };

    let mut total = 0.0;
    let mut err = tail_err;
    let mut lo = a;

    if (f.sigma - 1.0).abs() > 1e-15 {
        // First panel with the singular factor removed:
        //   int_a^{a+eps} (t-a)^{sigma-1} g(t) dt
        //     = (1/sigma) int_0^{eps^sigma} g(a + tau^{1/sigma}) dtau.
        if f.sigma <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "non-integrable endpoint power {}",
                f.sigma
            )));
        }
        let eps = 1.0_f64.min(0.5 * (upper - a));
        let sigma = f.sigma;
        let inner = |tau: f64| (f.g)(a + tau.powf(1.0 / sigma)) / sigma;
        let (v, e) = adaptive_gl(&inner, &[0.0, eps.powf(sigma)], rule)?;
        total += v;
        err += e;
        lo = a + eps;
    }

    let full = |t: f64| f.full(a, t);
    let (v, e) = match rule.kind {
        QuadKind::GaussLegendreComposite => {
            let bps = breakpoints(lo, upper);
            adaptive_gl(&full, &bps, rule)?
        }
        QuadKind::TanhSinh => tanh_sinh(&full, lo, upper, rule),
    };
    total += v;
    err += e;
    Ok((total, err))
}

/// Geometric breakpoints for long ranges so exponential-decay integrands
/// start from reasonably scaled panels.
fn breakpoints(a: f64, b: f64) -> Vec<f64> {
    let len = b - a;
    if len <= 16.0 {
        return vec![a, a + 0.25 * len, a + 0.5 * len, a + 0.75 * len, b];
    }
    let mut bps = vec![a];
    let mut step = 1.0;
    let mut t = a + step;
    while t < b {
        bps.push(t);
        step *= 2.0;
        t += step;
    }
    bps.push(b);
    bps
}

fn truncate_tail(
    f: &Integrand<'_>,
    a: f64,
    hint: DecayHint,
    abs_tol: f64,
) -> Result<(f64, f64)> {
    let target = abs_tol / 10.0;
    let mut t = a + 1.0;
    for _ in 0..600 {
        let mag = f.full(a, t).abs().max(f.full(a, 1.5 * t).abs());
        let tail = match hint {
            DecayHint::Exponential { rate } => {
                if !(rate > 0.0) {
                    return Err(Error::InvalidInput("decay rate must be positive".into()));
                }
                mag / rate
            }
            DecayHint::Power { exponent } => {
                if !(exponent > 1.0) {
                    return Err(Error::InvalidInput(
                        "power decay exponent must exceed 1".into(),
                    ));
                }
                mag * t / (exponent - 1.0)
            }
        };
        if tail <= target {
            return Ok((t, tail));
        }
        t *= 2.0;
    }
    Err(Error::NonConvergent {
        panels: 0,
        err_estimate: f64::INFINITY,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_decay_unit_integral() {
        let g = |t: f64| (-t).exp();
        let f = Integrand::smooth(&g);
        let rule = QuadratureRule::default();
        let (v, e) = integrate(
            &f,
            Range::SemiInfinite {
                a: 0.0,
                hint: DecayHint::Exponential { rate: 1.0 },
            },
            &rule,
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-12, "value {v}, est {e}");
    }

    #[test]
    fn t_over_cosh_is_twice_beta2() {
        // int_0^inf t / cosh t dt = 2 * beta(2) = 1.8319311883544381
        let g = |t: f64| t / t.cosh();
        let f = Integrand::smooth(&g);
        let rule = QuadratureRule::default();
        let (v, _) = integrate(
            &f,
            Range::SemiInfinite {
                a: 0.0,
                hint: DecayHint::Exponential { rate: 1.0 },
            },
            &rule,
        )
        .unwrap();
        assert!((v - 1.8319311883544381).abs() < 1e-11, "value {v}");
    }

    #[test]
    fn t2_over_sinh_is_seven_halves_zeta3() {
        // int_0^inf t^2 / sinh t dt = (7/2) zeta(3) = 4.2071991610585785
        let g = |t: f64| {
            if t == 0.0 {
                0.0
            } else {
                t * t / t.sinh()
            }
        };
        let f = Integrand::smooth(&g);
        let rule = QuadratureRule::default();
        let (v, _) = integrate(
            &f,
            Range::SemiInfinite {
                a: 0.0,
                hint: DecayHint::Exponential { rate: 1.0 },
            },
            &rule,
        )
        .unwrap();
        assert!((v - 4.207199161058578).abs() < 1e-11, "value {v}");
    }

    #[test]
    fn polynomial_exact_on_one_panel() {
        // n-point Gauss-Legendre is exact through degree 2n-1.
        let n = 8;
        let g = |t: f64| {
            let mut acc = 0.0;
            for k in 0..=(2 * n - 1) {
                acc += t.powi(k as i32);
            }
            acc
        };
        let v = gl_panel(&g, 0.0, 1.0, n);
        let exact: f64 = (1..=(2 * n)).map(|k| 1.0 / k as f64).sum();
        assert!((v - exact).abs() < 1e-14 * exact);
    }

    #[test]
    fn endpoint_power_singularity() {
        // int_0^1 t^{-1/2} dt = 2 with sigma = 1/2.
        let g = |_t: f64| 1.0;
        let f = Integrand { g: &g, sigma: 0.5 };
        let rule = QuadratureRule::default();
        let (v, _) = integrate(&f, Range::Finite(0.0, 1.0), &rule).unwrap();
        assert!((v - 2.0).abs() < 1e-12, "value {v}");
    }

    #[test]
    fn tanh_sinh_handles_sqrt_singularity() {
        let g = |t: f64| 1.0 / t.sqrt();
        let f = Integrand::smooth(&g);
        let rule = QuadratureRule {
            kind: QuadKind::TanhSinh,
            ..QuadratureRule::default()
        };
        let (v, _) = integrate(&f, Range::Finite(0.0, 1.0), &rule).unwrap();
        assert!((v - 2.0).abs() < 1e-10, "value {v}");
    }
}
