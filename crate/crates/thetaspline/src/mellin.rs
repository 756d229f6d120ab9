//! Numerical Mellin transforms: the transform of the associated B-spline,
//! closed forms for the transform of the theta-like functions, Mellin
//! convolution, the contour-route evaluation of the scaled-spline transform,
//! and the oscillatory decay probe along vertical lines Re s = r.

use num_complex::Complex64;

use crate::bspline::{eval_assoc, eval_recurrence};
use crate::error::{Error, Result};
use crate::numerics::{
    gauss_legendre_nodes, integrate, DecayHint, Integrand, LogValue, PrecisionContext,
    QuadratureRule, Range,
};
use crate::polyfamilies::{
    cheb_imag_log, family_zeros, ChebKind, FamilyKind, KnotSet, PolyFamily,
};
use crate::specialfn::{dirichlet_beta, gamma, log_gamma, zeta};
use crate::thetafn::{theta_eval, ThetaSpec};

/// One Mellin-transform evaluation.
#[derive(Clone, Copy, Debug)]
pub struct MellinPoint {
    pub s: Complex64,
    pub value: Complex64,
    pub err_estimate: f64,
}

// int_a^b f(t) t^{sigma-1} dt for complex sigma, as (re, im, err).
// t^{sigma-1} = t^{Re sigma - 1} (cos, sin)((Im sigma) ln t).
fn weighted_interval(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    sigma: Complex64,
    rule: &QuadratureRule,
) -> Result<(f64, f64, f64)> {
    let re_part = |t: f64| f(t) * t.powf(sigma.re - 1.0) * (sigma.im * t.ln()).cos();
    let integrand = Integrand::smooth(&re_part);
    let (vr, er) = integrate(&integrand, Range::Finite(a, b), rule)?;
    if sigma.im == 0.0 {
        return Ok((vr, 0.0, er));
    }
    let im_part = |t: f64| f(t) * t.powf(sigma.re - 1.0) * (sigma.im * t.ln()).sin();
    let integrand = Integrand::smooth(&im_part);
    let (vi, ei) = integrate(&integrand, Range::Finite(a, b), rule)?;
    Ok((vr, vi, er + ei))
}

/// M(B*_N, sigma) = int_0^{max} B*_N(t) t^{sigma-1} dt for a knot set with
/// min = 0 and Re sigma > 0.
///
/// On the first knot interval B*_N is the constant jump value c, so that
/// piece is the analytic c * t_1^sigma / sigma; the remaining intervals are
/// integrated by quadrature on B*_N = B_N / t^N samples.
pub fn mellin_assoc_bspline(
    knots: &KnotSet,
    sigma: Complex64,
    rule: &QuadratureRule,
    ctx: &PrecisionContext,
) -> Result<MellinPoint> {
    if knots.min() != 0.0 {
        return Err(Error::DomainError(
            "associated-spline transform needs min knot = 0".into(),
        ));
    }
    if !(sigma.re > 0.0) {
        return Err(Error::PoleError(sigma.re));
    }
    let k = knots.knots_f64();
    let n = knots.degree;
    let jump = eval_assoc(knots, 0.0, ctx)?.value;
    if !jump.is_finite() {
        return Err(Error::IntegrandOverflow(jump));
    }
    let t1 = k[1];
    // c * t1^sigma / sigma
    let t1_pow = Complex64::new(t1.powf(sigma.re), 0.0)
        * Complex64::from_polar(1.0, sigma.im * t1.ln());
    let mut value = jump * t1_pow / sigma;
    let mut err = 0.0;
    let assoc = |t: f64| eval_recurrence(knots, t) / t.powi(n as i32);
    for w in k.windows(2).skip(1) {
        let (vr, vi, e) = weighted_interval(&assoc, w[0], w[1], sigma, rule)?;
        value += Complex64::new(vr, vi);
        err += e;
    }
    if !value.is_finite() {
        return Err(Error::IntegrandOverflow(value.norm()));
    }
    Ok(MellinPoint {
        s: sigma,
        value,
        err_estimate: err,
    })
}

/// Closed form for the Mellin transform of the theta-like function:
/// M(Theta_d, sigma) = 4 Gamma(2 sigma + d) c_d(2 sigma + d) / Gamma(1 + sigma)
/// with c_0 = Dirichlet beta and c_1(x) = (1 - 2^{-x}) zeta(x).
pub fn mellin_theta_closed(d: u8, sigma: f64) -> Result<f64> {
    if d > 1 {
        return Err(Error::InvalidInput(format!("d must be 0 or 1, got {d}")));
    }
    if !(sigma > 0.0) {
        return Err(Error::PoleError(sigma));
    }
    let x = 2.0 * sigma + d as f64;
    let c = if d == 0 {
        dirichlet_beta(x)?
    } else {
        (1.0 - 2f64.powf(-x)) * zeta(x)?
    };
    Ok(4.0 * gamma(x)? * c / gamma(1.0 + sigma)?)
}

/// A function handle on (0, inf) with a declared decay at infinity.
pub struct DecayingFn<'a> {
    pub f: &'a dyn Fn(f64) -> f64,
    pub hint: DecayHint,
}

/// Mellin convolution H(t) = int_0^inf F(tau) G(t / tau) dtau / tau.
/// Swapping F and G leaves the value unchanged (substitution tau -> t/tau).
pub fn mellin_convolve(
    f: &DecayingFn<'_>,
    g: &DecayingFn<'_>,
    t: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::DomainError(format!("t must be > 0, got {t}")));
    }
    let h = |tau: f64| {
        if tau <= 0.0 {
            0.0
        } else {
            (f.f)(tau) * (g.f)(t / tau) / tau
        }
    };
    let integrand = Integrand::smooth(&h);
    // The integrand can peak far from tau = 1 (near tau = t when G decays
    // fast), so split there; the tail search past the split cannot then stop
    // before the mass.
    let split = t.max(1.0);
    let (head, _) = integrate(&integrand, Range::Finite(0.0, split), rule)?;
    let range = Range::SemiInfinite {
        a: split,
        hint: f.hint,
    };
    Ok(head + integrate(&integrand, range, rule)?.0)
}

// ln of the nonnegative contour integrand factor
//   g(t) = beta^{s-d} prod_k x_k^2/(t^2 + x_k^2) / (1 + (t/u)^2),
// assembled in log space so large N cannot overflow.
fn log_contour_factor(beta: f64, s_minus_d: f64, zeros: &[f64], u: f64, t: f64) -> f64 {
    let mut acc = s_minus_d * beta.ln() - (t / u).powi(2).ln_1p();
    for x in zeros {
        acc += (x * x).ln() - (t * t + x * x).ln();
    }
    acc
}

/// Contour-route evaluation of the scaled-spline Mellin transform for real s
/// with d < s < 2N + d + 1:
///
///   (2 / Gamma(1+sigma)) * ((N+1)! / (N^{1+sigma} Gamma(N+1-sigma)))
///     * int_0^inf t^{s-d-1} g(t) dt,        sigma = (s-d)/2,
///
/// where g is the nonnegative product over the family zeros above (the i^d
/// phase of the polynomial at imaginary argument cancels identically, which
/// is why the result is real for real s).
pub fn gn_contour(
    fam: &PolyFamily,
    u_n: f64,
    s: f64,
    rule: &QuadratureRule,
) -> Result<MellinPoint> {
    let n = fam.n;
    let d = fam.d as f64;
    if !(s > d && s < (2 * n + 1) as f64 + d) {
        return Err(Error::DomainError(format!(
            "need d < s < 2N+d+1, got s = {s} with d = {d}, N = {n}"
        )));
    }
    let sigma = (s - d) / 2.0;
    let beta = fam.beta_n();
    let zeros = family_zeros(fam)?;
    let g = |t: f64| log_contour_factor(beta, s - d, &zeros, u_n, t).exp();
    let integrand = Integrand {
        g: &g,
        sigma: s - d,
    };
    let range = Range::SemiInfinite {
        a: 0.0,
        hint: DecayHint::Power {
            exponent: 2.0 * n as f64 + 3.0 - (s - d),
        },
    };
    let (integral, ierr) = integrate(&integrand, range, rule)?;
    // ln[(N+1)! / (N^{1+sigma} Gamma(N+1-sigma))]; moderate since the two
    // gamma terms nearly cancel against N^{1+sigma}.
    let log_ratio = log_gamma(n as f64 + 2.0)?
        - (1.0 + sigma) * (n as f64).ln()
        - log_gamma(n as f64 + 1.0 - sigma)?;
    let prefactor = 2.0 / gamma(1.0 + sigma)? * log_ratio.exp();
    let value = prefactor * integral;
    Ok(MellinPoint {
        s: Complex64::new(s, 0.0),
        value: Complex64::new(value, 0.0),
        err_estimate: prefactor.abs() * ierr,
    })
}

/// Route-consistency evaluation: the same quantity as [`gn_contour`] through
/// the associated-spline transform,
///   u^2 beta^{s-d} N^{-1-sigma} (prod x_k^2) M(B*_N, sigma),
/// assembled in log space. Exact at every finite N, so the two routes
/// agreeing is the strongest whole-pipeline oracle available.
pub fn gn_via_spline(
    fam: &PolyFamily,
    u_n: f64,
    s: f64,
    rule: &QuadratureRule,
    ctx: &PrecisionContext,
) -> Result<MellinPoint> {
    let n = fam.n;
    let d = fam.d as f64;
    let sigma = (s - d) / 2.0;
    let knots = KnotSet::omega_squared(*fam, u_n)?;
    let m = mellin_assoc_bspline(&knots, Complex64::new(sigma, 0.0), rule, ctx)?;
    let beta = fam.beta_n();
    let mut log_pref = 2.0 * u_n.ln() + (s - d) * beta.ln() - (1.0 + sigma) * (n as f64).ln();
    for x in family_zeros(fam)? {
        log_pref += (x * x).ln();
    }
    let pref = LogValue::new(1, log_pref);
    let value = pref.mul(&LogValue::from_f64(m.value.re)).to_f64();
    Ok(MellinPoint {
        s: Complex64::new(s, 0.0),
        value: Complex64::new(value, 0.0),
        err_estimate: log_pref.exp() * m.err_estimate,
    })
}

/// One sample of the vertical-line decay probe.
#[derive(Clone, Copy, Debug)]
pub struct RBetaSample {
    pub v: f64,
    /// beta^r |int_0^inf t^{r+iv-1} / ((1 + (t/u)^2) G_{2N}(it)) dt|
    pub lhs: f64,
    /// |v|^mu e^{-(pi/2)|v|} with mu = 3 + max(r + d - 2, 0)
    pub envelope: f64,
    pub ratio: f64,
}

// Oscillatory integral int e^{ivx} H(x) dx over the real line after the
// substitution x = ln t, with H(x) = h(e^x) e^x decaying at both ends.
// Panels of half-period length pi/|v| keep plain Gauss panels accurate.
fn oscillatory_log_integral(
    h: &dyn Fn(f64) -> f64,
    v: f64,
    abs_tol: f64,
) -> Result<Complex64> {
    let big_h = |x: f64| {
        let t = x.exp();
        h(t) * t
    };
    // Coarse scan for the peak first; the mass can sit far from x = 0 when
    // the polynomial degree is large.
    let mut peak = 0.0;
    let mut peak_val = 0.0;
    let mut x = -80.0;
    while x <= 20.0 {
        let v = big_h(x).abs();
        if v > peak_val {
            peak_val = v;
            peak = x;
        }
        x += 0.5;
    }
    if peak_val == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let cutoff = (abs_tol * 1e-3).min(peak_val * 1e-16);
    let mut x_lo = peak;
    let mut guard = 0;
    while big_h(x_lo).abs() > cutoff {
        x_lo -= 4.0;
        guard += 1;
        if guard > 500 {
            return Err(Error::NonConvergent {
                panels: 0,
                err_estimate: big_h(x_lo).abs(),
            });
        }
    }
    let mut x_hi = peak;
    guard = 0;
    while big_h(x_hi).abs() > cutoff {
        x_hi += 4.0;
        guard += 1;
        if guard > 500 {
            return Err(Error::NonConvergent {
                panels: 0,
                err_estimate: big_h(x_hi).abs(),
            });
        }
    }
    let panel = std::f64::consts::PI / v.abs().max(1.0) / 2.0;
    let count = (((x_hi - x_lo) / panel).ceil() as usize).max(4);
    let nw = gauss_legendre_nodes(16);
    let (nodes, weights) = (&nw.0, &nw.1);
    let width = (x_hi - x_lo) / count as f64;
    let mut re = 0.0;
    let mut im = 0.0;
    for j in 0..count {
        let a = x_lo + j as f64 * width;
        let mid = a + 0.5 * width;
        let half = 0.5 * width;
        for (xn, wn) in nodes.iter().zip(weights.iter()) {
            let x = mid + half * xn;
            let hv = big_h(x) * wn * half;
            let (sin, cos) = (v * x).sin_cos();
            re += hv * cos;
            im += hv * sin;
        }
    }
    Ok(Complex64::new(re, im))
}

/// Decay of the contour integral along Re s = r for the Chebyshev families.
///
/// For Q = T_m or U_m at imaginary argument, 1/G_{2N}(it) reduces to the
/// positive real quantity t^d beta^d / R(t) where Q(it) = i^{m mod 4} R(t);
/// the probe integrand is that times t^{r+iv-1} / (1 + (t/u)^2). Each sample
/// reports the measured magnitude against the envelope |v|^mu e^{-(pi/2)|v|}.
pub fn rbeta_probe(
    fam: &PolyFamily,
    u_n: f64,
    r: f64,
    v_grid: &[f64],
    rule: &QuadratureRule,
) -> Result<Vec<RBetaSample>> {
    let kind = match fam.kind {
        FamilyKind::ChebyshevT => ChebKind::T,
        FamilyKind::ChebyshevU => ChebKind::U,
        _ => {
            return Err(Error::InvalidInput(
                "decay probe needs a Chebyshev family".into(),
            ))
        }
    };
    let d = fam.d as f64;
    if !(r > 1.0 - d) {
        return Err(Error::DomainError(format!("need r > 1 - d, got r = {r}")));
    }
    let m = fam.degree();
    let beta = fam.beta_n();
    let mu = 3.0 + (r + d - 2.0).max(0.0);
    let h = move |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        let (rv, _phase) = cheb_imag_log(kind, m, t);
        // t^{r+d-1} beta^d / ((1 + (t/u)^2) R(t)) in log space.
        let ln = (r + d - 1.0) * t.ln() + d * beta.ln()
            - (t / u_n).powi(2).ln_1p()
            - rv.log_mag;
        ln.exp()
    };
    let mut out = Vec::with_capacity(v_grid.len());
    for &v in v_grid {
        let integral = oscillatory_log_integral(&h, v, rule.abs_tol)?;
        let lhs = beta.powf(r) * integral.norm();
        let envelope = v.abs().powf(mu) * (-std::f64::consts::FRAC_PI_2 * v.abs()).exp();
        out.push(RBetaSample {
            v,
            lhs,
            envelope,
            ratio: lhs / envelope,
        });
    }
    Ok(out)
}

/// Raw probe integral at complex s = r + iv (no beta scaling); used for the
/// conjugate-symmetry check.
pub fn probe_integral(fam: &PolyFamily, u_n: f64, r: f64, v: f64, rule: &QuadratureRule) -> Result<Complex64> {
    let kind = match fam.kind {
        FamilyKind::ChebyshevT => ChebKind::T,
        FamilyKind::ChebyshevU => ChebKind::U,
        _ => {
            return Err(Error::InvalidInput(
                "decay probe needs a Chebyshev family".into(),
            ))
        }
    };
    let d = fam.d as f64;
    let m = fam.degree();
    let beta = fam.beta_n();
    let h = move |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        let (rv, _phase) = cheb_imag_log(kind, m, t);
        ((r + d - 1.0) * t.ln() + d * beta.ln() - (t / u_n).powi(2).ln_1p() - rv.log_mag).exp()
    };
    oscillatory_log_integral(&h, v, rule.abs_tol)
}

/// Quadrature of int_0^inf Theta_d(t) t^{sigma-1} dt, the direct-definition
/// counterpart of [`mellin_theta_closed`].
pub fn mellin_theta_quadrature(d: u8, sigma: f64, rule: &QuadratureRule) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::PoleError(sigma));
    }
    let spec = ThetaSpec::default();
    let g = move |t: f64| {
        if t <= 0.0 {
            1.0
        } else {
            theta_eval(d, t, &spec).unwrap_or(f64::NAN)
        }
    };
    let integrand = Integrand { g: &g, sigma };
    let range = Range::SemiInfinite {
        a: 0.0,
        hint: DecayHint::Exponential { rate: 0.25 },
    };
    Ok(integrate(&integrand, range, rule)?.0)
}
