//! Saddlepoint likelihood core.
//!
//! The log-likelihood of the three-parameter model given a degree histogram
//! is, up to an additive constant,
//! `L(φ) = N log s + C_t(σ) + log I(φ)` with
//! `I(φ) = (2√π)^{-1} ∫_ℝ exp{-D* A(φ; ζ(φ) - iu)} du`,
//! where `A(φ;z) = -(z-τ)²/(4D*) + (1 - σN/D*) Log z + (s/D*) ψ(σ,τ;z)` and
//! `ζ(φ)` is the unique positive saddle of `∂_z A = 0`. The closed form
//! `Q_t(φ) = N log s + C_t(σ) - D* A(φ;ζ(φ)) - log(2)/2` approximates `L`
//! sharply to `log(2)/2` plus a vanishing term on bounded parameter sets;
//! the quadrature routine here lets tests verify exactly that.
//!
//! The `(σ, ε, u)` coordinates — `ε = τ/ζ(φ)`, `u = s ζ^σ/(D* β_σ)` with
//! `β_σ = 1 - σN/D*` — split the objective as `Q* = H + K` and turn profile
//! maximization into two nested univariate solves.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphstats::{self, GraphSummary};
use crate::levy;

/// Model parameter triple `φ = (σ, τ, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub sigma: f64,
    pub tau: f64,
    pub s: f64,
}

impl Params {
    pub fn new(sigma: f64, tau: f64, s: f64) -> Result<Self> {
        if !(sigma < 1.0) || !sigma.is_finite() {
            return Err(Error::domain("sigma must be < 1"));
        }
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::domain("tau must be > 0"));
        }
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::domain("s must be > 0"));
        }
        Ok(Params { sigma, tau, s })
    }
}

/// Likelihood coordinates `(σ, ε, u)` with `β = 1 - σN/D*`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ReparamPoint {
    pub sigma: f64,
    pub eps: f64,
    pub u: f64,
    pub beta: f64,
    /// Set when ε had to be clamped back into (0,1) numerically.
    pub clamped: bool,
}

/// Saddle `ζ(φ)`: unique positive root of
/// `ζ² = τζ + 2sζ^σ + 2D*(1 - σN/D*)`, always `> τ`.
#[derive(Debug, Clone, Copy)]
pub struct SaddleResult {
    pub zeta: f64,
    /// Residual of the saddle equation at `zeta` (absolute).
    pub residual: f64,
    /// `A(φ; ζ)`.
    pub a_value: f64,
}

pub const QUAD_HALF_WIDTH: f64 = 12.0;
pub const QUAD_STEPS: usize = 4096;

/// `β_σ = 1 - σ N / D*`.
pub fn beta_sigma(sigma: f64, g: &GraphSummary) -> f64 {
    1.0 - sigma * g.n() as f64 / g.d_star() as f64
}

fn check_graph(g: &GraphSummary) -> Result<()> {
    if g.n() == 0 {
        return Err(Error::invalid("empty graph"));
    }
    if g.d_star() < g.n() {
        return Err(Error::invalid("D* < N is impossible for degree >= 1 graphs"));
    }
    Ok(())
}

/// `A(φ; z)` on the cut plane ℂ∖(-∞,0].
pub fn eval_a(phi: &Params, g: &GraphSummary, z: Complex64) -> Result<Complex64> {
    check_graph(g)?;
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::domain("z on the branch cut (-inf, 0]"));
    }
    let d = g.d_star() as f64;
    let beta = beta_sigma(phi.sigma, g);
    let dz = z - phi.tau;
    Ok(-dz * dz / (4.0 * d)
        + z.ln() * beta
        + levy::psi_complex(phi.sigma, phi.tau, z) * (phi.s / d))
}

/// `A(φ; z)` for real `z > 0`.
pub fn eval_a_real(phi: &Params, g: &GraphSummary, z: f64) -> Result<f64> {
    check_graph(g)?;
    if z <= 0.0 {
        return Err(Error::domain("z must be > 0"));
    }
    let d = g.d_star() as f64;
    let beta = beta_sigma(phi.sigma, g);
    Ok(-(z - phi.tau).powi(2) / (4.0 * d)
        + beta * z.ln()
        + phi.s / d * levy::psi_real(phi.sigma, phi.tau, z))
}

/// `∂_z A(φ; z)` at real `z > 0`:
/// `-(z-τ)/(2D*) + β_σ/z + (s/D*) z^{σ-1}`.
pub(crate) fn d_a_dz(phi: &Params, g: &GraphSummary, z: f64) -> f64 {
    let d = g.d_star() as f64;
    let beta = beta_sigma(phi.sigma, g);
    -(z - phi.tau) / (2.0 * d) + beta / z + phi.s / d * z.powf(phi.sigma - 1.0)
}

/// Saddle equation residual `F(z) = z² - τz - 2sz^σ - 2D*β_σ`.
fn saddle_f(phi: &Params, g: &GraphSummary, z: f64) -> f64 {
    let d = g.d_star() as f64;
    let beta = beta_sigma(phi.sigma, g);
    z * z - phi.tau * z - 2.0 * phi.s * z.powf(phi.sigma) - 2.0 * d * beta
}

/// Solve `∂_z A(φ; z) = 0` for the unique positive saddle.
///
/// `∂_z A` is strictly decreasing on (0,∞) (each term of `∂²_z A` is negative
/// for σ < 1 and β_σ > 0), so bracketing from `z = τ` and bisecting cannot
/// fail; Newton steps on the polynomial form polish the root.
pub fn solve_zeta(phi: &Params, g: &GraphSummary) -> Result<SaddleResult> {
    check_graph(g)?;
    let d = g.d_star() as f64;
    let beta = beta_sigma(phi.sigma, g);
    let mut lo = phi.tau;
    let mut hi = phi.tau + 2.0 * (2.0 * d * beta).max(0.0).sqrt() + 1.0;
    let mut grow = 0;
    while d_a_dz(phi, g, hi) >= 0.0 {
        hi *= 2.0;
        grow += 1;
        if grow > 300 {
            return Err(Error::numeric("saddle bracket expansion failed"));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if d_a_dz(phi, g, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    let mut zeta = 0.5 * (lo + hi);
    for _ in 0..6 {
        let f = saddle_f(phi, g, zeta);
        let fp = 2.0 * zeta - phi.tau - 2.0 * phi.s * phi.sigma * zeta.powf(phi.sigma - 1.0);
        if fp.abs() < 1e-300 {
            break;
        }
        let step = f / fp;
        zeta -= step;
        if step.abs() <= 1e-16 * zeta {
            break;
        }
    }
    let residual = saddle_f(phi, g, zeta);
    if !(zeta > phi.tau) || residual.abs() > 1e-10 * zeta * zeta {
        return Err(Error::numeric(format!(
            "saddle solve failed: zeta={zeta}, residual={residual:.3e}"
        )));
    }
    Ok(SaddleResult { zeta, residual, a_value: eval_a_real(phi, g, zeta)? })
}

/// Closed-form approximate log-likelihood
/// `Q_t(φ) = N log s + C_t(σ) - D* A(φ; ζ(φ)) - log(2)/2`.
pub fn qloglik(phi: &Params, g: &GraphSummary) -> Result<f64> {
    let saddle = solve_zeta(phi, g)?;
    let n = g.n() as f64;
    let d = g.d_star() as f64;
    Ok(n * phi.s.ln() + graphstats::c_t(phi.sigma, g)? - d * saddle.a_value
        - 0.5 * 2.0f64.ln())
}

/// Trapezoid sum of `exp{-D*[A(ζ - iu) - A(ζ)]}` over `u ∈ [-hw, hw]`;
/// returns its natural log. Everything stays in the log domain relative to
/// the saddle value, and the integrand modulus is bounded by `e^{-u²/4}`,
/// so truncation error is below `e^{-hw²/4}`.
fn contour_log_integral(
    phi: &Params,
    g: &GraphSummary,
    zeta: f64,
    a_at_zeta: f64,
    half_width: f64,
    steps: usize,
) -> Result<f64> {
    if !(half_width > 0.0) || steps < 8 {
        return Err(Error::invalid("bad quadrature grid"));
    }
    let d = g.d_star() as f64;
    let h = 2.0 * half_width / steps as f64;
    let mut sum = 0.0;
    for k in 0..=steps {
        let u = -half_width + k as f64 * h;
        let a = eval_a(phi, g, Complex64::new(zeta, -u))?;
        let val = ((a_at_zeta - a) * d).exp().re;
        if !val.is_finite() {
            return Err(Error::numeric(format!("non-finite integrand at u={u}")));
        }
        let w = if k == 0 || k == steps { 0.5 } else { 1.0 };
        sum += w * val;
    }
    if !(sum > 0.0) {
        return Err(Error::numeric("contour integral collapsed to zero"));
    }
    Ok((sum * h).ln())
}

/// `log I(φ)` by saddle-shifted contour quadrature:
/// `log I = ln ∫ exp{-D*[A(ζ-iu) - A(ζ)]} du - D* A(ζ) - log(2√π)`.
pub fn exact_loglik_quad(
    phi: &Params,
    g: &GraphSummary,
    half_width: f64,
    steps: usize,
) -> Result<f64> {
    let saddle = solve_zeta(phi, g)?;
    let d = g.d_star() as f64;
    let raw = contour_log_integral(phi, g, saddle.zeta, saddle.a_value, half_width, steps)?;
    Ok(raw - d * saddle.a_value - (2.0 * std::f64::consts::PI.sqrt()).ln())
}

/// Saddle gap `log I(φ) + D* A(φ; ζ)`: ≤ 0 for every φ, and ≈ -log(2)/2 on
/// bounded parameter sets once `D*` is large.
pub fn saddle_gap(phi: &Params, g: &GraphSummary, half_width: f64, steps: usize) -> Result<f64> {
    let saddle = solve_zeta(phi, g)?;
    let raw = contour_log_integral(phi, g, saddle.zeta, saddle.a_value, half_width, steps)?;
    Ok(raw - (2.0 * std::f64::consts::PI.sqrt()).ln())
}

/// Forward map `φ → (σ, ε, u)`:
/// `ε = 1 - (2sζ^σ + 2D*β_σ)/ζ²` (equals `τ/ζ`), `u = sζ^σ/(D*β_σ)`.
pub fn reparam_forward(phi: &Params, g: &GraphSummary) -> Result<ReparamPoint> {
    let saddle = solve_zeta(phi, g)?;
    let d = g.d_star() as f64;
    let beta = beta_sigma(phi.sigma, g);
    let zs = saddle.zeta.powf(phi.sigma);
    let raw_eps = 1.0 - (2.0 * phi.s * zs + 2.0 * d * beta) / (saddle.zeta * saddle.zeta);
    let u = phi.s * zs / (d * beta);
    let mut eps = raw_eps;
    let mut clamped = false;
    if !(eps > 0.0) {
        eps = 1e-300;
        clamped = true;
    } else if !(eps < 1.0) {
        eps = 1.0 - 1e-12;
        clamped = true;
    }
    Ok(ReparamPoint { sigma: phi.sigma, eps, u, beta, clamped })
}

/// Inverse map: `ζ² = 2D*β(1+u)/(1-ε)`, `τ = ζε`, `s = D*β u ζ^{-σ}`.
pub fn reparam_inverse(r: &ReparamPoint, g: &GraphSummary) -> Result<Params> {
    check_graph(g)?;
    if !(r.eps > 0.0 && r.eps < 1.0) {
        return Err(Error::domain("eps must be in (0,1)"));
    }
    if !(r.u > 0.0) {
        return Err(Error::domain("u must be > 0"));
    }
    let d = g.d_star() as f64;
    let beta = beta_sigma(r.sigma, g);
    if beta <= 0.0 {
        return Err(Error::domain("beta_sigma <= 0"));
    }
    let zeta = (2.0 * d * beta * (1.0 + r.u) / (1.0 - r.eps)).sqrt();
    let tau = zeta * r.eps;
    let s = d * beta * r.u * zeta.powf(-r.sigma);
    Params::new(r.sigma, tau, s)
}

/// `f(σ,ε) = (1-ε^σ)/σ` for σ ≠ 0, `log(1/ε)` at σ = 0.
pub fn f_func(sigma: f64, eps: f64) -> f64 {
    debug_assert!(eps > 0.0 && eps < 1.0);
    if sigma.abs() <= 1e-8 {
        -eps.ln()
    } else {
        -(sigma * eps.ln()).exp_m1() / sigma
    }
}

/// `g(σ,ε) = f(σ,ε) - (1-ε)/2`; strictly positive on ε ∈ (0,1), σ < 1.
pub fn g_func(sigma: f64, eps: f64) -> f64 {
    f_func(sigma, eps) - 0.5 * (1.0 - eps)
}

/// `∂_σ f(σ,ε)` = `(expm1(σL) - σL e^{σL})/σ²` with `L = ln ε`.
pub(crate) fn f_func_dsigma(sigma: f64, eps: f64) -> f64 {
    let l = eps.ln();
    let x = sigma * l;
    if x.abs() < 0.35 {
        // -L² Σ_{m≥0} (m+1) x^m / (m+2)!
        let mut sum = 0.0;
        let mut xp = 1.0;
        let mut fact = 2.0; // (m+2)!
        for m in 0..24u32 {
            let mf = f64::from(m);
            if m > 0 {
                xp *= x;
                fact *= mf + 2.0;
            }
            sum += (mf + 1.0) * xp / fact;
        }
        -l * l * sum
    } else {
        (x.exp_m1() - x * x.exp()) / (sigma * sigma)
    }
}

/// `H(σ,ε,u) = N log u - (D*/2)log(1+u) - D*β g(σ,ε) u + (D*/2)log(1-ε)
///            + (D*/2)(1-ε)β`.
pub fn h_func(sigma: f64, eps: f64, u: f64, g: &GraphSummary) -> Result<f64> {
    check_graph(g)?;
    if !(eps > 0.0 && eps < 1.0) || !(u > 0.0) {
        return Err(Error::domain("need eps in (0,1) and u > 0"));
    }
    let beta = beta_sigma(sigma, g);
    if beta <= 0.0 {
        return Err(Error::domain("beta_sigma <= 0"));
    }
    let n = g.n() as f64;
    let d = g.d_star() as f64;
    Ok(n * u.ln() - 0.5 * d * u.ln_1p() - d * beta * g_func(sigma, eps) * u
        + 0.5 * d * (1.0 - eps).ln()
        + 0.5 * d * (1.0 - eps) * beta)
}

/// `K(σ) = (N - D*/2) log β_σ + C_t(σ)`.
pub fn k_func(sigma: f64, g: &GraphSummary) -> Result<f64> {
    check_graph(g)?;
    let beta = beta_sigma(sigma, g);
    if beta <= 0.0 {
        return Err(Error::domain("beta_sigma <= 0"));
    }
    let n = g.n() as f64;
    let d = g.d_star() as f64;
    Ok((n - 0.5 * d) * beta.ln() + graphstats::c_t(sigma, g)?)
}

/// `∂_u H = N/u - (D*/2)/(1+u) - D*β g(σ,ε)`.
pub fn d_u_h(sigma: f64, eps: f64, u: f64, g: &GraphSummary) -> f64 {
    let beta = beta_sigma(sigma, g);
    let n = g.n() as f64;
    let d = g.d_star() as f64;
    n / u - 0.5 * d / (1.0 + u) - d * beta * g_func(sigma, eps)
}

/// `∂_ε H = D*β u (ε^{σ-1} - 1/2) - (D*/2)/(1-ε) - (D*/2)β`.
pub fn d_eps_h(sigma: f64, eps: f64, u: f64, g: &GraphSummary) -> f64 {
    let beta = beta_sigma(sigma, g);
    let d = g.d_star() as f64;
    d * beta * u * (eps.powf(sigma - 1.0) - 0.5) - 0.5 * d / (1.0 - eps) - 0.5 * d * beta
}

/// Unique positive root of `∂_u H = 0`, i.e. of
/// `(D*βg) u² + (D*/2 + D*βg - N) u - N = 0`.
pub fn inner_u_bar(sigma: f64, eps: f64, g: &GraphSummary) -> Result<f64> {
    Ok(inner_u_bar_flagged(sigma, eps, g)?.0)
}

/// As [`inner_u_bar`]; the flag marks the degenerate fallback `g(σ,ε) ≤ 0`,
/// where the quadratic collapses to a linear equation. (`g > 0` holds for
/// every σ < 1, ε ∈ (0,1), so the flag should never fire on valid input.)
pub fn inner_u_bar_flagged(sigma: f64, eps: f64, g: &GraphSummary) -> Result<(f64, bool)> {
    check_graph(g)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain("eps must be in (0,1)"));
    }
    let beta = beta_sigma(sigma, g);
    if beta <= 0.0 {
        return Err(Error::domain("beta_sigma <= 0"));
    }
    let n = g.n() as f64;
    let d = g.d_star() as f64;
    let gval = g_func(sigma, eps);
    let a = d * beta * gval;
    let b = 0.5 * d + a - n;
    if a <= 0.0 {
        if b > 0.0 {
            return Ok((n / b, true));
        }
        return Err(Error::numeric("degenerate inner u equation with no positive root"));
    }
    // stable positive root: 2N / (b + √(b² + 4aN))
    let disc = (b * b + 4.0 * a * n).sqrt();
    Ok((2.0 * n / (b + disc), false))
}

/// Inner maximizer `(ε̃(σ), ũ(σ))` of `H(σ, ·, ·)`.
#[derive(Debug, Clone, Copy)]
pub struct InnerPoint {
    pub eps: f64,
    pub u: f64,
    /// Set when `N/D* > 1/2`; the nested profile solve assumes `N = o(D*)`.
    pub regime_warning: bool,
}

/// Solve `∂_ε H(σ, ε, ū(σ,ε)) = 0` by bracketed bisection on log ε. The
/// root is unique and lies below `3C·N/D*` with `C = max(1, -σ)`.
pub fn inner_eps_tilde(sigma: f64, g: &GraphSummary) -> Result<InnerPoint> {
    check_graph(g)?;
    let beta = beta_sigma(sigma, g);
    if beta <= 0.0 {
        return Err(Error::domain("beta_sigma <= 0"));
    }
    let n = g.n() as f64;
    let d = g.d_star() as f64;
    let regime_warning = n / d > 0.5;
    let envelope = |eps: f64| -> Result<f64> {
        let u = inner_u_bar(sigma, eps, g)?;
        Ok(d_eps_h(sigma, eps, u, g))
    };
    let cap = 3.0 * 1.0f64.max(-sigma) * n / d;
    let mut hi = cap.min(0.5);
    let mut expand = 0;
    while envelope(hi)? > 0.0 {
        hi = (2.0 * hi).min(1.0 - 1e-9);
        expand += 1;
        if expand > 60 {
            return Err(Error::numeric("no sign change for inner eps bracket"));
        }
    }
    let mut lo = hi * 1e-12;
    let mut shrink = 0;
    while envelope(lo)? <= 0.0 {
        lo *= 1e-3;
        shrink += 1;
        if shrink > 100 {
            return Err(Error::numeric("inner eps lower bracket failed"));
        }
    }
    let (mut llo, mut lhi) = (lo.ln(), hi.ln());
    for _ in 0..200 {
        let mid = 0.5 * (llo + lhi);
        if envelope(mid.exp())? > 0.0 {
            llo = mid;
        } else {
            lhi = mid;
        }
        if lhi - llo < 1e-15 {
            break;
        }
    }
    let eps = (0.5 * (llo + lhi)).exp();
    let u = inner_u_bar(sigma, eps, g)?;
    let resid = d_eps_h(sigma, eps, u, g);
    if resid.abs() > 1e-8 * d {
        return Err(Error::numeric(format!("inner eps residual {resid:.3e} too large")));
    }
    Ok(InnerPoint { eps, u, regime_warning })
}

/// Profile objective `Ψ(σ) = K(σ) + H(σ, ε̃(σ), ũ(σ))`.
pub fn profile_psi(sigma: f64, g: &GraphSummary) -> Result<f64> {
    let inner = inner_eps_tilde(sigma, g)?;
    Ok(k_func(sigma, g)? + h_func(sigma, inner.eps, inner.u, g)?)
}

/// Envelope derivative `Ψ'(σ) = ∂_σ K + ∂_σ H` at the inner maximizer.
pub fn profile_psi_prime(sigma: f64, g: &GraphSummary) -> Result<f64> {
    let inner = inner_eps_tilde(sigma, g)?;
    profile_psi_prime_at(sigma, &inner, g)
}

pub(crate) fn profile_psi_prime_at(
    sigma: f64,
    inner: &InnerPoint,
    g: &GraphSummary,
) -> Result<f64> {
    let n = g.n() as f64;
    let d = g.d_star() as f64;
    let beta = beta_sigma(sigma, g);
    let dbeta = -n / d;
    let k_prime = graphstats::c_t_d1(sigma, g)? + (n - 0.5 * d) * dbeta / beta;
    let h_prime = -d
        * inner.u
        * (dbeta * g_func(sigma, inner.eps) + beta * f_func_dsigma(sigma, inner.eps))
        + 0.5 * d * (1.0 - inner.eps) * dbeta;
    Ok(k_prime + h_prime)
}
