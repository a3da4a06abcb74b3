//! Estimators on top of the saddlepoint likelihood: profile MLE, analytic
//! observed information in rescaled coordinates, Laplace (Bernstein–von
//! Mises) posterior approximation, credible intervals, a 1-D grid posterior
//! oracle, and a degree-law assessment across graph ladders.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphstats::{self, GraphSummary};
use crate::levy;
use crate::likelihood::{self, Params};
use crate::special;

/// Options for the profile maximization.
#[derive(Debug, Clone, Copy)]
pub struct FitOpts {
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub coarse_points: usize,
    pub sigma_tol: f64,
    /// Times the lower bound may be doubled when the maximizer sits on it.
    pub max_widenings: usize,
}

impl Default for FitOpts {
    fn default() -> Self {
        FitOpts {
            sigma_lo: -0.9,
            sigma_hi: 0.98,
            coarse_points: 64,
            sigma_tol: 1e-8,
            max_widenings: 2,
        }
    }
}

/// Maximum-likelihood fit of `(σ, τ, s)` through the profile of `Q*`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MleFit {
    pub sigma_hat: f64,
    pub tau_hat: f64,
    pub s_hat: f64,
    /// Nuisance coordinates at the optimum.
    pub eps_hat: f64,
    pub u_hat: f64,
    pub psi_max: f64,
    /// Plug-in scale `τ̂^{1-σ̂} √(2D*) / 2`.
    pub s_star_t: f64,
    pub converged: bool,
    pub boundary_flags: Vec<String>,
}

impl MleFit {
    pub fn is_interior(&self) -> bool {
        self.boundary_flags.is_empty()
    }

    /// `ŝ / s_{*,t}` — the rescaled third coordinate of the BvM theory.
    pub fn u_rescaled(&self) -> f64 {
        self.s_hat / self.s_star_t
    }
}

fn golden_section_max<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> Result<f64> {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

/// Maximize `Ψ(σ)` and back out `(σ̂, τ̂, ŝ)`.
///
/// A coarse grid locates the concave basin (widening the σ range when the
/// maximizer sits on an edge, which on dense graphs it does), then golden
/// section plus a Newton polish on the envelope derivative sharpen it.
pub fn fit_mle(g: &GraphSummary, opts: &FitOpts) -> Result<MleFit> {
    if g.n() == 0 {
        return Err(Error::invalid("empty graph"));
    }
    if g.n1() == g.n() {
        return Err(Error::NoSolution("N_{t,1} = N".into()));
    }
    if g.d_star() <= g.n() {
        return Err(Error::domain("fit_mle needs D* > N"));
    }
    let psi = |s: f64| likelihood::profile_psi(s, g);
    let mut lo = opts.sigma_lo;
    let hi = opts.sigma_hi;
    let mut boundary_flags: Vec<String> = Vec::new();
    let mut widenings = 0;
    let (grid, _vals, arg) = loop {
        let m = opts.coarse_points.max(8);
        let grid: Vec<f64> =
            (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect();
        let mut vals = Vec::with_capacity(m);
        let mut best = f64::NEG_INFINITY;
        let mut arg = 0usize;
        for (i, &s) in grid.iter().enumerate() {
            let v = psi(s).unwrap_or(f64::NEG_INFINITY);
            if v > best {
                best = v;
                arg = i;
            }
            vals.push(v);
        }
        if !best.is_finite() {
            return Err(Error::numeric("profile objective not finite anywhere"));
        }
        if arg == 0 && widenings < opts.max_widenings {
            widenings += 1;
            lo *= 2.0;
            continue;
        }
        break (grid, vals, arg);
    };
    let sigma_hat;
    if arg == 0 {
        boundary_flags.push("sigma_lower_boundary".into());
        sigma_hat = grid[0];
    } else if arg == grid.len() - 1 {
        boundary_flags.push("sigma_upper_boundary".into());
        sigma_hat = grid[grid.len() - 1];
    } else {
        let a = grid[arg - 1];
        let b = grid[arg + 1];
        let mut s_hat = golden_section_max(|s| psi(s).or(Ok(f64::NEG_INFINITY)), a, b, opts.sigma_tol)?;
        // Newton polish on Ψ'(σ) = 0 with finite-difference Ψ''.
        for _ in 0..3 {
            let d1 = likelihood::profile_psi_prime(s_hat, g)?;
            let h = 1e-5;
            let d2 = (likelihood::profile_psi_prime(s_hat + h, g)?
                - likelihood::profile_psi_prime(s_hat - h, g)?)
                / (2.0 * h);
            if d2 >= 0.0 {
                break;
            }
            let step = (d1 / d2).clamp(-0.01, 0.01);
            let cand = s_hat - step;
            if cand <= a || cand >= b {
                break;
            }
            s_hat = cand;
            if step.abs() < 1e-12 {
                break;
            }
        }
        sigma_hat = s_hat;
    }
    let inner = likelihood::inner_eps_tilde(sigma_hat, g)?;
    if inner.regime_warning {
        boundary_flags.push("dense_ratio_warning".into());
    }
    let psi_max = likelihood::k_func(sigma_hat, g)?
        + likelihood::h_func(sigma_hat, inner.eps, inner.u, g)?;
    let point = likelihood::ReparamPoint {
        sigma: sigma_hat,
        eps: inner.eps,
        u: inner.u,
        beta: likelihood::beta_sigma(sigma_hat, g),
        clamped: false,
    };
    let phi = likelihood::reparam_inverse(&point, g)?;
    let d = g.d_star() as f64;
    let s_star_t = phi.tau.powf(1.0 - sigma_hat) * (2.0 * d).sqrt() / 2.0;
    let mut converged = true;
    if boundary_flags.is_empty() {
        let stat = likelihood::profile_psi_prime(sigma_hat, g)?;
        if stat.abs() > 1e-6 * g.n() as f64 {
            converged = false;
            boundary_flags.push("stationarity_tolerance_missed".into());
        }
    }
    Ok(MleFit {
        sigma_hat,
        tau_hat: phi.tau,
        s_hat: phi.s,
        eps_hat: inner.eps,
        u_hat: inner.u,
        psi_max,
        s_star_t,
        converged,
        boundary_flags,
    })
}

/// Gradient of `Q` in `(σ, τ, s)` via the envelope `∂_z A(φ;ζ) = 0`.
pub fn q_gradient(phi: &Params, g: &GraphSummary) -> Result<[f64; 3]> {
    let saddle = likelihood::solve_zeta(phi, g)?;
    let n = g.n() as f64;
    let zeta = saddle.zeta;
    let (psi0, psi1, _) = levy::psi_sigma_derivs(phi.sigma, phi.tau, zeta);
    Ok([
        graphstats::c_t_d1(phi.sigma, g)? + n * zeta.ln() - phi.s * psi1,
        phi.s * phi.tau.powf(phi.sigma - 1.0) - 0.5 * (zeta - phi.tau),
        n / phi.s - psi0,
    ])
}

/// Analytic Hessian of `Q` in `(σ, τ, s)`, chained through
/// `∂_φ ζ = -∂_z∂_φ A / ∂²_z A`.
fn q_hessian_phi(phi: &Params, g: &GraphSummary) -> Result<[[f64; 3]; 3]> {
    let saddle = likelihood::solve_zeta(phi, g)?;
    let n = g.n() as f64;
    let d = g.d_star() as f64;
    let (sig, tau, s) = (phi.sigma, phi.tau, phi.s);
    let zeta = saddle.zeta;
    let beta = likelihood::beta_sigma(sig, g);
    let (_, psi1, psi2) = levy::psi_sigma_derivs(sig, tau, zeta);
    let ln_z = zeta.ln();
    let ln_t = tau.ln();
    // all second partials below are D*-scaled, i.e. D*·∂²A
    let d2z = -0.5 - d * beta / (zeta * zeta) + s * (sig - 1.0) * zeta.powf(sig - 2.0);
    let m_zs_sigma = -n / zeta + s * zeta.powf(sig - 1.0) * ln_z;
    let m_z_tau = 0.5;
    let m_z_s = zeta.powf(sig - 1.0);
    let zeta_sigma = -m_zs_sigma / d2z;
    let zeta_tau = -m_z_tau / d2z;
    let zeta_s = -m_z_s / d2z;
    let q_ss = graphstats::c_t_d2(sig, g)? - s * psi2 - m_zs_sigma * zeta_sigma;
    let q_st = s * tau.powf(sig - 1.0) * ln_t - m_zs_sigma * zeta_tau;
    let q_s3 = -psi1 - m_zs_sigma * zeta_s;
    let q_tt = 0.5 + s * (sig - 1.0) * tau.powf(sig - 2.0) - m_z_tau * zeta_tau;
    let q_t3 = tau.powf(sig - 1.0) - m_z_tau * zeta_s;
    let q_33 = -n / (s * s) - m_z_s * zeta_s;
    Ok([[q_ss, q_st, q_s3], [q_st, q_tt, q_t3], [q_s3, q_t3, q_33]])
}

/// Observed information `-∂²Q*(φ_u)` at the fit, in rescaled coordinates
/// `φ_u = (σ, τ, u = s/s_{*,t})`. Symmetric; positive definite at an
/// interior optimum.
pub fn hessian_qloglik(fit: &MleFit, g: &GraphSummary) -> Result<[[f64; 3]; 3]> {
    if !fit.is_interior() {
        return Err(Error::domain("hessian requires an interior fit"));
    }
    let phi = Params::new(fit.sigma_hat, fit.tau_hat, fit.s_hat)?;
    let h = q_hessian_phi(&phi, g)?;
    let c = fit.s_star_t;
    let mut m = [[0.0f64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let scale = if i == 2 { c } else { 1.0 } * if j == 2 { c } else { 1.0 };
            m[i][j] = -h[i][j] * scale;
        }
    }
    Ok(m)
}

/// Sylvester criterion for a symmetric 3×3 matrix.
pub fn is_positive_definite(m: &[[f64; 3]; 3]) -> bool {
    let d1 = m[0][0];
    let d2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    d1 > 0.0 && d2 > 0.0 && det3(m) > 0.0
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn inv3(m: &[[f64; 3]; 3]) -> Result<[[f64; 3]; 3]> {
    let det = det3(m);
    if det.abs() < 1e-300 || !det.is_finite() {
        return Err(Error::SingularHessian(format!("det = {det:.3e}")));
    }
    let c = |i1: usize, i2: usize, j1: usize, j2: usize| {
        m[i1][j1] * m[i2][j2] - m[i1][j2] * m[i2][j1]
    };
    let adj = [
        [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
        [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
        [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
    ];
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = adj[i][j] / det;
        }
    }
    Ok(out)
}

/// Prior on `(σ, τ, s)`: Gamma on `1-σ`, Gamma on `τ`, half-Student on `s`.
/// All components have positive continuous densities on the parameter space
/// and the `s` component decays polynomially.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PriorSpec {
    pub sigma_shape: f64,
    pub sigma_rate: f64,
    pub tau_shape: f64,
    pub tau_rate: f64,
    pub s_nu: f64,
    pub s_scale: f64,
    /// Improper flat prior (all components ignored); diagnostics only.
    pub flat: bool,
}

impl Default for PriorSpec {
    fn default() -> Self {
        PriorSpec {
            sigma_shape: 2.0,
            sigma_rate: 2.0,
            tau_shape: 2.0,
            tau_rate: 2.0,
            s_nu: 3.0,
            s_scale: 1.0,
            flat: false,
        }
    }
}

impl PriorSpec {
    pub fn flat() -> Self {
        PriorSpec { flat: true, ..Default::default() }
    }

    pub fn log_density(&self, phi: &Params) -> f64 {
        if self.flat {
            return 0.0;
        }
        log_gamma_pdf(1.0 - phi.sigma, self.sigma_shape, self.sigma_rate)
            + log_gamma_pdf(phi.tau, self.tau_shape, self.tau_rate)
            + log_half_student_pdf(phi.s, self.s_nu, self.s_scale)
    }
}

pub(crate) fn log_gamma_pdf(x: f64, shape: f64, rate: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    shape * rate.ln() - special::ln_gamma(shape) + (shape - 1.0) * x.ln() - rate * x
}

pub(crate) fn log_half_student_pdf(x: f64, nu: f64, scale: f64) -> f64 {
    if x < 0.0 {
        return f64::NEG_INFINITY;
    }
    let z = x / scale;
    2.0f64.ln() + special::ln_gamma(0.5 * (nu + 1.0))
        - special::ln_gamma(0.5 * nu)
        - 0.5 * (nu * std::f64::consts::PI).ln()
        - scale.ln()
        - 0.5 * (nu + 1.0) * (1.0 + z * z / nu).ln()
}

/// Default prior log-density at `φ`.
pub fn default_prior(phi: &Params) -> f64 {
    PriorSpec::default().log_density(phi)
}

/// Gaussian posterior approximation around the MLE in the rescaled
/// coordinates `(σ, τ, u = s/s_{*,t})`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosteriorApprox {
    /// `(σ̂, τ̂, û)`.
    pub mode: [f64; 3],
    /// Covariance `Σ̂ = (-∂²Q*)⁻¹`.
    pub cov: [[f64; 3]; 3],
    pub s_star_t: f64,
    pub prior_meta: PriorSpec,
}

/// Laplace/BvM posterior from a fresh fit.
pub fn laplace_posterior(g: &GraphSummary, prior: &PriorSpec) -> Result<PosteriorApprox> {
    let fit = fit_mle(g, &FitOpts::default())?;
    laplace_posterior_from_fit(&fit, g, prior)
}

/// Laplace/BvM posterior at an existing interior fit. The prior does not
/// enter the Gaussian (its covariance is the inverse observed information);
/// it is recorded for provenance and used by the grid oracle.
pub fn laplace_posterior_from_fit(
    fit: &MleFit,
    g: &GraphSummary,
    prior: &PriorSpec,
) -> Result<PosteriorApprox> {
    let m = hessian_qloglik(fit, g)?;
    if !is_positive_definite(&m) {
        return Err(Error::SingularHessian(
            "observed information not positive definite at interior fit".into(),
        ));
    }
    let cov = inv3(&m)?;
    Ok(PosteriorApprox {
        mode: [fit.sigma_hat, fit.tau_hat, fit.u_rescaled()],
        cov,
        s_star_t: fit.s_star_t,
        prior_meta: *prior,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coord {
    Sigma,
    Tau,
    S,
}

/// Equal-tailed Gaussian credible interval with tail mass `gamma`
/// (coverage `1-γ`). The `s` interval is mapped back through `s_{*,t}`.
pub fn credible_interval(p: &PosteriorApprox, coord: Coord, gamma: f64) -> Result<(f64, f64)> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::domain("gamma must be in (0,1)"));
    }
    let idx = match coord {
        Coord::Sigma => 0,
        Coord::Tau => 1,
        Coord::S => 2,
    };
    let sd = p.cov[idx][idx].sqrt();
    if !sd.is_finite() || sd <= 0.0 {
        return Err(Error::SingularHessian("non-positive marginal variance".into()));
    }
    let lo = p.mode[idx] + sd * special::normal_quantile(gamma / 2.0);
    let hi = p.mode[idx] + sd * special::normal_quantile(1.0 - gamma / 2.0);
    if coord == Coord::S {
        Ok((lo * p.s_star_t, hi * p.s_star_t))
    } else {
        Ok((lo, hi))
    }
}

/// Grid posterior over σ: weights ∝ exp{profiled exact log-likelihood +
/// log prior}, the profile over `(τ, s)` taken by quadrature-based
/// refinement from the `Q*` inner maximizer. Oracle for the Laplace
/// σ-marginal on small graphs.
pub fn grid_posterior_sigma(
    g: &GraphSummary,
    prior: &PriorSpec,
    sigma_grid: &[f64],
) -> Result<Vec<f64>> {
    if sigma_grid.is_empty() {
        return Err(Error::invalid("empty sigma grid"));
    }
    if g.d_star() > 100_000 {
        return Err(Error::invalid("grid_posterior_sigma is for graphs with D* <= 1e5"));
    }
    let n = g.n() as f64;
    let quad_steps = 1024;
    let exact = |phi: &Params| -> Result<f64> {
        Ok(n * phi.s.ln()
            + graphstats::c_t(phi.sigma, g)?
            + likelihood::exact_loglik_quad(phi, g, likelihood::QUAD_HALF_WIDTH, quad_steps)?)
    };
    let mut logw = Vec::with_capacity(sigma_grid.len());
    for &sig in sigma_grid {
        let inner = likelihood::inner_eps_tilde(sig, g)?;
        let point = likelihood::ReparamPoint {
            sigma: sig,
            eps: inner.eps,
            u: inner.u,
            beta: likelihood::beta_sigma(sig, g),
            clamped: false,
        };
        let phi0 = likelihood::reparam_inverse(&point, g)?;
        let (mut lt, mut ls) = (phi0.tau.ln(), phi0.s.ln());
        let eval = |lt: f64, ls: f64| -> Result<f64> {
            exact(&Params::new(sig, lt.exp(), ls.exp())?)
        };
        let mut best = eval(lt, ls)?;
        // profile over (τ, s): coordinate-wise parabolic steps
        let mut h = 0.05;
        for _sweep in 0..4 {
            for coord in 0..2 {
                let (c0, c1) = (lt, ls);
                let at = |delta: f64| -> (f64, f64) {
                    if coord == 0 {
                        (c0 + delta, c1)
                    } else {
                        (c0, c1 + delta)
                    }
                };
                let (pm, p0, pp) = (eval(at(-h).0, at(-h).1)?, best, eval(at(h).0, at(h).1)?);
                let denom = pm - 2.0 * p0 + pp;
                let mut step = if denom < 0.0 { 0.5 * h * (pm - pp) / denom } else { 0.0 };
                step = step.clamp(-4.0 * h, 4.0 * h);
                let cand = at(step);
                let vc = eval(cand.0, cand.1)?;
                if vc > best {
                    best = vc;
                    lt = cand.0;
                    ls = cand.1;
                } else if pp > best {
                    best = pp;
                    let c = at(h);
                    lt = c.0;
                    ls = c.1;
                } else if pm > best {
                    best = pm;
                    let c = at(-h);
                    lt = c.0;
                    ls = c.1;
                }
            }
            h *= 0.35;
        }
        let phi = Params::new(sig, lt.exp(), ls.exp())?;
        logw.push(best + prior.log_density(&phi));
    }
    let max = logw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(Error::numeric("grid posterior underflow"));
    }
    let mut w: Vec<f64> = logw.iter().map(|&v| (v - max).exp()).collect();
    let total: f64 = w.iter().sum();
    for v in &mut w {
        *v /= total;
    }
    Ok(w)
}

/// Tolerances for the degree-law assessment.
#[derive(Debug, Clone, Copy)]
pub struct Assumption1Opts {
    pub alpha_drift_tol: f64,
    pub tau_star_drift_tol: f64,
    pub slope_gap_tol: f64,
}

impl Default for Assumption1Opts {
    fn default() -> Self {
        Assumption1Opts { alpha_drift_tol: 0.05, tau_star_drift_tol: 0.5, slope_gap_tol: 0.15 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Assumption1Report {
    pub alpha_hats: Vec<f64>,
    pub tau_stars: Vec<f64>,
    pub slope: f64,
    pub slope_target: f64,
    pub alpha_drift: f64,
    pub tau_star_drift: f64,
    pub slope_gap: f64,
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Assess whether a growing ladder of graphs is consistent with the sparse
/// degree-law regime: stable `α̂`, stable empirical `τ*`, and edge growth
/// `D* ∝ N^{2/(1+α̂)}`.
pub fn assumption1_check(
    ladder: &[GraphSummary],
    opts: &Assumption1Opts,
) -> Result<Assumption1Report> {
    if ladder.len() < 3 {
        return Err(Error::invalid("assumption1_check needs at least 3 summaries"));
    }
    let mut alpha_hats = Vec::with_capacity(ladder.len());
    let mut tau_stars = Vec::with_capacity(ladder.len());
    let mut points = Vec::with_capacity(ladder.len());
    for g in ladder {
        let a = graphstats::solve_alpha_hat(g)?;
        alpha_hats.push(a);
        tau_stars.push(graphstats::empirical_tau_star(a, g)?);
        points.push((g.n() as f64, g.d_star() as f64));
    }
    let (slope, _) = graphstats::sparsity_fit(&points)?;
    let alpha_last = *alpha_hats.last().expect("nonempty");
    let slope_target = 2.0 / (1.0 + alpha_last);
    let alpha_drift = (alpha_last - alpha_hats[0]).abs();
    let tau_last = *tau_stars.last().expect("nonempty");
    let tau_star_drift = if tau_last.abs() > 0.0 {
        (tau_last - tau_stars[0]).abs() / tau_last.abs()
    } else {
        f64::INFINITY
    };
    let slope_gap = (slope - slope_target).abs();
    let mut failures = Vec::new();
    if alpha_drift > opts.alpha_drift_tol {
        failures.push(format!("alpha_hat drift {alpha_drift:.4} > {}", opts.alpha_drift_tol));
    }
    if tau_star_drift > opts.tau_star_drift_tol {
        failures.push(format!(
            "tau_star relative drift {tau_star_drift:.4} > {}",
            opts.tau_star_drift_tol
        ));
    }
    if slope_gap > opts.slope_gap_tol {
        failures.push(format!(
            "sparsity slope {slope:.4} vs target {slope_target:.4} (gap {slope_gap:.4})"
        ));
    }
    Ok(Assumption1Report {
        alpha_hats,
        tau_stars,
        slope,
        slope_target,
        alpha_drift,
        tau_star_drift,
        slope_gap,
        pass: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn prior_is_finite_and_continuous_in_sigma() {
        let spec = PriorSpec::default();
        let mut prev = f64::NAN;
        for i in 0..600 {
            let sigma = -5.0 + 5.9 * i as f64 / 599.0;
            let phi = Params::new(sigma, 1.0, 1.0).unwrap();
            let v = spec.log_density(&phi);
            assert!(v.is_finite());
            if i > 0 {
                assert!((v - prev).abs() < 0.1);
            }
            prev = v;
        }
    }

    #[test]
    fn prior_components_integrate_to_one() {
        // 1D Simpson over the gamma and half-student components
        let simpson = |f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize| -> f64 {
            let h = (b - a) / n as f64;
            let mut s = f(a) + f(b);
            for i in 1..n {
                let x = a + i as f64 * h;
                s += f(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            s * h / 3.0
        };
        let g = |x: f64| log_gamma_pdf(x, 2.0, 2.0).exp();
        assert_relative_eq!(simpson(&g, 1e-9, 60.0, 20_000), 1.0, max_relative = 1e-4);
        let hs = |x: f64| log_half_student_pdf(x, 3.0, 1.0).exp();
        assert_relative_eq!(simpson(&hs, 0.0, 4000.0, 400_000), 1.0, max_relative = 1e-3);
    }

    #[test]
    fn prior_student_tail_is_polynomial() {
        // density ratio at s=1e3 vs 1e2 ≈ (10²)^{-(ν+1)/2·2} for ν=3
        let r = log_half_student_pdf(1e3, 3.0, 1.0) - log_half_student_pdf(1e2, 3.0, 1.0);
        let expect = -4.0 * 10f64.ln(); // x^{-(ν+1)} decay
        assert!((r - expect).abs() < 0.02, "tail ratio {r} vs {expect}");
    }

    #[test]
    fn credible_interval_one_sd_at_gamma_032() {
        let p = PosteriorApprox {
            mode: [0.5, 1.0, 1.0],
            cov: [[0.04, 0.0, 0.0], [0.0, 0.09, 0.0], [0.0, 0.0, 0.25]],
            s_star_t: 10.0,
            prior_meta: PriorSpec::default(),
        };
        let (lo, hi) = credible_interval(&p, Coord::Sigma, 0.32).unwrap();
        let half = 0.5 * (hi - lo);
        assert_relative_eq!(half, 0.2 * 0.994_457_883_209_753, max_relative = 1e-9);
        // s interval is rescaled by s_star_t
        let (slo, shi) = credible_interval(&p, Coord::S, 0.05).unwrap();
        assert_relative_eq!(
            0.5 * (shi + slo),
            10.0,
            max_relative = 1e-12
        );
        assert!(credible_interval(&p, Coord::Tau, 0.0).is_err());
        assert!(credible_interval(&p, Coord::Tau, 1.0).is_err());
    }

    #[test]
    fn fit_premise_errors() {
        let ones = GraphSummary::from_histogram(vec![(1, 10)]).unwrap();
        match fit_mle(&ones, &FitOpts::default()) {
            Err(Error::NoSolution(_)) => {}
            other => panic!("expected NoSolution, got {other:?}"),
        }
    }

    #[test]
    fn det_and_inverse_3x3() {
        let m = [[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]];
        assert!(is_positive_definite(&m));
        let inv = inv3(&m).unwrap();
        for (i, row) in m.iter().enumerate() {
            for (j, _) in inv.iter().enumerate() {
                let acc: f64 = (0..3).map(|k| row[k] * inv[k][j]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((acc - expect).abs() < 1e-12);
            }
        }
        let sing = [[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 0.0, 1.0]];
        assert!(inv3(&sing).is_err());
        assert!(!is_positive_definite(&[[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]));
    }
}
