//! Lévy machinery of the generalized gamma process (GGP).
//!
//! Density `ρ(w) = w^{-1-σ₀} e^{-τ₀ w} / Γ(1-σ₀)`, its tail intensity
//! `ρ̄(x) = ∫_x^∞ ρ`, the generalized inverse `ρ̄⁻¹`, the tilted-stable
//! Laplace exponent `ψ` on the cut complex plane, and the theoretical
//! constants tying the model to its sparsity law.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special;

/// Generative parameters of a GGP multigraph.
///
/// `sigma0 < 1` controls tail heaviness (sparse power-law regime for
/// `sigma0 ∈ (0,1)`), `tau0 > 0` the exponential tilt, `t > 0` the process
/// size, and `w_min > 0` the weight-truncation threshold used by samplers.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GGPParams {
    pub sigma0: f64,
    pub tau0: f64,
    pub t: f64,
    pub w_min: f64,
}

impl GGPParams {
    /// Default truncation budget: expected number of edge endpoints lost to
    /// the weight cutoff across the whole graph.
    pub const MISSED_ENDPOINT_BUDGET: f64 = 0.05;

    /// Build parameters with `w_min` chosen so the expected number of missed
    /// edge endpoints, `2 · E[W] · t·∫_0^{w_min} w ρ(w) dw`, stays below
    /// [`Self::MISSED_ENDPOINT_BUDGET`].
    pub fn new(sigma0: f64, tau0: f64, t: f64) -> Result<Self> {
        Self::check(sigma0, tau0, t)?;
        let w_min = solve_w_min(sigma0, tau0, t, Self::MISSED_ENDPOINT_BUDGET)?;
        Self::with_w_min(sigma0, tau0, t, w_min)
    }

    pub fn with_w_min(sigma0: f64, tau0: f64, t: f64, w_min: f64) -> Result<Self> {
        Self::check(sigma0, tau0, t)?;
        if !(w_min > 0.0) {
            return Err(Error::domain("w_min must be > 0"));
        }
        Ok(GGPParams { sigma0, tau0, t, w_min })
    }

    fn check(sigma0: f64, tau0: f64, t: f64) -> Result<()> {
        if !(sigma0 < 1.0) || !sigma0.is_finite() {
            return Err(Error::domain("sigma0 must be < 1"));
        }
        if !(tau0 > 0.0) || !tau0.is_finite() {
            return Err(Error::domain("tau0 must be > 0"));
        }
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::domain("t must be > 0"));
        }
        Ok(())
    }

    /// Expected total weight `E[W] = t · ∫ w ρ(w) dw = t · τ₀^{σ₀-1}`.
    pub fn expected_total_mass(&self) -> f64 {
        self.t * self.tau0.powf(self.sigma0 - 1.0)
    }

    /// Expected number of edge endpoints assigned below `w`, i.e.
    /// `2 E[W] · t ∫_0^w u ρ(u) du`.
    pub fn missed_endpoints_below(&self, w: f64) -> f64 {
        2.0 * self.expected_total_mass() * self.t * weight_mass_below(self.sigma0, self.tau0, w)
    }
}

/// `∫_0^x w ρ(w) dw = τ^{σ-1} P(1-σ, τx)` (regularized lower gamma).
pub fn weight_mass_below(sigma: f64, tau: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    tau.powf(sigma - 1.0) * special::reg_lower_gamma(1.0 - sigma, tau * x)
}

/// `∫_0^x w² ρ(w) dw = (1-σ) τ^{σ-2} P(2-σ, τx)`.
pub fn weight_sq_mass_below(sigma: f64, tau: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    (1.0 - sigma) * tau.powf(sigma - 2.0) * special::reg_lower_gamma(2.0 - sigma, tau * x)
}

fn solve_w_min(sigma0: f64, tau0: f64, t: f64, budget: f64) -> Result<f64> {
    let total_mass = t * tau0.powf(sigma0 - 1.0);
    let missed = |w: f64| 2.0 * total_mass * t * weight_mass_below(sigma0, tau0, w);
    let mut hi = 1e6 / tau0;
    if missed(hi) <= budget {
        return Ok(hi);
    }
    let mut lo = 1e-300;
    if missed(lo) > budget {
        return Err(Error::numeric("cannot satisfy truncation budget"));
    }
    for _ in 0..400 {
        let mid = (0.5 * (lo.ln() + hi.ln())).exp();
        if missed(mid) <= budget {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo < 1.0 + 1e-12 {
            break;
        }
    }
    Ok(lo)
}

/// GGP Lévy density `ρ(w) = w^{-1-σ₀} e^{-τ₀ w} / Γ(1-σ₀)`.
pub fn ggp_density(w: f64, p: &GGPParams) -> Result<f64> {
    if !(w > 0.0) {
        return Err(Error::domain("ggp_density needs w > 0"));
    }
    Ok(
        (-(1.0 + p.sigma0) * w.ln() - p.tau0 * w - special::ln_gamma(1.0 - p.sigma0))
            .exp(),
    )
}

/// Tail Lévy intensity `ρ̄(x) = ∫_x^∞ ρ(w) dw = τ₀^{σ₀} Γ(-σ₀, τ₀ x) / Γ(1-σ₀)`.
pub fn tail_intensity(x: f64, p: &GGPParams) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("tail_intensity needs x > 0"));
    }
    Ok(tail_intensity_unchecked(p.sigma0, p.tau0, x))
}

pub(crate) fn tail_intensity_unchecked(sigma: f64, tau: f64, x: f64) -> f64 {
    if sigma <= -1.0 {
        // Γ(a, x) with a = -σ ≥ 1: regularized routine is safe and
        // Γ(-σ)/Γ(1-σ) = -1/σ.
        return tau.powf(sigma) * special::reg_upper_gamma(-sigma, tau * x) / (-sigma);
    }
    tau.powf(sigma) * special::upper_gamma(-sigma, tau * x)
        * (-special::ln_gamma(1.0 - sigma)).exp()
}

/// Result of inverting the tail intensity. `saturated` is set when the
/// requested level lies outside the search bracket, in which case the
/// bracket endpoint (the generalized infimum) is returned.
#[derive(Debug, Clone, Copy)]
pub struct InvTail {
    pub value: f64,
    pub saturated: bool,
}

const INV_BRACKET_LO: f64 = 1e-12;
const INV_BRACKET_HI: f64 = 1e4;

/// Generalized inverse `ρ̄⁻¹(y) = inf{x : ρ̄(x) ≤ y}` by bisection on log x.
pub fn inv_tail_intensity(y: f64, p: &GGPParams) -> Result<InvTail> {
    if !(y > 0.0) {
        return Err(Error::domain("inv_tail_intensity needs y > 0"));
    }
    let f = |x: f64| tail_intensity_unchecked(p.sigma0, p.tau0, x);
    if f(INV_BRACKET_LO) <= y {
        return Ok(InvTail { value: INV_BRACKET_LO, saturated: true });
    }
    if f(INV_BRACKET_HI) >= y {
        return Ok(InvTail { value: INV_BRACKET_HI, saturated: true });
    }
    let mut lo = INV_BRACKET_LO.ln();
    let mut hi = INV_BRACKET_HI.ln();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid.exp()) > y {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    Ok(InvTail { value: (0.5 * (lo + hi)).exp(), saturated: false })
}

/// Precomputed log-log interpolation table for `ρ̄⁻¹`, polished by Newton
/// steps on `ln ρ̄`. Used in the samplers where millions of inversions are
/// needed; agrees with [`inv_tail_intensity`] to ~1e-12 relative.
pub struct TailInverter {
    sigma: f64,
    tau: f64,
    log_w: Vec<f64>,
    log_rho: Vec<f64>,
}

impl TailInverter {
    pub fn new(p: &GGPParams, w_lo: f64, w_hi: f64, points: usize) -> Result<Self> {
        if !(w_lo > 0.0 && w_hi > w_lo) || points < 8 {
            return Err(Error::invalid("bad TailInverter grid"));
        }
        let (a, b) = (w_lo.ln(), w_hi.ln());
        let log_w: Vec<f64> = (0..points)
            .map(|i| a + (b - a) * i as f64 / (points - 1) as f64)
            .collect();
        let log_rho: Vec<f64> = log_w
            .iter()
            .map(|&lw| tail_intensity_unchecked(p.sigma0, p.tau0, lw.exp()).ln())
            .collect();
        Ok(TailInverter { sigma: p.sigma0, tau: p.tau0, log_w, log_rho })
    }

    /// Invert `ρ̄(w) = y`.
    pub fn invert(&self, y: f64) -> f64 {
        let ly = y.ln();
        // log_rho is strictly decreasing in log_w.
        let idx = match self
            .log_rho
            .binary_search_by(|v| ly.partial_cmp(v).expect("finite"))
        {
            Ok(i) => i,
            Err(i) => i.clamp(1, self.log_rho.len() - 1),
        };
        let (i0, i1) = (idx.saturating_sub(1), idx.min(self.log_w.len() - 1));
        let mut lw = if i0 == i1 {
            self.log_w[i0]
        } else {
            let t = (ly - self.log_rho[i0]) / (self.log_rho[i1] - self.log_rho[i0]);
            self.log_w[i0] + t * (self.log_w[i1] - self.log_w[i0])
        };
        // Newton on G(lw) = ln ρ̄(e^lw) - ln y; G' = -w ρ(w) / ρ̄(w).
        for _ in 0..8 {
            let w = lw.exp();
            let rho_bar = tail_intensity_unchecked(self.sigma, self.tau, w);
            let dens = (-(1.0 + self.sigma) * lw - self.tau * w
                - special::ln_gamma(1.0 - self.sigma))
                .exp();
            let g = rho_bar.ln() - ly;
            let gp = -w * dens / rho_bar;
            let step = g / gp;
            lw -= step.clamp(-1.0, 1.0);
            if step.abs() < 1e-14 {
                break;
            }
        }
        lw.exp()
    }
}

/// Laplace exponent of the exponentially tilted stable law:
/// `ψ(σ,τ;ξ) = (ξ^σ - τ^σ)/σ` for `σ ≠ 0`, `log(ξ/τ)` for `σ = 0`,
/// principal branch on ℂ∖(-∞,0].
pub fn laplace_exponent(sigma: f64, tau: f64, xi: Complex64) -> Result<Complex64> {
    if !(sigma < 1.0) {
        return Err(Error::domain("laplace_exponent needs sigma < 1"));
    }
    if !(tau > 0.0) {
        return Err(Error::domain("laplace_exponent needs tau > 0"));
    }
    if xi.im == 0.0 && xi.re <= 0.0 {
        return Err(Error::domain("xi on the branch cut (-inf, 0]"));
    }
    Ok(psi_complex(sigma, tau, xi))
}

/// Complex expm1 by series for small arguments, exact formula otherwise.
pub(crate) fn cexpm1(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        // z (1 + z/2 (1 + z/3 (...)))
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (2..=16).rev() {
            acc = (acc + 1.0) * z / k as f64;
        }
        (acc + 1.0) * z
    } else {
        z.exp() - 1.0
    }
}

pub(crate) fn psi_complex(sigma: f64, tau: f64, xi: Complex64) -> Complex64 {
    let log_ratio = xi.ln() - Complex64::new(tau.ln(), 0.0);
    if sigma.abs() <= 1e-8 {
        return log_ratio;
    }
    let tau_pow = Complex64::new((sigma * tau.ln()).exp(), 0.0);
    tau_pow * cexpm1(log_ratio * sigma) / sigma
}

/// `ψ` restricted to real positive arguments.
pub(crate) fn psi_real(sigma: f64, tau: f64, x: f64) -> f64 {
    debug_assert!(x > 0.0 && tau > 0.0);
    let log_ratio = x.ln() - tau.ln();
    if sigma.abs() <= 1e-8 {
        return log_ratio;
    }
    (sigma * tau.ln()).exp() * (sigma * log_ratio).exp_m1() / sigma
}

/// `(ψ, ∂_σψ, ∂²_σσψ)` at real `z > 0`. Power series in σ around 0 when
/// `|σ|·max(|ln z|, |ln τ|)` is small, closed forms otherwise:
/// `ψ = Σ_{k≥1} σ^{k-1} (a^k - b^k)/k!` with `a = ln z`, `b = ln τ`.
pub(crate) fn psi_sigma_derivs(sigma: f64, tau: f64, z: f64) -> (f64, f64, f64) {
    debug_assert!(z > 0.0 && tau > 0.0);
    let a = z.ln();
    let b = tau.ln();
    let scale = sigma.abs() * a.abs().max(b.abs());
    if scale <= 0.25 {
        let (mut psi, mut d1, mut d2) = (0.0, 0.0, 0.0);
        let (mut pa, mut pb) = (1.0, 1.0); // a^k, b^k as the loop advances
        let mut kfac = 1.0;
        for k in 1..=34i32 {
            let kf = f64::from(k);
            kfac *= kf;
            pa *= a;
            pb *= b;
            let diff = (pa - pb) / kfac;
            let t0 = sigma.powi(k - 1) * diff;
            psi += t0;
            if k >= 2 {
                d1 += (kf - 1.0) * sigma.powi(k - 2) * diff;
            }
            if k >= 3 {
                d2 += (kf - 1.0) * (kf - 2.0) * sigma.powi(k - 3) * diff;
            }
            if k > 8 && t0.abs() < 1e-18 * (1.0 + psi.abs()) {
                break;
            }
        }
        (psi, d1, d2)
    } else {
        let za = (sigma * a).exp();
        let tb = (sigma * b).exp();
        let psi = (za - tb) / sigma;
        let d1 = (za * a - tb * b) / sigma - (za - tb) / (sigma * sigma);
        let d2 = (za * a * a - tb * b * b) / sigma - 2.0 * (za * a - tb * b) / (sigma * sigma)
            + 2.0 * (za - tb) / (sigma * sigma * sigma);
        (psi, d1, d2)
    }
}

/// Theoretical sparsity scale `τ*` of a GGP multigraph, from the general
/// multigraphex formula
/// `τ* = {2 α₀ c₀ Γ(1-α₀) / (2 ∫W̄₁)^{(1+α₀)/2}}^{1/(1-α₀)}`
/// with `α₀ = σ₀`, `c₀ = 2^{σ₀} / (σ₀ τ₀^{σ₀(1-σ₀)} Γ(1-σ₀))` and
/// `∫W̄₁ = 2 τ₀^{2σ₀-2}`. Simplifies to `τ₀` exactly.
pub fn ggp_theoretical_tau_star(sigma0: f64, tau0: f64) -> Result<f64> {
    if !(sigma0 > 0.0 && sigma0 < 1.0) {
        return Err(Error::domain("ggp_theoretical_tau_star needs sigma0 in (0,1)"));
    }
    if !(tau0 > 0.0) {
        return Err(Error::domain("ggp_theoretical_tau_star needs tau0 > 0"));
    }
    let alpha = sigma0;
    let c0 = 2f64.powf(sigma0)
        / (sigma0 * tau0.powf(sigma0 * (1.0 - sigma0)) * special::gamma(1.0 - sigma0));
    let int_w1 = 2.0 * tau0.powf(2.0 * sigma0 - 2.0);
    let num = 2.0 * alpha * c0 * special::gamma(1.0 - alpha);
    let den = (2.0 * int_w1).powf((1.0 + alpha) / 2.0);
    Ok((num / den).powf(1.0 / (1.0 - alpha)))
}
