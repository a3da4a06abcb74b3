//! Finite-difference, grid-scan and recomposition oracles for the
//! saddlepoint likelihood core.

mod common;

use common::TestUniform;
use ggx_core::graphstats::{self, GraphSummary};
use ggx_core::levy::GGPParams;
use ggx_core::likelihood::{
    beta_sigma, d_eps_h, d_u_h, eval_a, eval_a_real, f_func, g_func, h_func,
    inner_eps_tilde, inner_u_bar, k_func, profile_psi, profile_psi_prime, qloglik,
    reparam_forward, saddle_gap, solve_zeta, Params, QUAD_HALF_WIDTH,
};
use ggx_core::samplers::sample_ggp_graph;
use num_complex::Complex64;

fn medium_graph() -> GraphSummary {
    GraphSummary::from_histogram(vec![(1, 420), (2, 130), (3, 60), (4, 22), (7, 9), (19, 3)])
        .unwrap()
}

fn random_phi(u: &mut TestUniform) -> Params {
    Params::new(u.in_range(-0.9, 0.95), u.in_range(0.3, 2.5), u.in_range(0.05, 30.0)).unwrap()
}

#[test]
fn da_dz_matches_finite_differences() {
    let g = medium_graph();
    let mut u = TestUniform::new(11);
    for _ in 0..40 {
        let phi = random_phi(&mut u);
        let z = u.in_range(0.2, 20.0);
        let h = 1e-6 * z;
        let fd =
            (eval_a_real(&phi, &g, z + h).unwrap() - eval_a_real(&phi, &g, z - h).unwrap())
                / (2.0 * h);
        // analytic: -(z-τ)/(2D*) + β/z + (s/D*) z^{σ-1}
        let d = g.d_star() as f64;
        let beta = beta_sigma(phi.sigma, &g);
        let ana = -(z - phi.tau) / (2.0 * d) + beta / z + phi.s / d * z.powf(phi.sigma - 1.0);
        assert!(
            (fd - ana).abs() <= 1e-6 * ana.abs().max(1e-3),
            "fd={fd} ana={ana} at z={z}"
        );
    }
}

#[test]
fn zeta_unique_sign_change_on_grid() {
    // ∂_z A has exactly one sign change on (0, z_max) — scan 100 random φ
    let g = medium_graph();
    let d = g.d_star() as f64;
    let mut u = TestUniform::new(23);
    for _ in 0..100 {
        let phi = random_phi(&mut u);
        let beta = beta_sigma(phi.sigma, &g);
        let z_max = phi.tau + 4.0 * (2.0 * d * beta).sqrt() + 50.0;
        let mut changes = 0;
        let mut prev = f64::NAN;
        let steps = 4000;
        for i in 1..=steps {
            let z = z_max * i as f64 / steps as f64;
            let v = -(z - phi.tau) / (2.0 * d) + beta / z + phi.s / d * z.powf(phi.sigma - 1.0);
            if !prev.is_nan() && v.signum() != prev.signum() {
                changes += 1;
            }
            prev = v;
        }
        assert_eq!(changes, 1, "sign changes != 1 for phi={phi:?}");
        let saddle = solve_zeta(&phi, &g).unwrap();
        assert!(saddle.zeta > phi.tau && saddle.zeta < z_max);
    }
}

#[test]
fn zeta_matches_grid_scan_root() {
    let g = medium_graph();
    let d = g.d_star() as f64;
    let mut u = TestUniform::new(5);
    for _ in 0..10 {
        let phi = random_phi(&mut u);
        let saddle = solve_zeta(&phi, &g).unwrap();
        let beta = beta_sigma(phi.sigma, &g);
        // 10^6-point scan of ∂_z A around the root bracket
        let z_max = phi.tau + 4.0 * (2.0 * d * beta).sqrt() + 50.0;
        let steps = 1_000_000usize;
        let da = |z: f64| {
            -(z - phi.tau) / (2.0 * d) + beta / z + phi.s / d * z.powf(phi.sigma - 1.0)
        };
        let mut root = f64::NAN;
        let mut prev_z = phi.tau;
        let mut prev_v = da(prev_z);
        for i in 1..=steps {
            let z = phi.tau + (z_max - phi.tau) * i as f64 / steps as f64;
            let v = da(z);
            if prev_v > 0.0 && v <= 0.0 {
                root = prev_z + (z - prev_z) * prev_v / (prev_v - v);
                break;
            }
            prev_z = z;
            prev_v = v;
        }
        assert!(
            (saddle.zeta - root).abs() <= 1e-5 * root,
            "zeta={} scan={root}",
            saddle.zeta
        );
    }
}

#[test]
fn qloglik_finite_on_bounded_parameter_set() {
    let p = GGPParams::new(0.5, 1.0, 60.0).unwrap();
    let g = sample_ggp_graph(&p, 42).unwrap().summary;
    let d = g.d_star() as f64;
    let s_cap = (2.0 * d).sqrt();
    for i in 0..5 {
        let sigma = -0.5 + 1.4 * i as f64 / 4.0;
        for j in 0..5 {
            let tau = 0.5 + 1.5 * j as f64 / 4.0;
            for k in 0..5 {
                let s = s_cap * (0.05 + 0.9 * k as f64 / 4.0);
                let phi = Params::new(sigma, tau, s).unwrap();
                let q = qloglik(&phi, &g).unwrap();
                assert!(q.is_finite());
            }
        }
    }
}

#[test]
fn qloglik_recomposition_oracle() {
    // recompose N log s + C_t - D*·A(ζ) - log2/2 from the public pieces
    let g = medium_graph();
    let mut u = TestUniform::new(31);
    for _ in 0..25 {
        let phi = random_phi(&mut u);
        let q = qloglik(&phi, &g).unwrap();
        let saddle = solve_zeta(&phi, &g).unwrap();
        let a = eval_a(&phi, &g, Complex64::new(saddle.zeta, 0.0)).unwrap();
        assert!(a.im.abs() < 1e-14);
        let recomposed = g.n() as f64 * phi.s.ln() + graphstats::c_t(phi.sigma, &g).unwrap()
            - g.d_star() as f64 * a.re
            - 0.5 * 2f64.ln();
        assert!(
            (q - recomposed).abs() <= 1e-9 * q.abs().max(1.0),
            "{q} vs {recomposed}"
        );
    }
}

#[test]
fn q_difference_equals_reparam_difference() {
    // Q(φ₁) - Q(φ₂) = Q*(r₁) - Q*(r₂) where Q* = H + K
    let g = medium_graph();
    let mut u = TestUniform::new(57);
    let q_star = |r: &ggx_core::likelihood::ReparamPoint| {
        h_func(r.sigma, r.eps, r.u, &g).unwrap() + k_func(r.sigma, &g).unwrap()
    };
    for _ in 0..50 {
        let phi1 = random_phi(&mut u);
        let phi2 = random_phi(&mut u);
        let dq = qloglik(&phi1, &g).unwrap() - qloglik(&phi2, &g).unwrap();
        let r1 = reparam_forward(&phi1, &g).unwrap();
        let r2 = reparam_forward(&phi2, &g).unwrap();
        assert!(!r1.clamped && !r2.clamped);
        let dq_star = q_star(&r1) - q_star(&r2);
        assert!(
            (dq - dq_star).abs() <= 1e-8 * dq.abs().max(1.0),
            "dq={dq} dq*={dq_star}"
        );
    }
}

#[test]
fn inner_derivatives_match_finite_differences() {
    let g = medium_graph();
    let mut u = TestUniform::new(3);
    for _ in 0..20 {
        let sigma = u.in_range(-0.8, 0.9);
        let eps = u.in_range(1e-4, 0.6);
        let uu = u.in_range(1e-4, 2.0);
        let h = 1e-6;
        let fd_u = (h_func(sigma, eps, uu + h * uu, &g).unwrap()
            - h_func(sigma, eps, uu - h * uu, &g).unwrap())
            / (2.0 * h * uu);
        assert!(
            (fd_u - d_u_h(sigma, eps, uu, &g)).abs()
                <= 1e-6 * fd_u.abs().max(g.d_star() as f64 * 1e-6),
            "du mismatch"
        );
        let fd_e = (h_func(sigma, eps + h * eps, uu, &g).unwrap()
            - h_func(sigma, eps - h * eps, uu, &g).unwrap())
            / (2.0 * h * eps);
        let ana_e = d_eps_h(sigma, eps, uu, &g);
        assert!(
            (fd_e - ana_e).abs() <= 1e-5 * ana_e.abs().max(1.0),
            "deps mismatch: {fd_e} vs {ana_e}"
        );
    }
}

#[test]
fn psi_prime_matches_finite_differences() {
    let p = GGPParams::new(0.5, 1.0, 40.0).unwrap();
    let g = sample_ggp_graph(&p, 8).unwrap().summary;
    for &sigma in &[-0.4, 0.0, 0.2, 0.45, 0.7] {
        let h = 1e-6;
        let fd = (profile_psi(sigma + h, &g).unwrap() - profile_psi(sigma - h, &g).unwrap())
            / (2.0 * h);
        let ana = profile_psi_prime(sigma, &g).unwrap();
        assert!(
            (fd - ana).abs() <= 1e-5 * ana.abs().max(g.n() as f64 * 1e-4),
            "sigma={sigma}: fd={fd} ana={ana}"
        );
    }
}

#[test]
fn profile_matches_two_dimensional_grid() {
    // Ψ(σ) vs direct 2D maximization of Q* on a tiny graph
    let g = GraphSummary::from_histogram(vec![(1, 60), (2, 25), (3, 8), (5, 3), (9, 1)]).unwrap();
    let d = g.d_star() as f64;
    for &sigma in &[-0.3, 0.1, 0.5] {
        let psi = profile_psi(sigma, &g).unwrap();
        let mut best = f64::NEG_INFINITY;
        for i in 1..400 {
            let eps = i as f64 / 400.0 * 0.8;
            for j in 1..400 {
                let u = 10f64.powf(-4.0 + 5.0 * j as f64 / 400.0);
                if let Ok(h) = h_func(sigma, eps, u, &g) {
                    best = best.max(h);
                }
            }
        }
        let grid_max = best + k_func(sigma, &g).unwrap();
        assert!(psi >= grid_max - 1e-9 * d.abs());
        assert!(
            (psi - grid_max).abs() <= 1e-4 * d,
            "sigma={sigma}: psi={psi} grid={grid_max}"
        );
    }
}

#[test]
fn profile_concave_and_collapsing_near_one() {
    let p = GGPParams::new(0.5, 1.0, 80.0).unwrap();
    let g = sample_ggp_graph(&p, 3).unwrap().summary;
    // discrete second differences < 0 on the central range
    let m = 41;
    let mut vals = Vec::with_capacity(m);
    for i in 0..m {
        let sigma = 0.1 + 0.7 * i as f64 / (m - 1) as f64;
        vals.push(profile_psi(sigma, &g).unwrap());
    }
    for w in vals.windows(3) {
        assert!(w[2] - 2.0 * w[1] + w[0] < 0.0, "profile not concave: {w:?}");
    }
    // strong decay approaching σ = 1 on sparse data
    let at_mid = profile_psi(0.5, &g).unwrap();
    let near_one = profile_psi(0.995, &g).unwrap();
    assert!(
        near_one < at_mid - 0.5 * g.n() as f64,
        "Ψ(0.995)={near_one} vs Ψ(0.5)={at_mid}, N={}",
        g.n()
    );
}

#[test]
fn inner_eps_asymptotic_identity_on_simulated_data() {
    // ε̃^{1-σ̂} ≈ σ̂ N/D* near the maximizer (20% at t = 500)
    let p = GGPParams::new(0.5, 1.0, 500.0).unwrap();
    let g = sample_ggp_graph(&p, 12).unwrap().summary;
    let fit = ggx_core::inference::fit_mle(&g, &ggx_core::inference::FitOpts::default()).unwrap();
    let inner = inner_eps_tilde(fit.sigma_hat, &g).unwrap();
    let lhs = inner.eps.powf(1.0 - fit.sigma_hat);
    let rhs = fit.sigma_hat * g.n() as f64 / g.d_star() as f64;
    assert!((lhs / rhs - 1.0).abs() <= 0.2, "{lhs} vs {rhs}");
}

#[test]
fn saddle_gap_upper_bound_always_holds() {
    let g = medium_graph();
    let mut u = TestUniform::new(77);
    for _ in 0..30 {
        let phi = random_phi(&mut u);
        let gap = saddle_gap(&phi, &g, QUAD_HALF_WIDTH, 1024).unwrap();
        assert!(gap <= 1e-12, "gap {gap} > 0 at {phi:?}");
    }
}

#[test]
fn saddle_gap_sharp_at_moderate_size() {
    let p = GGPParams::new(0.5, 1.0, 75.0).unwrap();
    let g = sample_ggp_graph(&p, 19).unwrap().summary;
    assert!(g.d_star() >= 10_000);
    let target = -0.5 * 2f64.ln();
    for &(sigma, tau, sfrac) in
        &[(0.3, 1.0, 0.3), (0.5, 0.8, 0.5), (0.7, 1.5, 0.2), (-0.2, 0.6, 0.7)]
    {
        let s = sfrac * (2.0 * g.d_star() as f64).sqrt();
        let phi = Params::new(sigma, tau, s).unwrap();
        let gap = saddle_gap(&phi, &g, QUAD_HALF_WIDTH, 2048).unwrap();
        assert!(
            (gap - target).abs() <= 0.05,
            "gap {gap} vs {target} at sigma={sigma}, tau={tau}"
        );
    }
}

#[test]
fn f_and_g_shapes() {
    let mut u = TestUniform::new(1);
    for _ in 0..200 {
        let sigma = u.in_range(-3.0, 0.99);
        let eps = u.in_range(1e-6, 1.0 - 1e-6);
        assert!(f_func(sigma, eps) >= 1.0 - eps - 1e-12);
        assert!(g_func(sigma, eps) > 0.0);
    }
}

#[test]
fn inner_u_bar_residual_oracle() {
    let g = medium_graph();
    let mut u = TestUniform::new(9);
    let d = g.d_star() as f64;
    for _ in 0..50 {
        let sigma = u.in_range(-0.9, 0.9);
        let eps = u.in_range(1e-5, 0.5);
        let ub = inner_u_bar(sigma, eps, &g).unwrap();
        assert!(d_u_h(sigma, eps, ub, &g).abs() <= 1e-10 * d);
    }
}
