//! Degree-histogram sufficient statistics and model-free estimators.
//!
//! A multigraph without isolated vertices is summarized by `N` (node count),
//! `D*` (degree sum, twice the edge count up to self-loops) and the counts
//! `N_j` of nodes with degree `j`. Everything the likelihood needs is a
//! function of these.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special;

/// Degrees above this switch `C_t` evaluation from the dense tail-count sum
/// to the run-length form with log-gamma differences (algebraically equal).
const DENSE_TAIL_LIMIT: u64 = 1 << 16;

/// Sufficient statistic of an observed multigraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphSummaryJson", into = "GraphSummaryJson")]
pub struct GraphSummary {
    n: u64,
    d_star: u64,
    /// (degree, count) pairs, strictly increasing degrees, counts ≥ 1.
    histogram: Vec<(u64, u64)>,
    /// Dense tail counts `c_k = Σ_{j>k} N_j` for `k = 1..max_degree`;
    /// left empty when the maximum degree exceeds [`DENSE_TAIL_LIMIT`].
    #[serde(skip)]
    tail_counts: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct GraphSummaryJson {
    n: u64,
    d_star: u64,
    histogram: Vec<(u64, u64)>,
}

impl From<GraphSummary> for GraphSummaryJson {
    fn from(g: GraphSummary) -> Self {
        GraphSummaryJson { n: g.n, d_star: g.d_star, histogram: g.histogram }
    }
}

impl TryFrom<GraphSummaryJson> for GraphSummary {
    type Error = Error;
    fn try_from(j: GraphSummaryJson) -> Result<Self> {
        let g = GraphSummary::from_histogram(j.histogram)?;
        if g.n != j.n || g.d_star != j.d_star {
            return Err(Error::invalid("histogram inconsistent with n/d_star"));
        }
        Ok(g)
    }
}

impl GraphSummary {
    /// Build from raw degrees; every degree must be ≥ 1.
    pub fn from_degrees(degrees: &[u64]) -> Result<Self> {
        if degrees.contains(&0) {
            return Err(Error::invalid("degree 0 present: graphs have no isolated vertices"));
        }
        let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
        for &d in degrees {
            *hist.entry(d).or_insert(0) += 1;
        }
        Self::from_histogram(hist.into_iter().collect())
    }

    /// Build from (degree, count) pairs; degrees need not be sorted.
    pub fn from_histogram(mut histogram: Vec<(u64, u64)>) -> Result<Self> {
        histogram.retain(|&(_, c)| c > 0);
        histogram.sort_unstable();
        for w in histogram.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::invalid("duplicate degree key in histogram"));
            }
        }
        if histogram.iter().any(|&(j, _)| j == 0) {
            return Err(Error::invalid("degree 0 present: graphs have no isolated vertices"));
        }
        let n = histogram.iter().map(|&(_, c)| c).sum();
        let d_star = histogram
            .iter()
            .map(|&(j, c)| j.checked_mul(c).expect("degree sum overflow"))
            .sum();
        let tail_counts = Self::build_tail_counts(&histogram);
        Ok(GraphSummary { n, d_star, histogram, tail_counts })
    }

    fn build_tail_counts(histogram: &[(u64, u64)]) -> Vec<u64> {
        let max_degree = histogram.last().map_or(0, |&(j, _)| j);
        if max_degree == 0 || max_degree > DENSE_TAIL_LIMIT {
            return Vec::new();
        }
        // c_k for k = 1..=max_degree; c_{max_degree} = 0.
        let mut c = vec![0u64; max_degree as usize];
        let mut acc = 0u64;
        let mut hist_iter = histogram.iter().rev().peekable();
        for k in (1..=max_degree).rev() {
            c[(k - 1) as usize] = acc;
            while let Some(&&(j, cnt)) = hist_iter.peek() {
                if j == k {
                    acc += cnt;
                    hist_iter.next();
                } else {
                    break;
                }
            }
        }
        c
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Degree sum `D* = Σ_j j N_j`.
    pub fn d_star(&self) -> u64 {
        self.d_star
    }

    pub fn histogram(&self) -> &[(u64, u64)] {
        &self.histogram
    }

    pub fn max_degree(&self) -> u64 {
        self.histogram.last().map_or(0, |&(j, _)| j)
    }

    /// Number of degree-1 nodes `N_{t,1}`.
    pub fn n1(&self) -> u64 {
        self.count_at(1)
    }

    pub fn count_at(&self, degree: u64) -> u64 {
        self.histogram
            .binary_search_by_key(&degree, |&(j, _)| j)
            .map(|i| self.histogram[i].1)
            .unwrap_or(0)
    }

    /// Dense tail counts `c_k`, `k = 1..=max_degree` (empty above
    /// [`DENSE_TAIL_LIMIT`], where the run-length form is used instead).
    pub fn tail_counts(&self) -> &[u64] {
        &self.tail_counts
    }

    /// Tail-count runs: for each half-open degree interval `[a, b)` with a
    /// constant number `c` of nodes of degree > k, yields `(a, b, c)`.
    fn tail_runs(&self) -> impl Iterator<Item = (u64, u64, u64)> + '_ {
        let mut above = self.n;
        let mut prev = 1u64;
        let mut idx = 0usize;
        std::iter::from_fn(move || {
            while idx < self.histogram.len() {
                let (j, cnt) = self.histogram[idx];
                idx += 1;
                let run = (prev, j, above);
                above -= cnt;
                prev = j;
                if run.1 > run.0 && run.2 > 0 {
                    return Some(run);
                }
            }
            None
        })
    }

    /// CSV export of `(degree, count)` pairs.
    pub fn write_degree_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "degree,count")?;
        for &(j, c) in &self.histogram {
            writeln!(w, "{j},{c}")?;
        }
        Ok(())
    }
}

/// Build the sufficient statistic from a degree list.
pub fn summarize(degrees: &[u64]) -> Result<GraphSummary> {
    GraphSummary::from_degrees(degrees)
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma < 1.0) || !sigma.is_finite() {
        return Err(Error::domain("sigma must be < 1"));
    }
    Ok(())
}

/// `C_t(σ) = Σ_j N_j Σ_{k=1}^{j-1} log(k-σ) = Σ_k c_k log(k-σ)`.
pub fn c_t(sigma: f64, g: &GraphSummary) -> Result<f64> {
    check_sigma(sigma)?;
    if !g.tail_counts.is_empty() {
        let mut acc = 0.0;
        for (k, &c) in g.tail_counts.iter().enumerate() {
            if c == 0 {
                break;
            }
            acc += c as f64 * ((k + 1) as f64 - sigma).ln();
        }
        return Ok(acc);
    }
    // Run-length form: Σ_runs c · [lnΓ(b-σ) - lnΓ(a-σ)].
    Ok(g
        .tail_runs()
        .map(|(a, b, c)| {
            c as f64 * (special::ln_gamma(b as f64 - sigma) - special::ln_gamma(a as f64 - sigma))
        })
        .sum())
}

/// `C_t'(σ) = -Σ_k c_k/(k-σ)`.
pub fn c_t_d1(sigma: f64, g: &GraphSummary) -> Result<f64> {
    check_sigma(sigma)?;
    if !g.tail_counts.is_empty() {
        let mut acc = 0.0;
        for (k, &c) in g.tail_counts.iter().enumerate() {
            if c == 0 {
                break;
            }
            acc -= c as f64 / ((k + 1) as f64 - sigma);
        }
        return Ok(acc);
    }
    Ok(-g
        .tail_runs()
        .map(|(a, b, c)| {
            c as f64 * (special::digamma(b as f64 - sigma) - special::digamma(a as f64 - sigma))
        })
        .sum::<f64>())
}

/// `C_t''(σ) = -Σ_k c_k/(k-σ)²` (< 0 whenever some degree ≥ 2).
pub fn c_t_d2(sigma: f64, g: &GraphSummary) -> Result<f64> {
    check_sigma(sigma)?;
    if !g.tail_counts.is_empty() {
        let mut acc = 0.0;
        for (k, &c) in g.tail_counts.iter().enumerate() {
            if c == 0 {
                break;
            }
            let d = (k + 1) as f64 - sigma;
            acc -= c as f64 / (d * d);
        }
        return Ok(acc);
    }
    Ok(g
        .tail_runs()
        .map(|(a, b, c)| {
            c as f64 * (special::trigamma(b as f64 - sigma) - special::trigamma(a as f64 - sigma))
        })
        .sum())
}

/// Solve `Σ_j N_j Σ_{k<j} α/(k-α) = N`, i.e. `-α C_t'(α) = N`, for
/// `α ∈ (0,1)`. The left side is strictly increasing, 0 at α→0 and +∞ at
/// α→1, so the root is unique; it requires some node of degree ≥ 2.
pub fn solve_alpha_hat(g: &GraphSummary) -> Result<f64> {
    if g.n == 0 {
        return Err(Error::invalid("empty graph"));
    }
    if g.n1() == g.n {
        return Err(Error::NoSolution("N_{t,1} = N".into()));
    }
    let h = |alpha: f64| -> Result<f64> { Ok(-alpha * c_t_d1(alpha, g)? - g.n as f64) };
    let mut lo = 1e-9;
    let mut hi = 1.0 - 1e-9;
    if h(lo)? > 0.0 {
        return Ok(lo);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let alpha = 0.5 * (lo + hi);
    let resid = h(alpha)?;
    if resid.abs() > 1e-10 * g.n as f64 {
        return Err(Error::numeric(format!(
            "alpha_hat residual {resid:.3e} exceeds tolerance"
        )));
    }
    Ok(alpha)
}

/// Empirical sparsity scale `√(2D*) (αN/D*)^{1/(1-α)}`.
pub fn empirical_tau_star(alpha: f64, g: &GraphSummary) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain("alpha must be in (0,1)"));
    }
    let n = g.n as f64;
    let d = g.d_star as f64;
    Ok((2.0 * d).sqrt() * (alpha * n / d).powf(1.0 / (1.0 - alpha)))
}

/// Least-squares slope/intercept of `log D*` on `log N`.
pub fn sparsity_fit(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 3 {
        return Err(Error::invalid("sparsity_fit needs at least 3 points"));
    }
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|&(n, d)| {
            if n <= 0.0 || d <= 0.0 {
                Err(Error::domain("sparsity_fit needs positive N and D*"))
            } else {
                Ok((n.ln(), d.ln()))
            }
        })
        .collect::<Result<_>>()?;
    let m = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx <= 1e-12 * m {
        return Err(Error::domain("degenerate ladder: N does not vary"));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    Ok((slope, mean_y - slope * mean_x))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DenseDiagnostics {
    /// `D* / N^{2-c}` — bounded away from 0 along a ladder in the dense regime.
    pub density_ratio: f64,
    /// `Σ_{j≥2} N_j log j / (N log D*)`.
    pub loggedness: f64,
}

/// Diagnostics for the dense-regime condition.
pub fn dense_diagnostics(g: &GraphSummary, c: f64) -> Result<DenseDiagnostics> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::domain("c must be in (0,1)"));
    }
    if g.d_star < 2 {
        return Err(Error::invalid("dense_diagnostics needs D* >= 2"));
    }
    let n = g.n as f64;
    let d = g.d_star as f64;
    let log_sum: f64 = g
        .histogram
        .iter()
        .filter(|&&(j, _)| j >= 2)
        .map(|&(j, cnt)| cnt as f64 * (j as f64).ln())
        .sum();
    Ok(DenseDiagnostics {
        density_ratio: d / n.powf(2.0 - c),
        loggedness: log_sum / (n * d.ln()),
    })
}

/// Karlin–Rouault pmf `p_j = α Γ(j-α) / (j! Γ(1-α))` via the stable
/// recurrence `p_1 = α`, `p_{j+1} = p_j (j-α)/(j+1)`.
pub fn karlin_rouault_pmf(alpha: f64, j: u64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain("alpha must be in (0,1)"));
    }
    if j < 1 {
        return Err(Error::domain("j must be >= 1"));
    }
    let mut p = alpha;
    let mut k = 1u64;
    while k < j {
        p *= (k as f64 - alpha) / (k as f64 + 1.0);
        k += 1;
    }
    Ok(p)
}

/// Karlin–Rouault tail `P(X > j) = Γ(j+1-α)/(Γ(j+1) Γ(1-α))`; equals the
/// partial-sum complement of the recurrence exactly.
pub fn karlin_rouault_tail(alpha: f64, j: u64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain("alpha must be in (0,1)"));
    }
    let x = (j + 1) as f64;
    if x <= 1e4 {
        Ok((special::ln_gamma(x - alpha) - special::ln_gamma(x) - special::ln_gamma(1.0 - alpha))
            .exp())
    } else {
        // lnΓ(x-α) - lnΓ(x) by the digamma expansion; avoids cancellation
        // between two huge log-gammas.
        let h = -alpha;
        let d = h * special::digamma(x) + 0.5 * h * h * special::trigamma(x)
            - h * h * h / (6.0 * x * x);
        Ok((d - special::ln_gamma(1.0 - alpha)).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn summarize_small_cases() {
        let g = summarize(&[2, 2, 2]).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.d_star(), 6);
        assert_eq!(g.histogram(), &[(2, 3)]);
        let g = summarize(&[1, 1, 1, 1]).unwrap();
        assert_eq!((g.n(), g.d_star()), (4, 4));
        assert_eq!(g.histogram(), &[(1, 4)]);
        assert!(summarize(&[1, 0, 2]).is_err());
    }

    #[test]
    fn tail_counts_match_definition() {
        let g = summarize(&[1, 1, 2, 3, 3, 7]).unwrap();
        // c_k = #{degrees > k} for k=1..=7
        assert_eq!(g.tail_counts(), &[4, 3, 1, 1, 1, 1, 0]);
    }

    #[test]
    fn c_t_single_term_and_flat() {
        let g = GraphSummary::from_histogram(vec![(2, 3)]).unwrap();
        assert_relative_eq!(c_t(0.5, &g).unwrap(), 3.0 * 0.5f64.ln(), max_relative = 1e-14);
        let flat = GraphSummary::from_histogram(vec![(1, 11)]).unwrap();
        for &s in &[-2.0, 0.0, 0.9] {
            assert_eq!(c_t(s, &flat).unwrap(), 0.0);
        }
        assert!(c_t(1.0, &g).is_err());
    }

    fn naive_c_t(sigma: f64, g: &GraphSummary) -> (f64, f64, f64) {
        let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for &(j, cnt) in g.histogram() {
            for k in 1..j {
                let x = k as f64 - sigma;
                v += cnt as f64 * x.ln();
                d1 -= cnt as f64 / x;
                d2 -= cnt as f64 / (x * x);
            }
        }
        (v, d1, d2)
    }

    #[test]
    fn c_t_matches_naive_double_sum() {
        let g = GraphSummary::from_histogram(vec![(1, 40), (2, 11), (3, 5), (9, 2), (40, 1)])
            .unwrap();
        for &s in &[-1.5, -0.3, 0.0, 0.2, 0.5, 0.9, 0.99] {
            let (v, d1, d2) = naive_c_t(s, &g);
            assert_relative_eq!(c_t(s, &g).unwrap(), v, max_relative = 1e-10, epsilon = 1e-10);
            assert_relative_eq!(c_t_d1(s, &g).unwrap(), d1, max_relative = 1e-10);
            assert_relative_eq!(c_t_d2(s, &g).unwrap(), d2, max_relative = 1e-10);
        }
    }

    #[test]
    fn c_t_run_length_form_matches_dense() {
        let mut g = GraphSummary::from_histogram(vec![(1, 40), (3, 7), (17, 3), (900, 1)]).unwrap();
        let dense: Vec<f64> = [-0.5, 0.0, 0.5, 0.9]
            .iter()
            .map(|&s| c_t(s, &g).unwrap())
            .collect();
        let dense_d1: Vec<f64> = [-0.5, 0.0, 0.5, 0.9]
            .iter()
            .map(|&s| c_t_d1(s, &g).unwrap())
            .collect();
        let dense_d2: Vec<f64> = [-0.5, 0.0, 0.5, 0.9]
            .iter()
            .map(|&s| c_t_d2(s, &g).unwrap())
            .collect();
        g.tail_counts.clear(); // force the run-length path
        for (i, &s) in [-0.5, 0.0, 0.5, 0.9].iter().enumerate() {
            assert_relative_eq!(c_t(s, &g).unwrap(), dense[i], max_relative = 1e-11);
            assert_relative_eq!(c_t_d1(s, &g).unwrap(), dense_d1[i], max_relative = 1e-11);
            assert_relative_eq!(c_t_d2(s, &g).unwrap(), dense_d2[i], max_relative = 1e-9);
        }
    }

    #[test]
    fn alpha_hat_closed_form_and_errors() {
        let g = GraphSummary::from_histogram(vec![(2, 500)]).unwrap();
        assert_relative_eq!(solve_alpha_hat(&g).unwrap(), 0.5, max_relative = 1e-9);
        let ones = GraphSummary::from_histogram(vec![(1, 500)]).unwrap();
        match solve_alpha_hat(&ones) {
            Err(Error::NoSolution(_)) => {}
            other => panic!("expected NoSolution, got {other:?}"),
        }
    }

    #[test]
    fn empirical_tau_star_arithmetic() {
        let g = GraphSummary::from_histogram(vec![(20, 1000)]).unwrap();
        assert_eq!(g.d_star(), 20_000);
        assert_relative_eq!(empirical_tau_star(0.5, &g).unwrap(), 0.125, max_relative = 1e-12);
    }

    #[test]
    fn sparsity_fit_exact_power_law() {
        let pts: Vec<(f64, f64)> = (1..6).map(|i| {
            let n = 100.0 * i as f64;
            (n, 3.0 * n.powf(1.5))
        }).collect();
        let (slope, intercept) = sparsity_fit(&pts).unwrap();
        assert_relative_eq!(slope, 1.5, max_relative = 1e-12);
        assert_relative_eq!(intercept, 3.0f64.ln(), max_relative = 1e-10);
        assert!(sparsity_fit(&pts[..2]).is_err());
        assert!(sparsity_fit(&[(10.0, 1.0), (10.0, 2.0), (10.0, 3.0)]).is_err());
    }

    #[test]
    fn dense_diagnostics_complete_graph() {
        let n = 100u64;
        let g = GraphSummary::from_histogram(vec![(n - 1, n)]).unwrap();
        let d = dense_diagnostics(&g, 0.1).unwrap();
        assert!(d.density_ratio > 1.0);
        assert_relative_eq!(d.loggedness, 99f64.ln() / 9900f64.ln(), max_relative = 1e-12);
        let ones = GraphSummary::from_histogram(vec![(1, 50)]).unwrap();
        assert_eq!(dense_diagnostics(&ones, 0.1).unwrap().loggedness, 0.0);
    }

    #[test]
    fn karlin_rouault_pmf_values() {
        for &a in &[0.1, 0.5, 0.9] {
            assert_relative_eq!(karlin_rouault_pmf(a, 1).unwrap(), a, max_relative = 1e-14);
        }
        assert_relative_eq!(karlin_rouault_pmf(0.5, 2).unwrap(), 0.125, max_relative = 1e-14);
        assert!(karlin_rouault_pmf(0.0, 1).is_err());
        assert!(karlin_rouault_pmf(0.5, 0).is_err());
    }

    #[test]
    fn karlin_rouault_tail_matches_recurrence_sums() {
        for &a in &[0.3, 0.5, 0.7] {
            let mut p = a;
            let mut acc = a;
            for j in 1..=1000u64 {
                let tail = karlin_rouault_tail(a, j).unwrap();
                assert_relative_eq!(tail, 1.0 - acc, max_relative = 1e-10, epsilon = 1e-12);
                p *= (j as f64 - a) / (j as f64 + 1.0);
                acc += p;
            }
        }
        // large-j asymptotic branch consistency around the switch
        let t1 = karlin_rouault_tail(0.4, 9_999).unwrap();
        let t2 = karlin_rouault_tail(0.4, 10_001).unwrap();
        assert!(t2 < t1 && (t1 / t2 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn kr_pmf_power_law_tail() {
        // p_j · j^{1+α} → α/Γ(1-α)
        let alpha = 0.5f64;
        let j = 100_000u64;
        let p = karlin_rouault_pmf(alpha, j).unwrap();
        let limit = alpha / special::gamma(1.0 - alpha);
        let scaled = p * (j as f64).powf(1.0 + alpha);
        assert!((scaled / limit - 1.0).abs() < 0.05);
    }

    proptest! {
        #[test]
        fn summary_identities(degs in proptest::collection::vec(1u64..200, 1..400)) {
            let g = summarize(&degs).unwrap();
            let n: u64 = g.histogram().iter().map(|&(_, c)| c).sum();
            let d: u64 = g.histogram().iter().map(|&(j, c)| j * c).sum();
            prop_assert_eq!(n, g.n());
            prop_assert_eq!(d, g.d_star());
            prop_assert_eq!(g.n(), degs.len() as u64);
            prop_assert_eq!(g.d_star(), degs.iter().sum::<u64>());
            // tail counts nonincreasing
            for w in g.tail_counts().windows(2) {
                prop_assert!(w[0] >= w[1]);
            }
        }

        #[test]
        fn alpha_objective_strictly_increasing(
            degs in proptest::collection::vec(1u64..60, 2..200),
        ) {
            prop_assume!(degs.iter().any(|&d| d >= 2));
            let g = summarize(&degs).unwrap();
            let mut prev = f64::NEG_INFINITY;
            for i in 1..40 {
                let a = i as f64 / 40.0;
                let v = -a * c_t_d1(a, &g).unwrap();
                prop_assert!(v > prev);
                prev = v;
            }
        }
    }
}
