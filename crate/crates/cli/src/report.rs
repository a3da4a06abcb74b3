//! Deterministic report emission: per-seed CSV rows and an aggregate JSON
//! with one entry per criterion. Floats are serialized with a fixed
//! 17-significant-digit scientific format so identical runs produce
//! byte-identical files regardless of thread scheduling.

use std::fmt::Write as _;

use ggx_core::inference::{credible_interval, Coord, MleFit, PosteriorApprox};
use ggx_core::graphstats::DenseDiagnostics;
use serde::Serialize;

/// 17 significant digits, locale-independent.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "\"nan\"".into()
    } else if x > 0.0 {
        "\"inf\"".into()
    } else {
        "\"-inf\"".into()
    }
}

/// One per-replicate record, the fixed CSV schema of every experiment.
#[derive(Debug, Clone)]
pub struct Row {
    pub seed: u64,
    pub t: f64,
    pub n: u64,
    pub d_star: u64,
    pub sigma_hat: f64,
    pub tau_hat: f64,
    pub s_hat: f64,
    pub alpha_hat: f64,
    pub tau_star_emp: f64,
    pub flags: String,
}

pub const CSV_HEADER: &str =
    "seed,t,n,d_star,sigma_hat,tau_hat,s_hat,alpha_hat,tau_star_emp,flags";

impl Row {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.seed,
            fmt_f64(self.t),
            self.n,
            self.d_star,
            fmt_f64(self.sigma_hat),
            fmt_f64(self.tau_hat),
            fmt_f64(self.s_hat),
            fmt_f64(self.alpha_hat),
            fmt_f64(self.tau_star_emp),
            self.flags
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    AtMost,
    AtLeast,
}

/// One acceptance-style check inside an experiment.
#[derive(Debug, Clone)]
pub struct Criterion {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub direction: Direction,
    pub pass: bool,
}

impl Criterion {
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Criterion {
            name: name.into(),
            value,
            threshold,
            direction: Direction::AtMost,
            pass: value.is_finite() && value <= threshold,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Criterion {
            name: name.into(),
            value,
            threshold,
            direction: Direction::AtLeast,
            pass: value.is_finite() && value >= threshold,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub name: String,
    pub rows: Vec<Row>,
    pub criteria: Vec<Criterion>,
}

impl ExperimentOutcome {
    pub fn pass(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }

    pub fn csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.to_csv());
            out.push('\n');
        }
        out
    }

    /// Hand-rolled JSON so number formatting stays byte-stable.
    pub fn aggregate_json(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "{{\"experiment\":\"{}\",\"criteria\":[", self.name);
        for (i, c) in self.criteria.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let dir = match c.direction {
                Direction::AtMost => "<=",
                Direction::AtLeast => ">=",
            };
            let _ = write!(
                s,
                "{{\"name\":\"{}\",\"value\":{},\"threshold\":{},\"direction\":\"{}\",\"pass\":{}}}",
                c.name,
                fmt_f64(c.value),
                fmt_f64(c.threshold),
                dir,
                c.pass
            );
        }
        let _ = write!(s, "],\"replicates\":{},\"pass\":{}}}", self.rows.len(), self.pass());
        s
    }

    pub fn print_summary(&self) {
        for c in &self.criteria {
            let dir = match c.direction {
                Direction::AtMost => "<=",
                Direction::AtLeast => ">=",
            };
            println!(
                "[{}] {}: {:.6} {} {:.6}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.value,
                dir,
                c.threshold
            );
        }
    }
}

/// The `estimate` subcommand output.
#[derive(Debug, Serialize)]
pub struct EstimateReport {
    pub sigma_hat: f64,
    pub tau_hat: f64,
    pub s_hat: f64,
    pub s_star_t: f64,
    pub eps_hat: f64,
    pub u_hat: f64,
    pub psi_max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_star_emp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cov: Option<[[f64; 3]; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci: Option<CiBlock>,
    pub dense: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dense_diagnostics: Option<DenseDiagnostics>,
    pub flags: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct CiBlock {
    pub level: f64,
    pub sigma: (f64, f64),
    pub tau: (f64, f64),
    pub s: (f64, f64),
}

impl CiBlock {
    pub fn from_posterior(p: &PosteriorApprox, level: f64) -> ggx_core::Result<Self> {
        let gamma = 1.0 - level;
        Ok(CiBlock {
            level,
            sigma: credible_interval(p, Coord::Sigma, gamma)?,
            tau: credible_interval(p, Coord::Tau, gamma)?,
            s: credible_interval(p, Coord::S, gamma)?,
        })
    }
}

impl EstimateReport {
    pub fn from_fit(fit: &MleFit) -> Self {
        EstimateReport {
            sigma_hat: fit.sigma_hat,
            tau_hat: fit.tau_hat,
            s_hat: fit.s_hat,
            s_star_t: fit.s_star_t,
            eps_hat: fit.eps_hat,
            u_hat: fit.u_hat,
            psi_max: fit.psi_max,
            alpha_hat: None,
            tau_star_emp: None,
            cov: None,
            ci: None,
            dense: fit.boundary_flags.iter().any(|f| f == "sigma_lower_boundary"),
            dense_diagnostics: None,
            flags: fit.boundary_flags.clone(),
        }
    }
}
