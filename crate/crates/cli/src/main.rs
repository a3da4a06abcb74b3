//! `ggx` — simulate sparse multigraph models and fit the three-parameter
//! generalized-gamma graphex model to degree histograms.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ggx_cli::experiments::{run_experiment, ExperimentConfig, ExperimentName};
use ggx_cli::report::{CiBlock, EstimateReport};
use ggx_core::error::Error;
use ggx_core::graphstats;
use ggx_core::inference::{fit_mle, laplace_posterior_from_fit, FitOpts, PriorSpec};
use ggx_core::levy::GGPParams;
use ggx_core::samplers::{
    self, dc_er_theta_from_sparsity, sample_constrained_config_graph, sample_dc_er,
    sample_dense_er, sample_hollywood, sample_karlin_rouault_degrees,
    DegreePmf, ModelMeta, SimulatedGraph,
};

#[derive(Parser)]
#[command(name = "ggx", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate a graph model and write its summary as JSON.
    Simulate(SimulateArgs),
    /// Fit the model to a graph-summary JSON file.
    Estimate(EstimateArgs),
    /// Run a named experiment; writes CSV + aggregate JSON reports.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// ggp | hollywood | dc-er | config-kr | config-kr-unconstrained | dense-er
    #[arg(long)]
    model: String,
    /// GGP sparsity parameter σ₀ (also reused as the generic α for kr models)
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    /// GGP process size
    #[arg(long)]
    t: Option<f64>,
    /// weight truncation threshold override
    #[arg(long)]
    w_min: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Hollywood discount parameter
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    /// Hollywood edge count
    #[arg(long)]
    edges: Option<u64>,
    /// node count (dc-er, config-kr, dense-er)
    #[arg(long)]
    n: Option<u64>,
    /// edge probability (dense-er)
    #[arg(long)]
    p: Option<f64>,
    /// maximum degree for the constrained configuration model
    #[arg(long)]
    d_max: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// keep per-node weights in the output (ggp only)
    #[arg(long, default_value_t = false)]
    keep_weights: bool,
    /// output path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    /// graph JSON produced by `simulate` (or any {n, d_star, histogram} doc)
    #[arg(long)]
    input: PathBuf,
    /// credible-interval coverage level
    #[arg(long, default_value_t = 0.95)]
    ci: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// wellspecified | sparsity | hollywood | saddlepoint | bvm | dense | alphahat
    #[arg(long)]
    name: String,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    #[arg(long, default_value_t = 0.6)]
    alpha: f64,
    /// replicate count (0 = experiment default)
    #[arg(long, default_value_t = 0)]
    seeds: u64,
    /// report directory (default: $GGX_OUT_DIR or ./ggx-out)
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

const EXIT_USAGE: u8 = 2;
const EXIT_PREMISE: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Simulate(a) => simulate(&a),
        Cmd::Estimate(a) => estimate(&a),
        Cmd::Experiment(a) => experiment(&a),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Premise(e)) => {
            eprintln!("{e}");
            ExitCode::from(EXIT_PREMISE)
        }
        Err(CliError::Io(e)) => {
            eprintln!("io error: {e}");
            ExitCode::FAILURE
        }
    }
}

enum CliError {
    Usage(String),
    Premise(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::InvalidInput(_) => CliError::Usage(e.to_string()),
            other => CliError::Premise(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn require<T>(v: Option<T>, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{what} is required for this model")))
}

fn write_out(path: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => println!("{content}"),
    }
    Ok(())
}

fn simulate(a: &SimulateArgs) -> Result<ExitCode, CliError> {
    let graph: SimulatedGraph = match a.model.as_str() {
        "ggp" => {
            let sigma = require(a.sigma, "sigma")?;
            let tau = require(a.tau, "tau")?;
            let t = require(a.t, "t")?;
            let params = match a.w_min {
                Some(w) => GGPParams::with_w_min(sigma, tau, t, w)?,
                None => GGPParams::new(sigma, tau, t)?,
            };
            let opts = samplers::GgpSamplerOpts {
                keep_weights: a.keep_weights,
                ..Default::default()
            };
            samplers::sample_ggp_graph_opts(&params, a.seed, &opts)?
        }
        "hollywood" => {
            let alpha = a.alpha.or(a.sigma);
            let alpha = require(alpha, "alpha")?;
            let edges = require(a.edges, "edges")?;
            sample_hollywood(alpha, a.theta, edges, a.seed)?
        }
        "dc-er" => {
            let alpha = require(a.alpha.or(a.sigma), "alpha")?;
            let n = require(a.n, "n")?;
            let (theta, p_n) = dc_er_theta_from_sparsity(alpha, n)?;
            sample_dc_er(&theta, p_n, a.seed)?
        }
        "config-kr" => {
            let alpha = require(a.alpha.or(a.sigma), "alpha")?;
            let n = require(a.n, "n")?;
            let d_max = a
                .d_max
                .unwrap_or_else(|| (n as f64).powf(1.0 / (1.0 + alpha)).ceil() as u64);
            sample_constrained_config_graph(
                &DegreePmf::KarlinRouault { alpha },
                d_max,
                n,
                a.seed,
            )?
        }
        "config-kr-unconstrained" => {
            let alpha = require(a.alpha.or(a.sigma), "alpha")?;
            let n = require(a.n, "n")?;
            let degs = sample_karlin_rouault_degrees(alpha, n, a.seed)?;
            SimulatedGraph {
                summary: graphstats::summarize(&degs)?,
                weights: None,
                model: ModelMeta::KarlinRouault { alpha, n },
                seed: a.seed,
            }
        }
        "dense-er" => {
            let n = require(a.n, "n")?;
            let p = require(a.p, "p")?;
            sample_dense_er(n, p, a.seed)?
        }
        other => return Err(CliError::Usage(format!("unknown model '{other}'"))),
    };
    write_out(&a.out, &graph.to_json_string())?;
    Ok(ExitCode::SUCCESS)
}

fn estimate(a: &EstimateArgs) -> Result<ExitCode, CliError> {
    if !(a.ci > 0.0 && a.ci < 1.0) {
        return Err(CliError::Usage("--ci must be in (0,1)".into()));
    }
    let text = std::fs::read_to_string(&a.input)?;
    let graph = SimulatedGraph::from_json_str(&text).map_err(|e| CliError::Usage(e.to_string()))?;
    let g = &graph.summary;
    let fit = fit_mle(g, &FitOpts::default()).map_err(CliError::Premise)?;
    let mut report = EstimateReport::from_fit(&fit);
    report.alpha_hat = graphstats::solve_alpha_hat(g).ok();
    if let Some(alpha) = report.alpha_hat {
        report.tau_star_emp = graphstats::empirical_tau_star(alpha, g).ok();
    }
    if g.d_star() >= 2 {
        report.dense_diagnostics = graphstats::dense_diagnostics(g, 0.1).ok();
    }
    if fit.is_interior() {
        let post = laplace_posterior_from_fit(&fit, g, &PriorSpec::default())
            .map_err(CliError::Premise)?;
        report.cov = Some(post.cov);
        report.ci = Some(CiBlock::from_posterior(&post, a.ci).map_err(CliError::Premise)?);
    }
    let json = serde_json::to_string_pretty(&report).expect("serializable");
    write_out(&a.out, &json)?;
    Ok(ExitCode::SUCCESS)
}

fn experiment(a: &ExperimentArgs) -> Result<ExitCode, CliError> {
    let name = ExperimentName::parse(&a.name)
        .ok_or_else(|| CliError::Usage(format!("unknown experiment '{}'", a.name)))?;
    let mut cfg = ExperimentConfig::new(name);
    cfg.sigma0 = a.sigma;
    cfg.tau0 = a.tau;
    cfg.alpha = a.alpha;
    cfg.seeds = a.seeds;
    let out_dir = a
        .out_dir
        .clone()
        .or_else(|| std::env::var_os("GGX_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("ggx-out"));
    std::fs::create_dir_all(&out_dir)?;
    let outcome = run_experiment(&cfg)?;
    std::fs::write(out_dir.join(format!("{}.csv", outcome.name)), outcome.csv())?;
    std::fs::write(
        out_dir.join(format!("{}_aggregate.json", outcome.name)),
        outcome.aggregate_json(),
    )?;
    outcome.print_summary();
    println!(
        "experiment {}: {} ({} replicates, reports in {})",
        outcome.name,
        if outcome.pass() { "PASS" } else { "FAIL" },
        outcome.rows.len(),
        out_dir.display()
    );
    if outcome.pass() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::FAILURE)
    }
}
