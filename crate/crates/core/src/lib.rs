//! Simulation and inference for sparse multigraphs with generalized-gamma
//! sociability weights.
//!
//! The crate has three layers:
//!
//! * generators for the graph families of interest ([`samplers`]), backed by
//!   the Lévy machinery of the generalized gamma process ([`levy`]);
//! * sufficient statistics and model-free degree diagnostics ([`graphstats`]);
//! * the saddlepoint likelihood core ([`likelihood`]) and the estimators built
//!   on top of it ([`inference`]): profile MLE, analytic observed information,
//!   and a Laplace posterior approximation with credible intervals.
//!
//! Everything is driven by the degree histogram: the number of nodes `N`, the
//! degree sum `D*` and the counts `N_j` of nodes with degree `j` form a
//! sufficient statistic for the three model parameters `(sigma, tau, s)`.

// Validation uses `!(x > 0.0)` style comparisons on purpose: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod graphstats;
pub mod inference;
pub mod levy;
pub mod likelihood;
pub mod rng;
pub mod samplers;
pub mod special;

pub use error::{Error, Result};
pub use graphstats::GraphSummary;
pub use inference::{MleFit, PosteriorApprox, PriorSpec};
pub use levy::GGPParams;
pub use likelihood::Params;
pub use samplers::SimulatedGraph;
