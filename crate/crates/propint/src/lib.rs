//! Confidence intervals for a binomial proportion, exact coverage
//! evaluation, and the quadratic (score-like) interval proposed as a drop-in
//! replacement for the Wald interval in small samples and near the boundary.
//!
//! The crate provides:
//!
//! - six interval constructions ([`intervals`]): Wald, continuity-corrected
//!   Wald, Wilson, Agresti-Coull, Clopper-Pearson, and the quadratic method,
//!   all on closed-form or bisection paths with no external math deps;
//! - exact coverage and expected margin-of-error evaluation over grids
//!   ([`evaluation`]), enumerating the binomial support rather than
//!   sampling;
//! - seeded Monte-Carlo coverage and an exact chi-square limit diagnostic
//!   ([`simulation`]);
//! - regime-based method recommendation ([`recommend()`]);
//! - subject-level CSV ingestion and batch subgroup analysis ([`dataio`]);
//! - a CLI front end ([`cli`]) exposing all of the above plus plot-ready
//!   figure data.
//!
//! Everything downstream of a seed is deterministic, and the acceptance
//! suite pins published reference values to frozen oracles.

pub mod cli;
pub mod dataio;
pub mod error;
pub mod evaluation;
pub mod intervals;
pub mod numerics;
pub mod recommend;
pub mod simulation;

pub use error::{Error, Result};
pub use evaluation::{exact_coverage, expected_margin, margin_profile, sweep, SweepGrid};
pub use intervals::{
    ci_agresti_coull, ci_clopper_pearson, ci_quadratic, ci_wald, ci_wald_cc, ci_wald_cc_with,
    ci_wilson, construct, stat_quadratic_closed, stat_quadratic_form, Counts, Interval, Method,
    WaldCcForm,
};
pub use numerics::{
    binomial_cdf, binomial_pmf_vector, normal_cdf, normal_inverse_cdf, ConfidenceLevel,
};
pub use recommend::{recommend, Recommendation};
pub use simulation::{limit_check, simulate_coverage, SplitMix64, DEFAULT_SEED};
