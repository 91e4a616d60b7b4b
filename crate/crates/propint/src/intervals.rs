//! The six confidence interval constructions and the quadratic-form statistic.
//!
//! All constructors take validated [`Counts`] and a [`ConfidenceLevel`] and
//! return an [`Interval`] carrying degeneracy and overshoot flags. Bounds are
//! never clipped to [0, 1]; the flags let callers decide presentation while
//! coverage evaluation uses the interval exactly as defined.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{binomial_cdf, ConfidenceLevel};

/// Interval construction methods, identified by fixed lowercase tokens that
/// the CLI and CSV schemas reuse verbatim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Wald,
    WaldCc,
    Wilson,
    AgrestiCoull,
    ClopperPearson,
    Quadratic,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Wald,
        Method::WaldCc,
        Method::Wilson,
        Method::AgrestiCoull,
        Method::ClopperPearson,
        Method::Quadratic,
    ];

    /// The stable identifier used in CLI arguments and CSV/JSON output.
    pub fn id(self) -> &'static str {
        match self {
            Method::Wald => "wald",
            Method::WaldCc => "wald_cc",
            Method::Wilson => "wilson",
            Method::AgrestiCoull => "agresti_coull",
            Method::ClopperPearson => "clopper_pearson",
            Method::Quadratic => "quadratic",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s.trim() {
            "wald" => Ok(Method::Wald),
            "wald_cc" => Ok(Method::WaldCc),
            "wilson" => Ok(Method::Wilson),
            "agresti_coull" => Ok(Method::AgrestiCoull),
            "clopper_pearson" => Ok(Method::ClopperPearson),
            "quadratic" => Ok(Method::Quadratic),
            other => Err(Error::UnknownMethod(other.to_string())),
        }
    }
}

/// Observed trials and successes with `n >= 1` and `k <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Counts {
    n: u64,
    k: u64,
}

impl Counts {
    pub fn new(n: u64, k: u64) -> Result<Counts> {
        if n == 0 {
            return Err(Error::ZeroTrials);
        }
        if k > n {
            return Err(Error::SuccessesExceedTrials { n, k });
        }
        Ok(Counts { n, k })
    }

    pub fn n(self) -> u64 {
        self.n
    }

    pub fn k(self) -> u64 {
        self.k
    }

    /// Point estimate p̂ = k/n.
    pub fn p_hat(self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn q_hat(self) -> f64 {
        1.0 - self.p_hat()
    }
}

/// The augmented estimate underlying Wilson and Agresti-Coull:
/// x̃ = k + κ/2, ñ = n + κ, p̃ = x̃/ñ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugmentedCounts {
    pub x_tilde: f64,
    pub n_tilde: f64,
    pub p_tilde: f64,
}

impl AugmentedCounts {
    pub fn new(c: Counts, lv: ConfidenceLevel) -> AugmentedCounts {
        let x_tilde = c.k() as f64 + 0.5 * lv.kappa();
        let n_tilde = c.n() as f64 + lv.kappa();
        AugmentedCounts { x_tilde, n_tilde, p_tilde: x_tilde / n_tilde }
    }
}

/// Variant selector for the continuity-corrected Wald interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WaldCcForm {
    /// Correction pooled under the root: p̂ ± z·sqrt(p̂q̂/n + 1/(2n)).
    #[default]
    UnderRoot,
    /// Classical additive correction: p̂ ± (z·sqrt(p̂q̂/n) + 1/(2n)).
    Additive,
}

/// A two-sided confidence interval with its construction metadata.
///
/// `degenerate` is true iff `lower == upper`. `overshoot` is true iff the
/// unclipped bounds escape [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub method: Method,
    pub level: f64,
    pub lower: f64,
    pub upper: f64,
    pub degenerate: bool,
    pub overshoot: bool,
}

impl Interval {
    /// Closed-interval membership test, used by coverage evaluation.
    pub fn contains(&self, p: f64) -> bool {
        self.lower <= p && p <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Bounds within this distance of 0 or 1 are snapped onto the boundary so
/// that exact algebraic identities (Wilson lower at k=0, quadratic roots at
/// p ∈ {0,1}) survive floating-point rounding. Genuine overshoots are orders
/// of magnitude larger.
const BOUNDARY_SNAP: f64 = 1.0e-12;

fn snap(v: f64) -> f64 {
    if v.abs() <= BOUNDARY_SNAP {
        0.0
    } else if (v - 1.0).abs() <= BOUNDARY_SNAP {
        1.0
    } else {
        v
    }
}

fn assemble(method: Method, lv: ConfidenceLevel, lower: f64, upper: f64) -> Interval {
    let lower = snap(lower);
    let upper = snap(upper);
    debug_assert!(lower <= upper);
    Interval {
        method,
        level: lv.level(),
        lower,
        upper,
        degenerate: lower == upper,
        overshoot: lower < 0.0 || upper > 1.0,
    }
}

/// Wald interval p̂ ± z·sqrt(p̂q̂/n). Degenerates to zero width at k ∈ {0,n}.
pub fn ci_wald(c: Counts, lv: ConfidenceLevel) -> Interval {
    let ph = c.p_hat();
    let margin = lv.z() * (ph * c.q_hat() / c.n() as f64).sqrt();
    assemble(Method::Wald, lv, ph - margin, ph + margin)
}

/// Continuity-corrected Wald interval in its default form
/// p̂ ± z·sqrt(p̂q̂/n + 1/(2n)).
pub fn ci_wald_cc(c: Counts, lv: ConfidenceLevel) -> Interval {
    ci_wald_cc_with(c, lv, WaldCcForm::default())
}

/// Continuity-corrected Wald interval with an explicit form selection.
pub fn ci_wald_cc_with(c: Counts, lv: ConfidenceLevel, form: WaldCcForm) -> Interval {
    let ph = c.p_hat();
    let n = c.n() as f64;
    let var = ph * c.q_hat() / n;
    let margin = match form {
        WaldCcForm::UnderRoot => lv.z() * (var + 0.5 / n).sqrt(),
        WaldCcForm::Additive => lv.z() * var.sqrt() + 0.5 / n,
    };
    assemble(Method::WaldCc, lv, ph - margin, ph + margin)
}

/// Wilson score interval p̃ ± z·sqrt(n·p̂q̂ + κ/4)/ñ.
pub fn ci_wilson(c: Counts, lv: ConfidenceLevel) -> Interval {
    let a = AugmentedCounts::new(c, lv);
    let n = c.n() as f64;
    let margin = lv.z() * (n * c.p_hat() * c.q_hat() + 0.25 * lv.kappa()).sqrt() / a.n_tilde;
    assemble(Method::Wilson, lv, a.p_tilde - margin, a.p_tilde + margin)
}

/// Agresti-Coull interval p̃ ± z·sqrt(p̃(1−p̃)/ñ).
pub fn ci_agresti_coull(c: Counts, lv: ConfidenceLevel) -> Interval {
    let a = AugmentedCounts::new(c, lv);
    let margin = lv.z() * (a.p_tilde * (1.0 - a.p_tilde) / a.n_tilde).sqrt();
    assemble(Method::AgrestiCoull, lv, a.p_tilde - margin, a.p_tilde + margin)
}

/// Clopper-Pearson exact interval, solved by bisection on the binomial tail
/// sums. Endpoint accuracy is well below the 1e-10 contract (50 halvings).
pub fn ci_clopper_pearson(c: Counts, lv: ConfidenceLevel) -> Interval {
    let n = c.n();
    let k = c.k();
    let half_alpha = 0.5 * lv.alpha();
    // lower: P(X >= k; p) = alpha/2, i.e. cdf(n, k-1, p) = 1 - alpha/2
    let lower = if k == 0 {
        0.0
    } else {
        bisect_cdf(n, k - 1, 1.0 - half_alpha)
    };
    // upper: P(X <= k; p) = alpha/2
    let upper = if k == n { 1.0 } else { bisect_cdf(n, k, half_alpha) };
    assemble(Method::ClopperPearson, lv, lower, upper)
}

/// Solves binomial_cdf(n, k, p) = target for p. The cdf is strictly
/// decreasing in p on (0,1) for 0 <= k < n, so plain bisection applies.
fn bisect_cdf(n: u64, k: u64, target: f64) -> f64 {
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        // cdf cannot error here: mid is interior and k < n
        let v = binomial_cdf(n, k, mid).expect("interior cdf");
        if v > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The quadratic interval obtained by inverting ²χ(p) <= κ:
/// center ((n−1)p̂ + (κ−1)/2)/(n+κ−2), margin sqrt(nκp̂q̂ + (κ−1)²/4 − p̂q̂)
/// over the same denominator. Never overshoots for κ >= 1.
pub fn ci_quadratic(c: Counts, lv: ConfidenceLevel) -> Result<Interval> {
    let n = c.n() as f64;
    let kap = lv.kappa();
    // (n - 2) + κ, not (n + κ) - 2: at n = 1 with κ near 1 the latter rounds
    // at magnitude 2 and the cancellation inflates the bounds by ~1e-12
    let denom = kap + (n - 2.0);
    if denom <= 0.0 {
        return Err(Error::UnsupportedRegime(denom));
    }
    let ph = c.p_hat();
    let pq = ph * c.q_hat();
    let center = ((n - 1.0) * ph + 0.5 * (kap - 1.0)) / denom;
    // factored form of nκp̂q̂ + (κ−1)²/4 − p̂q̂; strictly positive when denom > 0
    let disc = (n * kap - 1.0) * pq + 0.25 * (kap - 1.0) * (kap - 1.0);
    if disc < 0.0 {
        if disc < -1.0e-9 {
            return Err(Error::Internal(format!(
                "quadratic discriminant {disc} negative at n={n}, k={}",
                c.k()
            )));
        }
        return Ok(assemble(Method::Quadratic, lv, center, center));
    }
    let margin = disc.sqrt() / denom;
    Ok(assemble(Method::Quadratic, lv, center - margin, center + margin))
}

/// Closed form of the quadratic statistic:
/// n(p̂−p)²/(pq) − (p̂/p + (1−p̂)/(1−p) − 2). Can be negative.
pub fn stat_quadratic_closed(c: Counts, p: f64) -> Result<f64> {
    check_open_unit(p)?;
    let n = c.n() as f64;
    let ph = c.p_hat();
    let q = 1.0 - p;
    let d = ph - p;
    Ok(n * d * d / (p * q) - (ph / p + (1.0 - ph) / q - 2.0))
}

/// Pairwise-sum form of the quadratic statistic over a raw binary sequence:
/// n⁻¹ Σ_{i≠j} (Bᵢ−p)(Bⱼ−p)/(pq) + 1, evaluated in O(n) through
/// Σ_{i≠j} aᵢaⱼ = (Σaᵢ)² − Σaᵢ².
pub fn stat_quadratic_form(b: &[bool], p: f64) -> Result<f64> {
    if b.is_empty() {
        return Err(Error::EmptySequence);
    }
    check_open_unit(p)?;
    let n = b.len() as f64;
    let q = 1.0 - p;
    let k = b.iter().filter(|&&x| x).count() as f64;
    let sum = k - n * p; // Σ(Bᵢ − p)
    let sum_sq = k * q * q + (n - k) * p * p; // Σ(Bᵢ − p)²
    Ok((sum * sum - sum_sq) / (n * p * q) + 1.0)
}

fn check_open_unit(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::ProbabilityNotInOpenUnit(p));
    }
    Ok(())
}

/// Constructs the interval for any method. The single fallible entry point
/// used by evaluation, simulation, and the CLI.
pub fn construct(method: Method, c: Counts, lv: ConfidenceLevel) -> Result<Interval> {
    Ok(match method {
        Method::Wald => ci_wald(c, lv),
        Method::WaldCc => ci_wald_cc(c, lv),
        Method::Wilson => ci_wilson(c, lv),
        Method::AgrestiCoull => ci_agresti_coull(c, lv),
        Method::ClopperPearson => ci_clopper_pearson(c, lv),
        Method::Quadratic => ci_quadratic(c, lv)?,
    })
}
