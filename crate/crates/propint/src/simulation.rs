//! Seeded Monte-Carlo coverage estimation and the deterministic chi-square
//! limit check.
//!
//! The RNG is a hand-rolled SplitMix64 so that results are bit-for-bit stable
//! across platforms and releases; every replication draws from its own
//! counter-derived substream, which makes results independent of how
//! replications might be partitioned across workers.

use crate::error::{Error, Result};
use crate::evaluation::IntervalTable;
use crate::intervals::{stat_quadratic_closed, Counts, Method};
use crate::numerics::{binomial_pmf_vector, chi2_1_cdf, ConfidenceLevel};

/// Default seed used by the CLI and the acceptance suite.
pub const DEFAULT_SEED: u64 = 20240501;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 generator (Steele, Lea, Flood 2014). Tiny state, full 64-bit
/// output, and trivially reproducible everywhere.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix(self.state)
    }

    /// Uniform draw in [0, 1) with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

fn mix(z: u64) -> u64 {
    let z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    let z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for replication `index`: the pair is hashed through two finalizer
/// rounds so adjacent indices land on uncorrelated stream positions.
fn substream_seed(seed: u64, index: u64) -> u64 {
    mix(mix(seed ^ index.wrapping_mul(GAMMA)))
}

/// Result of one Monte-Carlo coverage run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationReport {
    pub method: Method,
    pub n: u64,
    pub p: f64,
    pub level: f64,
    pub replications: u64,
    pub empirical_coverage: f64,
    /// sqrt(c(1-c)/N) with the empirical c.
    pub standard_error: f64,
    pub seed: u64,
}

/// Draws k ~ Binomial(n,p) per replication, rebuilds nothing (interval table
/// built once), and counts closed-interval membership of the true p.
pub fn simulate_coverage(
    method: Method,
    n: u64,
    p: f64,
    lv: ConfidenceLevel,
    replications: u64,
    seed: u64,
) -> Result<SimulationReport> {
    if replications == 0 {
        return Err(Error::ZeroReplications);
    }
    let table = IntervalTable::new(method, n, lv)?;
    // cdf inversion for small n, summed Bernoulli draws otherwise
    let cdf: Option<Vec<f64>> = if n <= 64 {
        let pmf = binomial_pmf_vector(n, p)?;
        let mut cum = Vec::with_capacity(pmf.len());
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for term in pmf {
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            cum.push(sum.min(1.0));
        }
        *cum.last_mut().expect("n+1 entries") = 1.0;
        Some(cum)
    } else {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        None
    };

    let mut covered: u64 = 0;
    for rep in 0..replications {
        let mut rng = SplitMix64::new(substream_seed(seed, rep));
        let k = match &cdf {
            Some(cum) => {
                let u = rng.next_f64();
                cum.partition_point(|&c| c <= u) as u64
            }
            None => (0..n).filter(|_| rng.next_f64() < p).count() as u64,
        };
        if table.interval(k).contains(p) {
            covered += 1;
        }
    }
    let c = covered as f64 / replications as f64;
    Ok(SimulationReport {
        method,
        n,
        p,
        level: lv.level(),
        replications,
        empirical_coverage: c,
        standard_error: (c * (1.0 - c) / replications as f64).sqrt(),
        seed,
    })
}

/// One sampled point of the CDF comparison curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub t: f64,
    /// Exact P(²χ <= t) under Binomial(n,p).
    pub exact: f64,
    /// Reference F_{χ²₁}(t), extended by 0 for t < 0.
    pub limit: f64,
}

/// Exact comparison of the law of ²χ with its χ²₁ limit.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitCheckReport {
    pub n: u64,
    pub p: f64,
    /// sup over t of |P(²χ <= t) − F_{χ²₁}(t)|, evaluated exactly.
    pub sup_distance: f64,
    /// (p⁻¹ + q⁻¹)/(2^{3/2} n).
    pub l1_diagnostic: f64,
    /// Optional sampled comparison curve (empty when resolution < 2).
    pub curve: Vec<CurvePoint>,
}

/// The reference CDF, extended left of the origin: the statistic can be
/// negative, where F_{χ²₁} is taken as 0.
fn limit_cdf(t: f64) -> f64 {
    if t < 0.0 {
        0.0
    } else {
        chi2_1_cdf(t).expect("nonnegative argument")
    }
}

/// Computes the exact law of ²χ on its n+1 support points and the exact sup
/// distance to the χ²₁ CDF. `t_grid_resolution` only sizes the sampled
/// comparison curve carried in the report; the sup itself never uses a grid.
pub fn limit_check(n: u64, p: f64, t_grid_resolution: usize) -> Result<LimitCheckReport> {
    if n == 0 {
        return Err(Error::ZeroTrials);
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::ProbabilityNotInOpenUnit(p));
    }
    let pmf = binomial_pmf_vector(n, p)?;
    let mut support: Vec<(f64, f64)> = Vec::with_capacity(pmf.len());
    for (k, &mass) in pmf.iter().enumerate() {
        let t = stat_quadratic_closed(Counts::new(n, k as u64)?, p)?;
        support.push((t, mass));
    }
    support.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite statistics"));
    // merge exactly equal support points (k and n−k coincide at p = 1/2)
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(support.len());
    for (t, w) in support {
        match merged.last_mut() {
            Some((mt, mw)) if *mt == t => *mw += w,
            _ => merged.push((t, w)),
        }
    }
    // cumulative masses and the two-sided gap at every jump
    let mut cum = Vec::with_capacity(merged.len());
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &(_, w) in &merged {
        let y = w - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        cum.push(sum.min(1.0));
    }
    *cum.last_mut().expect("nonempty") = 1.0;
    let mut sup = 0.0f64;
    for (i, &(t, _)) in merged.iter().enumerate() {
        let f = limit_cdf(t);
        let before = if i == 0 { 0.0 } else { cum[i - 1] };
        sup = sup.max((cum[i] - f).abs()).max((before - f).abs());
    }

    let curve = if t_grid_resolution >= 2 {
        let t_lo = merged[0].0.min(0.0);
        let t_hi = merged.last().expect("nonempty").0;
        let step = (t_hi - t_lo) / (t_grid_resolution - 1) as f64;
        (0..t_grid_resolution)
            .map(|j| {
                let t = t_lo + j as f64 * step;
                // exact CDF: cumulative mass of support points <= t
                let idx = merged.partition_point(|&(s, _)| s <= t);
                let exact = if idx == 0 { 0.0 } else { cum[idx - 1] };
                CurvePoint { t, exact, limit: limit_cdf(t) }
            })
            .collect()
    } else {
        Vec::new()
    };

    let q = 1.0 - p;
    Ok(LimitCheckReport {
        n,
        p,
        sup_distance: sup,
        l1_diagnostic: (1.0 / p + 1.0 / q) / (8f64.sqrt() * n as f64),
        curve,
    })
}
