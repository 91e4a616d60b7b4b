//! Exact coverage probability and expected margin of error, computed by
//! enumerating the binomial support rather than by simulation:
//!
//! C(n,p) = Σ_k 1{L(k) <= p <= U(k)} pmf(n,k,p)
//! E(ME)  = Σ_k (U(k) − L(k))/2 · pmf(n,k,p)
//!
//! plus grid sweeps for figure reproduction.

use crate::error::{Error, Result};
use crate::intervals::{construct, Counts, Interval, Method};
use crate::numerics::{binomial_pmf_vector, clamp_unit, ConfidenceLevel};

/// One evaluated grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationPoint {
    pub method: Method,
    pub level: f64,
    pub n: u64,
    pub p: f64,
    pub coverage: f64,
    pub expected_me: f64,
}

/// Cartesian evaluation grid. Output ordering is methods, then levels, then
/// n, then p, each in input order.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub methods: Vec<Method>,
    pub levels: Vec<ConfidenceLevel>,
    pub n_values: Vec<u64>,
    pub p_values: Vec<f64>,
}

impl SweepGrid {
    fn validate(&self) -> Result<()> {
        if self.methods.is_empty()
            || self.levels.is_empty()
            || self.n_values.is_empty()
            || self.p_values.is_empty()
        {
            return Err(Error::Internal("sweep grid has an empty axis".into()));
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n == 0) {
            let _ = n;
            return Err(Error::ZeroTrials);
        }
        if let Some(&p) = self.p_values.iter().find(|&&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        Ok(())
    }
}

/// All n+1 intervals of one method at fixed (n, level), indexed by k.
/// Hoisting this out of p-loops is what keeps sweeps fast; Clopper-Pearson
/// intervals in particular cost a bisection each.
pub(crate) struct IntervalTable {
    intervals: Vec<Interval>,
}

impl IntervalTable {
    pub(crate) fn new(method: Method, n: u64, lv: ConfidenceLevel) -> Result<IntervalTable> {
        let mut intervals = Vec::with_capacity(n as usize + 1);
        for k in 0..=n {
            intervals.push(construct(method, Counts::new(n, k)?, lv)?);
        }
        Ok(IntervalTable { intervals })
    }

    pub(crate) fn interval(&self, k: u64) -> &Interval {
        &self.intervals[k as usize]
    }

    /// Coverage and expected margin at one p, sharing a single pmf row.
    pub(crate) fn evaluate(&self, n: u64, p: f64) -> Result<(f64, f64)> {
        let pmf = binomial_pmf_vector(n, p)?;
        let mut cov = 0.0f64;
        let mut cov_c = 0.0f64;
        let mut me = 0.0f64;
        let mut me_c = 0.0f64;
        for (k, mass) in pmf.iter().enumerate() {
            let ci = &self.intervals[k];
            if ci.contains(p) {
                let y = mass - cov_c;
                let t = cov + y;
                cov_c = (t - cov) - y;
                cov = t;
            }
            let term = 0.5 * ci.width() * mass;
            let y = term - me_c;
            let t = me + y;
            me_c = (t - me) - y;
            me = t;
        }
        Ok((clamp_unit(cov, "coverage")?, me))
    }
}

/// Exact coverage probability C(n,p) for one method, using unclipped bounds
/// and closed-interval membership. p ∈ {0,1} is handled by the binomial
/// point mass.
pub fn exact_coverage(method: Method, n: u64, p: f64, lv: ConfidenceLevel) -> Result<f64> {
    let table = IntervalTable::new(method, n, lv)?;
    Ok(table.evaluate(n, p)?.0)
}

/// Exact expected margin of error (half-width) under Binomial(n,p).
pub fn expected_margin(method: Method, n: u64, p: f64, lv: ConfidenceLevel) -> Result<f64> {
    let table = IntervalTable::new(method, n, lv)?;
    Ok(table.evaluate(n, p)?.1)
}

/// The half-width a formula assigns as a function of the product p̂q̂ alone.
/// Supported for wald, quadratic, and the pooled-root wald_cc; the other
/// methods' margins depend on p̂ beyond p̂q̂.
pub fn margin_profile(method: Method, n: u64, phat_qhat: f64, lv: ConfidenceLevel) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroTrials);
    }
    if !(0.0..=0.25).contains(&phat_qhat) {
        return Err(Error::ProbabilityOutOfRange(phat_qhat));
    }
    let nf = n as f64;
    match method {
        Method::Wald => Ok(lv.z() * (phat_qhat / nf).sqrt()),
        Method::WaldCc => Ok(lv.z() * (phat_qhat / nf + 0.5 / nf).sqrt()),
        Method::Quadratic => {
            let kap = lv.kappa();
            // association matters at n = 1 with κ near 1; see ci_quadratic
            let denom = kap + (nf - 2.0);
            if denom <= 0.0 {
                return Err(Error::UnsupportedRegime(denom));
            }
            let disc = (nf * kap - 1.0) * phat_qhat + 0.25 * (kap - 1.0) * (kap - 1.0);
            Ok(disc.max(0.0).sqrt() / denom)
        }
        other => Err(Error::UnsupportedProfileMethod(other)),
    }
}

/// Evaluates the full Cartesian grid. Ordering: methods, levels, n, p.
pub fn sweep(grid: &SweepGrid) -> Result<Vec<EvaluationPoint>> {
    grid.validate()?;
    let mut out = Vec::with_capacity(
        grid.methods.len() * grid.levels.len() * grid.n_values.len() * grid.p_values.len(),
    );
    for &method in &grid.methods {
        for &lv in &grid.levels {
            for &n in &grid.n_values {
                let table = IntervalTable::new(method, n, lv)?;
                for &p in &grid.p_values {
                    let (coverage, expected_me) = table.evaluate(n, p)?;
                    out.push(EvaluationPoint {
                        method,
                        level: lv.level(),
                        n,
                        p,
                        coverage,
                        expected_me,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intervals::ci_quadratic;
    use proptest::prelude::*;

    fn lv95() -> ConfidenceLevel {
        ConfidenceLevel::new(0.95).unwrap()
    }

    fn assert_close(got: f64, want: f64, tol: f64) {
        assert!(
            (got - want).abs() <= tol,
            "got {got}, want {want} (tol {tol})"
        );
    }

    #[test]
    fn coverage_reference_values() {
        // wald at (10, 0.2): exactly k = 1..5 cover, total 8654848/9765625
        let c = exact_coverage(Method::Wald, 10, 0.2, lv95()).unwrap();
        assert_close(c, 0.8862564352, 1e-9);
        // quadratic at (10, 0.2): exactly k = 0..4 cover
        let c = exact_coverage(Method::Quadratic, 10, 0.2, lv95()).unwrap();
        assert_close(c, 0.9672065024, 1e-9);
    }

    #[test]
    fn coverage_identifies_covering_k_sets() {
        let lv = lv95();
        let wald = IntervalTable::new(Method::Wald, 10, lv).unwrap();
        let quad = IntervalTable::new(Method::Quadratic, 10, lv).unwrap();
        for k in 0..=10u64 {
            assert_eq!(wald.interval(k).contains(0.2), (1..=5).contains(&k), "wald k={k}");
            assert_eq!(quad.interval(k).contains(0.2), k <= 4, "quadratic k={k}");
        }
    }

    #[test]
    fn coverage_at_boundary_p() {
        // k=0 intervals of every method contain p=0 except none here; wald
        // degenerates to [0,0] which still contains 0
        for m in Method::ALL {
            let c = exact_coverage(m, 10, 0.0, lv95()).unwrap();
            assert_eq!(c, 1.0, "method {m} at p=0");
            let c = exact_coverage(m, 10, 1.0, lv95()).unwrap();
            assert_eq!(c, 1.0, "method {m} at p=1");
        }
        // agresti_coull's k=0 interval has lower < 0 and upper < 1, so it
        // contains 0; its k=n interval contains 1 symmetrically
    }

    #[test]
    fn expected_margin_reference_values() {
        assert_eq!(expected_margin(Method::Wald, 10, 0.0, lv95()).unwrap(), 0.0);
        assert_close(
            expected_margin(Method::Quadratic, 10, 0.0, lv95()).unwrap(),
            0.1199792550,
            1e-9,
        );
        // exhaustive k-sum oracle at (quadratic, 10, 0.2)
        let pmf = binomial_pmf_vector(10, 0.2).unwrap();
        let mut want = 0.0;
        for k in 0..=10u64 {
            let ci = ci_quadratic(Counts::new(10, k).unwrap(), lv95()).unwrap();
            want += 0.5 * ci.width() * pmf[k as usize];
        }
        let got = expected_margin(Method::Quadratic, 10, 0.2, lv95()).unwrap();
        assert_close(got, want, 1e-12);
        assert_close(got, 0.2250366689, 1e-9);
    }

    #[test]
    fn margin_profile_reference_values() {
        assert_eq!(margin_profile(Method::Wald, 10, 0.0, lv95()).unwrap(), 0.0);
        assert_close(
            margin_profile(Method::Quadratic, 10, 0.0, lv95()).unwrap(),
            0.1199792550,
            1e-9,
        );
        assert_close(
            margin_profile(Method::Wald, 100, 0.25, lv95()).unwrap(),
            0.0979981992,
            1e-9,
        );
        // the pooled-root continuity correction is a p̂q̂ function too
        let cc = margin_profile(Method::WaldCc, 10, 0.016, lv95()).unwrap();
        assert_close(cc, lv95().z() * (0.016f64 / 10.0 + 0.05).sqrt(), 1e-15);
    }

    #[test]
    fn margin_profile_rejects_other_methods() {
        for m in [Method::Wilson, Method::AgrestiCoull, Method::ClopperPearson] {
            assert!(matches!(
                margin_profile(m, 10, 0.1, lv95()),
                Err(Error::UnsupportedProfileMethod(_))
            ));
        }
        assert!(margin_profile(Method::Wald, 10, 0.3, lv95()).is_err());
        assert!(margin_profile(Method::Wald, 0, 0.1, lv95()).is_err());
    }

    #[test]
    fn margin_profile_matches_interval_half_width() {
        // at p̂q̂ taken from an actual (n,k), the profile equals the
        // constructed interval's half-width
        for (n, k) in [(10u64, 2u64), (25, 10), (90, 3)] {
            let c = Counts::new(n, k).unwrap();
            let v = c.p_hat() * c.q_hat();
            let wald = crate::intervals::ci_wald(c, lv95());
            assert_close(
                margin_profile(Method::Wald, n, v, lv95()).unwrap(),
                0.5 * wald.width(),
                1e-13,
            );
            let quad = ci_quadratic(c, lv95()).unwrap();
            assert_close(
                margin_profile(Method::Quadratic, n, v, lv95()).unwrap(),
                0.5 * quad.width(),
                1e-13,
            );
        }
    }

    #[test]
    fn oscillation_between_adjacent_n() {
        let a = exact_coverage(Method::Wald, 30, 0.1, lv95()).unwrap();
        let b = exact_coverage(Method::Wald, 31, 0.1, lv95()).unwrap();
        assert!((a - b).abs() > 0.005, "no oscillation: {a} vs {b}");
    }

    #[test]
    fn covering_set_is_constant_between_endpoints() {
        // the set {k : p ∈ CI_k} only changes at interval endpoints; between
        // consecutive sorted endpoints it is constant (the coverage value
        // itself still varies through the pmf weights)
        let lv = lv95();
        for method in [Method::Wald, Method::Quadratic, Method::Wilson] {
            let n = 23u64;
            let table = IntervalTable::new(method, n, lv).unwrap();
            let mut cuts: Vec<f64> = Vec::new();
            for k in 0..=n {
                let ci = table.interval(k);
                cuts.push(ci.lower);
                cuts.push(ci.upper);
            }
            cuts.retain(|c| (0.0..=1.0).contains(c));
            cuts.push(0.0);
            cuts.push(1.0);
            cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            cuts.dedup();
            let covering = |p: f64| -> Vec<u64> {
                (0..=n).filter(|&k| table.interval(k).contains(p)).collect()
            };
            for w in cuts.windows(2) {
                let (a, b) = (w[0], w[1]);
                if b - a < 1e-9 {
                    continue;
                }
                let reference = covering(0.5 * (a + b));
                for frac in [0.21, 0.5001, 0.83] {
                    let p = a + frac * (b - a);
                    assert_eq!(covering(p), reference, "{method} on ({a}, {b})");
                }
            }
        }
    }

    #[test]
    fn sweep_ordering_and_values() {
        let grid = SweepGrid {
            methods: vec![Method::Wald, Method::Quadratic],
            levels: vec![lv95()],
            n_values: vec![10, 20],
            p_values: vec![0.1, 0.2],
        };
        let pts = sweep(&grid).unwrap();
        assert_eq!(pts.len(), 8);
        let key: Vec<(Method, u64, f64)> = pts.iter().map(|e| (e.method, e.n, e.p)).collect();
        assert_eq!(
            key,
            vec![
                (Method::Wald, 10, 0.1),
                (Method::Wald, 10, 0.2),
                (Method::Wald, 20, 0.1),
                (Method::Wald, 20, 0.2),
                (Method::Quadratic, 10, 0.1),
                (Method::Quadratic, 10, 0.2),
                (Method::Quadratic, 20, 0.1),
                (Method::Quadratic, 20, 0.2),
            ]
        );
        assert_close(pts[1].coverage, 0.8862564352, 1e-9);
        assert_close(pts[5].coverage, 0.9672065024, 1e-9);
    }

    #[test]
    fn sweep_boundary_p_is_finite() {
        let grid = SweepGrid {
            methods: Method::ALL.to_vec(),
            levels: vec![lv95()],
            n_values: vec![7],
            p_values: vec![0.0, 1.0],
        };
        for pt in sweep(&grid).unwrap() {
            assert!(pt.coverage.is_finite() && pt.expected_me.is_finite());
        }
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let empty = SweepGrid {
            methods: vec![],
            levels: vec![lv95()],
            n_values: vec![10],
            p_values: vec![0.5],
        };
        assert!(sweep(&empty).is_err());
        let bad_p = SweepGrid {
            methods: vec![Method::Wald],
            levels: vec![lv95()],
            n_values: vec![10],
            p_values: vec![1.5],
        };
        assert!(sweep(&bad_p).is_err());
    }

    #[test]
    fn clopper_pearson_exactness_spot_check() {
        let lv = lv95();
        for n in [5u64, 13, 40] {
            let table = IntervalTable::new(Method::ClopperPearson, n, lv).unwrap();
            for i in 1..100u32 {
                let p = i as f64 / 100.0;
                let cov = table.evaluate(n, p).unwrap().0;
                assert!(
                    cov >= 0.95 - 1e-9,
                    "CP coverage {cov} below level at n={n} p={p}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn coverage_within_unit_interval(
            n in 1u64..=80,
            p in 0.0..=1.0f64,
            midx in 0usize..6,
        ) {
            let m = Method::ALL[midx];
            let (cov, me) = IntervalTable::new(m, n, lv95()).unwrap().evaluate(n, p).unwrap();
            prop_assert!((0.0..=1.0).contains(&cov));
            prop_assert!(me >= 0.0);
        }

        #[test]
        fn expected_me_bounded_by_max_half_width(n in 1u64..=60, p in 0.0..=1.0f64, midx in 0usize..6) {
            let m = Method::ALL[midx];
            let table = IntervalTable::new(m, n, lv95()).unwrap();
            let max_half = (0..=n)
                .map(|k| 0.5 * table.interval(k).width())
                .fold(0.0f64, f64::max);
            let me = table.evaluate(n, p).unwrap().1;
            prop_assert!(me <= max_half + 1e-12);
        }
    }
}
