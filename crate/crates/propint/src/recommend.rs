//! Method recommendation derived from the exact-coverage comparisons across
//! the studied confidence levels.
//!
//! The decision thresholds are stated for the true proportion; callers pass a
//! reference proportion (often an observed one), and the rationale carries
//! that caveat so downstream reports do not overclaim.

use crate::error::{Error, Result};
use crate::intervals::Method;
use crate::numerics::ConfidenceLevel;

/// Levels at which the comparison was actually carried out.
const STUDIED_LEVELS: [f64; 3] = [0.90, 0.95, 0.99];

/// Slack on the proportion thresholds so that 1-ulp rounding in computing
/// min(p, 1-p) can never flip a regime; keeps recommend(n, p) exactly equal
/// to recommend(n, 1-p) in floating point.
const THRESHOLD_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Recommendation {
    pub preferred: Method,
    /// Methods with near-indistinguishable exact performance in the matched
    /// regime, preferred first. Never contains the Wald or Wald-CC forms.
    pub acceptable: Vec<Method>,
    pub rationale: String,
    /// The studied level the request was snapped to.
    pub level: f64,
}

/// Snaps to the nearest studied level; equidistant requests take the more
/// conservative (larger) one.
fn snap_level(level: f64) -> f64 {
    let mut best = STUDIED_LEVELS[0];
    for &cand in &STUDIED_LEVELS[1..] {
        if (level - cand).abs() <= (level - best).abs() {
            best = cand;
        }
    }
    best
}

pub fn recommend(n: u64, p_ref: f64, lv: ConfidenceLevel) -> Result<Recommendation> {
    if n == 0 {
        return Err(Error::ZeroTrials);
    }
    if !(0.0..=1.0).contains(&p_ref) {
        return Err(Error::ProbabilityOutOfRange(p_ref));
    }
    let snapped = snap_level(lv.level());
    // distance to the boundary drives every regime; symmetric in p by design
    let pm = p_ref.min(1.0 - p_ref);

    let near = |threshold: f64| pm <= threshold + THRESHOLD_SLACK;

    let (preferred, acceptable, regime): (Method, Vec<Method>, &str) = if snapped == 0.95 {
        if n <= 10 && near(0.2) {
            (
                Method::Quadratic,
                vec![Method::Quadratic],
                "extremely small sample near the boundary: only the quadratic interval keeps \
                 exact coverage near nominal",
            )
        } else if n > 10 && near(0.1) {
            (
                Method::Quadratic,
                vec![Method::Quadratic],
                "boundary proportion: the quadratic interval dominates in exact coverage",
            )
        } else {
            (
                Method::Quadratic,
                vec![Method::Quadratic, Method::Wilson, Method::AgrestiCoull],
                "away from the boundary the quadratic, Wilson, and Agresti-Coull intervals \
                 perform similarly; quadratic preferred for its boundary behaviour",
            )
        }
    } else if snapped == 0.90 {
        if n <= 10 && near(0.1) {
            (
                Method::Quadratic,
                vec![Method::Quadratic],
                "extremely small sample near the boundary at the 90% level: quadratic only",
            )
        } else {
            (
                Method::AgrestiCoull,
                vec![Method::AgrestiCoull, Method::Quadratic, Method::Wilson],
                "at the 90% level the Agresti-Coull interval tracks nominal coverage best, \
                 with quadratic and Wilson close behind",
            )
        }
    } else {
        (
            Method::Quadratic,
            vec![Method::Quadratic, Method::Wilson, Method::AgrestiCoull],
            "at the 99% level the quadratic interval is the overall proposal; Wilson and \
             Agresti-Coull remain acceptable",
        )
    };

    let mut rationale = String::new();
    if snapped != lv.level() {
        rationale.push_str(&format!(
            "requested level {} snapped to studied level {}; ",
            lv.level(),
            snapped
        ));
    }
    rationale.push_str(regime);
    rationale.push_str(
        "; thresholds are stated for the true proportion and were applied to the supplied \
         reference proportion",
    );

    Ok(Recommendation { preferred, acceptable, rationale, level: snapped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lv(level: f64) -> ConfidenceLevel {
        ConfidenceLevel::new(level).unwrap()
    }

    #[test]
    fn extremely_small_sample_is_quadratic_only() {
        let r = recommend(8, 0.1, lv(0.95)).unwrap();
        assert_eq!(r.preferred, Method::Quadratic);
        assert_eq!(r.acceptable, vec![Method::Quadratic]);
        assert_eq!(r.level, 0.95);
    }

    #[test]
    fn boundary_proportion_is_quadratic_only() {
        let r = recommend(50, 0.05, lv(0.95)).unwrap();
        assert_eq!(r.preferred, Method::Quadratic);
        assert_eq!(r.acceptable, vec![Method::Quadratic]);
    }

    #[test]
    fn moderate_regime_has_three_acceptable_methods() {
        let r = recommend(50, 0.3, lv(0.95)).unwrap();
        assert_eq!(r.preferred, Method::Quadratic);
        assert_eq!(
            r.acceptable,
            vec![Method::Quadratic, Method::Wilson, Method::AgrestiCoull]
        );
    }

    #[test]
    fn level_90_moderate_prefers_agresti_coull() {
        let r = recommend(50, 0.3, lv(0.90)).unwrap();
        assert_eq!(r.preferred, Method::AgrestiCoull);
        assert!(r.acceptable.contains(&Method::Quadratic));
        assert!(r.acceptable.contains(&Method::Wilson));
        let small = recommend(8, 0.05, lv(0.90)).unwrap();
        assert_eq!(small.acceptable, vec![Method::Quadratic]);
    }

    #[test]
    fn level_99_prefers_quadratic() {
        let r = recommend(30, 0.4, lv(0.99)).unwrap();
        assert_eq!(r.preferred, Method::Quadratic);
        assert_eq!(r.acceptable.len(), 3);
    }

    #[test]
    fn regime_boundaries_are_closed_on_the_quadratic_side() {
        // pm = 0.2 at n = 10 still counts as extremely small
        let r = recommend(10, 0.2, lv(0.95)).unwrap();
        assert_eq!(r.acceptable, vec![Method::Quadratic]);
        let r2 = recommend(10, 0.8, lv(0.95)).unwrap();
        assert_eq!(r2.acceptable, vec![Method::Quadratic]);
        // n = 11 with pm = 0.1 takes the boundary-proportion branch
        let r3 = recommend(11, 0.1, lv(0.95)).unwrap();
        assert_eq!(r3.acceptable, vec![Method::Quadratic]);
        // just past both thresholds the acceptable set opens up
        let r4 = recommend(11, 0.101, lv(0.95)).unwrap();
        assert_eq!(r4.acceptable.len(), 3);
    }

    #[test]
    fn off_grid_levels_snap_with_a_note() {
        let r = recommend(50, 0.3, lv(0.93)).unwrap();
        assert_eq!(r.level, 0.95);
        assert!(r.rationale.contains("snapped"));
        // equidistant 0.97 prefers the larger studied level
        let r2 = recommend(50, 0.3, lv(0.97)).unwrap();
        assert_eq!(r2.level, 0.99);
        let r3 = recommend(50, 0.3, lv(0.905)).unwrap();
        assert_eq!(r3.level, 0.90);
        // exact studied levels carry no snap note
        let r4 = recommend(50, 0.3, lv(0.95)).unwrap();
        assert!(!r4.rationale.contains("snapped"));
    }

    #[test]
    fn rationale_carries_the_true_p_caveat() {
        let r = recommend(20, 0.5, lv(0.95)).unwrap();
        assert!(r.rationale.contains("reference proportion"));
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(recommend(0, 0.5, lv(0.95)).is_err());
        assert!(recommend(10, 1.2, lv(0.95)).is_err());
        assert!(recommend(10, -0.1, lv(0.95)).is_err());
    }

    proptest! {
        #[test]
        fn symmetric_in_p(n in 1u64..300, p in 0.0f64..=1.0,
                          li in 0usize..3) {
            let level = [0.90f64, 0.95, 0.99][li];
            let a = recommend(n, p, lv(level)).unwrap();
            let b = recommend(n, 1.0 - p, lv(level)).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn wald_never_acceptable_and_preferred_is_acceptable(
            n in 1u64..300, p in 0.0f64..=1.0, level in 0.6f64..0.999) {
            let r = recommend(n, p, lv(level)).unwrap();
            prop_assert!(!r.acceptable.contains(&Method::Wald));
            prop_assert!(!r.acceptable.contains(&Method::WaldCc));
            prop_assert!(!r.acceptable.contains(&Method::ClopperPearson));
            prop_assert!(r.acceptable.contains(&r.preferred));
            prop_assert_eq!(r.acceptable[0], r.preferred);
        }
    }
}
