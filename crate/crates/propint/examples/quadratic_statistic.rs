//! The quadratic statistic two ways: the O(n^2) pairwise form over the raw
//! observation sequence and the O(1) closed form in (n, k), which agree to
//! rounding error. Inverting the closed form at the critical value kappa
//! gives the quadratic confidence interval.
//!
//! Run with: cargo run --example quadratic_statistic

use propint::{
    ci_quadratic, stat_quadratic_closed, stat_quadratic_form, ConfidenceLevel, Counts,
};

fn main() {
    // 7 successes in 20 trials, tested against a null of p = 0.5
    let seq: Vec<bool> = (0..20).map(|i| i % 3 == 0).collect();
    let k = seq.iter().filter(|&&b| b).count() as u64;
    let c = Counts::new(20, k).unwrap();
    let p0 = 0.5;

    let pairwise = stat_quadratic_form(&seq, p0).unwrap();
    let closed = stat_quadratic_closed(c, p0).unwrap();
    println!("n = 20, k = {k}, null p = {p0}");
    println!("  pairwise form: {pairwise:.12}");
    println!("  closed form:   {closed:.12}");
    println!("  |difference| = {:.3e}", (pairwise - closed).abs());

    // the statistic can be negative; the chi-square reference assigns such
    // values cumulative probability zero
    let seq = vec![false, false, false, false, true];
    let s = stat_quadratic_form(&seq, 0.1).unwrap();
    println!("\nn = 5, k = 1, null p = 0.1: statistic = {s:.6} (negative is possible)");

    // sweep the statistic in p and watch it cross kappa exactly at the
    // interval endpoints
    let lv = ConfidenceLevel::new(0.95).unwrap();
    let kappa = lv.kappa();
    let ci = ci_quadratic(c_from(20, 7), lv).unwrap();
    println!("\nquadratic 95% interval for (n=20, k=7): [{:.7}, {:.7}]", ci.lower, ci.upper);
    println!("kappa = {kappa:.7}; statistic at selected p:");
    for p in [0.10, ci.lower, 0.35, ci.upper, 0.70] {
        let s = stat_quadratic_closed(c_from(20, 7), p).unwrap();
        let place = if (s - kappa).abs() < 1e-6 {
            "= kappa (endpoint)"
        } else if s < kappa {
            "< kappa (inside)"
        } else {
            "> kappa (outside)"
        };
        println!("  p = {p:<20} stat = {s:>12.7}  {place}");
    }
}

fn c_from(n: u64, k: u64) -> Counts {
    Counts::new(n, k).unwrap()
}
