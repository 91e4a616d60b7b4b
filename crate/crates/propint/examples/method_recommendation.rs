//! Regime-based method recommendation for a planned analysis: which
//! interval to use given the sample size, a reference proportion, and the
//! confidence level. Unstudied levels snap to the nearest studied one and
//! the snap is called out in the rationale.
//!
//! Run with: cargo run --example method_recommendation

use propint::recommend;
use propint::ConfidenceLevel;

fn show(n: u64, p: f64, level: f64) {
    let lv = ConfidenceLevel::new(level).unwrap();
    let rec = recommend(n, p, lv).unwrap();
    let acceptable: Vec<String> = rec.acceptable.iter().map(|m| m.to_string()).collect();
    println!("n = {n}, p_ref = {p}, level {level}:");
    println!("  preferred:  {}", rec.preferred);
    println!("  acceptable: {}", acceptable.join(", "));
    println!("  rationale:  {}", rec.rationale);
    println!();
}

fn main() {
    // small n near the boundary: the regime the quadratic method targets
    show(15, 0.03, 0.95);
    // moderate sample, central proportion: several methods perform alike
    show(100, 0.5, 0.95);
    // at 0.90 off the boundary the preference order changes
    show(100, 0.4, 0.90);
    // rare events at scale
    show(2000, 0.01, 0.99);
    // an unstudied level snaps to the nearest studied one
    show(50, 0.3, 0.93);
}
