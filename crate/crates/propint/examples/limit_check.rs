//! Convergence of the quadratic statistic's exact distribution to its
//! chi-square(1) limit. The sup distance between the exact law (n + 1
//! support atoms) and the continuous reference falls as n grows; the L1
//! diagnostic (1/p + 1/q) / (sqrt(8) n) decays exactly like 1/n.
//!
//! Run with: cargo run --example limit_check

use propint::limit_check;

fn main() {
    let p = 0.3;
    println!("distance to the chi-square(1) limit at p = {p}:");
    println!("  {:<6} {:>14} {:>16}", "n", "sup distance", "L1 diagnostic");
    let mut prev: Option<f64> = None;
    for n in [20u64, 50, 200, 500, 2000] {
        let rep = limit_check(n, p, 0).unwrap();
        assert!(prev.is_none_or(|s| rep.sup_distance < s), "sup must shrink");
        prev = Some(rep.sup_distance);
        println!("  {:<6} {:>14.7} {:>16.7}", n, rep.sup_distance, rep.l1_diagnostic);
    }

    // skew slows the approach: compare p = 0.5 against p = 0.05 at fixed n
    println!("\nsup distance at n = 200 across p:");
    for p in [0.5, 0.3, 0.1, 0.05] {
        let rep = limit_check(200, p, 0).unwrap();
        println!("  p = {:<5} sup = {:.7}", p, rep.sup_distance);
    }

    // the sampled curve spans the full support (t up to ~466 here, from the
    // extreme k); the region where the two CDFs differ is t in [0, ~8], so
    // sample densely and print that window
    let rep = limit_check(200, 0.3, 2000).unwrap();
    println!("\nexact vs limiting CDF at (n = 200, p = 0.3):");
    println!("  {:>8} {:>10} {:>10}", "t", "exact", "chi2(1)");
    let mut next_t = 0.0;
    for pt in &rep.curve {
        if pt.t >= next_t && pt.t <= 8.5 {
            println!("  {:>8.3} {:>10.6} {:>10.6}", pt.t, pt.exact, pt.limit);
            next_t += 1.0;
        }
    }
}
