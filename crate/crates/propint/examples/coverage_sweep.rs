//! Exact coverage probability and expected margin of error over a grid,
//! computed by enumerating the binomial support (no simulation error).
//! Reproduces the headline comparison: the Wald interval's coverage
//! collapses for small n and p near the boundary while the quadratic
//! interval holds close to nominal.
//!
//! Run with: cargo run --example coverage_sweep

use propint::{expected_margin, sweep, ConfidenceLevel, Method, SweepGrid};

const METHODS: [Method; 3] = [Method::Wald, Method::Quadratic, Method::Wilson];

fn main() {
    let grid = SweepGrid {
        methods: METHODS.to_vec(),
        levels: vec![ConfidenceLevel::new(0.95).unwrap()],
        n_values: vec![10, 30, 50, 100],
        p_values: vec![0.05, 0.1, 0.2],
    };
    let points = sweep(&grid).unwrap();
    let coverage_of = |m: Method, n: u64, p: f64| {
        points
            .iter()
            .find(|pt| pt.method == m && pt.n == n && pt.p == p)
            .unwrap()
            .coverage
    };

    println!("exact coverage of nominal 95% intervals");
    println!(
        "{:<5} {:<6} {:>10} {:>10} {:>10}",
        "n", "p", "wald", "quadratic", "wilson"
    );
    for &n in &grid.n_values {
        for &p in &grid.p_values {
            println!(
                "{:<5} {:<6} {:>10.7} {:>10.7} {:>10.7}",
                n,
                p,
                coverage_of(Method::Wald, n, p),
                coverage_of(Method::Quadratic, n, p),
                coverage_of(Method::Wilson, n, p)
            );
        }
    }

    // worst observed coverage per method over the grid
    println!();
    for m in METHODS {
        let worst = points
            .iter()
            .filter(|pt| pt.method == m)
            .min_by(|a, b| a.coverage.partial_cmp(&b.coverage).unwrap())
            .unwrap();
        println!(
            "worst case for {:<10} coverage {:.4} at (n = {}, p = {})",
            m.to_string(),
            worst.coverage,
            worst.n,
            worst.p
        );
    }

    // precision is the price of coverage: expected margins at one cell
    let lv = ConfidenceLevel::new(0.95).unwrap();
    println!("\nexpected margin of error at n = 30, p = 0.1:");
    for m in METHODS {
        let me = expected_margin(m, 30, 0.1, lv).unwrap();
        println!("  {:<10} {me:.7}", m.to_string());
    }
}
