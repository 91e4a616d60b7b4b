//! All six interval constructions side by side for one observed dataset,
//! including the boundary cases where the Wald interval degenerates or
//! escapes [0, 1].
//!
//! Run with: cargo run --example six_intervals

use propint::{construct, ConfidenceLevel, Counts, Method};

fn print_row(m: Method, c: Counts, lv: ConfidenceLevel) {
    let ci = construct(m, c, lv).unwrap();
    let mut flags = String::new();
    if ci.degenerate {
        flags.push_str(" degenerate");
    }
    if ci.overshoot {
        flags.push_str(" overshoot");
    }
    println!(
        "  {:<15} [{:>10.7}, {:>10.7}]  width {:.7}{}",
        m.to_string(),
        ci.lower,
        ci.upper,
        ci.width(),
        flags
    );
}

fn main() {
    let lv = ConfidenceLevel::new(0.95).unwrap();

    // 2 events out of 10 trials: small n, moderate phat
    let c = Counts::new(10, 2).unwrap();
    println!("n = 10, k = 2, level 0.95 (phat = {}):", c.p_hat());
    for m in Method::ALL {
        print_row(m, c, lv);
    }

    // zero events: the Wald interval collapses to a point at 0
    let c = Counts::new(25, 0).unwrap();
    println!("\nn = 25, k = 0, level 0.95 (no events observed):");
    for m in Method::ALL {
        print_row(m, c, lv);
    }

    // a rare-event subgroup of trial size: Wald dips below zero, the
    // quadratic and exact methods stay inside [0, 1]
    let c = Counts::new(90, 3).unwrap();
    println!("\nn = 90, k = 3, level 0.95 (rare events):");
    for m in Method::ALL {
        print_row(m, c, lv);
    }
}
