//! Independent oracles for the integration suites. Everything here takes a
//! deliberately different computational path from the library: exact Pascal
//! binomials instead of log-gamma sums, textbook quadratic-formula roots
//! instead of the factored center/margin form, and plain product pmfs.

#![allow(dead_code)]

pub fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
    assert!(
        (got - want).abs() <= tol,
        "{what}: got {got}, want {want} (tol {tol})"
    );
}

/// Exact binomial coefficient from the Pascal recurrence in u128.
/// Overflow-free for n <= 127.
pub fn binom_u128(n: u64, k: u64) -> u128 {
    assert!(k <= n && n <= 127);
    let mut row: Vec<u128> = vec![1];
    for _ in 0..n {
        let mut next = vec![1u128; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row[k as usize]
}

/// Direct-product pmf oracle: C(n,k) p^k q^{n-k}. Fine at the desk scales
/// the suites use (n <= 120, p away from extreme underflow).
pub fn pmf_oracle(n: u64, k: u64, p: f64) -> f64 {
    binom_u128(n, k) as f64 * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
}

/// Coverage by direct summation of the oracle pmf over a covering predicate.
pub fn coverage_oracle(n: u64, p: f64, covers: impl Fn(u64) -> bool) -> f64 {
    (0..=n).filter(|&k| covers(k)).map(|k| pmf_oracle(n, k, p)).sum()
}

/// Coefficients of the quadratic a p^2 + b p + c = 0 obtained by clearing
/// denominators in stat(p) = kappa directly (not the library's factored
/// center/margin route).
pub fn quad_coeffs(n: u64, k: u64, kappa: f64) -> (f64, f64, f64) {
    let nf = n as f64;
    let ph = k as f64 / nf;
    let a = nf + kappa - 2.0;
    let b = 2.0 * ph * (1.0 - nf) + (1.0 - kappa);
    let c = ph * (nf * ph - 1.0);
    (a, b, c)
}

/// Quadratic-interval endpoints via the textbook root formula.
pub fn quad_roots_oracle(n: u64, k: u64, kappa: f64) -> (f64, f64) {
    let (a, b, c) = quad_coeffs(n, k, kappa);
    let disc = (b * b - 4.0 * a * c).max(0.0);
    let root = disc.sqrt();
    ((-b - root) / (2.0 * a), (-b + root) / (2.0 * a))
}

/// Wald endpoints straight from the formula.
pub fn wald_oracle(n: u64, k: u64, z: f64) -> (f64, f64) {
    let nf = n as f64;
    let ph = k as f64 / nf;
    let margin = z * (ph * (1.0 - ph) / nf).sqrt();
    (ph - margin, ph + margin)
}

/// z values for the three studied levels, frozen from a 40-digit computation.
pub fn z_for_level(level: f64) -> f64 {
    if level == 0.90 {
        1.6448536269514722
    } else if level == 0.95 {
        1.9599639845400545
    } else if level == 0.99 {
        2.5758293035489004
    } else {
        panic!("no frozen z for level {level}");
    }
}
