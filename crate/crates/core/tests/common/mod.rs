//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the spectral module: stationary laws come from
//! power iteration and trace variances from brute-force enumeration.

#![allow(dead_code)]

use dynamite::chain::TransitionMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rows(m: &TransitionMatrix) -> Vec<Vec<f64>> {
    (0..m.len()).map(|i| m.row(i)).collect()
}

/// Stationary law by power iteration on the lazified chain.
pub fn power_stationary(p: &[Vec<f64>]) -> Vec<f64> {
    let n = p.len();
    let mut pi = vec![1.0 / n as f64; n];
    for _ in 0..200_000 {
        let mut next = vec![0.0; n];
        for (i, row) in p.iter().enumerate() {
            for (j, &w) in row.iter().enumerate() {
                next[j] += pi[i] * (0.5 * w + if i == j { 0.5 } else { 0.0 });
            }
        }
        let diff: f64 = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
        pi = next;
        if diff < 1e-16 {
            break;
        }
    }
    pi
}

/// Variance of the average of `values` along a stationary trace of length
/// `t`, by summing over all `n^t` traces.
pub fn enumerate_trace_variance(p: &[Vec<f64>], pi: &[f64], values: &[f64], t: usize) -> f64 {
    let n = p.len();
    let mut digits = vec![0usize; t];
    let (mut first, mut second) = (0.0, 0.0);
    loop {
        let mut prob = pi[digits[0]];
        for w in digits.windows(2) {
            prob *= p[w[0]][w[1]];
        }
        if prob > 0.0 {
            let avg = digits.iter().map(|&d| values[d]).sum::<f64>() / t as f64;
            first += prob * avg;
            second += prob * avg * avg;
        }
        let mut pos = t;
        loop {
            if pos == 0 {
                return second - first * first;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < n {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Lazy reversible chain from random symmetric weights.
pub fn random_lazy_reversible(n: usize, seed: u64) -> TransitionMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let x: f64 = rng.random_range(0.05..1.0);
            w[i][j] = x;
            w[j][i] = x;
        }
    }
    let rows: Vec<Vec<f64>> = w
        .iter()
        .map(|r| {
            let s: f64 = r.iter().sum();
            r.iter().map(|x| x / s).collect()
        })
        .collect();
    TransitionMatrix::from_rows(&rows).unwrap().lazified()
}

/// Every assignment of colors `1..=k` to `n` vertices that leaves no edge
/// monochromatic, by full odometer enumeration.
pub fn brute_colorings(n: usize, edges: &[(usize, usize)], k: u16) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut c = vec![1u16; n];
    loop {
        if edges.iter().all(|&(u, v)| c[u] != c[v]) {
            out.push(c.clone());
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            c[pos] += 1;
            if c[pos] <= k {
                break;
            }
            c[pos] = 1;
        }
    }
}

pub fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Upper tail `P(Bin(n, p) >= k)`.
pub fn binomial_upper_tail(n: u64, p: f64, k: u64) -> f64 {
    let mut total = 0.0;
    for i in k..=n {
        let log_choose = ln_factorial(n) - ln_factorial(i) - ln_factorial(n - i);
        total += (log_choose + i as f64 * p.ln() + (n - i) as f64 * (1.0 - p).ln()).exp();
    }
    total.min(1.0)
}

fn ln_factorial(n: u64) -> f64 {
    (1..=n).map(|i| (i as f64).ln()).sum()
}
