//! Binomial coefficients and small combinatorial enumerations.
//!
//! The binomial convention here is total: `C(a, b) = 0` whenever `a < 0`,
//! `b < 0` or `a < b`. This makes every closed-form dimension formula a
//! single expression whose vanishing range is encoded by the coefficients
//! themselves.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `C(a, b)` with the zero convention for out-of-range arguments.
pub fn binom(a: i64, b: i64) -> BigUint {
    if a < 0 || b < 0 || a < b {
        return BigUint::zero();
    }
    // C(a, b) = prod_{i=1..b} (a - b + i) / i, exact at every step.
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 1..=b {
        acc = acc * BigUint::from((a - b + i) as u64) / BigUint::from(i as u64);
    }
    acc
}

/// `C(a, b)` as a `usize`; panics if the value does not fit.
pub fn binom_usize(a: i64, b: i64) -> usize {
    use num_traits::ToPrimitive;
    binom(a, b)
        .to_usize()
        .expect("binomial coefficient exceeds usize")
}

/// All monomial exponent vectors of total degree `d` in `vars` variables,
/// in lexicographic order (largest exponent on the first variable first).
///
/// Returns an empty list for `d < 0`.
pub fn monomials(vars: usize, d: i64) -> Vec<Vec<u32>> {
    if d < 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(binom_usize(d + vars as i64 - 1, vars as i64 - 1));
    let mut current = vec![0u32; vars];
    fill_monomials(&mut current, 0, d as u32, &mut out);
    out
}

fn fill_monomials(current: &mut Vec<u32>, var: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
    if var + 1 == current.len() {
        current[var] = remaining;
        out.push(current.clone());
        return;
    }
    for e in (0..=remaining).rev() {
        current[var] = e;
        fill_monomials(current, var + 1, remaining - e, out);
    }
    current[var] = 0;
}

/// All `k`-element subsets of `0..n`, each sorted ascending, enumerated in
/// lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(binom_usize(n as i64, k as i64));
    let mut current = Vec::with_capacity(k);
    fill_subsets(n, k, 0, &mut current, &mut out);
    out
}

fn fill_subsets(
    n: usize,
    k: usize,
    start: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if current.len() == k {
        out.push(current.clone());
        return;
    }
    let needed = k - current.len();
    for i in start..=(n - needed) {
        current.push(i);
        fill_subsets(n, k, i + 1, current, out);
        current.pop();
    }
}
