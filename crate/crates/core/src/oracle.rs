//! Brute-force cross-check of the closed-form engine.
//!
//! `oracle_cohomology` never touches the Bott formula. Sections of
//! `Omega^p(l)` are the kernel of the Koszul contraction
//! `Lambda^p V (x) S_{l-p} -> Lambda^(p-1) V (x) S_{l-p+1}`,
//! `e_S (x) m -> sum_{j in S} (+/-) e_(S\j) (x) x_j m`,
//! whose integer matrix rank we compute exactly; the higher degrees follow
//! by chasing `0 -> Omega^p -> O(-p)^C(n+1,p) -> Omega^(p-1) -> 0`, using
//! only line-bundle dimensions obtained by counting monomials. The two
//! implementations share nothing but the binomial helper, so agreement is
//! meaningful evidence.

use std::sync::OnceLock;

use dashmap::DashMap;
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::combinatorics::{binom, monomials, subsets};
use crate::error::{Error, Result};
use crate::linalg::rank_fraction_free;

/// Monomial-count bound before the blockwise elimination is refused; keeps
/// CLI queries from accidentally requesting gigabyte-scale enumerations.
const MAX_MONOMIALS: u64 = 2_000_000;

/// All of `h^0..h^n (P^n, Omega^p(l))` by resolution chase; see module docs.
pub fn oracle_cohomology(n: usize, p: usize, l: i64) -> Result<Vec<BigUint>> {
    if n == 0 {
        return Err(Error::InvalidSpace(
            "oracle needs a factor of dimension >= 1".into(),
        ));
    }
    if p > n {
        return Err(Error::AtomOutOfRange { p: p as i64, n });
    }
    // Worst enumeration over the whole recursion is degree ~|l|+n in n+1
    // variables; refuse rather than thrash.
    let worst = binom(l.abs() + 2 * n as i64, n as i64);
    if worst > BigUint::from(MAX_MONOMIALS) {
        return Err(Error::TooLarge(format!(
            "oracle at (n={n}, p={p}, l={l}) would enumerate > {MAX_MONOMIALS} monomials"
        )));
    }
    Ok(vector(n, p, l))
}

static ORACLE_CACHE: OnceLock<DashMap<(usize, usize, i64), Vec<BigUint>>> = OnceLock::new();

fn vector(n: usize, p: usize, l: i64) -> Vec<BigUint> {
    let cache = ORACLE_CACHE.get_or_init(DashMap::new);
    if let Some(v) = cache.get(&(n, p, l)) {
        return v.clone();
    }
    let v = if p == 0 {
        line_vector(n, l)
    } else if n == 1 {
        // Omega^1 on P^1 is O(-2).
        line_vector(1, l - 2)
    } else {
        let prev = vector(n, p - 1, l);
        let line = line_vector(n, l - p as i64);
        let copies = BigInt::from(binom(n as i64 + 1, p as i64));
        let h0 = BigInt::from(koszul_kernel_rank(n, p, l));
        let h0_prev = BigInt::from(koszul_kernel_rank_or_line(n, p - 1, l));

        let mut out: Vec<BigInt> = vec![BigInt::zero(); n + 1];
        out[0] = h0.clone();
        // 0 -> H^0(Omega^p) -> H^0(O(l-p))^c -> H^0(Omega^(p-1))
        //   -> H^1(Omega^p) -> 0, since H^1 of line bundles vanishes.
        out[1] = h0_prev - &copies * BigInt::from(line[0].clone()) + h0;
        for i in 2..n {
            out[i] = BigInt::from(prev[i - 1].clone());
        }
        // Top: 0 -> H^(n-1)(Omega^(p-1)) -> H^n(Omega^p)
        //        -> H^n(O(l-p))^c -> H^n(Omega^(p-1)) -> 0.
        out[n] = BigInt::from(prev[n - 1].clone()) + copies * BigInt::from(line[n].clone())
            - BigInt::from(prev[n].clone());
        out.into_iter()
            .map(|x| {
                x.to_biguint()
                    .expect("dimension chase yields nonnegative values")
            })
            .collect()
    };
    cache.insert((n, p, l), v.clone());
    v
}

/// `h^0(Omega^(p)(l))` where `p` may be 0 (then it is a monomial count).
fn koszul_kernel_rank_or_line(n: usize, p: usize, l: i64) -> BigUint {
    if p == 0 {
        BigUint::from(monomials(n + 1, l).len())
    } else {
        koszul_kernel_rank(n, p, l)
    }
}

/// Line bundles by counting: `h^0(O(l))` is the number of degree-`l`
/// monomials in `n+1` variables, `h^n(O(l)) = h^0(O(-l-n-1))` (elementary
/// duality), interior degrees vanish.
fn line_vector(n: usize, l: i64) -> Vec<BigUint> {
    let mut v = vec![BigUint::zero(); n + 1];
    v[0] = BigUint::from(monomials(n + 1, l).len());
    v[n] += BigUint::from(monomials(n + 1, -l - n as i64 - 1).len());
    v
}

/// Exact kernel rank of the Koszul contraction for `p >= 1`.
///
/// The differential preserves the total multidegree `alpha` (`|alpha| = l`),
/// so the matrix splits into one block per `alpha`: rows are the `p`-subsets
/// of `supp(alpha)`, columns the `(p-1)`-subsets, entry `(S, S\{j})` is the
/// sign of `j` in `S`. Kernel rank sums `#rows - rank` over blocks.
pub fn koszul_kernel_rank(n: usize, p: usize, l: i64) -> BigUint {
    assert!(p >= 1 && p <= n);
    let mut kernel = BigUint::zero();
    if l < p as i64 {
        return kernel; // every block needs p distinct variables
    }
    for alpha in monomials(n + 1, l) {
        let supp: Vec<usize> = alpha
            .iter()
            .enumerate()
            .filter(|&(_, &a)| a > 0)
            .map(|(j, _)| j)
            .collect();
        if supp.len() < p {
            continue;
        }
        let dom: Vec<Vec<usize>> = subsets(supp.len(), p)
            .into_iter()
            .map(|s| s.into_iter().map(|k| supp[k]).collect())
            .collect();
        let cod: Vec<Vec<usize>> = subsets(supp.len(), p - 1)
            .into_iter()
            .map(|s| s.into_iter().map(|k| supp[k]).collect())
            .collect();
        let mut block = vec![vec![BigInt::zero(); cod.len()]; dom.len()];
        for (r, s) in dom.iter().enumerate() {
            for (pos, &j) in s.iter().enumerate() {
                let t: Vec<usize> = s.iter().copied().filter(|&k| k != j).collect();
                let c = cod
                    .binary_search(&t)
                    .expect("sub-subset is in the codomain basis");
                block[r][c] = if pos % 2 == 0 {
                    BigInt::from(1)
                } else {
                    BigInt::from(-1)
                };
            }
        }
        let rank = rank_fraction_free(block);
        kernel += BigUint::from(dom.len() - rank);
    }
    kernel
}
