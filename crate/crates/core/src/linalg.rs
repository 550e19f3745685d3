//! Exact rank of integer matrices by fraction-free Gaussian elimination.
//!
//! The Bareiss scheme keeps every intermediate entry an integer (each is a
//! minor of the original matrix), so ranks are computed without rationals
//! and without overflow thanks to arbitrary-precision arithmetic.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Rank of an integer matrix given as dense rows. The matrix is consumed.
///
/// Rows may have any rectangular shape; an empty matrix has rank 0.
pub fn rank_fraction_free(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return 0;
    }
    debug_assert!(m.iter().all(|r| r.len() == cols));

    let mut rank = 0usize;
    let mut prev = BigInt::from(1);
    for col in 0..cols {
        if rank == rows {
            break;
        }
        // Pick the smallest nonzero pivot in this column to slow entry growth.
        let pivot_row = (rank..rows)
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| m[r][col].abs());
        let Some(pivot_row) = pivot_row else { continue };
        m.swap(rank, pivot_row);

        let (pivot_slice, rest) = m.split_at_mut(rank + 1);
        let pivot = &pivot_slice[rank];
        for row in rest.iter_mut() {
            // Bareiss one-step update on every remaining row, zero factor or
            // not; each new entry is a bordered minor, so the division by the
            // previous pivot is exact.
            let factor = std::mem::replace(&mut row[col], BigInt::zero());
            for j in (col + 1)..cols {
                if row[j].is_zero() && (factor.is_zero() || pivot[j].is_zero()) {
                    continue;
                }
                let num = &pivot[col] * &row[j] - &factor * &pivot[j];
                row[j] = num / &prev;
            }
        }
        prev = pivot[col].clone();
        rank += 1;
    }
    rank
}
