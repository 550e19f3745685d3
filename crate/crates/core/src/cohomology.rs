//! The closed-form cohomology engine.
//!
//! Dimensions of `H^i(P^n, Omega^p(l))` come from the Bott formula; bundles
//! on a product space combine per-factor vectors by Künneth. Everything is
//! exact big-integer arithmetic. For a fixed `(n, p, l)` at most one degree
//! is nonzero, which the independent Koszul oracle (see `oracle`) confirms.

use std::fmt::Write as _;
use std::sync::OnceLock;

use dashmap::DashMap;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::bundle::{Bundle, FactorAtom, Space};
use crate::combinatorics::binom;
use crate::error::{Error, Result};
use crate::exec;

/// `h^i(P^n, Omega^p(l))` by the Bott formula, with the convention
/// `C(a,b) = 0` for `a < 0`, `b < 0` or `a < b`:
///
/// * `h^0 = C(l+n-p, n-p) * C(l-1, p)` when `l > p`;
/// * `h^p = 1` when `l = 0`;
/// * `h^n = C(p-l, p) * C(-l-1, n-p)` when `l < p-n`;
/// * `0` otherwise.
///
/// Panics if `p > n` or `i > n`.
pub fn bott_dim(n: usize, p: usize, l: i64, i: usize) -> BigUint {
    assert!(p <= n, "exterior index {p} out of range on P^{n}");
    assert!(i <= n, "cohomological degree {i} out of range on P^{n}");
    let (ni, pi) = (n as i64, p as i64);
    if i == 0 && l > pi {
        binom(l + ni - pi, ni - pi) * binom(l - 1, pi)
    } else if i == p && l == 0 {
        BigUint::one()
    } else if i == n && l < pi - ni {
        binom(pi - l, pi) * binom(-l - 1, ni - pi)
    } else {
        BigUint::zero()
    }
}

static FACTOR_CACHE: OnceLock<DashMap<(usize, usize, i64), Vec<BigUint>>> = OnceLock::new();

/// The full vector `[h^0, .., h^n](P^n, Omega^p(l))`, memoized: criterion
/// scans hit heavily overlapping `(n, p, l)` queries.
pub fn factor_vector(n: usize, p: usize, l: i64) -> Vec<BigUint> {
    let cache = FACTOR_CACHE.get_or_init(DashMap::new);
    if let Some(v) = cache.get(&(n, p, l)) {
        return v.clone();
    }
    let v: Vec<BigUint> = (0..=n).map(|i| bott_dim(n, p, l, i)).collect();
    cache.insert((n, p, l), v.clone());
    v
}

/// All of `h^0(E(t)), .., h^d(E(t))`, `d = dim` of the ambient space. On a
/// product space the per-factor vectors convolve (Künneth).
pub fn cohomology(e: &Bundle, t: &[i64]) -> Result<Vec<BigUint>> {
    let space = e.space();
    if t.len() != space.arity() {
        return Err(Error::ArityMismatch {
            expected: space.arity(),
            got: t.len(),
        });
    }
    let d = space.total_dim();
    let mut out = vec![BigUint::zero(); d + 1];
    for atom in e.atoms() {
        let per: Vec<Vec<BigUint>> = atom
            .factors
            .iter()
            .zip(space.factor_dims())
            .zip(t)
            .map(|((f, &n), &s)| factor_vector(n, f.p, f.l + s))
            .collect();
        let mult = BigUint::from(atom.mult);
        match per.as_slice() {
            [v] => {
                for (o, x) in out.iter_mut().zip(v) {
                    *o += x * &mult;
                }
            }
            [v, w] => {
                for (i, x) in v.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in w.iter().enumerate() {
                        out[i + j] += x * y * &mult;
                    }
                }
            }
            _ => unreachable!("spaces have one or two factors"),
        }
    }
    Ok(out)
}

/// Euler characteristic of one factor, `chi(P^n, Omega^p(l+t))`.
pub fn euler_factor(n: usize, f: FactorAtom, t: i64) -> BigInt {
    alternating_sum(&factor_vector(n, f.p, f.l + t))
}

/// `chi(E(t))`; equals the product of per-factor Euler characteristics on
/// each atom, summed with multiplicity.
pub fn euler(e: &Bundle, t: &[i64]) -> Result<BigInt> {
    Ok(alternating_sum(&cohomology(e, t)?))
}

/// `chi(P^n, A tensor W(l))` for factor atoms `A`, `W` on the same P^n.
///
/// A line-bundle multiplier just shifts the twist. For `W = Omega^r(c)` the
/// Koszul resolution `0 -> Omega^r -> O(-r)^C(n+1,r) -> .. -> O -> 0` stays
/// exact after tensoring by `A`, so
/// `chi = sum_{j=0..r} (-1)^(r-j) C(n+1,j) chi(A(l+c-j))`.
pub fn euler_tensor(n: usize, a: FactorAtom, w: FactorAtom, l: i64) -> BigInt {
    if w.p == 0 {
        return euler_factor(n, a, l + w.l);
    }
    let r = w.p;
    let mut sum = BigInt::zero();
    for j in 0..=r {
        let term =
            BigInt::from(binom(n as i64 + 1, j as i64)) * euler_factor(n, a, l + w.l - j as i64);
        if (r - j).is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

pub fn alternating_sum(dims: &[BigUint]) -> BigInt {
    let mut sum = BigInt::zero();
    for (i, d) in dims.iter().enumerate() {
        let d = BigInt::from(d.clone());
        if i % 2 == 0 {
            sum += d;
        } else {
            sum -= d;
        }
    }
    sum
}

/// Cohomology vectors over a rectangular twist grid, row-major ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyTable {
    space: Space,
    points: Vec<(Vec<i64>, Vec<BigUint>)>,
}

/// Inclusive twist ranges, one `(lo, hi)` per factor.
pub fn grid_points(ranges: &[(i64, i64)]) -> Result<Vec<Vec<i64>>> {
    if ranges.iter().any(|&(lo, hi)| lo > hi) {
        return Err(Error::EmptyGrid(format!("{ranges:?}")));
    }
    match ranges {
        [(lo, hi)] => Ok((*lo..=*hi).map(|l| vec![l]).collect()),
        [(lo1, hi1), (lo2, hi2)] => {
            let mut pts = Vec::new();
            for a in *lo1..=*hi1 {
                for b in *lo2..=*hi2 {
                    pts.push(vec![a, b]);
                }
            }
            Ok(pts)
        }
        _ => Err(Error::ArityMismatch {
            expected: 2,
            got: ranges.len(),
        }),
    }
}

pub fn table(e: &Bundle, ranges: &[(i64, i64)]) -> Result<CohomologyTable> {
    if ranges.len() != e.space().arity() {
        return Err(Error::ArityMismatch {
            expected: e.space().arity(),
            got: ranges.len(),
        });
    }
    let pts = grid_points(ranges)?;
    let points = exec::map(pts, |t| {
        let dims = cohomology(e, &t).expect("grid twist arity matches by construction");
        (t, dims)
    });
    Ok(CohomologyTable {
        space: e.space().clone(),
        points,
    })
}

/// Sequential twin of [`table`], for benchmarking the parallel path.
pub fn table_seq(e: &Bundle, ranges: &[(i64, i64)]) -> Result<CohomologyTable> {
    if ranges.len() != e.space().arity() {
        return Err(Error::ArityMismatch {
            expected: e.space().arity(),
            got: ranges.len(),
        });
    }
    let pts = grid_points(ranges)?;
    let points = exec::map_seq(pts, |t| {
        let dims = cohomology(e, &t).expect("grid twist arity matches by construction");
        (t, dims)
    });
    Ok(CohomologyTable {
        space: e.space().clone(),
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Csv,
    Records,
}

impl std::str::FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(TableFormat::Text),
            "csv" => Ok(TableFormat::Csv),
            "records" => Ok(TableFormat::Records),
            other => Err(Error::Parse(format!("unknown table format `{other}`"))),
        }
    }
}

impl CohomologyTable {
    pub fn points(&self) -> &[(Vec<i64>, Vec<BigUint>)] {
        &self.points
    }

    pub fn get(&self, t: &[i64]) -> Option<&[BigUint]> {
        self.points
            .iter()
            .find(|(tw, _)| tw == t)
            .map(|(_, d)| d.as_slice())
    }

    pub fn render(&self, format: TableFormat) -> String {
        match format {
            TableFormat::Text => self.render_text(),
            TableFormat::Csv => self.render_csv(),
            TableFormat::Records => self.render_records(),
        }
    }

    fn twist_headers(&self) -> Vec<&'static str> {
        match self.space.arity() {
            1 => vec!["l"],
            _ => vec!["a", "b"],
        }
    }

    /// Aligned columns: the twist entries, then h^0..h^dim.
    pub fn render_text(&self) -> String {
        let d = self.space.total_dim();
        let mut header: Vec<String> = self.twist_headers().iter().map(|s| s.to_string()).collect();
        header.extend((0..=d).map(|i| format!("h^{i}")));
        let mut rows: Vec<Vec<String>> = vec![header];
        for (t, dims) in &self.points {
            let mut row: Vec<String> = t.iter().map(|x| x.to_string()).collect();
            row.extend(dims.iter().map(|x| x.to_string()));
            rows.push(row);
        }
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &rows {
            for (c, cell) in row.iter().enumerate() {
                if c > 0 {
                    out.push_str("  ");
                }
                let _ = write!(out, "{cell:>width$}", width = widths[c]);
            }
            out.push('\n');
        }
        out
    }

    /// `a,b,h0,h1,...` with a header line.
    pub fn render_csv(&self) -> String {
        let d = self.space.total_dim();
        let mut out = String::new();
        let mut header = self.twist_headers().join(",");
        for i in 0..=d {
            let _ = write!(header, ",h{i}");
        }
        out.push_str(&header);
        out.push('\n');
        for (t, dims) in &self.points {
            let cells: Vec<String> = t
                .iter()
                .map(|x| x.to_string())
                .chain(dims.iter().map(|x| x.to_string()))
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// One JSON record per grid point; dimensions as decimal strings so
    /// arbitrarily large values survive any JSON reader.
    pub fn render_records(&self) -> String {
        let mut out = String::new();
        for (t, dims) in &self.points {
            let rec = serde_json::json!({
                "twist": t,
                "dims": dims.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            });
            out.push_str(&rec.to_string());
            out.push('\n');
        }
        out
    }
}
