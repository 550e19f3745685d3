//! Bott-class bundles on P^n and P^m x P^n and their algebra.
//!
//! A bundle is a finite direct sum of "atoms", each atom a box product of
//! twisted exterior powers of the cotangent sheaf, one factor per projective
//! factor of the ambient space. `W(p,l)` denotes `Omega^p(l)`; `W(0,l)` is
//! the line bundle `O(l)`. Every value is kept in canonical form: `p = n`
//! folds into `O(l-n-1)`, atoms are sorted, equal atoms are merged. Equality
//! of canonical bundles is plain structural equality.

use std::fmt;

use num_bigint::BigUint;
use serde::Deserialize;

use crate::combinatorics::binom;
use crate::error::{Error, Result};

/// The ambient variety: one or two projective factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Space {
    factor_dims: Vec<usize>,
}

impl Space {
    pub fn new(factor_dims: Vec<usize>) -> Result<Self> {
        if factor_dims.is_empty() || factor_dims.len() > 2 {
            return Err(Error::InvalidSpace(format!(
                "expected 1 or 2 projective factors, got {}",
                factor_dims.len()
            )));
        }
        if factor_dims.contains(&0) {
            return Err(Error::InvalidSpace("factor dimensions must be >= 1".into()));
        }
        Ok(Space { factor_dims })
    }

    /// P^n.
    pub fn projective(n: usize) -> Result<Self> {
        Space::new(vec![n])
    }

    /// P^m x P^n.
    pub fn biprojective(m: usize, n: usize) -> Result<Self> {
        Space::new(vec![m, n])
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn arity(&self) -> usize {
        self.factor_dims.len()
    }

    /// Dimension of the total space, `sum n_k`.
    pub fn total_dim(&self) -> usize {
        self.factor_dims.iter().sum()
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factor_dims.iter().map(|n| format!("P^{n}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// One factor `Omega^p(l)` of an atom; `p = 0` is the line bundle `O(l)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactorAtom {
    pub p: usize,
    pub l: i64,
}

impl FactorAtom {
    /// Validates `0 <= p <= n` and folds `Omega^n = O(-n-1)`. On P^1 the
    /// result always has `p = 0`.
    pub fn canonical(p: i64, l: i64, n: usize) -> Result<Self> {
        if p < 0 || p as usize > n {
            return Err(Error::AtomOutOfRange { p, n });
        }
        let p = p as usize;
        if p == n {
            Ok(FactorAtom {
                p: 0,
                l: l - (n as i64 + 1),
            })
        } else {
            Ok(FactorAtom { p, l })
        }
    }

    /// `(Omega^p(l))^dual = Omega^(n-p)(n+1-l)`, canonicalized.
    pub fn dual(self, n: usize) -> Self {
        FactorAtom::canonical((n - self.p) as i64, n as i64 + 1 - self.l, n)
            .expect("dual of a canonical factor is in range")
    }

    pub fn twisted(self, t: i64) -> Self {
        FactorAtom {
            p: self.p,
            l: self.l + t,
        }
    }

    /// Rank `C(n, p)` of one copy on P^n.
    pub fn rank(self, n: usize) -> BigUint {
        binom(n as i64, self.p as i64)
    }

    pub fn is_line_bundle(self) -> bool {
        self.p == 0
    }
}

impl fmt::Display for FactorAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p == 0 {
            write!(f, "O({})", self.l)
        } else {
            write!(f, "W({},{})", self.p, self.l)
        }
    }
}

/// A box product of one `FactorAtom` per space factor, with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub factors: Vec<FactorAtom>,
    pub mult: usize,
}

impl Atom {
    pub fn new(factors: Vec<FactorAtom>, mult: usize) -> Result<Self> {
        if mult == 0 {
            return Err(Error::NonPositiveMultiplicity);
        }
        Ok(Atom { factors, mult })
    }

    /// Rank of one copy, `prod_k C(n_k, p_k)`.
    pub fn copy_rank(&self, space: &Space) -> BigUint {
        self.factors
            .iter()
            .zip(space.factor_dims())
            .map(|(f, &n)| f.rank(n))
            .product()
    }

    pub fn with_mult(&self, mult: usize) -> Atom {
        Atom {
            factors: self.factors.clone(),
            mult,
        }
    }

    fn display_term(&self) -> String {
        let fs = &self.factors;
        let body = if fs.len() == 2 && fs[0].p == 0 && fs[1].p == 0 {
            format!("O({},{})", fs[0].l, fs[1].l)
        } else {
            fs.iter()
                .map(|f| f.to_string())
                .collect::<Vec<_>>()
                .join("x")
        };
        if self.mult == 1 {
            body
        } else {
            format!("{}*{}", body, self.mult)
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_term())
    }
}

/// A Bott-class bundle: a space plus a canonical sorted multiset of atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bundle {
    space: Space,
    atoms: Vec<Atom>,
}

impl Bundle {
    /// Builds a bundle from raw `(p, l)` data, canonicalizing everything:
    /// each factor is validated against its factor dimension and folded,
    /// atoms are sorted lexicographically and merged.
    pub fn new(space: Space, raw_atoms: Vec<(Vec<(i64, i64)>, usize)>) -> Result<Self> {
        if raw_atoms.is_empty() {
            return Err(Error::Parse("bundle must have at least one summand".into()));
        }
        let mut atoms = Vec::with_capacity(raw_atoms.len());
        for (factors, mult) in raw_atoms {
            if factors.len() != space.arity() {
                return Err(Error::ArityMismatch {
                    expected: space.arity(),
                    got: factors.len(),
                });
            }
            let canon: Result<Vec<FactorAtom>> = factors
                .iter()
                .zip(space.factor_dims())
                .map(|(&(p, l), &n)| FactorAtom::canonical(p, l, n))
                .collect();
            atoms.push(Atom::new(canon?, mult)?);
        }
        Ok(Bundle {
            space,
            atoms: merge_sorted(atoms),
        })
    }

    /// Builds a bundle from already-canonical atoms (still sorts and merges).
    pub fn from_atoms(space: Space, atoms: Vec<Atom>) -> Result<Self> {
        let raw = atoms
            .into_iter()
            .map(|a| {
                (
                    a.factors.iter().map(|f| (f.p as i64, f.l)).collect(),
                    a.mult,
                )
            })
            .collect();
        Bundle::new(space, raw)
    }

    /// A single atom of multiplicity one.
    pub fn single(space: Space, factors: Vec<FactorAtom>) -> Result<Self> {
        let raw = vec![(factors.iter().map(|f| (f.p as i64, f.l)).collect(), 1)];
        Bundle::new(space, raw)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Total rank, `sum_atoms mult * prod_k C(n_k, p_k)`.
    pub fn rank(&self) -> BigUint {
        self.atoms
            .iter()
            .map(|a| a.copy_rank(&self.space) * BigUint::from(a.mult))
            .sum()
    }

    /// Twists every atom by `t`, one entry per factor.
    pub fn twist(&self, t: &[i64]) -> Result<Bundle> {
        if t.len() != self.space.arity() {
            return Err(Error::ArityMismatch {
                expected: self.space.arity(),
                got: t.len(),
            });
        }
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                factors: a
                    .factors
                    .iter()
                    .zip(t)
                    .map(|(f, &s)| f.twisted(s))
                    .collect(),
                mult: a.mult,
            })
            .collect();
        Ok(Bundle {
            space: self.space.clone(),
            atoms: merge_sorted(atoms),
        })
    }

    /// Factor-wise dual; a rank-preserving involution on canonical bundles.
    pub fn dual(&self) -> Bundle {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                factors: a
                    .factors
                    .iter()
                    .zip(self.space.factor_dims())
                    .map(|(f, &n)| f.dual(n))
                    .collect(),
                mult: a.mult,
            })
            .collect();
        Bundle {
            space: self.space.clone(),
            atoms: merge_sorted(atoms),
        }
    }

    /// Whether the canonical atom `a` (multiplicity ignored) appears in this
    /// bundle's multiset with multiplicity >= 1.
    pub fn contains_summand(&self, a: &Atom) -> Result<bool> {
        if a.factors.len() != self.space.arity() {
            return Err(Error::ArityMismatch {
                expected: self.space.arity(),
                got: a.factors.len(),
            });
        }
        Ok(self.atoms.iter().any(|b| b.factors == a.factors))
    }

    /// Compact one-line notation; `parse_compact` inverts this exactly.
    pub fn format_compact(&self) -> String {
        self.atoms
            .iter()
            .map(Atom::display_term)
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Structured JSON form matching the bundle file format.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "space": self.space.factor_dims(),
            "summands": self.atoms.iter().map(|a| serde_json::json!({
                "factors": a.factors.iter().map(|f| serde_json::json!({
                    "p": f.p,
                    "l": f.l,
                })).collect::<Vec<_>>(),
                "mult": a.mult,
            })).collect::<Vec<_>>(),
        })
    }

    /// Parses the structured bundle file format (JSON with `space` and
    /// `summands`); unknown fields are rejected.
    pub fn parse_json(text: &str) -> Result<Bundle> {
        let file: BundleFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let space = Space::new(file.space)?;
        let raw = file
            .summands
            .into_iter()
            .map(|s| {
                let factors = s.factors.into_iter().map(|f| (f.p, f.l)).collect();
                if s.mult <= 0 {
                    return Err(Error::NonPositiveMultiplicity);
                }
                Ok((factors, s.mult as usize))
            })
            .collect::<Result<Vec<_>>>()?;
        Bundle::new(space, raw)
    }

    /// Parses the compact CLI notation: terms joined by `+`, each a product
    /// of factors joined by `x` with an optional `*mult`. Factors are
    /// `O(l)` / `W(p,l)`, and `O(a,b)` abbreviates `O(a)xO(b)`.
    ///
    /// The notation does not carry factor dimensions, so the caller supplies
    /// the space; its arity must match the notation's.
    pub fn parse_compact(text: &str, space: Space) -> Result<Bundle> {
        let mut raw = Vec::new();
        for term in text.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Parse("empty summand".into()));
            }
            let (factors_text, mult) = match term.rsplit_once('*') {
                Some((body, m)) => {
                    let mult: i64 = m
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad multiplicity `{}`", m.trim())))?;
                    if mult <= 0 {
                        return Err(Error::NonPositiveMultiplicity);
                    }
                    (body.trim(), mult as usize)
                }
                None => (term, 1),
            };
            let mut factors = Vec::new();
            for part in split_factors(factors_text)? {
                factors.extend(parse_factor(&part)?);
            }
            raw.push((factors, mult));
        }
        Bundle::new(space, raw)
    }

    /// Number of factors the compact notation `text` describes, before any
    /// space is known. Used by callers that must pick a default space.
    pub fn compact_arity(text: &str) -> Result<usize> {
        let term = text
            .split('+')
            .next()
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .ok_or_else(|| Error::Parse("empty bundle description".into()))?;
        let body = term.rsplit_once('*').map_or(term, |(b, _)| b.trim());
        let mut arity = 0;
        for part in split_factors(body)? {
            arity += parse_factor(&part)?.len();
        }
        Ok(arity)
    }
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}", self.format_compact(), self.space)
    }
}

fn merge_sorted(mut atoms: Vec<Atom>) -> Vec<Atom> {
    atoms.sort_by(|a, b| a.factors.cmp(&b.factors));
    let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match merged.last_mut() {
            Some(last) if last.factors == a.factors => last.mult += a.mult,
            _ => merged.push(a),
        }
    }
    merged
}

fn split_factors(text: &str) -> Result<Vec<String>> {
    // Split on `x` separators that sit between factor tokens. Factor bodies
    // never contain `x`, so a plain split is enough.
    let parts: Vec<String> = text.split('x').map(|s| s.trim().to_string()).collect();
    if parts.iter().any(String::is_empty) {
        return Err(Error::Parse(format!("malformed factor list `{text}`")));
    }
    Ok(parts)
}

/// Parses `O(l)`, `O(a,b)` or `W(p,l)` into raw `(p, l)` pairs.
fn parse_factor(text: &str) -> Result<Vec<(i64, i64)>> {
    let bad = || Error::Parse(format!("malformed factor `{text}`"));
    let inner = text.strip_suffix(')').ok_or_else(bad)?;
    let (head, args) = inner.split_once('(').ok_or_else(bad)?;
    let nums: Vec<i64> = args
        .split(',')
        .map(|a| a.trim().parse::<i64>().map_err(|_| bad()))
        .collect::<Result<Vec<_>>>()?;
    match (head.trim(), nums.as_slice()) {
        ("O", [l]) => Ok(vec![(0, *l)]),
        ("O", [a, b]) => Ok(vec![(0, *a), (0, *b)]),
        ("W", [p, l]) => Ok(vec![(*p, *l)]),
        _ => Err(bad()),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleFile {
    space: Vec<usize>,
    summands: Vec<SummandFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SummandFile {
    factors: Vec<FactorFile>,
    mult: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorFile {
    p: i64,
    l: i64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2xp2() -> Space {
        Space::biprojective(2, 2).unwrap()
    }

    #[test]
    fn parse_json_box_product() {
        let b = Bundle::parse_json(
            r#"{"space":[2,2],"summands":[{"factors":[{"p":1,"l":0},{"p":1,"l":0}],"mult":1}]}"#,
        )
        .unwrap();
        assert_eq!(b.format_compact(), "W(1,0)xW(1,0)");
        assert_eq!(b.rank(), BigUint::from(4u32));
    }

    #[test]
    fn parse_json_canonicalizes_top_exterior_power() {
        let b = Bundle::parse_json(
            r#"{"space":[3],"summands":[{"factors":[{"p":3,"l":0}],"mult":2}]}"#,
        )
        .unwrap();
        assert_eq!(b.format_compact(), "O(-4)*2");
    }

    #[test]
    fn parse_json_rejects_out_of_range_p() {
        let r = Bundle::parse_json(
            r#"{"space":[2,2],"summands":[{"factors":[{"p":5,"l":0},{"p":0,"l":0}],"mult":1}]}"#,
        );
        assert!(matches!(r, Err(Error::AtomOutOfRange { p: 5, n: 2 })));
    }

    #[test]
    fn parse_json_rejects_unknown_fields_and_bad_mult() {
        assert!(Bundle::parse_json(
            r#"{"space":[2],"summands":[{"factors":[{"p":0,"l":0}],"mult":1}],"extra":3}"#
        )
        .is_err());
        assert!(Bundle::parse_json(
            r#"{"space":[2],"summands":[{"factors":[{"p":0,"l":0,"q":1}],"mult":1}]}"#
        )
        .is_err());
        assert!(matches!(
            Bundle::parse_json(
                r#"{"space":[2],"summands":[{"factors":[{"p":0,"l":0}],"mult":0}]}"#
            ),
            Err(Error::NonPositiveMultiplicity)
        ));
    }

    #[test]
    fn parse_json_rejects_wrong_factor_count() {
        let r = Bundle::parse_json(
            r#"{"space":[2,2],"summands":[{"factors":[{"p":1,"l":0}],"mult":1}]}"#,
        );
        assert!(matches!(
            r,
            Err(Error::ArityMismatch {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn compact_round_trip() {
        for text in [
            "W(1,0)xW(1,0)",
            "O(0,-3)",
            "O(-4)*2",
            "O(2) + O(-1)*3",
            "O(3,3) + W(1,0)xW(1,0)",
            "O(-1,2)*2 + W(1,-2)xO(5)",
        ] {
            let space = if Bundle::compact_arity(text).unwrap() == 2 {
                p2xp2()
            } else {
                Space::projective(3).unwrap()
            };
            let b = Bundle::parse_compact(text, space.clone()).unwrap();
            let again = Bundle::parse_compact(&b.format_compact(), space).unwrap();
            assert_eq!(b, again);
        }
    }

    #[test]
    fn compact_rejects_malformed() {
        let s = Space::projective(2).unwrap();
        for text in [
            "", "Q(1)", "O(1", "O(1)x", "W(1)", "O(1)*0", "O(1)*-2", "O(1,2,3)",
        ] {
            assert!(
                Bundle::parse_compact(text, s.clone()).is_err(),
                "accepted `{text}`"
            );
        }
    }

    #[test]
    fn canonicalization_merges_after_folding() {
        // Omega^2 on P^2 folds to O(-3), merging with an explicit O(-3).
        let b = Bundle::new(
            Space::projective(2).unwrap(),
            vec![(vec![(2, 0)], 1), (vec![(0, -3)], 2)],
        )
        .unwrap();
        assert_eq!(b.format_compact(), "O(-3)*3");
    }

    #[test]
    fn rank_examples() {
        let b = Bundle::parse_compact("W(1,0)xW(1,0)", p2xp2()).unwrap();
        assert_eq!(b.rank(), BigUint::from(4u32));
        let b = Bundle::parse_compact("O(3,-1)", p2xp2()).unwrap();
        assert_eq!(b.rank(), BigUint::from(1u32));
        let b = Bundle::parse_compact("W(1,0) + O(5)", Space::projective(3).unwrap()).unwrap();
        assert_eq!(b.rank(), BigUint::from(4u32));
    }

    #[test]
    fn twist_and_dual_examples() {
        let e = Bundle::parse_compact("W(1,0)xW(1,0)", p2xp2()).unwrap();
        let t = e.twist(&[1, 1]).unwrap();
        assert_eq!(t.format_compact(), "W(1,1)xW(1,1)");
        assert_eq!(e.twist(&[0, 0]).unwrap(), e);
        assert_eq!(t.twist(&[-1, -1]).unwrap(), e);
        assert!(e.twist(&[1]).is_err());

        let d = Bundle::parse_compact("W(1,0)", Space::projective(2).unwrap()).unwrap();
        assert_eq!(d.dual().format_compact(), "W(1,3)");
        let line = Bundle::parse_compact("O(2,-5)", p2xp2()).unwrap();
        assert_eq!(line.dual().format_compact(), "O(-2,5)");
    }

    #[test]
    fn contains_summand_examples() {
        let e = Bundle::parse_compact("W(1,0)xW(1,0) + O(3,3)", p2xp2()).unwrap();
        let omega_box = Atom::new(
            vec![FactorAtom { p: 1, l: 0 }, FactorAtom { p: 1, l: 0 }],
            1,
        )
        .unwrap();
        assert!(e.contains_summand(&omega_box).unwrap());
        let o = Bundle::parse_compact("O(0,0)", p2xp2()).unwrap();
        assert!(!o.contains_summand(&omega_box).unwrap());

        // Omega^3 x O on P^3 x P^3 canonicalizes to O(-4) x O.
        let s = Space::biprojective(3, 3).unwrap();
        let e = Bundle::new(s, vec![(vec![(3, 0), (0, 0)], 1)]).unwrap();
        let target = Atom::new(
            vec![FactorAtom { p: 0, l: -4 }, FactorAtom { p: 0, l: 0 }],
            1,
        )
        .unwrap();
        assert!(e.contains_summand(&target).unwrap());
        assert!(e
            .contains_summand(&Atom::new(vec![FactorAtom { p: 0, l: -4 }], 1).unwrap())
            .is_err());
    }

    #[test]
    fn space_validation() {
        assert!(Space::new(vec![]).is_err());
        assert!(Space::new(vec![1, 2, 3]).is_err());
        assert!(Space::new(vec![0]).is_err());
        assert_eq!(Space::biprojective(2, 3).unwrap().total_dim(), 5);
    }
}
