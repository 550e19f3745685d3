//! Decision procedures for the splitting criteria and related checks, with
//! witness-level reports: the single-space criterion (`check_prop13`), the
//! product-space criterion (`check_thm21`), the Stückrad–Vogel Buchsbaum
//! condition (`check_sv`), the ACM/Horrocks detector, the exhaustive
//! `P^2 x P^2` characterization scan, and randomized soundness scans that
//! assert `criterion met => conclusion present` over generated corpora.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bundle::{Atom, Bundle, FactorAtom, Space};
use crate::cohomology::cohomology;
use crate::error::{Error, Result};
use crate::exec;

/// One required vanishing `h^degree(E(twist)) = 0` and the computed value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionEntry {
    pub degree: usize,
    pub twist: Vec<i64>,
    pub dim: BigUint,
}

impl ConditionEntry {
    pub fn pass(&self) -> bool {
        self.dim.is_zero()
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "i": self.degree,
            "twist": self.twist,
            "dim": self.dim.to_string(),
            "pass": self.pass(),
        })
    }
}

/// Outcome of one criterion check; `criterion_met` means the nonvanishing
/// hypothesis holds and every condition entry vanishes, and
/// `conclusion_verified` reports whether the promised summand is present.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub criterion_id: &'static str,
    pub bundle: Bundle,
    pub parameters: Vec<(&'static str, i64)>,
    pub hypothesis_degree: usize,
    pub hypothesis_dim: BigUint,
    pub condition_a: Vec<ConditionEntry>,
    pub condition_b: Vec<ConditionEntry>,
    pub conclusion: Atom,
    pub criterion_met: bool,
    pub conclusion_verified: bool,
}

impl CriterionReport {
    /// Every failing condition entry, conditions (a) then (b), in order.
    pub fn witnesses(&self) -> Vec<&ConditionEntry> {
        self.condition_a
            .iter()
            .chain(&self.condition_b)
            .filter(|e| !e.pass())
            .collect()
    }

    pub fn conditions_hold(&self) -> bool {
        self.condition_a
            .iter()
            .chain(&self.condition_b)
            .all(ConditionEntry::pass)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let params: serde_json::Map<String, serde_json::Value> = self
            .parameters
            .iter()
            .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
            .collect();
        serde_json::json!({
            "criterion": self.criterion_id,
            "bundle": self.bundle.format_compact(),
            "space": self.bundle.space().factor_dims(),
            "parameters": params,
            "hypothesis": {
                "degree": self.hypothesis_degree,
                "dim": self.hypothesis_dim.to_string(),
            },
            "condition_a": self.condition_a.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
            "condition_b": self.condition_b.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
            "witnesses": self.witnesses().iter().map(|e| e.to_json()).collect::<Vec<_>>(),
            "conclusion": self.conclusion.to_string(),
            "criterion_met": self.criterion_met,
            "conclusion_verified": self.conclusion_verified,
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let params = self
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(", ");
        let _ = writeln!(out, "criterion {} ({params})", self.criterion_id);
        let _ = writeln!(out, "bundle {}", self.bundle);
        let _ = writeln!(
            out,
            "hypothesis h^{}(E) = {} ({})",
            self.hypothesis_degree,
            self.hypothesis_dim,
            if self.hypothesis_dim.is_zero() {
                "fails"
            } else {
                "holds"
            }
        );
        for (name, entries) in [("a", &self.condition_a), ("b", &self.condition_b)] {
            let _ = writeln!(out, "condition ({name}):");
            for e in entries {
                let twist = e
                    .twist
                    .iter()
                    .map(|t| t.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                let _ = writeln!(
                    out,
                    "  h^{}(E({twist})) = {} {}",
                    e.degree,
                    e.dim,
                    if e.pass() { "ok" } else { "VIOLATED" }
                );
            }
        }
        let _ = writeln!(
            out,
            "criterion met: {}",
            if self.criterion_met { "yes" } else { "no" }
        );
        if self.criterion_met {
            let _ = writeln!(
                out,
                "conclusion: contains {} — {}",
                self.conclusion,
                if self.conclusion_verified {
                    "verified"
                } else {
                    "NOT PRESENT"
                }
            );
        }
        out
    }
}

fn h_dim(e: &Bundle, t: &[i64], degree: usize) -> Result<BigUint> {
    Ok(cohomology(e, t)?[degree].clone())
}

/// Single-space splitting criterion. Hypothesis: `h^p(E) > 0`. Condition
/// (a): `h^i(E(p-i+1)) = 0` for `1 <= i <= p`; condition (b):
/// `h^i(E(p-i-1)) = 0` for `p <= i <= n-1`. When everything holds, `E`
/// contains `Omega^p` as a direct summand.
pub fn check_prop13(e: &Bundle, p: usize) -> Result<CriterionReport> {
    let space = e.space();
    if space.arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            got: space.arity(),
        });
    }
    let n = space.factor_dims()[0];
    if p < 1 || p > n - 1 {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= p <= n-1, got p={p} on P^{n}"
        )));
    }
    let hypothesis_dim = h_dim(e, &[0], p)?;
    let mut condition_a = Vec::new();
    for i in 1..=p {
        let t = p as i64 - i as i64 + 1;
        condition_a.push(ConditionEntry {
            degree: i,
            twist: vec![t],
            dim: h_dim(e, &[t], i)?,
        });
    }
    let mut condition_b = Vec::new();
    for i in p..=n - 1 {
        let t = p as i64 - i as i64 - 1;
        condition_b.push(ConditionEntry {
            degree: i,
            twist: vec![t],
            dim: h_dim(e, &[t], i)?,
        });
    }
    let conclusion = Atom::new(vec![FactorAtom { p, l: 0 }], 1)?;
    let met = !hypothesis_dim.is_zero()
        && condition_a
            .iter()
            .chain(&condition_b)
            .all(ConditionEntry::pass);
    let verified = e.contains_summand(&conclusion)?;
    Ok(CriterionReport {
        criterion_id: "prop13",
        bundle: e.clone(),
        parameters: vec![("p", p as i64)],
        hypothesis_degree: p,
        hypothesis_dim,
        condition_a,
        condition_b,
        conclusion,
        criterion_met: met,
        conclusion_verified: verified,
    })
}

/// Product-space splitting criterion on `P^m x P^n`. Hypothesis:
/// `h^(p+q)(E) > 0`. Condition (a): `h^i(E(a,b)) = 0` on the slice
/// `i+a+b = p+q+1`, `1 <= i <= p+q`, `0 <= a <= p`, `0 <= b <= q`;
/// condition (b): `h^i(E(a,b)) = 0` on `i+a+b = p+q-1`,
/// `p+q <= i <= m+n-1`, `p-m <= a <= 0`, `q-n <= b <= 0`. When everything
/// holds, `E` contains `Omega^p (box) Omega^q`.
pub fn check_thm21(e: &Bundle, p: usize, q: usize) -> Result<CriterionReport> {
    let space = e.space();
    if space.arity() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            got: space.arity(),
        });
    }
    let (m, n) = (space.factor_dims()[0], space.factor_dims()[1]);
    if p < 1 || p > m - 1 || q < 1 || q > n - 1 {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= p <= m-1 and 1 <= q <= n-1, got p={p}, q={q} on {space}"
        )));
    }
    let (pi, qi) = (p as i64, q as i64);
    let hypothesis_dim = h_dim(e, &[0, 0], p + q)?;

    let mut condition_a = Vec::new();
    for i in 1..=p + q {
        for a in 0..=pi {
            let b = pi + qi + 1 - i as i64 - a;
            if (0..=qi).contains(&b) {
                condition_a.push(ConditionEntry {
                    degree: i,
                    twist: vec![a, b],
                    dim: h_dim(e, &[a, b], i)?,
                });
            }
        }
    }
    let mut condition_b = Vec::new();
    for i in p + q..=m + n - 1 {
        for a in pi - m as i64..=0 {
            let b = pi + qi - 1 - i as i64 - a;
            if (qi - n as i64..=0).contains(&b) {
                condition_b.push(ConditionEntry {
                    degree: i,
                    twist: vec![a, b],
                    dim: h_dim(e, &[a, b], i)?,
                });
            }
        }
    }
    let conclusion = Atom::new(vec![FactorAtom { p, l: 0 }, FactorAtom { p: q, l: 0 }], 1)?;
    let met = !hypothesis_dim.is_zero()
        && condition_a
            .iter()
            .chain(&condition_b)
            .all(ConditionEntry::pass);
    let verified = e.contains_summand(&conclusion)?;
    Ok(CriterionReport {
        criterion_id: "thm21",
        bundle: e.clone(),
        parameters: vec![("p", pi), ("q", qi)],
        hypothesis_degree: p + q,
        hypothesis_dim,
        condition_a,
        condition_b,
        conclusion,
        criterion_met: met,
        conclusion_verified: verified,
    })
}

/// Stückrad–Vogel sufficient condition for Buchsbaumness on `P^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SVReport {
    /// `(i, l)` with `1 <= i <= n-1` and `h^i(E(l)) != 0`, sorted.
    pub support: Vec<(usize, i64)>,
    /// Ordered pairs `((i,l),(j,m))` with `i >= j` and `i+l+1 = j+m`.
    pub violations: Vec<((usize, i64), (usize, i64))>,
    pub passes: bool,
}

impl SVReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "criterion": "sv",
            "support": self.support.iter().map(|&(i, l)| serde_json::json!([i, l])).collect::<Vec<_>>(),
            "violations": self.violations.iter()
                .map(|&((i, l), (j, m))| serde_json::json!([[i, l], [j, m]]))
                .collect::<Vec<_>>(),
            "passes": self.passes,
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let supp = self
            .support
            .iter()
            .map(|&(i, l)| format!("({i},{l})"))
            .collect::<Vec<_>>()
            .join(", ");
        let _ = writeln!(out, "SV support set: {{{supp}}}");
        for &((i, l), (j, m)) in &self.violations {
            let _ = writeln!(
                out,
                "violating pair (({i},{l}),({j},{m})): {i}+{l}+1 = {j}+{m}"
            );
        }
        let _ = writeln!(
            out,
            "SV condition: {}",
            if self.passes {
                "passes (E is Buchsbaum)"
            } else {
                "fails (test is inconclusive)"
            }
        );
        out
    }
}

/// Computes the support set structurally: the atom `Omega^p(l)` with
/// `p >= 1` (canonical, so `p <= n-1`) has its one interior nonvanishing
/// `h^p` at twist `-l`, contributing the pair `(p, -l)`.
pub fn check_sv(e: &Bundle) -> Result<SVReport> {
    if e.space().arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            got: e.space().arity(),
        });
    }
    let mut support: Vec<(usize, i64)> = e
        .atoms()
        .iter()
        .filter(|a| a.factors[0].p >= 1)
        .map(|a| (a.factors[0].p, -a.factors[0].l))
        .collect();
    support.sort_unstable();
    support.dedup();
    let mut violations = Vec::new();
    for &(i, l) in &support {
        for &(j, m) in &support {
            if i >= j && i as i64 + l + 1 == j as i64 + m {
                violations.push(((i, l), (j, m)));
            }
        }
    }
    let passes = violations.is_empty();
    Ok(SVReport {
        support,
        violations,
        passes,
    })
}

/// The support set recomputed by brute-force sweep over
/// `l in [-twist_bound-n-1, twist_bound+n+1]`; equals the structural set
/// for bundles whose atom twists are within `twist_bound`.
pub fn sv_support_by_sweep(e: &Bundle, twist_bound: i64) -> Result<Vec<(usize, i64)>> {
    if e.space().arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            got: e.space().arity(),
        });
    }
    let n = e.space().factor_dims()[0];
    let mut support = Vec::new();
    for l in -(twist_bound + n as i64 + 1)..=twist_bound + n as i64 + 1 {
        let v = cohomology(e, &[l])?;
        for (i, d) in v.iter().enumerate().take(n).skip(1) {
            if !d.is_zero() {
                support.push((i, l));
            }
        }
    }
    support.sort_unstable();
    support.dedup();
    Ok(support)
}

/// ACM test with the Horrocks verdict: a Bott-class bundle has no
/// intermediate cohomology at any twist exactly when every canonical atom
/// is a line bundle, and then it splits into line bundles.
pub fn is_acm(e: &Bundle) -> Result<(bool, String)> {
    if e.space().arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            got: e.space().arity(),
        });
    }
    match e.atoms().iter().find(|a| a.factors[0].p >= 1) {
        None => Ok((
            true,
            "ACM: splits as a direct sum of line bundles per Horrocks".into(),
        )),
        Some(a) => {
            let f = a.factors[0];
            Ok((
                false,
                format!("not ACM: summand {f} has h^{}(E({})) != 0", f.p, -f.l),
            ))
        }
    }
}

/// Canonical single atoms (multiplicity 1) on `space` with every factor
/// twist in `[-twist_bound, twist_bound]`, in lexicographic order.
pub fn enumerate_atoms(space: &Space, twist_bound: i64) -> Vec<Atom> {
    let per_factor: Vec<Vec<FactorAtom>> = space
        .factor_dims()
        .iter()
        .map(|&n| {
            let mut v = Vec::new();
            for p in 0..n {
                for l in -twist_bound..=twist_bound {
                    v.push(FactorAtom { p, l });
                }
            }
            v
        })
        .collect();
    let mut out = Vec::new();
    match per_factor.as_slice() {
        [fs] => {
            for &f in fs {
                out.push(Atom::new(vec![f], 1).unwrap());
            }
        }
        [fs, gs] => {
            for &f in fs {
                for &g in gs {
                    out.push(Atom::new(vec![f, g], 1).unwrap());
                }
            }
        }
        _ => unreachable!("spaces have one or two factors"),
    }
    out
}

/// Seeded random direct sum of `2..=max_summands` atoms drawn from `pool`.
pub fn random_sum<R: Rng>(
    rng: &mut R,
    space: &Space,
    pool: &[Atom],
    max_summands: usize,
) -> Bundle {
    let k = if max_summands <= 2 {
        2
    } else {
        rng.gen_range(2..=max_summands)
    };
    let atoms: Vec<Atom> = (0..k)
        .map(|_| pool[rng.gen_range(0..pool.len())].clone())
        .collect();
    Bundle::from_atoms(space.clone(), atoms).expect("pool atoms are valid for the space")
}

/// Exhaustive scan of the `P^2 x P^2` characterization: which single atoms
/// satisfy `h^2(E) != 0` together with the six vanishings
/// `h^1(E(1,1)) = h^2(E(0,1)) = h^2(E(1,0)) = h^2(E(-1,0)) = h^2(E(0,-1))
/// = h^3(E(-1,-1)) = 0`?
#[derive(Debug, Clone)]
pub struct Ex23Report {
    pub twist_bound: i64,
    pub tested: usize,
    pub satisfying: Vec<Bundle>,
}

impl Ex23Report {
    pub fn is_unique_box_of_cotangents(&self) -> bool {
        self.satisfying.len() == 1 && self.satisfying[0].format_compact() == "W(1,0)xW(1,0)"
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "scan": "ex23",
            "twist_bound": self.twist_bound,
            "tested": self.tested,
            "satisfying": self.satisfying.iter().map(Bundle::format_compact).collect::<Vec<_>>(),
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "scanned {} single atoms on P^2 x P^2 with twists in [-{}, {}]",
            self.tested, self.twist_bound, self.twist_bound
        );
        for b in &self.satisfying {
            let _ = writeln!(
                out,
                "satisfies the seven conditions: {}",
                b.format_compact()
            );
        }
        let _ = writeln!(out, "satisfying atoms: {}", self.satisfying.len());
        out
    }
}

pub fn scan_ex23(twist_bound: i64) -> Result<Ex23Report> {
    let space = Space::biprojective(2, 2)?;
    let atoms = enumerate_atoms(&space, twist_bound);
    let bundles: Vec<Bundle> = atoms
        .into_iter()
        .map(|a| Bundle::from_atoms(space.clone(), vec![a]).unwrap())
        .collect();
    let tested = bundles.len();
    let flags = exec::map(bundles.clone(), |b| {
        check_thm21(&b, 1, 1)
            .map(|r| r.criterion_met)
            .unwrap_or(false)
    });
    let satisfying = bundles
        .into_iter()
        .zip(flags)
        .filter_map(|(b, ok)| ok.then_some(b))
        .collect();
    Ok(Ex23Report {
        twist_bound,
        tested,
        satisfying,
    })
}

/// Empirical soundness run: every tested bundle must satisfy
/// `criterion_met => conclusion_verified`. A nonempty violation list means
/// an implementation bug, never an expected outcome.
#[derive(Debug, Clone)]
pub struct SoundnessReport {
    pub label: String,
    pub twist_bound: i64,
    pub max_summands: usize,
    pub sample_budget: usize,
    pub seed: u64,
    pub tested: usize,
    pub violations: Vec<Bundle>,
}

impl SoundnessReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "scan": "soundness",
            "label": self.label,
            "twist_bound": self.twist_bound,
            "max_summands": self.max_summands,
            "sample_budget": self.sample_budget,
            "seed": self.seed,
            "tested": self.tested,
            "violations": self.violations.iter().map(Bundle::format_compact).collect::<Vec<_>>(),
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "soundness scan: {}", self.label);
        let _ = writeln!(
            out,
            "tested {} bundles (twist bound {}, up to {} summands, {} samples, seed {})",
            self.tested, self.twist_bound, self.max_summands, self.sample_budget, self.seed
        );
        for b in &self.violations {
            let _ = writeln!(out, "VIOLATION: {}", b.format_compact());
        }
        let _ = writeln!(out, "violations: {}", self.violations.len());
        out
    }
}

/// The soundness-scan corpus: every single atom within `twist_bound`, then
/// `sample_budget` seeded random sums. Shared with the chain-implication
/// sweep so both look at the same bundles.
pub fn soundness_corpus(
    space: &Space,
    twist_bound: i64,
    max_summands: usize,
    sample_budget: usize,
    seed: u64,
) -> Vec<Bundle> {
    let pool = enumerate_atoms(space, twist_bound);
    let mut bundles: Vec<Bundle> = pool
        .iter()
        .map(|a| Bundle::from_atoms(space.clone(), vec![a.clone()]).unwrap())
        .collect();
    if max_summands >= 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..sample_budget {
            bundles.push(random_sum(&mut rng, space, &pool, max_summands));
        }
    }
    bundles
}

fn thm21_violation(b: &Bundle, p: usize, q: usize) -> Option<Bundle> {
    let r = check_thm21(b, p, q).expect("corpus bundles are valid inputs");
    (r.criterion_met && !r.conclusion_verified).then(|| b.clone())
}

pub fn scan_soundness(
    space: &Space,
    p: usize,
    q: usize,
    twist_bound: i64,
    max_summands: usize,
    sample_budget: usize,
    seed: u64,
) -> Result<SoundnessReport> {
    if space.arity() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            got: space.arity(),
        });
    }
    let bundles = soundness_corpus(space, twist_bound, max_summands, sample_budget, seed);
    let tested = bundles.len();
    let violations = exec::map(bundles, |b| thm21_violation(&b, p, q))
        .into_iter()
        .flatten()
        .collect();
    Ok(SoundnessReport {
        label: format!("thm21 (p={p}, q={q}) on {space}"),
        twist_bound,
        max_summands,
        sample_budget,
        seed,
        tested,
        violations,
    })
}

/// Sequential twin of [`scan_soundness`], for benchmarking.
pub fn scan_soundness_seq(
    space: &Space,
    p: usize,
    q: usize,
    twist_bound: i64,
    max_summands: usize,
    sample_budget: usize,
    seed: u64,
) -> Result<SoundnessReport> {
    if space.arity() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            got: space.arity(),
        });
    }
    let bundles = soundness_corpus(space, twist_bound, max_summands, sample_budget, seed);
    let tested = bundles.len();
    let violations = exec::map_seq(bundles, |b| thm21_violation(&b, p, q))
        .into_iter()
        .flatten()
        .collect();
    Ok(SoundnessReport {
        label: format!("thm21 (p={p}, q={q}) on {space}"),
        twist_bound,
        max_summands,
        sample_budget,
        seed,
        tested,
        violations,
    })
}

/// Soundness scan for the single-space criterion: exhaustive single atoms
/// and exhaustive two-atom sums, checked at every valid `p`.
pub fn scan_prop13_soundness(n: usize, twist_bound: i64) -> Result<SoundnessReport> {
    let space = Space::projective(n)?;
    if n < 2 {
        return Err(Error::InvalidParameter(
            "the single-space criterion needs n >= 2".into(),
        ));
    }
    let pool = enumerate_atoms(&space, twist_bound);
    let mut bundles: Vec<Bundle> = pool
        .iter()
        .map(|a| Bundle::from_atoms(space.clone(), vec![a.clone()]).unwrap())
        .collect();
    for (i, a) in pool.iter().enumerate() {
        for b in &pool[i..] {
            bundles.push(Bundle::from_atoms(space.clone(), vec![a.clone(), b.clone()]).unwrap());
        }
    }
    let tested = bundles.len();
    let violations = exec::map(bundles, |b| {
        for p in 1..n {
            let r = check_prop13(&b, p).expect("corpus bundles are valid inputs");
            if r.criterion_met && !r.conclusion_verified {
                return Some(b.clone());
            }
        }
        None
    })
    .into_iter()
    .flatten()
    .collect();
    Ok(SoundnessReport {
        label: format!("prop13 (all p) on {space}"),
        twist_bound,
        max_summands: 2,
        sample_budget: 0,
        seed: 0,
        tested,
        violations,
    })
}
