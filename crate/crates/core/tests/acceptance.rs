//! The release gate: ten end-to-end criteria, each printing one pass/fail
//! line (visible with `cargo test --test acceptance -- --nocapture`).
//! Everything here is exact integer equality — no tolerances anywhere.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bott_core::bundle::{Bundle, FactorAtom, Space};
use bott_core::cohomology::{bott_dim, cohomology, euler, euler_factor};
use bott_core::criteria::{
    check_prop13, check_sv, check_thm21, enumerate_atoms, is_acm, scan_ex23, scan_prop13_soundness,
    scan_soundness, soundness_corpus, sv_support_by_sweep,
};
use bott_core::exec;
use bott_core::oracle::oracle_cohomology;
use bott_core::sequences::{
    certify_vanishing_chains, default_grid, glued_sequence, koszul_sequence, GluedSide, KoszulKind,
};

fn report<F: FnOnce() + std::panic::UnwindSafe>(idx: usize, name: &str, body: F) {
    match std::panic::catch_unwind(body) {
        Ok(()) => println!("acceptance {idx} ({name}): pass"),
        Err(e) => {
            println!("acceptance {idx} ({name}): FAIL");
            std::panic::resume_unwind(e);
        }
    }
}

fn random_bundle<R: Rng>(
    rng: &mut R,
    space: &Space,
    twist_bound: i64,
    max_summands: usize,
) -> Bundle {
    let pool = enumerate_atoms(space, twist_bound);
    let k = rng.gen_range(1..=max_summands);
    let atoms = (0..k)
        .map(|_| pool[rng.gen_range(0..pool.len())].clone())
        .collect();
    Bundle::from_atoms(space.clone(), atoms).unwrap()
}

#[test]
fn criterion_01_bott_oracle_agreement() {
    report(1, "Bott-oracle agreement", || {
        let mut queries = Vec::new();
        for n in 1..=4usize {
            for p in 0..=n {
                for l in -(n as i64 + 4)..=(n as i64 + 4) {
                    queries.push((n, p, l));
                }
            }
        }
        let total = queries.len();
        let mismatches: usize = exec::map(queries, |(n, p, l)| {
            let oracle = oracle_cohomology(n, p, l).unwrap();
            (0..=n)
                .filter(|&i| oracle[i] != bott_dim(n, p, l, i))
                .count()
        })
        .into_iter()
        .sum();
        assert_eq!(mismatches, 0, "closed form disagrees with the oracle");
        // n=1..4 contribute (n+1)(2n+9) query points each.
        assert_eq!(total, 2 * 11 + 3 * 13 + 4 * 15 + 5 * 17);
    });
}

#[test]
fn criterion_02_serre_duality_sweep() {
    report(2, "Serre duality sweep", || {
        let spaces: Vec<Space> = [(2, 2), (2, 3), (3, 2), (3, 3)]
            .into_iter()
            .map(|(m, n)| Space::biprojective(m, n).unwrap())
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(20260815);
        let bundles: Vec<Bundle> = (0..500)
            .map(|_| {
                let s = &spaces[rng.gen_range(0..spaces.len())];
                random_bundle(&mut rng, s, 4, 3)
            })
            .collect();
        let bad: usize = exec::map(bundles, |e| {
            let (m, n) = (e.space().factor_dims()[0], e.space().factor_dims()[1]);
            let d = m + n;
            let dual = e.dual();
            let mut bad = 0;
            for a in -6..=6i64 {
                for b in -6..=6i64 {
                    let lhs = cohomology(&e, &[a, b]).unwrap();
                    let rhs =
                        cohomology(&dual, &[-(m as i64) - 1 - a, -(n as i64) - 1 - b]).unwrap();
                    for i in 0..=d {
                        if lhs[i] != rhs[d - i] {
                            bad += 1;
                        }
                    }
                }
            }
            bad
        })
        .into_iter()
        .sum();
        assert_eq!(bad, 0, "Serre duality violated");
    });
}

#[test]
fn criterion_03_kunneth_euler_multiplicativity() {
    report(3, "Kunneth/Euler multiplicativity", || {
        let space = Space::biprojective(3, 3).unwrap();
        let mut atoms = Vec::new();
        for p1 in 0..=3i64 {
            for l1 in -5..=5i64 {
                for p2 in 0..=3i64 {
                    for l2 in -5..=5i64 {
                        atoms.push((p1, l1, p2, l2));
                    }
                }
            }
        }
        let bad: usize = exec::map(atoms, |(p1, l1, p2, l2)| {
            let e = Bundle::new(space.clone(), vec![(vec![(p1, l1), (p2, l2)], 1)]).unwrap();
            let f1 = e.atoms()[0].factors[0];
            let f2 = e.atoms()[0].factors[1];
            let mut bad = 0;
            for a in -4..=4i64 {
                for b in -4..=4i64 {
                    let joint = euler(&e, &[a, b]).unwrap();
                    let split = euler_factor(3, f1, a) * euler_factor(3, f2, b);
                    if joint != split {
                        bad += 1;
                    }
                }
            }
            bad
        })
        .into_iter()
        .sum();
        assert_eq!(bad, 0, "chi is not multiplicative across factors");
    });
}

#[test]
fn criterion_04_koszul_euler_exactness() {
    report(4, "Koszul Euler-exactness", || {
        for n in 1..=4usize {
            let grid = [(-(n as i64) - 3, n as i64 + 3)];
            for r in 0..=n {
                for kind in [
                    KoszulKind::E1,
                    KoszulKind::E2,
                    KoszulKind::E3,
                    KoszulKind::E4,
                ] {
                    let s = koszul_sequence(n, r, kind).unwrap();
                    let rep = s.verify_euler_exactness(&grid).unwrap();
                    assert!(rep.exact(), "{} n={n} r={r}: {:?}", s.label, rep.failures);
                }
            }
        }

        let p22 = Space::biprojective(2, 2).unwrap();
        let p32 = Space::biprojective(3, 2).unwrap();
        let samples = [
            Bundle::parse_compact("W(1,0)xW(1,0)", p22.clone()).unwrap(),
            Bundle::parse_compact("O(0,-3)", p22.clone()).unwrap(),
            Bundle::parse_compact("W(1,2)xO(-1) + O(3,0)*2", p22).unwrap(),
            Bundle::parse_compact("W(2,0)xW(1,0) + O(0,-3)*2", p32.clone()).unwrap(),
            Bundle::parse_compact("W(1,-1)xO(2) + W(2,1)xW(1,0)", p32).unwrap(),
        ];
        for e in &samples {
            let m = e.space().factor_dims()[0];
            let grid = default_grid(e.space());
            for p in 1..m {
                for side in [GluedSide::Phi, GluedSide::Psi] {
                    let s = glued_sequence(e, p, 1, side).unwrap();
                    let rep = s.verify_euler_exactness(&grid).unwrap();
                    assert!(
                        rep.exact(),
                        "{} p={p} on {}: {:?}",
                        s.label,
                        e,
                        rep.failures
                    );
                }
            }
        }
    });
}

#[test]
fn criterion_05_thm21_soundness_scan() {
    report(5, "thm21 soundness scan", || {
        let p22 = Space::biprojective(2, 2).unwrap();
        let r = scan_soundness(&p22, 1, 1, 4, 2, 2000, 1).unwrap();
        assert!(r.tested >= 324 + 2000);
        assert!(r.clean(), "violations: {:?}", r.to_json());

        let p32 = Space::biprojective(3, 2).unwrap();
        let r = scan_soundness(&p32, 2, 1, 3, 2, 1000, 1).unwrap();
        assert!(r.tested >= 294 + 1000);
        assert!(r.clean(), "violations: {:?}", r.to_json());
    });
}

#[test]
fn criterion_06_ex23_unique_atom() {
    report(6, "ex23 unique-atom scan", || {
        let p22 = Space::biprojective(2, 2).unwrap();
        let e = Bundle::parse_compact("W(1,0)xW(1,0)", p22).unwrap();
        assert_eq!(cohomology(&e, &[0, 0]).unwrap()[2], BigUint::from(1u32));
        let six = [
            (1, 1, 1),
            (2, 0, 1),
            (2, 1, 0),
            (2, -1, 0),
            (2, 0, -1),
            (3, -1, -1),
        ];
        for (i, a, b) in six {
            assert!(
                cohomology(&e, &[a, b]).unwrap()[i].is_zero(),
                "expected h^{i}(E({a},{b})) = 0"
            );
        }
        let scan = scan_ex23(6).unwrap();
        assert_eq!(scan.tested, 676);
        assert!(
            scan.is_unique_box_of_cotangents(),
            "satisfying set: {:?}",
            scan.to_json()
        );
    });
}

#[test]
fn criterion_07_prop13_soundness_scan() {
    report(7, "prop13 soundness scan", || {
        for n in [2usize, 3] {
            let r = scan_prop13_soundness(n, 5).unwrap();
            assert!(r.clean(), "violations on P^{n}: {:?}", r.to_json());
        }
        for n in 2..=4usize {
            let s = Space::projective(n).unwrap();
            for p in 1..n {
                let e = Bundle::new(s.clone(), vec![(vec![(p as i64, 0)], 1)]).unwrap();
                let rep = check_prop13(&e, p).unwrap();
                assert!(
                    rep.criterion_met && rep.conclusion_verified,
                    "Omega^{p} on P^{n}"
                );
            }
        }
    });
}

#[test]
fn criterion_08_sv_checker() {
    report(8, "SV checker", || {
        let p3 = Space::projective(3).unwrap();
        let good = Bundle::parse_compact("W(1,0) + W(2,0)", p3.clone()).unwrap();
        let r = check_sv(&good).unwrap();
        assert_eq!(r.support, vec![(1, 0), (2, 0)]);
        assert!(r.passes);

        let bad = Bundle::parse_compact("W(1,0) + W(1,1)", p3).unwrap();
        let r = check_sv(&bad).unwrap();
        assert_eq!(r.support, vec![(1, -1), (1, 0)]);
        assert_eq!(r.violations, vec![((1, -1), (1, 0))]);
        assert!(!r.passes);

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let n = rng.gen_range(2..=4usize);
            let space = Space::projective(n).unwrap();
            let e = random_bundle(&mut rng, &space, 5, 4);
            let structural = check_sv(&e).unwrap().support;
            let swept = sv_support_by_sweep(&e, 5).unwrap();
            assert_eq!(structural, swept, "support mismatch for {e}");
        }
    });
}

#[test]
fn criterion_09_acm_horrocks() {
    report(9, "ACM/Horrocks", || {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for i in 0..500 {
            let n = rng.gen_range(2..=4usize);
            let space = Space::projective(n).unwrap();
            let e = if i % 2 == 0 {
                // Forced all-line-bundle half so the positive verdict is
                // exercised as often as the negative one.
                let pool: Vec<_> = enumerate_atoms(&space, 5)
                    .into_iter()
                    .filter(|a| a.factors[0].p == 0)
                    .collect();
                let k = rng.gen_range(1..=4usize);
                let atoms = (0..k)
                    .map(|_| pool[rng.gen_range(0..pool.len())].clone())
                    .collect();
                Bundle::from_atoms(space, atoms).unwrap()
            } else {
                random_bundle(&mut rng, &space, 5, 4)
            };
            let (acm, verdict) = is_acm(&e).unwrap();
            let no_interior = sv_support_by_sweep(&e, 5).unwrap().is_empty();
            assert_eq!(acm, no_interior, "ACM verdict wrong for {e}: {verdict}");
        }
    });
}

#[test]
fn criterion_10_chain_implication() {
    report(10, "chain implication", || {
        let p22 = Space::biprojective(2, 2).unwrap();
        let p32 = Space::biprojective(3, 2).unwrap();
        let corpora = [
            (soundness_corpus(&p22, 4, 2, 2000, 1), 1usize, 1usize),
            (soundness_corpus(&p32, 3, 2, 1000, 1), 2, 1),
        ];
        for (corpus, p, q) in corpora {
            let broken: usize = exec::map(corpus, |e| {
                let conditions = check_thm21(&e, p, q).unwrap().conditions_hold();
                if !conditions {
                    return 0;
                }
                let chains = certify_vanishing_chains(&e, p, q).unwrap();
                usize::from(!chains.all_pass())
            })
            .into_iter()
            .sum();
            assert_eq!(
                broken, 0,
                "conditions held but a chain failed (p={p}, q={q})"
            );
        }
    });
}

#[test]
fn conclusion_atom_is_the_expected_one() {
    // Guards the conclusion wiring used throughout: the thm21 conclusion on
    // P^2 x P^2 at p=q=1 is the box of cotangent sheaves.
    let p22 = Space::biprojective(2, 2).unwrap();
    let e = Bundle::parse_compact("W(1,0)xW(1,0) + O(1,1)", p22).unwrap();
    let r = check_thm21(&e, 1, 1).unwrap();
    assert_eq!(
        r.conclusion.factors,
        vec![FactorAtom { p: 1, l: 0 }, FactorAtom { p: 1, l: 0 }]
    );
}
