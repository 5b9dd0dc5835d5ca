//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use supermatch::poset::eliminate;
use supermatch::reduction::sample_params;
use supermatch::satsm::{solve_clauses, DEFAULT_CONFLICT_CAP};
use supermatch::*;

const INSTANCES: u64 = 200;
const MAX_X: usize = 12;

fn lattice_of(inst: &Instance) -> Vec<Matching> {
    enumerate_stable_matchings(inst, DEFAULT_ENUMERATION_CAP)
        .unwrap()
        .into_iter()
        .map(|(_, m)| m)
        .collect()
}

fn wives_of(ms: &[Matching]) -> BTreeSet<Vec<Option<usize>>> {
    ms.iter().map(|m| m.wives().to_vec()).collect()
}

fn random_instances() -> Vec<SatSmInstance> {
    (0..INSTANCES)
        .map(|seed| {
            let p = sample_params(seed, MAX_X).unwrap();
            assert!(p.universe <= 12 && p.lists <= 8);
            generate_random_satsm(p).unwrap_or_else(|e| panic!("{p:?}: {e}"))
        })
        .collect()
}

fn c1_golden_lattice() -> String {
    let inst = table1();
    let listed = wives_of(&rows());
    let brute = oracle_all_stable(&inst);
    assert_eq!(brute, listed, "listed rows are not the stable set");

    let found = enumerate_stable_matchings(&inst, DEFAULT_ENUMERATION_CAP).unwrap();
    assert_eq!(found.len(), 11);
    let got: BTreeSet<_> = found.iter().map(|(_, m)| m.wives().to_vec()).collect();
    assert_eq!(got, listed);

    assert_eq!(deferred_acceptance(&inst, Side::MenProposing), row(0));
    assert_eq!(deferred_acceptance(&inst, Side::WomenProposing), row(10));

    let p = find_rotations(&inst);
    let s2 = p.closed_subset_of(&row(2)).unwrap();
    assert_eq!(s2.members(), &BTreeSet::from([0, 1]));
    let (leaves, neighbors) = p.leaf_and_neighbor(&s2);
    assert_eq!(leaves, BTreeSet::from([1]));
    assert_eq!(neighbors, BTreeSet::from([2, 4]));
    "11 matchings, S(M2) = {ρ0, ρ1}, L = {ρ1}, N = {ρ2, ρ4}".into()
}

fn c2_rotation_semantics() -> String {
    let p = find_rotations(&table1());
    let steps = [
        (0, 0, 1),
        (1, 1, 2),
        (2, 4, 3),
        (3, 5, 4),
        (2, 2, 5),
        (5, 4, 6),
        (3, 2, 6),
        (4, 2, 7),
        (6, 5, 7),
        (5, 3, 8),
        (6, 3, 9),
        (8, 4, 9),
        (7, 3, 10),
        (9, 5, 10),
    ];
    for (from, rho, to) in steps {
        assert_eq!(eliminate(&row(from), p.rotation(rho)).unwrap(), row(to), "M{to} = M{from}/ρ{rho}");
    }
    // (apex, first, second, bottom): both orders from the apex meet at the bottom.
    let diamonds = [(2, 2, 4, 6), (3, 2, 5, 7), (5, 3, 4, 9), (6, 3, 5, 10)];
    for (apex, r1, r2, bottom) in diamonds {
        let a = eliminate(&eliminate(&row(apex), p.rotation(r1)).unwrap(), p.rotation(r2)).unwrap();
        let b = eliminate(&eliminate(&row(apex), p.rotation(r2)).unwrap(), p.rotation(r1)).unwrap();
        assert_eq!(a, row(bottom));
        assert_eq!(b, row(bottom));
    }
    format!("{} eliminations, {} diamonds", steps.len(), diamonds.len())
}

fn c3_robustness_oracle() -> String {
    let inst = table1();
    let brute: Vec<Vec<Option<usize>>> = oracle_all_stable(&inst).into_iter().collect();
    let m2 = row(2);
    let failures = oracle_supermatch_failures(&brute, m2.wives(), 1, 1);
    // The reported Ψ is the irreparable one whose nearest avoider is farthest.
    let worst = failures.iter().max_by_key(|(_, d)| d.unwrap_or(usize::MAX)).unwrap();
    assert_eq!(worst, &(vec![3], Some(4)));
    let passing: Vec<usize> = (0..11)
        .filter(|&i| oracle_supermatch_failures(&brute, row(i).wives(), 1, 1).is_empty())
        .collect();
    assert_eq!(passing, vec![6]);

    let lattice = lattice_of(&inst);
    let q = RobustnessQuery::new(1, 1).unwrap();
    let v = is_ab_supermatch(&inst, &lattice, &m2, q).unwrap();
    assert!(!v.holds);
    assert_eq!(v.witness.unwrap().broken, vec![(3, 3)]);
    assert_eq!(v.nearest_distance, Some(4));
    assert_eq!(exists_ab_supermatch(&inst, q).unwrap(), Some(row(6)));
    "M2 fails on Ψ = {(3,3)} at distance 4; M6 found".into()
}

fn c4_cnf_audit(instances: &[SatSmInstance]) -> String {
    let mut negative_binaries = 0;
    for inst in instances {
        let cnf = build_cnf(inst).unwrap();
        let ks: Vec<usize> = inst.lists().iter().map(Vec::len).collect();
        let a: Vec<_> = cnf.group(ClauseGroup::A).collect();
        assert_eq!(a.len(), inst.n());
        for c in &a {
            let k = ks[c.list.unwrap()];
            assert!(c.is_all_positive(), "{c}");
            assert_eq!(c.lits.len(), 2 * k);
            assert!(c.lits.len() >= 4);
        }
        let expected: usize = ks.iter().map(|k| 2 * (k - 1)).sum();
        assert_eq!(cnf.c1_pairwise(), expected);
        assert!(cnf.pre_dedup_counts().c1 >= expected);
        let neg = cnf
            .group(ClauseGroup::C1)
            .filter(|c| c.lits.len() == 2 && c.is_all_negative())
            .count();
        assert!(neg > 0);
        negative_binaries += neg;
        audit_schaefer(&cnf).unwrap();
    }
    format!("{} instances, {negative_binaries} binary all-negative C1 clauses", instances.len())
}

fn c5_equivalence(instances: &[SatSmInstance]) -> String {
    let (mut sat, mut unsat, mut backward) = (0, 0, 0);
    for inst in instances {
        let red = reduce(inst).unwrap();
        let cnf = build_cnf(inst).unwrap();
        let brute: Vec<Vec<Option<usize>>> = oracle_all_stable(&red.instance).into_iter().collect();
        let supermatches: Vec<&Vec<Option<usize>>> = brute
            .iter()
            .filter(|m| oracle_supermatch_failures(&brute, m, 1, 1).is_empty())
            .collect();
        let model = solve(&cnf).unwrap();
        assert_eq!(model.is_some(), !supermatches.is_empty(), "{inst:?}");
        if let Some(asg) = model {
            sat += 1;
            let (_, m) = map_solution_forward(&red, &asg).unwrap();
            assert!(supermatches.contains(&&m.wives().to_vec()), "{inst:?}");
        } else {
            unsat += 1;
        }
        for wives in supermatches {
            let m = Matching::from_wives(wives).unwrap();
            let s = red.poset.closed_subset_of(&m).unwrap();
            assert!(cnf.is_satisfied_by(&map_solution_backward(&red.poset, &s)), "{inst:?}");
            backward += 1;
        }
    }
    format!("{sat} SAT, {unsat} UNSAT, {backward} supermatches mapped back")
}

fn c6_family_f(instances: &[SatSmInstance]) -> String {
    for inst in instances {
        let report = validate_family_f(&reduce_to_poset(inst).unwrap());
        assert!(report.passes(), "{}", report.summary());
    }
    let report = validate_family_f(&find_rotations(&table1()));
    assert!(!report.p1_two_pairs);
    assert!(report.pairs_per_rotation.contains(&3));
    format!("{} reduced posets pass; Table 1 fails P1 ({})", instances.len(), report.summary().replace('\n', "; "))
}

fn c7_round_trip(instances: &[SatSmInstance]) -> String {
    let diamond = SatSmInstance::new(4, vec![vec![1, 2], vec![1, 3], vec![2, 4], vec![3, 4]]);
    for inst in instances.iter().chain([&diamond]) {
        let p = reduce_to_poset(inst).unwrap();
        let back = find_rotations(&synthesize_preferences(&p).unwrap());
        assert!(back.is_isomorphic(&p), "{inst:?}");
    }
    format!("{} posets", instances.len() + 1)
}

fn c8_solver(seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sat, mut unsat) = (0, 0);
    for _ in 0..100 {
        let vars = rng.gen_range(1..=15usize);
        let count = rng.gen_range(1..=4 * vars);
        let clauses: Vec<Vec<i32>> = (0..count)
            .map(|_| {
                let len = rng.gen_range(1..=3);
                (0..len)
                    .map(|_| {
                        let v = rng.gen_range(1..=vars) as i32;
                        if rng.gen() {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect()
            })
            .collect();
        let truth = (0u32..1 << vars).any(|bits| {
            clauses.iter().all(|c| {
                c.iter().any(|&l| {
                    let value = bits >> (l.unsigned_abs() - 1) & 1 == 1;
                    value == (l > 0)
                })
            })
        });
        match solve_clauses(vars, &clauses, DEFAULT_CONFLICT_CAP).unwrap() {
            Some(model) => {
                assert!(truth);
                for c in &clauses {
                    assert!(c.iter().any(|&l| model[l.unsigned_abs() as usize - 1] == (l > 0)));
                }
                sat += 1;
            }
            None => {
                assert!(!truth);
                unsat += 1;
            }
        }
    }
    format!("100 CNFs: {sat} SAT, {unsat} UNSAT")
}

fn run(failed: &mut usize, id: u32, name: &str, limit: Duration, f: impl FnOnce() -> String) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f));
    let took = start.elapsed();
    let line = match outcome {
        Ok(detail) if took <= limit => format!("PASS  {detail}"),
        Ok(detail) => format!("FAIL  over time limit {limit:?}: {detail}"),
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            format!("FAIL  {msg}")
        }
    };
    if line.starts_with("FAIL") {
        *failed += 1;
    }
    println!("criterion {id} [{name}] {took:.2?}: {line}");
}

fn main() {
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    let secs = Duration::from_secs;
    run(&mut failed, 1, "golden lattice", secs(1), c1_golden_lattice);
    run(&mut failed, 2, "rotation semantics", secs(1), c2_rotation_semantics);
    run(&mut failed, 3, "robustness oracle", secs(1), c3_robustness_oracle);
    let instances = random_instances();
    run(&mut failed, 4, "CNF structural audit", secs(5), || c4_cnf_audit(&instances));
    run(&mut failed, 5, "SAT-SM equivalence", secs(60), || c5_equivalence(&instances));
    run(&mut failed, 6, "family-F validation", secs(5), || c6_family_f(&instances));
    run(&mut failed, 7, "poset round trip", secs(10), || c7_round_trip(&instances));
    run(&mut failed, 8, "solver soundness", secs(10), || c8_solver(8));
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
