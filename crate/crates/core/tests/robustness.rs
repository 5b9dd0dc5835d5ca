mod common;

use common::*;
use proptest::prelude::*;
use supermatch::{
    enumerate_stable_matchings, exists_ab_supermatch, first_ab_supermatch, holds_ab_supermatch,
    is_ab_supermatch, repairs, Instance, Matching, RobustnessQuery, DEFAULT_ENUMERATION_CAP,
};

fn lattice(inst: &Instance) -> Vec<Matching> {
    enumerate_stable_matchings(inst, DEFAULT_ENUMERATION_CAP)
        .unwrap()
        .into_iter()
        .map(|e| e.1)
        .collect()
}

fn wives(ms: &[Matching]) -> Vec<Vec<Option<usize>>> {
    ms.iter().map(|m| m.wives().to_vec()).collect()
}

#[test]
fn table1_verdicts_for_every_row() {
    let inst = table1();
    let all = lattice(&inst);
    let brute = wives(&all);
    let q = RobustnessQuery::new(1, 1).unwrap();
    for m in &all {
        let expected = oracle_supermatch_failures(&brute, m.wives(), 1, 1).is_empty();
        assert_eq!(holds_ab_supermatch(&inst, &all, m, q).unwrap(), expected, "{m}");
    }
}

#[test]
fn table1_m2_failures_match_the_oracle() {
    let inst = table1();
    let all = lattice(&inst);
    let failures = oracle_supermatch_failures(&wives(&all), row(2).wives(), 1, 1);
    assert_eq!(
        failures,
        vec![(vec![1], Some(3)), (vec![3], Some(4)), (vec![4], Some(3))]
    );
}

#[test]
fn larger_budgets_admit_more_rows() {
    let inst = table1();
    let all = lattice(&inst);
    let count = |a, b| {
        let q = RobustnessQuery::new(a, b).unwrap();
        all.iter().filter(|m| holds_ab_supermatch(&inst, &all, m, q).unwrap()).count()
    };
    assert_eq!(count(1, 1), 1);
    assert_eq!(count(1, 6), 11);
    assert!(count(1, 2) >= count(1, 1));
    assert!(count(2, 2) <= count(2, 5));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn verdicts_agree_with_the_oracle(inst in arb_instance(6), a in 1usize..=3, b in 0usize..=3) {
        let all = lattice(&inst);
        let brute = wives(&all);
        let q = RobustnessQuery::new(a, b).unwrap();
        for m in &all {
            let failures = oracle_supermatch_failures(&brute, m.wives(), a, b);
            let v = is_ab_supermatch(&inst, &all, m, q).unwrap();
            prop_assert_eq!(v.holds, failures.is_empty());
            prop_assert_eq!(holds_ab_supermatch(&inst, &all, m, q).unwrap(), v.holds);
            if let Some(w) = &v.witness {
                let men: Vec<usize> = w.broken.iter().map(|p| p.0).collect();
                let listed = failures.iter().find(|f| f.0 == men);
                prop_assert!(listed.is_some(), "witness {:?} is not irreparable", men);
                prop_assert_eq!(listed.unwrap().1, v.nearest_distance);
            }
            let rs = repairs(&inst, &all, m, q).unwrap();
            prop_assert_eq!(rs.is_some(), v.holds);
            for r in rs.into_iter().flatten() {
                prop_assert!(r.is_consistent(m, q));
            }
        }
    }

    #[test]
    fn verdicts_are_monotone_in_b(inst in arb_instance(6), a in 1usize..=2, b in 0usize..=3) {
        let all = lattice(&inst);
        let tight = RobustnessQuery::new(a, b).unwrap();
        let loose = RobustnessQuery::new(a, b + 1).unwrap();
        for m in &all {
            if holds_ab_supermatch(&inst, &all, m, tight).unwrap() {
                prop_assert!(holds_ab_supermatch(&inst, &all, m, loose).unwrap());
            }
        }
    }

    #[test]
    fn existence_returns_the_first_passing_matching(inst in arb_instance(6)) {
        let all = lattice(&inst);
        let brute = wives(&all);
        let q = RobustnessQuery::new(1, 1).unwrap();
        let expected = all
            .iter()
            .find(|m| oracle_supermatch_failures(&brute, m.wives(), 1, 1).is_empty());
        prop_assert_eq!(first_ab_supermatch(&inst, &all, q).unwrap(), expected);
        let found = exists_ab_supermatch(&inst, q).unwrap();
        prop_assert_eq!(found.as_ref(), expected);
    }
}
