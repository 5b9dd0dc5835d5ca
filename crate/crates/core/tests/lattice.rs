mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use supermatch::poset::eliminate;
use supermatch::{
    deferred_acceptance, distance, enumerate_stable_matchings, find_rotations, fixed_pairs,
    is_stable, men_of, Instance, Matching, PosetError, Side, DEFAULT_ENUMERATION_CAP,
};

#[test]
fn table1_has_six_rotations_numbered_along_the_listed_chain() {
    let p = find_rotations(&table1());
    assert_eq!(p.len(), 6);
    let cycles: Vec<Vec<(usize, usize)>> = p.rotations().iter().map(|r| r.cycle().to_vec()).collect();
    assert_eq!(
        cycles,
        vec![
            vec![(0, 5), (6, 2)],
            vec![(1, 4), (6, 5), (5, 0)],
            vec![(0, 2), (5, 4)],
            vec![(0, 4), (4, 1)],
            vec![(2, 6), (6, 0)],
            vec![(1, 5), (3, 3)],
        ]
    );
}

#[test]
fn table1_precedence_matches_elimination_chains() {
    let p = find_rotations(&table1());
    // Derived from which rotations are exposed on which rows.
    let expected: BTreeSet<(usize, usize)> = [(0, 1), (1, 2), (1, 4), (2, 3), (4, 5)].into();
    let got: BTreeSet<(usize, usize)> = p.edges().iter().map(|e| (e.0, e.1)).collect();
    assert_eq!(got, expected);
    assert!(p.precedes(0, 5));
    assert!(!p.precedes(2, 4) && !p.precedes(4, 2));
    assert!(!p.precedes(3, 5) && !p.precedes(5, 3));
}

#[test]
fn eliminations_follow_the_listed_rows() {
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
        let got = eliminate(&row(from), p.rotation(rho)).unwrap();
        assert_eq!(got, row(to), "M{to} = M{from}/ρ{rho}");
        assert_eq!(distance(&row(from), &got), p.rotation(rho).len());
        assert!(is_stable(&table1(), &got));
    }
    assert!(matches!(
        eliminate(&row(0), p.rotation(1)),
        Err(PosetError::NotExposed { id: 1, .. })
    ));
}

#[test]
fn closed_subsets_of_listed_rows() {
    let p = find_rotations(&table1());
    let subsets: [&[usize]; 11] = [
        &[],
        &[0],
        &[0, 1],
        &[0, 1, 4],
        &[0, 1, 4, 5],
        &[0, 1, 2],
        &[0, 1, 2, 4],
        &[0, 1, 2, 4, 5],
        &[0, 1, 2, 3],
        &[0, 1, 2, 3, 4],
        &[0, 1, 2, 3, 4, 5],
    ];
    for (i, ids) in subsets.iter().enumerate() {
        let s = p.closed_subset(ids.iter().copied()).unwrap();
        assert_eq!(p.closed_subset_of(&row(i)).unwrap(), s, "M{i}");
        assert_eq!(p.matching_of(&s).unwrap(), row(i), "M{i}");
    }
    let blocked = Matching::from_pairs(7, [5, 4, 6, 3, 1, 2, 0].into_iter().enumerate()).unwrap();
    assert!(p.closed_subset_of(&blocked).is_err());
}

#[test]
fn leaves_and_neighbours() {
    let p = find_rotations(&table1());
    let s2 = p.closed_subset([0, 1]).unwrap();
    assert_eq!(p.leaf_and_neighbor(&s2), (BTreeSet::from([1]), BTreeSet::from([2, 4])));
    let (l, n) = p.leaf_and_neighbor(&p.closed_subset([]).unwrap());
    assert!(l.is_empty());
    assert_eq!(n, BTreeSet::from([0]));
    let (l, n) = p.leaf_and_neighbor(&p.full_subset());
    assert_eq!(l, BTreeSet::from([3, 5]));
    assert!(n.is_empty());
}

#[test]
fn men_involved() {
    let p = find_rotations(&table1());
    assert_eq!(men_of([p.rotation(1)]), BTreeSet::from([1, 5, 6]));
    assert_eq!(men_of([p.rotation(2), p.rotation(4)]), BTreeSet::from([0, 2, 5, 6]));
    assert!(men_of(std::iter::empty()).is_empty());
}

#[test]
fn enumeration_reproduces_the_listing() {
    let inst = table1();
    let all = enumerate_stable_matchings(&inst, DEFAULT_ENUMERATION_CAP).unwrap();
    assert_eq!(all.len(), 11);
    let got: BTreeSet<Matching> = all.iter().map(|e| e.1.clone()).collect();
    assert_eq!(got, rows().into_iter().collect());
    assert_eq!(all[0].1, deferred_acceptance(&inst, Side::MenProposing));
    assert_eq!(all[0].1, row(0));
    assert_eq!(deferred_acceptance(&inst, Side::WomenProposing), row(10));
    // Sorted by member ids.
    assert!(all.windows(2).all(|w| w[0].0 < w[1].0));
    assert!(fixed_pairs(&got.into_iter().collect::<Vec<_>>()).unwrap().is_empty());
    assert!(matches!(
        enumerate_stable_matchings(&inst, 10),
        Err(PosetError::EnumerationLimit { cap: 10 })
    ));
}

#[test]
fn single_pair_instance_has_one_matching() {
    let inst: Instance = "1\n0\n0\n".parse().unwrap();
    let p = find_rotations(&inst);
    assert!(p.is_empty());
    let all = p.enumerate(DEFAULT_ENUMERATION_CAP).unwrap();
    assert_eq!(all.len(), 1);
    assert!(all[0].0.is_empty());
    assert_eq!(all[0].1.pair_set(), BTreeSet::from([(0, 0)]));
}

#[test]
fn dot_and_json_renderings() {
    let p = find_rotations(&table1());
    let dot = p.to_dot();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("[label=\"ρ").count(), 6);
    assert_eq!(dot.matches("->").count(), 5);
    let json = p.to_json();
    assert!(json.starts_with(r#"{"rotations":[{"id":0,"cycle":[[0,5],[6,2]]}"#), "{json}");
    assert!(json.ends_with(r#""edges":[[0,1,1],[1,2,1],[1,4,1],[2,3,1],[4,5,2]]}"#), "{json}");
}

// Random complete or incomplete instances with mutual acceptability.
proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn enumeration_matches_exhaustive_search(inst in arb_instance(6)) {
        let all = enumerate_stable_matchings(&inst, DEFAULT_ENUMERATION_CAP).unwrap();
        let got: BTreeSet<Vec<Option<usize>>> = all.iter().map(|e| e.1.wives().to_vec()).collect();
        prop_assert_eq!(got.len(), all.len());
        prop_assert_eq!(got, oracle_all_stable(&inst));
    }

    #[test]
    fn closed_subsets_round_trip(inst in arb_instance(6)) {
        let p = find_rotations(&inst);
        for (s, m) in p.enumerate(DEFAULT_ENUMERATION_CAP).unwrap() {
            prop_assert_eq!(&p.closed_subset_of(&m).unwrap(), &s);
            prop_assert_eq!(&p.matching_of(&s).unwrap(), &m);
        }
    }

    #[test]
    fn extreme_matchings_are_optimal_and_stable(inst in arb_instance(6)) {
        let m0 = deferred_acceptance(&inst, Side::MenProposing);
        let mz = deferred_acceptance(&inst, Side::WomenProposing);
        prop_assert!(is_stable(&inst, &m0));
        prop_assert!(is_stable(&inst, &mz));
        for wives in oracle_all_stable(&inst) {
            for (m, w) in wives.iter().enumerate() {
                if let Some(w) = *w {
                    prop_assert!(inst.man_rank(m, m0.wife(m).unwrap()) <= inst.man_rank(m, w));
                    prop_assert!(inst.woman_rank(w, mz.husband(w).unwrap()) <= inst.woman_rank(w, m));
                }
            }
        }
    }

    #[test]
    fn elimination_order_does_not_matter(inst in arb_instance(6), seed in any::<u64>()) {
        let p = find_rotations(&inst);
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        for (s, m) in p.enumerate(DEFAULT_ENUMERATION_CAP).unwrap() {
            // A random linear extension of the members.
            let mut left: Vec<usize> = s.members().iter().copied().collect();
            let mut cur = p.base().clone();
            let mut done = BTreeSet::new();
            while !left.is_empty() {
                let ready: Vec<usize> = left
                    .iter()
                    .copied()
                    .filter(|&r| p.all_predecessors(r).all(|q| done.contains(&q)))
                    .collect();
                let pick = ready[rand::Rng::gen_range(&mut rng, 0..ready.len())];
                cur = eliminate(&cur, p.rotation(pick)).unwrap();
                done.insert(pick);
                left.retain(|&r| r != pick);
            }
            prop_assert_eq!(cur, m);
        }
    }

    #[test]
    fn eliminated_pairs_never_return(inst in arb_instance(6)) {
        let p = find_rotations(&inst);
        let m0 = p.base().clone();
        let mut eliminated = BTreeSet::new();
        let mut produced = BTreeSet::new();
        for r in p.rotations() {
            for &pair in r.cycle() {
                prop_assert!(eliminated.insert(pair), "pair {:?} eliminated twice", pair);
            }
            for pair in r.produced() {
                prop_assert!(produced.insert(pair));
                prop_assert!(!m0.contains(pair.0, pair.1));
            }
        }
        // Every produced or base pair is stable.
        let stable_pairs: BTreeSet<(usize, usize)> = oracle_all_stable(&inst)
            .into_iter()
            .flat_map(|w| w.into_iter().enumerate().filter_map(|(m, w)| w.map(|w| (m, w))).collect::<Vec<_>>())
            .collect();
        prop_assert!(produced.is_subset(&stable_pairs));
        prop_assert!(m0.pair_set().is_subset(&stable_pairs));
    }

    #[test]
    fn precedence_is_a_strict_order(inst in arb_instance(6)) {
        let p = find_rotations(&inst);
        let k = p.len();
        for a in 0..k {
            prop_assert!(!p.precedes(a, a));
            for b in 0..k {
                prop_assert!(!(p.precedes(a, b) && p.precedes(b, a)));
                for c in 0..k {
                    if p.precedes(a, b) && p.precedes(b, c) {
                        prop_assert!(p.precedes(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn distance_is_a_metric(inst in arb_instance(6)) {
        let all: Vec<Matching> = enumerate_stable_matchings(&inst, DEFAULT_ENUMERATION_CAP)
            .unwrap()
            .into_iter()
            .map(|e| e.1)
            .collect();
        for x in &all {
            for y in &all {
                prop_assert_eq!(distance(x, y), distance(y, x));
                prop_assert_eq!(distance(x, y) == 0, x == y);
                for z in &all {
                    prop_assert!(distance(x, z) <= distance(x, y) + distance(y, z));
                }
            }
        }
    }

    #[test]
    fn text_round_trip(inst in arb_instance(7)) {
        let text = inst.to_text();
        let back: Instance = text.parse().unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(back.to_text(), text);
    }
}
