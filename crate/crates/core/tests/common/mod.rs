//! Fixtures and brute-force oracles shared by the integration tests. Nothing
//! here calls into the rotation machinery it is used to check.
#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use supermatch::{parse_instance, Instance, Matching};

pub const TABLE1: &str = include_str!("../data/table1.sm");

pub fn table1() -> Instance {
    parse_instance(TABLE1).unwrap()
}

/// Each man's partner in the rows M0..M10 of the published lattice listing.
pub const TABLE2_WIVES: [[usize; 7]; 11] = [
    [5, 4, 6, 3, 1, 0, 2],
    [2, 4, 6, 3, 1, 0, 5],
    [2, 5, 6, 3, 1, 4, 0],
    [2, 5, 0, 3, 1, 4, 6],
    [2, 3, 0, 5, 1, 4, 6],
    [4, 5, 6, 3, 1, 2, 0],
    [4, 5, 0, 3, 1, 2, 6],
    [4, 3, 0, 5, 1, 2, 6],
    [1, 5, 6, 3, 4, 2, 0],
    [1, 5, 0, 3, 4, 2, 6],
    [1, 3, 0, 5, 4, 2, 6],
];

pub fn row(i: usize) -> Matching {
    Matching::from_pairs(7, TABLE2_WIVES[i].iter().copied().enumerate()).unwrap()
}

pub fn rows() -> Vec<Matching> {
    (0..11).map(row).collect()
}

/// Blocking-pair test written directly against preference positions.
pub fn oracle_is_stable(inst: &Instance, wives: &[Option<usize>]) -> bool {
    let n = inst.n();
    let mut husband = vec![None; n];
    for (m, w) in wives.iter().enumerate() {
        if let Some(w) = *w {
            if inst.man_rank(m, w).is_none() {
                return false;
            }
            husband[w] = Some(m);
        }
    }
    for m in 0..n {
        for &w in inst.man_prefs(m) {
            let man_better = match wives[m] {
                None => true,
                Some(cur) => inst.man_rank(m, w) < inst.man_rank(m, cur),
            };
            let woman_better = match husband[w] {
                None => true,
                Some(cur) => inst.woman_rank(w, m) < inst.woman_rank(w, cur),
            };
            if man_better && woman_better && wives[m] != Some(w) {
                return false;
            }
        }
    }
    true
}

/// All stable matchings by exhaustive search over every (partial) injective
/// assignment of acceptable pairs.
pub fn oracle_all_stable(inst: &Instance) -> BTreeSet<Vec<Option<usize>>> {
    fn go(
        inst: &Instance,
        m: usize,
        wives: &mut Vec<Option<usize>>,
        taken: &mut Vec<bool>,
        out: &mut BTreeSet<Vec<Option<usize>>>,
    ) {
        if m == inst.n() {
            if oracle_is_stable(inst, wives) {
                out.insert(wives.clone());
            }
            return;
        }
        for &w in inst.man_prefs(m) {
            if !taken[w] {
                taken[w] = true;
                wives[m] = Some(w);
                go(inst, m + 1, wives, taken, out);
                taken[w] = false;
            }
        }
        wives[m] = None;
        go(inst, m + 1, wives, taken, out);
    }
    let n = inst.n();
    let mut out = BTreeSet::new();
    go(inst, 0, &mut vec![None; n], &mut vec![false; n], &mut out);
    out
}

pub fn oracle_distance(a: &[Option<usize>], b: &[Option<usize>]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// `(a,b)`-supermatch test by scanning every Ψ and every stable matching.
/// Returns `None` when `m` passes, otherwise the irreparable Ψ (as man ids)
/// together with its nearest avoiding distance.
pub fn oracle_supermatch_failures(
    lattice: &[Vec<Option<usize>>],
    m: &[Option<usize>],
    a: usize,
    b: usize,
) -> Vec<(Vec<usize>, Option<usize>)> {
    let n = m.len();
    let nonfixed: Vec<usize> = (0..n)
        .filter(|&x| m[x].is_some() && lattice.iter().any(|o| o[x] != m[x]))
        .collect();
    let mut failures = Vec::new();
    let mut choose = |psi: Vec<usize>| {
        let best = lattice
            .iter()
            .filter(|o| psi.iter().all(|&x| o[x] != m[x]))
            .map(|o| oracle_distance(m, o))
            .min();
        if best.is_none_or(|d| d - a > b) {
            failures.push((psi, best));
        }
    };
    fn subsets(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(Vec<usize>)) {
        if cur.len() == k {
            f(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            subsets(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    if nonfixed.len() >= a {
        subsets(&nonfixed, a, 0, &mut Vec::new(), &mut choose);
    }
    failures
}

/// Random instances with up to `max_n` people per side, each pair
/// acceptable with probability 0.8.
pub fn arb_instance(max_n: usize) -> impl Strategy<Value = Instance> {
    (1..=max_n).prop_flat_map(|n| {
        let accept = proptest::collection::vec(proptest::bool::weighted(0.8), n * n);
        let perm = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
        let men = proptest::collection::vec(perm, n);
        let women = men.clone();
        (accept, men, women).prop_map(move |(acc, men, women)| {
            let ok = |m: usize, w: usize| acc[m * n + w];
            let men: Vec<Vec<usize>> = men
                .into_iter()
                .enumerate()
                .map(|(m, l)| l.into_iter().filter(|&w| ok(m, w)).collect())
                .collect();
            let women: Vec<Vec<usize>> = women
                .into_iter()
                .enumerate()
                .map(|(w, l)| l.into_iter().filter(|&m| ok(m, w)).collect())
                .collect();
            Instance::new(men, women).unwrap()
        })
    })
}
