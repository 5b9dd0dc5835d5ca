//! Stable marriage instances and matchings.

mod instance;
mod matching;

use std::collections::{BTreeSet, VecDeque};

pub(crate) use instance::content_lines;
pub use instance::{parse_instance, Instance, InstanceError, ParseError, Person};
pub use matching::{parse_matching, Matching, MatchingError};

/// Which side proposes in deferred acceptance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    MenProposing,
    WomenProposing,
}

/// Gale-Shapley deferred acceptance.
///
/// Men proposing yields the man-optimal matching `M0`, women proposing the
/// woman-optimal one. People who exhaust their lists stay single.
pub fn deferred_acceptance(inst: &Instance, side: Side) -> Matching {
    let n = inst.n();
    let (proposer_prefs, accepts): (&[Vec<usize>], &dyn Fn(usize, usize, Option<usize>) -> bool) =
        match side {
            Side::MenProposing => (inst.men_prefs(), &|w, m, cur| inst.woman_prefers(w, m, cur)),
            Side::WomenProposing => (inst.women_prefs(), &|m, w, cur| inst.man_prefers(m, w, cur)),
        };
    let mut next = vec![0usize; n];
    let mut holder: Vec<Option<usize>> = vec![None; n];
    let mut free: VecDeque<usize> = (0..n).collect();
    while let Some(p) = free.pop_front() {
        let Some(&r) = proposer_prefs[p].get(next[p]) else {
            continue;
        };
        next[p] += 1;
        if accepts(r, p, holder[r]) {
            if let Some(prev) = holder[r].replace(p) {
                free.push_back(prev);
            }
        } else {
            free.push_back(p);
        }
    }
    let pairs = holder.iter().enumerate().filter_map(|(r, p)| {
        p.map(|p| match side {
            Side::MenProposing => (p, r),
            Side::WomenProposing => (r, p),
        })
    });
    Matching::from_pairs(n, pairs).expect("deferred acceptance keeps the assignment injective")
}

/// Every acceptable pair outside `m` whose members both prefer each other to
/// their situation in `m`, ordered by man then woman.
pub fn blocking_pairs(inst: &Instance, m: &Matching) -> Result<Vec<(usize, usize)>, MatchingError> {
    m.check_against(inst)?;
    let mut out = Vec::new();
    for man in 0..inst.n() {
        let current = m.wife(man);
        for &w in inst.man_prefs(man) {
            if Some(w) == current {
                break;
            }
            if inst.woman_prefers(w, man, m.husband(w)) {
                out.push((man, w));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

pub fn is_stable(inst: &Instance, m: &Matching) -> bool {
    matches!(blocking_pairs(inst, m), Ok(b) if b.is_empty())
}

/// Pairs common to every matching in `all_matchings`.
pub fn fixed_pairs(all_matchings: &[Matching]) -> Result<BTreeSet<(usize, usize)>, MatchingError> {
    let (first, rest) = all_matchings
        .split_first()
        .ok_or(MatchingError::EmptyLattice)?;
    let mut fixed = first.pair_set();
    for m in rest {
        fixed.retain(|&(man, w)| m.contains(man, w));
    }
    Ok(fixed)
}

/// Number of men whose partner (or lack of one) differs between the two
/// matchings.
pub fn distance(m1: &Matching, m2: &Matching) -> usize {
    debug_assert_eq!(m1.n(), m2.n());
    m1.wives()
        .iter()
        .zip(m2.wives())
        .filter(|(a, b)| a != b)
        .count()
}
