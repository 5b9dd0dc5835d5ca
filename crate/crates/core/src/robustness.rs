//! `(a,b)`-supermatch decision procedures.
//!
//! A stable matching `M` is an `(a,b)`-supermatch when, for every set `Ψ` of
//! `a` non-fixed pairs of `M`, some stable matching `M'` avoids every pair of
//! `Ψ` and changes at most `b` men beyond the `a` that were broken, i.e.
//! `d(M, M') - a <= b`.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::marriage::{distance, fixed_pairs, is_stable, Instance, Matching, MatchingError};
use crate::poset::{
    enumerate_stable_matchings, men_of, ClosedSubset, PosetError, RotationPoset,
    DEFAULT_ENUMERATION_CAP,
};
use crate::reduction::validate_family_f;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RobustnessError {
    #[error("a must be at least 1")]
    ZeroBreakage,
    #[error("matching {0} is not stable for the instance")]
    NotStable(String),
    #[error("the list of stable matchings is empty")]
    EmptyLattice,
    #[error("rotation poset is outside family F: {0}")]
    NotFamilyF(String),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// Breakage size `a` and repair budget `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RobustnessQuery {
    a: usize,
    b: usize,
}

impl RobustnessQuery {
    pub fn new(a: usize, b: usize) -> Result<Self, RobustnessError> {
        if a == 0 {
            return Err(RobustnessError::ZeroBreakage);
        }
        Ok(RobustnessQuery { a, b })
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }
}

/// A broken set `Ψ` together with a valid repair, if one exists.
///
/// Whenever `repair` is present it avoids every pair of `broken` and `cost`
/// equals `d(M, repair) - a`, which is within the budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairWitness {
    pub broken: Vec<(usize, usize)>,
    pub repair: Option<Matching>,
    pub cost: Option<usize>,
    pub vacuous: bool,
}

impl RepairWitness {
    /// Checks the witness against the matching it was produced for.
    pub fn is_consistent(&self, m: &Matching, q: RobustnessQuery) -> bool {
        let broken_ok = self.vacuous && self.broken.is_empty()
            || self.broken.len() == q.a && self.broken.iter().all(|&(x, w)| m.contains(x, w));
        let repair_ok = match (&self.repair, self.cost) {
            (None, None) => true,
            (Some(r), Some(c)) => {
                self.broken.iter().all(|&(x, w)| !r.contains(x, w))
                    && distance(m, r).checked_sub(q.a) == Some(c)
                    && c <= q.b
            }
            _ => false,
        };
        broken_ok && repair_ok
    }
}

impl Serialize for RepairWitness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("RepairWitness", 4)?;
        let broken: Vec<[usize; 2]> = self.broken.iter().map(|&(m, w)| [m, w]).collect();
        s.serialize_field("broken", &broken)?;
        s.serialize_field("repair", &self.repair)?;
        s.serialize_field("cost", &self.cost)?;
        s.serialize_field("vacuous", &self.vacuous)?;
        s.end()
    }
}

/// Outcome of [`is_ab_supermatch`].
///
/// When `holds` is false, `witness` names an irreparable `Ψ` and `nearest`
/// is the closest stable matching avoiding it (over budget), if any avoids
/// it at all.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupermatchVerdict {
    pub holds: bool,
    pub vacuous: bool,
    pub witness: Option<RepairWitness>,
    pub nearest: Option<Matching>,
    pub nearest_distance: Option<usize>,
}

/// Distances from one matching to every stable matching.
struct Scan<'a> {
    lattice: &'a [Matching],
    /// Non-fixed pairs of `m`, by man.
    nonfixed: Vec<(usize, usize)>,
    /// `d(m, lattice[i])`.
    dist: Vec<usize>,
}

impl<'a> Scan<'a> {
    fn new(inst: &Instance, lattice: &'a [Matching], m: &Matching) -> Result<Self, RobustnessError> {
        m.check_against(inst)?;
        if !is_stable(inst, m) {
            return Err(RobustnessError::NotStable(m.to_string()));
        }
        let fixed = fixed_pairs(lattice).map_err(|_| RobustnessError::EmptyLattice)?;
        let nonfixed = m.pairs().filter(|p| !fixed.contains(p)).collect();
        let dist = lattice.iter().map(|o| distance(m, o)).collect();
        Ok(Scan {
            lattice,
            nonfixed,
            dist,
        })
    }

    fn avoids(&self, i: usize, psi: &[(usize, usize)]) -> bool {
        psi.iter().all(|&(x, w)| !self.lattice[i].contains(x, w))
    }

    /// Nearest stable matching avoiding `psi`, ties broken by lattice order.
    fn nearest(&self, psi: &[(usize, usize)]) -> Option<usize> {
        (0..self.lattice.len())
            .filter(|&i| self.avoids(i, psi))
            .min_by_key(|&i| self.dist[i])
    }

    fn breakages(&self, a: usize) -> impl Iterator<Item = Vec<(usize, usize)>> + '_ {
        self.nonfixed.iter().copied().combinations(a)
    }

    fn repairable(&self, psi: &[(usize, usize)], q: RobustnessQuery) -> bool {
        (0..self.lattice.len()).any(|i| self.dist[i] <= q.a + q.b && self.avoids(i, psi))
    }
}

fn vacuous_verdict() -> SupermatchVerdict {
    SupermatchVerdict {
        holds: true,
        vacuous: true,
        witness: None,
        nearest: None,
        nearest_distance: None,
    }
}

/// Brute-force `(a,b)`-supermatch test of `m` against the complete list of
/// stable matchings `lattice`.
///
/// On failure every `Ψ` is examined and the reported one is the irreparable
/// set whose nearest avoiding matching is farthest away (a `Ψ` avoided by no
/// stable matching counts as infinitely far), ties going to the
/// lexicographically smallest `Ψ`.
pub fn is_ab_supermatch(
    inst: &Instance,
    lattice: &[Matching],
    m: &Matching,
    q: RobustnessQuery,
) -> Result<SupermatchVerdict, RobustnessError> {
    let scan = Scan::new(inst, lattice, m)?;
    if scan.nonfixed.len() < q.a {
        return Ok(vacuous_verdict());
    }
    let mut worst: Option<(Vec<(usize, usize)>, Option<usize>)> = None;
    for psi in scan.breakages(q.a) {
        if scan.repairable(&psi, q) {
            continue;
        }
        let near = scan.nearest(&psi);
        let severity = |n: Option<usize>| n.map_or(usize::MAX, |i| scan.dist[i]);
        // Ψs arrive in lexicographic order, so only a strictly worse one replaces.
        if worst.as_ref().is_none_or(|(_, w)| severity(near) > severity(*w)) {
            worst = Some((psi, near));
        }
    }
    Ok(match worst {
        None => SupermatchVerdict {
            holds: true,
            vacuous: false,
            witness: None,
            nearest: None,
            nearest_distance: None,
        },
        Some((broken, near)) => SupermatchVerdict {
            holds: false,
            vacuous: false,
            witness: Some(RepairWitness {
                broken,
                repair: None,
                cost: None,
                vacuous: false,
            }),
            nearest: near.map(|i| scan.lattice[i].clone()),
            nearest_distance: near.map(|i| scan.dist[i]),
        },
    })
}

/// Boolean form of [`is_ab_supermatch`] that stops at the first irreparable
/// `Ψ`.
pub fn holds_ab_supermatch(
    inst: &Instance,
    lattice: &[Matching],
    m: &Matching,
    q: RobustnessQuery,
) -> Result<bool, RobustnessError> {
    let scan = Scan::new(inst, lattice, m)?;
    if scan.nonfixed.len() < q.a {
        return Ok(true);
    }
    let mut psis = scan.breakages(q.a);
    Ok(psis.all(|psi| scan.repairable(&psi, q)))
}

/// For every `Ψ` of `m`, the nearest valid repair. Returns `None` if some
/// `Ψ` has no repair within budget.
pub fn repairs(
    inst: &Instance,
    lattice: &[Matching],
    m: &Matching,
    q: RobustnessQuery,
) -> Result<Option<Vec<RepairWitness>>, RobustnessError> {
    let scan = Scan::new(inst, lattice, m)?;
    if scan.nonfixed.len() < q.a {
        return Ok(Some(vec![RepairWitness {
            broken: Vec::new(),
            repair: None,
            cost: None,
            vacuous: true,
        }]));
    }
    let mut out = Vec::new();
    for psi in scan.breakages(q.a) {
        match scan.nearest(&psi) {
            Some(i) if scan.dist[i] <= q.a + q.b => out.push(RepairWitness {
                broken: psi,
                repair: Some(scan.lattice[i].clone()),
                cost: Some(scan.dist[i] - q.a),
                vacuous: false,
            }),
            _ => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// The first matching of `lattice`, in order, that is an `(a,b)`-supermatch.
pub fn first_ab_supermatch<'l>(
    inst: &Instance,
    lattice: &'l [Matching],
    q: RobustnessQuery,
) -> Result<Option<&'l Matching>, RobustnessError> {
    for m in lattice {
        if holds_ab_supermatch(inst, lattice, m, q)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Enumerates the stable matchings of `inst` (in closed-subset order) and
/// returns the first `(a,b)`-supermatch.
pub fn exists_ab_supermatch(
    inst: &Instance,
    q: RobustnessQuery,
) -> Result<Option<Matching>, RobustnessError> {
    let lattice: Vec<Matching> = enumerate_stable_matchings(inst, DEFAULT_ENUMERATION_CAP)?
        .into_iter()
        .map(|(_, m)| m)
        .collect();
    Ok(first_ab_supermatch(inst, &lattice, q)?.cloned())
}

/// Coverage test for family-F posets: the matching of `s` is a
/// (1,1)-supermatch exactly when every non-fixed man occurs in a leaf of `s`
/// or in a rotation just outside it.
pub fn is_11_supermatch_family_f(
    poset: &RotationPoset,
    s: &ClosedSubset,
    nonfixed_men: &BTreeSet<usize>,
) -> Result<bool, RobustnessError> {
    let report = validate_family_f(poset);
    if !report.passes() {
        return Err(RobustnessError::NotFamilyF(report.summary()));
    }
    let (leaves, neighbors) = poset.leaf_and_neighbor(s);
    let covered = men_of(leaves.iter().chain(&neighbors).map(|&id| poset.rotation(id)));
    Ok(nonfixed_men.is_subset(&covered))
}
