use std::collections::BTreeSet;
use std::fmt::Write;

use serde::Serialize;

use super::synthesize_preferences;
use crate::poset::{EdgeType, RotationPoset};

/// A rotation `target` reachable from `source` both along rotations that
/// all contain `man` and along rotations that all contain `woman`, where
/// `(man, woman)` is a pair of `source`. Eliminating `target` would produce
/// that pair a second time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathViolation {
    pub source: usize,
    pub target: usize,
    pub man: usize,
    pub woman: usize,
}

/// Per-property outcome of the family-F checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyFReport {
    /// Pairs in each rotation, by id.
    pub pairs_per_rotation: Vec<usize>,
    pub p1_two_pairs: bool,
    /// Covering predecessors and successors of each rotation.
    pub degrees: Vec<(usize, usize)>,
    pub p2_degree: bool,
    /// Covering edges that are not type 1.
    pub non_type1_edges: Vec<(usize, usize)>,
    pub p3_type1: bool,
    /// Rotations each man takes part in.
    pub men_rotation_counts: Vec<usize>,
    pub p4_two_rotations: bool,
    pub path_violations: Vec<PathViolation>,
    /// Why preference synthesis failed, if it did.
    pub synthesis_error: Option<String>,
    pub lemma1: bool,
}

impl FamilyFReport {
    pub fn passes(&self) -> bool {
        self.p1_two_pairs && self.p2_degree && self.p3_type1 && self.p4_two_rotations && self.lemma1
    }

    /// One line per failed property, or `"family F"` when all pass.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        if let Some((id, len)) = self.pairs_per_rotation.iter().enumerate().find(|(_, &l)| l != 2) {
            writeln!(out, "P1 fails: rotation {id} has {len} pairs").unwrap();
        }
        if let Some((id, (p, s))) = self.degrees.iter().enumerate().find(|(_, &(p, s))| p > 2 || s > 2) {
            writeln!(out, "P2 fails: rotation {id} has {p} predecessors and {s} successors").unwrap();
        }
        if let Some((a, b)) = self.non_type1_edges.first() {
            writeln!(out, "P3 fails: edge {a} -> {b} is type 2").unwrap();
        }
        if let Some((m, c)) = self.men_rotation_counts.iter().enumerate().find(|(_, &c)| c < 2) {
            writeln!(out, "P4 fails: man {m} is in {c} rotations").unwrap();
        }
        if let Some(v) = self.path_violations.first() {
            writeln!(
                out,
                "Lemma 1 fails: pair ({}, {}) of rotation {} is carried to rotation {}",
                v.man, v.woman, v.source, v.target
            )
            .unwrap();
        }
        if let Some(e) = &self.synthesis_error {
            writeln!(out, "Lemma 1 fails: {e}").unwrap();
        }
        if out.is_empty() {
            out.push_str("family F");
        }
        out.trim_end().to_string()
    }
}

/// Checks Properties 1-4 of family F and the consequence of Lemma 1, both on
/// the poset (no pair is carried along a man-path and a woman-path to the
/// same rotation) and on the synthesised instance (no preference list
/// repeats anyone).
pub fn validate_family_f(poset: &RotationPoset) -> FamilyFReport {
    let k = poset.len();
    let pairs_per_rotation: Vec<usize> = poset.rotations().iter().map(|r| r.len()).collect();
    let degrees: Vec<(usize, usize)> = (0..k)
        .map(|r| (poset.predecessors(r).count(), poset.successors(r).count()))
        .collect();
    let non_type1_edges: Vec<(usize, usize)> = poset
        .edges()
        .iter()
        .filter(|e| e.2 != EdgeType::Type1)
        .map(|e| (e.0, e.1))
        .collect();
    let mut men_rotation_counts = vec![0; poset.n()];
    for r in poset.rotations() {
        for m in r.men() {
            men_rotation_counts[m] += 1;
        }
    }
    let mut path_violations = Vec::new();
    for source in poset.rotations() {
        for &(man, woman) in source.cycle() {
            let by_man = poset.reachable_within(source.id, |r| r.involves_man(man));
            let by_woman = poset.reachable_within(source.id, |r| r.involves_woman(woman));
            let both: BTreeSet<usize> = by_man.intersection(&by_woman).copied().collect();
            path_violations.extend(both.into_iter().map(|target| PathViolation {
                source: source.id,
                target,
                man,
                woman,
            }));
        }
    }
    let synthesis_error = synthesize_preferences(poset).err().map(|e| e.to_string());
    FamilyFReport {
        p1_two_pairs: pairs_per_rotation.iter().all(|&l| l == 2),
        pairs_per_rotation,
        p2_degree: degrees.iter().all(|&(p, s)| p <= 2 && s <= 2),
        degrees,
        p3_type1: non_type1_edges.is_empty(),
        non_type1_edges,
        p4_two_rotations: men_rotation_counts.iter().all(|&c| c >= 2),
        men_rotation_counts,
        lemma1: path_violations.is_empty() && synthesis_error.is_none(),
        path_violations,
        synthesis_error,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marriage::{parse_instance, Matching};
    use crate::poset::{find_rotations, Rotation};
    use crate::reduction::reduce_to_poset;
    use crate::reduction::tests::diamond;

    #[test]
    fn diamond_is_in_family_f() {
        let report = validate_family_f(&reduce_to_poset(&diamond()).unwrap());
        assert!(report.passes(), "{}", report.summary());
        assert_eq!(report.pairs_per_rotation, vec![2; 4]);
        assert_eq!(report.degrees, vec![(0, 2), (1, 1), (1, 1), (2, 0)]);
        assert_eq!(report.men_rotation_counts, vec![2; 4]);
        assert_eq!(report.summary(), "family F");
    }

    #[test]
    fn table1_fails_p1() {
        let inst = parse_instance(include_str!("../../tests/data/table1.sm")).unwrap();
        let report = validate_family_f(&find_rotations(&inst));
        assert!(!report.p1_two_pairs);
        assert_eq!(report.pairs_per_rotation[1], 3);
        assert!(!report.p3_type1);
        assert!(report.summary().starts_with("P1 fails: rotation 1 has 3 pairs"));
    }

    #[test]
    fn three_predecessors_fail_p2() {
        // Only the shape matters here, so the cycles are disjoint pairs.
        let base = Matching::from_pairs(8, (0..8).map(|i| (i, i))).unwrap();
        let rotations = (0..4)
            .map(|r| Rotation::new(r, vec![(2 * r, 2 * r), (2 * r + 1, 2 * r + 1)]).unwrap())
            .collect();
        let edges = [(0, 3), (1, 3), (2, 3)].map(|(a, b)| (a, b, EdgeType::Type1));
        let p = RotationPoset::new(base, rotations, edges).unwrap();
        let report = validate_family_f(&p);
        assert!(!report.p2_degree);
        assert_eq!(report.degrees[3], (3, 0));
        assert!(!report.passes());
    }

    #[test]
    fn carried_pair_breaks_lemma1() {
        // ρ0 = ((0,0),(1,1)); ρ1 keeps man 0, ρ2 keeps woman 0, both feed ρ3
        // which again holds man 0 and woman 0.
        let base = Matching::from_pairs(4, (0..4).map(|i| (i, i))).unwrap();
        let rotations = vec![
            Rotation::new(0, vec![(0, 0), (1, 1)]).unwrap(),
            Rotation::new(1, vec![(0, 1), (2, 2)]).unwrap(),
            Rotation::new(2, vec![(1, 0), (3, 3)]).unwrap(),
            Rotation::new(3, vec![(0, 2), (3, 0)]).unwrap(),
        ];
        let edges = [(0, 1), (0, 2), (1, 3), (2, 3)].map(|(a, b)| (a, b, EdgeType::Type1));
        let p = RotationPoset::new(base, rotations, edges).unwrap();
        let report = validate_family_f(&p);
        assert!(!report.lemma1);
        assert_eq!(
            report.path_violations[0],
            PathViolation { source: 0, target: 3, man: 0, woman: 0 }
        );
    }
}
