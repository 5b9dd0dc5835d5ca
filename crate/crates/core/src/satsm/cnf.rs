use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::assignment::{Assignment, Variable};
use super::{SatSmInstance, ValidationReport};

type V = Variable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ClauseGroup {
    A,
    B,
    C1,
    C2,
    D,
}

impl ClauseGroup {
    pub const ALL: [ClauseGroup; 5] = [
        ClauseGroup::A,
        ClauseGroup::B,
        ClauseGroup::C1,
        ClauseGroup::C2,
        ClauseGroup::D,
    ];
}

impl fmt::Display for ClauseGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClauseGroup::A => "A",
            ClauseGroup::B => "B",
            ClauseGroup::C1 => "C1",
            ClauseGroup::C2 => "C2",
            ClauseGroup::D => "D",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub var: Variable,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: Variable) -> Self {
        Lit { var, positive: true }
    }

    pub fn neg(var: Variable) -> Self {
        Lit { var, positive: false }
    }

    pub fn to_dimacs(self, universe: usize) -> i32 {
        let i = self.var.index(universe) as i32;
        if self.positive {
            i
        } else {
            -i
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("¬")?;
        }
        write!(f, "{}", self.var)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub group: ClauseGroup,
    pub lits: Vec<Lit>,
    /// Originating list (0-based) for group A clauses.
    pub list: Option<usize>,
}

impl Clause {
    pub fn is_all_positive(&self) -> bool {
        self.lits.iter().all(|l| l.positive)
    }

    pub fn is_all_negative(&self) -> bool {
        self.lits.iter().all(|l| !l.positive)
    }

    pub fn satisfied_by(&self, asg: &Assignment) -> bool {
        self.lits.iter().any(|l| asg.get(l.var) == l.positive)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lits: Vec<String> = self.lits.iter().map(Lit::to_string).collect();
        write!(f, "({})", lits.join(" ∨ "))
    }
}

/// Clause counts per group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct GroupCounts {
    pub a: usize,
    pub b: usize,
    pub c1: usize,
    pub c2: usize,
    pub d: usize,
}

impl GroupCounts {
    pub fn get(&self, g: ClauseGroup) -> usize {
        match g {
            ClauseGroup::A => self.a,
            ClauseGroup::B => self.b,
            ClauseGroup::C1 => self.c1,
            ClauseGroup::C2 => self.c2,
            ClauseGroup::D => self.d,
        }
    }

    fn bump(&mut self, g: ClauseGroup) {
        match g {
            ClauseGroup::A => self.a += 1,
            ClauseGroup::B => self.b += 1,
            ClauseGroup::C1 => self.c1 += 1,
            ClauseGroup::C2 => self.c2 += 1,
            ClauseGroup::D => self.d += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.a + self.b + self.c1 + self.c2 + self.d
    }
}

/// A CNF over the `y`, `s` and `p` variables of one SAT-SM instance, with
/// clauses grouped `A, B, C1, C2, D` in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    universe: usize,
    list_lengths: Vec<usize>,
    clauses: Vec<Clause>,
    pre_dedup: GroupCounts,
    c1_pairwise: usize,
}

impl Cnf {
    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn num_vars(&self) -> usize {
        3 * self.universe
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn group(&self, g: ClauseGroup) -> impl Iterator<Item = &Clause> + '_ {
        self.clauses.iter().filter(move |c| c.group == g)
    }

    pub fn list_lengths(&self) -> &[usize] {
        &self.list_lengths
    }

    /// Clause counts after deduplication.
    pub fn counts(&self) -> GroupCounts {
        let mut c = GroupCounts::default();
        for clause in &self.clauses {
            c.bump(clause.group);
        }
        c
    }

    /// Clause counts as generated, before deduplication.
    pub fn pre_dedup_counts(&self) -> GroupCounts {
        self.pre_dedup
    }

    /// Generated count of the C1 clauses pairing `y_{X_i}` with
    /// `s_{X_i}` and `s_{X_{i+1}}` for `i < k`.
    pub fn c1_pairwise(&self) -> usize {
        self.c1_pairwise
    }

    pub fn dimacs_clauses(&self) -> Vec<Vec<i32>> {
        self.clauses
            .iter()
            .map(|c| c.lits.iter().map(|l| l.to_dimacs(self.universe)).collect())
            .collect()
    }

    pub fn is_satisfied_by(&self, asg: &Assignment) -> bool {
        self.clauses.iter().all(|c| c.satisfied_by(asg))
    }

    pub fn unsatisfied<'a>(&'a self, asg: &'a Assignment) -> impl Iterator<Item = &'a Clause> + 'a {
        self.clauses.iter().filter(move |c| !c.satisfied_by(asg))
    }
}

struct Builder {
    clauses: Vec<Clause>,
    seen: HashSet<(ClauseGroup, Vec<Lit>)>,
    pre_dedup: GroupCounts,
}

impl Builder {
    fn push(&mut self, group: ClauseGroup, lits: Vec<Lit>, list: Option<usize>) {
        debug_assert!(!lits.is_empty());
        self.pre_dedup.bump(group);
        let mut unique = Vec::with_capacity(lits.len());
        for l in lits {
            if !unique.contains(&l) {
                unique.push(l);
            }
        }
        let mut key = unique.clone();
        key.sort_unstable();
        if self.seen.insert((group, key)) {
            self.clauses.push(Clause {
                group,
                lits: unique,
                list,
            });
        }
    }
}

/// Builds the SAT-SM CNF of a valid instance.
///
/// Identical clauses within a group (from a value's two occurrences) are
/// kept once; [`Cnf::pre_dedup_counts`] reports the generated counts.
pub fn build_cnf(inst: &SatSmInstance) -> Result<Cnf, ValidationReport> {
    inst.check()?;
    let (pos, neg) = (Lit::pos, Lit::neg);
    let lists = inst.lists();
    let mut b = Builder {
        clauses: Vec::new(),
        seen: HashSet::new(),
        pre_dedup: GroupCounts::default(),
    };

    // A: every list meets L ∪ N.
    for (a, list) in lists.iter().enumerate() {
        let lits = list.iter().flat_map(|&e| [pos(V::y(e)), pos(V::p(e))]).collect();
        b.push(ClauseGroup::A, lits, Some(a));
    }
    // B: S is closed downwards along every list.
    for list in lists {
        for w in list.windows(2) {
            b.push(ClauseGroup::B, vec![pos(V::s(w[0])), neg(V::s(w[1]))], None);
        }
    }
    // C1: leaves are in S and have no successor in S.
    let mut c1_pairwise = 0;
    for list in lists {
        for (i, &e) in list.iter().enumerate() {
            b.push(ClauseGroup::C1, vec![neg(V::y(e)), pos(V::s(e))], None);
            if let Some(&f) = list.get(i + 1) {
                b.push(ClauseGroup::C1, vec![neg(V::y(e)), neg(V::s(f))], None);
                c1_pairwise += 2;
            }
        }
    }
    let occ = inst.occurrences();
    let next = |(a, i): (usize, usize)| lists[a].get(i + 1).copied();
    let prev = |(a, i): (usize, usize)| i.checked_sub(1).map(|j| lists[a][j]);
    // C2: a member of S without a successor in S is a leaf.
    for e in 1..=inst.universe() {
        let [oa, ob] = occ[e - 1];
        let mut lits = vec![neg(V::s(e)), pos(V::y(e))];
        lits.extend([next(oa), next(ob)].into_iter().flatten().map(|f| pos(V::s(f))));
        b.push(ClauseGroup::C2, lits, None);
    }
    // D: neighbours are outside S with every predecessor inside, and conversely.
    for e in 1..=inst.universe() {
        let [oa, ob] = occ[e - 1];
        let prevs: Vec<usize> = [prev(oa), prev(ob)].into_iter().flatten().collect();
        for &f in &prevs {
            b.push(ClauseGroup::D, vec![neg(V::p(e)), pos(V::s(f))], None);
        }
        let mut lits = vec![pos(V::s(e))];
        lits.extend(prevs.iter().map(|&f| neg(V::s(f))));
        lits.push(pos(V::p(e)));
        b.push(ClauseGroup::D, lits, None);
        b.push(ClauseGroup::D, vec![neg(V::p(e)), neg(V::s(e))], None);
    }

    let mut clauses = b.clauses;
    clauses.sort_by_key(|c| c.group);
    Ok(Cnf {
        universe: inst.universe(),
        list_lengths: lists.iter().map(Vec::len).collect(),
        clauses,
        pre_dedup: b.pre_dedup,
        c1_pairwise,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("group A clause {index} {reason}")]
    GroupA { index: usize, reason: String },
    #[error("C1 has {found} pairwise clauses, expected 2·Σ(k-1) = {expected}")]
    C1Count { expected: usize, found: usize },
    #[error("C1 has no binary clause of two negative literals")]
    C1NoNegativeBinary,
    #[error("no all-positive clause of length at least 2")]
    NoPositiveClause,
}

/// Counts backing the structural audit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub counts: GroupCounts,
    pub pre_dedup: GroupCounts,
    pub a_lengths: Vec<usize>,
    pub c1_pairwise: usize,
    pub c1_negative_binary: usize,
    pub positive_clauses: usize,
}

/// Structural facts every generated CNF must have: group A clauses are
/// all-positive of length `2k >= 4`, C1 holds `2·Σ(k-1)` pairwise clauses
/// including binary all-negative ones, and some all-positive clause of
/// length at least 2 exists.
pub fn audit_schaefer(cnf: &Cnf) -> Result<AuditReport, AuditError> {
    let mut a_lengths = Vec::new();
    for (index, c) in cnf.group(ClauseGroup::A).enumerate() {
        let fail = |reason: String| AuditError::GroupA { index, reason };
        if !c.is_all_positive() {
            return Err(fail("has a negative literal".into()));
        }
        let k = c
            .list
            .and_then(|a| cnf.list_lengths.get(a))
            .ok_or_else(|| fail("has no originating list".into()))?;
        if c.lits.len() != 2 * k || c.lits.len() < 4 {
            return Err(fail(format!("has length {}, expected 2·{k} >= 4", c.lits.len())));
        }
        a_lengths.push(c.lits.len());
    }
    let expected: usize = cnf.list_lengths.iter().map(|k| 2 * k.saturating_sub(1)).sum();
    if cnf.c1_pairwise != expected || cnf.pre_dedup.c1 < expected {
        return Err(AuditError::C1Count {
            expected,
            found: cnf.c1_pairwise,
        });
    }
    let c1_negative_binary = cnf
        .group(ClauseGroup::C1)
        .filter(|c| c.lits.len() == 2 && c.is_all_negative())
        .count();
    if c1_negative_binary == 0 {
        return Err(AuditError::C1NoNegativeBinary);
    }
    let positive_clauses = cnf
        .clauses
        .iter()
        .filter(|c| c.lits.len() >= 2 && c.is_all_positive())
        .count();
    if positive_clauses == 0 {
        return Err(AuditError::NoPositiveClause);
    }
    Ok(AuditReport {
        counts: cnf.counts(),
        pre_dedup: cnf.pre_dedup,
        a_lengths,
        c1_pairwise: cnf.c1_pairwise,
        c1_negative_binary,
        positive_clauses,
    })
}
