//! Rotations, the rotation poset and the closed-subset view of the stable
//! matching lattice.

mod discover;
mod enumerate;
mod render;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::marriage::{Matching, MatchingError};

pub use discover::find_rotations;
pub use enumerate::{enumerate_stable_matchings, DEFAULT_ENUMERATION_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("rotation {id} has {len} pairs; at least 2 are required")]
    ShortRotation { id: usize, len: usize },
    #[error("rotation {id} repeats {what}")]
    RepeatedPerson { id: usize, what: String },
    #[error("rotation ids must be 0..{count} without gaps")]
    BadIds { count: usize },
    #[error("edge ({from}, {to}) refers to an unknown rotation")]
    UnknownRotation { from: usize, to: usize },
    #[error("precedence relation has a cycle through rotation {0}")]
    Cyclic(usize),
    #[error("rotation {id} is not exposed: pair ({man}, {woman}) is missing from the matching")]
    NotExposed { id: usize, man: usize, woman: usize },
    #[error("subset is not predecessor-closed: {missing} precedes {member}")]
    NotClosed { member: usize, missing: usize },
    #[error("matching is not stable for this poset: {0}")]
    NotStable(String),
    #[error("more than {cap} stable matchings; raise the enumeration cap")]
    EnumerationLimit { cap: usize },
    #[error(transparent)]
    Matching(#[from] MatchingError),
}

/// How a precedence edge arises: type 1 when the predecessor produces a pair
/// the successor eliminates, type 2 when the predecessor moves a woman above
/// a man the successor moves past her.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeType {
    Type1 = 1,
    Type2 = 2,
}

impl EdgeType {
    pub fn number(self) -> u8 {
        self as u8
    }
}

/// A cyclic list of `(man, woman)` pairs. Eliminating it hands every man the
/// partner of the next man in the list.
///
/// The cycle is stored starting at its smallest man.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rotation {
    pub id: usize,
    cycle: Vec<(usize, usize)>,
}

impl Rotation {
    pub fn new(id: usize, mut cycle: Vec<(usize, usize)>) -> Result<Self, PosetError> {
        if cycle.len() < 2 {
            return Err(PosetError::ShortRotation {
                id,
                len: cycle.len(),
            });
        }
        let men: BTreeSet<usize> = cycle.iter().map(|p| p.0).collect();
        let women: BTreeSet<usize> = cycle.iter().map(|p| p.1).collect();
        if men.len() != cycle.len() {
            return Err(PosetError::RepeatedPerson {
                id,
                what: "a man".into(),
            });
        }
        if women.len() != cycle.len() {
            return Err(PosetError::RepeatedPerson {
                id,
                what: "a woman".into(),
            });
        }
        let start = (0..cycle.len()).min_by_key(|&i| cycle[i].0).unwrap_or(0);
        cycle.rotate_left(start);
        Ok(Rotation { id, cycle })
    }

    /// The eliminated pairs, in cycle order.
    pub fn cycle(&self) -> &[(usize, usize)] {
        &self.cycle
    }

    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    /// Pairs created by eliminating the rotation: each man takes the woman of
    /// the next pair.
    pub fn produced(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.cycle.len();
        (0..k).map(move |i| (self.cycle[i].0, self.cycle[(i + 1) % k].1))
    }

    pub fn men(&self) -> impl Iterator<Item = usize> + '_ {
        self.cycle.iter().map(|p| p.0)
    }

    pub fn women(&self) -> impl Iterator<Item = usize> + '_ {
        self.cycle.iter().map(|p| p.1)
    }

    pub fn involves_man(&self, m: usize) -> bool {
        self.men().any(|x| x == m)
    }

    pub fn involves_woman(&self, w: usize) -> bool {
        self.women().any(|x| x == w)
    }

    /// `M/ρ`: requires every pair of the rotation to be in `m`.
    pub fn eliminate_from(&self, m: &Matching) -> Result<Matching, PosetError> {
        if let Some(&(man, woman)) = self.cycle.iter().find(|&&(a, b)| !m.contains(a, b)) {
            return Err(PosetError::NotExposed {
                id: self.id,
                man,
                woman,
            });
        }
        let mut out = m.clone();
        for (man, woman) in self.produced() {
            out.set_unchecked(man, woman);
        }
        Ok(out)
    }
}

impl fmt::Display for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ρ{} = (", self.id)?;
        for (i, (m, w)) in self.cycle.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({m},{w})")?;
        }
        f.write_str(")")
    }
}

/// Eliminates `rho` from `m`; see [`Rotation::eliminate_from`].
pub fn eliminate(m: &Matching, rho: &Rotation) -> Result<Matching, PosetError> {
    rho.eliminate_from(m)
}

/// A predecessor-closed set of rotation ids. Obtain one through
/// [`RotationPoset::closed_subset`] or the enumeration routines.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedSubset {
    members: BTreeSet<usize>,
}

impl ClosedSubset {
    pub fn empty() -> Self {
        ClosedSubset::default()
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, id: usize) -> bool {
        self.members.contains(&id)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl fmt::Display for ClosedSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, id) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "ρ{id}")?;
        }
        f.write_str("}")
    }
}

/// Rotations of an instance together with their precedence order.
///
/// `edges` holds the transitive reduction of the precedence relation with
/// the type of each covering edge; the full strict order is cached.
#[derive(Clone, Debug)]
pub struct RotationPoset {
    base: Matching,
    rotations: Vec<Rotation>,
    edges: Vec<(usize, usize, EdgeType)>,
    /// `below[b][a]` iff `a ≺≺ b`.
    below: Vec<Vec<bool>>,
    topo: Vec<usize>,
}

impl RotationPoset {
    /// Builds the poset from its rotations and any generating set of typed
    /// precedence edges. The order is the transitive closure of the edges;
    /// covering edges keep their type, preferring type 1 when both occur.
    ///
    /// `base` is the matching every elimination sequence starts from (the
    /// man-optimal matching).
    pub fn new(
        base: Matching,
        mut rotations: Vec<Rotation>,
        generating_edges: impl IntoIterator<Item = (usize, usize, EdgeType)>,
    ) -> Result<Self, PosetError> {
        rotations.sort_by_key(|r| r.id);
        let k = rotations.len();
        if rotations.iter().enumerate().any(|(i, r)| r.id != i) {
            return Err(PosetError::BadIds { count: k });
        }
        let mut types: BTreeMap<(usize, usize), EdgeType> = BTreeMap::new();
        for (from, to, ty) in generating_edges {
            if from >= k || to >= k {
                return Err(PosetError::UnknownRotation { from, to });
            }
            if from == to {
                return Err(PosetError::Cyclic(from));
            }
            types
                .entry((from, to))
                .and_modify(|t| *t = (*t).min(ty))
                .or_insert(ty);
        }
        let mut succ = vec![Vec::new(); k];
        let mut indegree = vec![0usize; k];
        for &(from, to) in types.keys() {
            succ[from].push(to);
            indegree[to] += 1;
        }
        // Kahn's algorithm, smallest id first.
        let mut ready: BTreeSet<usize> = (0..k).filter(|&i| indegree[i] == 0).collect();
        let mut topo = Vec::with_capacity(k);
        while let Some(v) = ready.pop_first() {
            topo.push(v);
            for &s in &succ[v] {
                indegree[s] -= 1;
                if indegree[s] == 0 {
                    ready.insert(s);
                }
            }
        }
        if topo.len() != k {
            let stuck = (0..k).find(|&i| indegree[i] > 0).unwrap_or(0);
            return Err(PosetError::Cyclic(stuck));
        }
        let mut below = vec![vec![false; k]; k];
        for &v in &topo {
            let row = below[v].clone();
            for &s in &succ[v] {
                below[s][v] = true;
                for (d, &x) in below[s].iter_mut().zip(&row) {
                    *d |= x;
                }
            }
        }
        let edges = types
            .into_iter()
            .filter(|&((from, to), _)| !(0..k).any(|mid| below[mid][from] && below[to][mid]))
            .map(|((from, to), ty)| (from, to, ty))
            .collect();
        Ok(RotationPoset {
            base,
            rotations,
            edges,
            below,
            topo,
        })
    }

    /// The man-optimal matching the poset's eliminations start from.
    pub fn base(&self) -> &Matching {
        &self.base
    }

    /// Number of men (and women) of the underlying instance.
    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn rotations(&self) -> &[Rotation] {
        &self.rotations
    }

    pub fn rotation(&self, id: usize) -> &Rotation {
        &self.rotations[id]
    }

    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    /// Covering edges `(from, to, type)`, sorted.
    pub fn edges(&self) -> &[(usize, usize, EdgeType)] {
        &self.edges
    }

    /// `a ≺≺ b`.
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.below[b][a]
    }

    /// Immediate predecessors (covering edges into `id`).
    pub fn predecessors(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.1 == id).map(|e| e.0)
    }

    /// Immediate successors (covering edges out of `id`).
    pub fn successors(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.0 == id).map(|e| e.1)
    }

    /// Every rotation preceding `id`.
    pub fn all_predecessors(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        self.below[id]
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
    }

    /// A linear extension, smallest id first among ready rotations.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Checks predecessor closure and wraps the ids.
    pub fn closed_subset<I: IntoIterator<Item = usize>>(&self, ids: I) -> Result<ClosedSubset, PosetError> {
        let members: BTreeSet<usize> = ids.into_iter().collect();
        for &member in &members {
            if member >= self.len() {
                return Err(PosetError::UnknownRotation {
                    from: member,
                    to: member,
                });
            }
            if let Some(missing) = self.all_predecessors(member).find(|p| !members.contains(p)) {
                return Err(PosetError::NotClosed { member, missing });
            }
        }
        Ok(ClosedSubset { members })
    }

    /// The set of all rotations.
    pub fn full_subset(&self) -> ClosedSubset {
        ClosedSubset {
            members: (0..self.len()).collect(),
        }
    }

    /// Leaves `L(S)` (members with no successor in `S`) and neighbours `N(S)`
    /// (non-members whose predecessors all lie in `S`).
    pub fn leaf_and_neighbor(&self, s: &ClosedSubset) -> (BTreeSet<usize>, BTreeSet<usize>) {
        let leaves = s
            .members
            .iter()
            .copied()
            .filter(|&r| !self.successors(r).any(|x| s.contains(x)))
            .collect();
        let neighbors = (0..self.len())
            .filter(|&r| !s.contains(r) && self.all_predecessors(r).all(|p| s.contains(p)))
            .collect();
        (leaves, neighbors)
    }

    /// Eliminates the members of `s` from `start` in topological order.
    pub fn eliminate_subset_from(&self, s: &ClosedSubset, start: &Matching) -> Result<Matching, PosetError> {
        let mut m = start.clone();
        for &r in &self.topo {
            if s.contains(r) {
                m = self.rotations[r].eliminate_from(&m)?;
            }
        }
        Ok(m)
    }

    /// The stable matching of a closed subset.
    pub fn matching_of(&self, s: &ClosedSubset) -> Result<Matching, PosetError> {
        // Re-check closure: a subset may come from a different poset.
        let s = self.closed_subset(s.members.iter().copied())?;
        self.eliminate_subset_from(&s, &self.base)
    }

    /// Rotations involving each man, in precedence order.
    fn chains(&self) -> Vec<Vec<usize>> {
        let mut chains = vec![Vec::new(); self.n()];
        for &r in &self.topo {
            for m in self.rotations[r].men() {
                chains[m].push(r);
            }
        }
        chains
    }

    /// The closed subset whose elimination from the base yields `m`.
    ///
    /// Each man's rotations are totally ordered, so his partner in `m`
    /// determines how many of them have been eliminated.
    pub fn closed_subset_of(&self, m: &Matching) -> Result<ClosedSubset, PosetError> {
        if m.n() != self.n() {
            return Err(MatchingError::SizeMismatch {
                expected: self.n(),
                found: m.n(),
            }
            .into());
        }
        let mut members = BTreeSet::new();
        for (man, chain) in self.chains().into_iter().enumerate() {
            let mut partner = self.base.wife(man);
            let mut taken = 0;
            while partner != m.wife(man) && taken < chain.len() {
                let rho = &self.rotations[chain[taken]];
                partner = rho.produced().find(|p| p.0 == man).map(|p| p.1);
                taken += 1;
            }
            if partner != m.wife(man) {
                return Err(PosetError::NotStable(format!(
                    "man {man} never reaches partner {:?}",
                    m.wife(man)
                )));
            }
            members.extend(chain[..taken].iter().copied());
        }
        let s = self
            .closed_subset(members)
            .map_err(|e| PosetError::NotStable(e.to_string()))?;
        if &self.matching_of(&s)? != m {
            return Err(PosetError::NotStable(
                "eliminating the implied rotations does not reproduce the matching".into(),
            ));
        }
        Ok(s)
    }

    /// Checks whether two posets have the same rotations (by cycle content)
    /// and the same typed covering edges, ignoring rotation ids.
    pub fn is_isomorphic(&self, other: &RotationPoset) -> bool {
        fn canonical(p: &RotationPoset) -> (BTreeSet<Vec<(usize, usize)>>, BTreeSet<(Vec<(usize, usize)>, Vec<(usize, usize)>, EdgeType)>) {
            let cycles = p.rotations.iter().map(|r| r.cycle.clone()).collect();
            let edges = p
                .edges
                .iter()
                .map(|&(a, b, t)| (p.rotations[a].cycle.clone(), p.rotations[b].cycle.clone(), t))
                .collect();
            (cycles, edges)
        }
        self.len() == other.len() && canonical(self) == canonical(other)
    }

    /// Rotations reachable from `start` along covering edges, visiting only
    /// rotations that satisfy `keep`.
    pub(crate) fn reachable_within(&self, start: usize, keep: impl Fn(&Rotation) -> bool) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        while let Some(r) = queue.pop_front() {
            for s in self.successors(r) {
                if keep(&self.rotations[s]) && seen.insert(s) {
                    queue.push_back(s);
                }
            }
        }
        seen
    }
}

/// Men involved in any of the given rotations (`X(R)`).
pub fn men_of<'a, I>(rotations: I) -> BTreeSet<usize>
where
    I: IntoIterator<Item = &'a Rotation>,
{
    rotations.into_iter().flat_map(|r| r.men()).collect()
}
