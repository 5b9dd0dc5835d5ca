//! SAT-SM to stable marriage: the rotation poset built from the lists, the
//! preference lists realising it, and the maps between CNF models and
//! closed subsets.
//!
//! Value `e` of `X` becomes rotation `e - 1`, and list `l_a` becomes man
//! `a - 1` (and woman `a - 1`).

mod family_f;
mod generate;

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::marriage::{Instance, InstanceError, Matching};
use crate::poset::{ClosedSubset, EdgeType, PosetError, Rotation, RotationPoset};
use crate::satsm::{decode, encode, Assignment, SatSmInstance, ValidationReport};

pub use family_f::{validate_family_f, FamilyFReport, PathViolation};
pub use generate::{generate_random_satsm, sample_params, GeneratorParams, GENERATION_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Invalid(#[from] ValidationReport),
    #[error("rotation {rotation} receives two different women for man {man}: {first} and {second}")]
    ConflictingWoman {
        rotation: usize,
        man: usize,
        first: usize,
        second: usize,
    },
    #[error("rotation {rotation} is missing a woman after completion")]
    IncompleteRotation { rotation: usize },
    #[error("{list} preference list of {owner} would contain {other} twice")]
    DuplicatePreference {
        list: &'static str,
        owner: usize,
        other: usize,
    },
    #[error("decoded S is not closed: {0}")]
    NotClosed(PosetError),
    #[error("generator gave up after {attempts} attempts for |X| = {universe}, n = {lists}; try other parameters")]
    GenerationFailed {
        universe: usize,
        lists: usize,
        attempts: usize,
    },
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParameters(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// The three artefacts of the forward construction.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub satsm: SatSmInstance,
    pub poset: RotationPoset,
    pub instance: Instance,
}

/// Validates `satsm`, builds its rotation poset and synthesises the stable
/// marriage instance.
pub fn reduce(satsm: &SatSmInstance) -> Result<Reduction, ReductionError> {
    let poset = reduce_to_poset(satsm)?;
    let instance = synthesize_preferences(&poset)?;
    Ok(Reduction {
        satsm: satsm.clone(),
        poset,
        instance,
    })
}

/// Builds the family-F rotation poset of a valid SAT-SM instance.
///
/// Each rotation holds the two men whose lists contain its value. The first
/// rotation on man `a`'s list pairs him with woman `a`; women then flow
/// forward breadth-first: eliminating `((m_i, w_b), (m_k, w_d))` leaves `m_i`
/// with `w_d` and `m_k` with `w_b`, which is what their next rotations start
/// from.
pub fn reduce_to_poset(inst: &SatSmInstance) -> Result<RotationPoset, ReductionError> {
    inst.check()?;
    let lists = inst.lists();
    let occ = inst.occurrences();
    let k = inst.universe();
    let n = inst.n();
    // women[r][j]: partner of the j-th man of rotation r (men ordered by list).
    let men: Vec<[usize; 2]> = occ.iter().map(|o| [o[0].0, o[1].0]).collect();
    let mut women: Vec<[Option<usize>; 2]> = vec![[None; 2]; k];
    let slot = |r: usize, man: usize| usize::from(men[r][1] == man);
    let place = |women: &mut Vec<[Option<usize>; 2]>, r: usize, man: usize, w: usize| {
        let j = slot(r, man);
        match women[r][j] {
            Some(prev) if prev != w => Err(ReductionError::ConflictingWoman {
                rotation: r,
                man,
                first: prev,
                second: w,
            }),
            _ => {
                women[r][j] = Some(w);
                Ok(())
            }
        }
    };
    for (a, list) in lists.iter().enumerate() {
        place(&mut women, list[0] - 1, a, a)?;
    }
    let complete = |women: &Vec<[Option<usize>; 2]>, r: usize| women[r].iter().all(Option::is_some);
    let mut queue: VecDeque<usize> = (0..k).filter(|&r| complete(&women, r)).collect();
    let mut done = vec![false; k];
    // Successor of rotation r along man `man`'s list.
    let next_on = |r: usize, man: usize| {
        let [o0, o1] = occ[r];
        let (a, i) = if o0.0 == man { o0 } else { o1 };
        lists[a].get(i + 1).map(|&e| e - 1)
    };
    while let Some(r) = queue.pop_front() {
        if done[r] {
            continue;
        }
        done[r] = true;
        let [mi, mk] = men[r];
        let [wb, wd] = [women[r][0].unwrap(), women[r][1].unwrap()];
        let mut succs: Vec<(usize, usize, usize)> = Vec::new();
        if let Some(s) = next_on(r, mi) {
            succs.push((s, mi, wd));
        }
        if let Some(s) = next_on(r, mk) {
            succs.push((s, mk, wb));
        }
        succs.sort_unstable();
        for (s, man, w) in succs {
            place(&mut women, s, man, w)?;
            if complete(&women, s) && !done[s] {
                queue.push_back(s);
            }
        }
    }
    let mut rotations = Vec::with_capacity(k);
    for r in 0..k {
        let cycle = (0..2)
            .map(|j| {
                women[r][j]
                    .map(|w| (men[r][j], w))
                    .ok_or(ReductionError::IncompleteRotation { rotation: r })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rotations.push(Rotation::new(r, cycle)?);
    }
    let base = Matching::from_pairs(n, (0..n).map(|a| (a, a)))
        .expect("identity matching is injective");
    let edges: Vec<(usize, usize, EdgeType)> = inst
        .arcs()
        .map(|(e, f)| (e - 1, f - 1, EdgeType::Type1))
        .collect();
    Ok(RotationPoset::new(base, rotations, edges)?)
}

/// Preference lists whose rotation poset is `poset`.
///
/// Everyone starts with their base partner. Rotations are then processed in
/// topological order (ascending id among ready ones): each produced pair
/// appends the woman to the man's list and puts the man at the top of the
/// woman's list.
pub fn synthesize_preferences(poset: &RotationPoset) -> Result<Instance, ReductionError> {
    let n = poset.n();
    let mut men: Vec<Vec<usize>> = vec![Vec::new(); n];
    // Women's lists are built worst-first and reversed at the end.
    let mut women: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut add = |m: usize, w: usize| -> Result<(), ReductionError> {
        if men[m].contains(&w) {
            return Err(ReductionError::DuplicatePreference {
                list: "man",
                owner: m,
                other: w,
            });
        }
        if women[w].contains(&m) {
            return Err(ReductionError::DuplicatePreference {
                list: "woman",
                owner: w,
                other: m,
            });
        }
        men[m].push(w);
        women[w].push(m);
        Ok(())
    };
    for (m, w) in poset.base().pairs() {
        add(m, w)?;
    }
    for &r in poset.topological_order() {
        for (m, w) in poset.rotation(r).produced() {
            add(m, w)?;
        }
    }
    for list in &mut women {
        list.reverse();
    }
    Ok(Instance::new(men, women)?)
}

fn ids_of(values: &BTreeSet<usize>) -> impl Iterator<Item = usize> + '_ {
    values.iter().map(|e| e - 1)
}

/// Maps a CNF model to the closed subset `S = {e : s_e}` and its stable
/// matching in the reduced instance.
pub fn map_solution_forward(
    red: &Reduction,
    asg: &Assignment,
) -> Result<(ClosedSubset, Matching), ReductionError> {
    let (s, _, _) = decode(&red.satsm, asg);
    let subset = red
        .poset
        .closed_subset(ids_of(&s))
        .map_err(ReductionError::NotClosed)?;
    let m = red.poset.matching_of(&subset)?;
    Ok((subset, m))
}

/// The assignment encoding `S`, its leaves and its neighbours.
pub fn map_solution_backward(poset: &RotationPoset, s: &ClosedSubset) -> Assignment {
    let (leaves, neighbors) = poset.leaf_and_neighbor(s);
    let values = |ids: &BTreeSet<usize>| ids.iter().map(|r| r + 1).collect::<BTreeSet<_>>();
    let universe = SatSmInstance::new(poset.len(), Vec::new());
    encode(
        &universe,
        &values(s.members()),
        &values(&leaves),
        &values(&neighbors),
    )
}
