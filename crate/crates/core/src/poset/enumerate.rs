use std::collections::BTreeSet;

use super::{find_rotations, ClosedSubset, PosetError, RotationPoset};
use crate::marriage::{Instance, Matching};

/// Default bound on the number of enumerated stable matchings.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

impl RotationPoset {
    /// Every closed subset with its stable matching, ordered
    /// lexicographically by sorted member ids.
    ///
    /// Fails with [`PosetError::EnumerationLimit`] once more than `cap`
    /// subsets exist.
    pub fn enumerate(&self, cap: usize) -> Result<Vec<(ClosedSubset, Matching)>, PosetError> {
        let mut out = Vec::new();
        let mut members = BTreeSet::new();
        self.extend_ideals(0, &mut members, self.base().clone(), cap, &mut out)?;
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    /// Decides the rotation at position `depth` of the topological order:
    /// left out, or eliminated when all its predecessors already are.
    fn extend_ideals(
        &self,
        depth: usize,
        members: &mut BTreeSet<usize>,
        current: Matching,
        cap: usize,
        out: &mut Vec<(ClosedSubset, Matching)>,
    ) -> Result<(), PosetError> {
        let Some(&r) = self.topological_order().get(depth) else {
            if out.len() >= cap {
                return Err(PosetError::EnumerationLimit { cap });
            }
            out.push((
                ClosedSubset {
                    members: members.clone(),
                },
                current,
            ));
            return Ok(());
        };
        if self.predecessors(r).all(|p| members.contains(&p)) {
            let next = self.rotation(r).eliminate_from(&current)?;
            members.insert(r);
            self.extend_ideals(depth + 1, members, next, cap, out)?;
            members.remove(&r);
        }
        self.extend_ideals(depth + 1, members, current, cap, out)
    }
}

/// All stable matchings of `inst`, each with its closed subset of
/// [`find_rotations`]`(inst)`.
pub fn enumerate_stable_matchings(
    inst: &Instance,
    cap: usize,
) -> Result<Vec<(ClosedSubset, Matching)>, PosetError> {
    find_rotations(inst).enumerate(cap)
}
