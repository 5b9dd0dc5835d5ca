use std::collections::HashMap;

use super::{EdgeType, Rotation, RotationPoset};
use crate::marriage::{deferred_acceptance, Instance, Matching, Side};

/// For a stable matching `m`, the man `next(man)` whose partner `man` would
/// take: the partner of `s(man)`, the first woman after `m(man)` on his list
/// who prefers him to her own partner. `None` when no such woman exists or
/// she is single.
fn next_men(inst: &Instance, m: &Matching) -> Vec<Option<usize>> {
    (0..inst.n())
        .map(|man| {
            let current = m.wife(man)?;
            let list = inst.man_prefs(man);
            let start = inst.man_rank(man, current)? + 1;
            list[start..]
                .iter()
                .find(|&&w| inst.woman_prefers(w, man, m.husband(w)))
                .and_then(|&w| m.husband(w))
        })
        .collect()
}

/// Rotations exposed on `m`: the cycles of the `next` map.
fn exposed_cycles(inst: &Instance, m: &Matching) -> Vec<Vec<(usize, usize)>> {
    let next = next_men(inst, m);
    let n = next.len();
    // 0 = unvisited, 1 = on the current walk, 2 = finished.
    let mut state = vec![0u8; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        let mut walk = Vec::new();
        let mut cur = Some(start);
        while let Some(x) = cur {
            if state[x] != 0 {
                if state[x] == 1 {
                    let pos = walk.iter().position(|&y| y == x).expect("on walk");
                    let cycle = walk[pos..]
                        .iter()
                        .map(|&man| (man, m.wife(man).expect("matched")))
                        .collect();
                    cycles.push(cycle);
                }
                break;
            }
            state[x] = 1;
            walk.push(x);
            cur = next[x];
        }
        for x in walk {
            state[x] = 2;
        }
    }
    cycles
}

/// `(woman, old partner, new partner)` for each woman of the rotation.
fn woman_moves(rho: &Rotation) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
    let cycle = rho.cycle();
    let k = cycle.len();
    (0..k).map(move |i| (cycle[i].1, cycle[i].0, cycle[(i + k - 1) % k].0))
}

/// Finds every rotation of `inst` and the precedence edges between them.
///
/// Starting from the man-optimal matching, the exposed rotation with the
/// smallest man is eliminated until the woman-optimal matching is reached;
/// rotation ids follow that elimination order. Type 1 edges join the
/// producer of a pair to its eliminator; type 2 edges join the rotation that
/// moves a woman above a man to the rotation that moves him past her.
pub fn find_rotations(inst: &Instance) -> RotationPoset {
    let base = deferred_acceptance(inst, Side::MenProposing);
    let mut current = base.clone();
    let mut rotations: Vec<Rotation> = Vec::new();
    while let Some(cycle) = exposed_cycles(inst, &current)
        .into_iter()
        .min_by_key(|c| c.iter().map(|p| p.0).min())
    {
        let rho = Rotation::new(rotations.len(), cycle).expect("exposed cycles have distinct people");
        current = rho
            .eliminate_from(&current)
            .expect("exposed rotation pairs lie in the matching");
        rotations.push(rho);
    }

    let mut producer: HashMap<(usize, usize), usize> = HashMap::new();
    for rho in &rotations {
        for pair in rho.produced() {
            producer.insert(pair, rho.id);
        }
    }
    let mut edges = Vec::new();
    for rho in &rotations {
        for &pair in rho.cycle() {
            if let Some(&from) = producer.get(&pair) {
                edges.push((from, rho.id, EdgeType::Type1));
            }
        }
    }
    // Type 2: rho moves man m from w to w' past w''; the rotation that
    // moves w'' from a man she ranks below m to one she ranks above m
    // precedes rho.
    for rho in &rotations {
        for ((man, from_w), (_, to_w)) in rho.cycle().iter().zip(rho.produced()) {
            let lo = inst.man_rank(*man, *from_w).expect("stable pair") + 1;
            let hi = inst.man_rank(*man, to_w).expect("stable pair");
            for &w in &inst.man_prefs(*man)[lo..hi] {
                let rank_m = inst.woman_rank(w, *man).expect("mutual lists");
                let mover = rotations.iter().find(|other| {
                    other.id != rho.id
                        && woman_moves(other).any(|(woman, old, new)| {
                            woman == w
                                && inst.woman_rank(w, old).expect("stable pair") > rank_m
                                && inst.woman_rank(w, new).expect("stable pair") < rank_m
                        })
                });
                if let Some(other) = mover {
                    edges.push((other.id, rho.id, EdgeType::Type2));
                }
            }
        }
    }
    RotationPoset::new(base, rotations, edges).expect("rotation precedence is acyclic")
}
