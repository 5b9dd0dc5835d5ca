use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::Serialize;

use super::SatSmInstance;

/// One failed list condition. Lists and positions are reported 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// An instance without lists.
    NoLists,
    /// `Σ k_{l_a}` differs from `2|X|`.
    TotalLength { expected: usize, found: usize },
    ShortList { list: usize, len: usize },
    OutOfRange { list: usize, value: usize },
    RepeatedInList { list: usize, value: usize },
    /// A value occurring in a number of lists other than two.
    Occurrences { value: usize, count: usize },
    /// Values around a cycle of the arcs between consecutive list elements.
    Cycle { values: Vec<usize> },
    /// A sequence leaving list `list` at `from` and re-entering it further
    /// down at `to`, given as `(list, position)` steps.
    Rule1 {
        list: usize,
        from: usize,
        to: usize,
        path: Vec<(usize, usize)>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoLists => f.write_str("instance has no lists"),
            Violation::TotalLength { expected, found } => {
                write!(f, "lists hold {found} entries, expected 2|X| = {expected}")
            }
            Violation::ShortList { list, len } => write!(f, "list l{list} has length {len} < 2"),
            Violation::OutOfRange { list, value } => {
                write!(f, "list l{list} contains {value}, outside the universe")
            }
            Violation::RepeatedInList { list, value } => {
                write!(f, "value {value} repeats in list l{list}")
            }
            Violation::Occurrences { value, count } => {
                write!(f, "value {value} occurs in {count} lists, expected 2")
            }
            Violation::Cycle { values } => {
                let vs: Vec<String> = values.iter().map(usize::to_string).collect();
                write!(f, "arcs form a cycle {} -> {}", vs.join(" -> "), values[0])
            }
            Violation::Rule1 {
                list,
                from,
                to,
                path,
            } => {
                let steps: Vec<String> = path.iter().map(|(l, p)| format!("(l{l},{p})")).collect();
                write!(
                    f,
                    "Rule 1: l{list} position {from} reaches position {to} through other lists: {}",
                    steps.join(" ")
                )
            }
        }
    }
}

/// All violations found in a candidate instance; empty when it is valid.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid SAT-SM instance");
        }
        write!(f, "invalid SAT-SM instance:")?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

impl SatSmInstance {
    /// Checks list lengths, the universe, the two-lists condition,
    /// acyclicity of the arcs and Rule 1. The last two are only examined
    /// once the others hold.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.n() == 0 {
            violations.push(Violation::NoLists);
        }
        let x = self.universe();
        let found = self.total_length();
        if x.checked_mul(2) != Some(found) {
            violations.push(Violation::TotalLength {
                expected: x.saturating_mul(2),
                found,
            });
        }
        let mut lists_of: BTreeMap<usize, usize> = BTreeMap::new();
        for (a, list) in self.lists().iter().enumerate() {
            if list.len() < 2 {
                violations.push(Violation::ShortList {
                    list: a + 1,
                    len: list.len(),
                });
            }
            let mut seen = BTreeMap::new();
            for &e in list {
                if e == 0 || e > x {
                    violations.push(Violation::OutOfRange { list: a + 1, value: e });
                } else if seen.insert(e, ()).is_some() {
                    violations.push(Violation::RepeatedInList { list: a + 1, value: e });
                } else {
                    *lists_of.entry(e).or_default() += 1;
                }
            }
        }
        // Listing every absent value is only affordable when |X| is bounded
        // by the input size.
        if x <= found {
            for e in 1..=x {
                let count = lists_of.get(&e).copied().unwrap_or(0);
                if count != 2 {
                    violations.push(Violation::Occurrences { value: e, count });
                }
            }
        } else {
            for (&e, &count) in &lists_of {
                if count != 2 {
                    violations.push(Violation::Occurrences { value: e, count });
                }
            }
        }
        if violations.is_empty() {
            if let Some(values) = find_cycle(self) {
                violations.push(Violation::Cycle { values });
            } else {
                violations.extend(rule1_violations(self));
            }
        }
        ValidationReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    pub fn check(&self) -> Result<(), ValidationReport> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(report)
        }
    }
}

/// A cycle in the arc relation, as the values along it.
fn find_cycle(inst: &SatSmInstance) -> Option<Vec<usize>> {
    let x = inst.universe();
    let mut succ = vec![Vec::new(); x + 1];
    for (e, f) in inst.arcs() {
        succ[e].push(f);
    }
    // 0 = unvisited, 1 = on the stack, 2 = done.
    let mut state = vec![0u8; x + 1];
    for root in 1..=x {
        if state[root] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        state[root] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&w) = succ[v].get(*next) {
                *next += 1;
                match state[w] {
                    0 => {
                        state[w] = 1;
                        stack.push((w, 0));
                    }
                    1 => {
                        let start = stack.iter().position(|&(u, _)| u == w).unwrap();
                        return Some(stack[start..].iter().map(|&(u, _)| u).collect());
                    }
                    _ => {}
                }
            } else {
                state[v] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// Rule 1 alone, for instances whose placed values each occur exactly twice
/// (list lengths are not checked).
pub(crate) fn rule1_holds(inst: &SatSmInstance) -> bool {
    rule1_violations(inst).is_empty()
}

/// Rule 1 as reachability over occurrence nodes `(list, position)`.
///
/// Moves are σ (next position in the same list) and θ (to the other
/// occurrence of the same value). From `(m, i)` a forbidden sequence reaches
/// `(m, j)` with `j > i` after taking at least one σ move inside a list
/// other than `m`. At most one violation is reported per list.
fn rule1_violations(inst: &SatSmInstance) -> Vec<Violation> {
    let lists = inst.lists();
    let mut offset = Vec::with_capacity(lists.len());
    let mut nodes: Vec<(usize, usize)> = Vec::new();
    for (a, list) in lists.iter().enumerate() {
        offset.push(nodes.len());
        nodes.extend((0..list.len()).map(|i| (a, i)));
    }
    let occ = inst.occurrences();
    let id = |(a, i): (usize, usize)| offset[a] + i;
    let theta = |(a, i): (usize, usize)| {
        let [p, q] = occ[lists[a][i] - 1];
        if p == (a, i) {
            q
        } else {
            p
        }
    };
    let mut out = Vec::new();
    for (m, list) in lists.iter().enumerate() {
        'starts: for i in 0..list.len() {
            // State: (node, crossed) where crossed records a σ move outside m.
            let state_id = |node: (usize, usize), crossed: bool| id(node) * 2 + crossed as usize;
            let mut parent: Vec<Option<usize>> = vec![None; nodes.len() * 2];
            let mut seen = vec![false; nodes.len() * 2];
            let start = state_id((m, i), false);
            seen[start] = true;
            let mut queue = VecDeque::from([((m, i), false)]);
            while let Some((node, crossed)) = queue.pop_front() {
                let here = state_id(node, crossed);
                if crossed && node.0 == m && node.1 > i {
                    let mut path = Vec::new();
                    let mut cur = Some(here);
                    while let Some(s) = cur {
                        let (a, p) = nodes[s / 2];
                        path.push((a + 1, p + 1));
                        cur = parent[s];
                    }
                    path.reverse();
                    out.push(Violation::Rule1 {
                        list: m + 1,
                        from: i + 1,
                        to: node.1 + 1,
                        path,
                    });
                    break 'starts;
                }
                let mut moves = Vec::with_capacity(2);
                if node.1 + 1 < lists[node.0].len() {
                    moves.push(((node.0, node.1 + 1), crossed || node.0 != m));
                }
                moves.push((theta(node), crossed));
                for (next, c) in moves {
                    let s = state_id(next, c);
                    if !seen[s] {
                        seen[s] = true;
                        parent[s] = Some(here);
                        queue.push_back((next, c));
                    }
                }
            }
        }
    }
    out
}
