use thiserror::Error;

use super::assignment::Assignment;
use super::cnf::Cnf;

/// Conflicts allowed before [`solve`] gives up.
pub const DEFAULT_CONFLICT_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("conflict limit of {0} reached")]
    ConflictLimit(u64),
    #[error("literal {lit} out of range for {num_vars} variables")]
    BadLiteral { lit: i32, num_vars: usize },
    #[error("solver produced a model violating clause {0}")]
    Unsound(usize),
}

/// Whether `model` (indexed by variable minus one) satisfies every clause.
pub fn evaluate(clauses: &[Vec<i32>], model: &[bool]) -> bool {
    clauses.iter().all(|c| {
        c.iter()
            .any(|&l| model[l.unsigned_abs() as usize - 1] == (l > 0))
    })
}

struct Dpll<'a> {
    clauses: &'a [Vec<i32>],
    value: Vec<Option<bool>>,
    trail: Vec<usize>,
}

impl Dpll<'_> {
    fn lit_value(&self, l: i32) -> Option<bool> {
        self.value[l.unsigned_abs() as usize - 1].map(|v| v == (l > 0))
    }

    fn assign(&mut self, l: i32) {
        let v = l.unsigned_abs() as usize - 1;
        self.value[v] = Some(l > 0);
        self.trail.push(v);
    }

    fn undo_to(&mut self, len: usize) {
        for v in self.trail.drain(len..) {
            self.value[v] = None;
        }
    }

    /// Unit propagation to a fixpoint. Returns false on a falsified clause.
    fn propagate(&mut self) -> bool {
        loop {
            let mut changed = false;
            for c in self.clauses {
                let mut unassigned = None;
                let mut open = 0;
                let mut sat = false;
                for &l in c {
                    match self.lit_value(l) {
                        Some(true) => {
                            sat = true;
                            break;
                        }
                        Some(false) => {}
                        None => {
                            open += 1;
                            unassigned = Some(l);
                        }
                    }
                }
                if sat {
                    continue;
                }
                match (open, unassigned) {
                    (0, _) => return false,
                    (1, Some(l)) => {
                        self.assign(l);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }
}

/// Complete DPLL search over DIMACS-style clauses with variables
/// `1..=num_vars`. Branches on the lowest unassigned variable, trying false
/// first, so models are reproducible.
///
/// Returns `Ok(None)` when the clauses are unsatisfiable.
pub fn solve_clauses(
    num_vars: usize,
    clauses: &[Vec<i32>],
    conflict_cap: u64,
) -> Result<Option<Vec<bool>>, SolveError> {
    for c in clauses {
        for &lit in c {
            if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                return Err(SolveError::BadLiteral { lit, num_vars });
            }
        }
    }
    let mut s = Dpll {
        clauses,
        value: vec![None; num_vars],
        trail: Vec::new(),
    };
    // (trail length before the decision, variable, already flipped)
    let mut decisions: Vec<(usize, usize, bool)> = Vec::new();
    let mut conflicts = 0u64;
    loop {
        if !s.propagate() {
            conflicts += 1;
            if conflicts > conflict_cap {
                return Err(SolveError::ConflictLimit(conflict_cap));
            }
            loop {
                match decisions.pop() {
                    None => return Ok(None),
                    Some((mark, _, true)) => s.undo_to(mark),
                    Some((mark, var, false)) => {
                        s.undo_to(mark);
                        decisions.push((mark, var, true));
                        s.assign(var as i32 + 1);
                        break;
                    }
                }
            }
            continue;
        }
        match s.value.iter().position(Option::is_none) {
            None => break,
            Some(var) => {
                decisions.push((s.trail.len(), var, false));
                s.assign(-(var as i32 + 1));
            }
        }
    }
    let model: Vec<bool> = s.value.into_iter().map(|v| v.unwrap_or(false)).collect();
    if let Some(i) = clauses.iter().position(|c| !evaluate(std::slice::from_ref(c), &model)) {
        return Err(SolveError::Unsound(i));
    }
    Ok(Some(model))
}

/// Solves a SAT-SM CNF. The model is re-checked clause by clause before it
/// is returned.
pub fn solve(cnf: &Cnf) -> Result<Option<Assignment>, SolveError> {
    solve_with_cap(cnf, DEFAULT_CONFLICT_CAP)
}

pub fn solve_with_cap(cnf: &Cnf, conflict_cap: u64) -> Result<Option<Assignment>, SolveError> {
    let clauses = cnf.dimacs_clauses();
    Ok(solve_clauses(cnf.num_vars(), &clauses, conflict_cap)?.map(|model| {
        let asg = Assignment::from_values(cnf.universe(), model);
        debug_assert!(cnf.is_satisfied_by(&asg));
        asg
    }))
}
