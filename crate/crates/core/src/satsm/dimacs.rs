use std::fmt::Write;

use thiserror::Error;

use super::assignment::Assignment;
use super::cnf::{ClauseGroup, Cnf};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {reason}")]
pub struct DimacsError {
    pub line: usize,
    pub reason: String,
}

impl DimacsError {
    fn new(line: usize, reason: impl Into<String>) -> Self {
        DimacsError {
            line,
            reason: reason.into(),
        }
    }
}

/// DIMACS text with `c group <G>` comments before each group's block.
pub fn to_dimacs(cnf: &Cnf) -> String {
    let mut out = String::new();
    writeln!(out, "c SAT-SM CNF, |X| = {}", cnf.universe()).unwrap();
    writeln!(out, "c variables: y_e = e, s_e = |X|+e, p_e = 2|X|+e").unwrap();
    writeln!(out, "p cnf {} {}", cnf.num_vars(), cnf.len()).unwrap();
    let mut current: Option<ClauseGroup> = None;
    for (clause, lits) in cnf.clauses().iter().zip(cnf.dimacs_clauses()) {
        if current != Some(clause.group) {
            writeln!(out, "c group {}", clause.group).unwrap();
            current = Some(clause.group);
        }
        for l in lits {
            write!(out, "{l} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// A plain DIMACS formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimacsCnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

fn parse_lit(line: usize, tok: &str) -> Result<i32, DimacsError> {
    tok.parse::<i32>()
        .map_err(|_| DimacsError::new(line, format!("invalid literal `{tok}`")))
}

/// Parses a DIMACS CNF file. Clauses may span lines; comment lines start
/// with `c`.
pub fn parse_dimacs(text: &str) -> Result<DimacsCnf, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            let ["cnf", v, c] = parts[..] else {
                return Err(DimacsError::new(line_no, "header must be `p cnf VARS CLAUSES`"));
            };
            if header.is_some() {
                return Err(DimacsError::new(line_no, "duplicate header"));
            }
            let num = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| DimacsError::new(line_no, format!("invalid count `{s}`")))
            };
            header = Some((num(v)?, num(c)?));
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(DimacsError::new(line_no, "clause before header"));
        };
        for tok in line.split_whitespace() {
            let lit = parse_lit(line_no, tok)?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > num_vars {
                return Err(DimacsError::new(line_no, format!("literal {lit} exceeds {num_vars} variables")));
            } else {
                current.push(lit);
            }
        }
    }
    let (num_vars, num_clauses) = header.ok_or_else(|| DimacsError::new(1, "missing header"))?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != num_clauses {
        return Err(DimacsError::new(
            text.lines().count().max(1),
            format!("header declares {num_clauses} clauses, found {}", clauses.len()),
        ));
    }
    Ok(DimacsCnf { num_vars, clauses })
}

/// Collects a model's literals from `v` lines (or bare literal lines) into a
/// total assignment over `3|X|` variables. Variables the model leaves out are
/// false. `c` and `s` lines are skipped.
pub fn from_dimacs_model(text: &str, universe: usize) -> Result<Assignment, DimacsError> {
    let num_vars = 3 * universe;
    let mut values: Vec<Option<bool>> = vec![None; num_vars];
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('s') {
            continue;
        }
        let body = line.strip_prefix('v').unwrap_or(line);
        if matches!(line, "SAT" | "SATISFIABLE") {
            continue;
        }
        for tok in body.split_whitespace() {
            let lit = parse_lit(line_no, tok)?;
            if lit == 0 {
                continue;
            }
            let var = lit.unsigned_abs() as usize;
            if var > num_vars {
                return Err(DimacsError::new(line_no, format!("variable {var} exceeds 3|X| = {num_vars}")));
            }
            let value = lit > 0;
            match values[var - 1] {
                Some(prev) if prev != value => {
                    return Err(DimacsError::new(line_no, format!("variable {var} assigned both ways")));
                }
                _ => values[var - 1] = Some(value),
            }
        }
    }
    Ok(Assignment::from_values(
        universe,
        values.into_iter().map(|v| v.unwrap_or(false)).collect(),
    ))
}

/// Reads an external solver's output: `Ok(None)` for an UNSAT answer,
/// otherwise the model as in [`from_dimacs_model`].
pub fn parse_solver_output(text: &str, universe: usize) -> Result<Option<Assignment>, DimacsError> {
    let mut verdict: Option<bool> = None;
    for (i, line) in text.lines().enumerate() {
        let status = line.trim().strip_prefix("s ").map(str::trim).unwrap_or(line.trim());
        let v = match status {
            "SATISFIABLE" | "SAT" => true,
            "UNSATISFIABLE" | "UNSAT" => false,
            _ => continue,
        };
        if verdict.is_some_and(|prev| prev != v) {
            return Err(DimacsError::new(i + 1, "conflicting status lines"));
        }
        verdict = Some(v);
    }
    match verdict {
        Some(false) => Ok(None),
        Some(true) => from_dimacs_model(text, universe).map(Some),
        None => Err(DimacsError::new(1, "no SAT/UNSAT status line in solver output")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::satsm::assignment::Variable;
    use crate::satsm::build_cnf;
    use crate::satsm::fixtures::diamond;

    #[test]
    fn diamond_dimacs() {
        let cnf = build_cnf(&diamond()).unwrap();
        let text = to_dimacs(&cnf);
        assert!(text.contains("\np cnf 12 32\n"));
        assert!(text.contains("c group A\n1 9 2 10 0\n"));
        for g in ["A", "B", "C1", "C2", "D"] {
            assert_eq!(text.matches(&format!("c group {g}\n")).count(), 1);
        }
        let back = parse_dimacs(&text).unwrap();
        assert_eq!(back.num_vars, 12);
        assert_eq!(back.clauses, cnf.dimacs_clauses());
    }

    #[test]
    fn model_lines() {
        let asg = from_dimacs_model("c comment\ns SATISFIABLE\nv 1 5 -2\nv 0\n", 4).unwrap();
        assert!(asg.get(Variable::y(1)));
        assert!(asg.get(Variable::s(1)));
        assert!(!asg.get(Variable::y(2)));
        assert!(!asg.get(Variable::p(4)));
        assert!(from_dimacs_model("v 13 0", 4).is_err());
        assert!(from_dimacs_model("v 1 -1 0", 4).is_err());
        assert!(from_dimacs_model("v x 0", 4).is_err());
    }

    #[test]
    fn solver_output() {
        assert_eq!(parse_solver_output("s UNSATISFIABLE\n", 2).unwrap(), None);
        let asg = parse_solver_output("SAT\n-1 2 0\n", 1).unwrap().unwrap();
        assert!(asg.get(Variable::s(1)));
        assert!(parse_solver_output("nothing\n", 1).is_err());
    }

    #[test]
    fn malformed_cnf() {
        assert!(parse_dimacs("1 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 1\n2 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 2\n1 0\n").is_err());
        assert_eq!(
            parse_dimacs("c x\np cnf 2 2\n1 -2\n0 2 0\n").unwrap().clauses,
            vec![vec![1, -2], vec![2]]
        );
    }
}
