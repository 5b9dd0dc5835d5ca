//! SAT-SM: ordered lists over `X = [1, |X|]` in which every value occurs in
//! exactly two lists, the CNF built from them, and a small complete solver.

mod assignment;
mod cnf;
mod dimacs;
mod solver;
mod validate;

use std::fmt;
use std::str::FromStr;

use crate::marriage::{content_lines, ParseError};

pub use assignment::{decode, encode, Assignment, VarKind, Variable};
pub use cnf::{audit_schaefer, build_cnf, AuditError, AuditReport, Clause, ClauseGroup, Cnf, GroupCounts, Lit};
pub use dimacs::{from_dimacs_model, parse_dimacs, parse_solver_output, to_dimacs, DimacsCnf, DimacsError};
pub use solver::{evaluate, solve, solve_clauses, solve_with_cap, SolveError, DEFAULT_CONFLICT_CAP};
pub(crate) use validate::rule1_holds;
pub use validate::{ValidationReport, Violation};

/// A SAT-SM candidate: the universe size and the lists `l_1..l_n`.
///
/// Construction does not validate; call [`SatSmInstance::validate`] or use
/// an operation that requires a valid instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SatSmInstance {
    universe: usize,
    lists: Vec<Vec<usize>>,
}

/// Where a value sits: list index (0-based) and position in it (0-based).
pub type Occurrence = (usize, usize);

impl SatSmInstance {
    pub fn new(universe: usize, lists: Vec<Vec<usize>>) -> Self {
        SatSmInstance { universe, lists }
    }

    /// `|X|`.
    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn lists(&self) -> &[Vec<usize>] {
        &self.lists
    }

    pub fn list(&self, a: usize) -> &[usize] {
        &self.lists[a]
    }

    /// Number of lists.
    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn total_length(&self) -> usize {
        self.lists.iter().map(Vec::len).sum()
    }

    /// The two occurrences of every value, indexed by `value - 1`. Only
    /// meaningful on a structurally valid instance.
    pub fn occurrences(&self) -> Vec<[Occurrence; 2]> {
        let mut found: Vec<Vec<Occurrence>> = vec![Vec::with_capacity(2); self.universe];
        for (a, list) in self.lists.iter().enumerate() {
            for (i, &e) in list.iter().enumerate() {
                found[e - 1].push((a, i));
            }
        }
        found
            .into_iter()
            .map(|o| {
                assert_eq!(o.len(), 2, "occurrences() needs a structurally valid instance");
                [o[0], o[1]]
            })
            .collect()
    }

    /// Consecutive pairs `(X_i^a, X_{i+1}^a)` of every list.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.lists
            .iter()
            .flat_map(|l| l.windows(2).map(|w| (w[0], w[1])))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.universe, self.lists.len());
        for list in &self.lists {
            let items: Vec<String> = list.iter().map(usize::to_string).collect();
            out.push_str(&items.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for SatSmInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for SatSmInstance {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_satsm(s)
    }
}

/// Parses the SAT-SM text format: a header `|X| n` followed by one line of
/// space-separated values per list. Blank lines and `#` comments are skipped.
///
/// Only syntax is checked here; list conditions are left to
/// [`SatSmInstance::validate`].
pub fn parse_satsm(text: &str) -> Result<SatSmInstance, ParseError> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, "missing header `|X| n`"))?;
    let nums = parse_numbers(line_no, header)?;
    let [universe, n] = nums[..] else {
        return Err(ParseError::new(line_no, "header must be `|X| n`"));
    };
    let mut lists = Vec::new();
    for (line_no, line) in lines {
        if lists.len() == n {
            return Err(ParseError::new(line_no, format!("more than {n} lists")));
        }
        lists.push(parse_numbers(line_no, line)?);
    }
    if lists.len() != n {
        return Err(ParseError::new(
            text.lines().count().max(1),
            format!("expected {n} lists, found {}", lists.len()),
        ));
    }
    Ok(SatSmInstance::new(universe, lists))
}

fn parse_numbers(line_no: usize, line: &str) -> Result<Vec<usize>, ParseError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| ParseError::new(line_no, format!("invalid number `{tok}`")))
        })
        .collect()
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::SatSmInstance;

    pub fn diamond() -> SatSmInstance {
        SatSmInstance::new(4, vec![vec![1, 2], vec![1, 3], vec![2, 4], vec![3, 4]])
    }
}
