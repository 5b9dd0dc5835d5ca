use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A participant of a stable marriage instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Person {
    Man(usize),
    Woman(usize),
}

impl fmt::Display for Person {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Person::Man(m) => write!(f, "m{m}"),
            Person::Woman(w) => write!(f, "w{w}"),
        }
    }
}

/// Structural problems with a set of preference lists.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("expected {expected} preference lists for {side}, found {found}")]
    ListCount {
        side: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("id {id} in the list of {owner} is out of range for n = {n}")]
    OutOfRange { owner: Person, id: usize, n: usize },
    #[error("duplicate entry {id} in the list of {owner}")]
    Duplicate { owner: Person, id: usize },
    #[error("non-mutual acceptability: {owner} lists {other} but not the reverse")]
    NonMutual { owner: Person, other: Person },
}

impl InstanceError {
    /// The person whose list triggered the error, if any.
    pub fn owner(&self) -> Option<Person> {
        match self {
            InstanceError::ListCount { .. } => None,
            InstanceError::OutOfRange { owner, .. }
            | InstanceError::Duplicate { owner, .. }
            | InstanceError::NonMutual { owner, .. } => Some(*owner),
        }
    }
}

/// A text-level error tied to a 1-based input line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, reason: impl Into<String>) -> Self {
        ParseError {
            line,
            reason: reason.into(),
        }
    }
}

const UNRANKED: u32 = u32::MAX;

/// Strict, possibly incomplete preference lists for `n` men and `n` women.
///
/// Ids are 0-based. Acceptability is mutual: woman `w` appears in man `m`'s
/// list exactly when `m` appears in `w`'s list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    men_prefs: Vec<Vec<usize>>,
    women_prefs: Vec<Vec<usize>>,
    men_rank: Vec<Vec<u32>>,
    women_rank: Vec<Vec<u32>>,
}

fn rank_table(
    prefs: &[Vec<usize>],
    n: usize,
    person: fn(usize) -> Person,
) -> Result<Vec<Vec<u32>>, InstanceError> {
    let mut table = vec![vec![UNRANKED; n]; prefs.len()];
    for (owner, list) in prefs.iter().enumerate() {
        for (pos, &id) in list.iter().enumerate() {
            if id >= n {
                return Err(InstanceError::OutOfRange {
                    owner: person(owner),
                    id,
                    n,
                });
            }
            if table[owner][id] != UNRANKED {
                return Err(InstanceError::Duplicate {
                    owner: person(owner),
                    id,
                });
            }
            table[owner][id] = pos as u32;
        }
    }
    Ok(table)
}

impl Instance {
    /// Builds an instance, checking ranges, duplicates and mutual acceptability.
    pub fn new(men_prefs: Vec<Vec<usize>>, women_prefs: Vec<Vec<usize>>) -> Result<Self, InstanceError> {
        let n = men_prefs.len();
        if women_prefs.len() != n {
            return Err(InstanceError::ListCount {
                side: "women",
                expected: n,
                found: women_prefs.len(),
            });
        }
        let men_rank = rank_table(&men_prefs, n, Person::Man)?;
        let women_rank = rank_table(&women_prefs, n, Person::Woman)?;
        for (m, list) in men_prefs.iter().enumerate() {
            for &w in list {
                if women_rank[w][m] == UNRANKED {
                    return Err(InstanceError::NonMutual {
                        owner: Person::Man(m),
                        other: Person::Woman(w),
                    });
                }
            }
        }
        for (w, list) in women_prefs.iter().enumerate() {
            for &m in list {
                if men_rank[m][w] == UNRANKED {
                    return Err(InstanceError::NonMutual {
                        owner: Person::Woman(w),
                        other: Person::Man(m),
                    });
                }
            }
        }
        Ok(Instance {
            men_prefs,
            women_prefs,
            men_rank,
            women_rank,
        })
    }

    pub fn n(&self) -> usize {
        self.men_prefs.len()
    }

    pub fn man_prefs(&self, m: usize) -> &[usize] {
        &self.men_prefs[m]
    }

    pub fn woman_prefs(&self, w: usize) -> &[usize] {
        &self.women_prefs[w]
    }

    pub fn men_prefs(&self) -> &[Vec<usize>] {
        &self.men_prefs
    }

    pub fn women_prefs(&self) -> &[Vec<usize>] {
        &self.women_prefs
    }

    /// Position of `w` in `m`'s list, `None` if unacceptable.
    pub fn man_rank(&self, m: usize, w: usize) -> Option<usize> {
        match self.men_rank[m][w] {
            UNRANKED => None,
            r => Some(r as usize),
        }
    }

    /// Position of `m` in `w`'s list, `None` if unacceptable.
    pub fn woman_rank(&self, w: usize, m: usize) -> Option<usize> {
        match self.women_rank[w][m] {
            UNRANKED => None,
            r => Some(r as usize),
        }
    }

    pub fn is_acceptable(&self, m: usize, w: usize) -> bool {
        m < self.n() && w < self.n() && self.men_rank[m][w] != UNRANKED
    }

    /// Whether `m` strictly prefers `w` to `current` (being single ranks last).
    pub fn man_prefers(&self, m: usize, w: usize, current: Option<usize>) -> bool {
        let r = self.men_rank[m][w];
        r != UNRANKED && current.is_none_or(|c| r < self.men_rank[m][c])
    }

    /// Whether `w` strictly prefers `m` to `current` (being single ranks last).
    pub fn woman_prefers(&self, w: usize, m: usize, current: Option<usize>) -> bool {
        let r = self.women_rank[w][m];
        r != UNRANKED && current.is_none_or(|c| r < self.women_rank[w][c])
    }

    /// Canonical text form: header, men's lists, women's lists.
    ///
    /// Empty lists are written as `-` so that the output re-parses to the
    /// same instance.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n());
        for list in self.men_prefs.iter().chain(&self.women_prefs) {
            if list.is_empty() {
                out.push('-');
            } else {
                let line: Vec<String> = list.iter().map(usize::to_string).collect();
                out.push_str(&line.join(" "));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Instance {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_instance(s)
    }
}

/// Lines that carry content, with their 1-based numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_list(line_no: usize, line: &str) -> Result<Vec<usize>, ParseError> {
    if line == "-" {
        return Ok(Vec::new());
    }
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| ParseError::new(line_no, format!("invalid id `{tok}`")))
        })
        .collect()
}

/// Parses the stable marriage text format.
///
/// Line 1 holds `n`; the next `n` content lines are the men's lists and the
/// following `n` the women's, most preferred first. Blank lines and lines
/// starting with `#` are skipped; `-` denotes an empty list.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = content_lines(text);
    let (header_no, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, "malformed header: missing n"))?;
    let n: usize = header
        .parse()
        .map_err(|_| ParseError::new(header_no, format!("malformed header `{header}`")))?;
    // Each list occupies at least one line, so a huge n is rejected here
    // before anything of size n is allocated.
    let body: Vec<(usize, &str)> = lines.collect();
    let expected = n
        .checked_mul(2)
        .ok_or_else(|| ParseError::new(header_no, format!("malformed header `{header}`")))?;
    if body.len() != expected {
        let line = body.get(expected).map_or(header_no, |(l, _)| *l);
        return Err(ParseError::new(
            line,
            format!("expected {expected} preference lists, found {}", body.len()),
        ));
    }
    let mut line_of = Vec::with_capacity(2 * n);
    let mut lists = Vec::with_capacity(2 * n);
    for &(line_no, line) in &body {
        line_of.push(line_no);
        lists.push(parse_list(line_no, line)?);
    }
    let women = lists.split_off(n);
    Instance::new(lists, women).map_err(|e| {
        let line = match e.owner() {
            Some(Person::Man(m)) => line_of[m],
            Some(Person::Woman(w)) => line_of[n + w],
            None => header_no,
        };
        ParseError::new(line, e.to_string())
    })
}
