use std::collections::BTreeSet;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use super::instance::{content_lines, Instance, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("pair ({man}, {woman}) is out of range for n = {n}")]
    OutOfRange { man: usize, woman: usize, n: usize },
    #[error("man {0} appears in more than one pair")]
    ManTwice(usize),
    #[error("woman {0} appears in more than one pair")]
    WomanTwice(usize),
    #[error("pair ({man}, {woman}) is not acceptable")]
    Unacceptable { man: usize, woman: usize },
    #[error("matching has size {found} but the instance has n = {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("the list of stable matchings is empty")]
    EmptyLattice,
}

/// An injective partial assignment of men to women over ids `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    wife: Vec<Option<usize>>,
    husband: Vec<Option<usize>>,
}

impl Matching {
    /// The matching in which nobody is matched.
    pub fn empty(n: usize) -> Self {
        Matching {
            wife: vec![None; n],
            husband: vec![None; n],
        }
    }

    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self, MatchingError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut matching = Matching::empty(n);
        for (m, w) in pairs {
            if m >= n || w >= n {
                return Err(MatchingError::OutOfRange { man: m, woman: w, n });
            }
            if matching.wife[m].is_some() {
                return Err(MatchingError::ManTwice(m));
            }
            if matching.husband[w].is_some() {
                return Err(MatchingError::WomanTwice(w));
            }
            matching.wife[m] = Some(w);
            matching.husband[w] = Some(m);
        }
        Ok(matching)
    }

    /// Builds the matching from each man's partner.
    pub fn from_wives(wives: &[Option<usize>]) -> Result<Self, MatchingError> {
        let pairs = wives
            .iter()
            .enumerate()
            .filter_map(|(m, w)| w.map(|w| (m, w)));
        Matching::from_pairs(wives.len(), pairs)
    }

    pub fn n(&self) -> usize {
        self.wife.len()
    }

    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.wife.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn wife(&self, m: usize) -> Option<usize> {
        self.wife[m]
    }

    pub fn husband(&self, w: usize) -> Option<usize> {
        self.husband[w]
    }

    pub fn wives(&self) -> &[Option<usize>] {
        &self.wife
    }

    pub fn contains(&self, m: usize, w: usize) -> bool {
        m < self.n() && self.wife[m] == Some(w)
    }

    /// Pairs ordered by man id.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.wife
            .iter()
            .enumerate()
            .filter_map(|(m, w)| w.map(|w| (m, w)))
    }

    pub fn pair_set(&self) -> BTreeSet<(usize, usize)> {
        self.pairs().collect()
    }

    /// Reassigns `m` to `w`. Callers must keep the matching injective.
    pub(crate) fn set_unchecked(&mut self, m: usize, w: usize) {
        self.wife[m] = Some(w);
        self.husband[w] = Some(m);
    }

    /// Checks that the matching lives on `inst` and uses acceptable pairs only.
    pub fn check_against(&self, inst: &Instance) -> Result<(), MatchingError> {
        if self.n() != inst.n() {
            return Err(MatchingError::SizeMismatch {
                expected: inst.n(),
                found: self.n(),
            });
        }
        match self.pairs().find(|&(m, w)| !inst.is_acceptable(m, w)) {
            Some((man, woman)) => Err(MatchingError::Unacceptable { man, woman }),
            None => Ok(()),
        }
    }

    /// Text form: one `man woman` pair per line.
    pub fn to_text(&self) -> String {
        self.pairs().map(|(m, w)| format!("{m} {w}\n")).collect()
    }
}

impl fmt::Debug for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (m, w)) in self.pairs().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({m},{w})")?;
        }
        f.write_str("}")
    }
}

impl Serialize for Matching {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for (m, w) in self.pairs() {
            seq.serialize_element(&[m, w])?;
        }
        seq.end()
    }
}

/// Parses a matching file for an instance of size `n`: one `man woman` pair
/// per content line, `#` comments and blank lines ignored.
pub fn parse_matching(text: &str, n: usize) -> Result<Matching, ParseError> {
    let mut matching = Matching::empty(n);
    for (line_no, line) in content_lines(text) {
        let ids: Vec<&str> = line.split_whitespace().collect();
        let [m, w] = ids[..] else {
            return Err(ParseError::new(line_no, "expected `man woman`"));
        };
        let parse = |tok: &str| {
            tok.parse::<usize>()
                .map_err(|_| ParseError::new(line_no, format!("invalid id `{tok}`")))
        };
        let (m, w) = (parse(m)?, parse(w)?);
        let err = |e: MatchingError| ParseError::new(line_no, e.to_string());
        if m >= n || w >= n {
            return Err(err(MatchingError::OutOfRange { man: m, woman: w, n }));
        }
        if matching.wife[m].is_some() {
            return Err(err(MatchingError::ManTwice(m)));
        }
        if matching.husband[w].is_some() {
            return Err(err(MatchingError::WomanTwice(w)));
        }
        matching.set_unchecked(m, w);
    }
    Ok(matching)
}
