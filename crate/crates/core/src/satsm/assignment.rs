use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::SatSmInstance;

/// The three variable families, one variable of each per value of `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum VarKind {
    /// `y_e`: rotation `e` is a leaf of `S`.
    Y,
    /// `s_e`: rotation `e` belongs to `S`.
    S,
    /// `p_e`: rotation `e` is a neighbour of `S`.
    P,
}

impl VarKind {
    fn offset(self) -> usize {
        match self {
            VarKind::Y => 0,
            VarKind::S => 1,
            VarKind::P => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    pub kind: VarKind,
    /// Value of `X`, 1-based.
    pub element: usize,
}

impl Variable {
    pub fn y(element: usize) -> Self {
        Variable { kind: VarKind::Y, element }
    }

    pub fn s(element: usize) -> Self {
        Variable { kind: VarKind::S, element }
    }

    pub fn p(element: usize) -> Self {
        Variable { kind: VarKind::P, element }
    }

    /// DIMACS number: `y_e -> e`, `s_e -> |X| + e`, `p_e -> 2|X| + e`.
    pub fn index(self, universe: usize) -> usize {
        self.kind.offset() * universe + self.element
    }

    pub fn from_index(index: usize, universe: usize) -> Option<Self> {
        if index == 0 || universe == 0 || index > 3 * universe {
            return None;
        }
        let kind = [VarKind::Y, VarKind::S, VarKind::P][(index - 1) / universe];
        Some(Variable {
            kind,
            element: (index - 1) % universe + 1,
        })
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            VarKind::Y => 'y',
            VarKind::S => 's',
            VarKind::P => 'p',
        };
        write!(f, "{k}{}", self.element)
    }
}

/// A total assignment of the `3|X|` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    universe: usize,
    /// Indexed by DIMACS number minus one.
    values: Vec<bool>,
}

impl Assignment {
    pub fn all_false(universe: usize) -> Self {
        Assignment {
            universe,
            values: vec![false; 3 * universe],
        }
    }

    /// From values indexed by DIMACS number minus one.
    pub fn from_values(universe: usize, values: Vec<bool>) -> Self {
        assert_eq!(values.len(), 3 * universe, "assignment must be total");
        Assignment { universe, values }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn get(&self, v: Variable) -> bool {
        self.values[v.index(self.universe) - 1]
    }

    pub fn set(&mut self, v: Variable, value: bool) {
        let i = v.index(self.universe) - 1;
        self.values[i] = value;
    }

    /// Value of a DIMACS literal.
    pub fn literal(&self, lit: i32) -> bool {
        let v = self.values[lit.unsigned_abs() as usize - 1];
        if lit > 0 {
            v
        } else {
            !v
        }
    }

    /// Variables set to true, in DIMACS order.
    pub fn true_vars(&self) -> impl Iterator<Item = Variable> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| Variable::from_index(i + 1, self.universe).unwrap())
    }

    /// `v` line in DIMACS model style, e.g. `v 1 -2 3 0`.
    pub fn to_model_line(&self) -> String {
        let mut out = String::from("v");
        for (i, &b) in self.values.iter().enumerate() {
            let lit = i as i64 + 1;
            out.push_str(&format!(" {}", if b { lit } else { -lit }));
        }
        out.push_str(" 0");
        out
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.true_vars().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

impl Serialize for Assignment {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Sets {
            s: BTreeSet<usize>,
            y: BTreeSet<usize>,
            p: BTreeSet<usize>,
        }
        let (s, y, p) = sets(self);
        Sets { s, y, p }.serialize(serializer)
    }
}

fn sets(asg: &Assignment) -> (BTreeSet<usize>, BTreeSet<usize>, BTreeSet<usize>) {
    let pick = |kind| {
        (1..=asg.universe)
            .filter(|&e| asg.get(Variable { kind, element: e }))
            .collect()
    };
    (pick(VarKind::S), pick(VarKind::Y), pick(VarKind::P))
}

/// Reads `(S, L, N) = ({e : s_e}, {e : y_e}, {e : p_e})` off an assignment.
pub fn decode(
    inst: &SatSmInstance,
    asg: &Assignment,
) -> (BTreeSet<usize>, BTreeSet<usize>, BTreeSet<usize>) {
    debug_assert_eq!(inst.universe(), asg.universe);
    sets(asg)
}

/// The assignment making exactly the members of `s`, `l` and `n` true in the
/// `s`, `y` and `p` families respectively. Values outside `X` are ignored.
pub fn encode(
    inst: &SatSmInstance,
    s: &BTreeSet<usize>,
    l: &BTreeSet<usize>,
    n: &BTreeSet<usize>,
) -> Assignment {
    let x = inst.universe();
    let mut asg = Assignment::all_false(x);
    for (set, make) in [(s, Variable::s as fn(usize) -> Variable), (l, Variable::y), (n, Variable::p)] {
        for &e in set.iter().filter(|&&e| (1..=x).contains(&e)) {
            asg.set(make(e), true);
        }
    }
    asg
}
