use std::fmt::Write;

use serde::Serialize;

use super::RotationPoset;

#[derive(Serialize)]
struct RotationJson {
    id: usize,
    cycle: Vec<[usize; 2]>,
}

#[derive(Serialize)]
struct PosetJson {
    rotations: Vec<RotationJson>,
    edges: Vec<[usize; 3]>,
}

impl RotationPoset {
    /// Graphviz rendering: one node per rotation labelled with its cycle,
    /// one edge per covering relation labelled with its type.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph rotation_poset {\n    node [shape=box];\n");
        for r in self.rotations() {
            let pairs: Vec<String> = r.cycle().iter().map(|(m, w)| format!("({m},{w})")).collect();
            writeln!(out, "    r{} [label=\"ρ{}\\n{}\"];", r.id, r.id, pairs.join(" ")).unwrap();
        }
        for &(from, to, ty) in self.edges() {
            writeln!(out, "    r{from} -> r{to} [label=\"{}\"];", ty.number()).unwrap();
        }
        out.push_str("}\n");
        out
    }

    /// JSON dump `{"rotations":[{"id":..,"cycle":[[m,w],..]}],"edges":[[from,to,type],..]}`.
    pub fn to_json(&self) -> String {
        let dump = PosetJson {
            rotations: self
                .rotations()
                .iter()
                .map(|r| RotationJson {
                    id: r.id,
                    cycle: r.cycle().iter().map(|&(m, w)| [m, w]).collect(),
                })
                .collect(),
            edges: self
                .edges()
                .iter()
                .map(|&(a, b, t)| [a, b, t.number() as usize])
                .collect(),
        };
        serde_json::to_string(&dump).expect("plain data serializes")
    }
}

#[cfg(test)]
mod tests {
    use crate::marriage::Matching;
    use crate::poset::{Rotation, RotationPoset};

    #[test]
    fn empty_poset_renders() {
        let p = RotationPoset::new(Matching::empty(2), vec![], []).unwrap();
        assert_eq!(p.to_json(), r#"{"rotations":[],"edges":[]}"#);
        assert!(!p.to_dot().contains("->"));
        assert!(!p.to_dot().contains("label"));
    }

    #[test]
    fn json_key_order_and_content() {
        let base = Matching::from_pairs(2, [(0, 0), (1, 1)]).unwrap();
        let p = RotationPoset::new(base, vec![Rotation::new(0, vec![(1, 1), (0, 0)]).unwrap()], [])
            .unwrap();
        assert_eq!(p.to_json(), r#"{"rotations":[{"id":0,"cycle":[[0,0],[1,1]]}],"edges":[]}"#);
    }
}
