use std::fmt::Write;
use std::path::Path;

use serde::Serialize;
use supermatch::{
    deferred_acceptance, enumerate_stable_matchings, find_rotations, first_ab_supermatch,
    is_ab_supermatch, parse_instance, parse_matching, repairs, ClosedSubset, Instance, Matching,
    PosetError, RepairWitness, RobustnessError, RobustnessQuery, Side, SupermatchVerdict,
};

use crate::{pairs_text, read, to_json, CmdResult, CommandOutcome, Failure};

fn load(path: &Path) -> Result<Instance, Failure> {
    let text = read(path)?;
    parse_instance(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn poset_failure(e: PosetError) -> Failure {
    match e {
        PosetError::EnumerationLimit { .. } => Failure::Limit(e.to_string()),
        other => Failure::Input(other.to_string()),
    }
}

fn robustness_failure(e: RobustnessError) -> Failure {
    match e {
        RobustnessError::Poset(p) => poset_failure(p),
        other => Failure::Input(other.to_string()),
    }
}

fn rotation_names(s: &ClosedSubset) -> String {
    let names: Vec<String> = s.members().iter().map(|r| format!("ρ{r}")).collect();
    format!("{{{}}}", names.join(", "))
}

pub(crate) fn parse(path: &Path, json: bool) -> CmdResult {
    let inst = load(path)?;
    if json {
        #[derive(Serialize)]
        struct Out<'a> {
            n: usize,
            men: &'a [Vec<usize>],
            women: &'a [Vec<usize>],
        }
        return Ok(CommandOutcome::ok(to_json(&Out {
            n: inst.n(),
            men: inst.men_prefs(),
            women: inst.women_prefs(),
        })));
    }
    Ok(CommandOutcome::ok(inst.to_text()))
}

pub(crate) fn solve(path: &Path, women: bool, json: bool) -> CmdResult {
    let inst = load(path)?;
    let side = if women {
        Side::WomenProposing
    } else {
        Side::MenProposing
    };
    let m = deferred_acceptance(&inst, side);
    let proposers = if women { "women" } else { "men" };
    if json {
        #[derive(Serialize)]
        struct Out<'a> {
            proposers: &'a str,
            matching: &'a Matching,
        }
        return Ok(CommandOutcome::ok(to_json(&Out {
            proposers,
            matching: &m,
        })));
    }
    Ok(CommandOutcome::ok(format!(
        "{proposers}-optimal stable matching:\n{}",
        m.to_text()
    )))
}

#[derive(Serialize)]
struct Entry<'a> {
    index: usize,
    rotations: Vec<usize>,
    matching: &'a Matching,
}

fn entry<'a>(index: usize, s: &ClosedSubset, m: &'a Matching) -> Entry<'a> {
    Entry {
        index,
        rotations: s.members().iter().copied().collect(),
        matching: m,
    }
}

pub(crate) fn enumerate(path: &Path, cap: usize, json: bool) -> CmdResult {
    let inst = load(path)?;
    let all = enumerate_stable_matchings(&inst, cap).map_err(poset_failure)?;
    if json {
        #[derive(Serialize)]
        struct Out<'a> {
            count: usize,
            matchings: Vec<Entry<'a>>,
        }
        return Ok(CommandOutcome::ok(to_json(&Out {
            count: all.len(),
            matchings: all
                .iter()
                .enumerate()
                .map(|(i, (s, m))| entry(i, s, m))
                .collect(),
        })));
    }
    let mut out = format!("{} stable matchings\n", all.len());
    for (i, (s, m)) in all.iter().enumerate() {
        writeln!(out, "M{i:<3} {:<28} {}", rotation_names(s), pairs_text(m)).unwrap();
    }
    Ok(CommandOutcome::ok(out))
}

pub(crate) fn poset(path: &Path, dot: bool, json: bool) -> CmdResult {
    let p = find_rotations(&load(path)?);
    if dot {
        return Ok(CommandOutcome::ok(p.to_dot()));
    }
    if json {
        let value: serde_json::Value = serde_json::from_str(&p.to_json()).expect("poset JSON");
        return Ok(CommandOutcome::ok(to_json(&value)));
    }
    let mut out = format!("{} rotations\n", p.len());
    for r in p.rotations() {
        let cycle: Vec<String> = r
            .cycle()
            .iter()
            .map(|(m, w)| format!("({m},{w})"))
            .collect();
        writeln!(out, "ρ{}: {}", r.id, cycle.join(" ")).unwrap();
    }
    writeln!(out, "{} covering edges", p.edges().len()).unwrap();
    for &(a, b, t) in p.edges() {
        writeln!(out, "ρ{a} -> ρ{b} (type {})", t.number()).unwrap();
    }
    Ok(CommandOutcome::ok(out))
}

pub(crate) fn check_supermatch(
    path: &Path,
    a: usize,
    b: usize,
    matching: Option<&Path>,
    cap: usize,
    json: bool,
) -> CmdResult {
    let inst = load(path)?;
    let q = RobustnessQuery::new(a, b).map_err(|e| Failure::Input(e.to_string()))?;
    let all = enumerate_stable_matchings(&inst, cap).map_err(poset_failure)?;
    let lattice: Vec<Matching> = all.iter().map(|(_, m)| m.clone()).collect();
    match matching {
        Some(mpath) => {
            let m = parse_matching(&read(mpath)?, inst.n())
                .map_err(|e| Failure::Input(format!("{}: {e}", mpath.display())))?;
            let verdict = is_ab_supermatch(&inst, &lattice, &m, q).map_err(robustness_failure)?;
            let fixes = if verdict.holds {
                repairs(&inst, &lattice, &m, q).map_err(robustness_failure)?
            } else {
                None
            };
            let text = if json {
                #[derive(Serialize)]
                struct Out<'a> {
                    a: usize,
                    b: usize,
                    matching: &'a Matching,
                    verdict: &'a SupermatchVerdict,
                    repairs: &'a Option<Vec<RepairWitness>>,
                }
                to_json(&Out {
                    a,
                    b,
                    matching: &m,
                    verdict: &verdict,
                    repairs: &fixes,
                })
            } else {
                verdict_text(q, &verdict, fixes.as_deref())
            };
            Ok(CommandOutcome::answer(verdict.holds, text))
        }
        None => {
            let found = first_ab_supermatch(&inst, &lattice, q).map_err(robustness_failure)?;
            let hit = found.map(|m| {
                let i = lattice
                    .iter()
                    .position(|o| o == m)
                    .expect("taken from the lattice");
                (i, &all[i].0, m)
            });
            let fixes = match hit {
                Some((_, _, m)) => repairs(&inst, &lattice, m, q).map_err(robustness_failure)?,
                None => None,
            };
            let text = if json {
                #[derive(Serialize)]
                struct Out<'a> {
                    a: usize,
                    b: usize,
                    supermatch: Option<Entry<'a>>,
                    repairs: &'a Option<Vec<RepairWitness>>,
                }
                to_json(&Out {
                    a,
                    b,
                    supermatch: hit.map(|(i, s, m)| entry(i, s, m)),
                    repairs: &fixes,
                })
            } else {
                match hit {
                    Some((i, s, m)) => {
                        let mut out = format!(
                            "({a},{b})-supermatch: M{i} {} {}\n",
                            rotation_names(s),
                            pairs_text(m)
                        );
                        push_repairs(&mut out, fixes.as_deref());
                        out
                    }
                    None => format!(
                        "no ({a},{b})-supermatch among {} stable matchings\n",
                        lattice.len()
                    ),
                }
            };
            Ok(CommandOutcome::answer(hit.is_some(), text))
        }
    }
}

fn verdict_text(
    q: RobustnessQuery,
    v: &SupermatchVerdict,
    fixes: Option<&[RepairWitness]>,
) -> String {
    let (a, b) = (q.a(), q.b());
    let mut out = String::new();
    if v.vacuous {
        writeln!(
            out,
            "({a},{b})-supermatch: yes (fewer than {a} non-fixed pairs)"
        )
        .unwrap();
        return out;
    }
    if v.holds {
        writeln!(out, "({a},{b})-supermatch: yes").unwrap();
        push_repairs(&mut out, fixes);
        return out;
    }
    writeln!(out, "({a},{b})-supermatch: no").unwrap();
    if let Some(w) = &v.witness {
        let broken: Vec<String> = w.broken.iter().map(|(x, y)| format!("({x},{y})")).collect();
        writeln!(out, "irreparable Ψ = {{{}}}", broken.join(", ")).unwrap();
    }
    match (&v.nearest, v.nearest_distance) {
        (Some(near), Some(d)) => writeln!(
            out,
            "nearest avoiding matching at distance {d} > {}: {}",
            a + b,
            pairs_text(near)
        )
        .unwrap(),
        _ => writeln!(out, "no stable matching avoids Ψ").unwrap(),
    }
    out
}

fn push_repairs(out: &mut String, fixes: Option<&[RepairWitness]>) {
    for r in fixes.unwrap_or_default() {
        if let (Some(repair), Some(cost)) = (&r.repair, r.cost) {
            let broken: Vec<String> = r.broken.iter().map(|(x, y)| format!("({x},{y})")).collect();
            writeln!(
                out,
                "  break {{{}}} -> repair {} (cost {cost})",
                broken.join(", "),
                pairs_text(repair)
            )
            .unwrap();
        }
    }
}
