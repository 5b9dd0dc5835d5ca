use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use supermatch::reduction::sample_params;
use supermatch::{
    enumerate_stable_matchings, first_ab_supermatch, generate_random_satsm, holds_ab_supermatch,
    map_solution_backward, map_solution_forward, reduce as reduce_satsm, solve, to_dimacs,
    validate_family_f, FamilyFReport, GeneratorParams, Matching, Reduction, ReductionError,
    RobustnessQuery, SatSmInstance,
};

use crate::satsm::{build, load_valid};
use crate::{to_json, CmdResult, CommandOutcome, Failure};

/// Stable matchings searched before the equivalence check is skipped; the
/// closed subsets of a poset on 12 rotations always fit.
const EQUIVALENCE_CAP: usize = 1 << 12;

fn reduction_failure(e: ReductionError) -> Failure {
    match e {
        ReductionError::GenerationFailed { .. } => Failure::Limit(e.to_string()),
        other => Failure::Input(other.to_string()),
    }
}

#[derive(Serialize)]
struct ReportJson<'a> {
    universe: usize,
    lists: usize,
    rotations: usize,
    people_per_side: usize,
    cnf_variables: usize,
    cnf_clauses: usize,
    family_f: &'a FamilyFReport,
    /// `None` when the reduced instance has too many stable matchings to
    /// search.
    equivalence: Option<Equivalence>,
}

#[derive(Serialize)]
struct ReduceJson<'a> {
    out: String,
    files: &'a [&'a str],
    family_f_passes: bool,
    equivalence: Option<Equivalence>,
}

const REDUCE_FILES: [&str; 5] = [
    "satsm.txt",
    "instance.txt",
    "poset.json",
    "cnf.dimacs",
    "report.json",
];

pub(crate) fn reduce(path: &Path, out: &Path, json: bool) -> CmdResult {
    let inst = load_valid(path, json)?;
    let red = reduce_satsm(&inst).map_err(reduction_failure)?;
    let cnf = build(&inst);
    let family = validate_family_f(&red.poset);
    let verdict = match equivalence(&inst, &red) {
        Ok(v) => Some(v),
        Err(Failure::Limit(_)) => None,
        Err(e) => return Err(e),
    };
    let report = ReportJson {
        universe: inst.universe(),
        lists: inst.n(),
        rotations: red.poset.len(),
        people_per_side: red.instance.n(),
        cnf_variables: cnf.num_vars(),
        cnf_clauses: cnf.len(),
        family_f: &family,
        equivalence: verdict,
    };
    let io = |e: std::io::Error| Failure::Input(format!("{}: {e}", out.display()));
    std::fs::create_dir_all(out).map_err(io)?;
    let contents = [
        inst.to_text(),
        red.instance.to_text(),
        format!("{}\n", red.poset.to_json()),
        to_dimacs(&cnf),
        to_json(&report),
    ];
    for (name, text) in REDUCE_FILES.iter().zip(&contents) {
        std::fs::write(out.join(name), text).map_err(io)?;
    }
    if json {
        return Ok(CommandOutcome::ok(to_json(&ReduceJson {
            out: out.display().to_string(),
            files: &REDUCE_FILES,
            family_f_passes: family.passes(),
            equivalence: verdict,
        })));
    }
    let equivalence_text = match verdict {
        Some(v) => format!(
            "CNF {}, (1,1)-supermatch {}: {}",
            if v.sat { "SAT" } else { "UNSAT" },
            if v.supermatch { "exists" } else { "absent" },
            if v.agrees() { "agree" } else { "DISAGREE" }
        ),
        None => "equivalence not checked (too many stable matchings)".into(),
    };
    Ok(CommandOutcome::ok(format!(
        "{} rotations over {} men and {} women; family F: {}\n{equivalence_text}\nwrote {} to {}\n",
        red.poset.len(),
        red.instance.n(),
        red.instance.n(),
        if family.passes() { "ok" } else { "FAILED" },
        REDUCE_FILES.join(", "),
        out.display()
    )))
}

pub(crate) fn gen_satsm(x: usize, n: usize, seed: u64, json: bool) -> CmdResult {
    let inst = generate_random_satsm(GeneratorParams {
        universe: x,
        lists: n,
        seed,
    })
    .map_err(reduction_failure)?;
    if json {
        #[derive(Serialize)]
        struct Out<'a> {
            universe: usize,
            seed: u64,
            lists: &'a [Vec<usize>],
        }
        return Ok(CommandOutcome::ok(to_json(&Out {
            universe: inst.universe(),
            seed,
            lists: inst.lists(),
        })));
    }
    Ok(CommandOutcome::ok(inst.to_text()))
}

/// SAT answer against brute-force supermatch search on one reduced instance,
/// with both solution mappings checked.
#[derive(Debug, Clone, Copy, Serialize)]
struct Equivalence {
    sat: bool,
    supermatch: bool,
    forward_ok: bool,
    backward_ok: bool,
}

impl Equivalence {
    fn agrees(&self) -> bool {
        self.sat == self.supermatch && self.forward_ok && self.backward_ok
    }
}

fn equivalence(inst: &SatSmInstance, red: &Reduction) -> Result<Equivalence, Failure> {
    let cnf = build(inst);
    let model = solve(&cnf).map_err(|e| Failure::Limit(e.to_string()))?;
    let lattice: Vec<Matching> = enumerate_stable_matchings(&red.instance, EQUIVALENCE_CAP)
        .map_err(|e| Failure::Limit(e.to_string()))?
        .into_iter()
        .map(|(_, m)| m)
        .collect();
    let q = RobustnessQuery::new(1, 1).expect("a = 1");
    let fail = |e: supermatch::RobustnessError| Failure::Input(e.to_string());
    let found = first_ab_supermatch(&red.instance, &lattice, q).map_err(fail)?;
    let forward_ok = match &model {
        Some(asg) => match map_solution_forward(red, asg) {
            Ok((_, m)) => holds_ab_supermatch(&red.instance, &lattice, &m, q).map_err(fail)?,
            Err(_) => false,
        },
        None => true,
    };
    let backward_ok = match found {
        Some(m) => red
            .poset
            .closed_subset_of(m)
            .map(|s| cnf.is_satisfied_by(&map_solution_backward(&red.poset, &s)))
            .unwrap_or(false),
        None => true,
    };
    Ok(Equivalence {
        sat: model.is_some(),
        supermatch: found.is_some(),
        forward_ok,
        backward_ok,
    })
}

#[derive(Debug, Serialize)]
struct Check {
    seed: u64,
    universe: usize,
    lists: usize,
    #[serde(flatten)]
    result: Equivalence,
}

fn check_one(params: GeneratorParams) -> Result<Check, Failure> {
    let inst = generate_random_satsm(params).map_err(reduction_failure)?;
    let red = reduce_satsm(&inst).map_err(reduction_failure)?;
    Ok(Check {
        seed: params.seed,
        universe: params.universe,
        lists: params.lists,
        result: equivalence(&inst, &red)?,
    })
}

pub(crate) fn verify_equivalence(count: u64, max_x: usize, seed: u64, json: bool) -> CmdResult {
    if sample_params(seed, max_x).is_none() {
        return Err(Failure::Input(format!(
            "--max-x must be at least 4, got {max_x}"
        )));
    }
    let checks: Vec<Check> = (0..count)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            check_one(sample_params(s, max_x).expect("max_x checked"))
        })
        .collect::<Result<_, _>>()?;
    let sat = checks.iter().filter(|c| c.result.sat).count();
    let bad: Vec<&Check> = checks.iter().filter(|c| !c.result.agrees()).collect();
    let text = if json {
        #[derive(Serialize)]
        struct Out<'a> {
            count: u64,
            sat: usize,
            unsat: usize,
            agree: usize,
            disagreements: &'a [&'a Check],
        }
        to_json(&Out {
            count,
            sat,
            unsat: checks.len() - sat,
            agree: checks.len() - bad.len(),
            disagreements: &bad,
        })
    } else {
        let mut out = format!(
            "{count} instances: {sat} SAT, {} UNSAT, {} agree\n",
            checks.len() - sat,
            checks.len() - bad.len()
        );
        for c in &bad {
            out.push_str(&format!(
                "disagreement at seed {} (|X| = {}, n = {}): sat = {}, supermatch = {}, forward = {}, backward = {}\n",
                c.seed,
                c.universe,
                c.lists,
                c.result.sat,
                c.result.supermatch,
                c.result.forward_ok,
                c.result.backward_ok
            ));
        }
        out
    };
    Ok(CommandOutcome::answer(bad.is_empty(), text))
}
