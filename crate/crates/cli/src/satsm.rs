use std::collections::BTreeSet;
use std::fmt::Write;
use std::path::Path;
use std::process::Command;

use serde::Serialize;
use supermatch::satsm::{
    parse_solver_output, solve_with_cap, AuditReport, GroupCounts, SolveError,
};
use supermatch::{
    audit_schaefer, build_cnf, decode, parse_satsm, to_dimacs, Assignment, Cnf, SatSmInstance,
    ValidationReport,
};

use crate::{read, to_json, CmdResult, CommandOutcome, Failure};

#[derive(Serialize)]
struct ValidityJson<'a> {
    valid: bool,
    violations: &'a [supermatch::Violation],
}

fn report_text(report: &ValidationReport, json: bool) -> String {
    if json {
        to_json(&ValidityJson {
            valid: report.is_valid(),
            violations: &report.violations,
        })
    } else {
        format!("{report}\n")
    }
}

/// Parses and validates; a failed validation carries its report to stdout.
pub(crate) fn load_valid(path: &Path, json: bool) -> Result<SatSmInstance, Failure> {
    let inst = parse_satsm(&read(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let report = inst.validate();
    if !report.is_valid() {
        return Err(Failure::Report {
            message: format!(
                "{}: invalid SAT-SM instance ({} violations)",
                path.display(),
                report.violations.len()
            ),
            stdout: report_text(&report, json),
        });
    }
    Ok(inst)
}

pub(crate) fn build(inst: &SatSmInstance) -> Cnf {
    build_cnf(inst).expect("instance was validated")
}

pub(crate) fn validate(path: &Path, json: bool) -> CmdResult {
    let inst = load_valid(path, json)?;
    Ok(CommandOutcome::ok(report_text(&inst.validate(), json)))
}

#[derive(Serialize)]
struct CnfJson<'a> {
    variables: usize,
    clauses: usize,
    counts: GroupCounts,
    pre_dedup: GroupCounts,
    audit: &'a AuditReport,
    dimacs: Option<String>,
}

pub(crate) fn cnf(path: &Path, dimacs: Option<&Path>, json: bool) -> CmdResult {
    let inst = load_valid(path, json)?;
    let cnf = build(&inst);
    let audit =
        audit_schaefer(&cnf).map_err(|e| Failure::Input(format!("CNF audit failed: {e}")))?;
    let text = to_dimacs(&cnf);
    if let Some(out) = dimacs {
        std::fs::write(out, &text)
            .map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
    }
    if json {
        return Ok(CommandOutcome::ok(to_json(&CnfJson {
            variables: cnf.num_vars(),
            clauses: cnf.len(),
            counts: cnf.counts(),
            pre_dedup: cnf.pre_dedup_counts(),
            audit: &audit,
            dimacs: dimacs.map(|p| p.display().to_string()),
        })));
    }
    match dimacs {
        None => Ok(CommandOutcome::ok(text)),
        Some(out) => {
            let c = cnf.counts();
            let p = cnf.pre_dedup_counts();
            Ok(CommandOutcome::ok(format!(
                "wrote {}: {} variables, {} clauses\n\
                 group   A   B  C1  C2   D\n\
                 kept  {:>3} {:>3} {:>3} {:>3} {:>3}\n\
                 built {:>3} {:>3} {:>3} {:>3} {:>3}\n",
                out.display(),
                cnf.num_vars(),
                cnf.len(),
                c.a,
                c.b,
                c.c1,
                c.c2,
                c.d,
                p.a,
                p.b,
                p.c1,
                p.c2,
                p.d,
            )))
        }
    }
}

fn run_external(solver: &Path, cnf: &Cnf) -> Result<Option<Assignment>, Failure> {
    let mut file = tempfile::Builder::new()
        .suffix(".cnf")
        .tempfile()
        .map_err(|e| Failure::Input(format!("temporary file: {e}")))?;
    std::io::Write::write_all(&mut file, to_dimacs(cnf).as_bytes())
        .map_err(|e| Failure::Input(format!("temporary file: {e}")))?;
    let output = Command::new(solver)
        .arg(file.path())
        .output()
        .map_err(|e| Failure::Input(format!("{}: {e}", solver.display())))?;
    let stdout = String::from_utf8_lossy(&output.stdout);
    let model = parse_solver_output(&stdout, cnf.universe())
        .map_err(|e| Failure::Input(format!("{}: unreadable output: {e}", solver.display())))?;
    if let Some(asg) = &model {
        if let Some(c) = cnf.unsatisfied(asg).next() {
            return Err(Failure::Input(format!(
                "{}: model violates clause {c} (group {})",
                solver.display(),
                c.group
            )));
        }
    }
    Ok(model)
}

#[derive(Serialize)]
struct SolveJson<'a> {
    sat: bool,
    solver: &'a str,
    model: Option<&'a Assignment>,
    #[serde(rename = "S")]
    s: Option<&'a BTreeSet<usize>>,
    #[serde(rename = "L")]
    l: Option<&'a BTreeSet<usize>>,
    #[serde(rename = "N")]
    n: Option<&'a BTreeSet<usize>>,
}

fn set_text(s: &BTreeSet<usize>) -> String {
    let items: Vec<String> = s.iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

pub(crate) fn solve(path: &Path, external: Option<&Path>, conflicts: u64, json: bool) -> CmdResult {
    let inst = load_valid(path, json)?;
    let cnf = build(&inst);
    let model = match external {
        Some(solver) => run_external(solver, &cnf)?,
        None => solve_with_cap(&cnf, conflicts).map_err(|e| match e {
            SolveError::ConflictLimit(_) => Failure::Limit(e.to_string()),
            other => Failure::Input(other.to_string()),
        })?,
    };
    let solver = if external.is_some() {
        "external"
    } else {
        "builtin"
    };
    let sets = model.as_ref().map(|asg| decode(&inst, asg));
    if json {
        return Ok(CommandOutcome::answer(
            model.is_some(),
            to_json(&SolveJson {
                sat: model.is_some(),
                solver,
                model: model.as_ref(),
                s: sets.as_ref().map(|t| &t.0),
                l: sets.as_ref().map(|t| &t.1),
                n: sets.as_ref().map(|t| &t.2),
            }),
        ));
    }
    let mut out = String::new();
    match (&model, &sets) {
        (Some(asg), Some((s, l, n))) => {
            writeln!(out, "SAT").unwrap();
            writeln!(out, "{}", asg.to_model_line()).unwrap();
            writeln!(out, "S = {}", set_text(s)).unwrap();
            writeln!(out, "L = {}", set_text(l)).unwrap();
            writeln!(out, "N = {}", set_text(n)).unwrap();
        }
        _ => writeln!(out, "UNSAT").unwrap(),
    }
    Ok(CommandOutcome::answer(model.is_some(), out))
}
