#![no_main]

use libfuzzer_sys::fuzz_target;
use supermatch::satsm::{evaluate, parse_dimacs, solve_clauses};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(cnf) = parse_dimacs(text) else {
        return;
    };
    if cnf.num_vars <= 16 && cnf.clauses.len() <= 64 {
        if let Ok(Some(model)) = solve_clauses(cnf.num_vars, &cnf.clauses, 10_000) {
            assert!(evaluate(&cnf.clauses, &model));
        }
    }
});
