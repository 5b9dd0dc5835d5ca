#![no_main]

use libfuzzer_sys::fuzz_target;
use supermatch::satsm::parse_solver_output;
use supermatch::from_dimacs_model;

fuzz_target!(|data: &[u8]| {
    let Some((&x, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let universe = usize::from(x % 64);
    if let Ok(asg) = from_dimacs_model(text, universe) {
        assert_eq!(asg.universe(), universe);
        let again = from_dimacs_model(&asg.to_model_line(), universe).expect("model line parses");
        assert_eq!(again, asg);
    }
    let _ = parse_solver_output(text, universe);
});
