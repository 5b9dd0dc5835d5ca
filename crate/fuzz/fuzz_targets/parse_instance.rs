#![no_main]

use libfuzzer_sys::fuzz_target;
use supermatch::{deferred_acceptance, find_rotations, parse_instance, Side};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(inst) = parse_instance(text) else {
        return;
    };
    // Canonical text must re-parse to the same instance.
    let again = parse_instance(&inst.to_text()).expect("canonical text parses");
    assert_eq!(again, inst);
    if inst.n() <= 12 {
        let m = deferred_acceptance(&inst, Side::MenProposing);
        assert!(supermatch::is_stable(&inst, &m));
        let _ = find_rotations(&inst);
    }
});
