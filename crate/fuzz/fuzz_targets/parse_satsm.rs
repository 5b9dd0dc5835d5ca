#![no_main]

use libfuzzer_sys::fuzz_target;
use supermatch::{audit_schaefer, build_cnf, parse_satsm, reduce};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(inst) = parse_satsm(text) else {
        return;
    };
    let report = inst.validate();
    match build_cnf(&inst) {
        Ok(cnf) => {
            assert!(report.is_valid());
            audit_schaefer(&cnf).expect("valid instances pass the audit");
            if inst.universe() <= 16 {
                let red = reduce(&inst).expect("valid instances reduce");
                assert_eq!(red.poset.len(), inst.universe());
            }
        }
        Err(r) => assert_eq!(r, report),
    }
});
