#![no_main]

use libfuzzer_sys::fuzz_target;
use supermatch::parse_matching;

fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let n = usize::from(n % 32);
    if let Ok(m) = parse_matching(text, n) {
        assert_eq!(parse_matching(&m.to_text(), n).expect("round trip"), m);
    }
});
