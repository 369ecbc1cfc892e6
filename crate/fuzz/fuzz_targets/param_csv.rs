#![no_main]

use libfuzzer_sys::fuzz_target;
use monogamy_core::monogamy::evaluate;
use monogamy_core::table::parse_param_csv;

fuzz_target!(|data: &[u8]| {
    // anything the reader accepts must evaluate to finite scores
    if let Ok(params) = parse_param_csv(data) {
        for p in params.iter().take(16) {
            let r = evaluate(p).expect("accepted rows are valid states");
            assert!(r.m1.is_finite() && r.m2.is_finite());
        }
    }
});
