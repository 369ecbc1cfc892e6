#![no_main]

use libfuzzer_sys::fuzz_target;
use monogamy_core::states::ParamRecord;
use monogamy_core::table::parse_param_row;

fuzz_target!(|data: &[u8]| {
    let Ok(line) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = parse_param_row(line) {
        match p {
            ParamRecord::Ghz(g) => assert!(g.g.iter().all(|&x| (0.0..0.5).contains(&x))),
            ParamRecord::W(w) => {
                let sum = w.t + w.x + w.y + w.z;
                assert!((sum - 1.0).abs() < 1e-9, "renormalized sum {sum}");
            }
        }
    }
});
