#![no_main]

use libfuzzer_sys::fuzz_target;
use monogamy_core::monogamy::{CasePreset, ScoreKind};
use monogamy_core::states::FamilyTag;
use monogamy_core::table::{parse_float_list, parse_g_list};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(v) = parse_float_list(s) {
        assert!(v.iter().all(|x| x.is_finite()));
    }
    let _ = parse_g_list(s);
    // names round-trip through Display
    if let Ok(f) = s.parse::<FamilyTag>() {
        assert_eq!(f.to_string().parse::<FamilyTag>().unwrap(), f);
    }
    let _ = s.parse::<CasePreset>();
    let _ = s.parse::<ScoreKind>();
});
