#![no_main]

use corrected_pf::PauliString;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = text.parse::<PauliString>() {
        assert_eq!(p.to_string(), text);
        let sq = p.mul(&p).unwrap();
        assert!(sq.string.is_identity());
    }
});
