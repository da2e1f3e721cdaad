#![no_main]

use corrected_pf::CorrectionEnsemble;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(e) = CorrectionEnsemble::from_json(text) {
        let total: f64 = e.entries().iter().map(|x| x.prob).sum();
        assert!((total - 1.0).abs() < 1e-9 || e.is_empty());
    }
});
