#![no_main]

use corrected_pf::Hamiltonian;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(h) = Hamiltonian::from_json(text) {
        assert_eq!(Hamiltonian::from_json(&h.to_json()).unwrap(), h);
    }
});
