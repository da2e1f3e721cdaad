#![no_main]

use corrected_pf::PauliPolynomial;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = PauliPolynomial::parse_json(text, None) {
        let back = PauliPolynomial::parse_json(&p.to_json(), Some(p.n_qubits())).unwrap();
        assert_eq!(back, p);
    }
});
