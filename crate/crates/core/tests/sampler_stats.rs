mod common;

use common::*;
use corrected_pf::{
    correction_series, CorrectionEnsemble, ExponentialSchedule, Hamiltonian, Model,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ensemble(k: u32, step: f64) -> (Hamiltonian, ExponentialSchedule, CorrectionEnsemble) {
    let h = Hamiltonian::generate(Model::RandomPauli {
        n_qubits: 2,
        n_terms: 4,
        seed: 11,
    })
    .unwrap();
    let s = ExponentialSchedule::build(k, h.len()).unwrap();
    let c = correction_series(k, &h).unwrap();
    let e = CorrectionEnsemble::build(&c, Complex64::new(0.0, -step));
    (h, s, e)
}

#[test]
fn draw_frequencies_match_probabilities() {
    let (_, s, e) = ensemble(1, 0.1);
    assert!(e.entries().len() >= 3);
    let draws = 100_000;
    let mut counts = vec![0usize; e.entries().len()];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..draws {
        let step = e.sample_step(&s, &mut rng);
        counts[step.correction.unwrap().entry] += 1;
    }
    for (entry, &count) in e.entries().iter().zip(&counts) {
        let expected = draws as f64 * entry.prob;
        let sigma = (draws as f64 * entry.prob * (1.0 - entry.prob)).sqrt();
        assert!(
            (count as f64 - expected).abs() <= 4.0 * sigma.max(1.0),
            "{}: {count} vs {expected:.1} ± {sigma:.1}",
            entry.pauli
        );
    }
}

#[test]
fn seeded_draws_are_reproducible() {
    let (_, s, e) = ensemble(2, 0.05);
    let a: Vec<_> = (0..50).map(|i| e.sample_step_seeded(&s, i)).collect();
    let b: Vec<_> = (0..50).map(|i| e.sample_step_seeded(&s, i)).collect();
    assert_eq!(a, b);
}

#[test]
fn sampled_steps_are_unitary_with_expected_length() {
    for k in [1, 2] {
        let (h, s, e) = ensemble(k, 0.2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let step = e.sample_step(&s, &mut rng);
            assert_eq!(step.exponential_count(), 2 * s.len() + 1);
            let u = step.to_dense(&s, &h, e.lambda()).unwrap();
            let m = u.matrix();
            let defect = m * m.adjoint() - Mat::identity(m.nrows(), m.nrows());
            assert!(max_abs(&defect) < 1e-12);
        }
    }
}

#[test]
fn ensemble_json_round_trip() {
    let (_, _, e) = ensemble(1, 0.3);
    let text = serde_json::to_string(&e.to_json_value()).unwrap();
    let back = CorrectionEnsemble::from_json(&text).unwrap();
    assert_eq!(back.entries().len(), e.entries().len());
    for (a, b) in back.entries().iter().zip(e.entries()) {
        assert_eq!(a.pauli, b.pauli);
        assert_eq!(a.order, b.order);
        assert!((a.prob - b.prob).abs() < 1e-15);
        assert!((a.alpha - b.alpha).norm() < 1e-15);
    }
}

#[test]
fn tampered_ensemble_is_rejected() {
    let (_, _, e) = ensemble(1, 0.3);
    let mut value = e.to_json_value();
    value["entries"][0]["prob"] = serde_json::json!(0.9);
    assert!(CorrectionEnsemble::from_json(&value.to_string()).is_err());
}
