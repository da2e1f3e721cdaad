//! Sampling ensemble that realizes the correction in expectation.
//!
//! For each correction term `(l, P, β)` and numeric step λ:
//! `ε = (λ/2)^l β`, `A = Σ|ε|`, `α = −(ε/|ε|)·A`, `p = |ε|/A`, so that
//! `p·α = −(λ/2)^l β`. The sampled step is `S_{2k}(λ/2)·exp(αP)·S_{2k}(λ/2)`.

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::correction::CorrectionSeries;
use crate::dense::{self, DenseOperator};
use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::pauli::PauliString;
use crate::schedule::ExponentialSchedule;

/// Terms with `|β|` below this fraction of the largest are not sampled.
pub const BETA_DROP_RELATIVE: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionEntry {
    pub order: usize,
    pub pauli: PauliString,
    pub beta: f64,
    pub epsilon: Complex64,
    pub alpha: Complex64,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionEnsemble {
    lambda: Complex64,
    entries: Vec<CorrectionEntry>,
    total_weight: f64,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    l: usize,
    pauli: PauliString,
    beta: f64,
    epsilon_re: f64,
    epsilon_im: f64,
    alpha_re: f64,
    alpha_im: f64,
    prob: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleJson {
    lambda_re: f64,
    lambda_im: f64,
    #[serde(rename = "A")]
    total_weight: f64,
    entries: Vec<EntryJson>,
}

/// Tolerance used when validating a parsed ensemble.
const IDENTITY_TOLERANCE: f64 = 1e-12;

impl CorrectionEnsemble {
    pub fn build(c: &CorrectionSeries, lambda: Complex64) -> Self {
        let terms = c.extract_terms();
        let max_beta = terms.iter().map(|t| t.beta.abs()).fold(0.0, f64::max);
        let half = lambda / 2.0;
        let mut entries: Vec<CorrectionEntry> = terms
            .into_iter()
            .filter(|t| t.beta.abs() >= BETA_DROP_RELATIVE * max_beta)
            .map(|t| {
                // ‖H_h^(l)‖ = 1 for a bare Pauli string.
                let epsilon = half.powu(t.order as u32) * t.beta;
                CorrectionEntry {
                    order: t.order,
                    pauli: t.pauli,
                    beta: t.beta,
                    epsilon,
                    alpha: Complex64::default(),
                    prob: 0.0,
                }
            })
            .filter(|e| e.epsilon.norm() > 0.0)
            .collect();
        let total_weight = entries.iter().fold(0.0, |acc, e| acc + e.epsilon.norm());
        for e in &mut entries {
            let mag = e.epsilon.norm();
            e.prob = mag / total_weight;
            e.alpha = -(e.epsilon / mag) * total_weight;
        }
        CorrectionEnsemble {
            lambda,
            entries,
            total_weight,
        }
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn entries(&self) -> &[CorrectionEntry] {
        &self.entries
    }

    /// The normalizer `A = Σ|ε|`.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Draws one step from a caller-owned random stream.
    pub fn sample_step<R: Rng + ?Sized>(
        &self,
        schedule: &ExponentialSchedule,
        rng: &mut R,
    ) -> SampledStep {
        let half_len = schedule.len();
        if self.entries.is_empty() {
            return SampledStep {
                half_len,
                correction: None,
            };
        }
        let dist = WeightedIndex::new(self.entries.iter().map(|e| e.prob))
            .expect("probabilities are positive and finite");
        let index = dist.sample(rng);
        let e = &self.entries[index];
        SampledStep {
            half_len,
            correction: Some(SampledCorrection {
                entry: index,
                order: e.order,
                pauli: e.pauli.clone(),
                alpha: e.alpha,
            }),
        }
    }

    pub fn sample_step_seeded(&self, schedule: &ExponentialSchedule, seed: u64) -> SampledStep {
        self.sample_step(schedule, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Every member of the mixture as `(p, S·U·S)`; the bare `S·S` when empty.
    pub fn step_unitaries(
        &self,
        schedule: &ExponentialSchedule,
        h: &Hamiltonian,
    ) -> Result<Vec<(f64, DenseOperator)>> {
        let half = schedule_to_dense(schedule, h, self.lambda / 2.0)?;
        if self.entries.is_empty() {
            return Ok(vec![(1.0, half.mul(&half))]);
        }
        self.entries
            .iter()
            .map(|e| {
                let u = dense::exp_pauli(&e.pauli, e.alpha)?;
                Ok((e.prob, half.mul(&u).mul(&half)))
            })
            .collect()
    }

    /// The probability-weighted mean step `Σ p·S·U·S`.
    pub fn mean_step(
        &self,
        schedule: &ExponentialSchedule,
        h: &Hamiltonian,
    ) -> Result<DenseOperator> {
        let members = self.step_unitaries(schedule, h)?;
        let dim = members[0].1.dim();
        Ok(members
            .iter()
            .fold(DenseOperator::zeros(dim), |acc, (p, u)| {
                acc.add(&u.scale(Complex64::new(*p, 0.0)))
            }))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = EnsembleJson {
            lambda_re: self.lambda.re,
            lambda_im: self.lambda.im,
            total_weight: self.total_weight,
            entries: self
                .entries
                .iter()
                .map(|e| EntryJson {
                    l: e.order,
                    pauli: e.pauli.clone(),
                    beta: e.beta,
                    epsilon_re: e.epsilon.re,
                    epsilon_im: e.epsilon.im,
                    alpha_re: e.alpha.re,
                    alpha_im: e.alpha.im,
                    prob: e.prob,
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("ensemble serializes")
    }

    /// Parses and validates an ensemble document.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: EnsembleJson = serde_json::from_str(text)?;
        let lambda = Complex64::new(doc.lambda_re, doc.lambda_im);
        if !(lambda.re.is_finite() && lambda.im.is_finite() && doc.total_weight.is_finite()) {
            return Err(Error::InvalidArgument("non-finite ensemble header".into()));
        }
        let mut n_qubits = None;
        let mut entries = Vec::with_capacity(doc.entries.len());
        for (i, e) in doc.entries.into_iter().enumerate() {
            let bad = |message: String| Error::InvalidTerm { term: i, message };
            let n = *n_qubits.get_or_insert(e.pauli.n_qubits());
            if e.pauli.n_qubits() != n {
                return Err(bad("inconsistent qubit count".into()));
            }
            if !(e.prob > 0.0 && e.prob <= 1.0) {
                return Err(bad(format!("probability {} outside (0, 1]", e.prob)));
            }
            let vals = [e.beta, e.epsilon_re, e.epsilon_im, e.alpha_re, e.alpha_im];
            if vals.iter().any(|v| !v.is_finite()) {
                return Err(bad("non-finite value".into()));
            }
            let alpha = Complex64::new(e.alpha_re, e.alpha_im);
            let target = -(lambda / 2.0).powu(e.l as u32) * e.beta;
            let scale = target.norm().max(f64::MIN_POSITIVE);
            if (alpha * e.prob - target).norm() > IDENTITY_TOLERANCE * scale.max(1e-300) {
                return Err(bad("p·alpha does not match -(lambda/2)^l·beta".into()));
            }
            entries.push(CorrectionEntry {
                order: e.l,
                pauli: e.pauli,
                beta: e.beta,
                epsilon: Complex64::new(e.epsilon_re, e.epsilon_im),
                alpha,
                prob: e.prob,
            });
        }
        let total: f64 = entries.iter().map(|e| e.prob).sum();
        if !entries.is_empty() && (total - 1.0).abs() > IDENTITY_TOLERANCE {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        let weight: f64 = entries.iter().map(|e| e.epsilon.norm()).sum();
        if (weight - doc.total_weight).abs() > IDENTITY_TOLERANCE * weight.max(doc.total_weight) {
            return Err(Error::InvalidArgument(format!(
                "A = {} does not equal the summed |epsilon| = {weight}",
                doc.total_weight
            )));
        }
        Ok(CorrectionEnsemble {
            lambda,
            entries,
            total_weight: doc.total_weight,
        })
    }
}

/// Ordered product of `exp(multiplier·λ·H_term)` as a dense matrix.
pub fn schedule_to_dense(
    s: &ExponentialSchedule,
    h: &Hamiltonian,
    lambda: Complex64,
) -> Result<DenseOperator> {
    if s.n_terms() != h.len() {
        return Err(Error::InvalidArgument(format!(
            "schedule built for {} terms, hamiltonian has {}",
            s.n_terms(),
            h.len()
        )));
    }
    let mut acc = DenseOperator::identity(1 << h.n_qubits());
    for f in s.factors() {
        let t = &h.terms()[f.term];
        acc = acc.mul(&dense::exp_pauli(
            &t.pauli,
            lambda * (f.multiplier * t.coeff),
        )?);
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledCorrection {
    /// Index into the ensemble's entries.
    pub entry: usize,
    pub order: usize,
    pub pauli: PauliString,
    pub alpha: Complex64,
}

/// One sampled step: half schedule, optional correction exponential, half schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledStep {
    half_len: usize,
    pub correction: Option<SampledCorrection>,
}

impl SampledStep {
    /// `2N + 1`, or `2N` without a correction.
    pub fn exponential_count(&self) -> usize {
        2 * self.half_len + usize::from(self.correction.is_some())
    }

    pub fn to_dense(
        &self,
        schedule: &ExponentialSchedule,
        h: &Hamiltonian,
        lambda: Complex64,
    ) -> Result<DenseOperator> {
        let half = schedule_to_dense(schedule, h, lambda / 2.0)?;
        Ok(match &self.correction {
            Some(c) => half.mul(&dense::exp_pauli(&c.pauli, c.alpha)?).mul(&half),
            None => half.mul(&half),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correction::correction_series;
    use crate::hamiltonian::Model;

    fn x_plus_z() -> Hamiltonian {
        Hamiltonian::from_json(
            r#"{"n_qubits":1,"terms":[{"pauli":"X","coeff":1.0},{"pauli":"Z","coeff":1.0}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn commuting_is_empty() {
        let h = Hamiltonian::generate(Model::HeisenbergChain {
            n_qubits: 2,
            field: 0.0,
        })
        .unwrap();
        let c = correction_series(1, &h).unwrap();
        let e = CorrectionEnsemble::build(&c, Complex64::new(0.0, -0.1));
        assert!(e.is_empty());
        assert_eq!(e.total_weight(), 0.0);
        let s = ExponentialSchedule::build(1, h.len()).unwrap();
        let step = e.sample_step_seeded(&s, 3);
        assert!(step.correction.is_none());
        assert_eq!(step.exponential_count(), 2 * s.len());
    }

    #[test]
    fn identities_hold() {
        let c = correction_series(1, &x_plus_z()).unwrap();
        let lambda = Complex64::new(0.0, -0.1);
        let e = CorrectionEnsemble::build(&c, lambda);
        assert!(!e.is_empty());
        let total: f64 = e.entries().iter().map(|x| x.prob).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for x in e.entries() {
            let target = -(lambda / 2.0).powu(x.order as u32) * x.beta;
            assert!((x.alpha * x.prob - target).norm() <= 1e-12 * target.norm());
            assert!(x.alpha.re.abs() <= 1e-15 * x.alpha.norm());
        }
        let weight: f64 = e.entries().iter().map(|x| x.epsilon.norm()).sum();
        assert!((weight - e.total_weight()).abs() < 1e-15);
    }

    #[test]
    fn single_entry_always_drawn() {
        let c = correction_series(1, &x_plus_z()).unwrap();
        let mut e = CorrectionEnsemble::build(&c, Complex64::new(0.0, -0.1));
        e.entries.truncate(1);
        e.entries[0].prob = 1.0;
        let s = ExponentialSchedule::build(1, 2).unwrap();
        for seed in 0..20 {
            let step = e.sample_step_seeded(&s, seed);
            assert_eq!(step.correction.as_ref().unwrap().entry, 0);
            assert_eq!(step.exponential_count(), 2 * s.len() + 1);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let c = correction_series(1, &x_plus_z()).unwrap();
        let e = CorrectionEnsemble::build(&c, Complex64::new(0.0, -0.2));
        let s = ExponentialSchedule::build(1, 2).unwrap();
        assert_eq!(e.sample_step_seeded(&s, 42), e.sample_step_seeded(&s, 42));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let c = correction_series(1, &x_plus_z()).unwrap();
        let e = CorrectionEnsemble::build(&c, Complex64::new(0.0, -0.1));
        let text = e.to_json_value().to_string();
        assert_eq!(CorrectionEnsemble::from_json(&text).unwrap(), e);
        let mut v = e.to_json_value();
        v["entries"][0]["prob"] = serde_json::json!(0.9);
        assert!(CorrectionEnsemble::from_json(&v.to_string()).is_err());
        let mut v = e.to_json_value();
        v["A"] = serde_json::json!(1.0);
        assert!(CorrectionEnsemble::from_json(&v.to_string()).is_err());
    }

    #[test]
    fn schedule_dense_single_term_is_exact() {
        let h = Hamiltonian::from_json(r#"{"n_qubits":2,"terms":[{"pauli":"XY","coeff":0.7}]}"#)
            .unwrap();
        let s = ExponentialSchedule::build(2, 1).unwrap();
        let lam = Complex64::new(0.0, -0.3);
        let got = schedule_to_dense(&s, &h, lam).unwrap();
        let exact =
            dense::exp_hamiltonian(&dense::poly_dense(&h.polynomial()).unwrap(), lam).unwrap();
        assert!(got.sub(&exact).max_abs() < 1e-14);
        let zero = schedule_to_dense(&s, &h, Complex64::default()).unwrap();
        assert!(zero.sub(&DenseOperator::identity(4)).max_abs() == 0.0);
    }
}
