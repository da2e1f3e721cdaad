use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::string::PauliString;
use crate::error::{Error, Result};

/// Coefficients below this fraction of the largest modulus are dropped.
pub const PRUNE_RELATIVE: f64 = 1e-14;

/// Complex linear combination of Pauli strings on a fixed number of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliPolynomial {
    n_qubits: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

/// Wire form of one polynomial term.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyTermJson {
    pub pauli: PauliString,
    pub re: f64,
    pub im: f64,
}

impl PauliPolynomial {
    pub fn zero(n_qubits: usize) -> Self {
        PauliPolynomial {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::term(PauliString::identity(n_qubits), Complex64::new(1.0, 0.0))
    }

    pub fn term(string: PauliString, coeff: Complex64) -> Self {
        let n_qubits = string.n_qubits();
        let mut terms = BTreeMap::new();
        if coeff != Complex64::new(0.0, 0.0) {
            terms.insert(string, coeff);
        }
        PauliPolynomial { n_qubits, terms }
    }

    /// Builds a polynomial from possibly repeated strings, merging and pruning.
    pub fn from_terms<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, Complex64)>,
    {
        let mut out = PauliPolynomial::zero(n_qubits);
        for (s, c) in terms {
            if s.n_qubits() != n_qubits {
                return Err(Error::SizeMismatch {
                    left: n_qubits,
                    right: s.n_qubits(),
                });
            }
            *out.terms.entry(s).or_default() += c;
        }
        out.prune();
        Ok(out)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, s: &PauliString) -> Complex64 {
        self.terms.get(s).copied().unwrap_or_default()
    }

    /// Largest coefficient modulus, zero for the empty polynomial.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Sum of coefficient moduli; an upper bound on the spectral norm.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    fn prune(&mut self) {
        let threshold = PRUNE_RELATIVE * self.max_abs();
        self.terms.retain(|_, c| {
            let m = c.norm();
            m > 0.0 && m >= threshold
        });
    }

    fn check(&self, other: &PauliPolynomial) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &PauliPolynomial) -> Result<PauliPolynomial> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other, Complex64::new(1.0, 0.0));
        out.prune();
        Ok(out)
    }

    pub fn sub(&self, other: &PauliPolynomial) -> Result<PauliPolynomial> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other, Complex64::new(-1.0, 0.0));
        out.prune();
        Ok(out)
    }

    fn add_assign_unchecked(&mut self, other: &PauliPolynomial, scale: Complex64) {
        for (s, c) in &other.terms {
            *self.terms.entry(s.clone()).or_default() += scale * c;
        }
    }

    pub fn scale(&self, factor: Complex64) -> PauliPolynomial {
        let mut out = PauliPolynomial::zero(self.n_qubits);
        if factor == Complex64::new(0.0, 0.0) {
            return out;
        }
        out.terms = self
            .terms
            .iter()
            .map(|(s, c)| (s.clone(), c * factor))
            .collect();
        out.prune();
        out
    }

    /// Operator product `self * other`.
    pub fn mul(&self, other: &PauliPolynomial) -> Result<PauliPolynomial> {
        self.check(other)?;
        let mut out = PauliPolynomial::zero(self.n_qubits);
        out.mul_acc_unchecked(self, other, Complex64::new(1.0, 0.0));
        out.prune();
        Ok(out)
    }

    /// `self += scale * a * b` without pruning.
    pub(crate) fn mul_acc_unchecked(
        &mut self,
        a: &PauliPolynomial,
        b: &PauliPolynomial,
        scale: Complex64,
    ) {
        for (sa, ca) in &a.terms {
            for (sb, cb) in &b.terms {
                let p = sa.mul_unchecked(sb);
                *self.terms.entry(p.string).or_default() += scale * p.phase.to_complex() * ca * cb;
            }
        }
    }

    pub(crate) fn finish(mut self) -> Self {
        self.prune();
        self
    }

    /// Conjugate transpose; Pauli strings are Hermitian so only coefficients conjugate.
    pub fn adjoint(&self) -> PauliPolynomial {
        PauliPolynomial {
            n_qubits: self.n_qubits,
            terms: self
                .terms
                .iter()
                .map(|(s, c)| (s.clone(), c.conj()))
                .collect(),
        }
    }

    /// Splits into `(H + H†)/2` and `(H - H†)/2`, i.e. real and imaginary coefficient parts.
    pub fn hermitian_split(&self) -> (PauliPolynomial, PauliPolynomial) {
        let mut herm = PauliPolynomial::zero(self.n_qubits);
        let mut anti = PauliPolynomial::zero(self.n_qubits);
        for (s, c) in &self.terms {
            if c.re != 0.0 {
                herm.terms.insert(s.clone(), Complex64::new(c.re, 0.0));
            }
            if c.im != 0.0 {
                anti.terms.insert(s.clone(), Complex64::new(0.0, c.im));
            }
        }
        (herm, anti)
    }

    pub fn to_json_terms(&self) -> Vec<PolyTermJson> {
        self.terms
            .iter()
            .map(|(s, c)| PolyTermJson {
                pauli: s.clone(),
                re: c.re,
                im: c.im,
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_terms()).expect("polynomial terms serialize")
    }

    /// Parses the JSON array form. `n_qubits` is required only for an empty array.
    pub fn parse_json(text: &str, n_qubits: Option<usize>) -> Result<Self> {
        let raw: Vec<PolyTermJson> = serde_json::from_str(text)?;
        let n = match (n_qubits, raw.first()) {
            (Some(n), _) => n,
            (None, Some(t)) => t.pauli.n_qubits(),
            (None, None) => {
                return Err(Error::InvalidArgument(
                    "cannot infer qubit count from an empty polynomial".into(),
                ))
            }
        };
        for (i, t) in raw.iter().enumerate() {
            if !(t.re.is_finite() && t.im.is_finite()) {
                return Err(Error::InvalidTerm {
                    term: i,
                    message: "non-finite coefficient".into(),
                });
            }
        }
        Self::from_terms(
            n,
            raw.into_iter()
                .map(|t| (t.pauli, Complex64::new(t.re, t.im))),
        )
    }
}
