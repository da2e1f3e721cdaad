//! Pauli-sum Hamiltonians `H = Σ_j c_j P_j` with real coefficients.

use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliPolynomial, PauliString};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HamiltonianTerm {
    pub pauli: PauliString,
    pub coeff: f64,
}

impl HamiltonianTerm {
    pub fn polynomial(&self) -> PauliPolynomial {
        PauliPolynomial::term(self.pauli.clone(), Complex64::new(self.coeff, 0.0))
    }
}

/// Ordered list of Hermitian Pauli terms. Order fixes the product-formula
/// ordering, and repeated strings stay distinct terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hamiltonian {
    n_qubits: usize,
    terms: Vec<HamiltonianTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HamiltonianStats {
    #[serde(rename = "L")]
    pub n_terms: usize,
    /// Largest spectral norm among the terms.
    #[serde(rename = "Lambda")]
    pub lambda_max: f64,
    pub n_qubits: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHamiltonian {
    n_qubits: usize,
    terms: Vec<RawTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    pauli: String,
    coeff: RawCoeff,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawCoeff {
    Real(f64),
    Pair([f64; 2]),
    Complex { re: f64, im: f64 },
}

impl RawCoeff {
    fn parts(&self) -> (f64, f64) {
        match *self {
            RawCoeff::Real(re) => (re, 0.0),
            RawCoeff::Pair([re, im]) => (re, im),
            RawCoeff::Complex { re, im } => (re, im),
        }
    }
}

/// Built-in test instances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    /// Open chain of `XX + YY + ZZ` bonds, followed by a staggered field
    /// `±field·Z_q` (positive on even sites) when `field` is nonzero.
    ///
    /// A uniform field commutes with the isotropic bonds and every product
    /// formula would be exact, hence the staggering.
    HeisenbergChain { n_qubits: usize, field: f64 },
    /// `n_terms` uniformly random non-identity strings with coefficients in `[-1, 1]`.
    RandomPauli {
        n_qubits: usize,
        n_terms: usize,
        seed: u64,
    },
}

impl Hamiltonian {
    pub fn new(n_qubits: usize, terms: Vec<HamiltonianTerm>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("n_qubits must be positive".into()));
        }
        if terms.is_empty() {
            return Err(Error::EmptyHamiltonian);
        }
        for (i, t) in terms.iter().enumerate() {
            if t.pauli.n_qubits() != n_qubits {
                return Err(Error::InvalidTerm {
                    term: i,
                    message: format!(
                        "string has {} letters, expected {n_qubits}",
                        t.pauli.n_qubits()
                    ),
                });
            }
            if !t.coeff.is_finite() || t.coeff == 0.0 {
                return Err(Error::InvalidTerm {
                    term: i,
                    message: format!("coefficient must be finite and nonzero, got {}", t.coeff),
                });
            }
        }
        Ok(Hamiltonian { n_qubits, terms })
    }

    /// Parses the JSON document form.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawHamiltonian = serde_json::from_str(text)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for (i, t) in raw.terms.iter().enumerate() {
            let pauli: PauliString = t.pauli.parse().map_err(|e: Error| Error::InvalidTerm {
                term: i,
                message: e.to_string(),
            })?;
            let (re, im) = t.coeff.parts();
            if im != 0.0 {
                return Err(Error::NonRealCoefficient { term: i, im });
            }
            terms.push(HamiltonianTerm { pauli, coeff: re });
        }
        Hamiltonian::new(raw.n_qubits, terms)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Accepts either inline JSON or a path to a JSON file.
    pub fn from_arg(arg: &str) -> Result<Self> {
        if arg.trim_start().starts_with('{') {
            Self::from_json(arg)
        } else {
            Self::load(Path::new(arg))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("hamiltonian serializes")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[HamiltonianTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn stats(&self) -> HamiltonianStats {
        HamiltonianStats {
            n_terms: self.terms.len(),
            lambda_max: self.terms.iter().map(|t| t.coeff.abs()).fold(0.0, f64::max),
            n_qubits: self.n_qubits,
        }
    }

    /// `Σ_j H_j` as one polynomial.
    pub fn polynomial(&self) -> PauliPolynomial {
        PauliPolynomial::from_terms(
            self.n_qubits,
            self.terms
                .iter()
                .map(|t| (t.pauli.clone(), Complex64::new(t.coeff, 0.0))),
        )
        .expect("validated qubit counts")
    }

    /// True when every pair of terms commutes, so any product formula is exact.
    pub fn all_terms_commute(&self) -> bool {
        self.terms.iter().enumerate().all(|(i, a)| {
            self.terms[i + 1..]
                .iter()
                .all(|b| a.pauli.commutes_with(&b.pauli))
        })
    }

    pub fn generate(model: Model) -> Result<Self> {
        match model {
            Model::HeisenbergChain { n_qubits, field } => {
                if n_qubits < 2 {
                    return Err(Error::InvalidArgument(
                        "heisenberg chain needs at least 2 sites".into(),
                    ));
                }
                let mut terms = Vec::new();
                for q in 0..n_qubits - 1 {
                    for letter in [Letter::X, Letter::Y, Letter::Z] {
                        let mut p = PauliString::identity(n_qubits);
                        p.set(q, letter);
                        p.set(q + 1, letter);
                        terms.push(HamiltonianTerm {
                            pauli: p,
                            coeff: 1.0,
                        });
                    }
                }
                if field != 0.0 {
                    for q in 0..n_qubits {
                        terms.push(HamiltonianTerm {
                            pauli: PauliString::single(n_qubits, q, Letter::Z),
                            coeff: if q % 2 == 0 { field } else { -field },
                        });
                    }
                }
                Hamiltonian::new(n_qubits, terms)
            }
            Model::RandomPauli {
                n_qubits,
                n_terms,
                seed,
            } => {
                if n_qubits == 0 || n_terms == 0 {
                    return Err(Error::InvalidArgument(
                        "random model needs positive qubit and term counts".into(),
                    ));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let letters = [Letter::I, Letter::X, Letter::Y, Letter::Z];
                let mut terms = Vec::with_capacity(n_terms);
                while terms.len() < n_terms {
                    let p = PauliString::from_letters(
                        &(0..n_qubits)
                            .map(|_| letters[rng.random_range(0..4)])
                            .collect::<Vec<_>>(),
                    );
                    let coeff: f64 = rng.random_range(-1.0..=1.0);
                    if p.is_identity() || coeff == 0.0 {
                        continue;
                    }
                    terms.push(HamiltonianTerm { pauli: p, coeff });
                }
                Hamiltonian::new(n_qubits, terms)
            }
        }
    }
}
