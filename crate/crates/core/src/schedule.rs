//! Explicit exponential schedules for the symmetric Trotter-Suzuki formulas.

use serde::Serialize;

use crate::error::{Error, Result};

/// One exponential `exp(multiplier·λ·H_term)`; `term` is zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Factor {
    pub term: usize,
    pub multiplier: f64,
}

/// Ordered factors realizing `S_{2k}(λ)` for an `L`-term Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialSchedule {
    k: u32,
    n_terms: usize,
    factors: Vec<Factor>,
}

/// `p_k = 1 / (4 - 4^{1/(2k-1)})`.
pub fn suzuki_coefficient(k: u32) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "Suzuki coefficient is defined for k >= 2, got {k}"
        )));
    }
    Ok(1.0 / (4.0 - 4f64.powf(1.0 / (2 * k - 1) as f64)))
}

/// Closed-form factor count `2·5^{k-1}(L-1) + 1`.
pub fn factor_count(k: u32, n_terms: usize) -> usize {
    2 * 5usize.pow(k - 1) * (n_terms - 1) + 1
}

/// Appends factors, fusing equal neighbouring terms and dropping zero multipliers.
fn push_merged(out: &mut Vec<Factor>, f: Factor) {
    match out.last_mut() {
        Some(last) if last.term == f.term => {
            last.multiplier += f.multiplier;
            if last.multiplier == 0.0 {
                out.pop();
            }
        }
        _ if f.multiplier == 0.0 => {}
        _ => out.push(f),
    }
}

impl ExponentialSchedule {
    pub fn build(k: u32, n_terms: usize) -> Result<Self> {
        if k == 0 || n_terms == 0 {
            return Err(Error::InvalidArgument(format!(
                "schedule needs k >= 1 and L >= 1, got k={k}, L={n_terms}"
            )));
        }
        let mut factors: Vec<Factor> = Vec::with_capacity(2 * n_terms);
        for term in (0..n_terms).chain((0..n_terms).rev()) {
            push_merged(
                &mut factors,
                Factor {
                    term,
                    multiplier: 0.5,
                },
            );
        }
        for order in 2..=k {
            let p = suzuki_coefficient(order)?;
            let scales = [p, p, 1.0 - 4.0 * p, p, p];
            let mut next = Vec::with_capacity(5 * factors.len());
            for s in scales {
                for f in &factors {
                    push_merged(
                        &mut next,
                        Factor {
                            term: f.term,
                            multiplier: s * f.multiplier,
                        },
                    );
                }
            }
            factors = next;
        }
        Ok(ExponentialSchedule {
            k,
            n_terms,
            factors,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n_terms(&self) -> usize {
        self.n_terms
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Number of exponentials, `N`.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// JSON description with one-based term indices.
    pub fn to_json_value(&self) -> serde_json::Value {
        let factors: Vec<_> = self
            .factors
            .iter()
            .map(|f| serde_json::json!({"term": f.term + 1, "multiplier": f.multiplier}))
            .collect();
        serde_json::json!({
            "k": self.k,
            "L": self.n_terms,
            "N": self.factors.len(),
            "factors": factors,
        })
    }
}
