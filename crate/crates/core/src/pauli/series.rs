use num_complex::Complex64;

use super::polynomial::PauliPolynomial;
use crate::error::{Error, Result};

/// Truncated power series `Σ_{l ≤ max_order} λ^l P_l` in a formal parameter λ
/// with Pauli-polynomial coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSeries {
    n_qubits: usize,
    orders: Vec<PauliPolynomial>,
}

impl OperatorSeries {
    pub fn zero(n_qubits: usize, max_order: usize) -> Self {
        OperatorSeries {
            n_qubits,
            orders: vec![PauliPolynomial::zero(n_qubits); max_order + 1],
        }
    }

    pub fn identity(n_qubits: usize, max_order: usize) -> Self {
        let mut s = Self::zero(n_qubits, max_order);
        s.orders[0] = PauliPolynomial::identity(n_qubits);
        s
    }

    /// Series from explicit coefficients; `orders[l]` multiplies `λ^l`.
    pub fn from_orders(n_qubits: usize, orders: Vec<PauliPolynomial>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidArgument(
                "series needs at least order 0".into(),
            ));
        }
        if let Some(p) = orders.iter().find(|p| p.n_qubits() != n_qubits) {
            return Err(Error::SizeMismatch {
                left: n_qubits,
                right: p.n_qubits(),
            });
        }
        Ok(OperatorSeries { n_qubits, orders })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn max_order(&self) -> usize {
        self.orders.len() - 1
    }

    /// Coefficient of `λ^l`; zero beyond the truncation order.
    pub fn order(&self, l: usize) -> PauliPolynomial {
        self.orders
            .get(l)
            .cloned()
            .unwrap_or_else(|| PauliPolynomial::zero(self.n_qubits))
    }

    pub fn orders(&self) -> &[PauliPolynomial] {
        &self.orders
    }

    fn check(&self, other: &OperatorSeries) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(())
    }

    pub fn truncate(&self, max_order: usize) -> OperatorSeries {
        let keep = (max_order + 1).min(self.orders.len());
        OperatorSeries {
            n_qubits: self.n_qubits,
            orders: self.orders[..keep].to_vec(),
        }
    }

    pub fn add(&self, other: &OperatorSeries) -> Result<OperatorSeries> {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &OperatorSeries) -> Result<OperatorSeries> {
        self.zip_with(other, |a, b| a.sub(b))
    }

    fn zip_with<F>(&self, other: &OperatorSeries, f: F) -> Result<OperatorSeries>
    where
        F: Fn(&PauliPolynomial, &PauliPolynomial) -> Result<PauliPolynomial>,
    {
        self.check(other)?;
        let orders = self
            .orders
            .iter()
            .zip(&other.orders)
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(OperatorSeries {
            n_qubits: self.n_qubits,
            orders,
        })
    }

    /// Truncated Cauchy product `self * other`.
    pub fn mul(&self, other: &OperatorSeries) -> Result<OperatorSeries> {
        self.check(other)?;
        let max = self.max_order().min(other.max_order());
        let one = Complex64::new(1.0, 0.0);
        let orders = (0..=max)
            .map(|l| {
                let mut acc = PauliPolynomial::zero(self.n_qubits);
                for i in 0..=l {
                    acc.mul_acc_unchecked(&self.orders[i], &other.orders[l - i], one);
                }
                acc.finish()
            })
            .collect();
        Ok(OperatorSeries {
            n_qubits: self.n_qubits,
            orders,
        })
    }

    /// Substitutes `λ → factor·λ`, scaling order `l` by `factor^l`.
    pub fn rescale(&self, factor: Complex64) -> OperatorSeries {
        let mut power = Complex64::new(1.0, 0.0);
        let orders = self
            .orders
            .iter()
            .map(|p| {
                let out = p.scale(power);
                power *= factor;
                out
            })
            .collect();
        OperatorSeries {
            n_qubits: self.n_qubits,
            orders,
        }
    }

    /// Substitutes a numeric λ, summing the truncated series.
    pub fn evaluate(&self, lambda: Complex64) -> PauliPolynomial {
        let mut power = Complex64::new(1.0, 0.0);
        let mut terms = Vec::new();
        for p in &self.orders {
            terms.extend(p.iter().map(|(s, c)| (s.clone(), c * power)));
            power *= lambda;
        }
        PauliPolynomial::from_terms(self.n_qubits, terms).expect("orders share qubit count")
    }

    /// `exp(multiplier·λ·h)` truncated at `max_order`.
    pub fn exp_term(h: &PauliPolynomial, multiplier: f64, max_order: usize) -> OperatorSeries {
        let n = h.n_qubits();
        let mut orders = Vec::with_capacity(max_order + 1);
        let mut power = PauliPolynomial::identity(n);
        let mut scale = 1.0;
        orders.push(power.clone());
        for j in 1..=max_order {
            power = power.mul(h).expect("same qubit count");
            scale *= multiplier / j as f64;
            orders.push(power.scale(Complex64::new(scale, 0.0)));
        }
        OperatorSeries {
            n_qubits: n,
            orders,
        }
    }
}
