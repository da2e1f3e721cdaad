//! Symbolic expansion of the half-step correction operator `V†D + DV†`.
//!
//! With `S = S_{2k}(λ/2)`, `V = exp(λ/2·ΣH)` and `D = S − V`, the operator
//! `C = V†S + SV† − 2I` has vanishing orders `0..=2k`, vanishing even orders up
//! to `4k`, and Hermitian odd orders. Its odd orders `2k+1..=4k+1` are the
//! polynomials that the sampler turns into random unitaries.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::pauli::{OperatorSeries, PauliPolynomial, PauliString};
use crate::schedule::ExponentialSchedule;

/// Below this fraction of `(Σ|c_j|)^(2k+1)` the corrections are treated as absent.
pub const VANISHING_RELATIVE: f64 = 1e-12;

/// Residuals are compared against this fraction of the largest odd-order coefficient.
pub const STRUCTURAL_TOLERANCE: f64 = 1e-9;

/// Taylor series of `exp(λ ΣH_j)`.
pub fn exact_series(h: &Hamiltonian, max_order: usize) -> OperatorSeries {
    OperatorSeries::exp_term(&h.polynomial(), 1.0, max_order)
}

/// Ordered product of `exp(multiplier·step_scale·λ·H_term)` over the schedule.
pub fn schedule_series(
    s: &ExponentialSchedule,
    h: &Hamiltonian,
    step_scale: f64,
    max_order: usize,
) -> Result<OperatorSeries> {
    if s.n_terms() != h.len() {
        return Err(Error::InvalidArgument(format!(
            "schedule built for {} terms, hamiltonian has {}",
            s.n_terms(),
            h.len()
        )));
    }
    let terms: Vec<PauliPolynomial> = h.terms().iter().map(|t| t.polynomial()).collect();
    let mut acc = OperatorSeries::identity(h.n_qubits(), max_order);
    for f in s.factors() {
        let factor = OperatorSeries::exp_term(&terms[f.term], f.multiplier * step_scale, max_order);
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Largest coefficient at orders `0..=2k`.
    pub low_order_residual: f64,
    /// Largest coefficient at even orders `2k+2..=4k`.
    pub even_order_residual: f64,
    /// Largest imaginary coefficient at the odd correction orders.
    pub antihermitian_residual: f64,
    /// Largest real coefficient at the odd correction orders.
    pub max_beta: f64,
}

/// The Hermitian polynomials `ℋ_l` for `l ∈ γ = {2k+1, 2k+3, …, 4k+1}`, such that
/// `V†D + DV† = Σ_{l∈γ} (λ/2)^l ℋ_l + O(λ^{4k+2})`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionSeries {
    k: u32,
    n_qubits: usize,
    gamma: Vec<usize>,
    per_order: BTreeMap<usize, PauliPolynomial>,
    diagnostics: Diagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrectionTerm {
    #[serde(rename = "l")]
    pub order: usize,
    pub pauli: PauliString,
    pub beta: f64,
}

/// Orders at which the corrections act.
pub fn correction_orders(k: u32) -> Vec<usize> {
    let k = k as usize;
    (2 * k + 1..=4 * k + 1).step_by(2).collect()
}

/// Expands `V†D + DV†` for `S_{2k}` and checks its structure.
pub fn correction_series(k: u32, h: &Hamiltonian) -> Result<CorrectionSeries> {
    let schedule = ExponentialSchedule::build(k, h.len())?;
    let ku = k as usize;
    let max_order = 4 * ku + 1;
    let n = h.n_qubits();

    let v_dag = OperatorSeries::exp_term(&h.polynomial(), -0.5, max_order);
    let s = schedule_series(&schedule, h, 0.5, max_order)?;
    let id = OperatorSeries::identity(n, max_order);
    let c = v_dag.mul(&s)?.add(&s.mul(&v_dag)?)?.sub(&id)?.sub(&id)?;
    // Coefficients of (λ/2)^l rather than λ^l.
    let c = c.rescale(Complex64::new(2.0, 0.0));

    let gamma = correction_orders(k);
    let max_in = |orders: &mut dyn Iterator<Item = usize>, f: &dyn Fn(&Complex64) -> f64| {
        orders
            .map(|l| {
                let m = c.orders()[l].iter().map(|(_, v)| f(v)).fold(0.0, f64::max);
                (l, m)
            })
            .fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a })
    };
    let low = max_in(&mut (0..=2 * ku), &|v| v.norm());
    let even = max_in(&mut (2 * ku + 2..=4 * ku).step_by(2), &|v| v.norm());
    let anti = max_in(&mut gamma.iter().copied(), &|v| v.im.abs());
    let beta = max_in(&mut gamma.iter().copied(), &|v| v.re.abs());

    let diagnostics = Diagnostics {
        low_order_residual: low.1,
        even_order_residual: even.1,
        antihermitian_residual: anti.1,
        max_beta: beta.1,
    };

    // Natural size of an order-(2k+1) coefficient.
    let scale = h
        .terms()
        .iter()
        .map(|t| t.coeff.abs())
        .sum::<f64>()
        .powi(2 * k as i32 + 1);
    if h.all_terms_commute() || beta.1 <= VANISHING_RELATIVE * scale {
        // S_{2k} = V exactly; what is left in `c` is rounding.
        return Ok(CorrectionSeries {
            k,
            n_qubits: n,
            gamma,
            per_order: BTreeMap::new(),
            diagnostics,
        });
    }

    let reference = beta.1;
    let tolerance = STRUCTURAL_TOLERANCE * reference;
    for (order, residual) in [low, even, anti] {
        if residual > tolerance {
            return Err(Error::StructuralViolation {
                order,
                residual,
                tolerance,
            });
        }
    }

    let per_order = gamma
        .iter()
        .map(|&l| (l, c.orders()[l].hermitian_split().0))
        .collect();
    Ok(CorrectionSeries {
        k,
        n_qubits: n,
        gamma,
        per_order,
        diagnostics,
    })
}

impl CorrectionSeries {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gamma(&self) -> &[usize] {
        &self.gamma
    }

    pub fn diagnostics(&self) -> &Diagnostics {
        &self.diagnostics
    }

    /// `ℋ_l`, empty when the order carries no correction.
    pub fn order(&self, l: usize) -> PauliPolynomial {
        self.per_order
            .get(&l)
            .cloned()
            .unwrap_or_else(|| PauliPolynomial::zero(self.n_qubits))
    }

    /// Number of distinct Pauli strings at order `l`.
    pub fn term_count(&self, l: usize) -> usize {
        self.per_order.get(&l).map_or(0, |p| p.len())
    }

    pub fn is_empty(&self) -> bool {
        self.per_order.values().all(|p| p.is_empty())
    }

    /// Flat `(l, H_h^{(l)}, β_h^{(l)})` table with unit-norm Pauli strings.
    pub fn extract_terms(&self) -> Vec<CorrectionTerm> {
        self.per_order
            .iter()
            .flat_map(|(&order, p)| {
                p.iter()
                    .filter(|(_, c)| c.re != 0.0)
                    .map(move |(s, c)| CorrectionTerm {
                        order,
                        pauli: s.clone(),
                        beta: c.re,
                    })
            })
            .collect()
    }

    /// `I − Σ_{l∈γ} (λ/2)^l ℋ_l` as a series in λ.
    pub fn middle_series(&self) -> OperatorSeries {
        let max_order = 4 * self.k as usize + 1;
        let mut orders = vec![PauliPolynomial::zero(self.n_qubits); max_order + 1];
        orders[0] = PauliPolynomial::identity(self.n_qubits);
        for (&l, p) in &self.per_order {
            orders[l] = p.scale(Complex64::new(-(0.5f64.powi(l as i32)), 0.0));
        }
        OperatorSeries::from_orders(self.n_qubits, orders).expect("consistent orders")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let mut orders = serde_json::Map::new();
        let mut counts = serde_json::Map::new();
        for &l in &self.gamma {
            let terms: Vec<_> = self
                .order(l)
                .iter()
                .map(|(s, c)| serde_json::json!({"pauli": s, "beta": c.re}))
                .collect();
            counts.insert(l.to_string(), terms.len().into());
            orders.insert(l.to_string(), terms.into());
        }
        serde_json::json!({
            "k": self.k,
            "gamma": self.gamma,
            "orders": orders,
            "term_counts": counts,
            "diagnostics": self.diagnostics,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::Model;

    fn x_plus_z() -> Hamiltonian {
        Hamiltonian::from_json(
            r#"{"n_qubits":1,"terms":[{"pauli":"X","coeff":1.0},{"pauli":"Z","coeff":1.0}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn exact_series_of_x() {
        let h = Hamiltonian::from_json(r#"{"n_qubits":1,"terms":[{"pauli":"X","coeff":1.0}]}"#)
            .unwrap();
        let s = exact_series(&h, 3);
        let i: PauliString = "I".parse().unwrap();
        let x: PauliString = "X".parse().unwrap();
        assert_eq!(s.order(0).coeff(&i).re, 1.0);
        assert_eq!(s.order(1).coeff(&x).re, 1.0);
        assert_eq!(s.order(2).coeff(&i).re, 0.5);
        assert!((s.order(3).coeff(&x).re - 1.0 / 6.0).abs() < 1e-16);
    }

    #[test]
    fn schedule_series_low_orders() {
        let h = x_plus_z();
        let sched = ExponentialSchedule::build(1, 2).unwrap();
        let s = schedule_series(&sched, &h, 0.5, 3).unwrap();
        let exact = exact_series(&h, 3).rescale(Complex64::new(0.5, 0.0));
        assert_eq!(s.order(0), PauliPolynomial::identity(1));
        assert!(s
            .order(1)
            .sub(&h.polynomial().scale(Complex64::new(0.5, 0.0)))
            .unwrap()
            .is_empty());
        for l in 0..=2 {
            assert!(
                s.order(l).sub(&exact.order(l)).unwrap().max_abs() < 1e-15,
                "order {l}"
            );
        }
        assert!(s.order(3).sub(&exact.order(3)).unwrap().max_abs() > 1e-3);
    }

    #[test]
    fn commuting_gives_empty() {
        let h = Hamiltonian::generate(Model::HeisenbergChain {
            n_qubits: 2,
            field: 0.0,
        })
        .unwrap();
        for k in 1..=2 {
            let c = correction_series(k, &h).unwrap();
            assert!(c.is_empty());
            assert!(c.extract_terms().is_empty());
            assert!(c.diagnostics().max_beta < 1e-12);
        }
        let single =
            Hamiltonian::from_json(r#"{"n_qubits":2,"terms":[{"pauli":"XY","coeff":0.3}]}"#)
                .unwrap();
        assert!(correction_series(1, &single).unwrap().is_empty());
    }

    #[test]
    fn gamma_sets() {
        assert_eq!(correction_orders(1), [3, 5]);
        assert_eq!(correction_orders(2), [5, 7, 9]);
    }

    #[test]
    fn x_plus_z_structure() {
        let c = correction_series(1, &x_plus_z()).unwrap();
        let d = c.diagnostics();
        assert!(d.even_order_residual < 1e-12 * d.max_beta);
        assert!(d.antihermitian_residual < 1e-12 * d.max_beta);
        assert!(!c.order(3).is_empty());
        // every string at an odd order is a single-qubit non-identity letter or I
        let terms = c.extract_terms();
        assert!(terms.iter().all(|t| t.order == 3 || t.order == 5));
        let mut seen = std::collections::HashSet::new();
        assert!(terms
            .iter()
            .all(|t| seen.insert((t.order, t.pauli.clone()))));
    }

    #[test]
    fn extract_round_trips() {
        let h = Hamiltonian::generate(Model::RandomPauli {
            n_qubits: 2,
            n_terms: 3,
            seed: 11,
        })
        .unwrap();
        let c = correction_series(1, &h).unwrap();
        for &l in c.gamma() {
            let rebuilt = PauliPolynomial::from_terms(
                2,
                c.extract_terms()
                    .into_iter()
                    .filter(|t| t.order == l)
                    .map(|t| (t.pauli, Complex64::new(t.beta, 0.0))),
            )
            .unwrap();
            assert_eq!(rebuilt, c.order(l));
        }
    }
}
