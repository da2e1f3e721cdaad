//! Measured mixing-lemma quantities and their comparison with the a-priori bounds.

use num_complex::Complex64;
use serde::Serialize;

use crate::bounds::{apriori_bounds, TheoremBounds};
use crate::dense::{self, DenseOperator};
use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::sampler::{schedule_to_dense, CorrectionEnsemble};
use crate::schedule::ExponentialSchedule;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundChecks {
    pub a_within_bound: bool,
    pub b_within_bound: bool,
    pub a_total_within_bound: bool,
    pub d_within_bound: bool,
    pub mixing_lemma_holds: bool,
}

impl BoundChecks {
    pub fn all(&self) -> bool {
        self.a_within_bound
            && self.b_within_bound
            && self.a_total_within_bound
            && self.d_within_bound
            && self.mixing_lemma_holds
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingReport {
    /// `max ‖V − S·U·S‖` over the ensemble.
    pub a_measured: f64,
    /// `‖V − Σ p·S·U·S‖`.
    pub b_measured: f64,
    /// Choi trace-norm difference divided by the dimension.
    pub diamond_lower: f64,
    /// Choi trace-norm difference.
    pub diamond_upper: f64,
    /// `a_measured² + 2·b_measured`.
    pub mixing_rhs: f64,
    /// `‖S_{2k}(λ/2) − V(λ/2)‖`.
    pub d_measured: f64,
    /// The ensemble's `A`.
    pub a_total_measured: f64,
    pub bounds: TheoremBounds,
    pub checks: BoundChecks,
}

fn hamiltonian_dense(h: &Hamiltonian) -> Result<DenseOperator> {
    dense::poly_dense(&h.polynomial())
}

/// Exact `exp(λ ΣH_j)`.
pub fn target_unitary(h: &Hamiltonian, lambda: Complex64) -> Result<DenseOperator> {
    dense::exp_hamiltonian(&hamiltonian_dense(h)?, lambda)
}

/// Measures one step of the corrected formula by exact enumeration of the ensemble.
pub fn measure(
    e: &CorrectionEnsemble,
    s: &ExponentialSchedule,
    h: &Hamiltonian,
) -> Result<MixingReport> {
    let lambda = e.lambda();
    let hd = hamiltonian_dense(h)?;
    let v = dense::exp_hamiltonian(&hd, lambda)?;
    let members = e.step_unitaries(s, h)?;

    let deltas: Vec<DenseOperator> = members.iter().map(|(_, u)| u.sub(&v)).collect();
    let a_measured = deltas.iter().map(|d| d.spectral_norm()).fold(0.0, f64::max);
    let dim = v.dim();
    // V − mean, accumulated from the differences to avoid cancelling O(1) terms.
    let b_measured = members
        .iter()
        .zip(&deltas)
        .fold(DenseOperator::zeros(dim), |acc, ((p, _), d)| {
            acc.add(&d.scale(Complex64::new(*p, 0.0)))
        })
        .spectral_norm();

    let choi_diff = dense::choi_difference(&v, &members)?;
    let diamond_upper = choi_diff.trace_norm();
    let diamond_lower = diamond_upper / dim as f64;

    let half_v = dense::exp_hamiltonian(&hd, lambda / 2.0)?;
    let d_measured = schedule_to_dense(s, h, lambda / 2.0)?
        .sub(&half_v)
        .spectral_norm();

    let stats = h.stats();
    let bounds = apriori_bounds(s.k(), stats.n_terms, stats.lambda_max, lambda.norm())?;
    let mixing_rhs = a_measured * a_measured + 2.0 * b_measured;
    let a_total_measured = e.total_weight();
    let checks = BoundChecks {
        a_within_bound: a_measured <= bounds.a_bound,
        b_within_bound: b_measured <= bounds.b_bound,
        a_total_within_bound: a_total_measured <= bounds.a_total_bound,
        d_within_bound: d_measured <= bounds.d_bound,
        mixing_lemma_holds: diamond_lower <= mixing_rhs,
    };
    Ok(MixingReport {
        a_measured,
        b_measured,
        diamond_lower,
        diamond_upper,
        mixing_rhs,
        d_measured,
        a_total_measured,
        bounds,
        checks,
    })
}

fn check_step(e: &CorrectionEnsemble, t: f64, r: u64) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let expected = Complex64::new(0.0, -t / r as f64);
    if (e.lambda() - expected).norm() > 1e-12 * expected.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::InvalidArgument(format!(
            "ensemble built for lambda = {}, expected -i·t/r = {expected}",
            e.lambda()
        )));
    }
    Ok(())
}

/// `‖V(−it) − M^r‖` for the mean step `M` at `λ = −it/r`.
pub fn repeated_mean_error(
    e: &CorrectionEnsemble,
    s: &ExponentialSchedule,
    h: &Hamiltonian,
    t: f64,
    r: u64,
) -> Result<f64> {
    check_step(e, t, r)?;
    let v = target_unitary(h, Complex64::new(0.0, -t))?;
    let mean = e.mean_step(s, h)?;
    Ok(v.sub(&mean.pow(r)).spectral_norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelDistance {
    pub diamond_lower: f64,
    pub diamond_upper: f64,
}

/// Choi trace-norm sandwich for the `r`-fold channel against `V(−it)`.
pub fn repeated_channel_distance(
    e: &CorrectionEnsemble,
    s: &ExponentialSchedule,
    h: &Hamiltonian,
    t: f64,
    r: u64,
) -> Result<ChannelDistance> {
    check_step(e, t, r)?;
    let v = target_unitary(h, Complex64::new(0.0, -t))?;
    let members = e.step_unitaries(s, h)?;
    let channel = dense::superoperator(&members)?.pow(r);
    let diff = dense::choi_from_superoperator(&channel).sub(&dense::choi(&[(1.0, v.clone())])?);
    let upper = diff.trace_norm();
    Ok(ChannelDistance {
        diamond_lower: upper / v.dim() as f64,
        diamond_upper: upper,
    })
}

/// `‖V(−it) − S_{2k}(−it/r)^r‖` for the uncorrected formula.
pub fn trotter_error(s: &ExponentialSchedule, h: &Hamiltonian, t: f64, r: u64) -> Result<f64> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let v = target_unitary(h, Complex64::new(0.0, -t))?;
    let step = schedule_to_dense(s, h, Complex64::new(0.0, -t / r as f64))?;
    Ok(v.sub(&step.pow(r)).spectral_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correction::correction_series;
    use crate::hamiltonian::Model;

    fn heisenberg_field() -> Hamiltonian {
        Hamiltonian::generate(Model::HeisenbergChain {
            n_qubits: 2,
            field: 0.5,
        })
        .unwrap()
    }

    #[test]
    fn exact_for_single_term() {
        let h = Hamiltonian::from_json(r#"{"n_qubits":1,"terms":[{"pauli":"Y","coeff":0.8}]}"#)
            .unwrap();
        let c = correction_series(1, &h).unwrap();
        let e = CorrectionEnsemble::build(&c, Complex64::new(0.0, -0.3));
        let s = ExponentialSchedule::build(1, 1).unwrap();
        let m = measure(&e, &s, &h).unwrap();
        assert!(m.a_measured < 1e-12 && m.b_measured < 1e-12);
        assert!(m.diamond_upper < 1e-12);
        assert!(repeated_mean_error(&e, &s, &h, 0.9, 3).unwrap() < 1e-12);
        assert!(repeated_mean_error(&e, &s, &h, 0.6, 3).is_err());
    }

    #[test]
    fn convexity_and_bounds() {
        let h = heisenberg_field();
        let c = correction_series(1, &h).unwrap();
        let e = CorrectionEnsemble::build(&c, Complex64::new(0.0, -0.05));
        let s = ExponentialSchedule::build(1, h.len()).unwrap();
        let m = measure(&e, &s, &h).unwrap();
        assert!(m.b_measured <= m.a_measured);
        assert!(m.diamond_lower <= m.diamond_upper);
        assert!(m.checks.all(), "{m:?}");
    }

    #[test]
    fn mean_step_is_contraction() {
        let h = heisenberg_field();
        let c = correction_series(1, &h).unwrap();
        let e = CorrectionEnsemble::build(&c, Complex64::new(0.0, -0.2));
        let s = ExponentialSchedule::build(1, h.len()).unwrap();
        let mean = e.mean_step(&s, &h).unwrap();
        assert!(mean.spectral_norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn channel_distance_one_step_matches_measure() {
        let h = heisenberg_field();
        let c = correction_series(1, &h).unwrap();
        let e = CorrectionEnsemble::build(&c, Complex64::new(0.0, -0.1));
        let s = ExponentialSchedule::build(1, h.len()).unwrap();
        let m = measure(&e, &s, &h).unwrap();
        let d = repeated_channel_distance(&e, &s, &h, 0.1, 1).unwrap();
        assert!((d.diamond_upper - m.diamond_upper).abs() < 1e-12);
    }
}
