//! Closed-form a-priori error bounds for the corrected formula.

use serde::Serialize;

use crate::error::{Error, Result};

fn ln_factorial(s: u32) -> f64 {
    (2..=s).map(|i| (i as f64).ln()).sum()
}

/// `x^s / s! · e^{y}`, evaluated in log space.
fn power_term(x: f64, s: u32, y: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    (s as f64 * x.ln() - ln_factorial(s) + y).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremBounds {
    pub k: u32,
    #[serde(rename = "L")]
    pub n_terms: usize,
    #[serde(rename = "Lambda")]
    pub lambda_max: f64,
    pub lambda_abs: f64,
    /// Bound on `‖S_{2k}(λ/2) − V(λ/2)‖`.
    pub d_bound: f64,
    /// Bound on the total sampling weight `A`.
    pub a_total_bound: f64,
    /// Bound on the distance from `V` of any sampled unitary.
    pub a_bound: f64,
    /// Bound on the distance from `V` of the mean step.
    pub b_bound: f64,
    /// `a² + 2b`.
    pub diamond_bound: f64,
}

fn validate(k: u32, n_terms: usize, lambda_max: f64, lambda_abs: f64) -> Result<()> {
    if k == 0 || n_terms == 0 {
        return Err(Error::InvalidArgument(
            "bounds need k >= 1 and L >= 1".into(),
        ));
    }
    if !(lambda_max.is_finite() && lambda_max >= 0.0 && lambda_abs.is_finite() && lambda_abs >= 0.0)
    {
        return Err(Error::InvalidArgument(format!(
            "bounds need finite non-negative Lambda and |lambda|, got {lambda_max}, {lambda_abs}"
        )));
    }
    Ok(())
}

/// Half-step error bound on `‖D‖` at step size `|λ|`.
pub fn d_bound(k: u32, n_terms: usize, lambda_max: f64, lambda_abs: f64) -> Result<f64> {
    validate(k, n_terms, lambda_max, lambda_abs)?;
    let s = 2 * k + 1;
    let scale = lambda_abs * n_terms as f64 * lambda_max;
    let five = 5f64.powi(k as i32 - 1);
    Ok(power_term(five * scale, s, five * scale) + power_term(scale / 2.0, s, scale / 2.0))
}

/// Full-step bound on `‖V(λ) − S_{2k}(λ)‖`, i.e. [`d_bound`] at `2|λ|`.
pub fn trotter_step_bound(k: u32, n_terms: usize, lambda_max: f64, lambda_abs: f64) -> Result<f64> {
    d_bound(k, n_terms, lambda_max, 2.0 * lambda_abs)
}

pub fn apriori_bounds(
    k: u32,
    n_terms: usize,
    lambda_max: f64,
    lambda_abs: f64,
) -> Result<TheoremBounds> {
    validate(k, n_terms, lambda_max, lambda_abs)?;
    let x = (5f64.powi(k as i32 - 1) + 0.5) * lambda_abs * n_terms as f64 * lambda_max;
    let a_total = 2.0 * power_term(x, 2 * k + 1, x);
    let a_bound = 2.0 * a_total;
    let b_bound = 2.0 * power_term(x, 4 * k + 2, x)
        + power_term(a_total, 2, a_total)
        + 0.75 * a_total * a_total
        + 0.25 * a_total.powi(3);
    Ok(TheoremBounds {
        k,
        n_terms,
        lambda_max,
        lambda_abs,
        d_bound: d_bound(k, n_terms, lambda_max, lambda_abs)?,
        a_total_bound: a_total,
        a_bound,
        b_bound,
        diamond_bound: a_bound * a_bound + 2.0 * b_bound,
    })
}
