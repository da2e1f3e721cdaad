//! Convergence studies, exponential-count tables and trajectory sampling.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{apriori_bounds, trotter_step_bound};
use crate::correction::correction_series;
use crate::dense::DenseOperator;
use crate::error::{Error, Result};
use crate::fit::log_log_slope;
use crate::hamiltonian::Hamiltonian;
use crate::metrics::{repeated_mean_error, target_unitary, trotter_error};
use crate::sampler::CorrectionEnsemble;
use crate::schedule::{factor_count, ExponentialSchedule};

/// Fits need at least this many points.
pub const MIN_FIT_POINTS: usize = 4;

/// Largest segment count tried by [`run_count_table`].
pub const R_CAP: u64 = 1 << 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    #[serde(rename = "trotter_suzuki_2k")]
    TrotterSuzuki2k,
    #[serde(rename = "modified_4k1")]
    Modified4k1,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::TrotterSuzuki2k => "trotter_suzuki_2k",
            Method::Modified4k1 => "modified_4k1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRecord {
    pub method: Method,
    pub k: u32,
    #[serde(rename = "L")]
    pub n_terms: usize,
    pub n_qubits: usize,
    pub t: f64,
    pub r: u64,
    pub error: f64,
    pub bound: f64,
    pub exp_count: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodSlope {
    pub method: Method,
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub records: Vec<ConvergenceRecord>,
    pub slopes: Vec<MethodSlope>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub k: u32,
    pub t: f64,
    pub rs: Vec<u64>,
    pub seed: u64,
    pub format: Format,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if !(self.t.is_finite() && self.t > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "t must be positive, got {}",
                self.t
            )));
        }
        if self.rs.is_empty() || self.rs.contains(&0) {
            return Err(Error::InvalidArgument(
                "r list must be non-empty and positive".into(),
            ));
        }
        Ok(())
    }
}

/// Errors of the plain and corrected formulas over the configured `r` values.
///
/// Both use exact dense evaluation; the corrected formula is evaluated through
/// its mean step, so no sampling noise enters and `seed` is only recorded.
/// `bound` is the matching operator-norm bound: `r·‖V − S_{2k}‖` bounded per step
/// for the plain formula and `r·b` for the corrected one.
pub fn run_converge(h: &Hamiltonian, cfg: &RunConfig) -> Result<ConvergenceStudy> {
    cfg.validate()?;
    let schedule = ExponentialSchedule::build(cfg.k, h.len())?;
    let corrections = correction_series(cfg.k, h)?;
    let stats = h.stats();
    let n = schedule.len() as u64;
    let mut records = Vec::with_capacity(2 * cfg.rs.len());
    for &r in &cfg.rs {
        let step = cfg.t / r as f64;
        let lambda = Complex64::new(0.0, -step);
        let ts_bound = r as f64 * trotter_step_bound(cfg.k, stats.n_terms, stats.lambda_max, step)?;
        records.push(ConvergenceRecord {
            method: Method::TrotterSuzuki2k,
            k: cfg.k,
            n_terms: stats.n_terms,
            n_qubits: stats.n_qubits,
            t: cfg.t,
            r,
            error: trotter_error(&schedule, h, cfg.t, r)?,
            bound: ts_bound,
            exp_count: r * n,
            seed: cfg.seed,
        });
        let ensemble = CorrectionEnsemble::build(&corrections, lambda);
        let per_step = 2 * n + u64::from(!ensemble.is_empty());
        let bounds = apriori_bounds(cfg.k, stats.n_terms, stats.lambda_max, step)?;
        records.push(ConvergenceRecord {
            method: Method::Modified4k1,
            k: cfg.k,
            n_terms: stats.n_terms,
            n_qubits: stats.n_qubits,
            t: cfg.t,
            r,
            error: repeated_mean_error(&ensemble, &schedule, h, cfg.t, r)?,
            bound: r as f64 * bounds.b_bound,
            exp_count: r * per_step,
            seed: cfg.seed,
        });
    }
    let slopes = [Method::TrotterSuzuki2k, Method::Modified4k1]
        .into_iter()
        .filter_map(|method| {
            let (rs, errs): (Vec<f64>, Vec<f64>) = records
                .iter()
                .filter(|rec| rec.method == method)
                .map(|rec| (rec.r as f64, rec.error))
                .unzip();
            if rs.len() < MIN_FIT_POINTS {
                return None;
            }
            log_log_slope(&rs, &errs).map(|slope| MethodSlope { method, slope })
        })
        .collect();
    Ok(ConvergenceStudy { records, slopes })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountRow {
    pub method: Method,
    pub k: u32,
    #[serde(rename = "L")]
    pub n_terms: usize,
    pub epsilon: f64,
    pub t: f64,
    pub r: u64,
    pub exp_count: u64,
}

/// Smallest `r` with `total(r) <= epsilon`, for `total` decreasing in `r`.
fn minimal_segments<F>(epsilon: f64, total: F) -> Result<u64>
where
    F: Fn(u64) -> Result<f64>,
{
    let mut hi = 1u64;
    while total(hi)? > epsilon {
        if hi >= R_CAP {
            return Err(Error::Unreachable {
                epsilon,
                cap: R_CAP,
            });
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    // invariant: total(hi) <= epsilon, and lo == 0 or total(lo) > epsilon
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if total(mid)? <= epsilon {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Exponential counts needed to reach each target error, from the a-priori bounds.
///
/// The plain formula uses `2·r·‖V(λ) − S_{2k}(λ)‖` bounded per step, the corrected one
/// `r·(a² + 2b)`; both bound the diamond distance of the `r`-step channel.
pub fn run_count_table(
    ks: &[u32],
    ls: &[usize],
    epsilons: &[f64],
    t: f64,
    lambda_max: f64,
) -> Result<Vec<CountRow>> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "t must be positive, got {t}"
        )));
    }
    if let Some(e) = epsilons.iter().find(|e| e.is_nan() || **e <= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {e}"
        )));
    }
    let mut rows = Vec::new();
    for &k in ks {
        for &l in ls {
            if k == 0 || l == 0 {
                return Err(Error::InvalidArgument("k and L must be positive".into()));
            }
            let n = factor_count(k, l) as u64;
            for &epsilon in epsilons {
                let r_ts = minimal_segments(epsilon, |r| {
                    Ok(2.0 * r as f64 * trotter_step_bound(k, l, lambda_max, t / r as f64)?)
                })?;
                rows.push(CountRow {
                    method: Method::TrotterSuzuki2k,
                    k,
                    n_terms: l,
                    epsilon,
                    t,
                    r: r_ts,
                    exp_count: r_ts * n,
                });
                let r_mod = minimal_segments(epsilon, |r| {
                    Ok(r as f64 * apriori_bounds(k, l, lambda_max, t / r as f64)?.diamond_bound)
                })?;
                rows.push(CountRow {
                    method: Method::Modified4k1,
                    k,
                    n_terms: l,
                    epsilon,
                    t,
                    r: r_mod,
                    exp_count: r_mod * (2 * n + 1),
                });
            }
        }
    }
    Ok(rows)
}

/// Fitted exponent of `exp_count` against `epsilon` for one `(method, k, L)` group.
pub fn count_exponent(rows: &[CountRow], method: Method, k: u32, n_terms: usize) -> Option<f64> {
    let (eps, counts): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| r.method == method && r.k == k && r.n_terms == n_terms)
        .map(|r| (r.epsilon, r.exp_count as f64))
        .unzip();
    if eps.len() < MIN_FIT_POINTS {
        return None;
    }
    log_log_slope(&eps, &counts)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryReport {
    pub k: u32,
    pub t: f64,
    pub r: u64,
    pub trajectories: usize,
    pub seed: u64,
    /// Exponentials per trajectory.
    pub exp_count: u64,
    /// Trace distance between the trajectory-averaged state and the exact state.
    pub trace_distance: f64,
    /// Correction orders drawn in the first trajectory (0 when no correction).
    pub first_trajectory_orders: Vec<usize>,
}

/// Monte-Carlo trajectories from `|0…0⟩`, each an independent ChaCha stream.
pub fn run_trajectories(
    h: &Hamiltonian,
    k: u32,
    t: f64,
    r: u64,
    trajectories: usize,
    seed: u64,
) -> Result<TrajectoryReport> {
    RunConfig {
        k,
        t,
        rs: vec![r],
        seed,
        format: Format::Json,
    }
    .validate()?;
    if trajectories == 0 {
        return Err(Error::InvalidArgument(
            "need at least one trajectory".into(),
        ));
    }
    let schedule = ExponentialSchedule::build(k, h.len())?;
    let corrections = correction_series(k, h)?;
    let ensemble = CorrectionEnsemble::build(&corrections, Complex64::new(0.0, -t / r as f64));
    let members: Vec<DenseOperator> = ensemble
        .step_unitaries(&schedule, h)?
        .into_iter()
        .map(|(_, u)| u)
        .collect();
    let dim = members[0].dim();
    let mut rho = nalgebra::DMatrix::<Complex64>::zeros(dim, dim);
    let mut first_orders = Vec::new();
    let mut exp_count = 0;
    for traj in 0..trajectories {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(traj as u64);
        let mut psi = nalgebra::DVector::<Complex64>::zeros(dim);
        psi[0] = Complex64::new(1.0, 0.0);
        exp_count = 0;
        for _ in 0..r {
            let step = ensemble.sample_step(&schedule, &mut rng);
            exp_count += step.exponential_count() as u64;
            let index = step.correction.as_ref().map_or(0, |c| c.entry);
            if traj == 0 {
                first_orders.push(step.correction.as_ref().map_or(0, |c| c.order));
            }
            psi = members[index].matrix() * psi;
        }
        rho += &psi * psi.adjoint();
    }
    rho /= Complex64::new(trajectories as f64, 0.0);
    let v = target_unitary(h, Complex64::new(0.0, -t))?;
    let exact = v.matrix().column(0).into_owned();
    let diff = DenseOperator::from_matrix(rho - &exact * exact.adjoint())?;
    Ok(TrajectoryReport {
        k,
        t,
        r,
        trajectories,
        seed,
        exp_count,
        trace_distance: 0.5 * diff.trace_norm(),
        first_trajectory_orders: first_orders,
    })
}

/// Writes serializable rows as CSV (header from field names) or a JSON array.
pub fn write_rows<T: Serialize, W: Write>(rows: &[T], format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows).map_err(|e| Error::Io(e.into()))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn write_rows_to_path<T: Serialize>(rows: &[T], format: Format, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_rows(rows, format, std::io::BufWriter::new(file))
}
