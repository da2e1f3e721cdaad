use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use corrected_pf::bench::{self, Format, RunConfig};
use corrected_pf::metrics;
use corrected_pf::{
    correction_series, CorrectionEnsemble, Error, ExponentialSchedule, Hamiltonian, Model,
};

#[derive(Parser)]
#[command(
    name = "corrected-pf",
    version,
    about = "Randomly corrected product formulas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Order parameter of the underlying Suzuki formula S_{2k}.
    #[arg(long)]
    k: u32,
    /// Hamiltonian JSON file, or inline JSON starting with '{'.
    #[arg(long)]
    hamiltonian: String,
}

#[derive(Subcommand)]
enum Command {
    /// Extract the correction terms of S_{2k}.
    Expand {
        #[command(flatten)]
        common: Common,
        /// Print the exponential schedule to stdout.
        #[arg(long)]
        print_schedule: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the sampling ensemble for lambda = -i*t/r.
    BuildSampler {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure one step against the a-priori bounds. Exits with 3 if any check fails.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Errors of the plain and corrected formulas for a list of r.
    Converge {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exponential counts needed to reach each target error.
    BenchCounts {
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        k: Vec<u32>,
        /// Number of Hamiltonian terms.
        #[arg(long = "L", value_delimiter = ',', default_value = "2,4")]
        n_terms: Vec<usize>,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "1e-4,1e-5,1e-6,1e-7,1e-8,1e-9,1e-10"
        )]
        epsilon: Vec<f64>,
        #[arg(long, default_value_t = 10.0)]
        t: f64,
        /// Largest coefficient magnitude.
        #[arg(long, default_value_t = 1.0)]
        lambda_max: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo trajectories of the corrected formula.
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        r: u64,
        #[arg(long, default_value_t = 100)]
        trajectories: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a model Hamiltonian as JSON.
    Generate {
        #[arg(long, value_enum)]
        model: ModelKind,
        #[arg(long)]
        n_qubits: usize,
        /// Longitudinal field of the Heisenberg chain.
        #[arg(long, default_value_t = 0.0)]
        field: f64,
        /// Term count of the random model.
        #[arg(long, default_value_t = 4)]
        n_terms: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModelKind {
    Heisenberg,
    Random,
}

enum Outcome {
    Ok,
    BoundViolation,
}

fn emit(out: Option<&Path>, text: &str) -> corrected_pf::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn pretty(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn step_lambda(t: f64, r: u64) -> corrected_pf::Result<Complex64> {
    if !(t.is_finite() && t > 0.0) || r == 0 {
        return Err(Error::InvalidArgument(format!(
            "need t > 0 and r >= 1, got t = {t}, r = {r}"
        )));
    }
    Ok(Complex64::new(0.0, -t / r as f64))
}

fn run(cli: Cli) -> corrected_pf::Result<Outcome> {
    match cli.command {
        Command::Expand {
            common,
            print_schedule,
            out,
        } => {
            let h = Hamiltonian::from_arg(&common.hamiltonian)?;
            let schedule = ExponentialSchedule::build(common.k, h.len())?;
            let corrections = correction_series(common.k, &h)?;
            if print_schedule {
                print!("{}", pretty(&schedule.to_json_value()));
            }
            if out.is_some() || !print_schedule {
                emit(out.as_deref(), &pretty(&corrections.to_json_value()))?;
            }
        }
        Command::BuildSampler { common, t, r, out } => {
            let lambda = step_lambda(t, r)?;
            let h = Hamiltonian::from_arg(&common.hamiltonian)?;
            let corrections = correction_series(common.k, &h)?;
            let ensemble = CorrectionEnsemble::build(&corrections, lambda);
            emit(out.as_deref(), &pretty(&ensemble.to_json_value()))?;
        }
        Command::Verify { common, t, r, out } => {
            let lambda = step_lambda(t, r)?;
            let h = Hamiltonian::from_arg(&common.hamiltonian)?;
            let schedule = ExponentialSchedule::build(common.k, h.len())?;
            let corrections = correction_series(common.k, &h)?;
            let ensemble = CorrectionEnsemble::build(&corrections, lambda);
            let report = metrics::measure(&ensemble, &schedule, &h)?;
            let pass = report.checks.all();
            let mut value = serde_json::to_value(report).expect("serializable");
            value["pass"] = pass.into();
            emit(out.as_deref(), &pretty(&value))?;
            if !pass {
                return Ok(Outcome::BoundViolation);
            }
        }
        Command::Converge {
            common,
            t,
            r,
            seed,
            format,
            out,
        } => {
            let h = Hamiltonian::from_arg(&common.hamiltonian)?;
            let cfg = RunConfig {
                k: common.k,
                t,
                rs: r,
                seed,
                format,
            };
            let study = bench::run_converge(&h, &cfg)?;
            match &out {
                Some(path) => bench::write_rows_to_path(&study.records, format, path)?,
                None => bench::write_rows(&study.records, format, std::io::stdout().lock())?,
            }
            for s in &study.slopes {
                eprintln!("slope {}: {:.4}", s.method.as_str(), s.slope);
            }
        }
        Command::BenchCounts {
            k,
            n_terms,
            epsilon,
            t,
            lambda_max,
            format,
            out,
        } => {
            let rows = bench::run_count_table(&k, &n_terms, &epsilon, t, lambda_max)?;
            match &out {
                Some(path) => bench::write_rows_to_path(&rows, format, path)?,
                None => bench::write_rows(&rows, format, std::io::stdout().lock())?,
            }
        }
        Command::Sample {
            common,
            t,
            r,
            trajectories,
            seed,
            out,
        } => {
            step_lambda(t, r)?;
            let h = Hamiltonian::from_arg(&common.hamiltonian)?;
            let report = bench::run_trajectories(&h, common.k, t, r, trajectories, seed)?;
            emit(out.as_deref(), &pretty(&report))?;
        }
        Command::Generate {
            model,
            n_qubits,
            field,
            n_terms,
            seed,
            out,
        } => {
            let model = match model {
                ModelKind::Heisenberg => Model::HeisenbergChain { n_qubits, field },
                ModelKind::Random => Model::RandomPauli {
                    n_qubits,
                    n_terms,
                    seed,
                },
            };
            let h = Hamiltonian::generate(model)?;
            emit(out.as_deref(), &(h.to_json() + "\n"))?;
        }
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::BoundViolation) => {
            eprintln!("bound violation");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
