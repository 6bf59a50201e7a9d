//! Command-line front end: expand diagonal unitaries into Pauli
//! coefficients, minimize geodesic lengths over the offset lattice, build
//! and check the exponential family, run verification suites, benchmark
//! the solvers.
//!
//! Exit codes classify failures: 0 success, 1 verification property
//! failure, 2 parse/ingest error, 3 input invariant violation, 4
//! unsupported flag or metric combination, 5 instance too large for the
//! requested solver.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use pauli_geodesic::family::{family_report, FamilyInstance};
use pauli_geodesic::io::{bench_csv, coeffs_csv, to_json, BenchRow, InputDocument, ResultDocument};
use pauli_geodesic::verify::{run_suite, Suite, SuiteOptions};
use pauli_geodesic::{
    expand, minimize_bnb_with, minimize_brute, rounding_result, BnbOptions, GeoError,
    GeodesicResult, Metric, PauliMask, PhaseVector,
};

const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_INVARIANT: u8 = 3;
const EXIT_UNSUPPORTED: u8 = 4;
const EXIT_TOO_LARGE: u8 = 5;

#[derive(Parser)]
#[command(
    name = "pauli-geodesic",
    about = "Minimal constant geodesics of diagonal unitaries under Pauli metrics",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand an input document into its Pauli coefficient table (CSV).
    Expand {
        /// Input document (JSON with `n` and `phases` or `diag`).
        input: PathBuf,
        /// Also write the CSV here (stdout always receives it).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Minimize the geodesic length over the 2pi-integer offset lattice.
    Minimize {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = MetricArg::F2)]
        metric: MetricArg,
        /// Weight-penalty factor; required iff --metric fq.
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, value_enum, default_value_t = SolverArg::Bnb)]
        solver: SolverArg,
        /// Enumeration workers for the bnb solver (0 = all cores).
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a family instance and verify its length bounds (JSON report).
    Family {
        #[arg(long)]
        n: usize,
        /// Defining mask (decimal, 0b-, or 0x-prefixed); default 7.
        #[arg(long)]
        sigma: Option<String>,
        /// Spectrum-splitting perturbation magnitude in radians.
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        /// Penalty factors to verify, comma separated.
        #[arg(long = "q-list", value_delimiter = ',')]
        q_list: Vec<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a seeded verification suite; exits 1 on property failure.
    Verify {
        /// roundtrip | parseval | f2bound | lemma2 | solver-xcheck
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long = "n-max", default_value_t = 6)]
        n_max: usize,
    },
    /// Time solvers on the family instance at a given size (CSV).
    Bench {
        /// Solvers to time, comma separated.
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [SolverArg::Bnb])]
        solver: Vec<SolverArg>,
        #[arg(long)]
        n: usize,
        /// Penalty factor; defaults to 4^n.
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value_t = 5)]
        repeat: usize,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    F2,
    Fq,
    F1,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    Rounding,
    Brute,
    Bnb,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

/// Classify a library error: resource limits exit 5, unsupported
/// combinations 4, and everything else is an input invariant violation.
fn lib_error(e: GeoError) -> CliError {
    let code = match e {
        GeoError::TooLarge { .. } => EXIT_TOO_LARGE,
        GeoError::InvalidSpec { .. } => EXIT_UNSUPPORTED,
        _ => EXIT_INVARIANT,
    };
    CliError::new(code, e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Expand { input, output } => cmd_expand(&input, output.as_ref()),
        Command::Minimize {
            input,
            metric,
            q,
            solver,
            workers,
            output,
        } => cmd_minimize(&input, metric, q, solver, workers, output.as_ref()),
        Command::Family {
            n,
            sigma,
            epsilon,
            q_list,
            output,
        } => cmd_family(n, sigma.as_deref(), epsilon, &q_list, output.as_ref()),
        Command::Verify {
            suite,
            trials,
            seed,
            n_max,
        } => cmd_verify(&suite, trials, seed, n_max),
        Command::Bench {
            solver,
            n,
            q,
            repeat,
        } => cmd_bench(&solver, n, q, repeat),
    }
}

/// Parse + validate an input document; parse failures exit 2, violated
/// document invariants exit 3.
fn load_input(path: &PathBuf) -> Result<(InputDocument, PhaseVector), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    let doc = InputDocument::parse(&text)
        .map_err(|e| CliError::new(EXIT_PARSE, format!("cannot parse {}: {e}", path.display())))?;
    let phases = doc
        .to_phases()
        .map_err(|e| CliError::new(EXIT_INVARIANT, e.to_string()))?;
    Ok((doc, phases))
}

/// Print the payload to stdout and mirror it to a file when requested.
fn emit(payload: &str, output: Option<&PathBuf>) -> Result<(), CliError> {
    let with_newline;
    let text = if payload.ends_with('\n') {
        payload
    } else {
        with_newline = format!("{payload}\n");
        &with_newline
    };
    print!("{text}");
    if let Some(path) = output {
        std::fs::write(path, text).map_err(|e| {
            CliError::new(EXIT_PARSE, format!("cannot write {}: {e}", path.display()))
        })?;
    }
    Ok(())
}

fn cmd_expand(input: &PathBuf, output: Option<&PathBuf>) -> Result<u8, CliError> {
    let (_, phases) = load_input(input)?;
    emit(&coeffs_csv(&expand(&phases)), output)?;
    Ok(0)
}

fn resolve_metric(metric: MetricArg, q: Option<f64>) -> Result<Metric, CliError> {
    match (metric, q) {
        (MetricArg::Fq, Some(q)) => Ok(Metric::Fq { q }),
        (MetricArg::Fq, None) => Err(CliError::new(
            EXIT_UNSUPPORTED,
            "--metric fq requires --q",
        )),
        (MetricArg::F2, None) => Ok(Metric::F2),
        (MetricArg::F1, None) => Err(CliError::new(
            EXIT_UNSUPPORTED,
            "F1 minimization is an open problem with no exact solver; minimize under f2 or fq \
             and read the F1 upper bounds reported at that optimum",
        )),
        (MetricArg::F2 | MetricArg::F1, Some(_)) => Err(CliError::new(
            EXIT_UNSUPPORTED,
            "--q applies only to --metric fq",
        )),
    }
}

fn cmd_minimize(
    input: &PathBuf,
    metric: MetricArg,
    q: Option<f64>,
    solver: SolverArg,
    workers: usize,
    output: Option<&PathBuf>,
) -> Result<u8, CliError> {
    let (doc, phases) = load_input(input)?;
    let metric = resolve_metric(metric, q)?;
    metric.validate().map_err(lib_error)?;

    let start = Instant::now();
    let result: GeodesicResult = match solver {
        SolverArg::Rounding => rounding_result(&phases, &metric).map_err(lib_error)?,
        SolverArg::Brute => minimize_brute(&phases, &metric).map_err(lib_error)?,
        SolverArg::Bnb => minimize_bnb_with(&phases, &metric, BnbOptions { workers })
            .map_err(lib_error)?,
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;

    let report = ResultDocument::new(doc, &metric, &result, wall_ms).map_err(lib_error)?;
    emit(&to_json(&report), output)?;
    Ok(0)
}

fn parse_sigma(text: Option<&str>) -> Result<PauliMask, CliError> {
    let Some(text) = text else {
        return Ok(pauli_geodesic::family::default_sigma());
    };
    let text = text.trim();
    let parsed = if let Some(bits) = text.strip_prefix("0b") {
        usize::from_str_radix(bits, 2)
    } else if let Some(hex) = text.strip_prefix("0x") {
        usize::from_str_radix(hex, 16)
    } else {
        text.parse()
    };
    parsed
        .map(PauliMask)
        .map_err(|e| CliError::new(EXIT_PARSE, format!("cannot parse sigma {text:?}: {e}")))
}

fn cmd_family(
    n: usize,
    sigma: Option<&str>,
    epsilon: f64,
    q_list: &[f64],
    output: Option<&PathBuf>,
) -> Result<u8, CliError> {
    let sigma = parse_sigma(sigma)?;
    let instance = FamilyInstance::new(n, sigma, epsilon).map_err(lib_error)?;
    let q_list: Vec<f64> = if q_list.is_empty() {
        vec![1.0, 8.0, 64.0, 512.0]
    } else {
        q_list.to_vec()
    };
    let report = family_report(&instance, &q_list).map_err(lib_error)?;
    emit(&to_json(&report), output)?;
    Ok(0)
}

fn cmd_verify(suite: &str, trials: usize, seed: u64, n_max: usize) -> Result<u8, CliError> {
    let suite: Suite = suite
        .parse()
        .map_err(|e: GeoError| CliError::new(EXIT_PARSE, e.to_string()))?;
    let report = run_suite(
        suite,
        &SuiteOptions {
            seed,
            trials,
            n_max,
        },
    );
    print!("{}", report.text);
    Ok(if report.pass { 0 } else { EXIT_VERIFY_FAIL })
}

/// The benchmark instance: canonical phases of the weight-3 family
/// pattern (truncated to the register width below n = 3).
fn bench_phases(n: usize) -> PhaseVector {
    let big_n = 1usize << n;
    let mask = 0b111 & (big_n - 1);
    let amp = PI / big_n as f64;
    let phases = (0..big_n)
        .map(|k| {
            if (k & mask).count_ones().is_multiple_of(2) {
                amp
            } else {
                -amp
            }
        })
        .collect();
    PhaseVector::new(n, phases)
        .expect("bench phases are finite and sized")
        .canonicalized()
}

fn cmd_bench(solvers: &[SolverArg], n: usize, q: Option<f64>, repeat: usize) -> Result<u8, CliError> {
    if n > pauli_geodesic::lattice::BNB_MAX_QUBITS {
        return Err(lib_error(GeoError::TooLarge {
            solver: "bnb",
            reason: format!(
                "n = {n} exceeds the limit {}",
                pauli_geodesic::lattice::BNB_MAX_QUBITS
            ),
        }));
    }
    let q = q.unwrap_or_else(|| 4f64.powi(n as i32));
    let metric = Metric::Fq { q };
    let phases = bench_phases(n);

    let mut rows = Vec::with_capacity(solvers.len() * repeat);
    for &solver in solvers {
        for run in 0..repeat {
            let start = Instant::now();
            let result = match solver {
                SolverArg::Rounding => rounding_result(&phases, &metric),
                SolverArg::Brute => minimize_brute(&phases, &metric),
                SolverArg::Bnb => minimize_bnb_with(&phases, &metric, BnbOptions::default()),
            }
            .map_err(lib_error)?;
            rows.push(BenchRow {
                solver: result.solver,
                n,
                q,
                run,
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
                length: result.length,
            });
        }
    }

    // All solvers minimize the same instance; their lengths must agree.
    // (Rounding is only guaranteed optimal at q = 1, but the family
    // instance is rounding-optimal at every q.)
    let min = rows.iter().map(|r| r.length).fold(f64::INFINITY, f64::min);
    let max = rows.iter().map(|r| r.length).fold(0.0f64, f64::max);
    if max - min > 1e-9 {
        return Err(CliError::new(
            EXIT_INVARIANT,
            format!("solver lengths disagree: spread {:.3e} exceeds 1e-9", max - min),
        ));
    }

    emit(&bench_csv(&rows), None)?;
    Ok(0)
}
