//! Command-line front end: `gen`, `det`, `rank`, `verify`, `bench`.
//!
//! Exit codes: 0 success, 1 verification failure or benchmark disagreement,
//! 2 usage error, 3 malformed input file.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use structdet::closedform::{cauchy_det_closed, hilbert_det_closed, recognize};
use structdet::exactcore::{bit_length, det_bareiss_with, det_cofactor, format_rat, rank_fraction_free};
use structdet::families::{
    build_amatrix, build_bmatrix, build_cauchy, build_cmatrix, build_crn, build_hilbert, build_toeplitz,
    build_vmatrix, integer_cauchy_nodes,
};
use structdet::verifier::{run_suite, Suite, SuiteConfig};
use structdet::{BigRational, ExactMatrix, Execution, SequenceSpec};

mod matrix_io;

pub use matrix_io::{load_matrix, matrix_from_json, matrix_to_json, save_matrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Input(String),
    Io(String),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Input(_) | CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Io(m) | CliError::Failed(m) => m,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "structdet", version, about = "Exact determinants and ranks of structured rational matrices")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a matrix family and write it as JSON
    Gen {
        #[arg(long, value_enum)]
        family: GenFamily,
        /// nat, recip, list:a,b,..., or random:<seed>:<bound>
        #[arg(long, default_value = "nat")]
        seq: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long = "i-idx", value_delimiter = ',')]
        i_idx: Option<Vec<usize>>,
        #[arg(long = "e-idx", value_delimiter = ',')]
        e_idx: Option<Vec<usize>>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Determinant of a matrix file
    Det {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
    },
    /// Rank of a matrix file
    Rank {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Run a verification suite
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        seed: u64,
        #[arg(long = "max-n")]
        max_n: usize,
        #[arg(long = "max-r")]
        max_r: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seq: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time closed form against Bareiss elimination
    Bench {
        #[arg(long, value_enum)]
        family: BenchFamily,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        csv: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenFamily {
    Cauchy,
    Hilbert,
    Toeplitz,
    Vmatrix,
    Amatrix,
    Bmatrix,
    Cmatrix,
    Crn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Bareiss,
    Cofactor,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchFamily {
    Cauchy,
    Hilbert,
}

impl BenchFamily {
    fn name(self) -> &'static str {
        match self {
            BenchFamily::Cauchy => "cauchy",
            BenchFamily::Hilbert => "hilbert",
        }
    }
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code. Results go to `stdout`, diagnostics to
/// `stderr`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Gen { family, seq, n, r, i_idx, e_idx, out } => {
            let spec: SequenceSpec = seq.parse().map_err(usage)?;
            let m = generate(family, &spec, n, r, i_idx, e_idx)?;
            save_matrix(&m, &out)
        }
        Command::Det { input, method } => {
            let m = load_matrix(&input)?;
            let det = determinant(&m, method)?;
            emit(stdout, &format!("{}\n", format_rat(&det)))
        }
        Command::Rank { input } => {
            let m = load_matrix(&input)?;
            emit(stdout, &format!("{}\n", rank_fraction_free(&m)))
        }
        Command::Verify { suite, seed, max_n, max_r, trials, seq, format, out } => {
            let suite: Suite = suite.parse().map_err(usage)?;
            let seq = seq.map(|s| s.parse::<SequenceSpec>()).transpose().map_err(usage)?;
            let config = SuiteConfig { seed, max_n: Some(max_n), max_r, trials, seq, exec: Execution::default() };
            let report = run_suite(suite, &config).map_err(usage)?;
            let body = match format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            write_output(out.as_deref(), stdout, &body)?;
            let s = &report.summary;
            let status = if report.all_passed() { paint("PASS", "32") } else { paint("FAIL", "31") };
            let _ = writeln!(stderr, "{status} {}: {} pass, {} fail, {} errata", report.suite, s.pass, s.fail, s.errata);
            if report.all_passed() {
                Ok(())
            } else {
                Err(CliError::Failed(format!("{} case(s) failed", s.fail)))
            }
        }
        Command::Bench { family, sizes, csv } => {
            if sizes.windows(2).any(|w| w[0] > w[1]) || sizes.contains(&0) {
                return Err(usage("sizes must be positive and ascending"));
            }
            let body = bench(family, &sizes)?;
            std::fs::write(&csv, body).map_err(|e| CliError::Io(format!("{}: {e}", csv.display())))
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
}

fn write_output(path: Option<&Path>, stdout: &mut dyn Write, body: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => emit(stdout, body),
    }
}

/// ANSI colour unless `NO_COLOR` is set or stderr is not a terminal.
fn paint(text: &str, code: &str) -> String {
    if std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty()) || !std::io::stderr().is_terminal() {
        text.to_string()
    } else {
        format!("\x1b[{code}m{text}\x1b[0m")
    }
}

fn require<T>(v: Option<T>, flag: &str, family: &str) -> Result<T, CliError> {
    v.ok_or_else(|| usage(format!("--{flag} is required for {family}")))
}

fn generate(
    family: GenFamily,
    spec: &SequenceSpec,
    n: Option<usize>,
    r: Option<usize>,
    i_idx: Option<Vec<usize>>,
    e_idx: Option<Vec<usize>>,
) -> Result<ExactMatrix, CliError> {
    // default index blocks: I = 1..=rows, E the next `cols` indices
    let indices = |rows: usize, cols: usize| -> (Vec<usize>, Vec<usize>) {
        ((1..=rows).collect(), (rows + 1..=rows + cols).collect())
    };
    let pick = |name: &str, extra: usize| -> Result<(Vec<usize>, Vec<usize>), CliError> {
        match (i_idx.clone(), e_idx.clone()) {
            (Some(i), Some(e)) => Ok((i, e)),
            (None, None) => {
                let n = require(n, "n", name)?;
                Ok(indices(n + extra, n))
            }
            _ => Err(usage("--i-idx and --e-idx go together")),
        }
    };
    let positive = |n: Option<usize>, name: &str| -> Result<usize, CliError> {
        match require(n, "n", name)? {
            0 => Err(usage("--n must be positive")),
            n => Ok(n),
        }
    };
    let m = match family {
        GenFamily::Cauchy => {
            let (i, e) = pick("cauchy", 0)?;
            if i.len() != e.len() {
                return Err(usage("cauchy needs index lists of equal length"));
            }
            let terms = |idx: &[usize]| idx.iter().map(|&l| spec.term(l)).collect::<structdet::Result<Vec<_>>>();
            build_cauchy(&terms(&i).map_err(usage)?, &terms(&e).map_err(usage)?)
        }
        GenFamily::Hilbert => Ok(build_hilbert(positive(n, "hilbert")?)),
        GenFamily::Vmatrix => Ok(build_vmatrix(positive(n, "vmatrix")?)),
        GenFamily::Toeplitz => {
            let n = positive(n, "toeplitz")?;
            let diag = (1..2 * n).map(|l| spec.term(l)).collect::<structdet::Result<Vec<_>>>().map_err(usage)?;
            build_toeplitz(&diag)
        }
        GenFamily::Amatrix => {
            let (i, e) = pick("amatrix", 1)?;
            build_amatrix(spec, &i, &e)
        }
        GenFamily::Bmatrix => {
            let (i, e) = pick("bmatrix", 0)?;
            build_bmatrix(spec, &i, &e)
        }
        GenFamily::Cmatrix => build_cmatrix(spec, require(r, "r", "cmatrix")?, require(n, "n", "cmatrix")?),
        GenFamily::Crn => build_crn(spec, require(r, "r", "crn")?, require(n, "n", "crn")?),
    };
    m.map_err(usage)
}

fn determinant(m: &ExactMatrix, method: Method) -> Result<BigRational, CliError> {
    if !m.is_square() {
        return Err(usage(format!("determinant needs a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    match method {
        Method::Bareiss => det_bareiss_with(m, Execution::default()).map(|(d, _)| d).map_err(usage),
        Method::Cofactor => det_cofactor(m).map_err(usage),
        Method::ClosedForm => recognize(m)
            .map(|r| r.det)
            .ok_or_else(|| usage("no closed form recognised for this matrix (Cauchy-type or A_n-type required)")),
    }
}

/// CSV `family,n,method,wall_ns,max_bits`; both methods must agree before
/// any timing is reported.
fn bench(family: BenchFamily, sizes: &[usize]) -> Result<String, CliError> {
    let mut out = String::from("family,n,method,wall_ns,max_bits\n");
    for &n in sizes {
        let (m, closed_ns, closed) = match family {
            BenchFamily::Cauchy => {
                let (xs, ys) = integer_cauchy_nodes(n);
                let m = build_cauchy(&xs, &ys).map_err(usage)?;
                let t = Instant::now();
                let det = cauchy_det_closed(&xs, &ys).map_err(usage)?.derived_value();
                (m, t.elapsed().as_nanos(), det)
            }
            BenchFamily::Hilbert => {
                let m = build_hilbert(n);
                let t = Instant::now();
                let det = hilbert_det_closed(n);
                (m, t.elapsed().as_nanos(), det)
            }
        };
        let t = Instant::now();
        let (elim, stats) = det_bareiss_with(&m, Execution::default()).map_err(usage)?;
        let elim_ns = t.elapsed().as_nanos();
        if elim != closed {
            return Err(CliError::Failed(format!(
                "{} n={n}: closed form {} != bareiss {}",
                family.name(),
                format_rat(&closed),
                format_rat(&elim)
            )));
        }
        let name = family.name();
        let _ = writeln!(out, "{name},{n},closed-form,{closed_ns},{}", bit_length(&closed));
        let _ = writeln!(out, "{name},{n},bareiss,{elim_ns},{}", stats.max_bits);
    }
    Ok(out)
}
