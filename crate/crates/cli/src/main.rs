//! `projsimple`: wildness, projective simplicity and GK-dimension for
//! automorphisms of modeled abelian varieties.
//!
//! Exit codes: 0 on success, 1 on a domain error (or a failing selfcheck),
//! 2 on malformed input or usage errors.

use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use projsimple::classify::{analyze, SCHEMA_VERSION};
use projsimple::error::Error;
use projsimple::json::dec_u64;
use projsimple::linalg::{charpoly, snf, IntMatrix};
use projsimple::model::{generates_set, Point, VarietyModel};
use projsimple::num_action::{gk_outcome, p_matrix, p_sigma, GkOutcome, NumAction};
use projsimple::selfcheck::run_selfcheck;
use projsimple::unipotency::{
    max_quasi_unipotent_order, power_conjugacy_witness, quasi_unipotency,
};
use projsimple::wildness::Automorphism;

mod render;

#[derive(Parser)]
#[command(
    name = "projsimple",
    version,
    about = "Wild automorphisms of abelian varieties, exactly"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Human,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for a variety and automorphism.
    Analyze(InputArg),
    /// Smith normal form D = U M V.
    Snf(MatrixArg),
    /// Characteristic polynomial det(xI - M).
    Charpoly(MatrixArg),
    /// Cyclotomic quasi-unipotency verdict plus a power-conjugacy scan.
    Quasiunipotent {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Largest power scanned; defaults to twice the maximal order.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Action on Num(E x E) of the automorphism given by a 2x2 matrix.
    NumAction(MatrixArg),
    /// Num action and GK-dimension for a variety and automorphism.
    Gk(InputArg),
    /// Whether a set of points generates the variety.
    Generates(InputArg),
    /// Run the built-in property suite.
    Selfcheck {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
    },
}

#[derive(Args)]
struct InputArg {
    /// JSON input file ("-" for standard input).
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct MatrixArg {
    /// Inline matrix, e.g. '[["1","1"],["0","1"]]'.
    #[arg(long)]
    matrix: Option<String>,
    /// JSON file holding a matrix.
    #[arg(long)]
    input: Option<PathBuf>,
}

enum Failure {
    Domain(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn read_source(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        return io::read_to_string(io::stdin()).map_err(|e| Failure::Input(format!("stdin: {e}")));
    }
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Input(format!("malformed {what}: {e}")))
}

impl MatrixArg {
    fn load(&self) -> Result<IntMatrix, Failure> {
        let text = match (&self.matrix, &self.input) {
            (Some(m), _) => m.clone(),
            (None, Some(p)) => read_source(p)?,
            (None, None) => return Err(Failure::Input("a matrix is required".into())),
        };
        parse(&text, "matrix")
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalysisInput {
    schema_version: String,
    variety: VarietyModel,
    automorphism: Automorphism,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GenerationInput {
    schema_version: String,
    variety: VarietyModel,
    points: Vec<Point>,
}

fn check_version(v: &str) -> Result<(), Failure> {
    if v != SCHEMA_VERSION {
        return Err(Failure::Input(format!(
            "unsupported schema_version {v:?}, expected {SCHEMA_VERSION:?}"
        )));
    }
    Ok(())
}

fn load_analysis(arg: &InputArg) -> Result<(VarietyModel, Automorphism), Failure> {
    let input: AnalysisInput = parse(&read_source(&arg.input)?, "analysis input")?;
    check_version(&input.schema_version)?;
    let sigma = input.automorphism.validated(&input.variety)?;
    Ok((input.variety, sigma))
}

#[derive(Serialize)]
struct GkReport {
    schema_version: String,
    num_action: NumAction,
    gk: GkOutcome,
}

#[derive(Serialize)]
struct ConjugacyWitness {
    #[serde(with = "dec_u64")]
    p: u64,
    #[serde(with = "dec_u64")]
    q: u64,
}

#[derive(Serialize)]
struct QuasiUnipotencyReport {
    verdict: projsimple::unipotency::QuasiUnipotencyVerdict,
    #[serde(with = "dec_u64")]
    bound: u64,
    /// `None` is inconclusive, never a proof of non-quasi-unipotency.
    power_conjugacy_witness: Option<ConjugacyWitness>,
}

#[derive(Serialize)]
struct NumActionReport {
    p_matrix: IntMatrix,
    quasi_unipotency: projsimple::unipotency::QuasiUnipotencyVerdict,
    #[serde(with = "projsimple::json::dec_opt_u64")]
    j: Option<u64>,
    gk: GkOutcome,
    note: String,
}

/// The report to emit, and whether the command counts as successful.
fn execute(cli: &Cli) -> Result<(Value, bool), Failure> {
    let (value, ok) = match &cli.command {
        Command::Analyze(arg) => {
            let (x, sigma) = load_analysis(arg)?;
            (to_value(&analyze(&x, &sigma)?)?, true)
        }
        Command::Snf(m) => (to_value(&snf(&m.load()?))?, true),
        Command::Charpoly(m) => (to_value(&charpoly(&m.load()?)?)?, true),
        Command::Quasiunipotent { matrix, bound } => {
            let m = matrix.load()?;
            let verdict = quasi_unipotency(&m)?;
            let bound = match bound {
                Some(b) => *b,
                None => 2 * max_quasi_unipotent_order(m.rows())?,
            };
            let witness =
                power_conjugacy_witness(&m, bound)?.map(|(p, q)| ConjugacyWitness { p, q });
            let report = QuasiUnipotencyReport {
                verdict,
                bound,
                power_conjugacy_witness: witness,
            };
            (to_value(&report)?, true)
        }
        Command::NumAction(m) => {
            let p = p_matrix(&m.load()?)?;
            let action = NumAction::ExplicitMatrix { matrix: p.clone() };
            let gk = gk_outcome(2, &action)?;
            let j = gk.result().and_then(|r| r.j);
            let note = match &gk {
                GkOutcome::Computed(_) => {
                    "GK-dimension of B(E x E, L, sigma) for wild sigma with this linear part"
                }
                _ => "P is not quasi-unipotent: no sigma-ample sheaf exists",
            };
            let report = NumActionReport {
                quasi_unipotency: quasi_unipotency(&p)?,
                p_matrix: p,
                j,
                gk,
                note: note.into(),
            };
            (to_value(&report)?, true)
        }
        Command::Gk(arg) => {
            let (x, sigma) = load_analysis(arg)?;
            let action = p_sigma(&x, &sigma)?;
            let report = GkReport {
                schema_version: SCHEMA_VERSION.into(),
                gk: gk_outcome(x.dim(), &action)?,
                num_action: action,
            };
            (to_value(&report)?, true)
        }
        Command::Generates(arg) => {
            let input: GenerationInput = parse(&read_source(&arg.input)?, "generation input")?;
            check_version(&input.schema_version)?;
            (
                to_value(&generates_set(&input.variety, &input.points)?)?,
                true,
            )
        }
        Command::Selfcheck { seed, trials } => {
            let report = run_selfcheck(*seed, *trials);
            let ok = report.passed;
            (to_value(&report)?, ok)
        }
    };
    Ok((value, ok))
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure::Domain(format!("serialization: {e}")))
}

fn emit(cli: &Cli, value: &Value) -> io::Result<()> {
    let text = match cli.format {
        Format::Json => {
            serde_json::to_string_pretty(value).expect("values always serialize") + "\n"
        }
        Format::Human => {
            let color = cli.output.is_none()
                && std::env::var_os("NO_COLOR").is_none()
                && io::stdout().is_terminal();
            render::human(value, color)
        }
    };
    match &cli.output {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok((value, ok)) => {
            if let Err(e) = emit(&cli, &value) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
