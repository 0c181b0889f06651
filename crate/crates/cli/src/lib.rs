//! Argument handling and dispatch for the `toric-nash` binary.
//!
//! [`run`] takes the raw argument list and returns the exit status together
//! with what should go to stdout and stderr, so the whole front end can be
//! exercised without spawning a process.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{error::ErrorKind, Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use toric_nash::classify::Mode;
use toric_nash::newton::Characteristic;
use toric_nash::{Cone2, ContinuedFraction, Error, LatticeVector, SurfaceInput};

mod commands;
mod render;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "toric-nash", version, about = "Nash blowups of toric surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write the report to FILE instead of standard output.
    #[arg(long, value_name = "FILE", global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Continued fraction and convergent table of a surface.
    Expand(InputArgs),
    /// Charts of one blowup at every Newton vertex.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        mode: ModeArgs,
        /// Field characteristic: 0 or a prime (normalized mode only).
        #[arg(
            long = "char",
            value_name = "P",
            default_value = "0",
            allow_hyphen_values = true
        )]
        char_p: String,
    },
    /// Exhaustive check of a classification against the chart computation.
    Verify {
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, default_value_t = 6)]
        max_r: usize,
        #[arg(long, default_value_t = 6)]
        max_a: u32,
        /// Worker threads; 0 uses every available core.
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Repeated normalized blowup until every chart is smooth.
    Iterate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 10)]
        max_steps: usize,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Surface as `P/Q`, `a,b;c,d` (cone rays) or `1,a2,...` (continued fraction).
    #[arg(value_name = "INPUT", allow_hyphen_values = true)]
    positional: Option<String>,
    /// Continued fraction `1,a2,...,ar`.
    #[arg(long, value_name = "TERMS")]
    cf: Option<String>,
    /// Normal-form fraction `P/Q`.
    #[arg(long, value_name = "P/Q")]
    pq: Option<String>,
    /// Cone rays `a,b;c,d`.
    #[arg(long, value_name = "RAYS", allow_hyphen_values = true)]
    cone: Option<String>,
}

#[derive(Args, Debug)]
struct ModeArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Normalized)]
    mode: ModeArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Normalized,
    Nash,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Normalized => Mode::Normalized,
            ModeArg::Nash => Mode::Nash,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Exit status and the two output streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn failure(message: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

/// A finished report and whether it calls for the mismatch exit status.
pub(crate) struct Report {
    pub json: serde_json::Value,
    pub text: String,
    pub mismatch: bool,
}

pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: rendered,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: rendered,
                },
            };
        }
    };

    match dispatch(&cli.command) {
        Ok(report) => finish(report, cli.format, cli.out.as_deref()),
        Err(message) => Outcome::failure(message),
    }
}

/// Renders `report` and picks the exit status.
fn finish(report: Report, format: Format, out: Option<&std::path::Path>) -> Outcome {
    let body = match format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&report.json).expect("serializable")
        ),
        Format::Text => report.text,
    };
    let code = if report.mismatch {
        EXIT_MISMATCH
    } else {
        EXIT_OK
    };
    match out {
        Some(path) => match std::fs::write(path, body) {
            Ok(()) => Outcome {
                code,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => Outcome::failure(format!("cannot write {}: {e}", path.display())),
        },
        None => Outcome {
            code,
            stdout: body,
            stderr: String::new(),
        },
    }
}

fn dispatch(command: &Command) -> Result<Report, String> {
    match command {
        Command::Expand(input) => commands::expand(&parse_input(input)?),
        Command::Analyze {
            input,
            mode,
            char_p,
        } => {
            let mode = Mode::from(mode.mode);
            let char_p = parse_characteristic(char_p)?;
            if mode == Mode::Nash && !char_p.is_zero() {
                return Err(format!(
                    "--char {char_p}: nash mode is only available in characteristic 0"
                ));
            }
            commands::analyze(&parse_input(input)?, mode, char_p)
        }
        Command::Verify {
            mode,
            max_r,
            max_a,
            workers,
        } => {
            if *max_r == 0 || *max_a < 2 {
                return Err(format!(
                    "bounds --max-r {max_r} --max-a {max_a}: need max-r >= 1 and max-a >= 2"
                ));
            }
            commands::verify(*max_r, *max_a, mode.mode.into(), *workers)
        }
        Command::Iterate { input, max_steps } => {
            commands::iterate(&parse_input(input)?, *max_steps)
        }
    }
}

fn parse_characteristic(token: &str) -> Result<Characteristic, String> {
    let value: i64 = token
        .trim()
        .parse()
        .map_err(|_| format!("--char '{token}': not an integer"))?;
    Characteristic::new(value).map_err(|e| format!("--char '{token}': {e}"))
}

fn parse_input(args: &InputArgs) -> Result<SurfaceInput, String> {
    let given: Vec<(&str, &String)> = [
        ("INPUT", &args.positional),
        ("--cf", &args.cf),
        ("--pq", &args.pq),
        ("--cone", &args.cone),
    ]
    .into_iter()
    .filter_map(|(name, v)| v.as_ref().map(|v| (name, v)))
    .collect();
    match given.as_slice() {
        [] => Err("no input given; use one of INPUT, --cf, --pq, --cone".to_string()),
        [(name, text)] => {
            let kind = match *name {
                "INPUT" if text.contains(';') => "--cone",
                "INPUT" if text.contains('/') => "--pq",
                "INPUT" => "--cf",
                other => other,
            };
            match kind {
                "--cone" => parse_cone(text),
                "--pq" => parse_fraction(text),
                _ => parse_cf(text),
            }
        }
        many => Err(format!(
            "exactly one input is allowed, got {}",
            many.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
        )),
    }
}

fn parse_int(token: &str, flag: &str) -> Result<BigInt, String> {
    token
        .trim()
        .parse()
        .map_err(|_| format!("{flag}: invalid integer '{}'", token.trim()))
}

fn parse_cf(text: &str) -> Result<SurfaceInput, String> {
    let terms = text
        .split(',')
        .map(|t| parse_int(t, "--cf"))
        .collect::<Result<Vec<_>, _>>()?;
    ContinuedFraction::new(terms)
        .map(SurfaceInput::ContinuedFraction)
        .map_err(|e| format!("--cf '{text}': {e}"))
}

fn parse_fraction(text: &str) -> Result<SurfaceInput, String> {
    let Some((p, q)) = text.split_once('/') else {
        return Err(format!("--pq '{text}': expected P/Q"));
    };
    let (p, q) = (parse_int(p, "--pq")?, parse_int(q, "--pq")?);
    match toric_nash::hj_expand(&p, &q) {
        Ok(_) | Err(Error::Smooth) => Ok(SurfaceInput::Fraction(p, q)),
        Err(e) => Err(format!("--pq '{text}': {e}")),
    }
}

fn parse_cone(text: &str) -> Result<SurfaceInput, String> {
    let rays: Vec<&str> = text.split(';').collect();
    if rays.len() != 2 {
        return Err(format!("--cone '{text}': expected two rays a,b;c,d"));
    }
    let mut vectors = Vec::with_capacity(2);
    for ray in rays {
        let coords: Vec<&str> = ray.split(',').collect();
        if coords.len() != 2 {
            return Err(format!(
                "--cone: ray '{}' needs two coordinates",
                ray.trim()
            ));
        }
        vectors.push(LatticeVector::new(
            parse_int(coords[0], "--cone")?,
            parse_int(coords[1], "--cone")?,
        ));
    }
    let v = vectors.pop().unwrap();
    let u = vectors.pop().unwrap();
    Cone2::new(u, v)
        .map(SurfaceInput::Cone)
        .map_err(|e| format!("--cone '{text}': {e}"))
}
