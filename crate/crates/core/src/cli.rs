//! The `tropmat` command line.
//!
//! Exit codes: 0 success, 2 malformed input, 3 mathematical failure (a
//! check failed or a precondition such as "is a TOM" does not hold),
//! 4 enumeration limit exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::duality::{
    check_arrangement_axioms, check_slice_structure, dual_complex, pseudohyperplane,
};
use crate::error::Error;
use crate::io::{
    detect_kind, subdivision_from_json, subdivision_to_json, tom_from_json, tom_to_json,
    topes_from_json, weights_from_json, DocumentKind, FORMAT,
};
use crate::mixsd::{mixsd_contraction, mixsd_deletion, reconstruct_from_topes};
use crate::realize::realizable_tom;
use crate::svg::{render_arrangement, render_subdivision};
use crate::tom::{check_tom, tom_contraction, tom_deletion};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_MATH: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "tropmat",
    version,
    about = "Tropical oriented matroids and mixed subdivisions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the types of the arrangement given by a weight matrix.
    Gen {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the four axioms on a type collection.
    CheckTom {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Validate a mixed subdivision.
    CheckMixsd {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also compare the summed cell volumes with n^(d-1).
        #[arg(long)]
        volume_check: bool,
    },
    /// Rebuild a subdivision from its vertex topes.
    Reconstruct {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short)]
        n: usize,
        #[arg(short)]
        d: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Delete a coordinate from a type collection or subdivision.
    Delete {
        #[arg(short, long)]
        input: PathBuf,
        /// 1-based coordinate.
        #[arg(long)]
        coord: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Contract a letter of a type collection or subdivision.
    Contract {
        #[arg(short, long)]
        input: PathBuf,
        /// 1-based letter.
        #[arg(long)]
        letter: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Dual complex, pseudohyperplane slices and arrangement-axiom report.
    Dualize {
        #[arg(short, long)]
        input: PathBuf,
        /// Report only this 1-based slice.
        #[arg(long)]
        slice: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw a subdivision or an arrangement (d = 3).
    Render {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: RenderMode,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RenderMode {
    Subdivision,
    Arrangement,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::LimitExceeded(_) => EXIT_LIMIT,
        Error::NotATom(_) | Error::NotFullDim(_) | Error::InvalidSubdivision(_) => EXIT_MATH,
        _ => EXIT_INPUT,
    }
}

struct Outcome {
    body: String,
    code: i32,
}

impl Outcome {
    fn json(v: &Value, passed: bool) -> Self {
        Self {
            body: serde_json::to_string_pretty(v).expect("serializable") + "\n",
            code: if passed { EXIT_OK } else { EXIT_MATH },
        }
    }
}

fn read(path: &Path) -> crate::Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn tagged<T: serde::Serialize>(report: &T) -> Value {
    let mut v = serde_json::to_value(report).expect("serializable");
    if let Value::Object(o) = &mut v {
        o.insert("format".into(), json!(FORMAT));
    }
    v
}

fn dualize(text: &str, slice: Option<usize>) -> crate::Result<Outcome> {
    let s = subdivision_from_json(text)?;
    let dual = dual_complex(&s)?;
    let axioms = check_arrangement_axioms(&dual)?;
    let indices: Vec<usize> = match slice {
        Some(i) => vec![i],
        None => (1..=s.n()).collect(),
    };
    let mut slices = Vec::new();
    let mut structure = Vec::new();
    let mut passed = axioms.passed();
    for &i in &indices {
        let sl = pseudohyperplane(&s, i)?;
        passed &= !sl.is_empty();
        slices.push(serde_json::to_value(&sl)?);
        if s.d() == 3 {
            let r = check_slice_structure(&s, i)?;
            passed &= r.passed();
            structure.push(serde_json::to_value(&r)?);
        }
    }
    let incidence: Vec<[usize; 2]> = dual.incidence().iter().map(|&(a, b)| [a, b]).collect();
    let v = json!({
        "format": FORMAT,
        "n": s.n(),
        "d": s.d(),
        "dual": dual.cells(),
        "incidence": incidence,
        "slices": slices,
        "slice_structure": structure,
        "arrangement_axioms": axioms,
    });
    Ok(Outcome::json(&v, passed))
}

fn execute(cmd: &Command) -> crate::Result<(Outcome, Option<PathBuf>)> {
    Ok(match cmd {
        Command::Gen { input, output } => {
            let w = weights_from_json(&read(input)?)?;
            (
                Outcome::json(&tom_to_json(&realizable_tom(&w)?), true),
                output.clone(),
            )
        }
        Command::CheckTom { input, output } => {
            let m = tom_from_json(&read(input)?)?;
            let r = check_tom(&m)?;
            (Outcome::json(&tagged(&r), r.passed()), output.clone())
        }
        Command::CheckMixsd {
            input,
            output,
            volume_check,
        } => {
            let s = subdivision_from_json(&read(input)?)?;
            let r = s.validate(*volume_check)?;
            (Outcome::json(&tagged(&r), r.passed()), output.clone())
        }
        Command::Reconstruct {
            input,
            n,
            d,
            output,
        } => {
            let topes = topes_from_json(&read(input)?, *n, *d)?;
            let s = reconstruct_from_topes(&topes, *n, *d)?;
            (
                Outcome::json(&subdivision_to_json(&s, true), true),
                output.clone(),
            )
        }
        Command::Delete {
            input,
            coord,
            output,
        } => {
            let text = read(input)?;
            let v = match detect_kind(&text)? {
                DocumentKind::Tom => tom_to_json(&tom_deletion(&tom_from_json(&text)?, *coord)?),
                DocumentKind::Subdivision => subdivision_to_json(
                    &mixsd_deletion(&subdivision_from_json(&text)?, *coord)?,
                    true,
                ),
                other => {
                    return Err(Error::Parse(format!(
                        "cannot delete from a {other:?} document"
                    )))
                }
            };
            (Outcome::json(&v, true), output.clone())
        }
        Command::Contract {
            input,
            letter,
            output,
        } => {
            let text = read(input)?;
            let v = match detect_kind(&text)? {
                DocumentKind::Tom => {
                    tom_to_json(&tom_contraction(&tom_from_json(&text)?, *letter)?)
                }
                DocumentKind::Subdivision => subdivision_to_json(
                    &mixsd_contraction(&subdivision_from_json(&text)?, *letter)?,
                    true,
                ),
                other => {
                    return Err(Error::Parse(format!(
                        "cannot contract a {other:?} document"
                    )))
                }
            };
            (Outcome::json(&v, true), output.clone())
        }
        Command::Dualize {
            input,
            slice,
            output,
        } => (dualize(&read(input)?, *slice)?, output.clone()),
        Command::Render {
            input,
            mode,
            output,
        } => {
            let text = read(input)?;
            let scene = match mode {
                RenderMode::Subdivision => render_subdivision(&subdivision_from_json(&text)?)?,
                RenderMode::Arrangement => render_arrangement(&weights_from_json(&text)?)?,
            };
            (
                Outcome {
                    body: scene.to_svg(),
                    code: EXIT_OK,
                },
                Some(output.clone()),
            )
        }
    })
}

/// Runs one command, writing results to `-o` or `out` and diagnostics to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (outcome, path) = match execute(&cli.command) {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let Error::NotATom(report) = &e {
                let _ = writeln!(err, "{}", tagged(report.as_ref()));
            }
            return exit_code(&e);
        }
    };
    let written = match path {
        Some(p) => fs::write(&p, outcome.body.as_bytes()),
        None => out.write_all(outcome.body.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return EXIT_INPUT;
    }
    outcome.code
}

/// Parses arguments and runs; usage errors exit with 2, `--help` with 0.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            code
        }
    }
}
