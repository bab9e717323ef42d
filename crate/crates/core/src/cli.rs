//! Command-line front end.
//!
//! Exit codes: 0 success or safe, 1 unsafe, 2 usage or parse error,
//! 3 cap or oracle envelope exceeded. Relation ids are printed in file
//! order, facts in lexicographic order.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::inference::{combined_minsets, InferenceError, Reasoner, DEFAULT_SUPPORT_CAP};
use crate::ontology::{parse_minsets, parse_ontology, parse_sensitive, Ontology, SensitiveSpec};
use crate::oracle::OracleError;
use crate::solver::{sanitize_traced, Method, SolveParams, SolverError};

pub const EXIT_SAFE: i32 = 0;
pub const EXIT_UNSAFE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "safereason",
    version,
    about = "Inference-safe ontology publishing"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print every fact derivable from the ontology.
    Closure { input: PathBuf },
    /// Check whether a set of relations derives a sensitive fact.
    Check {
        input: PathBuf,
        #[arg(long)]
        sensitive: PathBuf,
        /// Comma-separated relation ids; defaults to all relations.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<String>>,
    },
    /// List the minimal relation sets deriving each sensitive fact.
    Explain {
        input: PathBuf,
        #[arg(long)]
        sensitive: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SUPPORT_CAP)]
        cap: usize,
    },
    /// Choose a maximum-weight safe subset of relations.
    Sanitize {
        input: PathBuf,
        #[arg(long)]
        sensitive: PathBuf,
        /// Precomputed minimal sets; computed from the ontology when absent.
        #[arg(long)]
        minsets: Option<PathBuf>,
        #[arg(long, default_value = "augment")]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_SUPPORT_CAP)]
        cap: usize,
        /// Write the final border graph of the augment method here.
        #[arg(long)]
        dump_border: Option<PathBuf>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<InferenceError> for Failure {
    fn from(e: InferenceError) -> Self {
        let code = match e {
            InferenceError::CapExceeded { .. } => EXIT_LIMIT,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        let code = match e {
            SolverError::Oracle(OracleError::EnvelopeExceeded { .. }) => EXIT_LIMIT,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let mut buf = String::new();
    match execute(&cli.command, &mut buf) {
        Ok(code) => {
            let _ = out.write_all(buf.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_ontology(path: &Path) -> Result<Ontology, Failure> {
    parse_ontology(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_sensitive(path: &Path) -> Result<SensitiveSpec, Failure> {
    parse_sensitive(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn id_line(keyword: &str, ontology: &Ontology, positions: &BTreeSet<usize>) -> String {
    let mut line = keyword.to_string();
    for id in ontology.ids(positions) {
        line.push(' ');
        line.push_str(id);
    }
    line.push('\n');
    line
}

fn execute(command: &Command, out: &mut String) -> Result<i32, Failure> {
    match command {
        Command::Closure { input } => {
            let ontology = load_ontology(input)?;
            for fact in Reasoner::new(&ontology).full_closure() {
                out.push_str(&format!("{fact}\n"));
            }
            Ok(EXIT_SAFE)
        }
        Command::Check {
            input,
            sensitive,
            subset,
        } => {
            let ontology = load_ontology(input)?;
            let sensitive = load_sensitive(sensitive)?;
            let reasoner = Reasoner::new(&ontology);
            let q = match subset {
                Some(ids) => reasoner.positions(ids)?,
                None => (0..ontology.len()).collect(),
            };
            let report = reasoner.is_safe(&q, &sensitive)?;
            match report.witness {
                None => {
                    out.push_str("SAFE true\n");
                    Ok(EXIT_SAFE)
                }
                Some(w) => {
                    out.push_str("SAFE false\n");
                    out.push_str(&id_line(
                        &format!("WITNESS {} FROM", w.fact),
                        &ontology,
                        &w.support,
                    ));
                    Ok(EXIT_UNSAFE)
                }
            }
        }
        Command::Explain {
            input,
            sensitive,
            cap,
        } => {
            let ontology = load_ontology(input)?;
            let sensitive = load_sensitive(sensitive)?;
            let per_fact = Reasoner::new(&ontology).support_sets(&sensitive, *cap)?;
            for (fact, family) in &per_fact {
                out.push_str(&format!("FACT {fact}\n"));
                let mut lines: Vec<String> = family
                    .sets()
                    .iter()
                    .map(|s| id_line("MINSET", &ontology, s))
                    .collect();
                lines.sort();
                out.push_str(&lines.concat());
            }
            Ok(EXIT_SAFE)
        }
        Command::Sanitize {
            input,
            sensitive,
            minsets,
            method,
            cap,
            dump_border,
        } => {
            let ontology = load_ontology(input)?;
            let sensitive = load_sensitive(sensitive)?;
            let family = match minsets {
                Some(path) => parse_minsets(&read(path)?, &ontology)
                    .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
                None => combined_minsets(&Reasoner::new(&ontology).support_sets(&sensitive, *cap)?),
            };
            let (result, dump) =
                sanitize_traced(&ontology, &family, *method, &SolveParams::default())?;
            if let Some(path) = dump_border {
                std::fs::write(path, dump.unwrap_or_default())
                    .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            }
            out.push_str(&id_line("KEEP", &ontology, &result.kept));
            out.push_str(&id_line("REMOVE", &ontology, &result.removed));
            out.push_str(&format!("WEIGHT {}\n", result.weight));
            out.push_str(&format!("METHOD {}\n", result.method));
            out.push_str(&format!("OPTIMAL {}\n", result.optimal));
            Ok(EXIT_SAFE)
        }
    }
}
