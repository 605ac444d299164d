//! The `ontic` command line: resolves a model by name or definition file,
//! runs one audit, and renders the result as text or JSON.
//!
//! Every command builds a single serializable report; both output formats
//! are rendered from it, so they carry the same numbers.

mod args;
mod commands;
mod models;

use std::ffi::OsString;

use clap::Parser;
use serde::Serialize;

pub use args::{Cli, Command, Format};
pub use models::{resolve, Backend, BUILT_INS};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("unknown model {0:?}: expected one of ks, spekkens, psi-ontic-4, or a definition file")]
    UnknownModel(String),

    #[error("{path}: {source}")]
    Definition {
        path: String,
        source: ontic_core::Error,
    },

    #[error("{flag} {value:?} is not a valid {backend} scalar")]
    BadValue {
        flag: String,
        value: String,
        backend: &'static str,
    },

    #[error("{path}: {message}")]
    RayFile { path: String, message: String },

    #[error(transparent)]
    Core(#[from] ontic_core::Error),
}

/// What a run produced. `code` is 0 when every check passed, 1 when a check
/// failed, and 2 on usage, model, or parse errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// A finished report: the structured record, its text rendering, and the
/// verdict.
pub(crate) struct Rendered<T: Serialize> {
    pub record: T,
    pub text: String,
    pub pass: bool,
}

impl<T: Serialize> Rendered<T> {
    fn emit(self, format: Format) -> Outcome {
        let stdout = match format {
            Format::Text => self.text,
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.record).expect("records serialize");
                s.push('\n');
                s
            }
        };
        Outcome {
            code: if self.pass { 0 } else { 1 },
            stdout,
            stderr: String::new(),
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let result = match &cli.command {
        Command::Adequacy(a) => commands::adequacy::run(a).map(|r| r.emit(a.output.format)),
        Command::TripleTest(a) => commands::triple::run(a).map(|r| r.emit(a.output.format)),
        Command::Pipeline(a) => commands::pipeline::run(a).map(|r| r.emit(a.output.format)),
        Command::Witness(a) => commands::witness::run(a).map(|r| r.emit(a.output.format)),
    };
    result.unwrap_or_else(|e| Outcome {
        code: 2,
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    })
}
