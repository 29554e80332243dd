//! Command-line front end. [`run`] is the whole program minus process
//! plumbing, so tests drive it directly.

use std::ffi::OsString;
use std::fmt;

use clap::Parser;
use serde_json::{json, Value};

mod args;
mod batch;
mod commands;
mod table;

pub use args::DEFAULT_BUDGET;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const VERIFICATION: i32 = 2;
    pub const BUDGET: i32 = 3;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl RunOutput {
    /// Parses standard output as JSON.
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or(Value::Null)
    }
}

/// What a command produced: a JSON body, an exit code and optionally a
/// human table for terminals.
pub(crate) struct Response {
    pub body: Value,
    pub code: i32,
    pub table: Option<String>,
}

impl Response {
    pub fn ok(body: Value) -> Self {
        Response {
            body,
            code: exit::OK,
            table: None,
        }
    }
}

#[derive(Debug)]
pub(crate) struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: exit::USAGE,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<mingens_core::Error> for Failure {
    fn from(e: mingens_core::Error) -> Self {
        let code = match e {
            mingens_core::Error::BudgetExhausted { .. } => exit::BUDGET,
            _ => exit::USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// The manifest embedded in every JSON output.
pub(crate) fn manifest(command: &str, params: Value, field: Option<Value>, seed: Option<u64>, outcome: Value) -> Value {
    json!({
        "command": command,
        "params": params,
        "field": field,
        "seed": seed,
        "version": VERSION,
        "outcome": outcome,
    })
}

/// Runs the program on `argv` (including the program name). `tty` selects
/// table output for commands that have one.
pub fn run<I, T>(argv: I, tty: bool) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                RunOutput {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                RunOutput {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let as_table = tty && !cli.json;
    match commands::dispatch(cli.command) {
        Ok(resp) => {
            let stdout = match (&resp.table, as_table) {
                (Some(t), true) => t.clone(),
                _ => {
                    let mut s = serde_json::to_string_pretty(&resp.body).expect("serializable");
                    s.push('\n');
                    s
                }
            };
            let stderr = match resp.code {
                exit::VERIFICATION => "verification failed\n".to_string(),
                exit::BUDGET => "search budget exhausted\n".to_string(),
                _ => String::new(),
            };
            RunOutput {
                code: resp.code,
                stdout,
                stderr,
            }
        }
        Err(f) => RunOutput {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {f}\n"),
        },
    }
}
