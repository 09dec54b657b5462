//! Command-line front end for block entanglement spectra of valence-bond-solid
//! chains.
//!
//! [`run`] parses arguments, executes one command and renders the resulting
//! [`report::Document`]; the binary only forwards its outcome.

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

pub mod args;
pub mod commands;
pub mod config;
pub mod report;
pub mod verify;

use args::{Cli, Command, Format};
use report::Document;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// A run that could not produce a document.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Usage(String),
    ResourceCap(String),
    /// A numerical routine broke down.
    Compute(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::ResourceCap(_) => EXIT_RESOURCE,
            Failure::Compute(_) => EXIT_VERIFICATION,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::ResourceCap(m) | Failure::Compute(m) => m,
        }
    }
}

impl From<aklt_core::Error> for Failure {
    fn from(e: aklt_core::Error) -> Self {
        match e {
            aklt_core::Error::InvalidArgument(m) => Failure::Usage(m),
            aklt_core::Error::ResourceCap { .. } => Failure::ResourceCap(format!("{e}; raise --max-dim or shrink the instance")),
            other => Failure::Compute(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(code: i32, message: impl Into<String>) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: message.into(),
        }
    }
}

pub fn execute(command: &Command) -> Result<Document, Failure> {
    match command {
        Command::Spectrum(a) => commands::run_spectrum(a),
        Command::Entropy(a) => commands::run_entropy(a),
        Command::Sweep(a) => commands::run_sweep(a),
        Command::Verify(a) => verify::run_verify(a),
    }
}

pub fn render(doc: &Document) -> String {
    match doc.config.format {
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv(),
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome::error(EXIT_USAGE, text),
            };
        }
    };
    let doc = match execute(&cli.command) {
        Ok(d) => d,
        Err(f) => return Outcome::error(f.exit_code(), format!("error: {}\n", f.message())),
    };
    let text = render(&doc);
    let (code, stderr) = match doc.first_failure() {
        None => (EXIT_OK, String::new()),
        Some(c) => (EXIT_VERIFICATION, format!("verification failed: {} {}\n", c.suite, c.name)),
    };
    let out = match &cli.command {
        Command::Spectrum(a) => &a.common.out,
        Command::Entropy(a) => &a.common.out,
        Command::Sweep(a) => &a.common.out,
        Command::Verify(a) => &a.common.out,
    };
    match out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome {
                code,
                stdout: String::new(),
                stderr,
            },
            Err(e) => Outcome::error(EXIT_USAGE, format!("error: cannot write {}: {e}\n", path.display())),
        },
        None => Outcome {
            code,
            stdout: text,
            stderr,
        },
    }
}
