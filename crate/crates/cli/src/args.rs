use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use aklt_core::Method;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Inclusive integer range written `n` or `a..b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntRange {
    pub start: usize,
    pub end: usize,
}

impl IntRange {
    pub fn single(n: usize) -> Self {
        IntRange { start: n, end: n }
    }

    pub fn iter(self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }

    pub fn is_single(self) -> bool {
        self.start == self.end
    }
}

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("`{t}` is not a non-negative integer"))
        };
        match s.split_once("..") {
            None => parse(s).map(IntRange::single),
            Some((a, b)) => {
                let (start, end) = (parse(a)?, parse(b)?);
                if start > end {
                    return Err(format!("range {start}..{end} is empty"));
                }
                Ok(IntRange { start, end })
            }
        }
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_single() {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}..{}", self.start, self.end)
        }
    }
}

impl Serialize for IntRange {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Conjecture1,
    Oracle,
    Hamiltonian,
    Appendix,
    All,
}

#[derive(Debug, Parser)]
#[command(name = "aklt", version, about = "Entanglement spectra of AKLT valence-bond-solid blocks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Block density-matrix eigenvalues Λ(J).
    Spectrum(SpectrumArgs),
    /// Von Neumann and Rényi entropies of the block.
    Entropy(EntropyArgs),
    /// Spectra and entropies over an (S, L) grid.
    Sweep(SweepArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Largest dense matrix an oracle may build.
    #[arg(long, default_value_t = 4096)]
    pub max_dim: usize,
    /// Write the document here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Bulk spin S.
    #[arg(long)]
    pub spin: u32,
    /// Block length L, or an inclusive range a..b.
    #[arg(long)]
    pub length: IntRange,
    /// Methods to run; with several, their agreement is checked.
    #[arg(long, value_delimiter = ',', default_value = "closed_form")]
    pub method: Vec<Method>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long)]
    pub spin: u32,
    #[arg(long)]
    pub length: IntRange,
    /// Rényi orders.
    #[arg(long, value_delimiter = ',', default_value = "0.5,2")]
    pub alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "closed_form")]
    pub method: Vec<Method>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Bulk spin S, or an inclusive range a..b.
    #[arg(long)]
    pub spin: IntRange,
    #[arg(long)]
    pub length: IntRange,
    #[arg(long, value_delimiter = ',', default_value = "0.5,2")]
    pub alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "closed_form")]
    pub method: Vec<Method>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Restrict the oracle and Hamiltonian suites to one bulk spin.
    #[arg(long)]
    pub spin: Option<u32>,
    /// Block lengths for the Hamiltonian suite.
    #[arg(long)]
    pub length: Option<IntRange>,
    /// Largest spin of the formula grid.
    #[arg(long)]
    pub max_spin: Option<u32>,
    /// Largest block length of the formula grid or the oracle runs.
    #[arg(long)]
    pub max_length: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}
