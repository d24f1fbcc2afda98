//! `branchgroups`: word problem, quotients and subgroup questions from the shell.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 parse or usage
//! error, 3 domain error, 4 unknown verdict.

mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "branchgroups", version, about = "Exact computation in Gupta-Sidki and Grigorchuk groups")]
pub struct Cli {
    /// Built-in preset id (gs3, gs5, …, grigorchuk) or path to a preset TOML file.
    #[arg(long, global = true, default_value = "gs3")]
    pub group: String,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Deepest tree level any command may act on.
    #[arg(long, global = true, default_value_t = 5)]
    pub max_level: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    JsonLines,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduce a word to normal form.
    Eval {
        word: String,
        /// Also print the root permutation and first-level sections.
        #[arg(long)]
        decomp: bool,
    },
    /// Decide whether two words are equal (the second defaults to the identity).
    Eq {
        lhs: String,
        rhs: Option<String>,
        /// Also print the root permutation and first-level sections.
        #[arg(long)]
        decomp: bool,
    },
    /// Order of an element.
    Order {
        word: String,
        #[arg(long, default_value_t = 1 << 20)]
        cap: u64,
    },
    /// Syllable length of a word.
    Len { word: String },
    /// Section of an element at a vertex, given as a digit string.
    Section { word: String, vertex: String },
    /// Portrait of an element down to a depth.
    Portrait { word: String, depth: usize },
    /// Order of the image of a subgroup in G/St(n).
    Quotient {
        level: usize,
        /// Subgroup file; the whole group when absent.
        #[arg(long)]
        gens: Option<String>,
        /// Words to sift through the quotient.
        #[arg(long)]
        contains: Vec<String>,
    },
    /// Decide whether a subgroup is finite.
    Finite { file: String },
    /// Semi-decide membership of a word in a subgroup.
    Member {
        word: String,
        file: String,
        /// Longest product of generators searched.
        #[arg(long, default_value_t = 10)]
        word_cap: usize,
    },
    /// Finite, or infinite and commensurable with G or G × G.
    Classify { file: String },
    /// Run the verification harness.
    Verify {
        /// Only run checks whose name contains this text.
        #[arg(long)]
        filter: Option<String>,
        /// Samples per randomized check.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Include wall times in json-lines output (breaks byte-identical reruns).
        #[arg(long)]
        timing: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(commands::run(&cli))
}
