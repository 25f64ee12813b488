//! `hypersum`: evaluate, verify, and benchmark nested power sums from the shell.
//!
//! Exit codes: 0 success, 1 verification or comparison failure,
//! 2 usage error, 3 external-data error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypersum_core::oeis::{BASE_URL_ENV, DEFAULT_BASE_URL, FIXTURE_DIR_ENV};
use hypersum_core::{EvalMethod, IdentityId};

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DATA: u8 = 3;

const DEFAULT_FIXTURE_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/oeis");

#[derive(Debug, Parser)]
#[command(name = "hypersum", version, about = "Exact k-fold nested sums of integer powers")]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    /// Print only the essential result
    #[arg(long, short, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate F(n, m, k) with one method or all of them
    Eval(EvalArgs),
    /// Print F(., m, k) as a polynomial in n
    Poly(PolyArgs),
    /// Check the identities over a parameter grid
    Verify(VerifyArgs),
    /// Compare named special cases against OEIS b-files
    OeisCheck(OeisArgs),
    /// Time the evaluation methods over a grid
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    One(EvalMethod),
    All,
}

fn parse_method_choice(s: &str) -> Result<MethodChoice, String> {
    if s == "all" {
        Ok(MethodChoice::All)
    } else {
        s.parse().map(MethodChoice::One)
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Upper summation limit
    #[arg(long)]
    pub n: u64,
    /// Power
    #[arg(long)]
    pub m: u32,
    /// Nesting depth (at least 1)
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: u32,
    /// direct, closed, theorem, cereceda, polynomial, or all
    #[arg(long, default_value = "closed", value_parser = parse_method_choice)]
    pub method: MethodChoice,
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: u32,
    /// Render the text output as LaTeX
    #[arg(long)]
    pub latex: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    pub n_max: u64,
    #[arg(long, default_value_t = 8)]
    pub m_max: u32,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    pub k_max: u32,
    /// Restrict to these identities (repeatable); default is all
    #[arg(long = "identity", value_parser = |s: &str| s.parse::<IdentityId>())]
    pub identities: Vec<IdentityId>,
}

#[derive(Debug, Args)]
pub struct OeisArgs {
    /// Restrict to these sequences (repeatable); default is every binding
    #[arg(long = "sequence")]
    pub sequences: Vec<String>,
    /// Terms to compare, starting at n = 1
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    /// Fetch from the OEIS server instead of the fixture directory
    #[arg(long)]
    pub remote: bool,
    #[arg(long, env = BASE_URL_ENV, default_value = DEFAULT_BASE_URL)]
    pub base_url: String,
    #[arg(long, env = FIXTURE_DIR_ENV, default_value = DEFAULT_FIXTURE_DIR)]
    pub fixture_dir: PathBuf,
    /// With --remote, write the fetched b-files into the fixture directory
    #[arg(long, requires = "remote")]
    pub save_fixtures: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub n_max: u64,
    #[arg(long, default_value_t = 5)]
    pub m_max: u32,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub k_max: u32,
    /// Comma-separated methods; default is all five
    #[arg(long, value_delimiter = ',', value_parser = |s: &str| s.parse::<EvalMethod>())]
    pub methods: Vec<EvalMethod>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub repetitions: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let code = match &cli.command {
        Command::Eval(args) => commands::eval(&cli, args),
        Command::Poly(args) => commands::poly(&cli, args),
        Command::Verify(args) => commands::verify(&cli, args),
        Command::OeisCheck(args) => commands::oeis_check(&cli, args),
        Command::Bench(args) => commands::bench(&cli, args),
    };
    ExitCode::from(code)
}
