use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use eulersum::Error;

mod cache;
mod commands;
mod report;

use report::{Format, Report};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "eulersum", version, about = "Euler T-sums and S-sums to arbitrary precision")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Significant decimal digits requested.
    #[arg(long, global = true, default_value_t = 30)]
    pub digits: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Term budget for series evaluation.
    #[arg(long, global = true, env = "EULERSUM_MAX_TERMS", default_value_t = eulersum::Budget::DEFAULT_MAX_TERMS)]
    pub max_terms: u64,

    /// Directory holding the constant memo snapshot.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    /// Leave `timing_ms` out so output is byte-stable.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate one sum numerically.
    Eval(EvalArgs),
    /// Closed form of a linear sum.
    Closed(LinearArgs),
    /// Closed form against direct summation.
    Crosscheck(LinearArgs),
    /// Residual of a residue identity.
    VerifyTheorem(TheoremArgs),
    /// Kernel expansion against the kernel.
    LemmaCheck(LemmaArgs),
    /// Every determined linear case up to a weight.
    Table(TableArgs),
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub kind: String,
    /// Inner exponents, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub exps: Vec<i64>,
    /// 0/1 per inner exponent.
    #[arg(long, value_delimiter = ',')]
    pub bars: Vec<u8>,
    #[arg(long)]
    pub q: i64,
    #[arg(long)]
    pub qbar: bool,
    #[arg(long, default_value = "extrapolate")]
    pub method: String,
}

#[derive(Args, Debug)]
pub struct LinearArgs {
    #[arg(long)]
    pub kind: String,
    /// plain, bar_p, bar_p_bar_q, bar_q or 1..4.
    #[arg(long, default_value = "plain")]
    pub variant: String,
    #[arg(long)]
    pub p: i64,
    #[arg(long)]
    pub q: i64,
}

#[derive(Args, Debug)]
pub struct TheoremArgs {
    #[arg(long)]
    pub thm: String,
    #[arg(long)]
    pub p: i64,
    /// Middle exponent of the quadratic identities.
    #[arg(long)]
    pub m: Option<i64>,
    #[arg(long)]
    pub q: i64,
    #[arg(long = "A", default_value = "a1")]
    pub a: String,
    #[arg(long = "B", default_value = "a1")]
    pub b: String,
    #[arg(long = "C", default_value = "a1")]
    pub c: String,
}

#[derive(Args, Debug)]
pub struct LemmaArgs {
    #[arg(long)]
    pub lemma: String,
    #[arg(long, default_value = "a1")]
    pub seq: String,
    #[arg(long, default_value_t = 1)]
    pub order: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub n: i64,
    /// Sample point; defaults to a quarter from the centre.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    #[arg(long, default_value_t = 12)]
    pub terms: u32,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long)]
    pub max_weight: i64,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExhausted(_) | Error::ResourceLimit(_) => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

fn run(cli: &Cli) -> Result<(Report, u8), Error> {
    if let Some(dir) = &cli.cache_dir {
        cache::load(dir)?;
    }
    let start = Instant::now();
    let mut report = commands::execute(cli)?;
    if !cli.no_timing {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    if let Some(dir) = &cli.cache_dir {
        cache::save(dir)?;
    }
    let code = if report.pass == Some(false) { EXIT_FAIL } else { 0 };
    Ok((report, code))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, code)) => match report.render(cli.format) {
            Ok(text) => {
                print!("{text}");
                ExitCode::from(code)
            }
            Err(e) => {
                eprintln!("eulersum: {e}");
                ExitCode::from(EXIT_FAIL)
            }
        },
        Err(e) => {
            eprintln!("eulersum: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
