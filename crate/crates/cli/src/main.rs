//! `ladderkit` command-line front end.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ladderkit", version, about = "Factorization-method ladders, Rodrigues formulas and wavefunctions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build one eigenfunction by both routes and compare them.
    Derive(DeriveArgs),
    /// Run the identity, recurrence, eigenvalue and quadrature suites.
    Verify(VerifyArgs),
    /// Print the factorization-chain energy grid.
    Chain(ChainArgs),
    /// Tabulate a wavefunction on a grid of points.
    Eval(EvalArgs),
    /// Parse, normal-order and render operator expressions.
    Expr(ExprArgs),
    /// Print polynomial coefficient tables.
    Table(TableArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Latex,
    Csv,
}

/// System and quantum numbers. `--n` is the principal number; `--l` and
/// `--m` select the angular level; `--k` is the chain depth.
#[derive(Args, Debug, Clone)]
pub struct StateArgs {
    #[arg(long)]
    pub system: String,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub l: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<i64>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long = "max-level", default_value_t = 12)]
    pub max_level: u32,
}

#[derive(Args, Debug)]
pub struct DeriveArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Binary precision of decimal constants.
    #[arg(long, default_value_t = 64)]
    pub precision: u32,
    /// Also show the printed 3D Coulomb prefactor and its quadrature norm.
    #[arg(long = "compare-printed-coulomb")]
    pub compare_printed_coulomb: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// A system name or `all`.
    #[arg(long, default_value = "all")]
    pub system: String,
    #[arg(long = "max-level", default_value_t = 12)]
    pub max_level: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "compare-printed-coulomb")]
    pub compare_printed_coulomb: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Include per-check wall times (output is then not reproducible).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Args, Debug)]
pub struct ChainArgs {
    #[arg(long)]
    pub system: String,
    #[arg(long = "max-level", default_value_t = 12)]
    pub max_level: u32,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// `start:end:step`
    #[arg(long, default_value = "0:10:0.5", allow_hyphen_values = true)]
    pub points: String,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct ExprArgs {
    /// Expression to evaluate; repeatable. Without it, lines are read from stdin.
    #[arg(short = 'e', long = "expr", allow_hyphen_values = true)]
    pub exprs: Vec<String>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long)]
    pub system: String,
    #[arg(long)]
    pub l: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<i64>,
    /// Highest chain depth (degree) listed.
    #[arg(long = "max-level", default_value_t = 6)]
    pub max_level: u32,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Derive(a) => commands::derive(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Chain(a) => commands::chain(&a),
        Command::Eval(a) => commands::eval(&a),
        Command::Expr(a) => commands::expr(&a),
        Command::Table(a) => commands::table(&a),
    };
    match outcome {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(exit_code(&out))
        }
        Err(commands::Failure { message, stdout }) => {
            print!("{stdout}");
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn exit_code(out: &commands::Outcome) -> u8 {
    if out.ok {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_checks_exit_with_one() {
        let out = |ok| commands::Outcome { stdout: String::new(), ok };
        assert_eq!(exit_code(&out(true)), 0);
        assert_eq!(exit_code(&out(false)), 1);
    }
}
