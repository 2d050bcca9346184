use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use khr_cli::*;
use khr_core::hochschild::EulerNormalization;
use khr_core::verify::{verify_all, Suite, VerifyConfig};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "khr", version, about = "Triply graded link homology via Soergel bimodules")]
struct Cli {
    #[arg(long, value_enum, default_value_t = FormatArg::Text, global = true)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct BraidArgs {
    /// Strand count.
    #[arg(long)]
    n: Option<usize>,
    /// Whitespace-separated signed generators, e.g. "1 -2 1".
    #[arg(long, allow_hyphen_values = true)]
    braid: Option<String>,
    /// JSON file of the form {"n": 3, "word": [1, -2]}.
    #[arg(long, conflicts_with_all = ["n", "braid"])]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// HOMFLY-PT polynomial of the braid closure and the raw trace.
    Homfly {
        #[command(flatten)]
        braid: BraidArgs,
    },
    /// Rouquier complex of a braid, per cohomological degree.
    Rouquier {
        #[command(flatten)]
        braid: BraidArgs,
        #[arg(long)]
        minimize: bool,
        /// Directory for memoized minimized complexes.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Triply graded homology table up to an internal degree.
    Hhh {
        #[command(flatten)]
        braid: BraidArgs,
        #[arg(long, env = "KHR_MAX_DEGREE", default_value_t = DEFAULT_MAX_DEGREE,
              value_parser = clap::value_parser!(i64).range(0..))]
        max_degree: i64,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Run verification suites; exits nonzero if any executed check fails.
    Verify {
        #[arg(long, value_enum, default_values_t = [SuiteArg::All])]
        suite: Vec<SuiteArg>,
        #[arg(long, value_enum)]
        skip: Vec<SuiteArg>,
        #[arg(long, env = "KHR_MAX_DEGREE", default_value_t = DEFAULT_MAX_DEGREE,
              value_parser = clap::value_parser!(i64).range(0..))]
        max_degree: i64,
        /// Wall-clock budget for the rank-two cone suite.
        #[arg(long, default_value_t = 1800)]
        a2_budget_secs: u64,
        /// Override the Euler-bridge power of v (negative control).
        #[arg(long, hide = true, allow_hyphen_values = true)]
        euler_v_power: Option<i64>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Weights,
    Jm,
    Euler,
    Markov,
    A1,
    A2,
    All,
}

fn expand(args: &[SuiteArg]) -> Vec<Suite> {
    let mut out: Vec<Suite> = Vec::new();
    for a in args {
        let add: Vec<Suite> = match a {
            SuiteArg::All => Suite::ALL.to_vec(),
            SuiteArg::Weights => vec![Suite::Weights],
            SuiteArg::Jm => vec![Suite::Jm],
            SuiteArg::Euler => vec![Suite::Euler],
            SuiteArg::Markov => vec![Suite::Markov],
            SuiteArg::A1 => vec![Suite::A1],
            SuiteArg::A2 => vec![Suite::A2],
        };
        for s in add {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

fn json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("reports serialize") + "\n"
}

fn braid_of(a: &BraidArgs) -> Result<khr_core::braid::BraidWord, String> {
    read_braid(a.n, a.braid.as_deref(), a.input.as_deref())
}

fn cache_of(dir: &Option<PathBuf>) -> Result<Option<ComplexCache>, String> {
    dir.as_ref().map(|d| ComplexCache::new(d).map_err(|e| format!("{}: {e}", d.display()))).transpose()
}

fn run(cli: Cli) -> Result<(String, bool), String> {
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    let csv_only_for_tables = || Err("--format csv is only available for hhh".to_string());
    match cli.command {
        Command::Homfly { braid } => {
            let r = homfly_report(&braid_of(&braid)?);
            match format {
                Format::Text => Ok((r.text(), true)),
                Format::Json => Ok((json(&r), true)),
                Format::Csv => csv_only_for_tables(),
            }
        }
        Command::Rouquier { braid, minimize, cache } => {
            let r = rouquier_report(&braid_of(&braid)?, minimize, cache_of(&cache)?.as_ref())?;
            match format {
                Format::Text => Ok((rouquier_text(&r), true)),
                Format::Json => Ok((json(&r), true)),
                Format::Csv => csv_only_for_tables(),
            }
        }
        Command::Hhh { braid, max_degree, cache } => {
            let r = hhh_report(&braid_of(&braid)?, max_degree, cache_of(&cache)?.as_ref())?;
            let ok = r.euler_check.matches;
            match format {
                Format::Text => Ok((r.text(), ok)),
                Format::Json => Ok((json(&r), ok)),
                Format::Csv => Ok((r.table.to_csv(), ok)),
            }
        }
        Command::Verify { suite, skip, max_degree, a2_budget_secs, euler_v_power } => {
            let mut cfg = VerifyConfig {
                max_degree,
                suites: expand(&suite),
                skip: expand(&skip).into_iter().collect::<BTreeSet<_>>(),
                a2_budget: Duration::from_secs(a2_budget_secs),
                ..VerifyConfig::default()
            };
            if let Some(p) = euler_v_power {
                cfg.euler_normalization = EulerNormalization { v_power: p, ..cfg.euler_normalization };
            }
            let r = verify_all(&cfg);
            match format {
                Format::Text => Ok((verify_text(&r), r.passed)),
                Format::Json => Ok((json(&r), r.passed)),
                Format::Csv => csv_only_for_tables(),
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
