//! `khovlab` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 guard
//! violation or computation error.

mod cache;
mod commands;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

/// Version of every JSON document and cache file this binary writes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "khovlab",
    version,
    about = "Exact sumset, Ehrhart and Khovanskii computations for multiplication tables"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Directory for cached growth sequences and Ehrhart data.
    #[arg(long, global = true, env = "KHOVLAB_CACHE", value_name = "DIR")]
    cache: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List M_n: the exponent vectors of 1..=n.
    Mn {
        #[arg(long)]
        n: u64,
    },
    /// Number of distinct products of k factors from 1..=n.
    Pkn {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: usize,
    },
    /// Growth sequence p(0..=kmax, n) with its finite differences.
    Sequence {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        kmax: usize,
    },
    /// Fit the eventual polynomial of p(k, n) and report where it starts.
    Fit {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        kmax: usize,
        /// Values checked beyond the fitted ones [default: d + 2].
        #[arg(long)]
        window: Option<usize>,
    },
    /// Ehrhart polynomial and volume of Q_n.
    Ehrhart {
        #[arg(long)]
        n: u64,
    },
    /// Check p(k, n) <= L(Q_n, k) <= p(k + d, n) for k = 1..=kmax.
    Sandwich {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        kmax: u64,
    },
    /// Compare k * int(Q) with int(kQ) for Q_n or a half-space simplex.
    #[command(group(ArgGroup::new("polytope").required(true).args(["n", "halfspace"])))]
    Closedness {
        #[arg(long)]
        n: Option<u64>,
        /// Simplex {x >= 0 : c . x <= r} given as c1,c2,...:r
        #[arg(long, value_name = "C1,C2,..:R")]
        halfspace: Option<String>,
        /// Largest k tested [default: max(d - 1, 1)].
        #[arg(long)]
        kmax: Option<u64>,
    },
    /// Khovanskii threshold bounds and the empirical threshold for Q_n.
    Threshold {
        #[arg(long)]
        n: u64,
        /// Length of the growth sequence [default: 2d + 4].
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Run the verification suite for n up to nmax.
    Verify {
        #[arg(long)]
        nmax: u64,
        #[arg(long, value_enum, default_value_t = LevelArg::Fast)]
        level: LevelArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut src = source::Source::new(cli.cache.map(cache::Cache::new));
    match commands::run(&cli.command, &mut src) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&out.json)
                        .expect("JSON values always serialize");
                    s.push('\n');
                    s
                }
                Format::Table => out.table,
            };
            print!("{text}");
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(3)
        }
    }
}
