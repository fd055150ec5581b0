use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use litt_core::chain::ChainFile;
use litt_core::error::{Error, EXIT_DATA, EXIT_EXCEPTIONAL, EXIT_INTERNAL, EXIT_USAGE};
use litt_core::litt::{GameSpec, Word};
use litt_core::oracle::{
    exact_distribution, exact_distribution_with_prefix, transfer_distribution, transfer_distribution_with_prefix,
    SimulationConfig,
};
use litt_core::report::{self, AnalyzeOptions, ChainOptions, SCAN_HEADER};

/// Edgeworth predictions and exact odds for Litt coin-flip games and
/// integer functionals of finite Markov chains.
#[derive(Parser)]
#[command(name = "litt", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Dp,
    Transfer,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a two-word game: overlaps, constants, exceptions, predictions.
    Analyze {
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// Alice's word.
        #[arg(long)]
        a: String,
        /// Bob's word.
        #[arg(long)]
        b: String,
        /// Letters tossed.
        #[arg(long)]
        n: u64,
        /// Also compute the exact law.
        #[arg(long)]
        exact: bool,
        /// Monte Carlo repetitions.
        #[arg(long, value_name = "REPS")]
        simulate: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Shorthand for `--format csv`.
        #[arg(long, conflicts_with = "format")]
        csv: bool,
        /// Shorthand for `--format json`.
        #[arg(long)]
        json: bool,
    },
    /// Tabulate every unordered pair of distinct words of one length.
    Scan {
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// Word length; every pair of this length is scanned.
        #[arg(long, required_unless_present = "pairs", conflicts_with = "pairs")]
        ell: Option<usize>,
        /// Batch file with one `A B` pair per line.
        #[arg(long, value_name = "FILE")]
        pairs: Option<PathBuf>,
        #[arg(long)]
        n: u64,
        /// Check exact win/lose equality at every horizon up to this bound.
        #[arg(long, value_name = "M")]
        exact_upto: Option<u64>,
        /// Output file (stdout when omitted).
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Worker threads (all cores when omitted).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Inspect a chain file.
    Chain {
        file: PathBuf,
        #[arg(long)]
        cumulants: bool,
        #[arg(long)]
        em4: bool,
        /// Mean first passage times.
        #[arg(long)]
        mfpt: bool,
        /// Expected visits to A before reaching B.
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        visits: Option<Vec<String>>,
    },
    /// Exact score distribution as `score,count` CSV.
    Distribution {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, requires = "b", conflicts_with = "word")]
        a: Option<String>,
        #[arg(long, requires = "a")]
        b: Option<String>,
        /// Weighted word `WORD:WEIGHT`; repeatable.
        #[arg(long = "word", value_name = "WORD:WEIGHT")]
        word: Vec<String>,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Route::Dp)]
        route: Route,
        /// Condition on the sequence starting with these letters.
        #[arg(long)]
        prefix: Option<String>,
    },
    /// Weighted multi-word game.
    Multiword {
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// Weighted word `WORD:WEIGHT`; repeatable.
        #[arg(long = "word", value_name = "WORD:WEIGHT", required = true)]
        word: Vec<String>,
        #[arg(long)]
        n: u64,
    },
}

/// Failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }

    fn data(e: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_DATA, message: e.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: e.exit_code(), message: e.to_string() }
    }
}

fn parse_weighted(q: u32, items: &[String]) -> Result<GameSpec, Failure> {
    let words = items
        .iter()
        .map(|item| {
            let (w, v) =
                item.rsplit_once(':').ok_or_else(|| Failure::usage(format!("expected WORD:WEIGHT, got `{item}`")))?;
            let weight: i64 = v.trim().parse().map_err(|_| Failure::usage(format!("bad weight in `{item}`")))?;
            Ok((Word::parse(q, w.trim())?, weight))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(GameSpec::new(q, words)?)
}

fn emit(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure { code: EXIT_INTERNAL, message: e.to_string() })
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Failure { code: EXIT_INTERNAL, message: e.to_string() })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Analyze { q, a, b, n, exact, simulate, seed, format, csv, json } => {
            let spec = GameSpec::parse_classic(q, &a, &b)?;
            let opts = AnalyzeOptions { exact, simulate: simulate.map(|reps| SimulationConfig { reps, seed }) };
            let report = report::analyze(&spec, n, opts)?;
            let as_csv = csv || (matches!(format, Format::Csv) && !json);
            if as_csv {
                let row = report::scan_row(&report.inputs.a, &report.inputs.b, n, None)?;
                emit(&format!("{}\n{}\n", SCAN_HEADER.join(","), row.csv_fields(false).join(",")))?;
            } else {
                emit(&to_json(&report)?)?;
            }
            Ok(if report.exception.is_exceptional() { EXIT_EXCEPTIONAL } else { 0 })
        }
        Command::Scan { q, ell, pairs, n, exact_upto, output, workers } => {
            let pairs = match (ell, pairs) {
                (_, Some(path)) => {
                    let text =
                        fs::read_to_string(&path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
                    report::parse_pair_batch(q, &text)?
                }
                (Some(ell), None) => report::scan_pairs(q, ell)?,
                (None, None) => return Err(Failure::usage("give --ell or --pairs")),
            };
            let mut pool = rayon::ThreadPoolBuilder::new();
            if let Some(w) = workers {
                if w == 0 {
                    return Err(Failure::usage("--workers must be at least 1"));
                }
                pool = pool.num_threads(w);
            }
            let pool = pool.build().map_err(|e| Failure { code: EXIT_INTERNAL, message: e.to_string() })?;
            let rows = pool.install(|| {
                pairs.par_iter().map(|(a, b)| report::scan_row(a, b, n, exact_upto)).collect::<Result<Vec<_>, Error>>()
            })?;
            let mut text = SCAN_HEADER.join(",");
            if exact_upto.is_some() {
                text.push_str(",exact_fair");
            }
            text.push('\n');
            for row in &rows {
                text.push_str(&row.csv_fields(exact_upto.is_some()).join(","));
                text.push('\n');
            }
            match output {
                Some(path) => fs::write(&path, text).map_err(|e| Failure::data(format!("{}: {e}", path.display())))?,
                None => emit(&text)?,
            }
            Ok(0)
        }
        Command::Chain { file, cumulants, em4, mfpt, visits } => {
            let text = fs::read_to_string(&file).map_err(|e| Failure::data(format!("{}: {e}", file.display())))?;
            let chain = ChainFile::parse(&text).map_err(Failure::data)?;
            let opts = ChainOptions { cumulants, em4, mfpt, visits: visits.map(|v| (v[0].clone(), v[1].clone())) };
            emit(&to_json(&report::chain_report(&chain, &opts)?)?)?;
            Ok(0)
        }
        Command::Distribution { q, a, b, word, n, route, prefix } => {
            let spec = match (a, b) {
                (Some(a), Some(b)) => GameSpec::parse_classic(q, &a, &b)?,
                _ if !word.is_empty() => parse_weighted(q, &word)?,
                _ => return Err(Failure::usage("give --a/--b or at least one --word")),
            };
            let dist = match (prefix, route) {
                (None, Route::Dp) => exact_distribution(&spec, n)?,
                (None, Route::Transfer) => transfer_distribution(&spec, n)?,
                (Some(p), route) => {
                    let letters = Word::parse(q, &p)?.letters().to_vec();
                    match route {
                        Route::Dp => exact_distribution_with_prefix(&spec, n, &letters)?,
                        Route::Transfer => transfer_distribution_with_prefix(&spec, n, &letters)?,
                    }
                }
            };
            emit(&dist.to_csv())?;
            Ok(0)
        }
        Command::Multiword { q, word, n } => {
            let spec = parse_weighted(q, &word)?;
            emit(&to_json(&report::multiword_report(&spec, n)?)?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("litt: error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
