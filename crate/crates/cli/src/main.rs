use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use aztec_tilings::checks::{run_check, CheckName, CheckParams};
use aztec_tilings::enumerate::Limits;
use aztec_tilings::graphs::{count_perfect_matchings, emit_dot, GraphFamily};
use aztec_tilings::grid::{Family, RegionSpec};
use aztec_tilings::padic::{Status, Verdict};
use aztec_tilings::store::{CountError, Counter, ResultStore, StoreError};
use aztec_tilings::survey::{
    self, compare_to_reported, run_survey, SurveyRow, VALUATION_WATCH_CODES,
};
use aztec_tilings::tiles::TileSet;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const EXIT_FAILS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_INSUFFICIENT: u8 = 4;

/// Exact tiling counts on Aztec diamonds and rectangles, with 2-adic checks.
#[derive(Debug, Parser)]
#[command(name = "tilings", version)]
struct Cli {
    /// Neither read nor write the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Result cache file.
    #[arg(
        long,
        global = true,
        env = "TILINGS_CACHE",
        default_value = "tilings-cache.json"
    )]
    cache: PathBuf,
    /// Abort with exit code 3 after this many seconds.
    #[arg(long, global = true, value_name = "SECONDS")]
    time_limit: Option<f64>,
    /// Abort with exit code 3 once this many frontier states are live.
    #[arg(long, global = true, value_name = "N")]
    max_states: Option<usize>,
    /// Recompute cached counts and fail if they disagree.
    #[arg(long, global = true)]
    verify_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Weighted tiling count of one region.
    Count {
        /// aztec:N, aztechalf:N:top|bottom or rect:WxH
        #[arg(long)]
        region: RegionSpec,
        /// Six-bit code (e.g. 100010) or a list such as `skew:h,square` or `domino,square*-1`
        #[arg(long)]
        tiles: TileSet,
    },
    /// Counts over a family of regions.
    Sequence {
        /// aztec, aztechalf:top|bottom, rect2nx2n, rect2nx2n+2 or rect2nx4n
        #[arg(long)]
        family: Family,
        #[arg(long)]
        tiles: TileSet,
        #[arg(long, default_value_t = 0)]
        min_n: u32,
        #[arg(long)]
        max_n: u32,
        #[arg(long, value_enum, default_value_t = SequenceFormat::Plain)]
        format: SequenceFormat,
    },
    /// Run a named check and print its verdict as JSON.
    Verify {
        #[arg(value_parser = parse_check)]
        check: CheckName,
        #[arg(long)]
        max_n: Option<u32>,
        /// Single 2-adic exponent to test.
        #[arg(long)]
        k: Option<u32>,
    },
    /// Parity survey of all 63 six-bit tile sets.
    Survey {
        #[arg(long, default_value_t = survey::DEFAULT_MAX_N,
              value_parser = clap::value_parser!(u32).range(1..))]
        max_n: u32,
        #[arg(long, value_enum, default_value_t = TableFormat::Plain)]
        format: TableFormat,
        /// Append the verdict on the known classifications.
        #[arg(long)]
        compare: bool,
    },
    /// Brick graphs derived from the horizontal domino tiling.
    Graph {
        kind: GraphFamily,
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        order: u32,
        #[arg(value_enum)]
        action: GraphAction,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SequenceFormat {
    Plain,
    Bfile,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Plain,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GraphAction {
    EmitDot,
    MatchCount,
}

fn parse_check(s: &str) -> Result<CheckName, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = CheckName::ALL.iter().map(|c| c.as_str()).collect();
        format!("unknown check `{s}` (expected one of {})", names.join(", "))
    })
}

fn open_store(cli: &Cli) -> Option<ResultStore> {
    if cli.no_cache {
        return None;
    }
    match ResultStore::open(&cli.cache) {
        Ok(store) => Some(store),
        Err(
            e @ (StoreError::Parse { .. }
            | StoreError::Version { .. }
            | StoreError::BadCount { .. }),
        ) => {
            eprintln!("warning: {e}; starting a fresh cache");
            Some(ResultStore::fresh(&cli.cache))
        }
        Err(e) => {
            eprintln!("warning: {e}; caching disabled");
            None
        }
    }
}

fn limits(cli: &Cli) -> Result<Limits, String> {
    let deadline = match cli.time_limit {
        Some(secs) if !(secs.is_finite() && secs >= 0.0) => {
            return Err(format!("invalid --time-limit {secs}"));
        }
        Some(secs) => Some(Instant::now() + Duration::from_secs_f64(secs)),
        None => None,
    };
    Ok(Limits {
        max_states: cli.max_states,
        deadline,
    })
}

fn status_code(status: Status) -> u8 {
    match status {
        Status::HoldsOnRange => 0,
        Status::Fails => EXIT_FAILS,
        Status::InsufficientData => EXIT_INSUFFICIENT,
    }
}

fn count_error_code(e: &CountError) -> u8 {
    match e {
        CountError::Enumerate(_) => EXIT_RESOURCE,
        CountError::CacheMismatch { .. } => EXIT_FAILS,
    }
}

fn survey_json(rows: &[SurveyRow], max_n: u32, verdict: Option<&Verdict>) -> Value {
    let rows: Vec<Value> = rows
        .iter()
        .map(|row| {
            let mut obj = json!({
                "code": row.code,
                "counts": row.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "tags": row.tags().iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            });
            if VALUATION_WATCH_CODES.contains(&row.code.as_str()) {
                obj["v2"] = json!(row.v2_sequence());
            }
            obj
        })
        .collect();
    let mut out = json!({ "max_n": max_n, "rows": rows });
    if let Some(v) = verdict {
        out["verdict"] = serde_json::to_value(v).expect("verdicts serialize");
    }
    out
}

fn survey_plain(rows: &[SurveyRow]) -> String {
    let mut out = String::from("code\tcounts\ttags\n");
    for row in rows {
        let counts: Vec<String> = row.counts.iter().map(|c| c.to_string()).collect();
        let tags: Vec<String> = row.tags().iter().map(|t| t.to_string()).collect();
        out.push_str(&format!(
            "{}\t{}\t{}",
            row.code,
            counts.join(","),
            tags.join(",")
        ));
        if VALUATION_WATCH_CODES.contains(&row.code.as_str()) {
            let v2: Vec<String> = row
                .v2_sequence()
                .iter()
                .map(|v| v.map_or_else(|| "inf".to_string(), |v| v.to_string()))
                .collect();
            out.push_str(&format!("\tv2={}", v2.join(",")));
        }
        out.push('\n');
    }
    out
}

/// Runs a command, returning stdout text and the exit code.
fn execute(command: &Command, counter: &Counter) -> Result<(String, u8), CountError> {
    Ok(match command {
        Command::Count { region, tiles } => {
            let count = counter.count(&region.build(), tiles)?;
            (format!("{count}\n"), 0)
        }
        Command::Sequence {
            family,
            tiles,
            min_n,
            max_n,
            format,
        } => {
            let counts = counter.sequence(*family, tiles, *min_n, *max_n)?;
            let text = match format {
                SequenceFormat::Plain => {
                    let parts: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
                    format!("{}\n", parts.join(","))
                }
                SequenceFormat::Bfile => counts
                    .iter()
                    .zip(*min_n..)
                    .map(|(c, n)| format!("{n} {c}\n"))
                    .collect(),
                SequenceFormat::Json => {
                    let parts: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
                    format!(
                        "{}\n",
                        serde_json::to_string(&parts).expect("strings serialize")
                    )
                }
            };
            (text, 0)
        }
        Command::Verify { check, max_n, k } => {
            let verdict = run_check(
                *check,
                CheckParams {
                    max_n: *max_n,
                    k: *k,
                },
                counter,
            )?;
            (
                format!("{}\n", verdict.to_json()),
                status_code(verdict.status),
            )
        }
        Command::Survey {
            max_n,
            format,
            compare,
        } => {
            if *max_n > survey::DEFAULT_MAX_N {
                eprintln!(
                    "warning: survey beyond order {} can take a long time",
                    survey::DEFAULT_MAX_N
                );
            }
            let rows = run_survey(*max_n, counter)?;
            let verdict = compare.then(|| compare_to_reported(&rows));
            let code = verdict.as_ref().map_or(0, |v| status_code(v.status));
            let text = match format {
                TableFormat::Json => {
                    let value = survey_json(&rows, *max_n, verdict.as_ref());
                    format!(
                        "{}\n",
                        serde_json::to_string_pretty(&value).expect("json serializes")
                    )
                }
                TableFormat::Plain => {
                    let mut text = survey_plain(&rows);
                    if let Some(v) = &verdict {
                        text.push('\n');
                        text.push_str(&v.to_json());
                        text.push('\n');
                    }
                    text
                }
            };
            (text, code)
        }
        Command::Graph {
            kind,
            order,
            action,
        } => {
            let graph = kind.graph(*order);
            let text = match action {
                GraphAction::EmitDot => emit_dot(&graph),
                GraphAction::MatchCount => format!("{}\n", count_perfect_matchings(&graph)),
            };
            (text, 0)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = match limits(&cli) {
        Ok(l) => l,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let mut counter = Counter::new(limits).verifying_cache(cli.verify_cache);
    if let Some(store) = open_store(&cli) {
        counter = counter.with_store(store);
    }
    let result = execute(&cli.command, &counter);
    if let Some(mut store) = counter.into_store() {
        if let Err(e) = store.save() {
            eprintln!("warning: {e}");
        }
    }
    match result {
        Ok((text, code)) => {
            let mut stdout = io::stdout().lock();
            if stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(EXIT_FAILS);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(count_error_code(&e))
        }
    }
}
