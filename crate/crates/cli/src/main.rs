//! `aszeta`: zeta functions, point counts and automorphisms of Artin-Schreier curves `y^p - y = x R(x)`.

mod cache;
mod error;
mod output;
mod report;
mod search;
mod spec;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use aszeta_core::Limits;

use crate::cache::{Cache, Entry};
use crate::error::{CliError, CliResult};
use crate::output::write_csv;
use crate::search::{Filter, SearchParams};
use crate::spec::{read_input, CurveSpec};
use crate::verify::Preset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Common {
    /// Curve spec: a file path, inline JSON, or `-` for stdin.
    #[arg(long)]
    input: Option<String>,
    /// Extension degrees s, comma separated.
    #[arg(long, value_delimiter = ',')]
    s: Vec<usize>,
    /// Largest number of field elements any single enumeration may visit.
    #[arg(long, env = "ASZETA_BUDGET", default_value_t = aszeta_core::curve::DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// JSON-lines results cache.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full report for one curve.
    Analyze {
        #[command(flatten)]
        common: Common,
    },
    /// Brute-force point counts with the Hasse-Weil window.
    Count {
        #[command(flatten)]
        common: Common,
    },
    /// L-polynomials and classifications.
    Lpoly {
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate every additive R of degree p^h over F_{p^r}.
    Search {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        h: usize,
        #[arg(long, value_enum, default_value_t = Filter::All)]
        filter: Filter,
    },
    /// Run the cross-check suite on a curve or a preset.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, conflicts_with = "input")]
        preset: Option<Preset>,
        #[arg(long, hide = true)]
        corrupt_b: bool,
    },
}

#[derive(Parser, Debug)]
#[command(name = "aszeta", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Analyze { common }
            | Command::Count { common }
            | Command::Lpoly { common }
            | Command::Search { common, .. }
            | Command::Verify { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Count { .. } => "count",
            Command::Lpoly { .. } => "lpoly",
            Command::Search { .. } => "search",
            Command::Verify { .. } => "verify",
        }
    }
}

fn load_spec(common: &Common) -> CliResult<CurveSpec> {
    let arg = common.input.as_deref().ok_or_else(|| CliError::Parse("--input is required".into()))?;
    CurveSpec::from_text(&read_input(arg)?)
}

/// Everything that determines the records, normalized for the cache key.
fn request(cmd: &Command, spec: Option<&CurveSpec>) -> Value {
    let c = cmd.common();
    let mut args = json!({ "s": c.s, "budget": c.budget });
    if let Some(spec) = spec {
        args["spec"] = spec.to_json();
    }
    match cmd {
        Command::Search { p, r, h, filter, .. } => {
            args["search"] = json!({ "p": p, "r": r, "h": h, "filter": filter.as_str() });
        }
        Command::Verify { preset, corrupt_b, .. } => {
            args["preset"] = json!(preset.map(Preset::as_str));
            args["corrupt_b"] = json!(corrupt_b);
        }
        _ => {}
    }
    args
}

fn compute(cmd: &Command, spec: Option<&CurveSpec>, limits: &Limits) -> CliResult<Entry> {
    let s = &cmd.common().s;
    let spec = || spec.ok_or_else(|| CliError::Parse("--input is required".into()));
    match cmd {
        Command::Analyze { .. } => {
            let rep = report::analyze(spec()?, s, limits, false)?;
            report::validate_report(&rep)?;
            let exit = if rep["ok"] == true { 0 } else { 4 };
            Ok(Entry { records: vec![rep], exit })
        }
        Command::Count { .. } => Ok(Entry { records: report::count(spec()?, s, limits)?, exit: 0 }),
        Command::Lpoly { .. } => Ok(Entry { records: report::lpoly(spec()?, s, limits)?, exit: 0 }),
        Command::Search { p, r, h, filter, .. } => {
            let params = SearchParams { p: *p, r: *r, h: *h, s: s.clone(), filter: *filter };
            Ok(Entry { records: search::search(&params, limits)?, exit: 0 })
        }
        Command::Verify { preset, corrupt_b, .. } => {
            let rec = match preset {
                Some(p) => verify::verify_preset(*p, limits)?,
                None => verify::verify_spec(spec()?, s, *corrupt_b, limits)?,
            };
            let exit = if rec["ok"] == true { 0 } else { 1 };
            Ok(Entry { records: vec![rec], exit })
        }
    }
}

fn render(cmd: &Command, format: Format, records: &[Value]) -> CliResult<String> {
    let single = matches!(cmd, Command::Analyze { .. } | Command::Verify { .. });
    match format {
        Format::Json if single => {
            Ok(records.iter().map(|r| serde_json::to_string_pretty(r).expect("json") + "\n").collect())
        }
        Format::Json => Ok(records.iter().map(|r| r.to_string() + "\n").collect()),
        Format::Csv => {
            let (header, rows): (&[&str], Vec<Vec<String>>) = match cmd {
                Command::Analyze { .. } => (report::ANALYZE_CSV, records.iter().flat_map(report::analyze_rows).collect()),
                Command::Count { .. } => (report::COUNT_CSV, records.iter().map(report::count_row).collect()),
                Command::Lpoly { .. } => (report::LPOLY_CSV, records.iter().map(report::lpoly_row).collect()),
                Command::Search { .. } => (search::SEARCH_CSV, records.iter().map(search::search_row).collect()),
                Command::Verify { .. } => (verify::VERIFY_CSV, records.iter().flat_map(verify::verify_rows).collect()),
            };
            write_csv(header, &rows)
        }
    }
}

fn failure_message(cmd: &Command, records: &[Value]) -> String {
    let first = records
        .iter()
        .flat_map(|r| r.get("checks").or_else(|| r.get("results")).and_then(Value::as_array).cloned().unwrap_or_default())
        .find(|c| c["status"] == "fail");
    match first {
        Some(c) => format!("{} failed: {c}", cmd.name()),
        None => format!("{} failed", cmd.name()),
    }
}

fn run(cli: &Cli) -> CliResult<i32> {
    let cmd = &cli.command;
    let common = cmd.common();
    if let Some(n) = common.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::Parse(format!("--jobs: {e}")))?;
    }
    let limits = Limits::with_budget(common.budget);
    let spec = match (cmd, &common.input) {
        (Command::Search { .. }, _) => None,
        (Command::Verify { preset: Some(_), .. }, _) => None,
        _ => Some(load_spec(common)?),
    };

    let cache = common.cache.as_deref().map(Cache::new);
    let key = cache::key(cmd.name(), &request(cmd, spec.as_ref()));
    let entry = match cache.as_ref().and_then(|c| c.get(&key)) {
        Some(e) => e,
        None => {
            let e = compute(cmd, spec.as_ref(), &limits)?;
            if let Some(c) = &cache {
                c.put(&key, &e)?;
            }
            e
        }
    };

    let text = render(cmd, common.format, &entry.records)?;
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    if entry.exit != 0 {
        eprintln!("aszeta: {}", failure_message(cmd, &entry.records));
    }
    Ok(entry.exit)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("aszeta: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
