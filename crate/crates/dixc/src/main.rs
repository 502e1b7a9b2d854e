use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dixc::bound::{run_bound, BoundRequest, DecodingChoice, GroupingChoice, Query, Scheme};
use dixc::enumerate::run_enumerate;
use dixc::error::{read_file, Error, Result};
use dixc::format::{decoding_from_json, groups_from_json, parse_cap, parse_weights, problem_from_json, DecodingDoc};
use dixc::render::{render_bound, render_listing, render_reports, Format};
use dixc::repro::{self, ReproId};
use dixc_core::inner::DEFAULT_SEARCH_BUDGET;
use dixc_core::{parse_problem, ProblemInstance};
use num_traits::Signed;

#[derive(Parser)]
#[command(name = "dixc", version, about = "Rate-region bounds for distributed index coding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an outer bound or a composite coding scheme.
    Bound(BoundArgs),
    /// Recompute a stored table and diff it cell by cell.
    Repro(ReproArgs),
    /// List problems, optionally with inner and outer regions.
    Enumerate(EnumerateArgs),
}

#[derive(Args)]
struct Common {
    /// Output format: json, csv or text.
    #[arg(long, default_value = "text")]
    format: Format,
    /// Maximum number of decoding configurations to visit.
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
    search_budget: u128,
}

#[derive(Args)]
struct BoundArgs {
    /// Problem in compact form, e.g. "(1|3);(2|1);(3|2)".
    #[arg(short, long, conflicts_with = "problem_file", required_unless_present = "problem_file")]
    problem: Option<String>,
    /// Problem as a JSON document.
    #[arg(long)]
    problem_file: Option<PathBuf>,
    /// Server capacity override, e.g. 2,3=1/2.
    #[arg(long = "cap", value_name = "K=V")]
    caps: Vec<String>,
    #[arg(short, long)]
    scheme: Scheme,
    /// Comma-separated nonnegative weights, one per receiver.
    #[arg(long, conflicts_with = "region", required_unless_present = "region")]
    weights: Option<String>,
    /// Print the whole region instead of one support value.
    #[arg(long)]
    region: bool,
    /// Server grouping: a JSON file or preset:table3.
    #[arg(long, conflicts_with = "search_groupings")]
    grouping: Option<String>,
    /// Decoding sets: a JSON file, rule:table2 or preset:table3.
    #[arg(long)]
    decoding: Option<String>,
    /// Search all server groupings (at most 3 receivers).
    #[arg(long)]
    search_groupings: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ReproArgs {
    /// One or more of table1, table2, table3, eq9, example1, n4text.
    #[arg(required = true)]
    ids: Vec<ReproId>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(short, default_value_t = 3)]
    n: usize,
    /// One representative per isomorphism class.
    #[arg(long)]
    up_to_iso: bool,
    /// Compare the outer bound with joint composite coding on every 0/1 direction.
    #[arg(long)]
    with_regions: bool,
    #[command(flatten)]
    common: Common,
}

fn load_problem(args: &BoundArgs) -> Result<ProblemInstance> {
    let overrides = args.caps.iter().map(|c| parse_cap(c)).collect::<Result<Vec<_>>>()?;
    match (&args.problem, &args.problem_file) {
        (Some(text), _) => Ok(parse_problem(text, &overrides)?),
        (None, Some(path)) => {
            let mut p = problem_from_json(&read_file(path)?)?;
            for (server, value) in overrides {
                p.set_capacity(server, value)?;
            }
            Ok(p)
        }
        (None, None) => Err(Error::Usage("a problem is required (-p or --problem-file)".into())),
    }
}

fn bound(args: BoundArgs) -> Result<String> {
    let problem = load_problem(&args)?;
    let n = problem.n();
    let query = match &args.weights {
        Some(w) => {
            let weights = parse_weights(w, n)?;
            if let Some(bad) = weights.iter().find(|x| x.is_negative()) {
                return Err(dixc_core::Error::NegativeWeight(bad.to_string()).into());
            }
            Query::Direction(weights)
        }
        None => Query::Region,
    };
    let mut preset = None;
    let grouping = match args.grouping.as_deref() {
        None if args.search_groupings => Some(GroupingChoice::Search),
        None => None,
        Some("preset:table3") => {
            preset = Some(dixc::presets::TABLE3_DECODING);
            Some(GroupingChoice::Groups(groups_from_json(dixc::presets::TABLE3_GROUPING, n)?))
        }
        Some(other) if other.starts_with("preset:") => {
            return Err(Error::Usage(format!("unknown grouping preset {other:?}")));
        }
        Some(path) => Some(GroupingChoice::Groups(groups_from_json(&read_file(Path::new(path))?, n)?)),
    };
    let decoding = match args.decoding.as_deref() {
        None => match preset {
            Some(text) => DecodingChoice::Document(decoding_from_json(text, n)?),
            None => DecodingChoice::Search,
        },
        Some("rule:table2") => DecodingChoice::Table2Rule,
        Some("preset:table3") => DecodingChoice::Document(decoding_from_json(dixc::presets::TABLE3_DECODING, n)?),
        Some(other) if other.starts_with("rule:") || other.starts_with("preset:") => {
            return Err(Error::Usage(format!("unknown decoding rule {other:?}")));
        }
        Some(path) => DecodingChoice::Document(decoding_from_json(&read_file(Path::new(path))?, n)?),
    };
    if let DecodingChoice::Document(DecodingDoc::PerGroup(_)) = &decoding {
        if grouping.is_none() && args.scheme != Scheme::CcJoint {
            return Err(Error::Usage("per-group decoding sets need --grouping".into()));
        }
    }
    let request = BoundRequest {
        problem,
        scheme: args.scheme,
        query,
        grouping,
        decoding,
        budget: args.common.search_budget,
    };
    Ok(render_bound(&run_bound(&request)?, args.common.format))
}

fn repro(args: ReproArgs) -> Result<(String, bool)> {
    let reports = args
        .ids
        .iter()
        .map(|id| repro::run(*id, args.common.search_budget))
        .collect::<Result<Vec<_>>>()?;
    let passed = reports.iter().all(|r| r.passed());
    Ok((render_reports(&reports, args.common.format), passed))
}

fn enumerate(args: EnumerateArgs) -> Result<String> {
    let list = run_enumerate(args.n, args.up_to_iso, args.with_regions, args.common.search_budget)?;
    Ok(render_listing(&list, args.common.format))
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("DIXC_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::Usage(format!("DIXC_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Usage(e.to_string()))
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Bound(args) => bound(args).map(|text| (text, true)),
        Command::Repro(args) => repro(args),
        Command::Enumerate(args) => enumerate(args).map(|text| (text, true)),
    });
    match result {
        Ok((text, passed)) => {
            emit(&text);
            if passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("dixc: reproduction mismatch");
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("dixc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
