use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use sweepjoin::{
    compute_gnorf, partitioned_join, run_join, ActiveSetKind, EndpointIndex, EngineConfig, Formulation, JoinOptions,
    JoinOutcome, PredicateKind, PredicateSpec, DEFAULT_LAZY_CAPACITY,
};
use sweepjoin_cli::bench::{self, ScanTiming};
use sweepjoin_cli::report::{engine_label, sequence_histogram, stats_json, SequenceHistogram};
use sweepjoin_cli::verify::{self, DEFAULT_ORACLE_CAP};
use sweepjoin_cli::{dataset, io as csvio, DatasetSpec};

#[derive(Parser)]
#[command(name = "sweepjoin", version, about = "Plane-sweeping interval joins")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic relation as CSV.
    Gen(GenArgs),
    /// Join two CSV relations.
    Join(JoinArgs),
    /// Check sweep results against the nested-loop oracle.
    Verify(VerifyArgs),
    /// Time engines and active sets.
    Bench(BenchArgs),
    /// Histogram of uninterrupted same-relation endpoint runs.
    Histogram { r: PathBuf, s: PathBuf },
    /// Dump the endpoint index of a relation.
    Index { relation: PathBuf },
}

#[derive(Args, Clone)]
struct DataArgs {
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 0.1)]
    lambda: f64,
    #[arg(long = "domain-hi", default_value_t = 1_000_000)]
    domain_hi: i64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl DataArgs {
    fn spec(&self) -> DatasetSpec {
        DatasetSpec { n: self.n, lambda: self.lambda, domain_hi: self.domain_hi, seed: self.seed }
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct PredArgs {
    /// Relation name, e.g. start-preceding, before, left-overlap, meets.
    /// Defaults to start-preceding.
    #[arg(long)]
    pred: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<i64>,
    /// Use the strict (Allen) form of the relation.
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct UsageError(String);

impl PredArgs {
    fn spec(&self) -> Result<PredicateSpec<i64>> {
        let name = self.pred.as_deref().unwrap_or("start-preceding");
        let mut kind: PredicateKind = name.parse().map_err(|e: sweepjoin::predicate::UnknownPredicate| {
            UsageError(format!("{e}; known: {}", known_predicates()))
        })?;
        if self.strict {
            kind = kind.strict_form().ok_or_else(|| UsageError(format!("{kind} has no strict form")))?;
        }
        let spec = PredicateSpec { relation: kind, delta: self.delta, epsilon: self.epsilon };
        spec.validate().map_err(|e| UsageError(e.to_string()))?;
        Ok(spec)
    }
}

fn known_predicates() -> String {
    PredicateKind::ALL.iter().map(|k| k.name()).collect::<Vec<_>>().join(", ")
}

#[derive(Copy, Clone, ValueEnum, PartialEq, Eq)]
enum EngineChoice {
    Eager,
    Lazy,
    Both,
}

#[derive(Copy, Clone, ValueEnum)]
enum ActiveSetChoice {
    Gapless,
    Chained,
}

#[derive(Copy, Clone, ValueEnum)]
enum FormulationChoice {
    StartPreceding,
    EndFollowing,
}

#[derive(Args, Clone)]
struct EngineArgs {
    #[arg(long, value_enum, default_value = "lazy")]
    engine: EngineChoice,
    #[arg(long, default_value_t = DEFAULT_LAZY_CAPACITY)]
    capacity: usize,
    #[arg(long = "active-set", value_enum, default_value = "gapless")]
    active_set: ActiveSetChoice,
    /// Sweep used for during and right overlap.
    #[arg(long, value_enum, default_value = "start-preceding")]
    formulation: FormulationChoice,
}

impl EngineArgs {
    fn engines(&self) -> Result<Vec<EngineConfig>> {
        if self.capacity == 0 {
            return Err(UsageError("--capacity must be at least 1".into()).into());
        }
        let set = match self.active_set {
            ActiveSetChoice::Gapless => ActiveSetKind::Gapless,
            ActiveSetChoice::Chained => ActiveSetKind::Chained,
        };
        let lazy = EngineConfig::lazy(self.capacity).with_active_set(set);
        let eager = EngineConfig::eager().with_active_set(set);
        Ok(match self.engine {
            EngineChoice::Eager => vec![eager],
            EngineChoice::Lazy => vec![lazy],
            EngineChoice::Both => vec![eager, lazy],
        })
    }

    fn formulation(&self) -> Formulation {
        match self.formulation {
            FormulationChoice::StartPreceding => Formulation::StartPreceding,
            FormulationChoice::EndFollowing => Formulation::EndFollowing,
        }
    }
}

#[derive(Args)]
struct JoinArgs {
    r: PathBuf,
    s: PathBuf,
    #[command(flatten)]
    pred: PredArgs,
    #[command(flatten)]
    engine: EngineArgs,
    /// Partition count; above 1 the join runs on that many threads.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Pairs file; standard output when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// JSON stats file; printed to standard error when absent.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    r: Option<PathBuf>,
    s: Option<PathBuf>,
    #[command(flatten)]
    pred: PredArgs,
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long = "oracle-cap", default_value_t = DEFAULT_ORACLE_CAP)]
    oracle_cap: usize,
    /// Check this pairs file instead of running the sweep.
    #[arg(long)]
    pairs: Option<PathBuf>,
    /// Verify every relation and bound on this many random instances.
    #[arg(long)]
    batch: Option<u64>,
    /// First seed of a batch run.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest relation in a batch instance.
    #[arg(long = "max-n", default_value_t = 200)]
    max_n: usize,
    /// Batch timestamps are drawn from [0, hi].
    #[arg(long, default_value_t = 100)]
    hi: i64,
}

#[derive(Args)]
struct BenchArgs {
    /// Relations to join; a synthetic self-join when absent.
    r: Option<PathBuf>,
    s: Option<PathBuf>,
    #[command(flatten)]
    pred: PredArgs,
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value_t = 32)]
    capacity: usize,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    /// Comma-separated sizes for a scaling run at the density of --n/--domain-hi.
    #[arg(long, value_delimiter = ',')]
    grid: Vec<usize>,
    /// Batch workload `m,a,c`: m equal s starts, a active r tuples, capacity c.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    batch: Vec<usize>,
    /// Time active-set scans over this many entries instead of a join.
    #[arg(long)]
    scan: Option<usize>,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Gen(args) => cmd_gen(args),
        Command::Join(args) => cmd_join(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Histogram { r, s } => cmd_histogram(&r, &s),
        Command::Index { relation } => {
            let rel = read(&relation)?;
            csvio::write_index(&EndpointIndex::build(&rel), io::stdout().lock())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn read(path: &Path) -> Result<sweepjoin::Relation<i64>> {
    csvio::read_csv(path).with_context(|| format!("reading {}", path.display()))
}

fn write_json(path: Option<&Path>, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?,
        None => eprintln!("{text}"),
    }
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode> {
    let rel = dataset::gen_synthetic(&args.data.spec()).map_err(|e| UsageError(e.to_string()))?;
    match args.out {
        Some(path) => csvio::write_csv(&path, &rel)?,
        None => csvio::write_relation(&rel, io::stdout().lock())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_join(args: JoinArgs) -> Result<ExitCode> {
    let spec = args.pred.spec()?;
    let engines = args.engine.engines()?;
    if args.k == 0 {
        return Err(UsageError("--k must be at least 1".into()).into());
    }
    let (r, s) = (read(&args.r)?, read(&args.s)?);

    let mut runs: Vec<(EngineConfig, JoinOutcome<i64>, f64, Vec<sweepjoin::JoinStats>)> = Vec::new();
    for engine in engines {
        let opts = JoinOptions { engine, formulation: args.engine.formulation() };
        let started = Instant::now();
        let (outcome, parts) = if args.k == 1 {
            (run_join(&spec, &r, &s, &opts)?, Vec::new())
        } else {
            let p = partitioned_join(&spec, &r, &s, args.k, &opts)?;
            let stats = p.total_stats();
            (JoinOutcome { pairs: p.pairs, stats }, p.per_partition)
        };
        runs.push((engine, outcome, started.elapsed().as_secs_f64() * 1e3, parts));
    }

    let pairs = runs[0].1.pair_set();
    if runs.iter().any(|(_, o, _, _)| o.pair_set() != pairs) {
        bail!("engines disagree on the result");
    }
    match &args.out {
        Some(path) => csvio::write_pairs_csv(path, &pairs)?,
        None => csvio::write_pairs(&pairs, io::stdout().lock())?,
    }

    let gnorf = match runs.as_slice() {
        [(_, eager, ..), (_, lazy, ..)] => Some(compute_gnorf(&eager.stats, &lazy.stats)?),
        _ => None,
    };
    let report = json!({
        "spec": spec.to_string(),
        "pairs": pairs.len(),
        "checksum": sweepjoin::checksum(&runs[0].1.pairs, &r, &s).to_string(),
        "partitions": args.k,
        "runs": runs.iter().map(|(engine, outcome, ms, parts)| json!({
            "engine": engine_label(engine),
            "wall_ms": ms,
            "stats": stats_json(&outcome.stats),
            "per_partition": parts.iter().map(stats_json).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "gnorf": gnorf,
    });
    write_json(args.stats.as_deref(), &report)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let engines = args.engine.engines()?;
    let opts = JoinOptions { engine: engines[0], formulation: args.engine.formulation() };

    if let Some(count) = args.batch {
        let specs =
            if args.pred.pred.is_some() { vec![args.pred.spec()?] } else { verify::all_specs(&verify::BOUND_GRID) };
        let summary = verify::verify_batch(args.seed..args.seed + count, &specs, args.max_n, args.hi, &opts)?;
        for f in &summary.failures {
            println!(
                "seed {} {}: {} missing, {} unexpected",
                f.seed,
                f.spec,
                f.outcome.missing.len(),
                f.outcome.unexpected.len()
            );
            print!("{}", f.outcome.describe());
        }
        println!("{} instances, {} checks, {} failures", summary.instances, summary.checks, summary.failures.len());
        return Ok(if summary.failures.is_empty() { ExitCode::SUCCESS } else { ExitCode::FAILURE });
    }

    let (Some(r_path), Some(s_path)) = (&args.r, &args.s) else {
        return Err(UsageError("verify needs two relation files or --batch".into()).into());
    };
    let spec = args.pred.spec()?;
    let (r, s) = (read(r_path)?, read(s_path)?);
    let outcome = match &args.pairs {
        Some(path) => {
            let actual = csvio::read_pairs_csv(path).with_context(|| format!("reading {}", path.display()))?;
            verify::verify_pairs(&spec, &r, &s, &actual, args.oracle_cap)?
        }
        None => verify::verify_join(&spec, &r, &s, &opts, args.oracle_cap)?,
    };
    if outcome.is_ok() {
        println!("ok: {} pairs match the oracle", outcome.expected);
        Ok(ExitCode::SUCCESS)
    } else {
        println!("{} missing, {} unexpected", outcome.missing.len(), outcome.unexpected.len());
        print!("{}", outcome.describe());
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode> {
    if let Some(entries) = args.scan {
        let t = bench::scan_benchmark(entries, entries, args.data.seed, args.repeats);
        println!(
            "scan of {} entries: gapless {:.2} ns/entry, chained {:.2} ns/entry, speedup {:.2}x",
            entries,
            ScanTiming::ns_per_entry(t.gapless, entries),
            ScanTiming::ns_per_entry(t.chained, entries),
            t.speedup()
        );
        write_json(
            args.json.as_deref(),
            &json!({
                "entries": entries,
                "gapless_ns": t.gapless.as_nanos() as u64,
                "chained_ns": t.chained.as_nanos() as u64,
                "speedup": t.speedup(),
            }),
        )?;
        return Ok(ExitCode::SUCCESS);
    }

    if !args.batch.is_empty() {
        let [m, a, c] = args.batch[..] else { unreachable!("clap enforces three values") };
        if c == 0 {
            return Err(UsageError("batch capacity must be at least 1".into()).into());
        }
        let (eager, lazy, gnorf) = bench::batch_gnorf(m, a, c)?;
        println!(
            "batch m={m} a={a} c={c}: eager getnext {}, lazy getnext {}, gnorf {gnorf}",
            eager.getnext_count, lazy.getnext_count
        );
        write_json(
            args.json.as_deref(),
            &json!({ "m": m, "a": a, "capacity": c, "eager": stats_json(&eager), "lazy": stats_json(&lazy), "gnorf": gnorf }),
        )?;
        return Ok(ExitCode::SUCCESS);
    }

    let spec = args.pred.spec()?;
    if args.capacity == 0 {
        return Err(UsageError("--capacity must be at least 1".into()).into());
    }
    args.data.spec().validate().map_err(|e| UsageError(e.to_string()))?;

    if !args.grid.is_empty() {
        let points =
            bench::scaling(&spec, &args.grid, &args.data.spec(), EngineConfig::lazy(args.capacity), args.repeats)?;
        println!("{:>12} {:>12} {:>12} {:>12} {:>14}", "n", "domain_hi", "total ms", "pairs", "ns/(n+pairs)");
        for p in &points {
            let total = p.row.total_time().as_secs_f64();
            println!(
                "{:>12} {:>12} {:>12.2} {:>12} {:>14.2}",
                p.n,
                p.domain_hi,
                total * 1e3,
                p.row.pairs,
                total * 1e9 / (p.n as f64 + p.row.pairs as f64).max(1.0)
            );
        }
        let value = json!(points
            .iter()
            .map(|p| json!({ "n": p.n, "domain_hi": p.domain_hi, "run": p.row.to_json() }))
            .collect::<Vec<_>>());
        write_json(args.json.as_deref(), &value)?;
        return Ok(ExitCode::SUCCESS);
    }

    let (r, s) = match (&args.r, &args.s) {
        (Some(r), Some(s)) => (read(r)?, read(s)?),
        (None, None) => {
            let rel = dataset::gen_synthetic(&args.data.spec())?;
            (rel.clone(), rel)
        }
        _ => return Err(UsageError("bench takes zero or two relation files".into()).into()),
    };
    let engines = [
        EngineConfig::eager(),
        EngineConfig::lazy(args.capacity),
        EngineConfig::eager().with_active_set(ActiveSetKind::Chained),
        EngineConfig::lazy(args.capacity).with_active_set(ActiveSetKind::Chained),
    ];
    let report = bench::bench(&spec, &r, &s, &engines, args.repeats)?;
    print!("{}", report.table());
    print_histogram(&report.histogram);
    write_json(args.json.as_deref(), &report.to_json())?;
    Ok(ExitCode::SUCCESS)
}

fn print_histogram(h: &SequenceHistogram) {
    let mut out = io::stdout().lock();
    let _ = writeln!(out, "uninterrupted run lengths ({} runs)", h.runs());
    for (i, f) in h.frequencies().iter().enumerate() {
        let _ = writeln!(out, "{:>4} {:>7.2}%", SequenceHistogram::bucket_label(i), f * 100.0);
    }
}

fn cmd_histogram(r: &Path, s: &Path) -> Result<ExitCode> {
    let (r, s) = (read(r)?, read(s)?);
    print_histogram(&sequence_histogram(&EndpointIndex::build(&r), &EndpointIndex::build(&s)));
    Ok(ExitCode::SUCCESS)
}
