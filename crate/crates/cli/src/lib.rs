//! `krnn` command-line front end. [`run`] is the whole program minus process
//! exit, so tests can drive it in-process.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use krnn_core::bench::{self, BenchOptions, BenchRecord, ReportFormat, Status};
use krnn_core::claims::{self, ClaimId, ClaimVerdict, TrialPlan, VerdictDocument};
use krnn_core::exact::{optimal_tour, HELD_KARP_CAP};
use krnn_core::heuristics::{krnn, KrnnConfig, DEFAULT_PREFIX_LIMIT};
use krnn_core::spanning::{prim_mst, tour_spanning_trees, tree4, SpanningTree};
use krnn_core::tsplib::{read_document, read_instance};
use krnn_core::{Error, GeneratorKind, Instance, Mode};

pub const DATA_DIR_ENV: &str = "KRNN_DATA_DIR";
pub const DEFAULT_DATA_DIR: &str = "data/tsplib";

pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const LIMIT: i32 = 3;
    pub const INVARIANT: i32 = 4;
}

#[derive(Parser, Debug)]
#[command(
    name = "krnn",
    version,
    about = "k-RNN travelling salesman heuristics and claim checks"
)]
struct Cli {
    /// Worker threads (default: available CPUs).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run k-RNN on one instance.
    Solve(SolveArgs),
    /// Run 1-RNN/2-RNN over the benchmark registry.
    Bench(BenchArgs),
    /// Check a claim on generated or named instances.
    Verify(VerifyArgs),
    /// Print an MST, the degree-4 tree or the tour-derived trees.
    Tree(TreeArgs),
    /// Parse a TSPLIB file and print its header.
    Parse(ParseArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Tour,
    Path,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Tour => Mode::Tour,
            ModeArg::Path => Mode::Path,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    Json,
    Md,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum StageArg {
    Mst,
    Tree4,
    TourTrees,
}

#[derive(Args, Debug)]
struct DataArgs {
    /// TSPLIB directory (default: $KRNN_DATA_DIR or ./data/tsplib).
    #[arg(long)]
    data_dir: Option<PathBuf>,
}

impl DataArgs {
    fn dir(&self) -> PathBuf {
        self.data_dir
            .clone()
            .or_else(|| std::env::var_os(DATA_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_DATA_DIR))
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// TSPLIB file, or a registry name looked up in the data directory.
    instance: String,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Tour)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_PREFIX_LIMIT)]
    prefix_limit: u64,
    #[arg(long)]
    budget_secs: Option<f64>,
    #[command(flatten)]
    data: DataArgs,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Comma-separated registry names.
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    /// Largest instance size to run (ignored with --only).
    #[arg(long, default_value_t = bench::DESK_SCALE_MAX_N)]
    max_n: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2])]
    k: Vec<usize>,
    /// Per (instance, k) limit; slower runs are reported as skipped.
    #[arg(long)]
    budget_secs: Option<f64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall times in the report (makes it non-reproducible).
    #[arg(long)]
    timings: bool,
    #[arg(long, default_value_t = DEFAULT_PREFIX_LIMIT)]
    prefix_limit: u64,
    #[command(flatten)]
    data: DataArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// lemma1, lemma2, theorem1, theorem2, theorem3, mst_bound, ratio, conjecture_k.
    claim: String,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Instance size for generated trials (default depends on the claim).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// euclidean, metric or arbitrary (default: euclidean; metric for lemma2).
    #[arg(long)]
    kind: Option<String>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Check named instances (files or registry names) instead of generated ones.
    #[arg(long, value_delimiter = ',')]
    instance: Vec<String>,
    /// Check every available registry instance with n <= --max-n.
    #[arg(long)]
    registry: bool,
    #[arg(long, default_value_t = bench::DESK_SCALE_MAX_N)]
    max_n: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    data: DataArgs,
}

#[derive(Args, Debug)]
struct TreeArgs {
    instance: String,
    #[arg(long, value_enum, default_value_t = StageArg::Mst)]
    stage: StageArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    data: DataArgs,
}

#[derive(Args, Debug)]
struct ParseArgs {
    instance: String,
    #[command(flatten)]
    data: DataArgs,
}

/// Failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. }
            | Error::UnsupportedFormat(_)
            | Error::InvalidInstance(_)
            | Error::NotFound { .. }
            | Error::Io { .. } => exit::PARSE,
            Error::SizeRefused { .. }
            | Error::PrefixLimit { .. }
            | Error::InvalidK { .. }
            | Error::InvalidSize(_)
            | Error::BudgetExceeded => exit::LIMIT,
            Error::DegreeViolation { .. } => exit::INVARIANT,
            _ => exit::USAGE,
        };
        let mut message = e.to_string();
        if matches!(e, Error::PrefixLimit { .. }) {
            message.push_str(" (raise --prefix-limit to override)");
        }
        Failure { code, message }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: exit::USAGE,
        message: message.into(),
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Runs the program on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, S>(args: I, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    exit::OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    exit::USAGE
                }
            };
            return code;
        }
    };
    let workers = cli
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start {workers} workers: {e}");
            return exit::USAGE;
        }
    };
    let result = pool.install(|| match &cli.command {
        Command::Solve(a) => solve(a, workers, stdout, stderr),
        Command::Bench(a) => bench_cmd(a, workers, stdout, stderr),
        Command::Verify(a) => verify(a, workers, stdout, stderr),
        Command::Tree(a) => tree(a, workers, stdout),
        Command::Parse(a) => parse(a, workers, stdout),
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn io_fail(e: std::io::Error) -> Failure {
    usage(format!("write failed: {e}"))
}

fn echo_config(out: &mut (dyn Write + Send), config: Value) -> std::result::Result<(), Failure> {
    writeln!(out, "config {config}").map_err(io_fail)
}

fn write_out(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

/// Writes a machine-format document to `--out`, or to stdout when no file is given.
fn deliver(
    text: &str,
    out: Option<&PathBuf>,
    stdout: &mut (dyn Write + Send),
) -> std::result::Result<(), Failure> {
    match out {
        Some(path) => write_out(path, text),
        None => stdout.write_all(text.as_bytes()).map_err(io_fail),
    }
}

/// A file path, or a registry-style name resolved in the data directory.
fn resolve_path(spec: &str, data: &DataArgs) -> PathBuf {
    let direct = PathBuf::from(spec);
    if direct.exists() || spec.contains('/') || spec.ends_with(".tsp") {
        return direct;
    }
    let stem = bench::lookup(spec).map_or(spec, |e| e.file_stem());
    data.dir().join(format!("{stem}.tsp"))
}

fn load(spec: &str, data: &DataArgs) -> std::result::Result<Instance, Failure> {
    let inst = read_instance(&resolve_path(spec, data))?;
    Ok(inst)
}

fn budget(secs: Option<f64>) -> std::result::Result<Option<Duration>, Failure> {
    secs.map(|s| {
        Duration::try_from_secs_f64(s).map_err(|_| usage(format!("invalid --budget-secs {s}")))
    })
    .transpose()
}

fn solve(
    a: &SolveArgs,
    workers: usize,
    stdout: &mut (dyn Write + Send),
    _stderr: &mut (dyn Write + Send),
) -> CmdResult {
    echo_config(
        stdout,
        json!({
            "command": "solve",
            "instance": a.instance,
            "k": a.k,
            "mode": Mode::from(a.mode).to_string(),
            "workers": workers,
            "prefix_limit": a.prefix_limit,
            "budget_secs": a.budget_secs,
        }),
    )?;
    let inst = load(&a.instance, &a.data)?;
    let mut cfg = KrnnConfig::new(a.k, a.mode.into());
    cfg.prefix_limit = a.prefix_limit;
    let start = Instant::now();
    cfg.deadline = budget(a.budget_secs)?.map(|b| start + b);
    let r = krnn(&inst, &cfg)?;
    let secs = start.elapsed().as_secs_f64();
    match a.format {
        FormatArg::Json => {
            let doc = json!({
                "schema_version": 1,
                "instance": inst.name(),
                "n": inst.n(),
                "k": a.k,
                "mode": r.best.mode().to_string(),
                "cost": r.best.cost(),
                "order": r.best.order(),
                "best_prefix": r.best_prefix,
                "candidates_evaluated": r.candidates_evaluated,
            });
            let text = serde_json::to_string_pretty(&doc).expect("json") + "\n";
            deliver(&text, a.out.as_ref(), stdout)?;
        }
        _ => {
            let text = format!(
                "instance {} n={}\ncost {}\norder {}\nprefix {}\ncandidates {}\n",
                inst.name(),
                inst.n(),
                bench::format_cost(r.best.cost()),
                join(r.best.order()),
                join(&r.best_prefix),
                r.candidates_evaluated,
            );
            if let Some(path) = &a.out {
                write_out(path, &text)?;
            }
            stdout.write_all(text.as_bytes()).map_err(io_fail)?;
            writeln!(stdout, "time {secs:.3}s").map_err(io_fail)?;
        }
    }
    Ok(exit::OK)
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn report_format(f: FormatArg) -> Option<ReportFormat> {
    match f {
        FormatArg::Csv => Some(ReportFormat::Csv),
        FormatArg::Json => Some(ReportFormat::Json),
        FormatArg::Md => Some(ReportFormat::Markdown),
        FormatArg::Text => None,
    }
}

fn bench_cmd(
    a: &BenchArgs,
    workers: usize,
    stdout: &mut (dyn Write + Send),
    stderr: &mut (dyn Write + Send),
) -> CmdResult {
    let dir = a.data.dir();
    echo_config(
        stdout,
        json!({
            "command": "bench",
            "data_dir": dir,
            "only": a.only,
            "max_n": a.max_n,
            "k": a.k,
            "budget_secs": a.budget_secs,
            "workers": workers,
            "prefix_limit": a.prefix_limit,
            "timings": a.timings,
        }),
    )?;
    if a.k.contains(&0) {
        return Err(usage("--k values must be at least 1"));
    }
    let entries = if a.only.is_empty() {
        bench::desk_scale(a.max_n)
    } else {
        let names: Vec<&str> = a.only.iter().map(String::as_str).collect();
        bench::select(&names).map_err(|e| usage(e.to_string()))?
    };
    let total = entries.len() * {
        let mut ks = a.k.clone();
        ks.sort_unstable();
        ks.dedup();
        ks.len()
    };
    let done = std::sync::atomic::AtomicUsize::new(0);
    let log = std::sync::Mutex::new(Vec::<u8>::new());
    let progress = |r: &BenchRecord| {
        let i = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
        let result = r
            .result
            .map(bench::format_cost)
            .unwrap_or_else(|| "-".into());
        let secs = r
            .wall_time_secs
            .map(|t| format!(" {t:.2}s"))
            .unwrap_or_default();
        let mut log = log.lock().expect("progress log");
        let _ = writeln!(
            log,
            "[{i}/{total}] {} k={} {} {result}{secs}",
            r.name,
            r.k,
            r.status.label()
        );
    };
    let mut opts = BenchOptions::new(&dir);
    opts.budget = budget(a.budget_secs)?;
    opts.prefix_limit = a.prefix_limit;
    opts.progress = Some(&progress);
    let records = bench::run_benchmark(&entries, &a.k, &opts);
    stderr
        .write_all(&log.into_inner().expect("progress log"))
        .map_err(io_fail)?;

    if let Some(fmt) = report_format(a.format) {
        let text = bench::emit_report(&records, fmt, a.timings, None);
        deliver(&text, a.out.as_ref(), stdout)?;
    } else if let Some(path) = &a.out {
        write_out(
            path,
            &bench::emit_report(&records, ReportFormat::Csv, a.timings, None),
        )?;
    }
    let text = bench_summary(&records);
    if a.format == FormatArg::Text || a.out.is_some() {
        stdout.write_all(text.as_bytes()).map_err(io_fail)?;
    }
    let broken = bench_invariant_failures(&records);
    for msg in &broken {
        writeln!(stderr, "invariant violated: {msg}").map_err(io_fail)?;
    }
    Ok(if broken.is_empty() {
        exit::OK
    } else {
        exit::INVARIANT
    })
}

fn bench_summary(records: &[BenchRecord]) -> String {
    let mut out = bench::figure_table(records);
    let count = |s: Status| records.iter().filter(|r| r.status == s).count();
    let _ = writeln!(
        out,
        "rows {} ok {} divergent {} skipped {} unavailable {} error {}",
        records.len(),
        count(Status::Ok),
        count(Status::Divergent),
        count(Status::Skipped),
        count(Status::Unavailable),
        count(Status::Error),
    );
    out
}

/// Result below the optimum, or a larger k doing worse than a smaller one.
pub fn bench_invariant_failures(records: &[BenchRecord]) -> Vec<String> {
    let mut out = Vec::new();
    for r in records {
        if let Some(res) = r.result {
            if res < r.optimum {
                out.push(format!(
                    "{} k={} result {res} below optimum {}",
                    r.name, r.k, r.optimum
                ));
            }
        }
    }
    for pair in records.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if let (true, Some(ra), Some(rb)) = (a.name == b.name && a.k < b.k, a.result, b.result) {
            if rb > ra {
                out.push(format!(
                    "{}: k={} result {rb} exceeds k={} result {ra}",
                    a.name, b.k, a.k
                ));
            }
        }
    }
    out
}

fn default_n(claim: ClaimId) -> usize {
    match claim {
        ClaimId::Lemma1 => 4,
        ClaimId::Lemma2 => 5,
        ClaimId::Theorem1 | ClaimId::Theorem2 => 12,
        ClaimId::Theorem3 => 50,
        ClaimId::MstBound | ClaimId::Theorem4Ratio | ClaimId::ConjectureK => 10,
    }
}

/// Named instance with its optimum: the registry value when known, else
/// the exact optimum for small sizes.
fn with_optimum(
    inst: Instance,
    needs_optimum: bool,
) -> std::result::Result<(Instance, Option<f64>), Error> {
    if !needs_optimum {
        return Ok((inst, None));
    }
    if let Some(e) = bench::lookup(inst.name()) {
        return Ok((inst, Some(e.optimum as f64)));
    }
    if inst.n() <= HELD_KARP_CAP {
        let opt = optimal_tour(&inst)?.optimum_cost;
        return Ok((inst, Some(opt)));
    }
    Err(Error::Precondition(format!(
        "no known optimum for {} (not in the registry and n > {HELD_KARP_CAP})",
        inst.name()
    )))
}

fn check_named(
    claim: ClaimId,
    inst: &Instance,
    optimum: Option<f64>,
    k: usize,
) -> krnn_core::Result<ClaimVerdict> {
    match claim {
        ClaimId::Lemma1 => claims::check_lemma1_instance(inst),
        ClaimId::Lemma2 => claims::check_lemma2_instance(inst),
        ClaimId::Theorem1 => claims::check_theorem1(inst),
        ClaimId::Theorem2 => claims::check_theorem2(inst),
        ClaimId::Theorem3 => claims::check_theorem3(inst),
        ClaimId::MstBound => claims::check_mst_bound(inst, optimum.expect("optimum")),
        ClaimId::Theorem4Ratio | ClaimId::ConjectureK => {
            claims::check_ratio_bound(inst, optimum.expect("optimum"), k)
        }
    }
}

fn verify(
    a: &VerifyArgs,
    workers: usize,
    stdout: &mut (dyn Write + Send),
    stderr: &mut (dyn Write + Send),
) -> CmdResult {
    let mut claim: ClaimId = a.claim.parse().map_err(usage)?;
    if matches!(claim, ClaimId::Theorem4Ratio | ClaimId::ConjectureK) {
        claim = ClaimId::ratio_for(a.k);
    }
    let kind: GeneratorKind = match &a.kind {
        Some(s) => s.parse().map_err(usage)?,
        None if claim == ClaimId::Lemma2 => GeneratorKind::MetricClosure,
        None => GeneratorKind::EuclideanUniform,
    };
    let n = a.n.unwrap_or_else(|| default_n(claim));
    let named_run = a.registry || !a.instance.is_empty();
    echo_config(
        stdout,
        json!({
            "command": "verify",
            "claim": claim.label(),
            "k": a.k,
            "workers": workers,
            "instances": a.instance,
            "registry": a.registry,
            "max_n": if a.registry { Some(a.max_n) } else { None },
            "trials": if named_run { None } else { Some(a.trials) },
            "n": if named_run { None } else { Some(n) },
            "seed": if named_run { None } else { Some(a.seed) },
            "kind": if named_run { None } else { Some(kind.label()) },
        }),
    )?;
    let needs_optimum = matches!(
        claim,
        ClaimId::MstBound | ClaimId::Theorem4Ratio | ClaimId::ConjectureK
    );
    let mut verdicts = Vec::new();
    if named_run {
        let mut names: Vec<String> = a.instance.clone();
        if a.registry {
            let dir = a.data.dir();
            let mut missing = Vec::new();
            for e in bench::desk_scale(a.max_n) {
                if e.path_in(&dir).exists() {
                    names.push(e.name.to_string());
                } else {
                    missing.push(e.name);
                }
            }
            if !missing.is_empty() {
                writeln!(
                    stderr,
                    "unavailable in {}: {}",
                    dir.display(),
                    missing.join(", ")
                )
                .map_err(io_fail)?;
            }
        }
        let mut parts = Vec::new();
        for spec in &names {
            let inst = load(spec, &a.data)?;
            let inst = match bench::lookup(spec) {
                Some(e) if !Path::new(spec).exists() => inst.with_name(e.name),
                _ => inst,
            };
            let (inst, optimum) = with_optimum(inst, needs_optimum)?;
            let v = check_named(claim, &inst, optimum, a.k)?;
            writeln!(
                stderr,
                "{} {}: violations {}",
                claim,
                inst.name(),
                v.violations
            )
            .map_err(io_fail)?;
            parts.push(v);
        }
        if parts.len() == 1 {
            verdicts.push(parts.pop().expect("one verdict"));
        } else if !parts.is_empty() {
            let subject = if a.registry {
                format!("registry n<={}", a.max_n)
            } else {
                names.join(",")
            };
            verdicts.push(ClaimVerdict::merge(claim, subject, parts));
        }
    } else {
        let mut plan = TrialPlan::new(kind, n, a.trials, a.seed);
        plan.metric_required = claim == ClaimId::Lemma2;
        verdicts.push(claims::check_plan(claim, &plan, a.k)?);
    }

    let doc = VerdictDocument::new(verdicts);
    let text = doc.to_json();
    if a.format != FormatArg::Text || a.out.is_some() {
        deliver(&text, a.out.as_ref(), stdout)?;
    }
    if a.format == FormatArg::Text {
        for v in &doc.verdicts {
            stdout
                .write_all(verdict_summary(v).as_bytes())
                .map_err(io_fail)?;
        }
    }
    let defect = doc.verdicts.iter().any(ClaimVerdict::is_defect);
    if defect {
        writeln!(stderr, "proven bound violated; see the verdict document").map_err(io_fail)?;
    }
    Ok(if defect { exit::INVARIANT } else { exit::OK })
}

fn verdict_summary(v: &ClaimVerdict) -> String {
    let mut out = format!(
        "{} [{}] trials {} violations {} non-strict {} errors {}",
        v.claim_id, v.subject, v.trials, v.violations, v.non_strict_violations, v.errors
    );
    if let Some(r) = v.worst_ratio {
        let _ = write!(out, " worst_ratio {r:.4}");
    }
    if let Some(b) = v.bound {
        let _ = write!(out, " bound {b:.4}");
    }
    if let Some(d) = v.mst_max_degree {
        let _ = write!(out, " mst_max_degree {d}");
    }
    if let Some(c) = v.inequalities {
        let _ = write!(
            out,
            " inequalities {}/{} strict {}/{} non-strict",
            c.strict_held, c.checked, c.non_strict_held, c.checked
        );
    }
    if let Some(c) = v.weak_reading {
        let _ = write!(out, " weak {}/{} strict", c.strict_held, c.checked);
    }
    out.push('\n');
    out
}

fn tree_json(t: &SpanningTree) -> Value {
    json!({
        "edges": t.edges(),
        "weight": t.total_weight(),
        "max_degree": t.max_degree(),
    })
}

fn tree_text(out: &mut String, t: &SpanningTree) {
    for &(a, b) in t.edges() {
        let _ = writeln!(out, "edge {a} {b}");
    }
    let _ = writeln!(out, "weight {}", bench::format_cost(t.total_weight()));
    let _ = writeln!(out, "max_degree {}", t.max_degree());
}

fn tree(a: &TreeArgs, workers: usize, stdout: &mut (dyn Write + Send)) -> CmdResult {
    let stage = match a.stage {
        StageArg::Mst => "mst",
        StageArg::Tree4 => "tree4",
        StageArg::TourTrees => "tour-trees",
    };
    echo_config(
        stdout,
        json!({"command": "tree", "instance": a.instance, "stage": stage, "workers": workers}),
    )?;
    let inst = load(&a.instance, &a.data)?;
    let mst = prim_mst(&inst);
    let mut text = String::new();
    let mut code = exit::OK;
    let doc = match a.stage {
        StageArg::Mst => {
            tree_text(&mut text, &mst);
            json!({"stage": stage, "tree": tree_json(&mst)})
        }
        StageArg::Tree4 => {
            let t = tree4(&inst, &mst)?;
            let ratio = t.total_weight() / mst.total_weight();
            tree_text(&mut text, &t);
            let _ = writeln!(
                text,
                "mst_weight {}",
                bench::format_cost(mst.total_weight())
            );
            let _ = writeln!(text, "mst_max_degree {}", mst.max_degree());
            let _ = writeln!(text, "ratio {ratio:.6}");
            if t.max_degree() > 4 {
                code = exit::INVARIANT;
            }
            json!({
                "stage": stage,
                "tree": tree_json(&t),
                "mst": tree_json(&mst),
                "ratio": ratio,
            })
        }
        StageArg::TourTrees => {
            let best = krnn(&inst, &KrnnConfig::new(2, Mode::Tour))?.best;
            let tour = best.as_tour().expect("tour mode");
            let trees = tour_spanning_trees(&inst, tour);
            let sum: f64 = trees.iter().map(|t| t.total_weight()).sum();
            let expected = (inst.n() - 1) as f64 * tour.cost();
            let holds = claims::compare(sum, expected, inst.is_integral()).is_eq();
            for (i, t) in trees.iter().enumerate() {
                let _ = writeln!(
                    text,
                    "tree {i} weight {} max_degree {}",
                    bench::format_cost(t.total_weight()),
                    t.max_degree()
                );
            }
            let _ = writeln!(text, "tour_cost {}", bench::format_cost(tour.cost()));
            let _ = writeln!(
                text,
                "weight_sum {} (n-1)*tour_cost {} identity {}",
                bench::format_cost(sum),
                bench::format_cost(expected),
                if holds { "holds" } else { "FAILS" }
            );
            if !holds {
                code = exit::INVARIANT;
            }
            json!({
                "stage": stage,
                "tour_cost": tour.cost(),
                "trees": trees.iter().map(tree_json).collect::<Vec<_>>(),
                "weight_sum": sum,
            })
        }
    };
    if a.format == FormatArg::Json {
        let s = serde_json::to_string_pretty(&doc).expect("json") + "\n";
        deliver(&s, a.out.as_ref(), stdout)?;
    } else {
        if let Some(path) = &a.out {
            write_out(path, &text)?;
        }
        stdout.write_all(text.as_bytes()).map_err(io_fail)?;
    }
    Ok(code)
}

fn parse(a: &ParseArgs, workers: usize, stdout: &mut (dyn Write + Send)) -> CmdResult {
    echo_config(
        stdout,
        json!({"command": "parse", "instance": a.instance, "workers": workers}),
    )?;
    let (header, inst) = read_document(&resolve_path(&a.instance, &a.data))?;
    let text = format!(
        "name {}\ndimension {}\nedge_weight_type {:?}\nedge_weight_format {}\nregime {}\nintegral {}\n",
        header.name,
        header.dimension,
        header.edge_weight_type,
        header
            .edge_weight_format
            .map_or_else(|| "-".to_string(), |f| format!("{f:?}")),
        inst.regime(),
        inst.is_integral(),
    );
    stdout.write_all(text.as_bytes()).map_err(io_fail)?;
    Ok(exit::OK)
}
