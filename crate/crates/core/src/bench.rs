//! Benchmark registry of the 48 published instances, the 1-RNN/2-RNN runner
//! and report emitters.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::heuristics::{krnn, KrnnConfig};
use crate::instance::Mode;
use crate::tsplib::read_instance;

pub const SCHEMA_VERSION: u32 = 1;
/// Default size cut-off for runs that should finish at a desk.
pub const DESK_SCALE_MAX_N: usize = 300;
/// A record whose result differs from the published one by more than this
/// fraction of the optimum is flagged divergent.
pub const DIVERGENCE_FRACTION: f64 = 0.01;

/// Percentage held exactly in hundredths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize)]
#[serde(from = "f64")]
pub struct Excess(i64);

impl Excess {
    pub const fn from_hundredths(h: i64) -> Self {
        Excess(h)
    }

    pub fn hundredths(self) -> i64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 100.0
    }
}

impl From<f64> for Excess {
    fn from(v: f64) -> Self {
        Excess((v * 100.0).round() as i64)
    }
}

impl Serialize for Excess {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.as_f64())
    }
}

impl fmt::Display for Excess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let a = self.0.unsigned_abs();
        write!(f, "{sign}{}.{:02}", a / 100, a % 100)
    }
}

fn floor_div(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn exact_integer(v: f64) -> Option<i128> {
    (v.fract() == 0.0 && v.abs() < 9.0e15).then_some(v as i128)
}

/// `100 * (result - optimum) / optimum`, rounded half up to 2 decimals.
/// Integral inputs are rounded in exact integer arithmetic.
pub fn excess_percent(result: f64, optimum: f64) -> Result<Excess> {
    if !(optimum > 0.0) || !optimum.is_finite() {
        return Err(Error::InvalidOptimum(optimum));
    }
    if let (Some(r), Some(o)) = (exact_integer(result), exact_integer(optimum)) {
        // floor(10000 (r - o) / o + 1/2)
        let num = 20_000 * (r - o) + o;
        return Ok(Excess(floor_div(num, 2 * o) as i64));
    }
    let h = 10_000.0 * (result - optimum) / optimum;
    Ok(Excess((h + 0.5).floor() as i64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PaperCell {
    pub result: u64,
    pub excess: Excess,
}

/// One published benchmark row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegistryEntry {
    pub name: &'static str,
    pub n: usize,
    pub optimum: u64,
    pub paper_1rnn: PaperCell,
    pub paper_2rnn: PaperCell,
}

impl RegistryEntry {
    pub fn paper(&self, k: usize) -> Option<PaperCell> {
        match k {
            1 => Some(self.paper_1rnn),
            2 => Some(self.paper_2rnn),
            _ => None,
        }
    }

    /// File stem in the TSPLIB distribution. Two published names drop the
    /// `l` of `fl1400` and `fl1417`.
    pub fn file_stem(&self) -> &'static str {
        match self.name {
            "f1400" => "fl1400",
            "f1417" => "fl1417",
            other => other,
        }
    }

    pub fn path_in(&self, dir: &Path) -> PathBuf {
        dir.join(format!("{}.tsp", self.file_stem()))
    }
}

const fn entry(
    name: &'static str,
    n: usize,
    optimum: u64,
    r1: u64,
    e1: i64,
    r2: u64,
    e2: i64,
) -> RegistryEntry {
    RegistryEntry {
        name,
        n,
        optimum,
        paper_1rnn: PaperCell {
            result: r1,
            excess: Excess::from_hundredths(e1),
        },
        paper_2rnn: PaperCell {
            result: r2,
            excess: Excess::from_hundredths(e2),
        },
    }
}

/// Optimum, 1-RNN and 2-RNN results as published, sorted by name.
pub static REGISTRY: [RegistryEntry; 48] = [
    entry("a280", 280, 2579, 2975, 1535, 2953, 1450),
    entry("berlin52", 52, 7542, 8181, 847, 7968, 565),
    entry("bier127", 127, 118282, 133953, 1325, 128589, 871),
    entry("brazil58", 58, 25395, 27384, 783, 27213, 716),
    entry("brg180", 180, 1950, 8890, 35590, 2020, 359),
    entry("ch130", 130, 6110, 7129, 1668, 6903, 1298),
    entry("ch150", 150, 6528, 7113, 896, 7113, 896),
    entry("d1291", 1291, 50801, 58681, 1551, 58681, 1551),
    entry("d1655", 1655, 62128, 73369, 1809, 72554, 1678),
    entry("d198", 198, 15780, 17620, 1166, 17405, 1030),
    entry("d493", 493, 35002, 40186, 1481, 40186, 1481),
    entry("d657", 657, 48912, 60174, 2303, 59310, 2126),
    entry("dantzig42", 42, 699, 864, 2361, 826, 1817),
    entry("eil101", 101, 629, 746, 1860, 743, 1812),
    entry("eil51", 51, 426, 482, 1315, 472, 1080),
    entry("eil76", 76, 538, 608, 1301, 598, 1115),
    entry("f1400", 1400, 20127, 25115, 2478, 24719, 2282),
    entry("f1417", 1417, 11861, 13887, 1708, 13866, 1690),
    entry("fri26", 26, 937, 965, 299, 959, 235),
    entry("gil262", 262, 2378, 2823, 1871, 2767, 1636),
    entry("gr120", 120, 6942, 8438, 2155, 8335, 2007),
    entry("gr17", 17, 2085, 2178, 446, 2178, 446),
    entry("gr21", 21, 2707, 3003, 1093, 2958, 927),
    entry("gr24", 24, 1272, 1553, 2209, 1400, 1006),
    entry("gr48", 48, 5046, 5840, 1574, 5561, 1021),
    entry("hk48", 48, 11461, 12137, 590, 12031, 497),
    entry("kroA100", 100, 21282, 24698, 1605, 24582, 1551),
    entry("kroA150", 150, 26524, 31479, 1868, 31320, 1808),
    entry("kroA200", 200, 29368, 34543, 1762, 34543, 1762),
    entry("kroB100", 100, 22141, 25884, 1691, 25255, 1406),
    entry("kroB150", 150, 26130, 31611, 2098, 31524, 2064),
    entry("kroB200", 200, 29437, 35389, 2022, 35283, 1986),
    entry("kroC100", 100, 20749, 23660, 1403, 23603, 1375),
    entry("kroD100", 100, 21294, 24852, 1671, 24603, 1554),
    entry("kroE100", 100, 22068, 24782, 1230, 24445, 1077),
    entry("lin105", 105, 14379, 16935, 1778, 16147, 1230),
    entry("lin318", 318, 42029, 49201, 1706, 49201, 1706),
    entry("linhp318", 318, 41345, 49201, 1900, 49201, 1900),
    entry("nrw1379", 1379, 56638, 68531, 2100, 67873, 1984),
    entry("p654", 654, 34643, 43027, 2420, 42935, 2394),
    entry("pa561", 561, 2763, 3279, 1868, 3269, 1831),
    entry("pcb1173", 1173, 56892, 70115, 2324, 69085, 2143),
    entry("pcb442", 442, 50778, 58950, 1609, 58682, 1557),
    entry("pr76", 76, 108159, 130921, 2104, 128749, 1904),
    entry("si1032", 1032, 92650, 94083, 155, 93981, 144),
    entry("si175", 175, 21407, 22000, 277, 21906, 233),
    entry("si535", 535, 48450, 50036, 327, 50032, 327),
    entry("swiss42", 42, 1273, 1437, 1288, 1425, 1194),
];

pub fn registry() -> &'static [RegistryEntry] {
    &REGISTRY
}

/// Accepts either the published name or the TSPLIB file stem.
pub fn lookup(name: &str) -> Option<&'static RegistryEntry> {
    REGISTRY
        .iter()
        .find(|e| e.name == name || e.file_stem() == name)
}

pub fn desk_scale(max_n: usize) -> Vec<&'static RegistryEntry> {
    REGISTRY.iter().filter(|e| e.n <= max_n).collect()
}

/// Entries named in `names` (unknown names are reported together).
pub fn select(names: &[&str]) -> Result<Vec<&'static RegistryEntry>> {
    let mut unknown = Vec::new();
    let mut out = Vec::new();
    for name in names {
        match lookup(name) {
            Some(e) => out.push(e),
            None => unknown.push(name.to_string()),
        }
    }
    if !unknown.is_empty() {
        return Err(Error::Precondition(format!(
            "not in the benchmark registry: {}",
            unknown.join(", ")
        )));
    }
    out.sort_by_key(|e| e.name);
    out.dedup_by_key(|e| e.name);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Divergent,
    Skipped,
    Unavailable,
    Error,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Divergent => "divergent",
            Status::Skipped => "skipped",
            Status::Unavailable => "unavailable",
            Status::Error => "error",
        }
    }

    pub fn has_result(self) -> bool {
        matches!(self, Status::Ok | Status::Divergent)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub name: String,
    pub n: usize,
    pub optimum: f64,
    pub k: usize,
    pub result: Option<f64>,
    pub excess: Option<Excess>,
    pub paper_result: Option<f64>,
    pub paper_excess: Option<Excess>,
    /// `result - paper_result`.
    pub delta: Option<f64>,
    pub wall_time_secs: Option<f64>,
    pub status: Status,
    pub note: Option<String>,
}

impl BenchRecord {
    fn pending(entry: &RegistryEntry, k: usize) -> Self {
        let paper = entry.paper(k);
        Self {
            name: entry.name.to_string(),
            n: entry.n,
            optimum: entry.optimum as f64,
            k,
            result: None,
            excess: None,
            paper_result: paper.map(|p| p.result as f64),
            paper_excess: paper.map(|p| p.excess),
            delta: None,
            wall_time_secs: None,
            status: Status::Unavailable,
            note: None,
        }
    }

    fn with_result(mut self, result: f64, secs: f64) -> Self {
        self.result = Some(result);
        self.excess = excess_percent(result, self.optimum).ok();
        self.delta = self.paper_result.map(|p| result - p);
        self.wall_time_secs = Some(secs);
        let divergent = self
            .delta
            .is_some_and(|d| d.abs() / self.optimum > DIVERGENCE_FRACTION);
        self.status = if divergent {
            Status::Divergent
        } else {
            Status::Ok
        };
        self
    }

    fn failed(mut self, status: Status, note: String) -> Self {
        self.status = status;
        self.note = Some(note);
        self
    }
}

pub struct BenchOptions<'a> {
    pub data_dir: PathBuf,
    /// Per (instance, k) wall-clock limit; exceeding it marks the record skipped.
    pub budget: Option<Duration>,
    pub prefix_limit: u64,
    pub progress: Option<&'a (dyn Fn(&BenchRecord) + Sync)>,
}

impl BenchOptions<'_> {
    pub fn new(data_dir: impl Into<PathBuf>) -> Self {
        Self {
            data_dir: data_dir.into(),
            budget: None,
            prefix_limit: crate::heuristics::DEFAULT_PREFIX_LIMIT,
            progress: None,
        }
    }
}

/// One record per `(entry, k)`, sorted by `(name, k)`. Instances run in
/// parallel on the current rayon pool.
pub fn run_benchmark(
    entries: &[&RegistryEntry],
    ks: &[usize],
    options: &BenchOptions<'_>,
) -> Vec<BenchRecord> {
    let mut ks = ks.to_vec();
    ks.sort_unstable();
    ks.dedup();
    let mut records: Vec<BenchRecord> = entries
        .par_iter()
        .flat_map_iter(|entry| run_entry(entry, &ks, options))
        .collect();
    sort_records(&mut records);
    records
}

fn run_entry(entry: &RegistryEntry, ks: &[usize], options: &BenchOptions<'_>) -> Vec<BenchRecord> {
    let path = entry.path_in(&options.data_dir);
    let loaded = if path.exists() {
        read_instance(&path).and_then(|inst| {
            if inst.n() == entry.n {
                Ok(inst)
            } else {
                Err(Error::InvalidInstance(format!(
                    "{} has n = {}, registry says {}",
                    path.display(),
                    inst.n(),
                    entry.n
                )))
            }
        })
    } else {
        Err(Error::NotFound {
            dir: options.data_dir.clone(),
            names: vec![entry.file_stem().to_string()],
        })
    };
    ks.iter()
        .map(|&k| {
            let record = BenchRecord::pending(entry, k);
            let record = match &loaded {
                Err(e @ Error::NotFound { .. }) => {
                    record.failed(Status::Unavailable, e.to_string())
                }
                Err(e) => record.failed(Status::Error, e.to_string()),
                Ok(inst) => {
                    let start = Instant::now();
                    let mut cfg = KrnnConfig::new(k, Mode::Tour);
                    cfg.prefix_limit = options.prefix_limit;
                    cfg.deadline = options.budget.map(|b| start + b);
                    match krnn(inst, &cfg) {
                        Ok(r) => record.with_result(r.best.cost(), start.elapsed().as_secs_f64()),
                        Err(e @ (Error::BudgetExceeded | Error::PrefixLimit { .. })) => {
                            record.failed(Status::Skipped, e.to_string())
                        }
                        Err(e) => record.failed(Status::Error, e.to_string()),
                    }
                }
            };
            if let Some(progress) = options.progress {
                progress(&record);
            }
            record
        })
        .collect()
}

pub fn sort_records(records: &mut [BenchRecord]) {
    records.sort_by(|a, b| a.name.cmp(&b.name).then(a.k.cmp(&b.k)));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    Markdown,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            other => Err(format!("unknown report format {other:?}")),
        }
    }
}

pub const COLUMNS: [&str; 11] = [
    "name",
    "n",
    "optimum",
    "k",
    "result",
    "excess",
    "paper_result",
    "paper_excess",
    "delta",
    "time",
    "status",
];

pub fn format_cost(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v:.0}")
    } else {
        format!("{v}")
    }
}

fn opt_cell<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

fn cells(r: &BenchRecord, include_time: bool) -> [String; 11] {
    [
        r.name.clone(),
        r.n.to_string(),
        format_cost(r.optimum),
        r.k.to_string(),
        opt_cell(r.result, format_cost),
        opt_cell(r.excess, |e| e.to_string()),
        opt_cell(r.paper_result, format_cost),
        opt_cell(r.paper_excess, |e| e.to_string()),
        opt_cell(r.delta, format_cost),
        opt_cell(r.wall_time_secs.filter(|_| include_time), |t| {
            format!("{t:.3}")
        }),
        r.status.label().to_string(),
    ]
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema_version: u32,
    generated_at: Option<&'a str>,
    records: Vec<BenchRecord>,
}

/// Renders records (re-sorted by `(name, k)`). Wall times are emitted only
/// when `include_time` is set, so reports are byte-stable by default.
pub fn emit_report(
    records: &[BenchRecord],
    format: ReportFormat,
    include_time: bool,
    generated_at: Option<&str>,
) -> String {
    let mut records = records.to_vec();
    sort_records(&mut records);
    match format {
        ReportFormat::Csv => {
            let mut out = COLUMNS.join(",");
            out.push('\n');
            for r in &records {
                out.push_str(&cells(r, include_time).join(","));
                out.push('\n');
            }
            out
        }
        ReportFormat::Markdown => {
            let mut out = format!("| {} |\n", COLUMNS.join(" | "));
            out.push_str(&format!("|{}\n", "---|".repeat(COLUMNS.len())));
            for r in &records {
                out.push_str(&format!("| {} |\n", cells(r, include_time).join(" | ")));
            }
            out
        }
        ReportFormat::Json => {
            if !include_time {
                for r in &mut records {
                    r.wall_time_secs = None;
                }
            }
            let doc = Envelope {
                schema_version: SCHEMA_VERSION,
                generated_at,
                records,
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("records serialize");
            s.push('\n');
            s
        }
    }
}

/// Published layout: one row per instance with the 1-RNN and 2-RNN result and
/// excess side by side.
pub fn figure_table(records: &[BenchRecord]) -> String {
    let mut out = String::from(
        "| Dataset | Optimum | 1-RNN Result | 1-RNN Excess | 2-RNN Result | 2-RNN Excess |\n\
         |---|---|---|---|---|---|\n",
    );
    let mut names: Vec<&str> = records.iter().map(|r| r.name.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    for name in names {
        let find = |k: usize| records.iter().find(|r| r.name == name && r.k == k);
        let optimum = find(1).or(find(2)).map(|r| r.optimum).unwrap_or_default();
        let cell = |k: usize| match find(k) {
            Some(r) if r.status.has_result() => (
                opt_cell(r.result, format_cost),
                opt_cell(r.excess, |e| e.to_string()),
            ),
            Some(r) => (r.status.label().to_string(), String::new()),
            None => (String::new(), String::new()),
        };
        let (r1, e1) = cell(1);
        let (r2, e2) = cell(2);
        out.push_str(&format!(
            "| {name} | {} | {r1} | {e1} | {r2} | {e2} |\n",
            format_cost(optimum)
        ));
    }
    out
}
