//! Repeated nearest-neighbour search from every ordered k-vertex prefix.
//!
//! Each prefix is extended greedily by the nearest unvisited neighbour of the
//! current endpoint, ties going to the lowest vertex index. The winner over all
//! `n!/(n-k)!` prefixes is the minimum by `(cost, vertex sequence)`, which makes
//! the result independent of how the search is split across workers.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Instance, Mode, Route};

pub const DEFAULT_PREFIX_LIMIT: u64 = 10_000_000;

/// Sorted neighbour lists are built for `SMALL_N < n <= NEIGHBOR_TABLE_LIMIT`.
pub const NEIGHBOR_TABLE_LIMIT: usize = 4096;
const SMALL_N: usize = 32;
const SEQUENTIAL_BELOW: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    #[default]
    LowestIndex,
}

#[derive(Debug, Clone)]
pub struct KrnnConfig {
    pub k: usize,
    pub mode: Mode,
    pub tie_break: TieBreak,
    /// Dedicated pool size; `None` runs on the current rayon pool.
    pub workers: Option<usize>,
    pub prefix_limit: u64,
    pub keep_costs: bool,
    pub deadline: Option<Instant>,
}

impl KrnnConfig {
    pub fn new(k: usize, mode: Mode) -> Self {
        Self {
            k,
            mode,
            tie_break: TieBreak::LowestIndex,
            workers: None,
            prefix_limit: DEFAULT_PREFIX_LIMIT,
            keep_costs: false,
            deadline: None,
        }
    }
}

impl Default for KrnnConfig {
    fn default() -> Self {
        Self::new(2, Mode::Tour)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrnnResult {
    pub best: Route,
    pub best_prefix: Vec<usize>,
    pub candidates_evaluated: u64,
    /// Completion cost of every prefix, indexed in lexicographic prefix order.
    pub per_prefix_costs: Option<Vec<f64>>,
}

/// `n! / (n - k)!`, the number of ordered k-prefixes.
pub fn prefix_count(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    ((n - k + 1)..=n).fold(1u128, |acc, f| acc.saturating_mul(f as u128))
}

/// Writes the `index`-th ordered k-prefix (lexicographic order) into `out`.
pub fn nth_prefix(n: usize, k: usize, index: u64, out: &mut Vec<usize>) {
    out.clear();
    if k == 1 {
        out.push(index as usize);
        return;
    }
    if k == 2 {
        let first = (index / (n as u64 - 1)) as usize;
        let r = (index % (n as u64 - 1)) as usize;
        out.push(first);
        out.push(if r < first { r } else { r + 1 });
        return;
    }
    let mut available: Vec<usize> = (0..n).collect();
    let mut rest = index as u128;
    for j in 0..k {
        let block = prefix_count(n - j - 1, k - j - 1);
        let digit = (rest / block) as usize;
        rest %= block;
        out.push(available.remove(digit));
    }
}

/// Neighbours of each vertex sorted by `(weight, index)`.
struct NeighborTable {
    stride: usize,
    lists: Vec<u32>,
}

impl NeighborTable {
    fn new(instance: &Instance) -> Self {
        let n = instance.n();
        let stride = n - 1;
        let mut lists = Vec::with_capacity(n * stride);
        let mut row: Vec<u32> = Vec::with_capacity(stride);
        for i in 0..n {
            row.clear();
            row.extend((0..n as u32).filter(|&j| j as usize != i));
            row.sort_by(|&a, &b| {
                instance
                    .weight(i, a as usize)
                    .total_cmp(&instance.weight(i, b as usize))
                    .then(a.cmp(&b))
            });
            lists.extend_from_slice(&row);
        }
        Self { stride, lists }
    }

    fn row(&self, v: usize) -> &[u32] {
        &self.lists[v * self.stride..(v + 1) * self.stride]
    }
}

struct Completer<'a> {
    instance: &'a Instance,
    table: Option<&'a NeighborTable>,
    visited: Vec<bool>,
    order: Vec<usize>,
}

impl<'a> Completer<'a> {
    fn new(instance: &'a Instance, table: Option<&'a NeighborTable>) -> Self {
        Self {
            instance,
            table,
            visited: vec![false; instance.n()],
            order: Vec::with_capacity(instance.n()),
        }
    }

    fn nearest_unvisited(&self, from: usize) -> usize {
        if let Some(table) = self.table {
            return table
                .row(from)
                .iter()
                .map(|&v| v as usize)
                .find(|&v| !self.visited[v])
                .expect("an unvisited vertex remains");
        }
        let mut best = usize::MAX;
        let mut best_w = f64::INFINITY;
        for v in 0..self.instance.n() {
            if !self.visited[v] {
                let w = self.instance.weight(from, v);
                if best == usize::MAX || w < best_w {
                    best = v;
                    best_w = w;
                }
            }
        }
        best
    }

    /// Completes `prefix` into `self.order`. Returns `None` once the running
    /// cost exceeds `cutoff`, since such a candidate can no longer win.
    fn run(&mut self, prefix: &[usize], mode: Mode, cutoff: f64) -> Option<f64> {
        let n = self.instance.n();
        self.visited.fill(false);
        self.order.clear();
        let mut cost = 0.0;
        for (i, &v) in prefix.iter().enumerate() {
            if i > 0 {
                cost += self.instance.weight(prefix[i - 1], v);
            }
            self.visited[v] = true;
            self.order.push(v);
        }
        if cost > cutoff {
            return None;
        }
        let mut current = *prefix.last().expect("prefix is nonempty");
        while self.order.len() < n {
            let next = self.nearest_unvisited(current);
            cost += self.instance.weight(current, next);
            if cost > cutoff {
                return None;
            }
            self.visited[next] = true;
            self.order.push(next);
            current = next;
        }
        if mode == Mode::Tour {
            cost += self.instance.weight(current, self.order[0]);
            if cost > cutoff {
                return None;
            }
        }
        Some(cost)
    }
}

fn candidate_cmp(a: (f64, &[usize]), b: (f64, &[usize])) -> Ordering {
    a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1))
}

fn better(a: Option<(f64, Vec<usize>)>, b: Option<(f64, Vec<usize>)>) -> Option<(f64, Vec<usize>)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            if candidate_cmp((a.0, &a.1), (b.0, &b.1)) == Ordering::Greater {
                Some(b)
            } else {
                Some(a)
            }
        }
    }
}

fn validate_prefix(n: usize, prefix: &[usize]) -> Result<()> {
    if prefix.is_empty() || prefix.len() > n {
        return Err(Error::InvalidPrefix(format!(
            "prefix length {} not in 1..={n}",
            prefix.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in prefix {
        if v >= n {
            return Err(Error::InvalidPrefix(format!("vertex {v} out of range")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidPrefix(format!("vertex {v} repeated")));
        }
    }
    Ok(())
}

/// Extends `prefix` by repeated nearest-unvisited-neighbour steps.
pub fn greedy_complete(instance: &Instance, prefix: &[usize], mode: Mode) -> Result<Route> {
    validate_prefix(instance.n(), prefix)?;
    let table = (instance.n() > SMALL_N && instance.n() <= NEIGHBOR_TABLE_LIMIT)
        .then(|| NeighborTable::new(instance));
    let mut completer = Completer::new(instance, table.as_ref());
    let cost = completer
        .run(prefix, mode, f64::INFINITY)
        .expect("no cutoff");
    Ok(Route::from_parts(mode, completer.order, cost))
}

/// Best completion over all ordered k-prefixes.
pub fn krnn(instance: &Instance, config: &KrnnConfig) -> Result<KrnnResult> {
    let n = instance.n();
    let k = config.k;
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let count = prefix_count(n, k);
    if count > config.prefix_limit as u128 {
        return Err(Error::PrefixLimit {
            count,
            limit: config.prefix_limit,
        });
    }
    match config.workers {
        Some(workers) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers.max(1))
                .build()
                .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?;
            pool.install(|| search(instance, config, count as u64))
        }
        None => search(instance, config, count as u64),
    }
}

fn search(instance: &Instance, config: &KrnnConfig, count: u64) -> Result<KrnnResult> {
    let n = instance.n();
    let (k, mode) = (config.k, config.mode);
    let table = (n > SMALL_N && n <= NEIGHBOR_TABLE_LIMIT).then(|| NeighborTable::new(instance));
    let table = table.as_ref();
    let aborted = AtomicBool::new(false);
    let out_of_time = || {
        config.deadline.is_some_and(|d| Instant::now() > d) && {
            aborted.store(true, AtomicOrdering::Relaxed);
            true
        }
    };

    let (best, per_prefix_costs) = if config.keep_costs {
        let eval = |completer: &mut (Completer, Vec<usize>), idx: u64| {
            if aborted.load(AtomicOrdering::Relaxed) || out_of_time() {
                return f64::NAN;
            }
            let (c, prefix) = completer;
            nth_prefix(n, k, idx, prefix);
            c.run(prefix, mode, f64::INFINITY).expect("no cutoff")
        };
        let init = || (Completer::new(instance, table), Vec::with_capacity(k));
        let costs: Vec<f64> = if count < SEQUENTIAL_BELOW {
            let mut state = init();
            (0..count).map(|idx| eval(&mut state, idx)).collect()
        } else {
            (0..count).into_par_iter().map_init(init, eval).collect()
        };
        if aborted.load(AtomicOrdering::Relaxed) {
            return Err(Error::BudgetExceeded);
        }
        let min = costs.iter().copied().fold(f64::INFINITY, f64::min);
        let mut completer = Completer::new(instance, table);
        let mut prefix = Vec::with_capacity(k);
        let mut best = None;
        for (idx, _) in costs.iter().enumerate().filter(|(_, &c)| c == min) {
            nth_prefix(n, k, idx as u64, &mut prefix);
            let cost = completer
                .run(&prefix, mode, f64::INFINITY)
                .expect("no cutoff");
            best = better(best, Some((cost, completer.order.clone())));
        }
        (best, Some(costs))
    } else {
        struct Acc<'a> {
            completer: Completer<'a>,
            prefix: Vec<usize>,
            best: Option<(f64, Vec<usize>)>,
        }
        let init = || Acc {
            completer: Completer::new(instance, table),
            prefix: Vec::with_capacity(k),
            best: None,
        };
        let visit = |acc: &mut Acc<'_>, idx: u64| {
            if aborted.load(AtomicOrdering::Relaxed) || out_of_time() {
                return;
            }
            nth_prefix(n, k, idx, &mut acc.prefix);
            let cutoff = acc.best.as_ref().map_or(f64::INFINITY, |b| b.0);
            if let Some(cost) = acc.completer.run(&acc.prefix, mode, cutoff) {
                let replace = match &acc.best {
                    None => true,
                    Some((bc, bo)) => {
                        candidate_cmp((cost, &acc.completer.order), (*bc, bo)) == Ordering::Less
                    }
                };
                if replace {
                    acc.best = Some((cost, acc.completer.order.clone()));
                }
            }
        };
        let best = if count < SEQUENTIAL_BELOW {
            let mut acc = init();
            (0..count).for_each(|idx| visit(&mut acc, idx));
            acc.best
        } else {
            (0..count)
                .into_par_iter()
                .fold(init, |mut acc, idx| {
                    visit(&mut acc, idx);
                    acc
                })
                .map(|acc| acc.best)
                .reduce(|| None, better)
        };
        (best, None)
    };

    if aborted.load(AtomicOrdering::Relaxed) {
        return Err(Error::BudgetExceeded);
    }
    let (cost, order) = best.expect("at least one prefix");
    Ok(KrnnResult {
        best_prefix: order[..k].to_vec(),
        best: Route::from_parts(mode, order, cost),
        candidates_evaluated: count,
        per_prefix_costs,
    })
}

/// Best cost for every `k` in `1..=k_max`.
pub fn krnn_all_k(instance: &Instance, k_max: usize, mode: Mode) -> Result<Vec<(usize, f64)>> {
    if k_max == 0 || k_max > instance.n() {
        return Err(Error::InvalidK {
            k: k_max,
            n: instance.n(),
        });
    }
    (1..=k_max)
        .map(|k| krnn(instance, &KrnnConfig::new(k, mode)).map(|r| (k, r.best.cost())))
        .collect()
}
