//! Exact optima for small instances: exhaustive enumeration and Held-Karp.
//!
//! Witnesses are canonicalized (tours start at vertex 0 and satisfy
//! `order[1] < order[n-1]`; paths satisfy `order[0] < order[n-1]`) and the
//! reported optimum is the witness re-evaluated through the core cost
//! functions, so both oracles price the same tour identically.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{path_cost_unchecked, tour_cost_unchecked, HamPath, Instance, Route, Tour};

pub const BRUTE_FORCE_TOUR_CAP: usize = 11;
pub const BRUTE_FORCE_PATH_CAP: usize = 10;
pub const HELD_KARP_CAP: usize = 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    BruteForce,
    HeldKarp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    pub optimum_cost: f64,
    pub witness: Route,
    pub method: Method,
    pub states_explored: u64,
}

/// Rearranges `perm` into the next lexicographic permutation; false at the last one.
pub(crate) fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let Some(i) = (0..perm.len() - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
        return false;
    };
    let j = (i + 1..perm.len())
        .rev()
        .find(|&j| perm[j] > perm[i])
        .unwrap();
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

fn canonical_tour(mut order: Vec<usize>) -> Vec<usize> {
    let start = order.iter().position(|&v| v == 0).unwrap_or(0);
    order.rotate_left(start);
    let n = order.len();
    if n > 2 && order[1] > order[n - 1] {
        order[1..].reverse();
    }
    order
}

fn canonical_path(mut order: Vec<usize>) -> Vec<usize> {
    if order.len() > 1 && order[0] > order[order.len() - 1] {
        order.reverse();
    }
    order
}

fn tour_result(instance: &Instance, order: Vec<usize>, method: Method, states: u64) -> ExactResult {
    let order = canonical_tour(order);
    let cost = tour_cost_unchecked(instance, &order);
    ExactResult {
        optimum_cost: cost,
        witness: Route::Tour(Tour::from_parts(order, cost)),
        method,
        states_explored: states,
    }
}

fn path_result(instance: &Instance, order: Vec<usize>, method: Method, states: u64) -> ExactResult {
    let order = canonical_path(order);
    let cost = path_cost_unchecked(instance, &order);
    ExactResult {
        optimum_cost: cost,
        witness: Route::Path(HamPath::from_parts(order, cost)),
        method,
        states_explored: states,
    }
}

/// Enumerates every tour with vertex 0 first, one direction per cycle.
pub fn brute_force_tour(instance: &Instance) -> Result<ExactResult> {
    let n = instance.n();
    if n > BRUTE_FORCE_TOUR_CAP {
        return Err(Error::SizeRefused {
            method: "brute-force tour",
            n,
            cap: BRUTE_FORCE_TOUR_CAP,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = (f64::INFINITY, order.clone());
    let mut states = 0u64;
    loop {
        if n <= 2 || order[1] < order[n - 1] {
            states += 1;
            let cost = tour_cost_unchecked(instance, &order);
            if cost < best.0 {
                best = (cost, order.clone());
            }
        }
        if !next_permutation(&mut order[1..]) {
            break;
        }
    }
    Ok(tour_result(instance, best.1, Method::BruteForce, states))
}

/// Subset DP over tours anchored at vertex 0 of a dense matrix.
/// Returns the tour order and the number of `(subset, endpoint)` states.
fn held_karp_matrix(n: usize, w: &[f64]) -> (Vec<usize>, u64) {
    if n <= 3 {
        return ((0..n).collect(), 1);
    }
    let m = n - 1;
    let full = (1usize << m) - 1;
    let mut dp = vec![f64::INFINITY; (full + 1) * m];
    let mut parent = vec![u8::MAX; (full + 1) * m];
    for j in 0..m {
        dp[(1 << j) * m + j] = w[j + 1];
    }
    let mut states = m as u64;
    for mask in 1..=full {
        if mask.count_ones() < 2 {
            continue;
        }
        for j in 0..m {
            if mask & (1 << j) == 0 {
                continue;
            }
            states += 1;
            let prev = mask ^ (1 << j);
            let mut best = f64::INFINITY;
            let mut arg = u8::MAX;
            let mut rest = prev;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let c = dp[prev * m + i] + w[(i + 1) * n + j + 1];
                if c < best {
                    best = c;
                    arg = i as u8;
                }
            }
            dp[mask * m + j] = best;
            parent[mask * m + j] = arg;
        }
    }
    let (mut end, mut best) = (0, f64::INFINITY);
    for j in 0..m {
        let c = dp[full * m + j] + w[(j + 1) * n];
        if c < best {
            best = c;
            end = j;
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut mask = full;
    let mut j = end;
    loop {
        order.push(j + 1);
        let p = parent[mask * m + j];
        mask ^= 1 << j;
        if p == u8::MAX {
            break;
        }
        j = p as usize;
    }
    order.push(0);
    order.reverse();
    (order, states)
}

pub fn held_karp_tour(instance: &Instance) -> Result<ExactResult> {
    let n = instance.n();
    if n > HELD_KARP_CAP {
        return Err(Error::SizeRefused {
            method: "held-karp tour",
            n,
            cap: HELD_KARP_CAP,
        });
    }
    let (order, states) = held_karp_matrix(n, &instance.dense_matrix());
    Ok(tour_result(instance, order, Method::HeldKarp, states))
}

fn brute_force_path(instance: &Instance) -> Result<ExactResult> {
    let n = instance.n();
    if n > BRUTE_FORCE_PATH_CAP {
        return Err(Error::SizeRefused {
            method: "brute-force path",
            n,
            cap: BRUTE_FORCE_PATH_CAP,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = (f64::INFINITY, order.clone());
    let mut states = 0u64;
    loop {
        if order[0] < order[n - 1] {
            states += 1;
            let cost = path_cost_unchecked(instance, &order);
            if cost < best.0 {
                best = (cost, order.clone());
            }
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
    Ok(path_result(instance, best.1, Method::BruteForce, states))
}

/// Held-Karp on the instance plus a depot at weight 0 from every vertex.
fn held_karp_path(instance: &Instance) -> Result<ExactResult> {
    let n = instance.n();
    if n > HELD_KARP_CAP {
        return Err(Error::SizeRefused {
            method: "held-karp path",
            n,
            cap: HELD_KARP_CAP,
        });
    }
    let size = n + 1;
    let mut w = vec![0.0; size * size];
    for i in 0..n {
        for j in 0..n {
            w[(i + 1) * size + j + 1] = instance.weight(i, j);
        }
    }
    let (tour, states) = held_karp_matrix(size, &w);
    let order = tour[1..].iter().map(|&v| v - 1).collect();
    Ok(path_result(instance, order, Method::HeldKarp, states))
}

/// Exact shortest Hamiltonian path with free endpoints.
pub fn shortest_ham_path(instance: &Instance, method: Method) -> Result<ExactResult> {
    match method {
        Method::BruteForce => brute_force_path(instance),
        Method::HeldKarp => held_karp_path(instance),
    }
}

/// Exact tour optimum by whichever oracle fits the size.
pub fn optimal_tour(instance: &Instance) -> Result<ExactResult> {
    if instance.n() <= 9 {
        brute_force_tour(instance)
    } else {
        held_karp_tour(instance)
    }
}
