//! Symmetric TSP instances, tours, Hamiltonian paths and their costs.
//!
//! Vertices are dense indices `0..n`. Edge weights are held as `f64`; instances
//! built from TSPLIB integer distances keep exact integer values (every partial
//! sum stays far below 2^53), and [`Instance::is_integral`] tells comparisons to
//! use exact arithmetic instead of a relative tolerance.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tsplib;

/// Coordinate instances at or below this size precompute their full matrix.
pub const MATRIX_CACHE_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Distance function attached to a coordinate instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DistanceKind {
    /// Plain Euclidean distance, no rounding.
    Euclidean,
    Euc2d,
    Ceil2d,
    Geo,
    Att,
}

impl DistanceKind {
    pub fn distance(self, a: &Point, b: &Point) -> f64 {
        match self {
            DistanceKind::Euclidean => (a.x - b.x).hypot(a.y - b.y),
            tsplib_kind => tsplib::distance(tsplib_kind, a, b) as f64,
        }
    }

    pub fn is_integral(self) -> bool {
        !matches!(self, DistanceKind::Euclidean)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Weights {
    Matrix(Vec<f64>),
    Points {
        points: Vec<Point>,
        kind: DistanceKind,
        cache: Option<Vec<f64>>,
    },
}

/// A complete undirected graph with symmetric nonnegative edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: String,
    n: usize,
    weights: Weights,
    integral: bool,
}

impl Instance {
    /// Builds an explicit instance from a row-major `n x n` matrix.
    pub fn from_matrix(name: impl Into<String>, n: usize, values: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSize(format!(
                "an instance needs n >= 2, got {n}"
            )));
        }
        if values.len() != n * n {
            return Err(Error::InvalidInstance(format!(
                "matrix has {} entries, expected {}",
                values.len(),
                n * n
            )));
        }
        for i in 0..n {
            if values[i * n + i] != 0.0 {
                return Err(Error::InvalidInstance(format!(
                    "weight({i},{i}) is not zero"
                )));
            }
            for j in 0..n {
                let w = values[i * n + j];
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::InvalidInstance(format!(
                        "weight({i},{j}) = {w} is not a finite nonnegative number"
                    )));
                }
                if w != values[j * n + i] {
                    return Err(Error::InvalidInstance(format!(
                        "asymmetric weights: weight({i},{j}) = {w}, weight({j},{i}) = {}",
                        values[j * n + i]
                    )));
                }
            }
        }
        let integral = values.iter().all(|w| w.fract() == 0.0);
        Ok(Self {
            name: name.into(),
            n,
            weights: Weights::Matrix(values),
            integral,
        })
    }

    pub fn from_rows(name: impl Into<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInstance(
                "matrix rows are not all of length n".into(),
            ));
        }
        Self::from_matrix(name, n, rows.concat())
    }

    pub fn from_points(
        name: impl Into<String>,
        points: Vec<Point>,
        kind: DistanceKind,
    ) -> Result<Self> {
        let n = points.len();
        if n < 2 {
            return Err(Error::InvalidSize(format!(
                "an instance needs n >= 2, got {n}"
            )));
        }
        if let Some(p) = points.iter().find(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidInstance(format!(
                "non-finite coordinate {p:?}"
            )));
        }
        let cache = (n <= MATRIX_CACHE_LIMIT).then(|| {
            let mut m = vec![0.0; n * n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let w = kind.distance(&points[i], &points[j]);
                    m[i * n + j] = w;
                    m[j * n + i] = w;
                }
            }
            m
        });
        Ok(Self {
            name: name.into(),
            n,
            integral: kind.is_integral(),
            weights: Weights::Points {
                points,
                kind,
                cache,
            },
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Vertex count.
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        match &self.weights {
            Weights::Matrix(m) => m[i * self.n + j],
            Weights::Points { cache: Some(m), .. } => m[i * self.n + j],
            Weights::Points { points, kind, .. } => {
                if i == j {
                    0.0
                } else {
                    kind.distance(&points[i], &points[j])
                }
            }
        }
    }

    /// True when every weight is an integer, so costs compare exactly.
    pub fn is_integral(&self) -> bool {
        self.integral
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.weights, Weights::Matrix(_))
    }

    pub fn points(&self) -> Option<&[Point]> {
        match &self.weights {
            Weights::Points { points, .. } => Some(points),
            Weights::Matrix(_) => None,
        }
    }

    pub fn distance_kind(&self) -> Option<DistanceKind> {
        match &self.weights {
            Weights::Points { kind, .. } => Some(*kind),
            Weights::Matrix(_) => None,
        }
    }

    /// Row-major copy of the full weight matrix.
    pub fn dense_matrix(&self) -> Vec<f64> {
        match &self.weights {
            Weights::Matrix(m) => m.clone(),
            Weights::Points { cache: Some(m), .. } => m.clone(),
            Weights::Points { .. } => {
                let n = self.n;
                let mut m = vec![0.0; n * n];
                for i in 0..n {
                    for j in 0..n {
                        m[i * n + j] = self.weight(i, j);
                    }
                }
                m
            }
        }
    }

    /// Planar instances are the regime in which the degree-4 tree bound is proven.
    pub fn is_planar_euclidean(&self) -> bool {
        matches!(
            self.distance_kind(),
            Some(
                DistanceKind::Euclidean
                    | DistanceKind::Euc2d
                    | DistanceKind::Ceil2d
                    | DistanceKind::Att
            )
        )
    }

    /// Short label for reports: `euclidean`, `geographic`, `metric` or `non-metric`.
    pub fn regime(&self) -> &'static str {
        match self.distance_kind() {
            Some(DistanceKind::Geo) => "geographic",
            Some(_) => "euclidean",
            None if is_metric(self, 0.0) => "metric",
            None => "non-metric",
        }
    }
}

/// Closed-tour or open-path objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Tour,
    Path,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Tour => "tour",
            Mode::Path => "path",
        })
    }
}

/// Checks that `order` is a permutation of `0..n`.
pub fn validate_permutation(n: usize, order: &[usize]) -> Result<()> {
    if order.len() != n {
        return Err(Error::InvalidTour(format!(
            "expected {n} vertices, got {}",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n {
            return Err(Error::InvalidTour(format!(
                "vertex {v} out of range for n={n}"
            )));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidTour(format!("vertex {v} appears twice")));
        }
    }
    Ok(())
}

pub(crate) fn path_cost_unchecked(instance: &Instance, order: &[usize]) -> f64 {
    order
        .windows(2)
        .map(|w| instance.weight(w[0], w[1]))
        .fold(0.0, |acc, w| acc + w)
}

pub(crate) fn tour_cost_unchecked(instance: &Instance, order: &[usize]) -> f64 {
    path_cost_unchecked(instance, order) + instance.weight(order[order.len() - 1], order[0])
}

/// Closed-cycle cost, including the edge from the last vertex back to the first.
pub fn tour_cost(instance: &Instance, order: &[usize]) -> Result<f64> {
    validate_permutation(instance.n(), order)?;
    Ok(tour_cost_unchecked(instance, order))
}

/// Open-path cost over the `n - 1` consecutive edges.
pub fn path_cost(instance: &Instance, order: &[usize]) -> Result<f64> {
    validate_permutation(instance.n(), order)?;
    Ok(path_cost_unchecked(instance, order))
}

/// Triangle inequality check over all ordered triples, with an absolute tolerance.
pub fn is_metric(instance: &Instance, tolerance: f64) -> bool {
    let n = instance.n();
    for i in 0..n {
        for j in 0..n {
            let ij = instance.weight(i, j);
            for k in 0..n {
                if instance.weight(i, k) > ij + instance.weight(j, k) + tolerance {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tour {
    order: Vec<usize>,
    cost: f64,
}

impl Tour {
    pub fn new(instance: &Instance, order: Vec<usize>) -> Result<Self> {
        let cost = tour_cost(instance, &order)?;
        Ok(Self { order, cost })
    }

    pub(crate) fn from_parts(order: Vec<usize>, cost: f64) -> Self {
        Self { order, cost }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    /// Edges `(order[i], order[i + 1 mod n])` in tour order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.order.len();
        (0..n).map(move |i| (self.order[i], self.order[(i + 1) % n]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamPath {
    order: Vec<usize>,
    cost: f64,
}

impl HamPath {
    pub fn new(instance: &Instance, order: Vec<usize>) -> Result<Self> {
        let cost = path_cost(instance, &order)?;
        Ok(Self { order, cost })
    }

    pub(crate) fn from_parts(order: Vec<usize>, cost: f64) -> Self {
        Self { order, cost }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }
}

/// Either a closed tour or an open Hamiltonian path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Route {
    Tour(Tour),
    Path(HamPath),
}

impl Route {
    pub fn order(&self) -> &[usize] {
        match self {
            Route::Tour(t) => t.order(),
            Route::Path(p) => p.order(),
        }
    }

    pub fn cost(&self) -> f64 {
        match self {
            Route::Tour(t) => t.cost(),
            Route::Path(p) => p.cost(),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Route::Tour(_) => Mode::Tour,
            Route::Path(_) => Mode::Path,
        }
    }

    pub fn as_tour(&self) -> Option<&Tour> {
        match self {
            Route::Tour(t) => Some(t),
            Route::Path(_) => None,
        }
    }

    pub fn as_path(&self) -> Option<&HamPath> {
        match self {
            Route::Path(p) => Some(p),
            Route::Tour(_) => None,
        }
    }

    pub(crate) fn from_parts(mode: Mode, order: Vec<usize>, cost: f64) -> Self {
        match mode {
            Mode::Tour => Route::Tour(Tour::from_parts(order, cost)),
            Mode::Path => Route::Path(HamPath::from_parts(order, cost)),
        }
    }
}

/// Family of random instances used by the claim checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    /// Points drawn uniformly from the unit square, plain Euclidean distance.
    EuclideanUniform,
    /// Uniform random weights replaced by their all-pairs shortest-path closure.
    #[serde(rename = "metric-shortest-path-closure")]
    MetricClosure,
    /// Uniform random symmetric weights in `[0, 1)`.
    ArbitraryNonnegative,
}

impl GeneratorKind {
    pub fn label(self) -> &'static str {
        match self {
            GeneratorKind::EuclideanUniform => "euclidean-uniform",
            GeneratorKind::MetricClosure => "metric-shortest-path-closure",
            GeneratorKind::ArbitraryNonnegative => "arbitrary-nonnegative",
        }
    }

    pub fn is_metric(self) -> bool {
        !matches!(self, GeneratorKind::ArbitraryNonnegative)
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for GeneratorKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "euclidean-uniform" | "euclidean" => Ok(GeneratorKind::EuclideanUniform),
            "metric-shortest-path-closure" | "metric-closure" | "metric" => {
                Ok(GeneratorKind::MetricClosure)
            }
            "arbitrary-nonnegative" | "arbitrary" => Ok(GeneratorKind::ArbitraryNonnegative),
            other => Err(format!("unknown generator kind {other:?}")),
        }
    }
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w: f64 = rng.gen();
            m[i * n + j] = w;
            m[j * n + i] = w;
        }
    }
    m
}

/// Deterministic random instance for `(kind, n, seed)`.
pub fn random_instance(kind: GeneratorKind, n: usize, seed: u64) -> Result<Instance> {
    if n < 2 {
        return Err(Error::InvalidSize(format!(
            "an instance needs n >= 2, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let name = format!("{}-n{n}-s{seed}", kind.label());
    match kind {
        GeneratorKind::EuclideanUniform => {
            let points = (0..n).map(|_| Point::new(rng.gen(), rng.gen())).collect();
            Instance::from_points(name, points, DistanceKind::Euclidean)
        }
        GeneratorKind::ArbitraryNonnegative => {
            Instance::from_matrix(name, n, random_symmetric(&mut rng, n))
        }
        GeneratorKind::MetricClosure => {
            let mut d = random_symmetric(&mut rng, n);
            for k in 0..n {
                for i in 0..n {
                    let ik = d[i * n + k];
                    for j in 0..n {
                        let via = ik + d[k * n + j];
                        if via < d[i * n + j] {
                            d[i * n + j] = via;
                        }
                    }
                }
            }
            // Rounding can leave d(i,j) and d(j,i) an ulp apart.
            for i in 0..n {
                for j in (i + 1)..n {
                    let w = d[i * n + j].min(d[j * n + i]);
                    d[i * n + j] = w;
                    d[j * n + i] = w;
                }
            }
            Instance::from_matrix(name, n, d)
        }
    }
}
