//! Minimum spanning trees, the degree-4 tree construction and tour-derived
//! Hamiltonian-path trees.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::next_permutation;
use crate::instance::{Instance, Tour};

/// Degree the tree-4 construction accepts before reducing.
pub const MAX_INPUT_DEGREE: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanningTree {
    edges: Vec<(usize, usize)>,
    total_weight: f64,
    degree: Vec<usize>,
}

fn normalize(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl SpanningTree {
    /// Builds and validates a spanning tree from an edge list.
    pub fn from_edges(instance: &Instance, edges: Vec<(usize, usize)>) -> Result<Self> {
        let tree = Self::build(instance, edges);
        if !tree.is_spanning_tree(instance.n()) {
            return Err(Error::InvalidInstance(
                "edge set is not a spanning tree".into(),
            ));
        }
        Ok(tree)
    }

    fn build(instance: &Instance, edges: Vec<(usize, usize)>) -> Self {
        let mut edges: Vec<(usize, usize)> =
            edges.into_iter().map(|(a, b)| normalize(a, b)).collect();
        edges.sort_unstable();
        let mut degree = vec![0; instance.n()];
        for &(a, b) in &edges {
            degree[a] += 1;
            degree[b] += 1;
        }
        let total_weight = edges
            .iter()
            .map(|&(a, b)| instance.weight(a, b))
            .fold(0.0, |acc, w| acc + w);
        Self {
            edges,
            total_weight,
            degree,
        }
    }

    /// Sorted, each pair with the smaller vertex first.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn degree(&self) -> &[usize] {
        &self.degree
    }

    pub fn max_degree(&self) -> usize {
        self.degree.iter().copied().max().unwrap_or(0)
    }

    pub fn n(&self) -> usize {
        self.degree.len()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Connected, acyclic and covering all `n` vertices.
    pub fn is_spanning_tree(&self, n: usize) -> bool {
        if self.n() != n || self.edges.len() + 1 != n {
            return false;
        }
        let mut dsu = Dsu::new(n);
        self.edges.iter().all(|&(a, b)| a != b && dsu.union(a, b))
    }

    pub fn rooted_at(&self, root: usize) -> RootedTree {
        let adj = self.adjacency();
        let n = self.n();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some(v);
                    children[v].push(u);
                    queue.push_back(u);
                }
            }
        }
        RootedTree {
            root,
            parent,
            children,
        }
    }

    /// Lowest-index vertex of degree one.
    pub fn lowest_leaf(&self) -> usize {
        self.degree.iter().position(|&d| d == 1).unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedTree {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Dense Prim from vertex 0. Among equal keys the lowest-index vertex joins
/// first, and a vertex keeps the lowest-index attachment among equal edges.
pub fn prim_mst(instance: &Instance) -> SpanningTree {
    let n = instance.n();
    let mut in_tree = vec![false; n];
    let mut key = vec![f64::INFINITY; n];
    let mut link = vec![usize::MAX; n];
    let mut edges = Vec::with_capacity(n - 1);
    key[0] = 0.0;
    for _ in 0..n {
        let mut v = usize::MAX;
        for u in 0..n {
            if !in_tree[u] && (v == usize::MAX || key[u] < key[v]) {
                v = u;
            }
        }
        in_tree[v] = true;
        if link[v] != usize::MAX {
            edges.push((link[v], v));
        }
        for u in 0..n {
            if !in_tree[u] {
                let w = instance.weight(v, u);
                if w < key[u] || (w == key[u] && v < link[u]) {
                    key[u] = w;
                    link[u] = v;
                }
            }
        }
    }
    SpanningTree::build(instance, edges)
}

/// Vertices of the component containing `start` once edge `(a, b)` is cut.
fn side_of(adj: &[Vec<usize>], start: usize, cut: (usize, usize)) -> Vec<bool> {
    let mut side = vec![false; adj.len()];
    let mut stack = vec![start];
    side[start] = true;
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if normalize(u, v) == cut || side[u] {
                continue;
            }
            side[u] = true;
            stack.push(u);
        }
    }
    side
}

/// Swaps tree edges at over-degree vertices for equal-weight non-tree edges
/// until every degree is at most `max_degree`. The total weight is unchanged.
pub fn reduce_degree_by_ties(
    instance: &Instance,
    tree: &SpanningTree,
    max_degree: usize,
) -> Result<SpanningTree> {
    let n = instance.n();
    let mut tree = tree.clone();
    while let Some(v) = (0..n).find(|&v| tree.degree[v] > max_degree) {
        let adj = tree.adjacency();
        let in_tree = |a: usize, b: usize| tree.edges.binary_search(&normalize(a, b)).is_ok();
        let mut swap = None;
        'search: for &u in &adj[v] {
            let cut = normalize(v, u);
            let w = instance.weight(v, u);
            let side = side_of(&adj, v, cut);
            for a in 0..n {
                if a == v || !side[a] || tree.degree[a] >= max_degree {
                    continue;
                }
                for b in 0..n {
                    if b == v || side[b] || tree.degree[b] >= max_degree {
                        continue;
                    }
                    if instance.weight(a, b) == w && !in_tree(a, b) {
                        swap = Some((cut, normalize(a, b)));
                        break 'search;
                    }
                }
            }
        }
        let Some((old, new)) = swap else {
            return Err(Error::DegreeViolation {
                vertex: v,
                degree: tree.degree[v],
            });
        };
        let mut edges: Vec<_> = tree.edges.iter().copied().filter(|&e| e != old).collect();
        edges.push(new);
        tree = SpanningTree::build(instance, edges);
    }
    Ok(tree)
}

/// Minimum-weight Hamiltonian path over `vertices` with free endpoints.
/// Equal-weight paths resolve to the lexicographically smallest vertex order.
pub fn covering_path(instance: &Instance, vertices: &[usize]) -> (Vec<usize>, f64) {
    let mut order: Vec<usize> = vertices.to_vec();
    order.sort_unstable();
    if order.len() < 2 {
        return (order, 0.0);
    }
    let last = order.len() - 1;
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        if order[0] < order[last] {
            let cost = order
                .windows(2)
                .map(|w| instance.weight(w[0], w[1]))
                .fold(0.0, |acc, w| acc + w);
            // Lexicographic generation: the first order at a given cost is the smallest.
            if best.as_ref().is_none_or(|b| cost < b.0) {
                best = Some((cost, order.clone()));
            }
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
    let (cost, order) = best.expect("at least one orientation");
    (order, cost)
}

/// Degree-4 spanning tree: root the tree at its lowest-index leaf and take the
/// union of the optimal covering paths of every vertex and its children.
pub fn tree4(instance: &Instance, mst: &SpanningTree) -> Result<SpanningTree> {
    let n = instance.n();
    if !mst.is_spanning_tree(n) {
        return Err(Error::InvalidInstance(
            "input is not a spanning tree of the instance".into(),
        ));
    }
    let base = if mst.max_degree() > MAX_INPUT_DEGREE {
        reduce_degree_by_ties(instance, mst, MAX_INPUT_DEGREE)?
    } else {
        mst.clone()
    };
    let rooted = base.rooted_at(base.lowest_leaf());
    let mut edges = Vec::with_capacity(n - 1);
    for v in 0..n {
        if rooted.children[v].is_empty() {
            continue;
        }
        let mut group = rooted.children[v].clone();
        group.push(v);
        let (path, _) = covering_path(instance, &group);
        edges.extend(path.windows(2).map(|w| (w[0], w[1])));
    }
    SpanningTree::from_edges(instance, edges)
}

/// The `n` Hamiltonian-path trees left by deleting one tour edge each; tree `i`
/// omits the edge from `order[i]` to `order[i + 1 mod n]`.
pub fn tour_spanning_trees(instance: &Instance, tour: &Tour) -> Vec<SpanningTree> {
    let order = tour.order();
    let n = order.len();
    (0..n)
        .map(|i| {
            let edges = (1..n)
                .map(|s| {
                    let a = order[(i + s) % n];
                    let b = order[(i + s + 1) % n];
                    (a, b)
                })
                .collect();
            SpanningTree::build(instance, edges)
        })
        .collect()
}

/// Cycle optimality: every non-tree edge is at least as heavy as each tree
/// edge on the path between its endpoints, within `tolerance`.
pub fn satisfies_cycle_property(instance: &Instance, tree: &SpanningTree, tolerance: f64) -> bool {
    let n = instance.n();
    let adj = tree.adjacency();
    let mut heaviest = vec![0.0f64; n];
    let mut seen = vec![false; n];
    for src in 0..n {
        seen.fill(false);
        heaviest[src] = 0.0;
        seen[src] = true;
        let mut stack = vec![src];
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    heaviest[u] = heaviest[v].max(instance.weight(v, u));
                    stack.push(u);
                }
            }
        }
        for dst in (src + 1)..n {
            if instance.weight(src, dst) + tolerance < heaviest[dst] {
                return false;
            }
        }
    }
    true
}
