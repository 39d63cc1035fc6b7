//! k-RNN heuristics for the symmetric travelling salesman problem, with exact
//! oracles, TSPLIB parsing, degree-bounded spanning trees, claim checks and a
//! benchmark harness.

pub mod bench;
pub mod claims;
pub mod error;
pub mod exact;
pub mod heuristics;
pub mod instance;
pub mod spanning;
pub mod tsplib;

pub use error::{Error, Result};
pub use exact::{
    brute_force_tour, held_karp_tour, optimal_tour, shortest_ham_path, ExactResult, Method,
};
pub use heuristics::{krnn, KrnnConfig, KrnnResult};
pub use instance::{
    is_metric, path_cost, random_instance, tour_cost, DistanceKind, GeneratorKind, HamPath,
    Instance, Mode, Point, Route, Tour,
};
pub use spanning::{prim_mst, tour_spanning_trees, tree4, SpanningTree};
