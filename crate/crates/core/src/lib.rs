//! Weighted improper coloring of weighted digraphs.
//!
//! A coloring is valid when every vertex receives total weight strictly
//! below 1 from same-colored in-neighbors. The crate provides an exact
//! rational graph model, tree decompositions, an exhaustive oracle, bounds,
//! two tree-decomposition dynamic programs and instance generators.
//!
//! Everything is generic over the integer type of the rational weights;
//! the aliases below fix it to `i64`, with `Wide*` variants over `i128`.

pub mod bounds;
pub mod decomposition;
pub mod exact;
pub mod experiment;
pub mod fixtures;
pub mod fpt_budget;
pub mod fpt_indegree;
pub mod generators;
pub mod graph;
pub mod io;
pub mod weight;

pub use decomposition::TreeDecomposition;
pub use exact::SolveResult;
pub use graph::{Color, Coloring, Vertex};
pub use weight::WeightInt;

/// Integer type of the default weight rationals.
pub type DefaultInt = i64;

pub type Weight = weight::Weight<DefaultInt>;
pub type WeightSum = weight::WeightSum<DefaultInt>;
pub type WeightedDigraph = graph::WeightedDigraph<DefaultInt>;
pub type UndirectedWeightedGraph = graph::UndirectedWeightedGraph<DefaultInt>;

pub type WideWeight = weight::Weight<i128>;
pub type WideWeightedDigraph = graph::WeightedDigraph<i128>;
pub type WideUndirectedWeightedGraph = graph::UndirectedWeightedGraph<i128>;
