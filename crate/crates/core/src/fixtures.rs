//! Small reference instances with known answers.

use crate::graph::{Coloring, UndirectedWeightedGraph, WeightedDigraph};
use crate::weight::{Weight, WeightInt};

fn w<I: WeightInt>(num: u8, den: u8) -> Weight<I> {
    Weight::new(I::from(num).unwrap(), I::from(den).unwrap()).unwrap()
}

/// Five vertices, nine arcs with decimal weights. Maximum weighted indegree
/// is 13/10 at vertex 2.
pub fn five_vertex<I: WeightInt>() -> WeightedDigraph<I> {
    WeightedDigraph::new(
        5,
        [
            (2, 1, w(7, 10)),
            (1, 3, w(7, 10)),
            (3, 1, w(2, 10)),
            (2, 3, w(3, 10)),
            (3, 4, w(9, 10)),
            (4, 2, w(6, 10)),
            (4, 5, w(5, 10)),
            (5, 4, w(2, 10)),
            (5, 2, w(7, 10)),
        ],
    )
    .unwrap()
}

/// A valid 3-coloring of [`five_vertex`].
pub fn five_vertex_valid_coloring() -> Coloring {
    Coloring::from_colors(vec![1, 2, 2, 3, 3])
}

/// An invalid coloring of [`five_vertex`]: vertex 3 receives 7/10 + 3/10
/// from same-colored in-neighbors.
pub fn five_vertex_invalid_coloring() -> Coloring {
    Coloring::from_colors(vec![1, 1, 1, 2, 3])
}

/// Pentagonal prism: outer cycle 1..5 and inner cycle 6..10 with weight 1,
/// spokes `{i, i + 5}` with weight 1/2. Cubic, weighted chromatic number 3.
pub fn prism<I: WeightInt>() -> UndirectedWeightedGraph<I> {
    prism_with(w(1, 1), w(1, 2))
}

/// The prism with custom cycle and spoke weights.
pub fn prism_with<I: WeightInt>(cycle: Weight<I>, spoke: Weight<I>) -> UndirectedWeightedGraph<I> {
    let mut edges = Vec::new();
    for i in 1..=5 {
        let j = i % 5 + 1;
        edges.push((i, j, cycle));
        edges.push((i + 5, j + 5, cycle));
        edges.push((i, i + 5, spoke));
    }
    UndirectedWeightedGraph::new(10, edges).unwrap()
}

/// Triangle with all six arcs of weight 1/2.
pub fn triangle_half<I: WeightInt>() -> WeightedDigraph<I> {
    let h = UndirectedWeightedGraph::new(3, [(1, 2, w(1, 2)), (2, 3, w(1, 2)), (1, 3, w(1, 2))]).unwrap();
    WeightedDigraph::embed_undirected(&h)
}

/// Complete graph on `n` vertices with every arc of the given weight.
pub fn complete<I: WeightInt>(n: usize, weight: Weight<I>) -> WeightedDigraph<I> {
    let arcs = (1..=n).flat_map(|u| (1..=n).filter(move |&v| v != u).map(move |v| (u, v, weight)));
    WeightedDigraph::new(n, arcs).unwrap()
}

/// Cycle `1 - 2 - ... - n - 1` as an undirected unit-weight graph.
pub fn cycle<I: WeightInt>(n: usize) -> UndirectedWeightedGraph<I> {
    UndirectedWeightedGraph::unweighted(n, (1..=n).map(|i| (i, i % n + 1))).unwrap()
}

/// Path `1 - 2 - ... - n` as an undirected unit-weight graph.
pub fn path<I: WeightInt>(n: usize) -> UndirectedWeightedGraph<I> {
    UndirectedWeightedGraph::unweighted(n, (1..n).map(|i| (i, i + 1))).unwrap()
}
