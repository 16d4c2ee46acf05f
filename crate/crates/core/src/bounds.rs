//! Lower and upper bounds on the weighted improper chromatic number, and the
//! two constructive recoloring procedures behind them.
//!
//! Zero-weight edges never constrain a coloring, so every degree-based
//! quantity here is taken over positive-weight edges only.

use std::fmt;

use num_traits::CheckedAdd;
use thiserror::Error;

use crate::decomposition::TreeDecomposition;
use crate::exact::{exact_chromatic_underlying, OracleError};
use crate::graph::{Coloring, GraphError, UndirectedWeightedGraph, Vertex, WeightedDigraph};
use crate::weight::{cap, isqrt_floor, Weight, WeightError, WeightInt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{k} colors is below the guaranteed bound {bound}")]
    TooFewColors { k: usize, bound: usize },
    #[error("edge {{{0}, {1}}} has weight 1")]
    WeightOne(Vertex, Vertex),
    #[error("vertex {vertex} has degree {degree} > 3")]
    DegreeTooHigh { vertex: Vertex, degree: usize },
}

/// A coloring produced by local recoloring, with the number of moves made.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recoloring {
    pub coloring: Coloring,
    pub steps: usize,
}

/// `ceil(chi(H+) / (cap(w_min) + 1))`, where `H+` drops zero-weight edges.
///
/// The argument must be undirected. For a digraph pass its
/// [`WeightedDigraph::symmetric_core`]: every valid coloring of the digraph is
/// valid for the core, while the max-weight underlying graph can overshoot.
pub fn lower_bound_chromatic<I: WeightInt>(h: &UndirectedWeightedGraph<I>) -> Result<usize, BoundsError> {
    if h.n() == 0 {
        return Ok(0);
    }
    let Some(w_min) = h.min_positive_weight() else {
        return Ok(1);
    };
    let chi = exact_chromatic_underlying(h)?;
    let per_class = cap(w_min)? as usize + 1;
    Ok(chi.div_ceil(per_class))
}

/// `Delta-hat` and `w_max` of the positive underlying graph, if it has edges.
fn degree_and_max_weight<I: WeightInt>(
    g: &WeightedDigraph<I>,
) -> (UndirectedWeightedGraph<I>, Option<(usize, Weight<I>)>) {
    let h = g.underlying_graph().positive_part();
    let stats = h.max_weight().map(|w| (h.max_degree(), w));
    (h, stats)
}

/// `ceil(Delta-hat / (cap(w_max) + 1)) + 1`.
pub fn upper_bound_degree_weight<I: WeightInt>(g: &WeightedDigraph<I>) -> Result<usize, BoundsError> {
    match degree_and_max_weight(g).1 {
        None => Ok(1),
        Some((delta, w_max)) => Ok(delta.div_ceil(cap(w_max)? as usize + 1) + 1),
    }
}

/// Local search behind [`upper_bound_degree_weight`].
///
/// Starts from `(v - 1) mod k + 1` and, while some vertex has more than
/// `cap(w_max)` same-colored neighbors in the positive underlying graph,
/// moves the smallest such vertex to the smallest color class where it has
/// at most `cap(w_max)` of them. Each move strictly lowers the number of
/// monochromatic edges, so there are at most `|E|` moves.
pub fn greedy_recolor<I: WeightInt>(g: &WeightedDigraph<I>, k: usize) -> Result<Recoloring, BoundsError> {
    let bound = upper_bound_degree_weight(g)?;
    if k < bound {
        return Err(BoundsError::TooFewColors { k, bound });
    }
    let n = g.n();
    let mut coloring = Coloring::from_colors((0..n).map(|i| i % k + 1).collect());
    let (h, stats) = degree_and_max_weight(g);
    let Some((_, w_max)) = stats else {
        return Ok(Recoloring { coloring, steps: 0 });
    };
    let allowed = cap(w_max)? as usize;
    let mut mono = h.monochromatic_edges(&coloring);
    let mut steps = 0;
    while let Some(v) = (1..=n).find(|&v| h.same_color_degree(v, &coloring) > allowed) {
        let mut per_class = vec![0usize; k + 1];
        for (u, _) in h.neighbors(v) {
            per_class[coloring.get(u).expect("total")] += 1;
        }
        let target = (1..=k).find(|&c| per_class[c] <= allowed).expect("k >= bound leaves a class with room");
        coloring.set(v, target);
        steps += 1;
        let next = h.monochromatic_edges(&coloring);
        assert!(next < mono, "recoloring must remove monochromatic edges");
        mono = next;
    }
    Ok(Recoloring { coloring, steps })
}

/// `2 * floor(sqrt(2 W)) + 1`, `W` the total arc weight.
pub fn upper_bound_sum_weights<I: WeightInt>(g: &WeightedDigraph<I>) -> Result<usize, BoundsError> {
    let w = g.total_weight()?.as_ratio();
    let twice = w.checked_add(&w).ok_or(WeightError::Overflow)?;
    Ok(2 * isqrt_floor(twice)? as usize + 1)
}

/// `floor(2 Delta^- + 1)`.
pub fn upper_bound_indegree<I: WeightInt>(g: &WeightedDigraph<I>) -> Result<usize, BoundsError> {
    Ok(g.max_weighted_indegree()?.floor_twice_plus_one()? as usize)
}

/// Two-coloring of a graph with maximum degree 3 and all weights below 1 in
/// which no vertex has more than one same-colored neighbor.
///
/// Starts from alternating colors by index and flips the smallest vertex
/// with two or more same-colored neighbors until none is left; each flip
/// removes at least one monochromatic edge.
pub fn subcubic_two_coloring<I: WeightInt>(
    h: &UndirectedWeightedGraph<I>,
) -> Result<Recoloring, BoundsError> {
    if let Some(e) = h.edges().iter().find(|e| e.weight == Weight::one()) {
        return Err(BoundsError::WeightOne(e.u, e.v));
    }
    if let Some(v) = (1..=h.n()).find(|&v| h.degree(v) > 3) {
        return Err(BoundsError::DegreeTooHigh { vertex: v, degree: h.degree(v) });
    }
    let n = h.n();
    let mut coloring = Coloring::from_colors((0..n).map(|i| i % 2 + 1).collect());
    let mut mono = h.monochromatic_edges(&coloring);
    let mut steps = 0;
    while let Some(v) = (1..=n).find(|&v| h.same_color_degree(v, &coloring) >= 2) {
        let c = coloring.get(v).expect("total");
        coloring.set(v, 3 - c);
        steps += 1;
        let next = h.monochromatic_edges(&coloring);
        assert!(next < mono, "a flip must remove monochromatic edges");
        mono = next;
    }
    Ok(Recoloring { coloring, steps })
}

/// All bound values for one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub lower: usize,
    pub upper_degree_weight: usize,
    pub upper_sum_weights: usize,
    pub upper_indegree: usize,
    /// `width + 1` of a supplied decomposition
    pub treewidth_cap: Option<usize>,
}

impl BoundReport {
    /// Smallest of the upper bounds, including the treewidth cap if present.
    pub fn best_upper(&self) -> usize {
        [self.upper_degree_weight, self.upper_sum_weights, self.upper_indegree]
            .into_iter()
            .chain(self.treewidth_cap)
            .min()
            .expect("non-empty")
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lower_chromatic={}", self.lower)?;
        writeln!(f, "upper_degree_weight={}", self.upper_degree_weight)?;
        writeln!(f, "upper_sum_weights={}", self.upper_sum_weights)?;
        writeln!(f, "upper_indegree={}", self.upper_indegree)?;
        if let Some(t) = self.treewidth_cap {
            writeln!(f, "treewidth_cap={t}")?;
        }
        Ok(())
    }
}

/// Computes every bound; the lower bound runs on the symmetric core of `g`.
pub fn bound_report<I: WeightInt>(
    g: &WeightedDigraph<I>,
    decomposition: Option<&TreeDecomposition>,
) -> Result<BoundReport, BoundsError> {
    Ok(BoundReport {
        lower: lower_bound_chromatic(&g.symmetric_core())?,
        upper_degree_weight: upper_bound_degree_weight(g)?,
        upper_sum_weights: upper_bound_sum_weights(g)?,
        upper_indegree: upper_bound_indegree(g)?,
        treewidth_cap: decomposition.map(|d| (d.width() + 1) as usize),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{build, Strategy};
    use crate::exact::exact_chi_w;
    use crate::fixtures;
    use crate::generators::{random_instance, WeightModel};
    use proptest::prelude::*;

    type G = WeightedDigraph<i64>;
    type H = UndirectedWeightedGraph<i64>;

    fn w(n: i64, d: i64) -> Weight<i64> {
        Weight::new(n, d).unwrap()
    }

    fn star(weight: Weight<i64>) -> G {
        G::embed_undirected(&H::new(5, (2..=5).map(|v| (1, v, weight))).unwrap())
    }

    #[test]
    fn lower_bound_cases() {
        assert_eq!(lower_bound_chromatic(&fixtures::prism::<i64>()).unwrap(), 2);
        let k4 = H::unweighted(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        assert_eq!(lower_bound_chromatic(&k4).unwrap(), 4);
        let edge = H::new(2, [(1, 2, w(1, 2))]).unwrap();
        assert_eq!(lower_bound_chromatic(&edge).unwrap(), 1);
        let zero = H::new(2, [(1, 2, Weight::zero())]).unwrap();
        assert_eq!(lower_bound_chromatic(&zero).unwrap(), 1);
    }

    #[test]
    fn lower_bound_needs_symmetric_core_on_digraphs() {
        // a directed triangle of weight-1/2 arcs is 1-colorable, yet its
        // max-weight underlying graph is a triangle with chi = 3
        let g = G::new(3, [(1, 2, w(1, 2)), (2, 3, w(1, 2)), (3, 1, w(1, 2))]).unwrap();
        assert_eq!(exact_chi_w(&g, 3).unwrap().unwrap().chromatic, 1);
        assert_eq!(lower_bound_chromatic(&g.underlying_graph()).unwrap(), 2);
        assert_eq!(lower_bound_chromatic(&g.symmetric_core()).unwrap(), 1);
    }

    #[test]
    fn degree_weight_cases() {
        assert_eq!(upper_bound_degree_weight(&G::embed_undirected(&fixtures::prism())).unwrap(), 4);
        assert_eq!(upper_bound_degree_weight(&fixtures::triangle_half::<i64>()).unwrap(), 2);
        assert_eq!(upper_bound_degree_weight(&star(w(1, 4))).unwrap(), 2);
        assert_eq!(upper_bound_degree_weight(&G::arcless(3)).unwrap(), 1);
        assert_eq!(upper_bound_degree_weight(&fixtures::five_vertex::<i64>()).unwrap(), 3);
    }

    #[test]
    fn greedy_cases() {
        let prism = G::embed_undirected(&fixtures::prism());
        let r = greedy_recolor(&prism, 4).unwrap();
        assert!(prism.is_valid_coloring(&r.coloring).unwrap());
        assert_eq!(fixtures::prism::<i64>().monochromatic_edges(&r.coloring), 0);

        let k3 = fixtures::complete::<i64>(3, Weight::one());
        let r = greedy_recolor(&k3, 3).unwrap();
        assert_eq!(r.coloring.distinct_colors(), 3);

        let r = greedy_recolor(&G::arcless(4), 1).unwrap();
        assert_eq!(r.coloring, Coloring::from_colors(vec![1; 4]));
        assert_eq!(r.steps, 0);

        assert_eq!(greedy_recolor(&prism, 3), Err(BoundsError::TooFewColors { k: 3, bound: 4 }));
    }

    #[test]
    fn sum_and_indegree_cases() {
        let f = fixtures::five_vertex::<i64>();
        assert_eq!(upper_bound_sum_weights(&f).unwrap(), 7);
        assert_eq!(upper_bound_indegree(&f).unwrap(), 3);
        assert_eq!(upper_bound_sum_weights(&G::arcless(2)).unwrap(), 1);
        assert_eq!(upper_bound_indegree(&G::arcless(2)).unwrap(), 1);
        let two = G::new(2, [(1, 2, Weight::one()), (2, 1, Weight::one())]).unwrap();
        assert_eq!(upper_bound_sum_weights(&two).unwrap(), 5);
        let single = G::new(2, [(1, 2, Weight::one())]).unwrap();
        assert_eq!(upper_bound_indegree(&single).unwrap(), 3);
    }

    #[test]
    fn subcubic_cases() {
        let soft = fixtures::prism_with::<i64>(w(9, 10), w(9, 10));
        let r = subcubic_two_coloring(&soft).unwrap();
        assert!(soft.is_valid_coloring(&r.coloring).unwrap());
        assert!(r.steps <= soft.edge_count());
        assert_eq!(exact_chi_w(&G::embed_undirected(&soft), 3).unwrap().unwrap().chromatic, 2);

        let c4 = H::new(4, (1..=4).map(|i| (i, i % 4 + 1, w(1, 2)))).unwrap();
        let r = subcubic_two_coloring(&c4).unwrap();
        assert!(c4.is_valid_coloring(&r.coloring).unwrap());

        assert_eq!(subcubic_two_coloring(&fixtures::prism::<i64>()), Err(BoundsError::WeightOne(1, 2)));
        let star4 = H::new(5, (2..=5).map(|v| (1, v, w(1, 2)))).unwrap();
        assert_eq!(subcubic_two_coloring(&star4), Err(BoundsError::DegreeTooHigh { vertex: 1, degree: 4 }));
    }

    #[test]
    fn report_lines() {
        let f = fixtures::five_vertex::<i64>();
        let text = bound_report(&f, None).unwrap().to_string();
        assert!(text.contains("upper_indegree=3\n"));
        assert!(text.contains("upper_sum_weights=7\n"));
        assert!(!text.contains("treewidth_cap"));
        let prism = G::embed_undirected(&fixtures::prism());
        let d = build(&prism, Strategy::ExactSmall).unwrap();
        let r = bound_report(&prism, Some(&d)).unwrap();
        assert_eq!(r.lower, 2);
        assert_eq!(r.upper_degree_weight, 4);
        assert_eq!(r.treewidth_cap, Some(5));
        assert_eq!(r.best_upper(), 4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn sandwich(n in 1usize..=9, p in 0u32..=5, seed in any::<u64>(), den in 1u64..=6) {
            let g: G = random_instance(n, p as f64 / 6.0, WeightModel::Rational(den), seed).unwrap();
            let d = build(&g, Strategy::ExactSmall).unwrap();
            let r = bound_report(&g, Some(&d)).unwrap();
            let chi = exact_chi_w(&g, n).unwrap().unwrap().chromatic;
            prop_assert!(r.lower <= chi, "lower {} > chi {}", r.lower, chi);
            prop_assert!(chi <= r.best_upper(), "chi {} > {:?}", chi, r);
        }

        #[test]
        fn greedy_is_valid_and_short(n in 1usize..=12, p in 0u32..=5, seed in any::<u64>(), den in 1u64..=6) {
            let g: G = random_instance(n, p as f64 / 6.0, WeightModel::Rational(den), seed).unwrap();
            let k = upper_bound_degree_weight(&g).unwrap();
            let r = greedy_recolor(&g, k).unwrap();
            prop_assert!(g.is_valid_coloring(&r.coloring).unwrap());
            prop_assert!(r.steps <= g.underlying_graph().positive_part().edge_count());
            prop_assert!(r.coloring.max_color() <= k);
        }
    }
}
