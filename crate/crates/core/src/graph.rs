//! Weighted digraphs, their underlying undirected graphs, and colorings.
//!
//! Vertices are dense `1..=n`. Colors are positive integers.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::weight::{Weight, WeightError, WeightInt, WeightSum};

pub type Vertex = usize;
pub type Color = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(Vertex, Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("coloring is partial: vertex {0} has no color")]
    PartialColoring(Vertex),
    #[error("coloring covers {found} vertices, graph has {expected}")]
    ColoringSize { expected: usize, found: usize },
    #[error(transparent)]
    Weight(#[from] WeightError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc<I: WeightInt> {
    pub tail: Vertex,
    pub head: Vertex,
    pub weight: Weight<I>,
}

/// `G = (V, E, w)`: at most one arc per ordered pair, no self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDigraph<I: WeightInt> {
    n: usize,
    /// sorted by (tail, head)
    arcs: Vec<Arc<I>>,
    /// in_arcs[v - 1] = indices into `arcs` with head v
    in_arcs: Vec<Vec<usize>>,
    out_arcs: Vec<Vec<usize>>,
}

fn check_vertex(v: Vertex, n: usize) -> Result<(), GraphError> {
    if v == 0 || v > n {
        Err(GraphError::VertexOutOfRange { vertex: v, n })
    } else {
        Ok(())
    }
}

impl<I: WeightInt> WeightedDigraph<I> {
    pub fn new(
        n: usize,
        arcs: impl IntoIterator<Item = (Vertex, Vertex, Weight<I>)>,
    ) -> Result<Self, GraphError> {
        let mut map = BTreeMap::new();
        for (tail, head, weight) in arcs {
            check_vertex(tail, n)?;
            check_vertex(head, n)?;
            if tail == head {
                return Err(GraphError::SelfLoop(tail));
            }
            if map.insert((tail, head), weight).is_some() {
                return Err(GraphError::DuplicateArc(tail, head));
            }
        }
        let arcs: Vec<Arc<I>> =
            map.into_iter().map(|((tail, head), weight)| Arc { tail, head, weight }).collect();
        let mut in_arcs = vec![Vec::new(); n];
        let mut out_arcs = vec![Vec::new(); n];
        for (i, a) in arcs.iter().enumerate() {
            in_arcs[a.head - 1].push(i);
            out_arcs[a.tail - 1].push(i);
        }
        Ok(WeightedDigraph { n, arcs, in_arcs, out_arcs })
    }

    pub fn arcless(n: usize) -> Self {
        Self::new(n, std::iter::empty()).expect("arcless graph is always valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n
    }

    /// Arcs in canonical `(tail, head)` order.
    pub fn arcs(&self) -> &[Arc<I>] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn weight(&self, tail: Vertex, head: Vertex) -> Option<Weight<I>> {
        if head == 0 || head > self.n {
            return None;
        }
        self.in_arcs(head).find(|a| a.tail == tail).map(|a| a.weight)
    }

    pub fn in_arcs(&self, v: Vertex) -> impl Iterator<Item = &Arc<I>> + '_ {
        self.in_arcs[v - 1].iter().map(move |&i| &self.arcs[i])
    }

    pub fn out_arcs(&self, v: Vertex) -> impl Iterator<Item = &Arc<I>> + '_ {
        self.out_arcs[v - 1].iter().map(move |&i| &self.arcs[i])
    }

    /// Index of the arc `(tail, head)` in [`Self::arcs`].
    pub fn arc_index(&self, tail: Vertex, head: Vertex) -> Option<usize> {
        self.arcs.binary_search_by(|a| (a.tail, a.head).cmp(&(tail, head))).ok()
    }

    pub fn in_neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.in_arcs(v).map(|a| a.tail)
    }

    /// `d_S^-(v)`: weighted indegree of `v` in the subgraph induced by `s`.
    /// Zero when `v` is not in `s`.
    pub fn weighted_indegree(&self, v: Vertex, s: &BTreeSet<Vertex>) -> Result<WeightSum<I>, GraphError> {
        check_vertex(v, self.n)?;
        if let Some(&bad) = s.iter().find(|&&u| u == 0 || u > self.n) {
            return Err(GraphError::VertexOutOfRange { vertex: bad, n: self.n });
        }
        if !s.contains(&v) {
            return Ok(WeightSum::zero());
        }
        let mut total = WeightSum::zero();
        for a in self.in_arcs(v).filter(|a| s.contains(&a.tail)) {
            total = total.checked_add_weight(a.weight)?;
        }
        Ok(total)
    }

    /// `d^-(v)` over the whole graph.
    pub fn indegree(&self, v: Vertex) -> Result<WeightSum<I>, GraphError> {
        check_vertex(v, self.n)?;
        let mut total = WeightSum::zero();
        for a in self.in_arcs(v) {
            total = total.checked_add_weight(a.weight)?;
        }
        Ok(total)
    }

    /// Weighted indegree of `v` from in-neighbors sharing its color.
    pub fn same_color_indegree(&self, v: Vertex, coloring: &Coloring) -> Result<WeightSum<I>, GraphError> {
        let cv = coloring.get(v).ok_or(GraphError::PartialColoring(v))?;
        let mut total = WeightSum::zero();
        for a in self.in_arcs(v) {
            let cu = coloring.get(a.tail).ok_or(GraphError::PartialColoring(a.tail))?;
            if cu == cv {
                total = total.checked_add_weight(a.weight)?;
            }
        }
        Ok(total)
    }

    /// Vertices whose same-colored indegree reaches 1, with that indegree.
    pub fn coloring_violations(
        &self,
        coloring: &Coloring,
    ) -> Result<Vec<(Vertex, WeightSum<I>)>, GraphError> {
        self.check_total(coloring)?;
        let mut out = Vec::new();
        for v in self.vertices() {
            let d = self.same_color_indegree(v, coloring)?;
            if !d.is_below_one() {
                out.push((v, d));
            }
        }
        Ok(out)
    }

    pub fn is_valid_coloring(&self, coloring: &Coloring) -> Result<bool, GraphError> {
        Ok(self.coloring_violations(coloring)?.is_empty())
    }

    fn check_total(&self, coloring: &Coloring) -> Result<(), GraphError> {
        if coloring.n() != self.n {
            return Err(GraphError::ColoringSize { expected: self.n, found: coloring.n() });
        }
        match coloring.first_uncolored() {
            Some(v) => Err(GraphError::PartialColoring(v)),
            None => Ok(()),
        }
    }

    /// `Delta^-`; zero for an arcless graph.
    pub fn max_weighted_indegree(&self) -> Result<WeightSum<I>, GraphError> {
        let mut best = WeightSum::zero();
        for v in self.vertices() {
            best = best.max(self.indegree(v)?);
        }
        Ok(best)
    }

    /// Maximum number of in-arcs at any vertex, ignoring weights.
    pub fn max_unweighted_indegree(&self) -> usize {
        self.in_arcs.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `W`, the sum of all arc weights.
    pub fn total_weight(&self) -> Result<WeightSum<I>, GraphError> {
        let mut total = WeightSum::zero();
        for a in &self.arcs {
            total = total.checked_add_weight(a.weight)?;
        }
        Ok(total)
    }

    pub fn max_weight(&self) -> Option<Weight<I>> {
        self.arcs.iter().map(|a| a.weight).max()
    }

    /// Undirected graph with an edge wherever either arc exists, weighted by
    /// the larger of the two arc weights.
    pub fn underlying_graph(&self) -> UndirectedWeightedGraph<I> {
        let mut edges: BTreeMap<(Vertex, Vertex), Weight<I>> = BTreeMap::new();
        for a in &self.arcs {
            let key = (a.tail.min(a.head), a.tail.max(a.head));
            let e = edges.entry(key).or_insert(a.weight);
            *e = (*e).max(a.weight);
        }
        UndirectedWeightedGraph::from_map(self.n, edges)
    }

    /// Undirected graph keeping only pairs joined in both directions, weighted
    /// by the smaller arc weight. Every valid coloring of `self` is valid for
    /// it under the undirected reading.
    pub fn symmetric_core(&self) -> UndirectedWeightedGraph<I> {
        let mut edges = BTreeMap::new();
        for a in self.arcs.iter().filter(|a| a.tail < a.head) {
            if let Some(back) = self.weight(a.head, a.tail) {
                edges.insert((a.tail, a.head), a.weight.min(back));
            }
        }
        UndirectedWeightedGraph::from_map(self.n, edges)
    }

    pub fn is_symmetric(&self) -> bool {
        self.arcs.iter().all(|a| self.weight(a.head, a.tail) == Some(a.weight))
    }

    /// Each edge `{u, v}` of weight `w` becomes arcs `(u, v)` and `(v, u)`,
    /// both of weight `w`.
    pub fn embed_undirected(h: &UndirectedWeightedGraph<I>) -> Self {
        let arcs = h.edges().iter().flat_map(|e| [(e.u, e.v, e.weight), (e.v, e.u, e.weight)]);
        Self::new(h.n(), arcs).expect("a simple undirected graph embeds without conflicts")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge<I: WeightInt> {
    /// `u < v`
    pub u: Vertex,
    pub v: Vertex,
    pub weight: Weight<I>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedWeightedGraph<I: WeightInt> {
    n: usize,
    edges: Vec<Edge<I>>,
    adj: Vec<Vec<(Vertex, Weight<I>)>>,
}

impl<I: WeightInt> UndirectedWeightedGraph<I> {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex, Weight<I>)>,
    ) -> Result<Self, GraphError> {
        let mut map = BTreeMap::new();
        for (u, v, w) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if map.insert((u.min(v), u.max(v)), w).is_some() {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
        }
        Ok(Self::from_map(n, map))
    }

    /// Unit-weight graph from an edge list, for the unweighted problems.
    pub fn unweighted(
        n: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self, GraphError> {
        Self::new(n, edges.into_iter().map(|(u, v)| (u, v, Weight::one())))
    }

    fn from_map(n: usize, map: BTreeMap<(Vertex, Vertex), Weight<I>>) -> Self {
        let edges: Vec<Edge<I>> = map.into_iter().map(|((u, v), weight)| Edge { u, v, weight }).collect();
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u - 1].push((e.v, e.weight));
            adj[e.v - 1].push((e.u, e.weight));
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|&(x, _)| x);
        }
        UndirectedWeightedGraph { n, edges, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge<I>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = (Vertex, Weight<I>)> + '_ {
        self.adj[v - 1].iter().copied()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v - 1].len()
    }

    /// `Delta-hat`
    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u - 1].binary_search_by_key(&v, |&(x, _)| x).is_ok()
    }

    /// `w_max`
    pub fn max_weight(&self) -> Option<Weight<I>> {
        self.edges.iter().map(|e| e.weight).max()
    }

    /// `w_min`, the least positive weight.
    pub fn min_positive_weight(&self) -> Option<Weight<I>> {
        self.edges.iter().map(|e| e.weight).filter(|w| !w.is_zero()).min()
    }

    /// Drops zero-weight edges.
    pub fn positive_part(&self) -> Self {
        let map = self.edges.iter().filter(|e| !e.weight.is_zero()).map(|e| ((e.u, e.v), e.weight)).collect();
        Self::from_map(self.n, map)
    }

    /// Sum of weights to same-colored neighbors, the undirected reading of
    /// the coloring condition.
    pub fn same_color_weight(&self, v: Vertex, coloring: &Coloring) -> Result<WeightSum<I>, GraphError> {
        let cv = coloring.get(v).ok_or(GraphError::PartialColoring(v))?;
        let mut total = WeightSum::zero();
        for (u, w) in self.neighbors(v) {
            if coloring.get(u).ok_or(GraphError::PartialColoring(u))? == cv {
                total = total.checked_add_weight(w)?;
            }
        }
        Ok(total)
    }

    pub fn is_valid_coloring(&self, coloring: &Coloring) -> Result<bool, GraphError> {
        if coloring.n() != self.n {
            return Err(GraphError::ColoringSize { expected: self.n, found: coloring.n() });
        }
        for v in 1..=self.n {
            if !self.same_color_weight(v, coloring)?.is_below_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Number of same-colored neighbors of `v`.
    pub fn same_color_degree(&self, v: Vertex, coloring: &Coloring) -> usize {
        let cv = coloring.get(v);
        self.neighbors(v).filter(|&(u, _)| coloring.get(u) == cv).count()
    }

    pub fn monochromatic_edges(&self, coloring: &Coloring) -> usize {
        self.edges.iter().filter(|e| coloring.get(e.u) == coloring.get(e.v)).count()
    }
}

/// A possibly partial map from vertices `1..=n` to colors `>= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Coloring {
    colors: Vec<Option<Color>>,
}

impl Coloring {
    /// Empty (fully uncolored) coloring of `n` vertices.
    pub fn new(n: usize) -> Self {
        Coloring { colors: vec![None; n] }
    }

    /// Total coloring; `colors[i]` is the color of vertex `i + 1`.
    ///
    /// # Panics
    /// If any color is zero.
    pub fn from_colors(colors: Vec<Color>) -> Self {
        assert!(colors.iter().all(|&c| c >= 1), "colors are 1-based");
        Coloring { colors: colors.into_iter().map(Some).collect() }
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn get(&self, v: Vertex) -> Option<Color> {
        if v == 0 {
            return None;
        }
        self.colors.get(v - 1).copied().flatten()
    }

    /// # Panics
    /// If `v` is out of range or `c` is zero.
    pub fn set(&mut self, v: Vertex, c: Color) {
        assert!(c >= 1, "colors are 1-based");
        self.colors[v - 1] = Some(c);
    }

    pub fn unset(&mut self, v: Vertex) {
        self.colors[v - 1] = None;
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    pub fn first_uncolored(&self) -> Option<Vertex> {
        self.colors.iter().position(Option::is_none).map(|i| i + 1)
    }

    pub fn max_color(&self) -> Color {
        self.colors.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn distinct_colors(&self) -> usize {
        self.colors.iter().flatten().collect::<BTreeSet<_>>().len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, Color)> + '_ {
        self.colors.iter().enumerate().filter_map(|(i, c)| c.map(|c| (i + 1, c)))
    }
}
