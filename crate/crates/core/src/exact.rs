//! Exhaustive reference solvers.
//!
//! These are the ground truth the tree-decomposition solvers and the bounds
//! are checked against. Searches are deterministic: vertices are colored in
//! index order, colors are tried in ascending order, and a vertex may only
//! open the color right after the largest one used so far.

use thiserror::Error;

use crate::graph::{Coloring, GraphError, UndirectedWeightedGraph, WeightedDigraph};
use crate::weight::{UnitScale, WeightError, WeightInt};

/// Default vertex cap for the colorability searches.
pub const DEFAULT_MAX_VERTICES: usize = 16;
/// Vertex cap for [`exact_chromatic_underlying`].
pub const CHROMATIC_MAX_VERTICES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {n} vertices, exact search is capped at {max}")]
    TooLarge { n: usize, max: usize },
    #[error(transparent)]
    Weight(#[from] WeightError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_vertices: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_vertices: DEFAULT_MAX_VERTICES }
    }
}

/// An optimal coloring and its color count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub chromatic: usize,
    pub witness: Coloring,
}

fn guard(n: usize, max: usize) -> Result<(), OracleError> {
    if n > max {
        Err(OracleError::TooLarge { n, max })
    } else {
        Ok(())
    }
}

/// Backtracking over colorings in index order with per-vertex spent
/// budgets in common-denominator units.
struct WeightedSearch {
    n: usize,
    one: u128,
    /// (tail, units) per head, 0-based
    in_arcs: Vec<Vec<(usize, u128)>>,
    out_arcs: Vec<Vec<(usize, u128)>>,
    colors: Vec<usize>,
    spent: Vec<u128>,
}

impl WeightedSearch {
    fn new<I: WeightInt>(g: &WeightedDigraph<I>) -> Result<Self, WeightError> {
        let scale = UnitScale::for_weights(g.arcs().iter().map(|a| a.weight))?;
        let n = g.n();
        let mut in_arcs = vec![Vec::new(); n];
        let mut out_arcs = vec![Vec::new(); n];
        for a in g.arcs() {
            let u = scale.units(a.weight)?;
            in_arcs[a.head - 1].push((a.tail - 1, u));
            out_arcs[a.tail - 1].push((a.head - 1, u));
        }
        Ok(WeightedSearch { n, one: scale.one, in_arcs, out_arcs, colors: vec![0; n], spent: vec![0; n] })
    }

    fn run(&mut self, k: usize) -> Option<Coloring> {
        self.colors.iter_mut().for_each(|c| *c = 0);
        self.spent.iter_mut().for_each(|s| *s = 0);
        self.extend(0, k, 0).then(|| Coloring::from_colors(self.colors.clone()))
    }

    fn extend(&mut self, v: usize, k: usize, used: usize) -> bool {
        if v == self.n {
            return true;
        }
        for c in 1..=k.min(used + 1) {
            // earlier vertices are the colored ones
            let own: u128 =
                self.in_arcs[v].iter().filter(|&&(u, _)| u < v && self.colors[u] == c).map(|&(_, w)| w).sum();
            if own >= self.one {
                continue;
            }
            let fits = self.out_arcs[v]
                .iter()
                .filter(|&&(x, _)| x < v && self.colors[x] == c)
                .all(|&(x, w)| self.spent[x] + w < self.one);
            if !fits {
                continue;
            }
            self.colors[v] = c;
            self.spent[v] = own;
            for &(x, w) in &self.out_arcs[v] {
                if x < v && self.colors[x] == c {
                    self.spent[x] += w;
                }
            }
            if self.extend(v + 1, k, used.max(c)) {
                return true;
            }
            for &(x, w) in &self.out_arcs[v] {
                if x < v && self.colors[x] == c {
                    self.spent[x] -= w;
                }
            }
            self.colors[v] = 0;
            self.spent[v] = 0;
        }
        false
    }
}

/// A weighted improper coloring with at most `k` colors, if one exists.
pub fn weighted_k_coloring<I: WeightInt>(
    g: &WeightedDigraph<I>,
    k: usize,
) -> Result<Option<Coloring>, OracleError> {
    weighted_k_coloring_with(g, k, &OracleConfig::default())
}

pub fn weighted_k_coloring_with<I: WeightInt>(
    g: &WeightedDigraph<I>,
    k: usize,
    config: &OracleConfig,
) -> Result<Option<Coloring>, OracleError> {
    guard(g.n(), config.max_vertices)?;
    if g.n() == 0 {
        return Ok(Some(Coloring::new(0)));
    }
    Ok(WeightedSearch::new(g)?.run(k))
}

/// `chi_w(G)` with a witness, or `None` when more than `k_limit` colors are
/// needed.
pub fn exact_chi_w<I: WeightInt>(
    g: &WeightedDigraph<I>,
    k_limit: usize,
) -> Result<Option<SolveResult>, OracleError> {
    exact_chi_w_with(g, k_limit, &OracleConfig::default())
}

pub fn exact_chi_w_with<I: WeightInt>(
    g: &WeightedDigraph<I>,
    k_limit: usize,
    config: &OracleConfig,
) -> Result<Option<SolveResult>, OracleError> {
    guard(g.n(), config.max_vertices)?;
    if g.n() == 0 {
        return Ok(Some(SolveResult { chromatic: 0, witness: Coloring::new(0) }));
    }
    let mut search = WeightedSearch::new(g)?;
    for k in 1..=k_limit {
        if let Some(witness) = search.run(k) {
            return Ok(Some(SolveResult { chromatic: k, witness }));
        }
    }
    Ok(None)
}

/// Every vertex has at most `d` same-colored neighbors. Weights are ignored.
pub fn is_defective_coloring<I: WeightInt>(
    h: &UndirectedWeightedGraph<I>,
    c: &Coloring,
    d: usize,
) -> Result<bool, GraphError> {
    if c.n() != h.n() {
        return Err(GraphError::ColoringSize { expected: h.n(), found: c.n() });
    }
    if let Some(v) = c.first_uncolored() {
        return Err(GraphError::PartialColoring(v));
    }
    Ok((1..=h.n()).all(|v| h.same_color_degree(v, c) <= d))
}

struct DefectiveSearch {
    n: usize,
    d: usize,
    adj: Vec<Vec<usize>>,
    colors: Vec<usize>,
    same: Vec<usize>,
}

impl DefectiveSearch {
    fn new<I: WeightInt>(h: &UndirectedWeightedGraph<I>, d: usize) -> Self {
        let n = h.n();
        let adj = (1..=n).map(|v| h.neighbors(v).map(|(u, _)| u - 1).collect()).collect();
        DefectiveSearch { n, d, adj, colors: vec![0; n], same: vec![0; n] }
    }

    fn run(&mut self, k: usize) -> Option<Coloring> {
        self.colors.iter_mut().for_each(|c| *c = 0);
        self.same.iter_mut().for_each(|s| *s = 0);
        self.extend(0, k, 0).then(|| Coloring::from_colors(self.colors.clone()))
    }

    fn extend(&mut self, v: usize, k: usize, used: usize) -> bool {
        if v == self.n {
            return true;
        }
        for c in 1..=k.min(used + 1) {
            let mates: Vec<usize> =
                self.adj[v].iter().copied().filter(|&u| u < v && self.colors[u] == c).collect();
            if mates.len() > self.d || mates.iter().any(|&u| self.same[u] + 1 > self.d) {
                continue;
            }
            self.colors[v] = c;
            self.same[v] = mates.len();
            mates.iter().for_each(|&u| self.same[u] += 1);
            if self.extend(v + 1, k, used.max(c)) {
                return true;
            }
            mates.iter().for_each(|&u| self.same[u] -= 1);
            self.colors[v] = 0;
            self.same[v] = 0;
        }
        false
    }
}

/// A `d`-defective coloring with at most `k` colors, if one exists.
pub fn defective_k_coloring<I: WeightInt>(
    h: &UndirectedWeightedGraph<I>,
    d: usize,
    k: usize,
) -> Result<Option<Coloring>, OracleError> {
    guard(h.n(), DEFAULT_MAX_VERTICES)?;
    if h.n() == 0 {
        return Ok(Some(Coloring::new(0)));
    }
    Ok(DefectiveSearch::new(h, d).run(k))
}

/// Least `k` admitting a `d`-defective `k`-coloring, or `None` above
/// `k_limit`.
pub fn exact_defective_number<I: WeightInt>(
    h: &UndirectedWeightedGraph<I>,
    d: usize,
    k_limit: usize,
) -> Result<Option<SolveResult>, OracleError> {
    guard(h.n(), DEFAULT_MAX_VERTICES)?;
    if h.n() == 0 {
        return Ok(Some(SolveResult { chromatic: 0, witness: Coloring::new(0) }));
    }
    let mut search = DefectiveSearch::new(h, d);
    for k in 1..=k_limit {
        if let Some(witness) = search.run(k) {
            return Ok(Some(SolveResult { chromatic: k, witness }));
        }
    }
    Ok(None)
}

/// Chromatic number of the graph left after dropping zero-weight edges,
/// by DSATUR-ordered branch and bound.
pub fn exact_chromatic_underlying<I: WeightInt>(
    h: &UndirectedWeightedGraph<I>,
) -> Result<usize, OracleError> {
    guard(h.n(), CHROMATIC_MAX_VERTICES)?;
    let h = h.positive_part();
    let n = h.n();
    if n == 0 {
        return Ok(0);
    }
    let adj: Vec<Vec<usize>> = (1..=n).map(|v| h.neighbors(v).map(|(u, _)| u - 1).collect()).collect();
    let mut dsatur = Dsatur { adj, colors: vec![0; n], best: n };
    dsatur.branch(0);
    Ok(dsatur.best)
}

struct Dsatur {
    adj: Vec<Vec<usize>>,
    colors: Vec<usize>,
    best: usize,
}

impl Dsatur {
    fn pick(&self) -> Option<usize> {
        (0..self.adj.len()).filter(|&v| self.colors[v] == 0).max_by_key(|&v| {
            let mut seen: Vec<usize> =
                self.adj[v].iter().map(|&u| self.colors[u]).filter(|&c| c != 0).collect();
            seen.sort_unstable();
            seen.dedup();
            // ties: larger degree, then smaller index
            (seen.len(), self.adj[v].len(), std::cmp::Reverse(v))
        })
    }

    fn branch(&mut self, used: usize) {
        if used >= self.best {
            return;
        }
        let Some(v) = self.pick() else {
            self.best = used;
            return;
        };
        for c in 1..=(used + 1) {
            if c >= self.best {
                break;
            }
            if self.adj[v].iter().any(|&u| self.colors[u] == c) {
                continue;
            }
            self.colors[v] = c;
            self.branch(used.max(c));
            self.colors[v] = 0;
        }
    }
}
