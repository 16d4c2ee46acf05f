//! Rooted tree decompositions: construction, validation and the
//! bag-membership queries the dynamic programs rely on.
//!
//! Bags are indexed from 0 internally; files and the CLI use 1-based bag ids.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::graph::{Vertex, WeightedDigraph};
use crate::weight::WeightInt;

/// Largest graph accepted by [`Strategy::ExactSmall`].
pub const MAX_EXACT_VERTICES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("a decomposition needs at least one bag")]
    NoBags,
    #[error("bag index {index} out of range (have {count} bags)")]
    BagOutOfRange { index: usize, count: usize },
    #[error("tree edges do not form a tree on {bags} bags")]
    NotATree { bags: usize },
    #[error("vertex 0 in bag {0}; vertices are 1-based")]
    ZeroVertex(usize),
    #[error("exact decomposition limited to {max} vertices, graph has {n}")]
    TooLargeForExact { n: usize, max: usize },
}

/// A failed tree-decomposition property, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("bag {bag} holds vertex {vertex}, outside the graph")]
    ForeignVertex { bag: usize, vertex: Vertex },
    #[error("vertex {0} is in no bag")]
    UncoveredVertex(Vertex),
    #[error("arc ({0}, {1}) has no bag containing both endpoints")]
    UncoveredArc(Vertex, Vertex),
    #[error("bags containing vertex {0} are not connected")]
    DisconnectedVertex(Vertex),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    MinDegree,
    MinFill,
    ExactSmall,
}

/// Which vertex set of a bag counts as its membership when locating the bag
/// that first decides a vertex's color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relevance {
    /// the bag itself
    BagOnly,
    /// the bag together with all in-neighbors of its vertices
    BagPlusInNeighbors,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<Vertex>>,
    edges: Vec<(usize, usize)>,
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    preorder: Vec<usize>,
}

impl TreeDecomposition {
    pub fn new(
        bags: Vec<Vec<Vertex>>,
        edges: Vec<(usize, usize)>,
        root: usize,
    ) -> Result<Self, DecompositionError> {
        let count = bags.len();
        if count == 0 {
            return Err(DecompositionError::NoBags);
        }
        let bags: Vec<Vec<Vertex>> =
            bags.into_iter().map(|b| b.into_iter().collect::<BTreeSet<_>>().into_iter().collect()).collect();
        if let Some(i) = bags.iter().position(|b: &Vec<Vertex>| b.first() == Some(&0)) {
            return Err(DecompositionError::ZeroVertex(i));
        }
        for &idx in edges.iter().flat_map(|(a, b)| [a, b]).chain([&root]) {
            if idx >= count {
                return Err(DecompositionError::BagOutOfRange { index: idx, count });
            }
        }
        let mut edges: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        if edges.len() != count - 1
            || edges.iter().any(|&(a, b)| a == b)
            || edges.windows(2).any(|w| w[0] == w[1])
        {
            return Err(DecompositionError::NotATree { bags: count });
        }
        let mut adj = vec![Vec::new(); count];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let (parent, children, preorder) = orient(&adj, root);
        if preorder.len() != count {
            return Err(DecompositionError::NotATree { bags: count });
        }
        Ok(TreeDecomposition { bags, edges, root, parent, children, preorder })
    }

    /// One bag holding every vertex; valid for any graph on `n` vertices.
    pub fn trivial(n: usize) -> Self {
        Self::new(vec![(1..=n).collect()], vec![], 0).expect("single bag is a tree")
    }

    /// Bags in order along a path.
    pub fn path(bags: Vec<Vec<Vertex>>) -> Result<Self, DecompositionError> {
        let edges = (1..bags.len()).map(|i| (i - 1, i)).collect();
        Self::new(bags, edges, 0)
    }

    pub fn bags(&self) -> &[Vec<Vertex>] {
        &self.bags
    }

    pub fn bag(&self, i: usize) -> &[Vertex] {
        &self.bags[i]
    }

    pub fn bag_count(&self) -> usize {
        self.bags.len()
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    /// Children of bag `i` in ascending bag-index order.
    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    /// Bags in preorder from the root.
    pub fn preorder(&self) -> &[usize] {
        &self.preorder
    }

    /// Largest bag size minus one; `-1` for a single empty bag.
    pub fn width(&self) -> isize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0) as isize - 1
    }

    pub fn root_at(&self, i: usize) -> Result<Self, DecompositionError> {
        Self::new(self.bags.clone(), self.edges.clone(), i)
    }

    pub fn contains(&self, bag: usize, v: Vertex) -> bool {
        self.bags[bag].binary_search(&v).is_ok()
    }

    /// Checks vertex coverage, the connected-subtree property and arc
    /// coverage, in that order, against the underlying graph of `g`.
    pub fn validate<I: WeightInt>(&self, g: &WeightedDigraph<I>) -> Result<(), Violation> {
        let n = g.n();
        let mut bag_count = vec![0usize; n + 1];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v > n {
                    return Err(Violation::ForeignVertex { bag: i, vertex: v });
                }
                bag_count[v] += 1;
            }
        }
        if let Some(v) = (1..=n).find(|&v| bag_count[v] == 0) {
            return Err(Violation::UncoveredVertex(v));
        }
        // The bags holding v induce a forest; it is a tree iff it has exactly
        // one fewer edge than nodes.
        let mut edge_count = vec![0usize; n + 1];
        for &(a, b) in &self.edges {
            for &v in &self.bags[a] {
                if self.contains(b, v) {
                    edge_count[v] += 1;
                }
            }
        }
        if let Some(v) = (1..=n).find(|&v| edge_count[v] + 1 != bag_count[v]) {
            return Err(Violation::DisconnectedVertex(v));
        }

        let mut covered: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
        for bag in &self.bags {
            for (k, &u) in bag.iter().enumerate() {
                for &v in &bag[k + 1..] {
                    covered.insert((u, v));
                }
            }
        }
        for a in g.arcs() {
            if !covered.contains(&(a.tail.min(a.head), a.tail.max(a.head))) {
                return Err(Violation::UncoveredArc(a.tail, a.head));
            }
        }
        Ok(())
    }

    /// `V_i`: bag `i` together with the in-neighbors of its vertices, sorted.
    pub fn extended_bag<I: WeightInt>(&self, g: &WeightedDigraph<I>, i: usize) -> Vec<Vertex> {
        let mut set: BTreeSet<Vertex> = self.bags[i].iter().copied().collect();
        for &v in &self.bags[i] {
            set.extend(g.in_neighbors(v));
        }
        set.into_iter().collect()
    }

    /// Root of the subtree of bags whose relevant set contains `v`: the bag
    /// that fixes `v`'s color in the tree dynamic programs. `None` when no
    /// bag is relevant to `v`.
    pub fn deciding_bag<I: WeightInt>(
        &self,
        g: &WeightedDigraph<I>,
        v: Vertex,
        mode: Relevance,
    ) -> Option<usize> {
        let relevant = |i: usize| match mode {
            Relevance::BagOnly => self.contains(i, v),
            Relevance::BagPlusInNeighbors => {
                self.bags[i].iter().any(|&x| x == v || g.in_neighbors(x).any(|u| u == v))
            }
        };
        // preorder visits a subtree root before anything below it
        self.preorder.iter().copied().find(|&i| relevant(i))
    }
}

fn orient(adj: &[Vec<usize>], root: usize) -> (Vec<Option<usize>>, Vec<Vec<usize>>, Vec<usize>) {
    let count = adj.len();
    let mut parent = vec![None; count];
    let mut children = vec![Vec::new(); count];
    let mut seen = vec![false; count];
    let mut preorder = Vec::with_capacity(count);
    let mut stack = vec![root];
    seen[root] = true;
    while let Some(i) = stack.pop() {
        preorder.push(i);
        let mut kids: Vec<usize> = adj[i].iter().copied().filter(|&j| !seen[j]).collect();
        kids.sort_unstable();
        for &j in &kids {
            seen[j] = true;
            parent[j] = Some(i);
        }
        stack.extend(kids.iter().rev());
        children[i] = kids;
    }
    (parent, children, preorder)
}

/// Builds a decomposition of the underlying graph of `g`.
pub fn build<I: WeightInt>(
    g: &WeightedDigraph<I>,
    strategy: Strategy,
) -> Result<TreeDecomposition, DecompositionError> {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition::new(vec![vec![]], vec![], 0);
    }
    let mut adj = vec![BTreeSet::new(); n];
    for a in g.arcs() {
        adj[a.tail - 1].insert(a.head - 1);
        adj[a.head - 1].insert(a.tail - 1);
    }
    let order = match strategy {
        Strategy::MinDegree => greedy_order(&adj, |adj, v| adj[v].len()),
        Strategy::MinFill => greedy_order(&adj, |adj, v| (fill_in(adj, v), adj[v].len())),
        Strategy::ExactSmall => {
            if n > MAX_EXACT_VERTICES {
                return Err(DecompositionError::TooLargeForExact { n, max: MAX_EXACT_VERTICES });
            }
            exact_order(&adj)
        }
    };
    Ok(from_elimination_order(&adj, &order))
}

/// Width of eliminating vertices (0-based) in the given order.
pub fn elimination_width(adj: &[BTreeSet<usize>], order: &[usize]) -> usize {
    let mut adj = adj.to_vec();
    let mut width = 0;
    for &v in order {
        width = width.max(adj[v].len());
        eliminate(&mut adj, v);
    }
    width
}

fn eliminate(adj: &mut [BTreeSet<usize>], v: usize) -> Vec<usize> {
    let nbrs: Vec<usize> = std::mem::take(&mut adj[v]).into_iter().collect();
    for &a in &nbrs {
        adj[a].remove(&v);
        for &b in &nbrs {
            if a != b {
                adj[a].insert(b);
            }
        }
    }
    nbrs
}

fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let nbrs: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (k, &a) in nbrs.iter().enumerate() {
        missing += nbrs[k + 1..].iter().filter(|&&b| !adj[a].contains(&b)).count();
    }
    missing
}

fn greedy_order<K: Ord>(
    adj: &[BTreeSet<usize>],
    score: impl Fn(&[BTreeSet<usize>], usize) -> K,
) -> Vec<usize> {
    let n = adj.len();
    let mut adj = adj.to_vec();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (score(&adj, v), v)).expect("a vertex remains");
        alive[v] = false;
        eliminate(&mut adj, v);
        order.push(v);
    }
    order
}

/// Minimum-width elimination order by depth-first branch and bound.
///
/// The graph left after eliminating a set of vertices does not depend on the
/// order they were eliminated in, so each eliminated set is explored once at
/// its best width so far.
fn exact_order(adj: &[BTreeSet<usize>]) -> Vec<usize> {
    let n = adj.len();
    let masks: Vec<u32> = adj.iter().map(|s| s.iter().fold(0u32, |m, &v| m | (1 << v))).collect();
    let seed = greedy_order(adj, |adj, v| (fill_in(adj, v), adj[v].len()));
    let mut search = ExactSearch {
        n,
        best_width: elimination_width(adj, &seed),
        best_order: seed,
        seen: HashMap::new(),
        order: Vec::with_capacity(n),
    };
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    search.dfs(&masks, all, 0);
    search.best_order
}

struct ExactSearch {
    n: usize,
    best_width: usize,
    best_order: Vec<usize>,
    /// eliminated set -> smallest width it was reached with
    seen: HashMap<u32, usize>,
    order: Vec<usize>,
}

impl ExactSearch {
    fn dfs(&mut self, adj: &[u32], remaining: u32, width: usize) {
        if width >= self.best_width {
            return;
        }
        let left = remaining.count_ones() as usize;
        if left <= width + 1 {
            // the rest is a set of at most width + 1 vertices
            self.best_width = width;
            self.best_order = self.order.clone();
            self.best_order.extend((0..self.n).filter(|&v| remaining & (1 << v) != 0));
            return;
        }
        let eliminated = !remaining;
        match self.seen.get(&eliminated) {
            Some(&w) if w <= width => return,
            _ => {
                self.seen.insert(eliminated, width);
            }
        }
        let candidates: Vec<usize> = (0..self.n).filter(|&v| remaining & (1 << v) != 0).collect();
        // a simplicial vertex can always go first
        let simplicial = candidates.iter().copied().find(|&v| {
            let nb = adj[v] & remaining;
            (0..self.n).filter(|&u| nb & (1 << u) != 0).all(|u| (adj[u] | (1 << u)) & nb == nb)
        });
        let branch: Vec<usize> = match simplicial {
            Some(v) => vec![v],
            None => candidates,
        };
        for v in branch {
            let nb = adj[v] & remaining;
            let w = width.max(nb.count_ones() as usize);
            if w >= self.best_width {
                continue;
            }
            let mut next = adj.to_vec();
            for u in (0..self.n).filter(|&u| nb & (1 << u) != 0) {
                next[u] |= nb & !(1 << u);
                next[u] &= !(1 << v);
            }
            self.order.push(v);
            self.dfs(&next, remaining & !(1 << v), w);
            self.order.pop();
        }
    }
}

/// Turns an elimination order (0-based vertices) into a rooted decomposition
/// whose width equals the order's width, then merges bags contained in a
/// neighboring bag.
fn from_elimination_order(adj: &[BTreeSet<usize>], order: &[usize]) -> TreeDecomposition {
    let n = adj.len();
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut work = adj.to_vec();
    let mut bags: Vec<BTreeSet<Vertex>> = Vec::with_capacity(n);
    let mut links: Vec<Option<usize>> = Vec::with_capacity(n);
    for &v in order {
        let nbrs = eliminate(&mut work, v);
        let mut bag: BTreeSet<Vertex> = nbrs.iter().map(|&u| u + 1).collect();
        bag.insert(v + 1);
        bags.push(bag);
        // attach to the bag of the earliest-eliminated remaining neighbor
        links.push(nbrs.iter().copied().min_by_key(|&u| position[u]).map(|u| position[u]));
    }
    // separate components are chained through their roots
    let roots: Vec<usize> = (0..n).filter(|&i| links[i].is_none()).collect();
    let mut edges: Vec<(usize, usize)> = (0..n).filter_map(|i| links[i].map(|j| (i, j))).collect();
    edges.extend(roots.windows(2).map(|w| (w[0], w[1])));

    let (bags, edges) = merge_contained(bags, edges);
    let root = 0;
    TreeDecomposition::new(bags.into_iter().map(|b| b.into_iter().collect()).collect(), edges, root)
        .expect("elimination produces a tree")
}

fn merge_contained(
    mut bags: Vec<BTreeSet<Vertex>>,
    mut edges: Vec<(usize, usize)>,
) -> (Vec<BTreeSet<Vertex>>, Vec<(usize, usize)>) {
    let mut alive = vec![true; bags.len()];
    loop {
        let found = edges.iter().enumerate().find_map(|(k, &(a, b))| {
            if bags[a].is_subset(&bags[b]) {
                Some((k, a, b))
            } else if bags[b].is_subset(&bags[a]) {
                Some((k, b, a))
            } else {
                None
            }
        });
        let Some((k, gone, keep)) = found else { break };
        edges.swap_remove(k);
        for e in edges.iter_mut() {
            if e.0 == gone {
                e.0 = keep;
            }
            if e.1 == gone {
                e.1 = keep;
            }
        }
        alive[gone] = false;
        bags[gone].clear();
    }
    let mut remap = vec![usize::MAX; bags.len()];
    let mut kept = Vec::new();
    for (i, bag) in bags.into_iter().enumerate() {
        if alive[i] {
            remap[i] = kept.len();
            kept.push(bag);
        }
    }
    let edges = edges.into_iter().map(|(a, b)| (remap[a], remap[b])).collect();
    (kept, edges)
}

#[cfg(test)]
mod tests {
    use super::Strategy;
    use super::*;
    use crate::fixtures;
    use crate::generators::{self, WeightModel};
    use crate::weight::Weight;
    use proptest::prelude::*;

    type G = WeightedDigraph<i64>;

    fn embed(h: &crate::graph::UndirectedWeightedGraph<i64>) -> G {
        G::embed_undirected(h)
    }

    /// Treewidth by the subset recurrence
    /// `TW(S) = min_{v in S} max(TW(S - v), |Q(S - v, v)|)`, where `Q(S, v)`
    /// are the vertices outside `S + v` reachable from `v` through `S`.
    fn brute_force_treewidth(g: &G) -> usize {
        let n = g.n();
        if n == 0 {
            return 0;
        }
        let mut adj = vec![0u32; n];
        for a in g.arcs() {
            adj[a.tail - 1] |= 1 << (a.head - 1);
            adj[a.head - 1] |= 1 << (a.tail - 1);
        }
        let q = |s: u32, v: usize| -> usize {
            let mut seen = 1u32 << v;
            let mut stack = vec![v];
            let mut out = 0u32;
            while let Some(x) = stack.pop() {
                for y in 0..n {
                    if adj[x] & (1 << y) != 0 && seen & (1 << y) == 0 {
                        seen |= 1 << y;
                        if s & (1 << y) != 0 {
                            stack.push(y);
                        } else {
                            out |= 1 << y;
                        }
                    }
                }
            }
            out.count_ones() as usize
        };
        let full = (1u32 << n) - 1;
        let mut tw = vec![usize::MAX; 1 << n];
        tw[0] = 0;
        for s in 1..=full {
            for v in (0..n).filter(|&v| s & (1 << v) != 0) {
                let rest = s & !(1 << v);
                tw[s as usize] = tw[s as usize].min(tw[rest as usize].max(q(rest, v)));
            }
        }
        tw[full as usize]
    }

    #[test]
    fn width_and_root_at() {
        let d = TreeDecomposition::path(vec![vec![1, 2], vec![2, 3]]).unwrap();
        assert_eq!(d.width(), 1);
        let r = d.root_at(1).unwrap();
        assert_eq!(r.width(), 1);
        assert_eq!(r.root(), 1);
        assert_eq!(r.bags(), d.bags());
        assert_eq!(r.children(1), &[0]);
        let empty = TreeDecomposition::new(vec![vec![]], vec![], 0).unwrap();
        assert_eq!(empty.width(), -1);
    }

    #[test]
    fn rejects_non_trees() {
        assert_eq!(TreeDecomposition::new(vec![], vec![], 0), Err(DecompositionError::NoBags));
        assert_eq!(
            TreeDecomposition::new(vec![vec![1], vec![2], vec![3]], vec![(0, 1)], 0),
            Err(DecompositionError::NotATree { bags: 3 })
        );
        assert_eq!(
            TreeDecomposition::new(vec![vec![1], vec![2], vec![3]], vec![(0, 1), (1, 0)], 0),
            Err(DecompositionError::NotATree { bags: 3 })
        );
        assert!(matches!(
            TreeDecomposition::new(vec![vec![1]], vec![], 4),
            Err(DecompositionError::BagOutOfRange { index: 4, .. })
        ));
    }

    #[test]
    fn validate_partition_style_path() {
        // A = 1, B = 2, items 3..=5
        let h = crate::graph::UndirectedWeightedGraph::<i64>::unweighted(
            5,
            [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (1, 5), (2, 5)],
        )
        .unwrap();
        let g = embed(&h);
        let d = TreeDecomposition::path(vec![vec![1, 3, 2], vec![1, 4, 2], vec![1, 5, 2]]).unwrap();
        assert_eq!(d.validate(&g), Ok(()));
        let broken = TreeDecomposition::path(vec![vec![1, 3, 2], vec![4, 2], vec![1, 5, 2]]).unwrap();
        // connectivity is reported before the arc {A, v_2} it also uncovers
        assert_eq!(broken.validate(&g), Err(Violation::DisconnectedVertex(1)));
        let uncovered =
            TreeDecomposition::path(vec![vec![1, 3, 2], vec![1, 2], vec![1, 5, 2], vec![2, 4]]).unwrap();
        assert_eq!(uncovered.validate(&g), Err(Violation::UncoveredArc(1, 4)));
        // add the arc coverage back elsewhere, keep A out of the middle bag
        let broken = TreeDecomposition::path(vec![vec![1, 3, 2], vec![4, 2], vec![1, 5, 2, 4]]).unwrap();
        assert_eq!(broken.validate(&g), Err(Violation::DisconnectedVertex(1)));
        assert_eq!(TreeDecomposition::trivial(5).validate(&g), Ok(()));
    }

    #[test]
    fn validate_reports_uncovered_and_foreign() {
        let g = embed(&fixtures::path(3));
        let d = TreeDecomposition::path(vec![vec![1, 2]]).unwrap();
        assert_eq!(d.validate(&g), Err(Violation::UncoveredVertex(3)));
        let d = TreeDecomposition::path(vec![vec![1, 2], vec![2, 3, 7]]).unwrap();
        assert_eq!(d.validate(&g), Err(Violation::ForeignVertex { bag: 1, vertex: 7 }));
    }

    #[test]
    fn build_small_cases() {
        let p4 = embed(&fixtures::path(4));
        for s in [Strategy::MinDegree, Strategy::MinFill, Strategy::ExactSmall] {
            let d = build(&p4, s).unwrap();
            assert_eq!(d.validate(&p4), Ok(()));
            assert_eq!(d.width(), 1, "{s:?}");
        }
        let k4 = fixtures::complete::<i64>(4, Weight::new(1, 3).unwrap());
        assert_eq!(build(&k4, Strategy::ExactSmall).unwrap().width(), 3);
        let empty = G::arcless(0);
        assert_eq!(build(&empty, Strategy::MinFill).unwrap().width(), -1);
        let isolated = G::arcless(3);
        let d = build(&isolated, Strategy::ExactSmall).unwrap();
        assert_eq!(d.width(), 0);
        assert_eq!(d.validate(&isolated), Ok(()));
    }

    #[test]
    fn prism_treewidth_matches_subset_oracle() {
        // the pentagonal prism has treewidth 4; the triangular one has 3
        let g = embed(&fixtures::prism());
        let d = build(&g, Strategy::ExactSmall).unwrap();
        assert_eq!(d.validate(&g), Ok(()));
        assert_eq!(brute_force_treewidth(&g), 4);
        assert_eq!(d.width(), 4);
    }

    #[test]
    fn exact_size_guard() {
        let g = G::arcless(MAX_EXACT_VERTICES + 1);
        assert_eq!(
            build(&g, Strategy::ExactSmall),
            Err(DecompositionError::TooLargeForExact { n: MAX_EXACT_VERTICES + 1, max: MAX_EXACT_VERTICES })
        );
    }

    #[test]
    fn deciding_bag_examples() {
        let g = embed(&fixtures::path(4));
        let d = TreeDecomposition::path(vec![vec![1, 2], vec![2, 3], vec![3, 4]]).unwrap();
        assert_eq!(d.deciding_bag(&g, 3, Relevance::BagOnly), Some(1));
        assert_eq!(d.deciding_bag(&g, 1, Relevance::BagOnly), Some(0));
        // 3 is an in-neighbor of 2, which sits in the root bag
        assert_eq!(d.deciding_bag(&g, 3, Relevance::BagPlusInNeighbors), Some(0));
        assert_eq!(d.deciding_bag(&g, 4, Relevance::BagPlusInNeighbors), Some(1));
        let single = TreeDecomposition::trivial(4);
        for v in 1..=4 {
            assert_eq!(single.deciding_bag(&g, v, Relevance::BagOnly), Some(0));
        }
    }

    fn random_graph() -> impl proptest::strategy::Strategy<Value = G> {
        (1usize..=8, 0u32..=4, any::<u64>()).prop_map(|(n, p, seed)| {
            generators::random_instance(n, p as f64 / 8.0, WeightModel::Dyadic(2), seed).unwrap()
        })
    }

    use proptest::strategy::Strategy as _;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn built_decompositions_validate(g in random_graph(), root in any::<prop::sample::Index>()) {
            let exact = build(&g, Strategy::ExactSmall).unwrap();
            prop_assert_eq!(exact.validate(&g), Ok(()));
            let tw = brute_force_treewidth(&g);
            prop_assert_eq!(exact.width(), tw as isize);
            for s in [Strategy::MinDegree, Strategy::MinFill] {
                let d = build(&g, s).unwrap();
                prop_assert_eq!(d.validate(&g), Ok(()));
                prop_assert!(d.width() >= exact.width());
                let rerooted = d.root_at(root.index(d.bag_count())).unwrap();
                prop_assert_eq!(rerooted.validate(&g), Ok(()));
                prop_assert_eq!(rerooted.width(), d.width());
            }
        }

        #[test]
        fn extended_bags_form_subtrees(g in random_graph(), root in any::<prop::sample::Index>()) {
            let d = build(&g, Strategy::MinFill).unwrap();
            let d = d.root_at(root.index(d.bag_count())).unwrap();
            let ext: Vec<Vec<Vertex>> = (0..d.bag_count()).map(|i| d.extended_bag(&g, i)).collect();
            for v in g.vertices() {
                let holds: Vec<bool> = ext.iter().map(|b| b.binary_search(&v).is_ok()).collect();
                let nodes = holds.iter().filter(|&&h| h).count();
                let links = d.tree_edges().iter().filter(|&&(a, b)| holds[a] && holds[b]).count();
                prop_assert_eq!(links + 1, nodes, "vertex {}", v);
                // exactly one relevant bag has an irrelevant (or no) parent
                let tops: Vec<usize> = (0..d.bag_count())
                    .filter(|&i| holds[i] && d.parent(i).is_none_or(|p| !holds[p]))
                    .collect();
                prop_assert_eq!(tops.len(), 1);
                prop_assert_eq!(Some(tops[0]), d.deciding_bag(&g, v, Relevance::BagPlusInNeighbors));
            }
        }
    }
}
