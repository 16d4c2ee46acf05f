//! Dynamic program over a rooted tree decomposition that colors each bag
//! together with the in-neighbors of its vertices.
//!
//! For bag `i` let `V_i` be `X_i` plus all in-neighbors of `X_i`. A call for
//! bag `i` receives the colors its parent already fixed on `V_i ∩ V_p`,
//! tries every extension to `V_i` with colors `1..=width+1`, keeps those
//! under which every vertex of `X_i` has same-color indegree below 1, and
//! returns the least achievable highest color index over the subtree.
//! Since `V_i` holds all in-neighbors of `X_i`, the check at `X_i` sees the
//! full indegree.

use std::collections::HashMap;

use thiserror::Error;

use crate::decomposition::{Relevance, TreeDecomposition, Violation};
use crate::exact::SolveResult;
use crate::graph::{Color, Coloring, Vertex, WeightedDigraph};
use crate::weight::{UnitScale, WeightError, WeightInt};

const INFEASIBLE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FptError {
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(#[from] Violation),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error("no coloring within the width + 1 color cap")]
    Infeasible,
}

/// Memo table counters from one solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MemoStats {
    pub entries: usize,
    pub hits: usize,
    /// largest `|V_i ∩ V_p|` over all bags
    pub max_key_width: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndegreeConfig {
    /// Extend colorings in canonical first-use order: a vertex may take a
    /// color already in use, or the smallest unused one. Off means every
    /// color of the palette is tried at every vertex.
    pub canonical_colors: bool,
}

impl Default for IndegreeConfig {
    fn default() -> Self {
        IndegreeConfig { canonical_colors: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndegreeSolution {
    pub result: SolveResult,
    pub stats: MemoStats,
}

/// A vertex position and its in-arcs as (tail position, units).
type Check = (usize, Vec<(usize, u128)>);

struct Bag {
    /// `V_i`, sorted
    ext: Vec<Vertex>,
    /// positions in `ext` of `V_i ∩ V_p`, which form the memo key
    shared: Vec<usize>,
    /// positions in `ext` colored here
    fresh: Vec<usize>,
    /// `checks[t]`: vertices of `X_i` whose closed in-neighborhood is fully
    /// colored once `t` fresh vertices are, as (position, [(tail position, units)])
    checks: Vec<Vec<Check>>,
    /// child bag and the positions in `ext` of its key vertices
    children: Vec<(usize, Vec<usize>)>,
}

struct Plan {
    bags: Vec<Bag>,
    palette: usize,
    one: u128,
    canonical: bool,
}

impl Plan {
    fn new<I: WeightInt>(
        g: &WeightedDigraph<I>,
        d: &TreeDecomposition,
        config: IndegreeConfig,
    ) -> Result<Self, FptError> {
        d.validate(g)?;
        let scale = UnitScale::for_weights(g.arcs().iter().map(|a| a.weight))?;
        let ext: Vec<Vec<Vertex>> = (0..d.bag_count()).map(|i| d.extended_bag(g, i)).collect();
        let mut bags = Vec::with_capacity(d.bag_count());
        for i in 0..d.bag_count() {
            let mine = &ext[i];
            let (shared, fresh): (Vec<usize>, Vec<usize>) = match d.parent(i) {
                Some(p) => (0..mine.len()).partition(|&k| ext[p].binary_search(&mine[k]).is_ok()),
                None => (Vec::new(), (0..mine.len()).collect()),
            };
            let mut step = vec![0usize; mine.len()];
            for (t, &k) in fresh.iter().enumerate() {
                step[k] = t + 1;
            }
            let pos = |v: Vertex| mine.binary_search(&v).expect("in-neighbors lie in V_i");
            let mut checks = vec![Vec::new(); fresh.len() + 1];
            for &x in d.bag(i) {
                let px = pos(x);
                let mut arcs = Vec::new();
                let mut ready = step[px];
                for a in g.in_arcs(x) {
                    let pu = pos(a.tail);
                    ready = ready.max(step[pu]);
                    arcs.push((pu, scale.units(a.weight)?));
                }
                checks[ready].push((px, arcs));
            }
            let children = d
                .children(i)
                .iter()
                .map(|&c| {
                    let keys = ext[c].iter().filter_map(|v| mine.binary_search(v).ok()).collect();
                    (c, keys)
                })
                .collect();
            bags.push(Bag { ext: mine.clone(), shared, fresh, checks, children });
        }
        Ok(Plan {
            bags,
            palette: (d.width() + 1) as usize,
            one: scale.one,
            canonical: config.canonical_colors,
        })
    }

    fn check(&self, colors: &[Color], list: &[(usize, Vec<(usize, u128)>)]) -> bool {
        list.iter().all(|(px, arcs)| {
            let c = colors[*px];
            let spent: u128 = arcs.iter().filter(|&&(pu, _)| colors[pu] == c).map(|&(_, w)| w).sum();
            spent < self.one
        })
    }
}

struct Entry {
    value: usize,
    /// colors of the fresh vertices in the first optimal extension
    choice: Vec<Color>,
}

#[derive(Default)]
struct State {
    memo: Vec<HashMap<Vec<Color>, Entry>>,
    hits: usize,
    memoize: bool,
}

/// Depth-first extension of the fresh vertices of one bag.
struct Extend<'a> {
    plan: &'a Plan,
    bag: usize,
    colors: Vec<Color>,
    /// how many positions hold each color
    in_use: Vec<usize>,
    best: usize,
    choice: Vec<Color>,
}

impl Extend<'_> {
    fn run(&mut self, st: &mut State, t: usize, top: usize) {
        let plan = self.plan;
        let bag = &plan.bags[self.bag];
        if top >= self.best {
            return;
        }
        if t == bag.fresh.len() {
            let mut value = top;
            for (c, keys) in &bag.children {
                let key: Vec<Color> = keys.iter().map(|&k| self.colors[k]).collect();
                value = value.max(color(plan, st, *c, &key));
                if value >= self.best {
                    return;
                }
            }
            self.best = value;
            self.choice = bag.fresh.iter().map(|&k| self.colors[k]).collect();
            return;
        }
        let pos = bag.fresh[t];
        let mut opened = false;
        for c in 1..=plan.palette {
            if plan.canonical && self.in_use[c] == 0 {
                if opened {
                    break;
                }
                opened = true;
            }
            self.colors[pos] = c;
            self.in_use[c] += 1;
            if plan.check(&self.colors, &bag.checks[t + 1]) {
                self.run(st, t + 1, top.max(c));
            }
            self.in_use[c] -= 1;
        }
        self.colors[pos] = 0;
    }
}

/// Least highest color index over the subtree of `bag`, given the colors of
/// its key vertices.
fn color(plan: &Plan, st: &mut State, bag: usize, key: &[Color]) -> usize {
    if st.memoize {
        if let Some(e) = st.memo[bag].get(key) {
            st.hits += 1;
            return e.value;
        }
    }
    let b = &plan.bags[bag];
    let mut colors = vec![0; b.ext.len()];
    let mut in_use = vec![0; plan.palette + 2];
    for (&k, &c) in b.shared.iter().zip(key) {
        colors[k] = c;
        in_use[c] += 1;
    }
    let (value, choice) = if plan.check(&colors, &b.checks[0]) {
        let top = key.iter().copied().max().unwrap_or(0);
        let mut ext = Extend { plan, bag, colors, in_use, best: INFEASIBLE, choice: Vec::new() };
        ext.run(st, 0, top);
        (ext.best, ext.choice)
    } else {
        (INFEASIBLE, Vec::new())
    };
    if st.memoize {
        st.memo[bag].insert(key.to_vec(), Entry { value, choice });
    }
    value
}

/// `chi_w(G)` and an optimal coloring, using a valid decomposition of `G`.
pub fn solve_fpt_indegree<I: WeightInt>(
    g: &WeightedDigraph<I>,
    d: &TreeDecomposition,
) -> Result<IndegreeSolution, FptError> {
    solve_fpt_indegree_with(g, d, IndegreeConfig::default())
}

pub fn solve_fpt_indegree_with<I: WeightInt>(
    g: &WeightedDigraph<I>,
    d: &TreeDecomposition,
    config: IndegreeConfig,
) -> Result<IndegreeSolution, FptError> {
    let plan = Plan::new(g, d, config)?;
    let mut st =
        State { memo: (0..plan.bags.len()).map(|_| HashMap::new()).collect(), hits: 0, memoize: true };
    let root = d.root();
    let chromatic = color(&plan, &mut st, root, &[]);
    if chromatic == INFEASIBLE {
        return Err(FptError::Infeasible);
    }
    let mut colors = vec![0; g.n() + 1];
    let mut decided = vec![None; g.n() + 1];
    replay(&plan, &st, root, &[], &mut colors, &mut decided);
    for (v, &bag) in decided.iter().enumerate().skip(1) {
        assert_eq!(
            bag,
            d.deciding_bag(g, v, Relevance::BagPlusInNeighbors),
            "vertex {v} colored away from its deciding bag"
        );
    }
    let stats = MemoStats {
        entries: st.memo.iter().map(HashMap::len).sum(),
        hits: st.hits,
        max_key_width: plan.bags.iter().map(|b| b.shared.len()).max().unwrap_or(0),
    };
    Ok(IndegreeSolution {
        result: SolveResult { chromatic, witness: Coloring::from_colors(colors[1..].to_vec()) },
        stats,
    })
}

/// Walks the stored first-optimal choices from the root, fixing each vertex
/// exactly once.
fn replay(
    plan: &Plan,
    st: &State,
    bag: usize,
    key: &[Color],
    colors: &mut [Color],
    decided: &mut [Option<usize>],
) {
    let b = &plan.bags[bag];
    let entry = st.memo[bag].get(key).expect("every state on the optimal path was solved");
    for (&k, &c) in b.fresh.iter().zip(&entry.choice) {
        let v = b.ext[k];
        assert_eq!(colors[v], 0, "vertex {v} colored twice");
        colors[v] = c;
        decided[v] = Some(bag);
    }
    for (c, keys) in &b.children {
        let child_key: Vec<Color> = keys.iter().map(|&k| colors[b.ext[k]]).collect();
        replay(plan, st, *c, &child_key, colors, decided);
    }
}

/// The same recursion without a memo table; value only.
pub fn chromatic_fpt_indegree_unmemoized<I: WeightInt>(
    g: &WeightedDigraph<I>,
    d: &TreeDecomposition,
) -> Result<usize, FptError> {
    let plan = Plan::new(g, d, IndegreeConfig::default())?;
    let mut st = State { memo: Vec::new(), hits: 0, memoize: false };
    match color(&plan, &mut st, d.root(), &[]) {
        INFEASIBLE => Err(FptError::Infeasible),
        v => Ok(v),
    }
}
