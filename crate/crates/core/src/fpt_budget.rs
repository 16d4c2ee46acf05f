//! Dynamic program over a rooted tree decomposition that tracks, for each
//! bag vertex, how much same-color incoming weight it may still absorb.
//!
//! Weights must be multiples of `2^-b`; they are handled as integer units
//! `w * 2^b`, and every vertex starts with `2^b - 1` units, so "indegree
//! below 1" becomes "budget never negative". An arc is charged to its head
//! at the topmost bag holding both endpoints, if they share a color there.
//! `Color` colors the new vertices of a bag and charges its arcs;
//! `Distribute` splits the remaining budgets of a bag among its children,
//! one child at a time in ascending bag order.

use std::collections::HashMap;

use thiserror::Error;

use crate::decomposition::{Relevance, TreeDecomposition, Violation};
use crate::exact::SolveResult;
use crate::graph::{Color, Coloring, Vertex, WeightedDigraph};
use crate::weight::{Weight, WeightInt};

const INFEASIBLE: usize = usize::MAX;

/// Largest supported precision; budgets are kept in `u64` units.
pub const MAX_BITS: u32 = 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BudgetError {
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(#[from] Violation),
    #[error("arc ({tail}, {head}) has weight {weight}, not a multiple of 2^-{bits}")]
    NotFixedPoint { tail: Vertex, head: Vertex, weight: String, bits: u32 },
    #[error("precision must be between 1 and {MAX_BITS} bits, got {0}")]
    BadBits(u32),
    #[error("no coloring within the width + 1 color cap")]
    Infeasible,
}

/// Ok when every weight is `m / 2^b` for an integer `m`; otherwise the
/// first offending arc.
pub fn check_fixed_point<I: WeightInt>(g: &WeightedDigraph<I>, bits: u32) -> Result<(), BudgetError> {
    if bits == 0 || bits > MAX_BITS {
        return Err(BudgetError::BadBits(bits));
    }
    match g.arcs().iter().find(|a| a.weight.dyadic_units(bits).is_none()) {
        None => Ok(()),
        Some(a) => {
            Err(BudgetError::NotFixedPoint { tail: a.tail, head: a.head, weight: a.weight.to_string(), bits })
        }
    }
}

/// Least `b >= 1` for which [`check_fixed_point`] passes.
pub fn minimal_bits<I: WeightInt>(g: &WeightedDigraph<I>) -> Result<u32, BudgetError> {
    let mut bits = 1;
    for a in g.arcs() {
        match a.weight.dyadic_bits() {
            Some(b) if b <= MAX_BITS => bits = bits.max(b),
            _ => {
                return Err(BudgetError::NotFixedPoint {
                    tail: a.tail,
                    head: a.head,
                    weight: a.weight.to_string(),
                    bits: MAX_BITS,
                })
            }
        }
    }
    Ok(bits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BudgetStats {
    pub color_entries: usize,
    pub distribute_entries: usize,
    pub hits: usize,
    /// largest `|X_i ∩ X_p|` over all bags
    pub max_key_width: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetConfig {
    /// Extend colorings in canonical first-use order, as in the in-degree
    /// solver.
    pub canonical_colors: bool,
    /// Never hand a child more budget than the arcs in its subtree can
    /// consume, and key memo entries by the budget that can still matter.
    /// Off means every split `0..=r(v)` is tried and keys hold raw budgets.
    pub clamp_budgets: bool,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        BudgetConfig { canonical_colors: true, clamp_budgets: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetSolution {
    pub result: SolveResult,
    pub stats: BudgetStats,
    /// for each arc (in [`WeightedDigraph::arcs`] order), the bag where the
    /// witness charged it, if its endpoints share a color
    pub charged_at: Vec<Option<usize>>,
}

struct Charge {
    tail: usize,
    head: usize,
    units: u64,
    arc: usize,
}

struct ChildLink {
    bag: usize,
    /// positions in the parent bag of `X_p ∩ X_c`, i.e. the child's key
    shared: Vec<usize>,
    /// most units the child's subtree can charge to each shared vertex
    need: Vec<u64>,
}

struct Bag {
    vertices: Vec<Vertex>,
    shared: Vec<usize>,
    fresh: Vec<usize>,
    /// `charges[t]`: arcs whose endpoints are both colored once `t` fresh
    /// vertices are
    charges: Vec<Vec<Charge>>,
    children: Vec<ChildLink>,
    /// `rest_keys[j]`: positions that children `j..` read, with the total
    /// units those children can charge to each
    rest_keys: Vec<(Vec<usize>, Vec<u64>)>,
}

struct Plan {
    bags: Vec<Bag>,
    palette: usize,
    full: u64,
    config: BudgetConfig,
}

impl Plan {
    fn new<I: WeightInt>(
        g: &WeightedDigraph<I>,
        d: &TreeDecomposition,
        bits: u32,
        config: BudgetConfig,
    ) -> Result<Self, BudgetError> {
        check_fixed_point(g, bits)?;
        d.validate(g)?;
        let units = |w: Weight<I>| w.dyadic_units(bits).expect("checked");
        // vertices appearing in each subtree, children before parents
        let mut below: Vec<Vec<bool>> = vec![vec![false; g.n() + 1]; d.bag_count()];
        for &i in d.preorder().iter().rev() {
            for &v in d.bag(i) {
                below[i][v] = true;
            }
            for &c in d.children(i) {
                below[i] = below[i].iter().zip(&below[c]).map(|(&a, &b)| a || b).collect();
            }
        }
        let mut bags = Vec::with_capacity(d.bag_count());
        for i in 0..d.bag_count() {
            let vertices = d.bag(i).to_vec();
            let in_parent = |v: Vertex| d.parent(i).is_some_and(|p| d.contains(p, v));
            let (shared, fresh): (Vec<usize>, Vec<usize>) =
                (0..vertices.len()).partition(|&k| in_parent(vertices[k]));
            let mut step = vec![0usize; vertices.len()];
            for (t, &k) in fresh.iter().enumerate() {
                step[k] = t + 1;
            }
            let mut charges: Vec<Vec<Charge>> = (0..=fresh.len()).map(|_| Vec::new()).collect();
            for (hk, &v) in vertices.iter().enumerate() {
                for a in g.in_arcs(v) {
                    let Ok(tk) = vertices.binary_search(&a.tail) else {
                        continue;
                    };
                    if in_parent(a.tail) && in_parent(v) {
                        continue;
                    }
                    charges[step[hk].max(step[tk])].push(Charge {
                        tail: tk,
                        head: hk,
                        units: units(a.weight),
                        arc: g.arc_index(a.tail, v).expect("arc exists"),
                    });
                }
            }
            let children: Vec<ChildLink> = d
                .children(i)
                .iter()
                .map(|&c| {
                    let shared: Vec<usize> =
                        (0..vertices.len()).filter(|&k| d.contains(c, vertices[k])).collect();
                    let need = shared
                        .iter()
                        .map(|&k| {
                            let v = vertices[k];
                            g.in_arcs(v)
                                .filter(|a| below[c][a.tail] && !d.contains(i, a.tail))
                                .map(|a| units(a.weight))
                                .sum()
                        })
                        .collect();
                    ChildLink { bag: c, shared, need }
                })
                .collect();
            let mut rest_keys = vec![(Vec::new(), Vec::new()); children.len() + 1];
            for j in (0..children.len()).rev() {
                let mut need = vec![0u64; vertices.len()];
                let mut read = vec![false; vertices.len()];
                for link in &children[j..] {
                    for (&k, &n) in link.shared.iter().zip(&link.need) {
                        read[k] = true;
                        need[k] = need[k].saturating_add(n);
                    }
                }
                let keys: Vec<usize> = (0..vertices.len()).filter(|&k| read[k]).collect();
                let needs = keys.iter().map(|&k| need[k]).collect();
                rest_keys[j] = (keys, needs);
            }
            bags.push(Bag { vertices, shared, fresh, charges, children, rest_keys });
        }
        Ok(Plan { bags, palette: (d.width() + 1) as usize, full: (1u64 << bits) - 1, config })
    }
}

type Key = (Vec<Color>, Vec<u64>);

struct ColorEntry {
    value: usize,
    choice: Vec<Color>,
}

struct DistEntry {
    value: usize,
    split: Vec<u64>,
}

struct State {
    color_memo: Vec<HashMap<Key, ColorEntry>>,
    dist_memo: Vec<Vec<HashMap<Key, DistEntry>>>,
    hits: usize,
}

/// Applies the charges of one step; false when a budget would go negative.
/// Applied charges are pushed to `log` for undoing.
fn apply(charges: &[Charge], colors: &[Color], budgets: &mut [u64], log: &mut Vec<(usize, u64)>) -> bool {
    for ch in charges {
        if colors[ch.tail] != colors[ch.head] {
            continue;
        }
        if budgets[ch.head] < ch.units {
            return false;
        }
        budgets[ch.head] -= ch.units;
        log.push((ch.head, ch.units));
    }
    true
}

fn undo(budgets: &mut [u64], log: &mut Vec<(usize, u64)>, mark: usize) {
    while log.len() > mark {
        let (k, u) = log.pop().expect("non-empty");
        budgets[k] += u;
    }
}

struct Extend<'a> {
    plan: &'a Plan,
    bag: usize,
    colors: Vec<Color>,
    budgets: Vec<u64>,
    in_use: Vec<usize>,
    log: Vec<(usize, u64)>,
    best: usize,
    choice: Vec<Color>,
}

impl Extend<'_> {
    fn run(&mut self, st: &mut State, t: usize, top: usize) {
        let plan = self.plan;
        let b = &plan.bags[self.bag];
        if top >= self.best {
            return;
        }
        if t == b.fresh.len() {
            let rest = distribute(plan, st, self.bag, 0, &self.colors, &self.budgets);
            let value = top.max(rest);
            if value < self.best {
                self.best = value;
                self.choice = b.fresh.iter().map(|&k| self.colors[k]).collect();
            }
            return;
        }
        let pos = b.fresh[t];
        let mut opened = false;
        for c in 1..=plan.palette {
            if plan.config.canonical_colors && self.in_use[c] == 0 {
                if opened {
                    break;
                }
                opened = true;
            }
            self.colors[pos] = c;
            self.in_use[c] += 1;
            let mark = self.log.len();
            if apply(&b.charges[t + 1], &self.colors, &mut self.budgets, &mut self.log) {
                self.run(st, t + 1, top.max(c));
            }
            undo(&mut self.budgets, &mut self.log, mark);
            self.in_use[c] -= 1;
        }
        self.colors[pos] = 0;
    }
}

fn color(plan: &Plan, st: &mut State, bag: usize, key: &Key) -> usize {
    if let Some(e) = st.color_memo[bag].get(key) {
        st.hits += 1;
        return e.value;
    }
    let b = &plan.bags[bag];
    let mut colors = vec![0; b.vertices.len()];
    let mut budgets = vec![plan.full; b.vertices.len()];
    let mut in_use = vec![0; plan.palette + 2];
    for (i, &k) in b.shared.iter().enumerate() {
        colors[k] = key.0[i];
        budgets[k] = key.1[i];
        in_use[key.0[i]] += 1;
    }
    let top = key.0.iter().copied().max().unwrap_or(0);
    let mut ext =
        Extend { plan, bag, colors, budgets, in_use, log: Vec::new(), best: INFEASIBLE, choice: Vec::new() };
    ext.run(st, 0, top);
    let (value, choice) = (ext.best, ext.choice);
    st.color_memo[bag].insert(key.clone(), ColorEntry { value, choice });
    value
}

fn rest_key(plan: &Plan, bag: usize, j: usize, colors: &[Color], budgets: &[u64]) -> Key {
    let (keys, needs) = &plan.bags[bag].rest_keys[j];
    let cs = keys.iter().map(|&k| colors[k]).collect();
    let bs = keys
        .iter()
        .zip(needs)
        .map(|(&k, &n)| if plan.config.clamp_budgets { budgets[k].min(n) } else { budgets[k] })
        .collect();
    (cs, bs)
}

/// Least highest color index over children `j..` of `bag`, splitting the
/// budgets among them.
fn distribute(plan: &Plan, st: &mut State, bag: usize, j: usize, colors: &[Color], budgets: &[u64]) -> usize {
    let b = &plan.bags[bag];
    if j == b.children.len() {
        return 0;
    }
    let key = rest_key(plan, bag, j, colors, budgets);
    if let Some(e) = st.dist_memo[bag][j].get(&key) {
        st.hits += 1;
        return e.value;
    }
    let link = &b.children[j];
    let limits: Vec<u64> = link
        .shared
        .iter()
        .zip(&link.need)
        .map(|(&k, &n)| if plan.config.clamp_budgets { budgets[k].min(n) } else { budgets[k] })
        .collect();
    let child_colors: Vec<Color> = link.shared.iter().map(|&k| colors[k]).collect();
    let mut split = vec![0u64; limits.len()];
    let mut rest = budgets.to_vec();
    let mut best = INFEASIBLE;
    let mut best_split = Vec::new();
    loop {
        let child = color(plan, st, link.bag, &(child_colors.clone(), split.clone()));
        if child < best {
            for (&k, &s) in link.shared.iter().zip(&split) {
                rest[k] = budgets[k] - s;
            }
            let value = child.max(distribute(plan, st, bag, j + 1, colors, &rest));
            if value < best {
                best = value;
                best_split = split.clone();
            }
        }
        // next split in lexicographic order
        let mut i = 0;
        while i < split.len() && split[i] == limits[i] {
            split[i] = 0;
            i += 1;
        }
        if i == split.len() {
            break;
        }
        split[i] += 1;
    }
    st.dist_memo[bag][j].insert(key, DistEntry { value: best, split: best_split });
    best
}

/// `chi_w(G)` and an optimal coloring, for weights that are multiples of
/// `2^-bits` and a valid decomposition of `G`.
pub fn solve_fpt_budget<I: WeightInt>(
    g: &WeightedDigraph<I>,
    d: &TreeDecomposition,
    bits: u32,
) -> Result<BudgetSolution, BudgetError> {
    solve_fpt_budget_with(g, d, bits, BudgetConfig::default())
}

pub fn solve_fpt_budget_with<I: WeightInt>(
    g: &WeightedDigraph<I>,
    d: &TreeDecomposition,
    bits: u32,
    config: BudgetConfig,
) -> Result<BudgetSolution, BudgetError> {
    let plan = Plan::new(g, d, bits, config)?;
    let mut st = State {
        color_memo: (0..plan.bags.len()).map(|_| HashMap::new()).collect(),
        dist_memo: plan
            .bags
            .iter()
            .map(|b| (0..b.children.len()).map(|_| HashMap::new()).collect())
            .collect(),
        hits: 0,
    };
    let root = d.root();
    let root_key: Key = (Vec::new(), Vec::new());
    let chromatic = color(&plan, &mut st, root, &root_key);
    if chromatic == INFEASIBLE {
        return Err(BudgetError::Infeasible);
    }

    let mut replay = Replay {
        plan: &plan,
        st: &st,
        colors: vec![0; g.n() + 1],
        decided: vec![None; g.n() + 1],
        charged_at: vec![None; g.arc_count()],
    };
    replay.color(root, &root_key);
    let Replay { colors, decided, charged_at, .. } = replay;
    for (v, &bag) in decided.iter().enumerate().skip(1) {
        assert_eq!(
            bag,
            d.deciding_bag(g, v, Relevance::BagOnly),
            "vertex {v} colored away from its first bag"
        );
    }
    for (idx, a) in g.arcs().iter().enumerate() {
        let topmost = d.preorder().iter().copied().find(|&i| d.contains(i, a.tail) && d.contains(i, a.head));
        let expected = (colors[a.tail] == colors[a.head]).then_some(topmost).flatten();
        assert_eq!(charged_at[idx], expected, "arc ({}, {}) charged wrongly", a.tail, a.head);
    }
    let stats = BudgetStats {
        color_entries: st.color_memo.iter().map(HashMap::len).sum(),
        distribute_entries: st.dist_memo.iter().flatten().map(HashMap::len).sum(),
        hits: st.hits,
        max_key_width: plan.bags.iter().map(|b| b.shared.len()).max().unwrap_or(0),
    };
    Ok(BudgetSolution {
        result: SolveResult { chromatic, witness: Coloring::from_colors(colors[1..].to_vec()) },
        stats,
        charged_at,
    })
}

/// Follows the stored optimal choices and splits from the root, recording
/// where each vertex is colored and where each arc is charged.
struct Replay<'a> {
    plan: &'a Plan,
    st: &'a State,
    colors: Vec<Color>,
    decided: Vec<Option<usize>>,
    charged_at: Vec<Option<usize>>,
}

impl Replay<'_> {
    fn color(&mut self, bag: usize, key: &Key) {
        let b = &self.plan.bags[bag];
        let entry = &self.st.color_memo[bag][key];
        let mut colors = vec![0; b.vertices.len()];
        let mut budgets = vec![self.plan.full; b.vertices.len()];
        for (i, &k) in b.shared.iter().enumerate() {
            colors[k] = key.0[i];
            budgets[k] = key.1[i];
        }
        for (&k, &c) in b.fresh.iter().zip(&entry.choice) {
            let v = b.vertices[k];
            assert_eq!(self.colors[v], 0, "vertex {v} colored twice");
            self.colors[v] = c;
            self.decided[v] = Some(bag);
            colors[k] = c;
        }
        for ch in b.charges.iter().flatten() {
            if colors[ch.tail] == colors[ch.head] {
                assert!(self.charged_at[ch.arc].is_none(), "arc charged twice");
                self.charged_at[ch.arc] = Some(bag);
                budgets[ch.head] =
                    budgets[ch.head].checked_sub(ch.units).expect("accepted budgets stay nonnegative");
            }
        }
        self.distribute(bag, 0, &colors, budgets);
    }

    fn distribute(&mut self, bag: usize, j: usize, colors: &[Color], mut budgets: Vec<u64>) {
        let b = &self.plan.bags[bag];
        if j == b.children.len() {
            return;
        }
        let key = rest_key(self.plan, bag, j, colors, &budgets);
        let split = self.st.dist_memo[bag][j][&key].split.clone();
        let link = &b.children[j];
        let child_colors = link.shared.iter().map(|&k| colors[k]).collect();
        self.color(link.bag, &(child_colors, split.clone()));
        for (&k, &s) in link.shared.iter().zip(&split) {
            budgets[k] -= s;
        }
        self.distribute(bag, j + 1, colors, budgets);
    }
}
