//! Instance generators: the defective-coloring and completion reductions,
//! the partition gadget, and seeded random digraphs.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::decomposition::TreeDecomposition;
use crate::graph::{GraphError, UndirectedWeightedGraph, Vertex, WeightedDigraph};
use crate::weight::{Weight, WeightError, WeightInt};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("arc probability {0} is not in [0, 1]")]
    BadProbability(f64),
    #[error("weight model parameter out of range: {0}")]
    BadModel(String),
    #[error("the multiset is empty")]
    EmptyMultiset,
    #[error("multiset elements must be positive")]
    ZeroElement,
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// How [`random_instance`] draws arc weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightModel {
    /// denominator uniform in `1..=max_den`, numerator uniform in `0..=den`
    Rational(u64),
    /// `m / 2^b` with `m` uniform in `0..=2^b`
    Dyadic(u32),
}

/// Two opposite arcs of weight `1/(d+1)` per edge of `h`. Weights of `h`
/// are ignored.
pub fn reduce_defective<I: WeightInt>(
    h: &UndirectedWeightedGraph<I>,
    d: usize,
) -> Result<WeightedDigraph<I>, GeneratorError> {
    let w = Weight::reciprocal(d + 1)?;
    let arcs = h.edges().iter().flat_map(|e| [(e.u, e.v, w), (e.v, e.u, w)]);
    Ok(WeightedDigraph::new(h.n(), arcs)?)
}

/// Adds a zero-weight arc for every missing ordered pair.
pub fn complete_embed<I: WeightInt>(g: &WeightedDigraph<I>) -> WeightedDigraph<I> {
    let n = g.n();
    let arcs = (1..=n).flat_map(|u| {
        (1..=n).filter(move |&v| v != u).map(move |v| (u, v, g.weight(u, v).unwrap_or_else(Weight::zero)))
    });
    WeightedDigraph::new(n, arcs).expect("complete arc set is well formed")
}

/// Vertex ids in the partition gadget.
pub const PARTITION_A: Vertex = 1;
pub const PARTITION_B: Vertex = 2;

/// Gadget that is 2-colorable exactly when `s` splits into two halves of
/// equal sum.
///
/// Vertices are `A = 1`, `B = 2` and `v_i = i + 2`. `A` and `B` are joined
/// by a weight-1 edge, and each `v_i` is joined to both by an edge of
/// weight `min(1, 2 x_i / X - eps / |S|)` with `eps = 1 / (2 |S| X)`. The
/// returned path decomposition has bags `{A, v_i, B}` and width 2.
pub fn partition_instance<I: WeightInt>(
    s: &[u64],
) -> Result<(WeightedDigraph<I>, TreeDecomposition), GeneratorError> {
    if s.is_empty() {
        return Err(GeneratorError::EmptyMultiset);
    }
    if s.contains(&0) {
        return Err(GeneratorError::ZeroElement);
    }
    let conv = |x: u128| I::from(x).ok_or(WeightError::Overflow);
    let len = s.len() as u128;
    let total: u128 = s.iter().map(|&x| x as u128).sum();
    // w_i = (4 |S|^2 x_i - 1) / (2 |S|^2 X)
    let den = conv(2 * len * len)?.checked_mul(&conv(total)?).ok_or(WeightError::Overflow)?;
    let mut edges = vec![(PARTITION_A, PARTITION_B, Weight::one())];
    let mut bags = Vec::with_capacity(s.len());
    for (i, &x) in s.iter().enumerate() {
        let num = conv(4 * len * len)?
            .checked_mul(&conv(x as u128)?)
            .and_then(|t| t.checked_sub(&I::one()))
            .ok_or(WeightError::Overflow)?;
        let r = Ratio::new(num, den);
        let w = if r >= Ratio::from_integer(I::one()) { Weight::one() } else { Weight::from_ratio(r)? };
        let v = i + 3;
        edges.push((PARTITION_A, v, w));
        edges.push((v, PARTITION_B, w));
        bags.push(vec![PARTITION_A, v, PARTITION_B]);
    }
    let h = UndirectedWeightedGraph::new(s.len() + 2, edges)?;
    let d = TreeDecomposition::path(bags).expect("non-empty path of bags");
    Ok((WeightedDigraph::embed_undirected(&h), d))
}

/// Seeded random digraph: every ordered pair `(u, v)`, `u != v`, in
/// lexicographic order becomes an arc with probability `p`.
pub fn random_instance<I: WeightInt>(
    n: usize,
    p: f64,
    model: WeightModel,
    seed: u64,
) -> Result<WeightedDigraph<I>, GeneratorError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GeneratorError::BadProbability(p));
    }
    match model {
        WeightModel::Rational(0) => {
            return Err(GeneratorError::BadModel("max denominator must be positive".into()))
        }
        WeightModel::Dyadic(b) if b > 30 => {
            return Err(GeneratorError::BadModel(format!("{b} bits is too many")))
        }
        _ => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for u in 1..=n {
        for v in 1..=n {
            if u == v || !rng.gen_bool(p) {
                continue;
            }
            arcs.push((u, v, random_weight(&mut rng, model)?));
        }
    }
    Ok(WeightedDigraph::new(n, arcs)?)
}

fn random_weight<I: WeightInt>(rng: &mut impl Rng, model: WeightModel) -> Result<Weight<I>, GeneratorError> {
    let (num, den) = match model {
        WeightModel::Rational(max_den) => {
            let den = rng.gen_range(1..=max_den);
            (rng.gen_range(0..=den), den)
        }
        WeightModel::Dyadic(b) => {
            let den = 1u64 << b;
            (rng.gen_range(0..=den), den)
        }
    };
    let conv = |x: u64| I::from(x).ok_or(WeightError::Overflow);
    Ok(Weight::new(conv(num)?, conv(den)?)?)
}

/// Seeded random undirected graph with maximum degree 3 in which every
/// vertex has at most one incident weight-1 edge. Other weights are drawn
/// from `(0, 1)` with denominators up to `max_den`.
pub fn random_subcubic<I: WeightInt>(
    n: usize,
    max_den: u64,
    rng: &mut impl Rng,
) -> Result<UndirectedWeightedGraph<I>, GeneratorError> {
    if max_den < 2 {
        return Err(GeneratorError::BadModel("max denominator must be at least 2".into()));
    }
    let mut pairs: Vec<(Vertex, Vertex)> = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    let mut degree = vec![0usize; n + 1];
    let mut heavy = vec![false; n + 1];
    let mut edges = Vec::new();
    let conv = |x: u64| I::from(x).ok_or(WeightError::Overflow);
    for (u, v) in pairs {
        if degree[u] == 3 || degree[v] == 3 || !rng.gen_bool(0.6) {
            continue;
        }
        let w = if !heavy[u] && !heavy[v] && rng.gen_bool(0.5) {
            heavy[u] = true;
            heavy[v] = true;
            Weight::one()
        } else {
            let den = rng.gen_range(2..=max_den);
            Weight::new(conv(rng.gen_range(1..den))?, conv(den)?)?
        };
        degree[u] += 1;
        degree[v] += 1;
        edges.push((u, v, w));
    }
    Ok(UndirectedWeightedGraph::new(n, edges)?)
}
