//! Random search for counterexamples to the conjecture that sub-cubic
//! graphs where each vertex has at most one incident weight-1 edge are
//! 2-colorable.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exact::{exact_chi_w, OracleError, DEFAULT_MAX_VERTICES};
use crate::generators::{random_subcubic, GeneratorError};
use crate::graph::{UndirectedWeightedGraph, WeightedDigraph};
use crate::io::serialize_undirected;
use crate::weight::{Weight, WeightInt};

/// Largest denominator of the sampled non-unit weights.
pub const SAMPLE_MAX_DEN: u64 = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("max_n must be between 1 and {max}, got {got}")]
    BadSize { got: usize, max: usize },
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Maximum degree at most 3 and at most one weight-1 edge at each vertex.
pub fn satisfies_premise<I: WeightInt>(h: &UndirectedWeightedGraph<I>) -> bool {
    (1..=h.n()).all(|v| h.degree(v) <= 3 && h.neighbors(v).filter(|&(_, w)| w == Weight::one()).count() <= 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample<I: WeightInt> {
    /// 1-based trial number
    pub trial: usize,
    pub graph: UndirectedWeightedGraph<I>,
    pub chromatic: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjectureReport<I: WeightInt> {
    pub trials: usize,
    pub counterexample: Option<Counterexample<I>>,
}

impl<I: WeightInt> fmt::Display for ConjectureReport<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => writeln!(f, "none found in {} trials", self.trials),
            Some(c) => {
                writeln!(f, "counterexample at trial {}: chi_w = {}", c.trial, c.chromatic)?;
                write!(f, "{}", serialize_undirected(&c.graph))
            }
        }
    }
}

/// Samples `trials` graphs with `1..=max_n` vertices satisfying the premise
/// and stops at the first one whose weighted chromatic number exceeds 2.
pub fn conjecture_search<I: WeightInt>(
    max_n: usize,
    trials: usize,
    seed: u64,
) -> Result<ConjectureReport<I>, ExperimentError> {
    if max_n == 0 || max_n > DEFAULT_MAX_VERTICES {
        return Err(ExperimentError::BadSize { got: max_n, max: DEFAULT_MAX_VERTICES });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 1..=trials {
        let n = rng.gen_range(1..=max_n);
        let h = random_subcubic::<I>(n, SAMPLE_MAX_DEN, &mut rng)?;
        debug_assert!(satisfies_premise(&h));
        let g = WeightedDigraph::embed_undirected(&h);
        // chi_w > 2 shows up as "more than 2 colors needed"
        let chromatic = match exact_chi_w(&g, 2)? {
            Some(r) => r.chromatic,
            None => exact_chi_w(&g, n)?.map_or(n + 1, |r| r.chromatic),
        };
        if chromatic > 2 {
            return Ok(ConjectureReport {
                trials: trial,
                counterexample: Some(Counterexample { trial, graph: h, chromatic }),
            });
        }
    }
    Ok(ConjectureReport { trials, counterexample: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn zero_trials() {
        let r = conjecture_search::<i64>(8, 0, 1).unwrap();
        assert_eq!(r.to_string(), "none found in 0 trials\n");
    }

    #[test]
    fn prism_violates_premise() {
        assert!(!satisfies_premise(&fixtures::prism::<i64>()));
        assert!(!satisfies_premise(&fixtures::cycle::<i64>(5)));
        assert!(satisfies_premise(&fixtures::prism_with::<i64>(Weight::new(1, 2).unwrap(), Weight::one())));
    }

    #[test]
    fn reproducible() {
        let a = conjecture_search::<i64>(10, 40, 7).unwrap();
        let b = conjecture_search::<i64>(10, 40, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(conjecture_search::<i64>(0, 1, 0).is_err());
        assert!(conjecture_search::<i64>(DEFAULT_MAX_VERTICES + 1, 1, 0).is_err());
    }
}
