//! Overlap and volume of a graph distribution.
//!
//! Volume is the expected edge count of a sample. Overlap is the expected
//! number of edges shared by two independent samples divided by the
//! volume.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::models::{EdgeProbabilityMatrix, GraphSampler};
use crate::rng::{self, BOOTSTRAP_STREAM};

/// Bootstrap resamples used for the overlap standard error.
pub const BOOTSTRAP_RESAMPLES: usize = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct OverlapEstimate {
    /// `None` when every sample was empty.
    pub overlap: Option<f64>,
    pub volume: f64,
    pub pairs_used: usize,
    /// Bootstrap standard error of the overlap (0 when undefined).
    pub std_error: f64,
}

/// Edge counts for one independent pair of samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairCounts {
    pub shared: usize,
    pub first: usize,
    pub second: usize,
}

impl PairCounts {
    pub fn of(a: &Graph, b: &Graph) -> Self {
        PairCounts {
            shared: a.shared_edge_count(b),
            first: a.edge_count(),
            second: b.edge_count(),
        }
    }
}

fn ratio_of_pairs<'a>(pairs: impl Iterator<Item = &'a PairCounts>) -> Option<f64> {
    let (mut shared, mut edges, mut count) = (0usize, 0usize, 0usize);
    for p in pairs {
        shared += p.shared;
        edges += p.first + p.second;
        count += 1;
    }
    (edges > 0).then(|| (shared as f64 / count as f64) / (edges as f64 / (2 * count) as f64))
}

/// Overlap estimate from already drawn pairs. The standard error comes
/// from a nonparametric bootstrap over pairs driven by `seed`.
pub fn estimate_from_pairs(pairs: &[PairCounts], seed: u64) -> Result<OverlapEstimate> {
    if pairs.is_empty() {
        return Err(Error::InvalidParameter("need at least one sample pair".into()));
    }
    let total_edges: usize = pairs.iter().map(|p| p.first + p.second).sum();
    let volume = total_edges as f64 / (2 * pairs.len()) as f64;
    let overlap = ratio_of_pairs(pairs.iter());

    let std_error = match overlap {
        Some(_) if pairs.len() > 1 => {
            let mut rng = rng::stream(seed, BOOTSTRAP_STREAM);
            let mut replicates = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
            let mut picked = Vec::with_capacity(pairs.len());
            for _ in 0..BOOTSTRAP_RESAMPLES {
                picked.clear();
                picked.extend((0..pairs.len()).map(|_| &pairs[rng.gen_range(0..pairs.len())]));
                if let Some(r) = ratio_of_pairs(picked.iter().copied()) {
                    replicates.push(r);
                }
            }
            sample_std(&replicates)
        }
        _ => 0.0,
    };

    Ok(OverlapEstimate {
        overlap,
        volume,
        pairs_used: pairs.len(),
        std_error,
    })
}

fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// Draws `2 * num_pairs` samples; samples `2k` and `2k + 1` form pair
/// `k`. Sample `i` uses stream `i` of `seed`.
pub fn estimate_overlap<S: GraphSampler + ?Sized>(
    sampler: &S,
    num_pairs: usize,
    seed: u64,
) -> Result<OverlapEstimate> {
    if num_pairs == 0 {
        return Err(Error::InvalidParameter("num_pairs must be at least 1".into()));
    }
    let pairs: Vec<PairCounts> = (0..num_pairs as u64)
        .into_par_iter()
        .map(|k| {
            let a = sampler.sample(&mut rng::stream(seed, 2 * k));
            let b = sampler.sample(&mut rng::stream(seed, 2 * k + 1));
            PairCounts::of(&a, &b)
        })
        .collect();
    estimate_from_pairs(&pairs, seed)
}

/// Pairs consecutive graphs `(0, 1), (2, 3), ...`; a trailing odd graph is
/// ignored.
pub fn pair_counts(samples: &[Graph]) -> Vec<PairCounts> {
    samples
        .chunks_exact(2)
        .map(|w| PairCounts::of(&w[0], &w[1]))
        .collect()
}

/// Closed form for an edge-independent model:
/// `overlap = sum P_ij^2 / sum P_ij`, `volume = sum P_ij` over `i < j`.
pub fn exact_overlap_ei(p: &EdgeProbabilityMatrix) -> (Option<f64>, f64) {
    let (mut volume, mut squares) = (0.0, 0.0);
    for (_, q) in p.pairs() {
        volume += q;
        squares += q * q;
    }
    ((volume > 0.0).then(|| squares / volume), volume)
}

/// Fraction of the input's edges present in `sample`.
pub fn edge_overlap_vs_input(sample: &Graph, input: &Graph) -> Result<Option<f64>> {
    if sample.node_count() != input.node_count() {
        return Err(Error::NodeCountMismatch {
            left: sample.node_count(),
            right: input.node_count(),
        });
    }
    let m = input.edge_count();
    Ok((m > 0).then(|| sample.shared_edge_count(input) as f64 / m as f64))
}
