//! Upper bounds on expected triangle and k-cycle counts in terms of
//! overlap, and a Monte Carlo harness that checks samplers against them.
//!
//! Constants used (`Ov` is overlap, `n` the node count):
//!
//! | dependency | k-cycle bound             | k = 3                |
//! |------------|---------------------------|----------------------|
//! | EI         | `n^k Ov^k / (2k)`         | `n^3 Ov^3 / 6`       |
//! | NI         | `n^k Ov^(k/2) / (2k)`     | `n^3 Ov^(3/2) / 6`   |
//! | FD         | `n^k Ov / 2`              | `n^3 Ov / 2`         |
//!
//! The NI constant is the geometric mean of the count of k-cycles in
//! `K_n` (at most `n^k / (2k)`) and the EI bound.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::{Dependency, GraphSampler};
use crate::overlap::{estimate_from_pairs, OverlapEstimate, PairCounts};
use crate::rng;
use crate::stats;

/// Human-readable statement of the constants above, for reports.
pub const CONSTANT_CONVENTION: &str =
    "EI n^k*Ov^k/(2k); NI n^k*Ov^(k/2)/(2k); FD n^k*Ov/2";

/// Bound on expected triangles.
pub fn triangle_bound(kind: Dependency, n: usize, overlap: f64) -> f64 {
    let n3 = (n as f64).powi(3);
    match kind {
        Dependency::EdgeIndependent => n3 * overlap.powi(3) / 6.0,
        Dependency::NodeIndependent => n3 * overlap.powf(1.5) / 6.0,
        Dependency::FullyDependent => n3 * overlap / 2.0,
    }
}

/// Bound on expected k-cycles, `k >= 3`.
pub fn kcycle_bound(kind: Dependency, n: usize, k: usize, overlap: f64) -> Result<f64> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("cycle length {k} < 3")));
    }
    let nk = (n as f64).powi(k as i32);
    let two_k = 2.0 * k as f64;
    Ok(match kind {
        Dependency::EdgeIndependent => nk * overlap.powi(k as i32) / two_k,
        Dependency::NodeIndependent => nk * overlap.powf(k as f64 / 2.0) / two_k,
        Dependency::FullyDependent => nk * overlap / 2.0,
    })
}

/// Largest volume compatible with `overlap`: `C(n, 2) * overlap`.
pub fn volume_bound(n: usize, overlap: f64) -> f64 {
    let n = n as f64;
    n * (n - 1.0) / 2.0 * overlap
}

/// Outcome of checking a sampler against one level's bound.
#[derive(Clone, Debug)]
pub struct BoundCheck {
    pub claim: Dependency,
    pub k: usize,
    pub n: usize,
    pub samples: usize,
    pub overlap: OverlapEstimate,
    pub mean_count: f64,
    /// Standard error of `mean_count`.
    pub count_std_error: f64,
    /// Bound at the estimated overlap; `None` if overlap is undefined.
    pub bound: Option<f64>,
    /// `mean_count <= bound + 3 * count_std_error`.
    pub passed: Option<bool>,
    /// `mean_count / bound`.
    pub tightness: Option<f64>,
}

impl BoundCheck {
    pub const CSV_HEADER: &'static [&'static str] = &[
        "claim",
        "k",
        "n",
        "samples",
        "overlap",
        "overlap_se",
        "volume",
        "volume_bound",
        "mean_count",
        "count_se",
        "bound",
        "pass",
        "tightness",
        "constants",
    ];

    pub fn csv_row(&self) -> Vec<String> {
        use crate::stats::fmt_opt;
        vec![
            self.claim.to_string(),
            self.k.to_string(),
            self.n.to_string(),
            self.samples.to_string(),
            fmt_opt(self.overlap.overlap),
            self.overlap.std_error.to_string(),
            self.overlap.volume.to_string(),
            fmt_opt(self.overlap.overlap.map(|ov| volume_bound(self.n, ov))),
            self.mean_count.to_string(),
            self.count_std_error.to_string(),
            fmt_opt(self.bound),
            self.passed.map(|p| p.to_string()).unwrap_or_default(),
            fmt_opt(self.tightness),
            format!("\"{CONSTANT_CONVENTION}\""),
        ]
    }
}

/// Draws `num_samples` graphs, estimates overlap from consecutive pairs
/// and the mean k-cycle count from all samples, and compares the mean
/// against `claim`'s bound at the estimated overlap.
pub fn verify_bound<S: GraphSampler + ?Sized>(
    sampler: &S,
    claim: Dependency,
    k: usize,
    num_samples: usize,
    seed: u64,
) -> Result<BoundCheck> {
    if num_samples < 2 {
        return Err(Error::InvalidParameter(
            "bound verification needs at least two samples".into(),
        ));
    }
    if k < 3 {
        return Err(Error::InvalidParameter(format!("cycle length {k} < 3")));
    }
    let n = sampler.node_count();
    let num_pairs = num_samples / 2;
    let draw = |i: u64| sampler.sample(&mut rng::stream(seed, i));

    let paired: Vec<(PairCounts, [u64; 2])> = (0..num_pairs as u64)
        .into_par_iter()
        .map(|pair| {
            let a = draw(2 * pair);
            let b = draw(2 * pair + 1);
            (
                PairCounts::of(&a, &b),
                [stats::cycle_count(&a, k), stats::cycle_count(&b, k)],
            )
        })
        .collect();
    let mut counts: Vec<f64> = paired
        .iter()
        .flat_map(|(_, c)| c.iter().map(|&x| x as f64))
        .collect();
    if num_samples % 2 == 1 {
        counts.push(stats::cycle_count(&draw(num_samples as u64 - 1), k) as f64);
    }
    let pairs: Vec<PairCounts> = paired.into_iter().map(|(p, _)| p).collect();
    let overlap = estimate_from_pairs(&pairs, seed)?;

    let len = counts.len() as f64;
    let mean_count = counts.iter().sum::<f64>() / len;
    let var = counts.iter().map(|c| (c - mean_count).powi(2)).sum::<f64>() / (len - 1.0);
    let count_std_error = (var / len).sqrt();

    let bound = match overlap.overlap {
        Some(ov) => Some(kcycle_bound(claim, n, k, ov)?),
        None => {
            log::warn!("all samples empty; overlap undefined");
            None
        }
    };
    Ok(BoundCheck {
        claim,
        k,
        n,
        samples: num_samples,
        overlap,
        mean_count,
        count_std_error,
        passed: bound.map(|b| mean_count <= b + 3.0 * count_std_error),
        tightness: bound.and_then(|b| (b > 0.0).then(|| mean_count / b)),
        bound,
    })
}
