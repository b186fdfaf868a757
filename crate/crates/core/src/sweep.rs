//! Sweep over planting probabilities: for each `p`, fit the residual,
//! draw union samples, and summarize how their statistics and overlap
//! compare with the input graph.

use std::io::Write;

use rayon::prelude::*;

use crate::clique::{enumerate_maximal_cliques, CliqueSet};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::models::{Dependency, FitOptions, PlantedModel, UnionModel};
use crate::overlap::{edge_overlap_vs_input, estimate_from_pairs, pair_counts};
use crate::rng;
use crate::stats::{fmt_opt, stats_report_with_profile, GraphProfile, StatsReport};

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub kind: Dependency,
    /// Ascending planting probabilities.
    pub p_grid: Vec<f64>,
    pub samples_per_point: usize,
    /// Pairs used for the pairwise overlap. Samples `0..2 * pairs` are
    /// shared with the statistics where they overlap.
    pub pairs_for_overlap: usize,
    pub seed: u64,
    pub fit: FitOptions,
}

impl SweepConfig {
    pub fn new(kind: Dependency, p_grid: Vec<f64>, seed: u64) -> Self {
        SweepConfig {
            kind,
            p_grid,
            samples_per_point: 10,
            pairs_for_overlap: 5,
            seed,
            fit: FitOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p_grid.is_empty() {
            return Err(Error::InvalidParameter("empty p grid".into()));
        }
        if self.p_grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidParameter("p grid values must lie in [0, 1]".into()));
        }
        if self.p_grid.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter("p grid must be sorted ascending".into()));
        }
        if self.samples_per_point < 2 {
            return Err(Error::InvalidParameter("need at least 2 samples per point".into()));
        }
        if self.pairs_for_overlap < 1 {
            return Err(Error::InvalidParameter("need at least 1 overlap pair".into()));
        }
        Ok(())
    }
}

/// `points` evenly spaced values from 0 to 1 inclusive, optionally squared.
/// A single point is `1.0`.
pub fn p_grid(points: usize, square: bool) -> Vec<f64> {
    let raw: Vec<f64> = match points {
        0 => Vec::new(),
        1 => vec![1.0],
        _ => (0..points).map(|i| i as f64 / (points - 1) as f64).collect(),
    };
    if square {
        raw.into_iter().map(|p| p * p).collect()
    } else {
        raw
    }
}

/// Mean and 5th/95th percentiles of the defined values.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Summary {
    pub mean: Option<f64>,
    pub p05: Option<f64>,
    pub p95: Option<f64>,
}

impl Summary {
    pub fn of(values: impl IntoIterator<Item = Option<f64>>) -> Self {
        let mut v: Vec<f64> = values.into_iter().flatten().collect();
        if v.is_empty() {
            return Summary::default();
        }
        v.sort_by(f64::total_cmp);
        Summary {
            mean: Some(v.iter().sum::<f64>() / v.len() as f64),
            p05: Some(percentile(&v, 0.05)),
            p95: Some(percentile(&v, 0.95)),
        }
    }
}

/// Linear interpolation between closest ranks; `sorted` must be sorted.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Statistics summarized per grid point, in CSV column order.
pub const SWEEP_STATS: &[&str] = &[
    "overlap_vs_input",
    "max_degree",
    "degree_pcc",
    "triangle_pcc",
    "normalized_triangles",
    "normalized_four_cliques",
    "normalized_four_cycles",
    "fraction_connected_pairs",
    "char_path_length",
    "transitivity",
];

fn stat_values(report: &StatsReport, vs_input: Option<f64>) -> [Option<f64>; 10] {
    let norm = report.normalized.as_ref();
    [
        vs_input,
        Some(report.max_degree as f64),
        report.degree_pcc,
        report.triangle_pcc,
        norm.and_then(|n| n.triangles),
        norm.and_then(|n| n.four_cliques),
        norm.and_then(|n| n.four_cycles),
        report.fraction_connected_pairs,
        report.char_path_length,
        report.transitivity,
    ]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointStatus {
    Ok,
    NotConverged,
    FitFailed(String),
}

impl PointStatus {
    fn label(&self) -> &'static str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::NotConverged => "not_converged",
            PointStatus::FitFailed(_) => "fit_failed",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub p: f64,
    pub status: PointStatus,
    pub fit_iterations: Option<usize>,
    pub fit_error: Option<f64>,
    pub samples: usize,
    pub overlap_pairwise: Option<f64>,
    pub overlap_pairwise_se: Option<f64>,
    pub volume: Option<f64>,
    /// One summary per entry of [`SWEEP_STATS`].
    pub stats: Vec<Summary>,
}

/// Full CSV header for [`write_sweep_csv`].
pub fn sweep_csv_header() -> Vec<String> {
    let mut cols: Vec<String> = [
        "p",
        "status",
        "fit_iterations",
        "fit_error",
        "samples",
        "overlap_pairwise",
        "overlap_pairwise_se",
        "volume",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for stat in SWEEP_STATS {
        for suffix in ["mean", "p05", "p95"] {
            cols.push(format!("{stat}_{suffix}"));
        }
    }
    cols
}

impl SweepRow {
    pub fn csv_row(&self) -> Vec<String> {
        let mut cells = vec![
            self.p.to_string(),
            self.status.label().to_string(),
            self.fit_iterations.map(|i| i.to_string()).unwrap_or_default(),
            fmt_opt(self.fit_error),
            self.samples.to_string(),
            fmt_opt(self.overlap_pairwise),
            fmt_opt(self.overlap_pairwise_se),
            fmt_opt(self.volume),
        ];
        for s in &self.stats {
            cells.extend([fmt_opt(s.mean), fmt_opt(s.p05), fmt_opt(s.p95)]);
        }
        cells
    }

    /// Summary for the named column of [`SWEEP_STATS`].
    pub fn stat(&self, name: &str) -> Option<&Summary> {
        SWEEP_STATS
            .iter()
            .position(|s| *s == name)
            .and_then(|i| self.stats.get(i))
    }
}

pub fn run_sweep(input: &Graph, cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let cliques = enumerate_maximal_cliques(input)?;
    let profile = GraphProfile::of(input);
    cfg.p_grid
        .iter()
        .enumerate()
        .map(|(index, &p)| sweep_point(input, &cliques, &profile, cfg, index, p))
        .collect()
}

fn sweep_point(
    input: &Graph,
    cliques: &CliqueSet,
    profile: &GraphProfile,
    cfg: &SweepConfig,
    index: usize,
    p: f64,
) -> Result<SweepRow> {
    let planted = PlantedModel::with_cliques(input.clone(), cliques.clone(), p, cfg.kind)?;
    let model = match UnionModel::fit(planted, cfg.fit) {
        Ok(m) => m,
        Err(e) => {
            log::warn!("p={p}: residual fit failed: {e}");
            return Ok(SweepRow {
                p,
                status: PointStatus::FitFailed(e.to_string()),
                fit_iterations: None,
                fit_error: None,
                samples: 0,
                overlap_pairwise: None,
                overlap_pairwise_se: None,
                volume: None,
                stats: vec![Summary::default(); SWEEP_STATS.len()],
            });
        }
    };
    let status = if model.residual.converged {
        PointStatus::Ok
    } else {
        PointStatus::NotConverged
    };

    let point_seed = rng::derive_seed(cfg.seed, index as u64);
    let total = cfg.samples_per_point.max(2 * cfg.pairs_for_overlap);
    let samples: Vec<Graph> = (0..total as u64)
        .into_par_iter()
        .map(|i| model.sample_union(&mut rng::stream(point_seed, i)))
        .collect();

    let per_sample: Vec<[Option<f64>; 10]> = samples[..cfg.samples_per_point]
        .par_iter()
        .map(|g| {
            let report = stats_report_with_profile(g, Some(profile));
            let vs_input = edge_overlap_vs_input(g, input).expect("samples share the input's nodes");
            stat_values(&report, vs_input)
        })
        .collect();
    let stats = (0..SWEEP_STATS.len())
        .map(|c| Summary::of(per_sample.iter().map(|row| row[c])))
        .collect();

    let pairs = pair_counts(&samples[..2 * cfg.pairs_for_overlap]);
    let overlap = estimate_from_pairs(&pairs, point_seed)?;

    Ok(SweepRow {
        p,
        status,
        fit_iterations: Some(model.residual.iterations),
        fit_error: Some(model.residual.final_error),
        samples: cfg.samples_per_point,
        overlap_pairwise: overlap.overlap,
        overlap_pairwise_se: overlap.overlap.map(|_| overlap.std_error),
        volume: Some(overlap.volume),
        stats,
    })
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{}", sweep_csv_header().join(","))?;
    for row in rows {
        writeln!(out, "{}", row.csv_row().join(","))?;
    }
    Ok(())
}
