//! Graph statistics used to compare generated graphs with their input.
//!
//! Subgraph counts are exact. Quantities that can be undefined (a
//! correlation against a constant sequence, a path length with no
//! connected pair) are `Option<f64>`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{sorted_intersection_len, Graph};

/// Number of triangles incident to each node.
pub fn triangle_sequence(g: &Graph) -> Vec<u64> {
    let n = g.node_count();
    let mut seq = vec![0u64; n];
    for u in 0..n {
        let nu = g.neighbors(u);
        for &v in nu.iter().filter(|&&v| v > u) {
            let nv = g.neighbors(v);
            // common neighbors w > v
            let a = &nu[nu.partition_point(|&w| w <= v)..];
            let b = &nv[nv.partition_point(|&w| w <= v)..];
            let mut i = 0;
            let mut j = 0;
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        seq[u] += 1;
                        seq[v] += 1;
                        seq[a[i]] += 1;
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    seq
}

pub fn triangle_count(g: &Graph) -> u64 {
    triangle_sequence(g).iter().sum::<u64>() / 3
}

/// Number of K4 subgraphs.
pub fn four_clique_count(g: &Graph) -> u64 {
    let mut count = 0;
    for u in 0..g.node_count() {
        let nu = g.neighbors(u);
        let higher = &nu[nu.partition_point(|&w| w <= u)..];
        for (a, &v) in higher.iter().enumerate() {
            let nv = g.neighbors(v);
            // common neighbors above v
            let common: Vec<usize> = higher[a + 1..]
                .iter()
                .copied()
                .filter(|w| nv.binary_search(w).is_ok())
                .collect();
            for (b, &w) in common.iter().enumerate() {
                let nw = g.neighbors(w);
                count += sorted_intersection_len(&common[b + 1..], nw) as u64;
            }
        }
    }
    count
}

/// Number of distinct 4-cycles (squares), each counted once.
///
/// Each square has two diagonals; summing `C(codeg(u, w), 2)` over
/// unordered pairs counts each square once per diagonal.
pub fn four_cycle_count(g: &Graph) -> u64 {
    let n = g.node_count();
    let mut codegree = vec![0u64; n];
    let mut touched = Vec::new();
    let mut twice = 0u64;
    for u in 0..n {
        for &v in g.neighbors(u) {
            for &w in g.neighbors(v) {
                if w > u {
                    if codegree[w] == 0 {
                        touched.push(w);
                    }
                    codegree[w] += 1;
                }
            }
        }
        for w in touched.drain(..) {
            let c = codegree[w];
            twice += c * (c - 1) / 2;
            codegree[w] = 0;
        }
    }
    twice / 2
}

/// Number of simple cycles of length `k` (`k >= 3`). Triangles and squares
/// use the dedicated counters; longer cycles are found by depth-first
/// search rooted at each cycle's smallest node, which is exponential in
/// `k`.
pub fn cycle_count(g: &Graph, k: usize) -> u64 {
    match k {
        0..=2 => 0,
        3 => triangle_count(g),
        4 => four_cycle_count(g),
        _ => {
            let mut on_path = vec![false; g.node_count()];
            let mut closed = 0u64;
            for root in 0..g.node_count() {
                on_path[root] = true;
                extend_path(g, root, root, 1, k, &mut on_path, &mut closed);
                on_path[root] = false;
            }
            // each cycle is traversed in both directions
            closed / 2
        }
    }
}

fn extend_path(
    g: &Graph,
    root: usize,
    last: usize,
    len: usize,
    k: usize,
    on_path: &mut [bool],
    closed: &mut u64,
) {
    for &w in g.neighbors(last) {
        if w <= root || on_path[w] {
            continue;
        }
        if len + 1 == k {
            if g.has_edge(w, root) {
                *closed += 1;
            }
        } else {
            on_path[w] = true;
            extend_path(g, root, w, len + 1, k, on_path, closed);
            on_path[w] = false;
        }
    }
}

/// Pearson correlation. `Ok(None)` when either input has zero variance.
pub fn pcc(a: &[f64], b: &[f64]) -> Result<Option<f64>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::InvalidParameter(
            "correlation needs at least two entries".into(),
        ));
    }
    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        let dx = x - mean_a;
        let dy = y - mean_b;
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Ok(None);
    }
    Ok(Some((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0)))
}

/// Number of paths of length two, `sum_i C(deg_i, 2)`.
pub fn wedge_count(g: &Graph) -> u64 {
    (0..g.node_count())
        .map(|v| {
            let d = g.degree(v) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum()
}

/// Global clustering coefficient `3 * triangles / wedges`.
pub fn transitivity(g: &Graph) -> Option<f64> {
    let wedges = wedge_count(g);
    (wedges > 0).then(|| 3.0 * triangle_count(g) as f64 / wedges as f64)
}

/// Sizes of connected components, in order of smallest member id.
pub fn component_sizes(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        stack.push(s);
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        sizes.push(size);
    }
    sizes
}

/// `sum_i C(|C_i|, 2) / C(n, 2)`; `None` for fewer than two nodes.
pub fn fraction_connected_pairs(g: &Graph) -> Option<f64> {
    let n = g.node_count() as u64;
    if n < 2 {
        return None;
    }
    let connected: u64 = component_sizes(g)
        .into_iter()
        .map(|s| {
            let s = s as u64;
            s * (s - 1) / 2
        })
        .sum();
    Some(connected as f64 / (n * (n - 1) / 2) as f64)
}

/// Mean shortest-path length over connected unordered pairs only.
pub fn characteristic_path_length(g: &Graph) -> Option<f64> {
    let n = g.node_count();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    let (mut total, mut pairs) = (0u64, 0u64);
    for s in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                    if w > s {
                        total += dist[w] as u64;
                        pairs += 1;
                    }
                }
            }
        }
    }
    (pairs > 0).then(|| total as f64 / pairs as f64)
}

/// Evaluation statistics for one graph, optionally against a reference.
#[derive(Clone, Debug, PartialEq)]
pub struct StatsReport {
    pub nodes: usize,
    pub edges: usize,
    pub max_degree: usize,
    /// Correlation of this graph's degree sequence with the reference's
    /// (with itself when there is no reference).
    pub degree_pcc: Option<f64>,
    pub triangle_pcc: Option<f64>,
    pub triangles: u64,
    pub four_cliques: u64,
    pub four_cycles: u64,
    pub fraction_connected_pairs: Option<f64>,
    pub char_path_length: Option<f64>,
    pub transitivity: Option<f64>,
    pub normalized: Option<NormalizedCounts>,
}

/// Subgraph counts divided by the reference graph's counts.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedCounts {
    pub triangles: Option<f64>,
    pub four_cliques: Option<f64>,
    pub four_cycles: Option<f64>,
}

/// Per-graph quantities a report is assembled from. Computing these once
/// for a reference graph avoids recounting it for every sample.
#[derive(Clone, Debug)]
pub struct GraphProfile {
    pub degrees: Vec<f64>,
    pub triangle_sequence: Vec<f64>,
    pub triangles: u64,
    pub four_cliques: u64,
    pub four_cycles: u64,
}

impl GraphProfile {
    pub fn of(g: &Graph) -> Self {
        let tri = triangle_sequence(g);
        GraphProfile {
            degrees: g.degree_sequence().to_f64(),
            triangles: tri.iter().sum::<u64>() / 3,
            triangle_sequence: tri.into_iter().map(|t| t as f64).collect(),
            four_cliques: four_clique_count(g),
            four_cycles: four_cycle_count(g),
        }
    }
}

fn ratio(count: u64, reference: u64) -> Option<f64> {
    (reference > 0).then(|| count as f64 / reference as f64)
}

fn sequence_pcc(a: &[f64], b: &[f64]) -> Option<f64> {
    // length < 2 or mismatched node sets leave the correlation undefined
    pcc(a, b).ok().flatten()
}

pub fn stats_report(g: &Graph, reference: Option<&Graph>) -> StatsReport {
    let reference = reference.map(GraphProfile::of);
    stats_report_with_profile(g, reference.as_ref())
}

/// Like [`stats_report`] but with a precomputed reference profile.
pub fn stats_report_with_profile(g: &Graph, reference: Option<&GraphProfile>) -> StatsReport {
    let own = GraphProfile::of(g);
    let against = reference.unwrap_or(&own);
    StatsReport {
        nodes: g.node_count(),
        edges: g.edge_count(),
        max_degree: g.max_degree(),
        degree_pcc: sequence_pcc(&own.degrees, &against.degrees),
        triangle_pcc: sequence_pcc(&own.triangle_sequence, &against.triangle_sequence),
        triangles: own.triangles,
        four_cliques: own.four_cliques,
        four_cycles: own.four_cycles,
        fraction_connected_pairs: fraction_connected_pairs(g),
        char_path_length: characteristic_path_length(g),
        transitivity: transitivity(g),
        normalized: reference.map(|r| NormalizedCounts {
            triangles: ratio(own.triangles, r.triangles),
            four_cliques: ratio(own.four_cliques, r.four_cliques),
            four_cycles: ratio(own.four_cycles, r.four_cycles),
        }),
    }
}

/// Column names of [`StatsReport::csv_row`], in order.
pub const STATS_CSV_HEADER: &[&str] = &[
    "nodes",
    "edges",
    "max_degree",
    "degree_pcc",
    "triangle_pcc",
    "triangles",
    "four_cliques",
    "four_cycles",
    "fraction_connected_pairs",
    "char_path_length",
    "transitivity",
    "normalized_triangles_vs_input",
    "normalized_four_cliques_vs_input",
    "normalized_four_cycles_vs_input",
];

/// Formats an optional value; undefined becomes an empty cell.
pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl StatsReport {
    pub fn csv_row(&self) -> Vec<String> {
        let norm = self.normalized.as_ref();
        vec![
            self.nodes.to_string(),
            self.edges.to_string(),
            self.max_degree.to_string(),
            fmt_opt(self.degree_pcc),
            fmt_opt(self.triangle_pcc),
            self.triangles.to_string(),
            self.four_cliques.to_string(),
            self.four_cycles.to_string(),
            fmt_opt(self.fraction_connected_pairs),
            fmt_opt(self.char_path_length),
            fmt_opt(self.transitivity),
            fmt_opt(norm.and_then(|n| n.triangles)),
            fmt_opt(norm.and_then(|n| n.four_cliques)),
            fmt_opt(norm.and_then(|n| n.four_cycles)),
        ]
    }
}
