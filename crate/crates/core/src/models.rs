//! Max-clique planted samplers, the odds-product residual model, and the
//! reference random graph models for each level of edge dependency.
//!
//! A sample from the full model is the union of two graphs: a planted
//! graph `G_p`, built by activating maximal cliques of the input graph,
//! and a residual graph `G_r`, drawn edge-independently from an
//! odds-product model fitted so the union's expected degrees equal the
//! input's degrees.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::clique::{enumerate_maximal_cliques, CliqueSet};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::SampleRng;

/// Anything that draws random graphs on a fixed node set.
pub trait GraphSampler: Sync {
    fn node_count(&self) -> usize;
    fn sample(&self, rng: &mut SampleRng) -> Graph;
}

/// Level of edge dependency a model allows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dependency {
    EdgeIndependent,
    NodeIndependent,
    FullyDependent,
}

impl Dependency {
    pub const ALL: [Dependency; 3] = [
        Dependency::EdgeIndependent,
        Dependency::NodeIndependent,
        Dependency::FullyDependent,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Dependency::EdgeIndependent => "ei",
            Dependency::NodeIndependent => "ni",
            Dependency::FullyDependent => "fd",
        }
    }
}

impl fmt::Display for Dependency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Dependency {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ei" | "mcei" | "edge-independent" => Ok(Dependency::EdgeIndependent),
            "ni" | "mcni" | "node-independent" => Ok(Dependency::NodeIndependent),
            "fd" | "mcfd" | "fully-dependent" => Ok(Dependency::FullyDependent),
            other => Err(Error::InvalidParameter(format!(
                "unknown dependency kind {other:?} (expected ei, ni or fd)"
            ))),
        }
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "probability {p} is outside [0, 1]"
        )))
    }
}

#[inline]
fn coin(rng: &mut SampleRng, p: f64) -> bool {
    // gen::<f64>() is in [0, 1), so p = 0 never fires and p = 1 always does
    rng.gen::<f64>() < p
}

fn clique_pairs(members: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    members
        .iter()
        .enumerate()
        .flat_map(move |(a, &i)| members[a + 1..].iter().map(move |&j| (i, j)))
}

/// Accumulates edges for a sampled graph.
struct EdgeBuffer {
    adjacency: Vec<Vec<usize>>,
}

impl EdgeBuffer {
    fn new(n: usize) -> Self {
        EdgeBuffer {
            adjacency: vec![Vec::new(); n],
        }
    }

    fn add(&mut self, i: usize, j: usize) {
        self.adjacency[i].push(j);
        self.adjacency[j].push(i);
    }

    fn add_clique(&mut self, members: &[usize]) {
        for (i, j) in clique_pairs(members) {
            self.add(i, j);
        }
    }

    fn finish(self) -> Graph {
        Graph::from_raw_adjacency(self.adjacency)
    }
}

/// Input graph, its maximal cliques, and the planting rule.
#[derive(Clone, Debug)]
pub struct PlantedModel {
    input: Graph,
    cliques: CliqueSet,
    p: f64,
    kind: Dependency,
}

impl PlantedModel {
    pub fn new(input: Graph, p: f64, kind: Dependency) -> Result<Self> {
        let cliques = enumerate_maximal_cliques(&input)?;
        Self::with_cliques(input, cliques, p, kind)
    }

    /// Reuses an already enumerated clique set for `input`.
    pub fn with_cliques(input: Graph, cliques: CliqueSet, p: f64, kind: Dependency) -> Result<Self> {
        check_probability(p)?;
        Ok(PlantedModel {
            input,
            cliques,
            p,
            kind,
        })
    }

    pub fn input(&self) -> &Graph {
        &self.input
    }

    pub fn cliques(&self) -> &CliqueSet {
        &self.cliques
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn kind(&self) -> Dependency {
        self.kind
    }

    /// Draws `G_p`. Cliques are visited in canonical order so a given
    /// generator state always yields the same graph.
    pub fn sample_planted(&self, rng: &mut SampleRng) -> Graph {
        let mut buf = EdgeBuffer::new(self.input.node_count());
        self.plant_into(&mut buf, rng);
        buf.finish()
    }

    fn plant_into(&self, buf: &mut EdgeBuffer, rng: &mut SampleRng) {
        let p = self.p;
        match self.kind {
            Dependency::EdgeIndependent => {
                for clique in self.cliques.cliques() {
                    for (i, j) in clique_pairs(clique) {
                        if coin(rng, p) {
                            buf.add(i, j);
                        }
                    }
                }
            }
            Dependency::FullyDependent => {
                for clique in self.cliques.cliques() {
                    if coin(rng, p) {
                        buf.add_clique(clique);
                    }
                }
            }
            Dependency::NodeIndependent => {
                let activation = p.sqrt();
                let mut active = Vec::new();
                for clique in self.cliques.cliques() {
                    active.clear();
                    active.extend(clique.iter().copied().filter(|_| coin(rng, activation)));
                    buf.add_clique(&active);
                }
            }
        }
    }

    /// Per-pair probability that `G_p` contains the edge:
    /// `1 - (1 - p)^m_ij`, where `m_ij` counts the cliques holding both
    /// endpoints. The same form holds for all three kinds: every clique
    /// gives the pair an independent chance `p` (one edge coin, one
    /// clique coin, or two activation coins of `sqrt(p)`).
    pub fn planted_marginals(&self) -> EdgeProbabilityMatrix {
        let mut m = EdgeProbabilityMatrix::zeros(self.input.node_count());
        for ((i, j), mult) in self.cliques.multiplicities() {
            m.set(i, j, 1.0 - (1.0 - self.p).powi(mult as i32));
        }
        m
    }
}

impl GraphSampler for PlantedModel {
    fn node_count(&self) -> usize {
        self.input.node_count()
    }

    fn sample(&self, rng: &mut SampleRng) -> Graph {
        self.sample_planted(rng)
    }
}

/// Symmetric matrix of independent edge probabilities with a zero
/// diagonal, stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeProbabilityMatrix {
    n: usize,
    probs: Vec<f64>,
}

impl EdgeProbabilityMatrix {
    pub fn zeros(n: usize) -> Self {
        EdgeProbabilityMatrix {
            n,
            probs: vec![0.0; n * n],
        }
    }

    /// Every off-diagonal entry set to `p`.
    pub fn uniform(n: usize, p: f64) -> Result<Self> {
        check_probability(p)?;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, p);
            }
        }
        Ok(m)
    }

    /// Builds from `f(i, j)` evaluated for `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                let p = f(i, j);
                check_probability(p)?;
                m.set(i, j, p);
            }
        }
        Ok(m)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.probs[i * self.n + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, p: f64) {
        debug_assert!(i != j);
        self.probs[i * self.n + j] = p;
        self.probs[j * self.n + i] = p;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.probs[i * self.n..(i + 1) * self.n]
    }

    /// Expected degrees.
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    /// `((i, j), P_ij)` for `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| ((i, j), self.get(i, j))))
    }

    /// Expected edge count.
    pub fn volume(&self) -> f64 {
        self.pairs().map(|(_, p)| p).sum()
    }

    /// Draws each edge independently. Pairs with probability at or below
    /// `floor` are skipped without consuming randomness.
    fn sample_into(&self, buf: &mut EdgeBuffer, rng: &mut SampleRng, floor: f64) {
        for i in 0..self.n {
            let row = self.row(i);
            for (j, &p) in row.iter().enumerate().skip(i + 1) {
                if p > floor && coin(rng, p) {
                    buf.add(i, j);
                }
            }
        }
    }
}

impl GraphSampler for EdgeProbabilityMatrix {
    fn node_count(&self) -> usize {
        self.n
    }

    fn sample(&self, rng: &mut SampleRng) -> Graph {
        let mut buf = EdgeBuffer::new(self.n);
        self.sample_into(&mut buf, rng, 0.0);
        buf.finish()
    }
}

/// Logits are kept in `[-LOGIT_CLAMP, LOGIT_CLAMP]`.
pub const LOGIT_CLAMP: f64 = 30.0;

/// Residual probabilities at or below this are treated as zero when
/// sampling a union.
pub const RESIDUAL_FLOOR: f64 = 1e-6;

/// Maximum number of step halvings per Newton iteration.
const MAX_HALVINGS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitOptions {
    /// Target for `||d_hat - d||_2`.
    pub epsilon: f64,
    pub max_iters: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            epsilon: 1e-8,
            max_iters: 100,
        }
    }
}

/// Fitted odds-product residual model.
#[derive(Clone, Debug)]
pub struct OddsProductModel {
    pub logits: Vec<f64>,
    /// `E[A_p]`.
    pub planted_marginals: EdgeProbabilityMatrix,
    /// `E[A_r]`, with entries `sigma(l_i + l_j)`.
    pub residual_marginals: EdgeProbabilityMatrix,
    pub converged: bool,
    /// `||d_hat - d||_2` at the returned logits.
    pub final_error: f64,
    pub iterations: usize,
}

impl OddsProductModel {
    /// Expected degrees of the union, recomputed from the stored matrices.
    pub fn expected_union_degrees(&self) -> Vec<f64> {
        let n = self.logits.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i)
                    .map(|j| {
                        let ap = self.planted_marginals.get(i, j);
                        let ar = self.residual_marginals.get(i, j);
                        1.0 - (1.0 - ap) * (1.0 - ar)
                    })
                    .sum()
            })
            .collect()
    }
}

/// Numerically stable logistic function.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Quantities derived from one logit vector.
struct NewtonState {
    logits: Vec<f64>,
    /// sigma(l_i + l_j), zero diagonal
    residual: Vec<f64>,
    /// (1 - E[A_p]) * sigma(l_i + l_j) * sigma(-(l_i + l_j)), i.e.
    /// E[A_r] * (1 - E[A_u])
    slope: Vec<f64>,
    gap: Vec<f64>,
    error: f64,
}

impl NewtonState {
    fn evaluate(logits: Vec<f64>, planted: &EdgeProbabilityMatrix, target: &[f64]) -> Self {
        let n = logits.len();
        let mut residual = vec![0.0; n * n];
        let mut slope = vec![0.0; n * n];
        let mut expected = vec![0.0; n];
        for i in 0..n {
            for j in i + 1..n {
                let x = logits[i] + logits[j];
                let q = sigmoid(x);
                let miss_r = sigmoid(-x);
                let miss_p = 1.0 - planted.get(i, j);
                let union = 1.0 - miss_p * miss_r;
                let b = q * miss_p * miss_r;
                residual[i * n + j] = q;
                residual[j * n + i] = q;
                slope[i * n + j] = b;
                slope[j * n + i] = b;
                expected[i] += union;
                expected[j] += union;
            }
        }
        let gap: Vec<f64> = expected.iter().zip(target).map(|(e, d)| e - d).collect();
        let error = gap.iter().map(|g| g * g).sum::<f64>().sqrt();
        NewtonState {
            logits,
            residual,
            slope,
            gap,
            error,
        }
    }

    /// Solves `J delta = gap` with `J = B + diag(B 1)`.
    fn newton_direction(&self) -> Vec<f64> {
        let n = self.logits.len();
        let mut jac = DMatrix::from_row_slice(n, n, &self.slope);
        for i in 0..n {
            let row_sum: f64 = self.slope[i * n..(i + 1) * n].iter().sum();
            jac[(i, i)] += row_sum;
        }
        let rhs = DVector::from_column_slice(&self.gap);

        let finite = |v: &DVector<f64>| v.iter().all(|x| x.is_finite());
        if let Some(chol) = jac.clone().cholesky() {
            let delta = chol.solve(&rhs);
            if finite(&delta) {
                return delta.iter().copied().collect();
            }
        }
        if let Some(delta) = jac.clone().lu().solve(&rhs) {
            if finite(&delta) {
                log::debug!("Jacobian not positive definite; used LU");
                return delta.iter().copied().collect();
            }
        }
        log::debug!("Jacobian singular; falling back to a diagonal step");
        (0..n)
            .map(|i| {
                let d = jac[(i, i)];
                if d > 0.0 {
                    self.gap[i] / d
                } else {
                    0.0
                }
            })
            .collect()
    }
}

/// Fits logits so that the union of `G_p` (edge marginals `planted`) and
/// an odds-product residual graph has expected degrees `target`.
///
/// Newton-Raphson from zero logits. A step that does not reduce the
/// degree error is halved up to 20 times; if no halving helps the fit
/// stops with `converged = false`. Logits are clamped to
/// `[-LOGIT_CLAMP, LOGIT_CLAMP]`.
pub fn fit_residual(
    target: &[f64],
    planted: &EdgeProbabilityMatrix,
    options: FitOptions,
) -> Result<OddsProductModel> {
    let n = target.len();
    if planted.node_count() != n {
        return Err(Error::NodeCountMismatch {
            left: n,
            right: planted.node_count(),
        });
    }
    if let Some(&d) = target
        .iter()
        .find(|&&d| !(d >= 0.0 && d <= n.saturating_sub(1) as f64))
    {
        return Err(Error::InvalidParameter(format!(
            "target degree {d} is outside [0, {}]",
            n.saturating_sub(1)
        )));
    }

    let mut state = NewtonState::evaluate(vec![0.0; n], planted, target);
    let mut iterations = 0;
    let mut stalled = false;
    while state.error > options.epsilon && iterations < options.max_iters {
        let direction = state.newton_direction();
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let candidate: Vec<f64> = state
                .logits
                .iter()
                .zip(&direction)
                .map(|(l, d)| (l - step * d).clamp(-LOGIT_CLAMP, LOGIT_CLAMP))
                .collect();
            let next = NewtonState::evaluate(candidate, planted, target);
            if next.error <= state.error {
                accepted = Some(next);
                break;
            }
            step *= 0.5;
        }
        iterations += 1;
        match accepted {
            Some(next) => state = next,
            None => {
                stalled = true;
                break;
            }
        }
    }

    let converged = state.error <= options.epsilon;
    if !converged {
        log::warn!(
            "residual fit stopped after {iterations} iterations with error {:.3e}{}",
            state.error,
            if stalled { " (no descent step)" } else { "" }
        );
    }
    Ok(OddsProductModel {
        residual_marginals: EdgeProbabilityMatrix {
            n,
            probs: state.residual,
        },
        logits: state.logits,
        planted_marginals: planted.clone(),
        converged,
        final_error: state.error,
        iterations,
    })
}

/// Planted model plus fitted residual: samples `G_p ∪ G_r`.
#[derive(Clone, Debug)]
pub struct UnionModel {
    pub planted: PlantedModel,
    pub residual: OddsProductModel,
}

impl UnionModel {
    /// Fits the residual to the input graph's degrees.
    pub fn fit(planted: PlantedModel, options: FitOptions) -> Result<Self> {
        let target = planted.input().degree_sequence().to_f64();
        let residual = fit_residual(&target, &planted.planted_marginals(), options)?;
        Ok(UnionModel { planted, residual })
    }

    /// Draws `G_p` then `G_r` from the same generator and returns the
    /// union. Residual probabilities at or below [`RESIDUAL_FLOOR`] are
    /// treated as zero.
    pub fn sample_union(&self, rng: &mut SampleRng) -> Graph {
        let mut buf = EdgeBuffer::new(self.planted.input().node_count());
        self.planted.plant_into(&mut buf, rng);
        self.residual
            .residual_marginals
            .sample_into(&mut buf, rng, RESIDUAL_FLOOR);
        buf.finish()
    }
}

impl GraphSampler for UnionModel {
    fn node_count(&self) -> usize {
        self.planted.input().node_count()
    }

    fn sample(&self, rng: &mut SampleRng) -> Graph {
        self.sample_union(rng)
    }
}

/// Erdős–Rényi `G(n, p)`.
#[derive(Clone, Copy, Debug)]
pub struct Gnp {
    pub n: usize,
    pub p: f64,
}

impl Gnp {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        check_probability(p)?;
        Ok(Gnp { n, p })
    }
}

impl GraphSampler for Gnp {
    fn node_count(&self) -> usize {
        self.n
    }

    fn sample(&self, rng: &mut SampleRng) -> Graph {
        let mut buf = EdgeBuffer::new(self.n);
        for i in 0..self.n {
            for j in i + 1..self.n {
                if coin(rng, self.p) {
                    buf.add(i, j);
                }
            }
        }
        buf.finish()
    }
}

/// `K_n` with probability `p`, otherwise the empty graph.
#[derive(Clone, Copy, Debug)]
pub struct CompleteOrEmpty {
    pub n: usize,
    pub p: f64,
}

impl CompleteOrEmpty {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        check_probability(p)?;
        Ok(CompleteOrEmpty { n, p })
    }
}

impl GraphSampler for CompleteOrEmpty {
    fn node_count(&self) -> usize {
        self.n
    }

    fn sample(&self, rng: &mut SampleRng) -> Graph {
        if coin(rng, self.p) {
            Graph::complete(self.n)
        } else {
            Graph::empty(self.n)
        }
    }
}

/// Each node is active with probability `sqrt(p)`; active nodes form a
/// clique.
#[derive(Clone, Copy, Debug)]
pub struct ActiveNodes {
    pub n: usize,
    pub p: f64,
}

impl ActiveNodes {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        check_probability(p)?;
        Ok(ActiveNodes { n, p })
    }
}

impl GraphSampler for ActiveNodes {
    fn node_count(&self) -> usize {
        self.n
    }

    fn sample(&self, rng: &mut SampleRng) -> Graph {
        let activation = self.p.sqrt();
        let active: Vec<usize> = (0..self.n).filter(|_| coin(rng, activation)).collect();
        let mut buf = EdgeBuffer::new(self.n);
        buf.add_clique(&active);
        buf.finish()
    }
}

/// Always returns the same graph.
#[derive(Clone, Debug)]
pub struct FixedGraph(pub Graph);

impl GraphSampler for FixedGraph {
    fn node_count(&self) -> usize {
        self.0.node_count()
    }

    fn sample(&self, _rng: &mut SampleRng) -> Graph {
        self.0.clone()
    }
}
