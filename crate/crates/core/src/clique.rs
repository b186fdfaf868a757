//! Maximal clique enumeration and per-edge clique multiplicity.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default upper limit on the number of maximal cliques enumerated.
pub const DEFAULT_CLIQUE_CAP: usize = 10_000_000;

/// Largest graph accepted by [`brute_force_maximal_cliques`].
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Maximal cliques of size at least two, in canonical order: members
/// ascending, cliques lexicographic. Also records, for every node pair,
/// how many listed cliques contain both endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueSet {
    cliques: Vec<Vec<usize>>,
    multiplicity: BTreeMap<(usize, usize), usize>,
}

impl CliqueSet {
    /// Canonicalizes `cliques` and builds the multiplicity index.
    pub fn from_cliques(mut cliques: Vec<Vec<usize>>) -> Self {
        for c in cliques.iter_mut() {
            c.sort_unstable();
        }
        cliques.sort();
        cliques.dedup();
        let mut multiplicity = BTreeMap::new();
        for c in &cliques {
            for (a, &i) in c.iter().enumerate() {
                for &j in &c[a + 1..] {
                    *multiplicity.entry((i, j)).or_insert(0) += 1;
                }
            }
        }
        CliqueSet {
            cliques,
            multiplicity,
        }
    }

    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn max_size(&self) -> usize {
        self.cliques.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of listed cliques containing both `i` and `j`.
    pub fn multiplicity(&self, i: usize, j: usize) -> usize {
        let key = if i < j { (i, j) } else { (j, i) };
        self.multiplicity.get(&key).copied().unwrap_or(0)
    }

    /// `((i, j), m_ij)` for every pair with nonzero multiplicity, `i < j`.
    pub fn multiplicities(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.multiplicity.iter().map(|(&k, &v)| (k, v))
    }
}

/// Enumerates maximal cliques with the default cap.
pub fn enumerate_maximal_cliques(g: &Graph) -> Result<CliqueSet> {
    enumerate_maximal_cliques_capped(g, DEFAULT_CLIQUE_CAP)
}

/// Bron–Kerbosch with Tomita pivoting, run from each vertex of a
/// degeneracy ordering (Eppstein–Löffler–Strash).
pub fn enumerate_maximal_cliques_capped(g: &Graph, cap: usize) -> Result<CliqueSet> {
    let order = degeneracy_order(g);
    let mut position = vec![0; g.node_count()];
    for (pos, &v) in order.iter().enumerate() {
        position[v] = pos;
    }

    let mut search = Search {
        g,
        cap,
        found: Vec::new(),
    };
    let mut r = Vec::new();
    for &v in &order {
        let (mut p, mut x) = (Vec::new(), Vec::new());
        for &w in g.neighbors(v) {
            if position[w] > position[v] {
                p.push(w);
            } else {
                x.push(w);
            }
        }
        r.push(v);
        search.expand(&mut r, p, x)?;
        r.pop();
    }
    Ok(CliqueSet::from_cliques(search.found))
}

struct Search<'a> {
    g: &'a Graph,
    cap: usize,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    // p and x are kept sorted.
    fn expand(&mut self, r: &mut Vec<usize>, mut p: Vec<usize>, mut x: Vec<usize>) -> Result<()> {
        if p.is_empty() {
            if x.is_empty() && r.len() >= 2 {
                if self.found.len() >= self.cap {
                    return Err(Error::CliqueCap { cap: self.cap });
                }
                self.found.push(r.clone());
            }
            return Ok(());
        }

        let pivot = p
            .iter()
            .chain(x.iter())
            .copied()
            .max_by_key(|&u| intersect(&p, self.g.neighbors(u)).len())
            .expect("p is non-empty");
        let pivot_nbrs = self.g.neighbors(pivot);
        let candidates: Vec<usize> = p
            .iter()
            .copied()
            .filter(|v| pivot_nbrs.binary_search(v).is_err())
            .collect();

        for v in candidates {
            let nbrs = self.g.neighbors(v);
            r.push(v);
            self.expand(r, intersect(&p, nbrs), intersect(&x, nbrs))?;
            r.pop();
            if let Ok(idx) = p.binary_search(&v) {
                p.remove(idx);
            }
            let idx = x.binary_search(&v).unwrap_or_else(|e| e);
            x.insert(idx, v);
        }
        Ok(())
    }
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Smallest-last ordering via bucket queue; ties broken by node id.
fn degeneracy_order(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max_deg = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<std::collections::BTreeSet<usize>> =
        vec![Default::default(); max_deg + 1];
    for v in 0..n {
        buckets[degree[v]].insert(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut lowest = 0;
    for _ in 0..n {
        while buckets[lowest].is_empty() {
            lowest += 1;
        }
        let v = buckets[lowest].pop_first().expect("bucket is non-empty");
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                buckets[degree[w]].remove(&w);
                degree[w] -= 1;
                buckets[degree[w]].insert(w);
                lowest = lowest.min(degree[w]);
            }
        }
    }
    order
}

/// Exhaustive subset search. Test oracle only; `n` must not exceed
/// [`BRUTE_FORCE_LIMIT`].
pub fn brute_force_maximal_cliques(g: &Graph) -> Result<CliqueSet> {
    let n = g.node_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let masks: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    let is_clique = |set: u32| {
        (0..n).all(|v| set & (1 << v) == 0 || (set & !(1 << v)) & !masks[v] == 0)
    };
    let mut cliques = Vec::new();
    for set in 0u32..(1u32 << n) {
        if set.count_ones() < 2 || !is_clique(set) {
            continue;
        }
        let extendable = (0..n).any(|v| set & (1 << v) == 0 && set & !masks[v] == 0);
        if !extendable {
            cliques.push((0..n).filter(|&v| set & (1 << v) != 0).collect());
        }
    }
    Ok(CliqueSet::from_cliques(cliques))
}
