//! Simple undirected graphs over dense `0..n` node ids, plus edge-list I/O.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Immutable simple undirected graph. Neighbor lists are sorted and
/// symmetric; there are no self-loops and no parallel edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let adjacency = (0..n)
            .map(|i| (0..n).filter(|&j| j != i).collect())
            .collect();
        Graph {
            adjacency,
            edge_count: n * n.saturating_sub(1) / 2,
        }
    }

    /// Builds a graph from unordered pairs. Self-loops and repeated pairs
    /// (in either orientation) are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u != v {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        Ok(Self::from_raw_adjacency(adjacency))
    }

    /// Sorts and dedups raw (already symmetric, loop-free) neighbor lists.
    pub(crate) fn from_raw_adjacency(mut adjacency: Vec<Vec<usize>>) -> Self {
        let mut degree_sum = 0;
        for list in adjacency.iter_mut() {
            list.sort_unstable();
            list.dedup();
            degree_sum += list.len();
        }
        let g = Graph {
            adjacency,
            edge_count: degree_sum / 2,
        };
        debug_assert!(g.is_well_formed());
        g
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(i, j)` with `i < j`, in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, list)| {
            let start = list.partition_point(|&j| j <= i);
            list[start..].iter().map(move |&j| (i, j))
        })
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        DegreeSequence(self.adjacency.iter().map(Vec::len).collect())
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of edges present in both graphs. Node counts may differ; only
    /// the shared id range is compared.
    pub fn shared_edge_count(&self, other: &Graph) -> usize {
        let n = self.node_count().min(other.node_count());
        (0..n)
            .map(|i| {
                let a = &self.adjacency[i];
                let b = &other.adjacency[i];
                let a = &a[a.partition_point(|&j| j <= i)..];
                let b = &b[b.partition_point(|&j| j <= i)..];
                sorted_intersection_len(a, b)
            })
            .sum()
    }

    /// Symmetry, sortedness, loop-freeness, and the handshake identity.
    pub fn is_well_formed(&self) -> bool {
        let mut degree_sum = 0;
        for (i, list) in self.adjacency.iter().enumerate() {
            degree_sum += list.len();
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            for &j in list {
                if j == i || j >= self.node_count() || self.adjacency[j].binary_search(&i).is_err() {
                    return false;
                }
            }
        }
        degree_sum == 2 * self.edge_count
    }
}

pub(crate) fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Node degrees, indexed by node id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSequence(pub Vec<usize>);

impl DegreeSequence {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&d| d as f64).collect()
    }
}

/// Result of reading an edge list.
#[derive(Clone, Debug)]
pub struct ParsedGraph {
    pub graph: Graph,
    /// Number of `i i` lines that were discarded.
    pub self_loops_dropped: usize,
}

fn is_skippable(line: &str) -> bool {
    let t = line.trim_start();
    t.is_empty() || t.starts_with('#') || t.starts_with('%')
}

/// Reads a whitespace-separated edge list of non-negative integer ids.
///
/// Lines starting with `#` or `%` are comments. Columns after the second
/// (weights, timestamps) are ignored. The node count is one more than the
/// largest id seen.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<ParsedGraph> {
    let mut pairs = Vec::new();
    let mut max_id: Option<usize> = None;
    let mut self_loops = 0;
    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = index + 1;
        if is_skippable(&line) {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let mut ids = [0usize; 2];
        for (found, slot) in ids.iter_mut().enumerate() {
            let token = tokens.next().ok_or(Error::Arity {
                line: line_no,
                found,
            })?;
            *slot = token.parse().map_err(|_| Error::Parse {
                line: line_no,
                token: token.to_string(),
            })?;
        }
        let [u, v] = ids;
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        if u == v {
            self_loops += 1;
        } else {
            pairs.push((u, v));
        }
    }
    let n = max_id.map_or(0, |m| m + 1);
    if self_loops > 0 {
        log::warn!("dropped {self_loops} self-loop line(s)");
    }
    Ok(ParsedGraph {
        graph: Graph::from_edges(n, pairs)?,
        self_loops_dropped: self_loops,
    })
}

pub fn parse_edge_list_str(text: &str) -> Result<ParsedGraph> {
    parse_edge_list(text.as_bytes())
}

/// Mapping from original node labels to dense ids; entry `i` is the label
/// of node `i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdMap {
    labels: Vec<String>,
}

impl IdMap {
    pub fn label(&self, id: usize) -> Option<&str> {
        self.labels.get(id).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Writes `original_id new_id` lines in new-id order.
    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (id, label) in self.labels.iter().enumerate() {
            writeln!(out, "{label} {id}")?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut entries = Vec::new();
        for (index, line) in reader.lines().enumerate() {
            let line = line?;
            if is_skippable(&line) {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != 2 {
                return Err(Error::Arity {
                    line: index + 1,
                    found: tokens.len(),
                });
            }
            let id: usize = tokens[1].parse().map_err(|_| Error::Parse {
                line: index + 1,
                token: tokens[1].to_string(),
            })?;
            entries.push((id, tokens[0].to_string()));
        }
        entries.sort();
        if entries.iter().enumerate().any(|(i, (id, _))| *id != i) {
            return Err(Error::InvalidParameter(
                "id map is not a dense 0-based numbering".into(),
            ));
        }
        Ok(IdMap {
            labels: entries.into_iter().map(|(_, label)| label).collect(),
        })
    }
}

/// Reads an edge list whose node tokens are arbitrary labels, assigning
/// dense ids in order of first appearance.
pub fn parse_labeled_edge_list<R: BufRead>(reader: R) -> Result<(ParsedGraph, IdMap)> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut map = IdMap::default();
    let mut pairs = Vec::new();
    let mut self_loops = 0;
    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        if is_skippable(&line) {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().take(2).collect();
        if tokens.len() < 2 {
            return Err(Error::Arity {
                line: index + 1,
                found: tokens.len(),
            });
        }
        let mut intern = |label: &str| {
            *ids.entry(label.to_string()).or_insert_with(|| {
                map.labels.push(label.to_string());
                map.labels.len() - 1
            })
        };
        let u = intern(tokens[0]);
        let v = intern(tokens[1]);
        if u == v {
            self_loops += 1;
        } else {
            pairs.push((u, v));
        }
    }
    let graph = Graph::from_edges(map.len(), pairs)?;
    Ok((
        ParsedGraph {
            graph,
            self_loops_dropped: self_loops,
        },
        map,
    ))
}

/// Writes one `i j` line per edge, `i < j`, sorted.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    for (i, j) in g.edges() {
        writeln!(out, "{i} {j}")?;
    }
    Ok(())
}

pub fn edge_list_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("edge list is ASCII")
}

/// `num_cliques` disjoint cliques of `clique_size` nodes joined in a ring.
///
/// Clique `c` occupies nodes `c*s .. (c+1)*s`. Its last node is joined to
/// the first node of clique `c+1 (mod num_cliques)`.
pub fn ring_of_cliques(num_cliques: usize, clique_size: usize) -> Result<Graph> {
    if num_cliques < 3 || clique_size < 2 {
        return Err(Error::InvalidParameter(format!(
            "ring of cliques needs at least 3 cliques of size 2, got {num_cliques} x {clique_size}"
        )));
    }
    let s = clique_size;
    let n = num_cliques * s;
    let mut edges = Vec::new();
    for c in 0..num_cliques {
        let base = c * s;
        for i in 0..s {
            for j in i + 1..s {
                edges.push((base + i, base + j));
            }
        }
        let next = ((c + 1) % num_cliques) * s;
        edges.push((base + s - 1, next));
    }
    Graph::from_edges(n, edges)
}
