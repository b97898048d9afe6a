//! Simple undirected graphs: the arena the PageRank games are played on.
//!
//! Vertices are dense ids `0..n`. Every vertex also carries a string label,
//! which only matters at the I/O boundary (edge-list files, reports).

mod automorphism;
mod decompose;
pub mod generate;

pub use automorphism::check_swap_automorphism;
pub use decompose::{
    components_after_removal, k_parameter, BiconnectedInfo, RemovalComponent,
    RemovalDecomposition,
};

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    labels: Vec<String>,
}

impl Graph {
    /// Edgeless graph on `n` vertices labelled `"0"..`.
    pub fn new(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            labels: (0..n).map(|i| i.to_string()).collect(),
        }
    }

    pub fn with_labels<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if seen.insert(l.as_str(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate label {l:?}")));
            }
        }
        Ok(Self {
            adj: vec![Vec::new(); labels.len()],
            labels,
        })
    }

    /// Builds a graph on `n` numerically labelled vertices from an edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Sorted neighbour list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(v))
        }
    }

    /// Inserts the undirected edge `uv`. Returns `false` if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidGraph(format!(
                "self-loop at {}",
                self.labels[u]
            )));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                Ok(true)
            }
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if !self.has_edge(u, v) {
            return false;
        }
        let pos = self.adj[u].binary_search(&v).unwrap();
        self.adj[u].remove(pos);
        let pos = self.adj[v].binary_search(&u).unwrap();
        self.adj[v].remove(pos);
        true
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic id order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.connected_components().len() == 1
    }

    /// True when the graph has no cycle.
    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.connected_components().len() == self.n()
    }

    pub fn is_tree(&self) -> bool {
        self.n() >= 1 && self.edge_count() + 1 == self.n() && self.is_connected()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        self.adj.iter().all(|ns| ns.len() + 1 == n)
    }

    /// Vertices that are neither `v` nor adjacent to it.
    pub fn non_neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n()).filter(|&u| u != v && !self.has_edge(u, v)).collect()
    }

    /// Induced subgraph on `vertices` (ids renumbered in the given order, labels kept).
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph {
            adj: vec![Vec::new(); vertices.len()],
            labels: vertices.iter().map(|&v| self.labels[v].clone()).collect(),
        };
        for (i, &v) in vertices.iter().enumerate() {
            g.adj[i] = self.adj[v]
                .iter()
                .filter(|&&w| index[w] != usize::MAX)
                .map(|&w| index[w])
                .collect();
            g.adj[i].sort_unstable();
        }
        g
    }

    /// Vertex ids sorted by label, numeric labels first in numeric order.
    pub fn label_order(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.n()).collect();
        ids.sort_by(|&a, &b| label_cmp(&self.labels[a], &self.labels[b]));
        ids
    }

    /// Edge set in label space, each edge with its endpoints in label order.
    fn labeled_edges(&self) -> Vec<(&str, &str)> {
        let mut edges: Vec<(&str, &str)> = self
            .edges()
            .map(|(u, v)| {
                let (a, b) = (self.labels[u].as_str(), self.labels[v].as_str());
                if label_cmp(a, b) == Ordering::Greater {
                    (b, a)
                } else {
                    (a, b)
                }
            })
            .collect();
        edges.sort_by(|x, y| label_cmp(x.0, y.0).then_with(|| label_cmp(x.1, y.1)));
        edges
    }

    /// One `u v` line per edge, `u` before `v` in label order. Isolated vertices
    /// are written as single-label lines so they survive a round trip.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for v in self.label_order() {
            if self.adj[v].is_empty() {
                out.push_str(&self.labels[v]);
                out.push('\n');
            }
        }
        for (a, b) in self.labeled_edges() {
            out.push_str(a);
            out.push(' ');
            out.push_str(b);
            out.push('\n');
        }
        out
    }

    /// Canonical edge list in id space, used for hashing graph states.
    pub fn canonical_edges(&self) -> Vec<(usize, usize)> {
        self.edges().collect()
    }
}

/// Two graphs are equal when they have the same labelled vertex and edge sets,
/// regardless of how ids were assigned.
impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let mut a: Vec<&String> = self.labels.iter().collect();
        let mut b: Vec<&String> = other.labels.iter().collect();
        a.sort();
        b.sort();
        a == b && self.labeled_edges() == other.labeled_edges()
    }
}

impl Eq for Graph {}

/// Label ordering: integer labels compare numerically and sort before
/// non-numeric ones, which compare as strings.
pub fn label_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// Parses an edge-list document.
///
/// Each non-blank line that does not start with `#` holds either `u v` (an
/// edge) or a single label (an isolated vertex). Vertex ids are assigned in
/// order of first appearance; duplicate edges in either orientation collapse.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();

    let mut intern = |label: &str, labels: &mut Vec<String>| -> usize {
        if let Some(&id) = ids.get(label) {
            return id;
        }
        let id = labels.len();
        ids.insert(label.to_string(), id);
        labels.push(label.to_string());
        id
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [a] => {
                intern(a, &mut labels);
            }
            [a, b] => {
                if a == b {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("self-loop at {a}"),
                    });
                }
                let u = intern(a, &mut labels);
                let v = intern(b, &mut labels);
                edges.push((u, v));
            }
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected `u v`, found {} tokens", tokens.len()),
                })
            }
        }
    }

    if labels.is_empty() {
        return Err(Error::EmptyDocument);
    }
    let mut g = Graph::with_labels(labels)?;
    for (u, v) in edges {
        g.add_edge(u, v)?;
    }
    Ok(g)
}
