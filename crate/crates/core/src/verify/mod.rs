//! Best-response checks and Nash equilibrium verification for the three games.
//!
//! Every check returns a [`BestResponseResult`]: the player's current PageRank,
//! the best PageRank any legal strategy reaches, and an improving strategy
//! whenever the gap exceeds the tolerance.

mod add_delete;
mod deletion;
mod dynamics;
mod request_delete;
mod structure;

pub use add_delete::{best_response_add_delete, local_pagerank_coefficients, LocalCoefficients};
pub use deletion::{best_response_deletion_general, best_response_deletion_tree, deletion_coefficients};
pub use dynamics::{best_response_dynamics, graph_hash, DynamicsOutcome, DynamicsStep, DynamicsTrace};
pub use request_delete::{
    best_response_request_delete_tree, request_delete_coefficients, RequestDeleteProgram,
};
pub use structure::{alpha_insensitive_check, symmetric_addition_gain, AlphaCheck};

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::{k_parameter, Graph};
use crate::pagerank::{DirectedView, GameConfig};

/// The three strategy spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Drop any nonempty subset of incident edges.
    Deletion,
    /// Deletions plus one-way outlinks to non-neighbours.
    RequestDelete,
    /// Deletions plus at most one new edge, which the other endpoint must gain from.
    AddDelete,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Deletion, Model::RequestDelete, Model::AddDelete];

    pub fn name(self) -> &'static str {
        match self {
            Model::Deletion => "deletion",
            Model::RequestDelete => "request-delete",
            Model::AddDelete => "add-delete",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "deletion" => Ok(Model::Deletion),
            "request-delete" | "request_delete" => Ok(Model::RequestDelete),
            "add-delete" | "add_delete" => Ok(Model::AddDelete),
            other => Err(Error::InvalidParameter(format!("unknown model {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// A strategy improves only if it beats the current PageRank by more than this.
    pub tolerance: f64,
    /// Largest `k(G)` the general-graph algorithms accept.
    pub k_max: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            k_max: 12,
        }
    }
}

/// A strategy of `vertex`. The current strategy keeps every edge and adds nothing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Strategy {
    pub vertex: usize,
    /// Retained neighbours, sorted.
    pub kept: Vec<usize>,
    /// One-way arcs to non-neighbours, sorted.
    pub outlinks: Vec<usize>,
    pub added_edge: Option<usize>,
}

impl Strategy {
    pub fn keep_all(g: &Graph, v: usize) -> Self {
        Self::deletion(v, g.neighbors(v).to_vec())
    }

    pub fn deletion(vertex: usize, mut kept: Vec<usize>) -> Self {
        kept.sort_unstable();
        Self {
            vertex,
            kept,
            outlinks: Vec::new(),
            added_edge: None,
        }
    }

    /// Checks the strategy against `g` and `model`.
    pub fn validate(&self, g: &Graph, model: Model) -> Result<()> {
        let v = self.vertex;
        if v >= g.n() {
            return Err(Error::VertexOutOfRange(v));
        }
        let bad = |m: &str| Err(Error::InvalidParameter(format!("strategy of {v}: {m}")));
        if self.kept.iter().any(|&i| !g.has_edge(v, i)) {
            return bad("kept vertex is not a neighbour");
        }
        if self
            .outlinks
            .iter()
            .chain(&self.added_edge)
            .any(|&u| u == v || u >= g.n() || g.has_edge(v, u))
        {
            return bad("new link must target a non-neighbour");
        }
        match model {
            Model::Deletion if !self.outlinks.is_empty() || self.added_edge.is_some() => {
                bad("deletion strategies cannot add links")
            }
            Model::RequestDelete if self.added_edge.is_some() => bad("request-delete cannot add edges"),
            Model::AddDelete if !self.outlinks.is_empty() => bad("add-delete cannot add outlinks"),
            _ if self.kept.is_empty() && self.added_edge.is_none() && g.degree(v) > 0 => {
                bad("must keep at least one edge")
            }
            _ => Ok(()),
        }
    }

    /// Arc structure after the strategy is played.
    pub fn apply(&self, g: &Graph) -> DirectedView {
        let v = self.vertex;
        let mut d = DirectedView::from_graph(g);
        for &i in g.neighbors(v) {
            if self.kept.binary_search(&i).is_err() {
                d.remove_edge(v, i);
            }
        }
        for &u in &self.outlinks {
            d.add_arc(v, u);
        }
        if let Some(u) = self.added_edge {
            d.add_edge(v, u);
        }
        d
    }

    /// The undirected graph after the strategy (outlinks cannot be represented).
    pub fn apply_undirected(&self, g: &Graph) -> Result<Graph> {
        if !self.outlinks.is_empty() {
            return Err(Error::UnsupportedScope(
                "one-way outlinks do not give an undirected graph".into(),
            ));
        }
        let v = self.vertex;
        let mut out = g.clone();
        for &i in g.neighbors(v) {
            if self.kept.binary_search(&i).is_err() {
                out.remove_edge(v, i);
            }
        }
        if let Some(u) = self.added_edge {
            out.add_edge(v, u)?;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestResponseResult {
    pub vertex: usize,
    pub in_best_response: bool,
    pub current_pi: f64,
    pub best_pi: f64,
    /// Present exactly when the vertex is not in best response.
    pub improving: Option<Strategy>,
    /// `best_pi - current_pi`.
    pub margin: f64,
}

impl BestResponseResult {
    pub(crate) fn new(
        vertex: usize,
        current_pi: f64,
        best_pi: f64,
        witness: Option<Strategy>,
        tolerance: f64,
    ) -> Self {
        let in_best_response = best_pi <= current_pi + tolerance || witness.is_none();
        Self {
            vertex,
            in_best_response,
            current_pi,
            best_pi,
            improving: if in_best_response { None } else { witness },
            margin: best_pi - current_pi,
        }
    }

    /// A vertex without strategies to compare.
    pub(crate) fn stuck(vertex: usize, pi: f64) -> Self {
        Self::new(vertex, pi, pi, None, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NashReport {
    pub model: Model,
    pub alpha: f64,
    pub q: Vec<f64>,
    pub results: Vec<BestResponseResult>,
    pub verdict: bool,
    pub elapsed: Duration,
}

impl NashReport {
    pub(crate) fn assemble(
        model: Model,
        cfg: &GameConfig,
        results: Vec<BestResponseResult>,
        started: Instant,
    ) -> Self {
        Self {
            model,
            alpha: cfg.alpha(),
            q: cfg.q().to_vec(),
            verdict: results.iter().all(|r| r.in_best_response),
            results,
            elapsed: started.elapsed(),
        }
    }

    /// First vertex (by id) that can improve.
    pub fn first_improver(&self) -> Option<&BestResponseResult> {
        self.results.iter().find(|r| !r.in_best_response)
    }
}

/// PageRank of an isolated vertex, which idles until its next jump.
pub(crate) fn isolated_pi(cfg: &GameConfig, v: usize) -> f64 {
    cfg.q()[v]
}

pub(crate) fn check_k(g: &Graph, opts: &VerifyOptions) -> Result<()> {
    let k = k_parameter(g)?.k;
    if k > opts.k_max {
        return Err(Error::KTooLarge { k, k_max: opts.k_max });
    }
    Ok(())
}

/// Best-response check for one vertex under `model`, picking the tree
/// algorithm whenever the graph is acyclic.
pub fn best_response(
    g: &Graph,
    v: usize,
    model: Model,
    cfg: &GameConfig,
    opts: &VerifyOptions,
) -> Result<BestResponseResult> {
    match model {
        Model::Deletion if g.is_forest() => best_response_deletion_tree(g, v, cfg, opts),
        Model::Deletion => best_response_deletion_general(g, v, cfg, opts),
        Model::RequestDelete => best_response_request_delete_tree(g, v, cfg, opts),
        Model::AddDelete => best_response_add_delete(g, v, cfg, opts),
    }
}

/// Runs the best-response check for every vertex.
pub fn verify_nash(g: &Graph, model: Model, cfg: &GameConfig, opts: &VerifyOptions) -> Result<NashReport> {
    let started = Instant::now();
    cfg.check_size(g.n())?;
    match model {
        Model::RequestDelete if !g.is_forest() => {
            return Err(Error::UnsupportedScope(
                "request-delete verification needs an acyclic graph".into(),
            ))
        }
        Model::Deletion | Model::AddDelete if !g.is_forest() => check_k(g, opts)?,
        _ => {}
    }
    let results = (0..g.n())
        .map(|v| best_response(g, v, model, cfg, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(NashReport::assemble(model, cfg, results, started))
}
