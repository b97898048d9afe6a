//! Potentials and PageRank of the α-random walk.
//!
//! The potential `φ_uv` is the probability that a walk started at `u` visits
//! `v` before its first random jump. It satisfies
//!
//! ```text
//! φ_vv = 1,   φ_uv = (1-α)/|Γ(u)| · Σ_{i∈Γ(u)} φ_iv   (u ≠ v, Γ(u) ≠ ∅),
//! ```
//!
//! and PageRank follows from one column of potentials:
//!
//! ```text
//! π_v = α Σ_u q_u φ_uv / (1 - (1-α)/|Γ(v)| · Σ_{i∈Γ(v)} φ_iv).
//! ```
//!
//! A vertex without out-links keeps the walker until the next jump. This is
//! the only convention under which the two formulas above agree with the
//! stationary distribution once deletions isolate a vertex.

mod subset;

pub use subset::{subset_potentials, SubsetPotentialSolver};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Residual bound on every linear solve.
pub const RESIDUAL_LIMIT: f64 = 1e-9;

/// Jump probability and jump distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct GameConfig {
    alpha: f64,
    q: Vec<f64>,
}

impl GameConfig {
    pub fn new(alpha: f64, q: Vec<f64>) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!("alpha {alpha} not in (0, 1)")));
        }
        if q.iter().any(|&x| !x.is_finite() || x < 0.0) {
            return Err(Error::InvalidParameter(
                "jump distribution entries must be finite and non-negative".into(),
            ));
        }
        let sum: f64 = q.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "jump distribution sums to {sum}, not 1"
            )));
        }
        Ok(Self { alpha, q })
    }

    pub fn uniform(alpha: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("empty vertex set".into()));
        }
        let mut q = vec![1.0 / n as f64; n];
        // absorb rounding so the sum check holds for any n
        let drift: f64 = 1.0 - q.iter().sum::<f64>();
        q[0] += drift;
        Self::new(alpha, q)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn is_uniform(&self) -> bool {
        let n = self.q.len() as f64;
        self.q.iter().all(|&x| (x - 1.0 / n).abs() <= 1e-12)
    }

    pub(crate) fn check_size(&self, n: usize) -> Result<()> {
        if self.q.len() == n {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "jump distribution has {} entries for {} vertices",
                self.q.len(),
                n
            )))
        }
    }
}

/// Directed arc structure derived from an undirected graph, after strategy
/// modifications (removed edges, one-way outlinks, added edges).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedView {
    out: Vec<Vec<usize>>,
}

impl DirectedView {
    /// Each undirected edge becomes two arcs.
    pub fn from_graph(g: &Graph) -> Self {
        Self {
            out: (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out[u].len()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    pub fn add_arc(&mut self, u: usize, v: usize) {
        assert_ne!(u, v, "self-loop arc");
        if let Err(pos) = self.out[u].binary_search(&v) {
            self.out[u].insert(pos, v);
        }
    }

    pub fn remove_arc(&mut self, u: usize, v: usize) {
        if let Ok(pos) = self.out[u].binary_search(&v) {
            self.out[u].remove(pos);
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.add_arc(u, v);
        self.add_arc(v, u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.remove_arc(u, v);
        self.remove_arc(v, u);
    }
}

/// Potentials `φ_uv` of every `u` towards a fixed target `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialColumn {
    pub target: usize,
    pub phi: Vec<f64>,
}

impl PotentialColumn {
    /// Largest violation of the potential recursion over all non-target vertices.
    pub fn residual(&self, d: &DirectedView, alpha: f64) -> f64 {
        (0..d.n())
            .filter(|&u| u != self.target)
            .map(|u| {
                let out = d.out_neighbors(u);
                let rhs = if out.is_empty() {
                    0.0
                } else {
                    (1.0 - alpha) / out.len() as f64 * out.iter().map(|&i| self.phi[i]).sum::<f64>()
                };
                (self.phi[u] - rhs).abs()
            })
            .fold(0.0, f64::max)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("alpha {alpha} not in (0, 1)")))
    }
}

/// Dense LU solve of the potential system for target `v`.
pub fn potentials_column(d: &DirectedView, v: usize, alpha: f64) -> Result<PotentialColumn> {
    check_alpha(alpha)?;
    let n = d.n();
    if v >= n {
        return Err(Error::VertexOutOfRange(v));
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    let mut rhs = DVector::<f64>::zeros(n);
    for u in 0..n {
        let out = d.out_neighbors(u);
        if u == v {
            m[(u, u)] = 1.0;
            rhs[u] = 1.0;
        } else if out.is_empty() {
            m[(u, u)] = 1.0;
        } else {
            // row scaled by |Γ(u)| to keep entries integral-ish
            m[(u, u)] = out.len() as f64;
            for &i in out {
                if i == v {
                    rhs[u] += 1.0 - alpha;
                } else {
                    m[(u, i)] -= 1.0 - alpha;
                }
            }
        }
    }
    let mut phi: Vec<f64> = solve_dense(m, rhs)?.iter().copied().collect();
    phi[v] = 1.0;
    let col = PotentialColumn { target: v, phi };
    let residual = col.residual(d, alpha);
    if residual > RESIDUAL_LIMIT {
        return Err(Error::NumericalFailure {
            residual,
            limit: RESIDUAL_LIMIT,
        });
    }
    Ok(col)
}

pub(crate) fn solve_dense(m: DMatrix<f64>, rhs: DVector<f64>) -> Result<DVector<f64>> {
    if m.nrows() == 0 {
        return Ok(rhs);
    }
    m.lu().solve(&rhs).ok_or(Error::NumericalFailure {
        residual: f64::INFINITY,
        limit: RESIDUAL_LIMIT,
    })
}

/// Potentials on an acyclic graph in `O(n)`: eliminate leaves-up with `v` as
/// the root, then substitute back down. Vertices outside `v`'s component get 0.
pub fn tree_potentials_column(t: &Graph, v: usize, alpha: f64) -> Result<PotentialColumn> {
    check_alpha(alpha)?;
    if v >= t.n() {
        return Err(Error::VertexOutOfRange(v));
    }
    if !t.is_forest() {
        return Err(Error::NotATree);
    }
    let n = t.n();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![v];
    parent[v] = v;
    while let Some(u) = stack.pop() {
        order.push(u);
        for &w in t.neighbors(u) {
            if parent[w] == usize::MAX {
                parent[w] = u;
                stack.push(w);
            }
        }
    }
    // gain[u]: φ_u = gain[u] · φ_parent(u)
    let mut gain = vec![0.0; n];
    let mut child_gain = vec![0.0; n];
    for &u in order.iter().rev() {
        if u == v {
            continue;
        }
        gain[u] = (1.0 - alpha) / (t.degree(u) as f64 - (1.0 - alpha) * child_gain[u]);
        child_gain[parent[u]] += gain[u];
    }
    let mut phi = vec![0.0; n];
    for &u in &order {
        phi[u] = if u == v { 1.0 } else { gain[u] * phi[parent[u]] };
    }
    Ok(PotentialColumn { target: v, phi })
}

/// PageRank of `v` from its potential column.
pub fn pagerank_from_potentials(
    d: &DirectedView,
    v: usize,
    cfg: &GameConfig,
    col: &PotentialColumn,
) -> Result<f64> {
    cfg.check_size(d.n())?;
    let out = d.out_neighbors(v);
    if out.is_empty() {
        return Err(Error::DanglingTarget(v));
    }
    let alpha = cfg.alpha();
    let mass: f64 = cfg.q().iter().zip(&col.phi).map(|(q, p)| q * p).sum();
    let back: f64 = out.iter().map(|&i| col.phi[i]).sum::<f64>() / out.len() as f64;
    Ok(alpha * mass / (1.0 - (1.0 - alpha) * back))
}

/// Stationary distribution of the α-random walk by a direct dense solve of
/// `π = α q + (1-α) Pᵀ π`, where dangling rows of `P` are self-loops.
pub fn stationary_pagerank(d: &DirectedView, cfg: &GameConfig) -> Result<Vec<f64>> {
    let n = d.n();
    cfg.check_size(n)?;
    let alpha = cfg.alpha();
    let mut m = DMatrix::<f64>::identity(n, n);
    for u in 0..n {
        let out = d.out_neighbors(u);
        if out.is_empty() {
            m[(u, u)] -= 1.0 - alpha;
        } else {
            let w = (1.0 - alpha) / out.len() as f64;
            for &i in out {
                m[(i, u)] -= w;
            }
        }
    }
    let rhs = DVector::from_iterator(n, cfg.q().iter().map(|&x| alpha * x));
    let pi = solve_dense(m, rhs)?;
    Ok(pi.iter().copied().collect())
}
