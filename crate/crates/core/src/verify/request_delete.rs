use super::{isolated_pi, BestResponseResult, Strategy, VerifyOptions};
use crate::error::{Error, Result};
use crate::graph::{components_after_removal, Graph};
use crate::pagerank::{tree_potentials_column, GameConfig};
use crate::parametric::{fractional_max_shifted, LinearFractionalProgram};

/// The fixed-outlink-count program of a vertex in an acyclic graph.
#[derive(Debug, Clone, PartialEq)]
pub struct RequestDeleteProgram {
    /// Index `i` of the program is the neighbour `neighbors[i]`.
    pub neighbors: Vec<usize>,
    /// The `l2` non-neighbours of highest potential (sorted by id).
    pub outlinks: Vec<usize>,
    pub program: LinearFractionalProgram,
}

struct Layout {
    neighbors: Vec<usize>,
    /// branch index of every vertex, `usize::MAX` outside `v`'s branches
    branch: Vec<usize>,
    /// `(1-α) φ_u` per vertex
    e: Vec<f64>,
    /// non-neighbours by decreasing potential, ties by id
    ranking: Vec<usize>,
    a0: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

fn layout(t: &Graph, v: usize, cfg: &GameConfig) -> Result<Layout> {
    cfg.check_size(t.n())?;
    if v >= t.n() {
        return Err(Error::VertexOutOfRange(v));
    }
    if !t.is_forest() {
        return Err(Error::NotATree);
    }
    let alpha = cfg.alpha();
    let phi = tree_potentials_column(t, v, alpha)?.phi;
    let e: Vec<f64> = phi.iter().map(|p| (1.0 - alpha) * p).collect();
    let mut branch = vec![usize::MAX; t.n()];
    let mut neighbors = Vec::new();
    let mut a = Vec::new();
    let mut b = Vec::new();
    let decomposition = components_after_removal(t, v)?;
    for comp in decomposition.components.iter().filter(|c| !c.attachments.is_empty()) {
        let i = comp.attachments[0];
        for &u in &comp.vertices {
            branch[u] = neighbors.len();
        }
        neighbors.push(i);
        a.push(alpha * comp.vertices.iter().map(|&u| cfg.q()[u] * phi[u]).sum::<f64>());
        b.push(1.0 - e[i]);
    }
    let mut ranking = t.non_neighbors(v);
    ranking.sort_by(|&x, &y| e[y].total_cmp(&e[x]).then(x.cmp(&y)));
    Ok(Layout {
        neighbors,
        branch,
        e,
        ranking,
        a0: alpha * cfg.q()[v],
        a,
        b,
    })
}

impl Layout {
    fn program(&self, l2: usize) -> Result<RequestDeleteProgram> {
        let mut b = self.b.clone();
        let chosen = &self.ranking[..l2];
        for &u in chosen {
            // an outlink into branch i only helps while the edge to i is kept
            if self.branch[u] != usize::MAX {
                b[self.branch[u]] -= self.e[u];
            }
        }
        let mut outlinks = chosen.to_vec();
        outlinks.sort_unstable();
        Ok(RequestDeleteProgram {
            neighbors: self.neighbors.clone(),
            outlinks,
            program: LinearFractionalProgram::new(self.a0, self.a.clone(), l2 as f64, b)?,
        })
    }
}

/// Program for kept-edge choices when `v` also links to the `l2` best non-neighbours.
pub fn request_delete_coefficients(
    t: &Graph,
    v: usize,
    cfg: &GameConfig,
    l2: usize,
) -> Result<RequestDeleteProgram> {
    let layout = layout(t, v, cfg)?;
    if l2 > layout.ranking.len() {
        return Err(Error::InvalidParameter(format!(
            "{l2} outlinks requested but only {} non-neighbours exist",
            layout.ranking.len()
        )));
    }
    layout.program(l2)
}

/// Request-delete best response on an acyclic graph: one layer walk per outlink count.
pub fn best_response_request_delete_tree(
    t: &Graph,
    v: usize,
    cfg: &GameConfig,
    opts: &VerifyOptions,
) -> Result<BestResponseResult> {
    let layout = layout(t, v, cfg)?;
    let d = layout.neighbors.len();
    if d == 0 {
        return Ok(BestResponseResult::stuck(v, isolated_pi(cfg, v)));
    }
    let mut current = 0.0;
    let mut best: Option<(f64, Strategy)> = None;
    for l2 in 0..=layout.ranking.len() {
        let p = layout.program(l2)?;
        if l2 == 0 {
            let all: Vec<usize> = (0..d).collect();
            current = d as f64 * p.program.ratio(&all);
        }
        let opt = fractional_max_shifted(&p.program, l2);
        if best.as_ref().is_none_or(|(value, _)| opt.value > *value) {
            let mut kept: Vec<usize> = opt.support.iter().map(|&i| p.neighbors[i]).collect();
            kept.sort_unstable();
            let strategy = Strategy {
                vertex: v,
                kept,
                outlinks: p.outlinks,
                added_edge: None,
            };
            best = Some((opt.value, strategy));
        }
    }
    let (value, strategy) = best.expect("at least one outlink count");
    Ok(BestResponseResult::new(v, current, value.max(current), Some(strategy), opts.tolerance))
}
