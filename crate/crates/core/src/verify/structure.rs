use super::{verify_nash, Model, VerifyOptions};
use crate::error::{Error, Result};
use crate::graph::{check_swap_automorphism, Graph};
use crate::pagerank::{stationary_pagerank, DirectedView, GameConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaCheck {
    /// Whether the graph is complete.
    pub structural: bool,
    /// Add-delete verdict at each grid point, uniform jumps.
    pub empirical: Vec<(f64, bool)>,
}

/// Compares completeness with the add-delete verdict across a grid of jump probabilities.
pub fn alpha_insensitive_check(g: &Graph, alpha_grid: &[f64], opts: &VerifyOptions) -> Result<AlphaCheck> {
    let empirical = alpha_grid
        .iter()
        .map(|&alpha| {
            let cfg = GameConfig::uniform(alpha, g.n())?;
            Ok((alpha, verify_nash(g, Model::AddDelete, &cfg, opts)?.verdict))
        })
        .collect::<Result<_>>()?;
    Ok(AlphaCheck {
        structural: g.is_complete(),
        empirical,
    })
}

/// PageRank change of both endpoints when the non-adjacent pair `u, v`,
/// exchanged by the automorphism `sigma`, adds the edge between them.
pub fn symmetric_addition_gain(
    g: &Graph,
    u: usize,
    v: usize,
    sigma: &[usize],
    cfg: &GameConfig,
) -> Result<(f64, f64)> {
    cfg.check_size(g.n())?;
    if !cfg.is_uniform() {
        return Err(Error::InvalidParameter("jump distribution must be uniform".into()));
    }
    if !check_swap_automorphism(g, sigma, u, v)? {
        return Err(Error::NotAnAutomorphism);
    }
    if g.has_edge(u, v) {
        return Err(Error::InvalidParameter(format!("{u} and {v} are already adjacent")));
    }
    let mut d = DirectedView::from_graph(g);
    let before = stationary_pagerank(&d, cfg)?;
    d.add_edge(u, v);
    let after = stationary_pagerank(&d, cfg)?;
    Ok((after[u] - before[u], after[v] - before[v]))
}
