use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use super::{best_response, Model, Strategy, VerifyOptions};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pagerank::GameConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsStep {
    pub mover: usize,
    pub strategy: Strategy,
    pub pi_before: f64,
    pub pi_after: f64,
    /// Hash of the graph after the move.
    pub graph_hash: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynamicsOutcome {
    Equilibrium,
    StepLimit,
    /// The graph after the last step already appeared after step `first_seen`
    /// (0 is the starting graph).
    Cycle { first_seen: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsTrace {
    pub initial_hash: u64,
    pub steps: Vec<DynamicsStep>,
    pub outcome: DynamicsOutcome,
    pub final_graph: Graph,
}

/// Stable hash of the edge set.
pub fn graph_hash(g: &Graph) -> u64 {
    let mut h = DefaultHasher::new();
    g.n().hash(&mut h);
    g.canonical_edges().hash(&mut h);
    h.finish()
}

/// Lets the lowest-numbered vertex that can improve play its best response,
/// until nobody can, `max_steps` moves were made, or a graph repeats.
///
/// The graph has to stay undirected, so only the deletion and add-delete
/// games are supported.
pub fn best_response_dynamics(
    g0: &Graph,
    model: Model,
    cfg: &GameConfig,
    opts: &VerifyOptions,
    max_steps: usize,
) -> Result<DynamicsTrace> {
    if model == Model::RequestDelete {
        return Err(Error::UnsupportedScope(
            "dynamics need undirected moves (deletion or add-delete)".into(),
        ));
    }
    if max_steps == 0 {
        return Err(Error::InvalidParameter("max_steps must be at least 1".into()));
    }
    let mut g = g0.clone();
    let mut seen = HashMap::from([(g.canonical_edges(), 0usize)]);
    let mut steps = Vec::new();
    loop {
        let mut mover = None;
        for v in 0..g.n() {
            let r = best_response(&g, v, model, cfg, opts)?;
            if let Some(s) = r.improving {
                mover = Some((s, r.current_pi, r.best_pi));
                break;
            }
        }
        let Some((strategy, pi_before, pi_after)) = mover else {
            return Ok(trace(g0, steps, DynamicsOutcome::Equilibrium, g));
        };
        g = strategy.apply_undirected(&g)?;
        steps.push(DynamicsStep {
            mover: strategy.vertex,
            strategy,
            pi_before,
            pi_after,
            graph_hash: graph_hash(&g),
        });
        if let Some(&first_seen) = seen.get(&g.canonical_edges()) {
            return Ok(trace(g0, steps, DynamicsOutcome::Cycle { first_seen }, g));
        }
        seen.insert(g.canonical_edges(), steps.len());
        if steps.len() >= max_steps {
            return Ok(trace(g0, steps, DynamicsOutcome::StepLimit, g));
        }
    }
}

fn trace(g0: &Graph, steps: Vec<DynamicsStep>, outcome: DynamicsOutcome, g: Graph) -> DynamicsTrace {
    DynamicsTrace {
        initial_hash: graph_hash(g0),
        steps,
        outcome,
        final_graph: g,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::{complete, path};

    #[test]
    fn complete_start_is_terminal() {
        let g = complete(4);
        let cfg = GameConfig::uniform(0.15, 4).unwrap();
        let t = best_response_dynamics(&g, Model::AddDelete, &cfg, &VerifyOptions::default(), 10).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.outcome, DynamicsOutcome::Equilibrium);
    }

    #[test]
    fn path_closes_into_a_triangle() {
        let g = path(3);
        let cfg = GameConfig::uniform(1e-3, 3).unwrap();
        let t = best_response_dynamics(&g, Model::AddDelete, &cfg, &VerifyOptions::default(), 10).unwrap();
        assert_eq!(t.outcome, DynamicsOutcome::Equilibrium);
        assert!(t.final_graph.is_complete());
        assert!(t.steps.iter().all(|s| s.pi_after > s.pi_before + 1e-9));
    }

    #[test]
    fn request_delete_is_rejected() {
        let g = path(3);
        let cfg = GameConfig::uniform(0.15, 3).unwrap();
        assert!(best_response_dynamics(&g, Model::RequestDelete, &cfg, &VerifyOptions::default(), 5).is_err());
    }
}
