//! Ground truth by exhaustion: every legal strategy is played out and scored
//! with the stationary solver. Slow on purpose, and deliberately simple.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pagerank::{stationary_pagerank, DirectedView, GameConfig};
use crate::verify::{BestResponseResult, Model, NashReport, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_n: usize,
    pub max_degree: usize,
    pub max_total_strategies: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self {
            max_n: 10,
            max_degree: 16,
            max_total_strategies: 1 << 20,
        }
    }
}

/// Stationary PageRank of the whole graph after `s` is played.
pub fn evaluate_strategy(g: &Graph, s: &Strategy, cfg: &GameConfig) -> Result<Vec<f64>> {
    stationary_pagerank(&s.apply(g), cfg)
}

fn subsets(items: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..1usize << items.len()).map(move |mask| {
        (0..items.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| items[i])
            .collect()
    })
}

fn strategy_count(g: &Graph, v: usize, model: Model) -> u64 {
    let d = g.degree(v) as u32;
    let others = g.non_neighbors(v).len() as u32;
    let nonempty = (1u64 << d) - 1;
    match model {
        Model::Deletion => nonempty,
        Model::RequestDelete => nonempty.saturating_mul(1u64.checked_shl(others).unwrap_or(u64::MAX)),
        Model::AddDelete => nonempty + (1u64 << d) * others as u64,
    }
}

/// Every legal strategy of `v` in `model`, in a fixed order.
fn strategies(g: &Graph, v: usize, model: Model) -> Vec<Strategy> {
    let neighbors = g.neighbors(v);
    let others = g.non_neighbors(v);
    let mut out = Vec::new();
    for kept in subsets(neighbors) {
        match model {
            Model::Deletion => {
                if !kept.is_empty() {
                    out.push(Strategy::deletion(v, kept));
                }
            }
            Model::RequestDelete => {
                if kept.is_empty() {
                    continue;
                }
                for outlinks in subsets(&others) {
                    out.push(Strategy {
                        vertex: v,
                        kept: kept.clone(),
                        outlinks,
                        added_edge: None,
                    });
                }
            }
            Model::AddDelete => {
                if !kept.is_empty() {
                    out.push(Strategy::deletion(v, kept.clone()));
                }
                for &u in &others {
                    out.push(Strategy {
                        vertex: v,
                        kept: kept.clone(),
                        outlinks: Vec::new(),
                        added_edge: Some(u),
                    });
                }
            }
        }
    }
    out
}

fn check_budget(g: &Graph, v: usize, model: Model, budget: &EnumerationBudget) -> Result<()> {
    if g.n() > budget.max_n {
        return Err(Error::BudgetExceeded(format!("{} vertices > {}", g.n(), budget.max_n)));
    }
    if g.degree(v) > budget.max_degree {
        return Err(Error::BudgetExceeded(format!(
            "degree {} > {}",
            g.degree(v),
            budget.max_degree
        )));
    }
    let count = strategy_count(g, v, model);
    if count > budget.max_total_strategies {
        return Err(Error::BudgetExceeded(format!(
            "{count} strategies > {}",
            budget.max_total_strategies
        )));
    }
    Ok(())
}

/// Best response of `v` by trying every strategy. In the add-delete game an
/// added edge only counts when its other endpoint gains more than `tolerance`.
pub fn brute_force_best_response(
    g: &Graph,
    v: usize,
    model: Model,
    cfg: &GameConfig,
    budget: &EnumerationBudget,
    tolerance: f64,
) -> Result<BestResponseResult> {
    cfg.check_size(g.n())?;
    if v >= g.n() {
        return Err(Error::VertexOutOfRange(v));
    }
    check_budget(g, v, model, budget)?;
    let base = stationary_pagerank(&DirectedView::from_graph(g), cfg)?;
    let current = base[v];
    let mut best = current;
    let mut witness = None;
    for s in strategies(g, v, model) {
        let pi = evaluate_strategy(g, &s, cfg)?;
        if let Some(u) = s.added_edge {
            if pi[u] <= base[u] + tolerance {
                continue;
            }
        }
        if pi[v] > best {
            best = pi[v];
            witness = Some(s);
        }
    }
    Ok(BestResponseResult::new(v, current, best, witness, tolerance))
}

/// Brute-force verdict for every vertex.
pub fn brute_force_verify(
    g: &Graph,
    model: Model,
    cfg: &GameConfig,
    budget: &EnumerationBudget,
    tolerance: f64,
) -> Result<NashReport> {
    let started = Instant::now();
    let results = (0..g.n())
        .map(|v| brute_force_best_response(g, v, model, cfg, budget, tolerance))
        .collect::<Result<Vec<_>>>()?;
    Ok(NashReport::assemble(model, cfg, results, started))
}
