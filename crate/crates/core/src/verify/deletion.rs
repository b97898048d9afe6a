use super::{check_k, isolated_pi, BestResponseResult, Strategy, VerifyOptions};
use crate::error::{Error, Result};
use crate::graph::{components_after_removal, Graph};
use crate::pagerank::{tree_potentials_column, GameConfig, SubsetPotentialSolver};
use crate::parametric::{
    fractional_max, improvement_test, subset_coefficients, LinearFractionalProgram,
    SubsetCoefficients,
};

/// Deletion best response on an acyclic graph.
///
/// Dropping the edge to a neighbour `i` zeroes the potentials of the whole
/// branch `N_i` hanging off `i`, so `π_v` is separable in the kept set.
pub fn best_response_deletion_tree(
    t: &Graph,
    v: usize,
    cfg: &GameConfig,
    opts: &VerifyOptions,
) -> Result<BestResponseResult> {
    cfg.check_size(t.n())?;
    if v >= t.n() {
        return Err(Error::VertexOutOfRange(v));
    }
    if !t.is_forest() {
        return Err(Error::NotATree);
    }
    if t.degree(v) == 0 {
        return Ok(BestResponseResult::stuck(v, isolated_pi(cfg, v)));
    }
    let alpha = cfg.alpha();
    let phi = tree_potentials_column(t, v, alpha)?.phi;
    let decomposition = components_after_removal(t, v)?;
    let mut neighbors = Vec::new();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for comp in decomposition.components.iter().filter(|c| !c.attachments.is_empty()) {
        let i = comp.attachments[0];
        neighbors.push(i);
        a.push(alpha * comp.vertices.iter().map(|&u| cfg.q()[u] * phi[u]).sum::<f64>());
        b.push(1.0 - (1.0 - alpha) * phi[i]);
    }
    let d = neighbors.len();
    let program = LinearFractionalProgram::new(alpha * cfg.q()[v], a, 0.0, b)?;
    let all: Vec<usize> = (0..d).collect();
    let current = d as f64 * program.ratio(&all);
    let best = fractional_max(&program);
    let kept = best.support.iter().map(|&i| neighbors[i]).collect();
    Ok(BestResponseResult::new(
        v,
        current,
        best.value.max(current),
        Some(Strategy::deletion(v, kept)),
        opts.tolerance,
    ))
}

/// Inclusion-exclusion coefficients of `π_v` over the retained-edge indicators,
/// one group per component of `G - v` that touches `v`.
pub fn deletion_coefficients(g: &Graph, v: usize, cfg: &GameConfig) -> Result<SubsetCoefficients> {
    cfg.check_size(g.n())?;
    let decomposition = components_after_removal(g, v)?;
    let potentials = decomposition
        .components
        .iter()
        .map(|comp| {
            if comp.attachments.is_empty() {
                return Ok(Vec::new());
            }
            let solver = SubsetPotentialSolver::new(g, v, comp, cfg.alpha())?;
            (0..1usize << comp.attachments.len())
                .map(|mask| solver.solve(mask))
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    subset_coefficients(&decomposition, cfg, &potentials)
}

/// Largest `π_v` over weight-`l` choices that beats `floor` by more than the
/// tolerance, found by raising the threshold until the test fails.
pub(crate) fn best_at_weight(
    coeffs: &SubsetCoefficients,
    l: usize,
    scale: usize,
    floor: f64,
    tolerance: f64,
) -> Result<Option<(f64, Vec<usize>)>> {
    let mut found = None;
    let mut threshold = floor + tolerance;
    loop {
        let test = improvement_test(coeffs, l, threshold / scale as f64)?;
        if !test.improves {
            return Ok(found);
        }
        let (num, den) = coeffs.parts(&test.masks);
        let pi = scale as f64 * num / den;
        if pi <= threshold {
            return Ok(found);
        }
        threshold = pi + tolerance;
        found = Some((pi, test.masks));
    }
}

/// Deletion best response on a general graph, exponential only in the largest
/// attachment set.
pub fn best_response_deletion_general(
    g: &Graph,
    v: usize,
    cfg: &GameConfig,
    opts: &VerifyOptions,
) -> Result<BestResponseResult> {
    if v >= g.n() {
        return Err(Error::VertexOutOfRange(v));
    }
    check_k(g, opts)?;
    let d = g.degree(v);
    if d == 0 {
        cfg.check_size(g.n())?;
        return Ok(BestResponseResult::stuck(v, isolated_pi(cfg, v)));
    }
    let coeffs = deletion_coefficients(g, v, cfg)?;
    let (num, den) = coeffs.parts(&coeffs.full_masks());
    let current = d as f64 * num / den;
    let mut best = current;
    let mut witness = None;
    for l in 1..=d {
        if let Some((pi, masks)) = best_at_weight(&coeffs, l, l, best, opts.tolerance)? {
            best = pi;
            witness = Some(Strategy::deletion(v, coeffs.kept_vertices(&masks)));
        }
    }
    Ok(BestResponseResult::new(v, current, best, witness, opts.tolerance))
}
