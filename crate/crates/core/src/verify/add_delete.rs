use nalgebra::{DMatrix, DVector};

use super::deletion::{best_at_weight, deletion_coefficients};
use super::{
    best_response_deletion_general, best_response_deletion_tree, check_k, BestResponseResult,
    Strategy, VerifyOptions,
};
use crate::error::{Error, Result};
use crate::graph::{components_after_removal, Graph, RemovalComponent};
use crate::pagerank::{stationary_pagerank, subset_potentials, DirectedView, GameConfig};
use crate::parametric::SubsetCoefficients;

/// `π_u = zeta + eta · p`, where `p = π_v / |Γ(v)|` is the mass `v` sends along each edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalCoefficients {
    pub zeta: f64,
    pub eta: f64,
}

/// Solves the balance equations on a component `C` that only `v` connects to
/// the rest of the graph, once with no inflow and once with unit inflow.
pub fn local_pagerank_coefficients(
    g: &Graph,
    component: &[usize],
    u: usize,
    v: usize,
    cfg: &GameConfig,
) -> Result<LocalCoefficients> {
    cfg.check_size(g.n())?;
    let mut index = vec![usize::MAX; g.n()];
    for (i, &w) in component.iter().enumerate() {
        index[w] = i;
    }
    if v >= g.n() || index[v] != usize::MAX {
        return Err(Error::InvalidParameter(format!("{v} must lie outside the component")));
    }
    if u >= g.n() || index[u] == usize::MAX {
        return Err(Error::InvalidParameter(format!("{u} is not in the component")));
    }
    let alpha = cfg.alpha();
    let m = component.len();
    let mut mat = DMatrix::<f64>::identity(m, m);
    let mut inflow = DVector::<f64>::zeros(m);
    for (col, &w) in component.iter().enumerate() {
        let d = g.degree(w);
        if d == 0 {
            mat[(col, col)] -= 1.0 - alpha;
            continue;
        }
        for &x in g.neighbors(w) {
            if x == v {
                inflow[col] = 1.0 - alpha;
            } else if index[x] == usize::MAX {
                return Err(Error::InvalidParameter(format!(
                    "{v} does not separate the component (edge {w}-{x})"
                )));
            } else {
                mat[(index[x], col)] -= (1.0 - alpha) / d as f64;
            }
        }
    }
    let base = DVector::from_iterator(m, component.iter().map(|&w| alpha * cfg.q()[w]));
    let lu = mat.lu();
    let failure = || Error::NumericalFailure {
        residual: f64::INFINITY,
        limit: crate::pagerank::RESIDUAL_LIMIT,
    };
    let at_zero = lu.solve(&base).ok_or_else(failure)?;
    let response = lu.solve(&inflow).ok_or_else(failure)?;
    Ok(LocalCoefficients {
        zeta: at_zero[index[u]],
        eta: response[index[u]],
    })
}

/// Add-delete best response: pure deletions first, then every accepted
/// combination of one new edge `uv` with a retained subset of the attachments
/// in `u`'s component and any retained set elsewhere.
pub fn best_response_add_delete(
    g: &Graph,
    v: usize,
    cfg: &GameConfig,
    opts: &VerifyOptions,
) -> Result<BestResponseResult> {
    cfg.check_size(g.n())?;
    if v >= g.n() {
        return Err(Error::VertexOutOfRange(v));
    }
    let deletion = if g.is_forest() {
        best_response_deletion_tree(g, v, cfg, opts)?
    } else {
        check_k(g, opts)?;
        best_response_deletion_general(g, v, cfg, opts)?
    };
    let candidates = g.non_neighbors(v);
    if candidates.is_empty() {
        return Ok(deletion);
    }
    let current = deletion.current_pi;
    let mut best = deletion.best_pi.max(current);
    let mut witness = deletion.improving.clone();

    let alpha = cfg.alpha();
    let pi_g = stationary_pagerank(&DirectedView::from_graph(g), cfg)?;
    let decomposition = components_after_removal(g, v)?;
    let coeffs = deletion_coefficients(g, v, cfg)?;
    // group index of each component (components without attachments have none)
    let mut group_of = Vec::with_capacity(decomposition.components.len());
    let mut next = 0;
    for comp in &decomposition.components {
        group_of.push((!comp.attachments.is_empty()).then(|| {
            next += 1;
            next - 1
        }));
    }

    for u in candidates {
        let j = decomposition.component_of(u).expect("non-neighbour lies in some component");
        let comp = &decomposition.components[j];
        let others = match group_of[j] {
            Some(gi) => coeffs.without_group(gi),
            None => coeffs.clone(),
        };
        let k = comp.attachments.len();
        for mask in 0..1usize << k {
            let retained: Vec<usize> = (0..k)
                .filter(|&s| mask >> s & 1 == 1)
                .map(|s| comp.attachments[s])
                .collect();
            let mut gp = g.clone();
            for &s in &comp.attachments {
                if retained.binary_search(&s).is_err() {
                    gp.remove_edge(v, s);
                }
            }
            gp.add_edge(u, v)?;
            let mut attached = retained.clone();
            attached.push(u);
            attached.sort_unstable();
            let local = RemovalComponent {
                vertices: comp.vertices.clone(),
                attachments: attached.clone(),
            };
            let phi = subset_potentials(&gp, v, &local, &attached, alpha)?;
            let a0 = alpha
                * comp
                    .vertices
                    .iter()
                    .zip(&phi)
                    .map(|(&w, p)| cfg.q()[w] * p)
                    .sum::<f64>();
            let back: f64 = attached
                .iter()
                .map(|s| phi[comp.vertices.binary_search(s).unwrap()])
                .sum();
            let lc = local_pagerank_coefficients(&gp, &comp.vertices, u, v, cfg)?;
            let program = SubsetCoefficients {
                a0: others.a0 + a0,
                b0: attached.len() as f64 - (1.0 - alpha) * back,
                groups: others.groups.clone(),
            };
            for l in 0..=program.capacity() {
                let degree = l + attached.len();
                // π_u in G' exceeds its old value exactly when π_v' clears this bar
                let acceptance = degree as f64 * (pi_g[u] + opts.tolerance - lc.zeta) / lc.eta;
                if !acceptance.is_finite() {
                    continue;
                }
                let floor = best.max(acceptance - opts.tolerance);
                if let Some((pi, masks)) =
                    best_at_weight(&program, l, degree, floor, opts.tolerance)?
                {
                    best = pi;
                    let mut kept = retained.clone();
                    kept.extend(program.kept_vertices(&masks));
                    kept.sort_unstable();
                    witness = Some(Strategy {
                        vertex: v,
                        kept,
                        outlinks: Vec::new(),
                        added_edge: Some(u),
                    });
                }
            }
        }
    }
    Ok(BestResponseResult::new(v, current, best, witness, opts.tolerance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::{complete, path, random_connected};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn local_coefficients_reproduce_stationary() {
        // P4 0-1-2-3 seen from v = 1: component {2, 3}
        let g = path(4);
        let cfg = GameConfig::uniform(0.15, 4).unwrap();
        let lc = local_pagerank_coefficients(&g, &[2, 3], 3, 1, &cfg).unwrap();
        assert!(lc.eta > 0.0);
        let pi = stationary_pagerank(&DirectedView::from_graph(&g), &cfg).unwrap();
        let p = pi[1] / 2.0;
        assert!((lc.zeta + lc.eta * p - pi[3]).abs() < 1e-12);
        assert!(local_pagerank_coefficients(&g, &[2, 3], 0, 1, &cfg).is_err());
        assert!(local_pagerank_coefficients(&g, &[2, 3], 2, 3, &cfg).is_err());
    }

    #[test]
    fn local_coefficients_are_affine() {
        let g = path(4);
        let cfg = GameConfig::new(0.15, vec![0.25, 0.25, 0.3, 0.2]).unwrap();
        let lc = local_pagerank_coefficients(&g, &[2, 3], 2, 1, &cfg).unwrap();
        // rebuild the local system by hand for three inflow values
        for p in [0.0, 0.1, 0.37] {
            // π2 = αq2 + (1-α)(π3 + p),  π3 = αq3 + (1-α)π2/2
            let a = 0.15;
            let pi2 = (a * 0.3 + (1.0 - a) * (a * 0.2 + p)) / (1.0 - (1.0 - a) * (1.0 - a) / 2.0);
            assert!((lc.zeta + lc.eta * p - pi2).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_source_mass_gives_zero_zeta() {
        let g = path(3);
        let cfg = GameConfig::new(0.15, vec![0.5, 0.5, 0.0]).unwrap();
        let lc = local_pagerank_coefficients(&g, &[2], 2, 1, &cfg).unwrap();
        assert_eq!(lc.zeta, 0.0);
        assert!(lc.eta > 0.0);
    }

    #[test]
    fn p3_ends_add_the_missing_edge() {
        let g = path(3);
        let cfg = GameConfig::uniform(1e-3, 3).unwrap();
        let r = best_response_add_delete(&g, 0, &cfg, &VerifyOptions::default()).unwrap();
        assert!(!r.in_best_response);
        assert_eq!(r.improving.as_ref().unwrap().added_edge, Some(2));
    }

    #[test]
    fn complete_graphs_are_stable() {
        let g = complete(5);
        let cfg = GameConfig::uniform(0.15, 5).unwrap();
        assert!(best_response_add_delete(&g, 0, &cfg, &VerifyOptions::default()).unwrap().in_best_response);
    }

    #[test]
    fn witnesses_replay_and_help_the_partner() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let opts = VerifyOptions::default();
        for _ in 0..15 {
            let g = random_connected(6, 0.3, &mut rng);
            let cfg = GameConfig::uniform(0.05, g.n()).unwrap();
            let before = stationary_pagerank(&DirectedView::from_graph(&g), &cfg).unwrap();
            for v in 0..g.n() {
                let r = best_response_add_delete(&g, v, &cfg, &opts).unwrap();
                if let Some(s) = &r.improving {
                    let after = stationary_pagerank(&s.apply(&g), &cfg).unwrap();
                    assert!((after[v] - r.best_pi).abs() < 1e-9);
                    if let Some(u) = s.added_edge {
                        assert!(after[u] > before[u] + opts.tolerance);
                    }
                }
            }
        }
    }
}
