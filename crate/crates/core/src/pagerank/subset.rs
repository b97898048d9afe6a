//! Potentials towards a cut vertex `v` over one component `C` of `G - v`, when
//! `v` keeps only the edges to a subset `S` of the attachment set `U = C ∩ Γ(v)`.
//!
//! Walks from `C` cannot leave `C ∪ {v}` without first hitting `v`, so only
//! `C` and `S` matter.

use nalgebra::{DMatrix, DVector, LU, Dyn};

use super::{check_alpha, solve_dense};
use crate::error::{Error, Result};
use crate::graph::{Graph, RemovalComponent};

fn local_index(g: &Graph, comp: &RemovalComponent) -> Vec<usize> {
    let mut index = vec![usize::MAX; g.n()];
    for (i, &u) in comp.vertices.iter().enumerate() {
        index[u] = i;
    }
    index
}

/// Direct dense solve of `φ^S` over `comp.vertices` (same order).
pub fn subset_potentials(
    g: &Graph,
    v: usize,
    comp: &RemovalComponent,
    subset: &[usize],
    alpha: f64,
) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if subset.iter().any(|s| comp.attachments.binary_search(s).is_err()) {
        return Err(Error::InvalidSubset);
    }
    let index = local_index(g, comp);
    let m = comp.vertices.len();
    let mut mat = DMatrix::<f64>::zeros(m, m);
    let mut rhs = DVector::<f64>::zeros(m);
    for (row, &u) in comp.vertices.iter().enumerate() {
        let keeps_v = subset.contains(&u);
        let inner: Vec<usize> = g
            .neighbors(u)
            .iter()
            .filter(|&&w| w != v)
            .map(|&w| index[w])
            .collect();
        let degree = inner.len() + usize::from(keeps_v);
        if degree == 0 {
            mat[(row, row)] = 1.0;
            continue;
        }
        mat[(row, row)] = degree as f64;
        for col in inner {
            mat[(row, col)] -= 1.0 - alpha;
        }
        if keeps_v {
            rhs[row] = 1.0 - alpha;
        }
    }
    Ok(solve_dense(mat, rhs)?.iter().copied().collect())
}

/// All `2^|U|` subset potentials of one component from a single factorisation.
///
/// Dropping the edge `v–s` lowers the scaled diagonal entry of row `s` by one
/// (unless `s` becomes dangling, where the row is `φ_s = 0` either way) and
/// clears its right-hand side. Each subset is therefore a rank-`|U \ S|`
/// correction of the full system, applied with the Woodbury identity.
pub struct SubsetPotentialSolver {
    attachments: Vec<usize>,
    /// local row of each attachment vertex
    rows: Vec<usize>,
    /// whether the attachment keeps an edge inside `C` (diagonal shifts on removal)
    shifts: Vec<bool>,
    /// `M⁻¹ e_s` for each attachment `s`
    basis: Vec<DVector<f64>>,
    alpha: f64,
    len: usize,
}

impl SubsetPotentialSolver {
    pub fn new(g: &Graph, v: usize, comp: &RemovalComponent, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let index = local_index(g, comp);
        let m = comp.vertices.len();
        let mut mat = DMatrix::<f64>::zeros(m, m);
        for (row, &u) in comp.vertices.iter().enumerate() {
            let mut degree = 0usize;
            for &w in g.neighbors(u) {
                degree += 1;
                if w != v {
                    mat[(row, index[w])] -= 1.0 - alpha;
                }
            }
            mat[(row, row)] = degree.max(1) as f64;
        }
        let lu: LU<f64, Dyn, Dyn> = mat.lu();
        let rows: Vec<usize> = comp.attachments.iter().map(|&s| index[s]).collect();
        let shifts = comp.attachments.iter().map(|&s| g.degree(s) >= 2).collect();
        let basis = rows
            .iter()
            .map(|&r| {
                let mut e = DVector::<f64>::zeros(m);
                e[r] = 1.0;
                lu.solve(&e).ok_or(Error::NumericalFailure {
                    residual: f64::INFINITY,
                    limit: super::RESIDUAL_LIMIT,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            attachments: comp.attachments.clone(),
            rows,
            shifts,
            basis,
            alpha,
            len: m,
        })
    }

    pub fn attachments(&self) -> &[usize] {
        &self.attachments
    }

    /// `φ^S` over the component, with `S` given as a bitmask over `attachments`.
    pub fn solve(&self, mask: usize) -> Result<Vec<f64>> {
        let k = self.attachments.len();
        debug_assert!(mask < 1 << k);
        let mut y = DVector::<f64>::zeros(self.len);
        for s in (0..k).filter(|&s| mask >> s & 1 == 1) {
            y.axpy(1.0 - self.alpha, &self.basis[s], 1.0);
        }
        let dropped: Vec<usize> = (0..k)
            .filter(|&s| mask >> s & 1 == 0 && self.shifts[s])
            .collect();
        if !dropped.is_empty() {
            let r = dropped.len();
            let mut cap = DMatrix::<f64>::identity(r, r);
            let mut proj = DVector::<f64>::zeros(r);
            for (a, &s) in dropped.iter().enumerate() {
                proj[a] = y[self.rows[s]];
                for (b, &t) in dropped.iter().enumerate() {
                    cap[(a, b)] -= self.basis[t][self.rows[s]];
                }
            }
            let w = solve_dense(cap, proj)?;
            for (b, &t) in dropped.iter().enumerate() {
                y.axpy(w[b], &self.basis[t], 1.0);
            }
        }
        Ok(y.iter().copied().collect())
    }
}
