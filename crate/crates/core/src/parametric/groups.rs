//! Grouped fractional programs for general graphs.
//!
//! Around a vertex `v`, every component `C_i` of `G - v` contributes a
//! multilinear polynomial in the retained-edge indicators of its attachment
//! set `U_i`:
//!
//! ```text
//! π_v(x) = (1ᵀx) · (A0 + Σ_i Σ_S a_S Π_{s∈S} x_s) / (B0 + Σ_i Σ_S b_S Π_{s∈S} x_s)
//! ```
//!
//! For a threshold `δ`, `h(δ) = A0 - δ B0 + max Σ_i e_{i,t_i}` over splits
//! `Σ t_i = l`, where `e_{i,t}` is the best subset of size `t` in group `i`.

use crate::error::{Error, Result};
use crate::graph::RemovalDecomposition;
use crate::pagerank::GameConfig;

/// Multilinear coefficients of one component, indexed by bitmask over
/// `attachments` (entry 0 is the empty set and always zero).
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentCoefficients {
    pub attachments: Vec<usize>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl ComponentCoefficients {
    pub fn size(&self) -> usize {
        self.attachments.len()
    }

    /// Sums of `a_T` and `b_T` over all `T ⊆ mask`.
    pub fn parts(&self, mask: usize) -> (f64, f64) {
        let mut num = 0.0;
        let mut den = 0.0;
        // iterate all submasks of `mask`
        let mut sub = mask;
        loop {
            num += self.a[sub];
            den += self.b[sub];
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
        (num, den)
    }

    pub fn vertices_of(&self, mask: usize) -> Vec<usize> {
        (0..self.size())
            .filter(|&s| mask >> s & 1 == 1)
            .map(|s| self.attachments[s])
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsetCoefficients {
    pub a0: f64,
    pub b0: f64,
    pub groups: Vec<ComponentCoefficients>,
}

impl SubsetCoefficients {
    pub fn capacity(&self) -> usize {
        self.groups.iter().map(ComponentCoefficients::size).sum()
    }

    /// Numerator and denominator for a choice of mask per group.
    pub fn parts(&self, masks: &[usize]) -> (f64, f64) {
        self.groups
            .iter()
            .zip(masks)
            .fold((self.a0, self.b0), |(num, den), (g, &m)| {
                let (a, b) = g.parts(m);
                (num + a, den + b)
            })
    }

    /// All attachments retained.
    pub fn full_masks(&self) -> Vec<usize> {
        self.groups.iter().map(|g| (1 << g.size()) - 1).collect()
    }

    pub fn kept_vertices(&self, masks: &[usize]) -> Vec<usize> {
        let mut kept: Vec<usize> = self
            .groups
            .iter()
            .zip(masks)
            .flat_map(|(g, &m)| g.vertices_of(m))
            .collect();
        kept.sort_unstable();
        kept
    }

    /// Copy without group `j` (its contribution is folded into the constants by the caller).
    pub fn without_group(&self, j: usize) -> Self {
        let mut out = self.clone();
        out.groups.remove(j);
        out
    }
}

fn mobius(values: &mut [f64], bits: usize) {
    for bit in 0..bits {
        for mask in 0..values.len() {
            if mask >> bit & 1 == 1 {
                values[mask] -= values[mask ^ (1 << bit)];
            }
        }
    }
}

fn zeta(values: &mut [f64], bits: usize) {
    for bit in 0..bits {
        for mask in 0..values.len() {
            if mask >> bit & 1 == 1 {
                values[mask] += values[mask ^ (1 << bit)];
            }
        }
    }
}

/// Inclusion-exclusion coefficients from subset potentials.
///
/// `potentials[i][mask]` holds `φ^S` over `decomposition.components[i].vertices`
/// for the subset `S` encoded by `mask` over that component's attachments.
/// Components without attachments contribute nothing and are skipped.
///
/// Numerator: `a_S = α Σ_{u∈C_i} q_u Σ_{T⊆S} (-1)^{|S|-|T|} φ^T_u`.
/// Denominator: the multilinear expansion of `|x| - (1-α) Σ_s x_s φ_s(x)`,
/// where only subsets `T` that retain `s` contribute to the `s` term.
pub fn subset_coefficients(
    decomposition: &RemovalDecomposition,
    cfg: &GameConfig,
    potentials: &[Vec<Vec<f64>>],
) -> Result<SubsetCoefficients> {
    let alpha = cfg.alpha();
    let v = decomposition.center;
    let mut groups = Vec::new();
    for (comp, table) in decomposition.components.iter().zip(potentials) {
        let k = comp.attachments.len();
        if k == 0 {
            continue;
        }
        if table.len() != 1 << k {
            return Err(Error::InvalidParameter(format!(
                "expected {} subset potentials, found {}",
                1 << k,
                table.len()
            )));
        }
        let rows: Vec<usize> = comp
            .attachments
            .iter()
            .map(|s| comp.vertices.binary_search(s).unwrap())
            .collect();
        let mut a = vec![0.0; 1 << k];
        let mut f = vec![0.0; 1 << k];
        for (mask, phi) in table.iter().enumerate() {
            a[mask] = alpha
                * comp
                    .vertices
                    .iter()
                    .zip(phi)
                    .map(|(&u, p)| cfg.q()[u] * p)
                    .sum::<f64>();
            f[mask] = (0..k)
                .filter(|&s| mask >> s & 1 == 1)
                .map(|s| phi[rows[s]])
                .sum();
        }
        mobius(&mut a, k);
        mobius(&mut f, k);
        let b = f
            .iter()
            .enumerate()
            .map(|(mask, &x)| {
                let single = if mask.count_ones() == 1 { 1.0 } else { 0.0 };
                single - (1.0 - alpha) * x
            })
            .collect();
        groups.push(ComponentCoefficients {
            attachments: comp.attachments.clone(),
            a,
            b,
        });
    }
    Ok(SubsetCoefficients {
        a0: alpha * cfg.q()[v],
        b0: 0.0,
        groups,
    })
}

/// `e[i][t]`: best `Σ_{T⊆S} c_T` over `S ⊆ U_i`, `|S| = t`, with `c_T = a_T - δ b_T`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupValueTable {
    pub e: Vec<Vec<f64>>,
    /// Witness mask for each entry (smallest mask among ties).
    pub witness: Vec<Vec<usize>>,
}

pub fn group_value_table(coeffs: &SubsetCoefficients, delta: f64) -> GroupValueTable {
    let mut e = Vec::with_capacity(coeffs.groups.len());
    let mut witness = Vec::with_capacity(coeffs.groups.len());
    for g in &coeffs.groups {
        let k = g.size();
        let mut c: Vec<f64> = g.a.iter().zip(&g.b).map(|(a, b)| a - delta * b).collect();
        c[0] = 0.0;
        zeta(&mut c, k);
        let mut best = vec![f64::NEG_INFINITY; k + 1];
        let mut arg = vec![0usize; k + 1];
        for (mask, &val) in c.iter().enumerate() {
            let t = mask.count_ones() as usize;
            if val > best[t] {
                best[t] = val;
                arg[t] = mask;
            }
        }
        best[0] = 0.0;
        e.push(best);
        witness.push(arg);
    }
    GroupValueTable { e, witness }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackSolution {
    pub value: f64,
    /// Number of items taken from each group.
    pub counts: Vec<usize>,
    /// Witness subset (bitmask) per group.
    pub masks: Vec<usize>,
}

/// Maximises `Σ_i e[i][t_i]` subject to `Σ_i t_i = l`, one size per group.
pub fn knapsack_argmax(table: &GroupValueTable, l: usize) -> Result<KnapsackSolution> {
    let capacity: usize = table.e.iter().map(|row| row.len() - 1).sum();
    if l > capacity {
        return Err(Error::InfeasibleCardinality { l, capacity });
    }
    let groups = table.e.len();
    // w[i][t]: best value using the first i groups with total size t
    let mut w = vec![vec![f64::NEG_INFINITY; l + 1]; groups + 1];
    let mut choice = vec![vec![0usize; l + 1]; groups + 1];
    w[0][0] = 0.0;
    for i in 1..=groups {
        let row = &table.e[i - 1];
        for t in 0..=l {
            for s in 0..row.len().min(t + 1) {
                let prev = w[i - 1][t - s];
                if prev == f64::NEG_INFINITY {
                    continue;
                }
                let cand = prev + row[s];
                if cand > w[i][t] {
                    w[i][t] = cand;
                    choice[i][t] = s;
                }
            }
        }
    }
    let mut counts = vec![0usize; groups];
    let mut t = l;
    for i in (1..=groups).rev() {
        counts[i - 1] = choice[i][t];
        t -= choice[i][t];
    }
    let masks = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| table.witness[i][c])
        .collect();
    Ok(KnapsackSolution {
        value: w[groups][l],
        counts,
        masks,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImprovementTest {
    /// `h(δ)`; positive iff some weight-`l` choice has ratio above `δ`.
    pub h: f64,
    pub improves: bool,
    /// Per-group masks of the maximiser.
    pub masks: Vec<usize>,
}

/// Decides whether some weight-`l` choice has `f(x) > delta`.
pub fn improvement_test(coeffs: &SubsetCoefficients, l: usize, delta: f64) -> Result<ImprovementTest> {
    let table = group_value_table(coeffs, delta);
    let sol = knapsack_argmax(&table, l)?;
    let h = coeffs.a0 - delta * coeffs.b0 + sol.value;
    Ok(ImprovementTest {
        h,
        improves: h > 0.0,
        masks: sol.masks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_coeffs(rng: &mut ChaCha8Rng, sizes: &[usize]) -> SubsetCoefficients {
        let groups = sizes
            .iter()
            .enumerate()
            .map(|(gi, &k)| {
                let mut a: Vec<f64> = (0..1 << k).map(|_| rng.gen_range(-0.2..1.0)).collect();
                let mut b: Vec<f64> = (0..1 << k).map(|_| rng.gen_range(-0.3..1.0)).collect();
                a[0] = 0.0;
                b[0] = 0.0;
                ComponentCoefficients {
                    attachments: (0..k).map(|s| 10 * gi + s).collect(),
                    a,
                    b,
                }
            })
            .collect();
        SubsetCoefficients {
            a0: rng.gen_range(0.0..0.5),
            b0: rng.gen_range(0.0..0.5),
            groups,
        }
    }

    /// Independent enumerator: every mask per group, constraint on total size.
    fn brute_h(coeffs: &SubsetCoefficients, l: usize, delta: f64) -> f64 {
        fn rec(c: &SubsetCoefficients, i: usize, left: usize, delta: f64) -> f64 {
            if i == c.groups.len() {
                return if left == 0 { 0.0 } else { f64::NEG_INFINITY };
            }
            let g = &c.groups[i];
            let mut best = f64::NEG_INFINITY;
            for mask in 0usize..1 << g.size() {
                let t = mask.count_ones() as usize;
                if t > left {
                    continue;
                }
                let mut val = 0.0;
                for sub in 1usize..1 << g.size() {
                    if sub & mask == sub {
                        val += g.a[sub] - delta * g.b[sub];
                    }
                }
                best = best.max(val + rec(c, i + 1, left - t, delta));
            }
            best
        }
        coeffs.a0 - delta * coeffs.b0 + rec(coeffs, 0, l, delta)
    }

    #[test]
    fn table_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = random_coeffs(&mut rng, &[1, 3]);
        let t = group_value_table(&c, 0.7);
        assert_eq!(t.e[0][0], 0.0);
        assert_eq!(t.e[1][0], 0.0);
        let g = &c.groups[0];
        assert!((t.e[0][1] - (g.a[1] - 0.7 * g.b[1])).abs() < 1e-15);
    }

    #[test]
    fn table_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let c = random_coeffs(&mut rng, &[3]);
            let delta = rng.gen_range(0.0..2.0);
            let t = group_value_table(&c, delta);
            let g = &c.groups[0];
            for size in 0..=3usize {
                let mut best = f64::NEG_INFINITY;
                for mask in 0usize..8 {
                    if mask.count_ones() as usize != size {
                        continue;
                    }
                    let (a, b) = g.parts(mask);
                    best = best.max(a - delta * b);
                }
                assert!((t.e[0][size] - best).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn two_group_example() {
        let table = GroupValueTable {
            e: vec![vec![0.0, 5.0], vec![0.0, 4.0, 7.0]],
            witness: vec![vec![0, 1], vec![0, 1, 3]],
        };
        let sol = knapsack_argmax(&table, 2).unwrap();
        assert_eq!(sol.value, 9.0);
        assert_eq!(sol.counts, vec![1, 1]);
        assert_eq!(sol.masks, vec![1, 1]);
    }

    #[test]
    fn single_group_picks_its_entry() {
        let table = GroupValueTable {
            e: vec![vec![0.0, -1.0, 2.5, -0.5]],
            witness: vec![vec![0, 4, 5, 7]],
        };
        for l in 0..=3 {
            let sol = knapsack_argmax(&table, l).unwrap();
            assert_eq!(sol.value, table.e[0][l]);
        }
        assert_eq!(
            knapsack_argmax(&table, 4).unwrap_err(),
            Error::InfeasibleCardinality { l: 4, capacity: 3 }
        );
    }

    #[test]
    fn knapsack_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let d = rng.gen_range(1..=6);
            let sizes: Vec<usize> = (0..d).map(|_| rng.gen_range(1..=4)).collect();
            if sizes.iter().sum::<usize>() > 16 {
                continue;
            }
            let c = random_coeffs(&mut rng, &sizes);
            let delta = rng.gen_range(0.0..1.5);
            for l in 0..=c.capacity() {
                let test = improvement_test(&c, l, delta).unwrap();
                let expect = brute_h(&c, l, delta);
                assert!((test.h - expect).abs() < 1e-10, "{} vs {}", test.h, expect);
                // the witness realises h
                let (num, den) = c.parts(&test.masks);
                assert!((num - delta * den - test.h).abs() < 1e-10);
                let weight: u32 = test.masks.iter().map(|m| m.count_ones()).sum();
                assert_eq!(weight as usize, l);
            }
        }
    }

    #[test]
    fn zero_threshold_improves_with_positive_coefficient() {
        let c = SubsetCoefficients {
            a0: 0.0,
            b0: 0.0,
            groups: vec![ComponentCoefficients {
                attachments: vec![4],
                a: vec![0.0, 0.3],
                b: vec![0.0, 0.9],
            }],
        };
        assert!(improvement_test(&c, 1, 0.0).unwrap().improves);
    }
}
