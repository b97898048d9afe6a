//! Level walks in the arrangement of lines `c_i(δ) = a_i - b_i δ`.
//!
//! For a fixed weight `l`, `h(δ) = A0 - B0 δ + (sum of the top l lines at δ)`
//! is convex, piecewise linear and decreasing; its root is the optimal ratio.
//! The top-`l` set only changes where the `l`-th and `(l+1)`-th lines cross,
//! so a kinetic sort of the lines from `δ = 0` upwards visits every vertex of
//! every level in order. Each swap of adjacent positions `p, p+1` is a vertex
//! of level `p + 1`; the walk for that level stops at the first vertex where
//! the running `A0 + A - (B0 + B) δ` is no longer positive.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::{FractionalOptimum, LayerOptimum, LinearFractionalProgram};

/// Relative margin under which two candidate values count as tied.
const TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Event {
    delta: f64,
    lo: usize,
    hi: usize,
    pos: usize,
}

impl Eq for Event {}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.delta
            .total_cmp(&other.delta)
            .then(self.lo.cmp(&other.lo))
            .then(self.hi.cmp(&other.hi))
            .then(self.pos.cmp(&other.pos))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Solves the fixed-weight subproblem for every `l = 1..=dim`.
/// Entry `l - 1` of the result belongs to weight `l`.
pub fn layer_walk_all(p: &LinearFractionalProgram) -> Vec<LayerOptimum> {
    let d = p.dim();
    if d == 0 {
        return Vec::new();
    }
    let (a, b) = (&p.a, &p.b);

    // order just to the right of δ = 0
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        a[j].total_cmp(&a[i])
            .then(b[i].total_cmp(&b[j]))
            .then(i.cmp(&j))
    });

    let mut num = vec![0.0; d + 1];
    let mut den = vec![0.0; d + 1];
    for l in 1..=d {
        num[l] = num[l - 1] + a[order[l - 1]];
        den[l] = den[l - 1] + b[order[l - 1]];
    }
    let mut result: Vec<Option<LayerOptimum>> = vec![None; d + 1];

    let crossing = |upper: usize, lower: usize, pos: usize, now: f64| -> Option<Event> {
        // the lower line overtakes only if it falls more slowly
        (b[lower] < b[upper]).then(|| Event {
            delta: ((a[upper] - a[lower]) / (b[upper] - b[lower])).max(now),
            lo: upper.min(lower),
            hi: upper.max(lower),
            pos,
        })
    };

    let mut heap: BinaryHeap<Reverse<Event>> = (0..d - 1)
        .filter_map(|pos| crossing(order[pos], order[pos + 1], pos, 0.0))
        .map(Reverse)
        .collect();

    while let Some(Reverse(ev)) = heap.pop() {
        let pos = ev.pos;
        let (upper, lower) = (order[pos], order[pos + 1]);
        if (upper.min(lower), upper.max(lower)) != (ev.lo, ev.hi) || b[lower] >= b[upper] {
            continue; // stale
        }
        let l = pos + 1;
        if result[l].is_none() {
            let h = p.a0 + num[l] - (p.b0 + den[l]) * ev.delta;
            if h <= 0.0 {
                result[l] = Some(finish(p, &order[..l], num[l], den[l]));
            } else {
                num[l] += a[lower] - a[upper];
                den[l] += b[lower] - b[upper];
            }
        }
        order.swap(pos, pos + 1);
        if pos > 0 {
            if let Some(e) = crossing(order[pos - 1], order[pos], pos - 1, ev.delta) {
                heap.push(Reverse(e));
            }
        }
        if pos + 2 < d {
            if let Some(e) = crossing(order[pos + 1], order[pos + 2], pos + 1, ev.delta) {
                heap.push(Reverse(e));
            }
        }
    }

    (1..=d)
        .map(|l| {
            result[l]
                .take()
                .unwrap_or_else(|| finish(p, &order[..l], num[l], den[l]))
        })
        .collect()
}

fn finish(p: &LinearFractionalProgram, top: &[usize], num: f64, den: f64) -> LayerOptimum {
    let mut support = top.to_vec();
    support.sort_unstable();
    LayerOptimum {
        support,
        ratio: (p.a0 + num) / (p.b0 + den),
    }
}

/// Maximiser of `f(x)` subject to `1ᵀx = l` (requires `1 <= l <= dim`).
pub fn layer_walk_max(p: &LinearFractionalProgram, l: usize) -> (Vec<bool>, f64) {
    assert!(l >= 1 && l <= p.dim(), "weight {l} outside 1..={}", p.dim());
    let opt = layer_walk_all(p).swap_remove(l - 1);
    let mut x = vec![false; p.dim()];
    for &i in &opt.support {
        x[i] = true;
    }
    (x, opt.ratio)
}

/// Maximises `(1ᵀx) · f(x)` over nonzero `x`. Ties go to the smaller weight.
pub fn fractional_max(p: &LinearFractionalProgram) -> FractionalOptimum {
    fractional_max_shifted(p, 0)
}

/// Maximises `(1ᵀx + shift) · f(x)` over nonzero `x`.
pub fn fractional_max_shifted(p: &LinearFractionalProgram, shift: usize) -> FractionalOptimum {
    let mut best: Option<FractionalOptimum> = None;
    for (idx, layer) in layer_walk_all(p).into_iter().enumerate() {
        let value = (idx + 1 + shift) as f64 * layer.ratio;
        let better = match &best {
            None => true,
            Some(b) => value > b.value + TIE * b.value.abs().max(1.0),
        };
        if better {
            best = Some(FractionalOptimum {
                support: layer.support,
                value,
            });
        }
    }
    best.expect("program has dimension zero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn prog(a: &[f64], b: &[f64]) -> LinearFractionalProgram {
        LinearFractionalProgram::new(0.0, a.to_vec(), 0.0, b.to_vec()).unwrap()
    }

    /// Exhaustive maximum of f over supports of size l (or all, if None).
    fn brute(p: &LinearFractionalProgram, l: Option<usize>, shift: usize) -> f64 {
        let d = p.dim();
        let mut best = f64::NEG_INFINITY;
        for mask in 1usize..1 << d {
            let w = mask.count_ones() as usize;
            if l.is_some_and(|l| l != w) {
                continue;
            }
            let support: Vec<usize> = (0..d).filter(|&i| mask >> i & 1 == 1).collect();
            let scale = if l.is_some() { 1.0 } else { (w + shift) as f64 };
            best = best.max(scale * p.ratio(&support));
        }
        best
    }

    #[test]
    fn two_lines_weight_one() {
        let p = prog(&[1.0, 0.0], &[1.0, 1.0]);
        assert_eq!(layer_walk_max(&p, 1), (vec![true, false], 1.0));
        assert_eq!(layer_walk_max(&p, 2), (vec![true, true], 0.5));
    }

    #[test]
    fn tie_prefers_smaller_weight() {
        let p = prog(&[1.0, 0.0], &[1.0, 1.0]);
        let opt = fractional_max(&p);
        assert_eq!(opt.support, vec![0]);
        assert_eq!(opt.value, 1.0);
    }

    #[test]
    fn all_ones_objective_is_weight() {
        let p = prog(&[1.0; 6], &[1.0; 6]);
        let opt = fractional_max(&p);
        assert_eq!(opt.value, 6.0);
        assert_eq!(opt.support.len(), 6);
    }

    #[test]
    fn concurrent_lines() {
        // three lines through (1, 0) plus a parallel pair
        let p = LinearFractionalProgram::new(
            0.5,
            vec![1.0, 2.0, 3.0, 3.0, 0.2],
            0.0,
            vec![1.0, 2.0, 3.0, 3.0, 0.1],
        )
        .unwrap();
        for l in 1..=5 {
            let got = layer_walk_all(&p)[l - 1].ratio;
            assert!((got - brute(&p, Some(l), 0)).abs() < 1e-12, "l={l}");
        }
    }

    #[test]
    fn offsets_change_the_argmax() {
        // with A0 = 0 the single best line wins; a large B0 favours adding mass
        let p = LinearFractionalProgram::new(0.0, vec![1.0, 0.9], 5.0, vec![1.0, 0.1]).unwrap();
        let opt = fractional_max(&p);
        assert!((opt.value - brute(&p, None, 0)).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn walk_matches_enumeration(
            lines in prop::collection::vec((0.0f64..2.0, 0.05f64..2.0), 1..=14),
            a0 in 0.0f64..1.0,
            b0 in 0.0f64..3.0,
        ) {
            let (a, b): (Vec<f64>, Vec<f64>) = lines.into_iter().unzip();
            let p = LinearFractionalProgram::new(a0, a, b0, b).unwrap();
            for (idx, layer) in layer_walk_all(&p).iter().enumerate() {
                let l = idx + 1;
                prop_assert_eq!(layer.support.len(), l);
                prop_assert!((layer.ratio - p.ratio(&layer.support)).abs() < 1e-12);
                prop_assert!((layer.ratio - brute(&p, Some(l), 0)).abs() < 1e-9);
            }
            let opt = fractional_max(&p);
            prop_assert!((opt.value - brute(&p, None, 0)).abs() < 1e-9);
            let shifted = fractional_max_shifted(&p, 3);
            prop_assert!((shifted.value - brute(&p, None, 3)).abs() < 1e-9);
        }

        #[test]
        fn walk_handles_degenerate_coefficients(
            lines in prop::collection::vec((0u8..4, 1u8..4), 1..=10),
        ) {
            // small integer grids force coincident, parallel and concurrent lines
            let (a, b): (Vec<f64>, Vec<f64>) =
                lines.into_iter().map(|(x, y)| (x as f64, y as f64)).unzip();
            let p = LinearFractionalProgram::new(0.25, a, 0.0, b).unwrap();
            for (idx, layer) in layer_walk_all(&p).iter().enumerate() {
                prop_assert!((layer.ratio - brute(&p, Some(idx + 1), 0)).abs() < 1e-9);
            }
        }
    }
}
