//! Test-graph generators. Random kinds are deterministic for a fixed seed.

use std::collections::{BTreeSet, BinaryHeap};
use std::cmp::Reverse;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphKind {
    Complete { n: usize },
    Path { n: usize },
    Cycle { n: usize },
    /// Center `0` joined to `leaves` leaves.
    Star { leaves: usize },
    RandomTree { n: usize, seed: u64 },
    Gnp {
        n: usize,
        p: f64,
        seed: u64,
        /// Keep only the largest connected component (ties: smallest min id).
        largest_component: bool,
    },
}

pub fn generate(kind: GraphKind) -> Result<Graph> {
    let positive = |n: usize| {
        if n >= 1 {
            Ok(())
        } else {
            Err(Error::InvalidParameter("size must be at least 1".into()))
        }
    };
    match kind {
        GraphKind::Complete { n } => positive(n).map(|_| complete(n)),
        GraphKind::Path { n } => positive(n).map(|_| path(n)),
        GraphKind::Cycle { n } => {
            if n < 3 {
                return Err(Error::InvalidParameter("cycle needs at least 3 vertices".into()));
            }
            Ok(cycle(n))
        }
        GraphKind::Star { leaves } => Ok(star(leaves)),
        GraphKind::RandomTree { n, seed } => {
            positive(n)?;
            Ok(random_tree(n, &mut ChaCha8Rng::seed_from_u64(seed)))
        }
        GraphKind::Gnp {
            n,
            p,
            seed,
            largest_component,
        } => {
            positive(n)?;
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!("probability {p} not in [0, 1]")));
            }
            let g = gnp(n, p, &mut ChaCha8Rng::seed_from_u64(seed));
            Ok(if largest_component {
                largest_component_of(&g)
            } else {
                g
            })
        }
    }
}

pub fn complete(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

pub fn path(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for u in 1..n {
        g.add_edge(u - 1, u).unwrap();
    }
    g
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    let mut g = path(n);
    g.add_edge(n - 1, 0).unwrap();
    g
}

pub fn star(leaves: usize) -> Graph {
    let mut g = Graph::new(leaves + 1);
    for u in 1..=leaves {
        g.add_edge(0, u).unwrap();
    }
    g
}

/// Uniform random labelled tree (Prüfer decoding).
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Graph {
    let mut g = Graph::new(n);
    if n == 2 {
        g.add_edge(0, 1).unwrap();
    }
    if n <= 2 {
        return g;
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    for &c in &code {
        let Reverse(leaf) = leaves.pop().unwrap();
        g.add_edge(leaf, c).unwrap();
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.push(Reverse(c));
        }
    }
    let Reverse(a) = leaves.pop().unwrap();
    let Reverse(b) = leaves.pop().unwrap();
    g.add_edge(a, b).unwrap();
    g
}

pub fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// A random spanning tree plus every other pair independently with probability `p`.
pub fn random_connected<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = random_tree(n, rng);
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) && rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Largest connected component with vertices renumbered `0..m` in id order.
pub fn largest_component_of(g: &Graph) -> Graph {
    let comps = g.connected_components();
    let best = comps
        .iter()
        .enumerate()
        .max_by_key(|(i, c)| (c.len(), Reverse(*i)))
        .map(|(_, c)| c.clone())
        .unwrap_or_default();
    let mut h = g.induced(&best);
    h.labels = (0..h.n()).map(|i| i.to_string()).collect();
    h
}

/// All pairwise non-isomorphic unlabelled trees on `n` vertices.
pub fn nonisomorphic_trees(n: usize) -> Vec<Graph> {
    if n == 0 {
        return Vec::new();
    }
    let mut current: Vec<Graph> = vec![Graph::new(1)];
    for size in 2..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for t in &current {
            for attach in 0..t.n() {
                let mut g = Graph::new(size);
                for (a, b) in t.edges() {
                    g.add_edge(a, b).unwrap();
                }
                g.add_edge(attach, size - 1).unwrap();
                if seen.insert(tree_canonical_form(&g)) {
                    next.push(g);
                }
            }
        }
        current = next;
    }
    current
}

/// AHU canonical string of a tree, rooted at its center (the smaller encoding
/// wins for bicentral trees).
pub fn tree_canonical_form(g: &Graph) -> String {
    let n = g.n();
    if n <= 1 {
        return "()".repeat(n);
    }
    // peel leaves to find the center(s)
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            for &w in g.neighbors(leaf) {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer
        .iter()
        .map(|&c| encode_rooted(g, c, usize::MAX))
        .min()
        .unwrap()
}

fn encode_rooted(g: &Graph, v: usize, parent: usize) -> String {
    let mut children: Vec<String> = g
        .neighbors(v)
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| encode_rooted(g, w, v))
        .collect();
    children.sort();
    format!("({})", children.concat())
}
