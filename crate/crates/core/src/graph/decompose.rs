use std::collections::VecDeque;

use super::Graph;
use crate::error::{Error, Result};

/// One connected component `C` of `G - v` together with `U = C ∩ Γ(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemovalComponent {
    pub vertices: Vec<usize>,
    pub attachments: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemovalDecomposition {
    pub center: usize,
    pub components: Vec<RemovalComponent>,
}

impl RemovalDecomposition {
    /// Index of the component containing `u`, if any.
    pub fn component_of(&self, u: usize) -> Option<usize> {
        self.components
            .iter()
            .position(|c| c.vertices.binary_search(&u).is_ok())
    }
}

/// Splits `G - v` into connected components. Components are ordered by their
/// smallest vertex id and both vertex lists are sorted.
pub fn components_after_removal(g: &Graph, v: usize) -> Result<RemovalDecomposition> {
    g.check_vertex(v)?;
    let n = g.n();
    let mut seen = vec![false; n];
    seen[v] = true;
    let mut components = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut vertices = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    vertices.push(w);
                    queue.push_back(w);
                }
            }
        }
        vertices.sort_unstable();
        let attachments = vertices
            .iter()
            .copied()
            .filter(|&u| g.has_edge(u, v))
            .collect();
        components.push(RemovalComponent {
            vertices,
            attachments,
        });
    }
    Ok(RemovalDecomposition {
        center: v,
        components,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiconnectedInfo {
    /// Biconnected components as edge lists (`u < v`, sorted).
    pub blocks: Vec<Vec<(usize, usize)>>,
    pub k: usize,
}

/// Block decomposition and the parameter `k(G)`: 1 for forests, otherwise the
/// largest degree of any vertex counted inside a single block.
pub fn k_parameter(g: &Graph) -> Result<BiconnectedInfo> {
    if g.n() == 0 {
        return Err(Error::InvalidGraph("empty graph".into()));
    }
    let blocks = biconnected_blocks(g);
    let k = if g.is_forest() {
        1
    } else {
        let mut count = vec![0usize; g.n()];
        let mut best = 1;
        for block in &blocks {
            for &(a, b) in block {
                count[a] += 1;
                count[b] += 1;
            }
            for &(a, b) in block {
                best = best.max(count[a]).max(count[b]);
            }
            for &(a, b) in block {
                count[a] = 0;
                count[b] = 0;
            }
        }
        best
    };
    Ok(BiconnectedInfo { blocks, k })
}

/// Hopcroft-Tarjan with an explicit stack (deep paths would overflow recursion).
fn biconnected_blocks(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    const UNSEEN: usize = usize::MAX;
    let n = g.n();
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut time = 0usize;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut blocks = Vec::new();

    for root in 0..n {
        if disc[root] != UNSEEN {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, parent, next neighbour index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, UNSEEN, 0)];
        while let Some(&mut (u, parent, ref mut next)) = stack.last_mut() {
            if let Some(&w) = g.neighbors(u).get(*next) {
                *next += 1;
                if disc[w] == UNSEEN {
                    edge_stack.push((u, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, u, 0));
                } else if w != parent && disc[w] < disc[u] {
                    edge_stack.push((u, w));
                    low[u] = low[u].min(disc[w]);
                }
                continue;
            }
            stack.pop();
            if parent == UNSEEN {
                continue;
            }
            low[parent] = low[parent].min(low[u]);
            if low[u] >= disc[parent] {
                let mut block = Vec::new();
                while let Some((a, b)) = edge_stack.pop() {
                    block.push((a.min(b), a.max(b)));
                    if (a, b) == (parent, u) {
                        break;
                    }
                }
                block.sort_unstable();
                blocks.push(block);
            }
        }
    }
    blocks.sort();
    blocks
}
