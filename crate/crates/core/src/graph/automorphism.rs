use super::Graph;
use crate::error::{Error, Result};

/// Checks that `sigma` is an automorphism of `g` exchanging `u` and `v`.
///
/// `sigma[i]` is the image of vertex `i`. Returns an error when `sigma` is not
/// a permutation of the vertex set.
pub fn check_swap_automorphism(g: &Graph, sigma: &[usize], u: usize, v: usize) -> Result<bool> {
    let n = g.n();
    if sigma.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "length {} for {} vertices",
            sigma.len(),
            n
        )));
    }
    let mut hit = vec![false; n];
    for &s in sigma {
        if s >= n || std::mem::replace(&mut hit[s], true) {
            return Err(Error::InvalidPermutation(format!("image {s} repeated or out of range")));
        }
    }
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if sigma[u] != v || sigma[v] != u {
        return Ok(false);
    }
    // sigma is injective on edges, so mapping E into E is enough.
    Ok(g.edges().all(|(a, b)| g.has_edge(sigma[a], sigma[b])))
}
