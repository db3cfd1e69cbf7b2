//! Exact exponential-time oracles for small graphs.

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

/// Largest graph accepted by [`clique_number`] and [`independence_number`]
/// (one `u64` word per vertex set).
pub const CLIQUE_LIMIT: usize = 64;
/// Largest graph accepted by [`chromatic_number`].
pub const CHROMATIC_LIMIT: usize = 20;
/// Largest source or target accepted by [`find_homomorphism`].
pub const HOMOMORPHISM_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteInvariants {
    pub alpha: usize,
    pub omega: usize,
    /// `None` when the graph exceeds [`CHROMATIC_LIMIT`].
    pub chi: Option<usize>,
}

pub fn brute_invariants(g: &Graph) -> Result<BruteInvariants, GraphError> {
    Ok(BruteInvariants {
        alpha: independence_number(g)?,
        omega: clique_number(g)?,
        chi: if g.vertex_count() <= CHROMATIC_LIMIT {
            Some(chromatic_number(g)?)
        } else {
            None
        },
    })
}

fn too_large(operation: &'static str, n: usize, limit: usize) -> Result<(), GraphError> {
    if n > limit {
        Err(GraphError::TooLarge {
            operation,
            n,
            limit,
        })
    } else {
        Ok(())
    }
}

fn bitmasks(g: &Graph) -> Vec<u64> {
    (0..g.vertex_count())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
        .collect()
}

pub fn clique_number(g: &Graph) -> Result<usize, GraphError> {
    too_large("clique number", g.vertex_count(), CLIQUE_LIMIT)?;
    let n = g.vertex_count();
    let adj = bitmasks(g);
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = 0;
    expand(&adj, 0, all, &mut best);
    Ok(best)
}

pub fn independence_number(g: &Graph) -> Result<usize, GraphError> {
    too_large("independence number", g.vertex_count(), CLIQUE_LIMIT)?;
    clique_number(&g.complement())
}

/// Branch and bound on candidate sets, pruned by a greedy colouring of the
/// candidates.
fn expand(adj: &[u64], size: usize, mut cand: u64, best: &mut usize) {
    if cand == 0 {
        *best = (*best).max(size);
        return;
    }
    let (order, colours) = greedy_colour(adj, cand);
    for i in (0..order.len()).rev() {
        if size + colours[i] <= *best {
            return;
        }
        let v = order[i];
        expand(adj, size + 1, cand & adj[v], best);
        cand &= !(1u64 << v);
    }
}

/// Sequential colouring of `cand`; returns vertices in colour order together with
/// the running colour count, which bounds the clique found in any prefix.
fn greedy_colour(adj: &[u64], cand: u64) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(cand.count_ones() as usize);
    let mut colours = Vec::with_capacity(order.capacity());
    let mut uncoloured = cand;
    let mut colour = 0;
    while uncoloured != 0 {
        colour += 1;
        let mut avail = uncoloured;
        while avail != 0 {
            let v = avail.trailing_zeros() as usize;
            avail &= !(1u64 << v) & !adj[v];
            uncoloured &= !(1u64 << v);
            order.push(v);
            colours.push(colour);
        }
    }
    (order, colours)
}

pub fn chromatic_number(g: &Graph) -> Result<usize, GraphError> {
    let n = g.vertex_count();
    too_large("chromatic number", n, CHROMATIC_LIMIT)?;
    if g.is_edgeless() {
        return Ok(1);
    }
    // Highest-degree-first order tends to fail early.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let lower = clique_number(g)?;
    for k in lower..=n {
        let mut colour = vec![usize::MAX; n];
        if colour_with(g, &order, 0, k, &mut colour) {
            return Ok(k);
        }
    }
    unreachable!("n colours always suffice")
}

fn colour_with(g: &Graph, order: &[usize], i: usize, k: usize, colour: &mut [usize]) -> bool {
    let Some(&v) = order.get(i) else {
        return true;
    };
    // Symmetry breaking: never open more than one fresh colour at a time.
    let used = order[..i].iter().map(|&u| colour[u] + 1).max().unwrap_or(0);
    for c in 0..k.min(used + 1) {
        if g.neighbors(v).iter().all(|&u| colour[u as usize] != c) {
            colour[v] = c;
            if colour_with(g, order, i + 1, k, colour) {
                return true;
            }
        }
    }
    colour[v] = usize::MAX;
    false
}

pub fn is_independent_set(g: &Graph, set: &[usize]) -> Result<bool, GraphError> {
    let n = g.vertex_count();
    if let Some(&v) = set.iter().find(|&&v| v >= n) {
        return Err(GraphError::VertexOutOfRange { vertex: v, n });
    }
    Ok(set
        .iter()
        .enumerate()
        .all(|(i, &u)| set[i + 1..].iter().all(|&v| !g.has_edge(u, v))))
}

/// Searches for a map `f: V(g) -> V(h)` with `x ~ y` implying `f(x) ~ f(y)`.
pub fn find_homomorphism(g: &Graph, h: &Graph) -> Result<Option<Vec<usize>>, GraphError> {
    too_large("homomorphism search", g.vertex_count(), HOMOMORPHISM_LIMIT)?;
    too_large("homomorphism search", h.vertex_count(), HOMOMORPHISM_LIMIT)?;
    let mut map = vec![usize::MAX; g.vertex_count()];
    Ok(hom_step(g, h, 0, &mut map).then_some(map))
}

fn hom_step(g: &Graph, h: &Graph, x: usize, map: &mut [usize]) -> bool {
    if x == g.vertex_count() {
        return true;
    }
    for s in 0..h.vertex_count() {
        let ok = g
            .neighbors(x)
            .iter()
            .map(|&y| y as usize)
            .filter(|&y| y < x)
            .all(|y| h.has_edge(s, map[y]));
        if ok {
            map[x] = s;
            if hom_step(g, h, x + 1, map) {
                return true;
            }
        }
    }
    map[x] = usize::MAX;
    false
}
