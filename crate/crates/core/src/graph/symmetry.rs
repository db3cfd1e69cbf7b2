//! Automorphism and isomorphism search by backtracking.

use super::{Graph, GraphError};

/// Largest graph on which vertex transitivity is decided by search.
pub const TRANSITIVITY_SEARCH_LIMIT: usize = 16;
/// Largest graph accepted by [`is_isomorphic`].
pub const ISOMORPHISM_LIMIT: usize = 8;

/// Vertex transitivity, by search up to [`TRANSITIVITY_SEARCH_LIMIT`] vertices and
/// from the declared construction flag above that.
pub fn is_vertex_transitive(g: &Graph) -> Result<bool, GraphError> {
    if g.vertex_count() <= TRANSITIVITY_SEARCH_LIMIT {
        return search_vertex_transitive(g);
    }
    g.declared_vertex_transitive().ok_or(GraphError::TooLarge {
        operation: "vertex transitivity search",
        n: g.vertex_count(),
        limit: TRANSITIVITY_SEARCH_LIMIT,
    })
}

/// Decides transitivity by looking for an automorphism `0 -> v` for every `v`.
/// Ignores any declared flag.
pub fn search_vertex_transitive(g: &Graph) -> Result<bool, GraphError> {
    let n = g.vertex_count();
    if n > TRANSITIVITY_SEARCH_LIMIT {
        return Err(GraphError::TooLarge {
            operation: "vertex transitivity search",
            n,
            limit: TRANSITIVITY_SEARCH_LIMIT,
        });
    }
    // Orbits found so far let us skip targets already reached.
    let mut reached = vec![false; n];
    reached[0] = true;
    for v in 1..n {
        if reached[v] {
            continue;
        }
        match find_mapping(g, g, &[(0, v)]) {
            Some(perm) => {
                // The orbit of 0 under this automorphism is reachable too.
                let mut w = perm[0];
                while w != 0 {
                    reached[w] = true;
                    w = perm[w];
                }
            }
            None => return Ok(false),
        }
    }
    Ok(true)
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> Result<bool, GraphError> {
    for g in [a, b] {
        if g.vertex_count() > ISOMORPHISM_LIMIT {
            return Err(GraphError::TooLarge {
                operation: "isomorphism test",
                n: g.vertex_count(),
                limit: ISOMORPHISM_LIMIT,
            });
        }
    }
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    Ok(find_mapping(a, b, &[]).is_some())
}

/// Finds a bijection `V(a) -> V(b)` preserving adjacency and non-adjacency that
/// extends the fixed pairs.
fn find_mapping(a: &Graph, b: &Graph, fixed: &[(usize, usize)]) -> Option<Vec<usize>> {
    let n = a.vertex_count();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for &(x, y) in fixed {
        if a.degree(x) != b.degree(y) {
            return None;
        }
        map[x] = y;
        used[y] = true;
    }
    let order: Vec<usize> = (0..n).filter(|&x| map[x] == usize::MAX).collect();
    let mut assigned: Vec<usize> = fixed.iter().map(|&(x, _)| x).collect();
    if extend(a, b, &order, 0, &mut map, &mut used, &mut assigned) {
        Some(map)
    } else {
        None
    }
}

fn extend(
    a: &Graph,
    b: &Graph,
    order: &[usize],
    i: usize,
    map: &mut [usize],
    used: &mut [bool],
    assigned: &mut Vec<usize>,
) -> bool {
    let Some(&x) = order.get(i) else {
        return true;
    };
    for y in 0..b.vertex_count() {
        if used[y] || a.degree(x) != b.degree(y) {
            continue;
        }
        let consistent = assigned
            .iter()
            .all(|&z| a.has_edge(x, z) == b.has_edge(y, map[z]));
        if !consistent {
            continue;
        }
        map[x] = y;
        used[y] = true;
        assigned.push(x);
        if extend(a, b, order, i + 1, map, used, assigned) {
            return true;
        }
        assigned.pop();
        used[y] = false;
        map[x] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_named, NamedFamily};

    #[test]
    fn cycles_are_transitive() {
        let c7 = make_named(&NamedFamily::Cycle(7)).unwrap();
        assert!(search_vertex_transitive(&c7).unwrap());
    }

    #[test]
    fn path_is_not_transitive() {
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(!is_vertex_transitive(&p3).unwrap());
    }

    #[test]
    fn petersen_is_transitive_by_search() {
        let p = make_named(&NamedFamily::Petersen).unwrap();
        assert!(search_vertex_transitive(&p).unwrap());
    }

    #[test]
    fn regular_but_not_transitive() {
        // C3 plus C4: 2-regular, not transitive.
        let g = Graph::from_edges(
            7,
            [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 6), (6, 3)],
        )
        .unwrap();
        assert!(!search_vertex_transitive(&g).unwrap());
    }

    #[test]
    fn small_hamming_graphs_are_transitive() {
        for length in 1..=4 {
            let g = make_named(&NamedFamily::Hamming {
                length,
                distances: vec![1, length],
            })
            .unwrap();
            assert!(search_vertex_transitive(&g).unwrap());
        }
    }

    #[test]
    fn large_graphs_need_a_declaration() {
        let gs = make_named(&NamedFamily::schrijver_graph()).unwrap();
        assert!(is_vertex_transitive(&gs).unwrap());
        let bare = gs.with_declared_vertex_transitive(None);
        assert!(matches!(
            is_vertex_transitive(&bare),
            Err(GraphError::TooLarge { .. })
        ));
    }

    #[test]
    fn isomorphism() {
        let c4 = make_named(&NamedFamily::Cycle(4)).unwrap();
        let relabelled = Graph::from_edges(4, [(0, 2), (2, 1), (1, 3), (3, 0)]).unwrap();
        assert!(is_isomorphic(&c4, &relabelled).unwrap());
        let path = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(!is_isomorphic(&c4, &path).unwrap());
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(!is_isomorphic(&path, &star).unwrap());
    }
}
