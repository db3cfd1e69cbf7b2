use std::fmt;
use std::str::FromStr;

use super::{check_size, Graph, GraphError, DEFAULT_MAX_VERTICES};

/// Binary graph products.
///
/// For every kind except [`ProductKind::DisjointUnion`], the product vertex
/// `(x, y)` is numbered `x * |V(h)| + y`, which matches the block order of
/// `SymMatrix::kron`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProductKind {
    /// `(x1 ~ x2 or x1 = x2) and (y1 ~ y2 or y1 = y2)`, distinct pairs.
    Strong,
    /// `x1 ~ x2 or y1 ~ y2`.
    Disjunctive,
    /// `x1 ~ x2 or (x1 = x2 and y1 ~ y2)`.
    Lexicographic,
    /// `(x1 = x2 and y1 ~ y2) or (x1 ~ x2 and y1 = y2)`.
    Cartesian,
    /// `x1 != x2 and (x1 ~ x2 implies y1 ~ y2)`.
    Hom,
    /// Vertices of `g` first, then those of `h` shifted by `|V(g)|`.
    DisjointUnion,
}

impl ProductKind {
    pub const ALL: [ProductKind; 6] = [
        ProductKind::Strong,
        ProductKind::Disjunctive,
        ProductKind::Lexicographic,
        ProductKind::Cartesian,
        ProductKind::Hom,
        ProductKind::DisjointUnion,
    ];

    fn edge(self, g: &Graph, h: &Graph, (x1, y1): (usize, usize), (x2, y2): (usize, usize)) -> bool {
        let gx = g.has_edge(x1, x2);
        let hy = h.has_edge(y1, y2);
        let sx = x1 == x2;
        let sy = y1 == y2;
        match self {
            ProductKind::Strong => !(sx && sy) && (gx || sx) && (hy || sy),
            ProductKind::Disjunctive => gx || hy,
            ProductKind::Lexicographic => gx || (sx && hy),
            ProductKind::Cartesian => (sx && hy) || (gx && sy),
            ProductKind::Hom => !sx && (!gx || hy),
            ProductKind::DisjointUnion => unreachable!("disjoint union has no pairing"),
        }
    }

    fn preserves_transitivity(self) -> bool {
        matches!(
            self,
            ProductKind::Strong
                | ProductKind::Disjunctive
                | ProductKind::Lexicographic
                | ProductKind::Cartesian
        )
    }
}

impl fmt::Display for ProductKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProductKind::Strong => "strong",
            ProductKind::Disjunctive => "disj",
            ProductKind::Lexicographic => "lex",
            ProductKind::Cartesian => "cart",
            ProductKind::Hom => "hom",
            ProductKind::DisjointUnion => "union",
        };
        f.write_str(s)
    }
}

impl FromStr for ProductKind {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "strong" => Ok(ProductKind::Strong),
            "disj" | "disjunctive" => Ok(ProductKind::Disjunctive),
            "lex" | "lexicographic" => Ok(ProductKind::Lexicographic),
            "cart" | "cartesian" => Ok(ProductKind::Cartesian),
            "hom" => Ok(ProductKind::Hom),
            "union" | "disjoint-union" => Ok(ProductKind::DisjointUnion),
            other => Err(GraphError::ParameterOutOfRange(format!(
                "unknown product kind `{other}`"
            ))),
        }
    }
}

pub fn product(g: &Graph, h: &Graph, kind: ProductKind) -> Result<Graph, GraphError> {
    product_with_limit(g, h, kind, DEFAULT_MAX_VERTICES)
}

pub fn product_with_limit(
    g: &Graph,
    h: &Graph,
    kind: ProductKind,
    limit: usize,
) -> Result<Graph, GraphError> {
    let (ng, nh) = (g.vertex_count(), h.vertex_count());
    if kind == ProductKind::DisjointUnion {
        let n = ng.saturating_add(nh);
        check_size(n, limit)?;
        let shift = ng as u32;
        let adj = g
            .adj
            .iter()
            .cloned()
            .chain(
                h.adj
                    .iter()
                    .map(|list| list.iter().map(|&v| v + shift).collect()),
            )
            .collect();
        return Ok(Graph::from_adjacency(adj, None));
    }

    let n = ng.saturating_mul(nh);
    check_size(n, limit)?;
    let adj = (0..n)
        .map(|a| {
            let p = (a / nh, a % nh);
            (0..n)
                .filter(|&b| b != a && kind.edge(g, h, p, (b / nh, b % nh)))
                .map(|b| b as u32)
                .collect()
        })
        .collect();
    let transitive = match (g.transitive, h.transitive) {
        (Some(true), Some(true)) if kind.preserves_transitivity() => Some(true),
        _ => None,
    };
    Ok(Graph::from_adjacency(adj, transitive))
}
