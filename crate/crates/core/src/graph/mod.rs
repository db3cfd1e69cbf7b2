//! Finite simple graphs.
//!
//! Vertices are the integers `0..n`. A [`Graph`] is immutable once built; every
//! operation here (complement, products, brute-force invariants) returns a new
//! value. Adjacency is stored as sorted neighbour lists so that graphs with tens of
//! thousands of vertices (strong products of 64-vertex graphs, for instance) stay
//! cheap to build and query.

mod brute;
mod families;
mod products;
mod symmetry;
mod text;

use rand::Rng;
use thiserror::Error;

pub use brute::{
    brute_invariants, chromatic_number, clique_number, find_homomorphism, independence_number,
    is_independent_set, BruteInvariants, CHROMATIC_LIMIT, CLIQUE_LIMIT, HOMOMORPHISM_LIMIT,
};
pub use families::{make_named, NamedFamily};
pub use products::{product, product_with_limit, ProductKind};
pub use symmetry::{
    is_isomorphic, is_vertex_transitive, search_vertex_transitive, ISOMORPHISM_LIMIT,
    TRANSITIVITY_SEARCH_LIMIT,
};
pub use text::{parse_graph, serialize_graph};

/// Default upper bound on the vertex count of any constructed graph.
pub const DEFAULT_MAX_VERTICES: usize = 65_536;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    NoVertices,
    #[error("graph with {requested} vertices exceeds the limit of {limit}")]
    SizeOverflow { requested: usize, limit: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("edge {u}-{v} listed twice")]
    DuplicateEdge { u: usize, v: usize },
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("graph has {n} vertices, above the limit {limit} for {operation}")]
    TooLarge {
        operation: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<u32>>,
    /// Vertex transitivity declared by construction (named families and
    /// products of transitive graphs). `None` means unknown.
    transitive: Option<bool>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph from an edge list. Edges are unordered; listing the same
    /// pair twice (in either orientation) is an error.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        check_size(n, DEFAULT_MAX_VERTICES)?;
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { vertex: u });
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let v = w[0] as usize;
                return Err(GraphError::DuplicateEdge {
                    u: u.min(v),
                    v: u.max(v),
                });
            }
        }
        Ok(Graph {
            n,
            adj,
            transitive: None,
        })
    }

    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        check_size(n, DEFAULT_MAX_VERTICES)?;
        Ok(Graph {
            n,
            adj: vec![Vec::new(); n],
            transitive: Some(true),
        })
    }

    /// Trusted constructor: neighbour lists must be symmetric and loop-free.
    pub(crate) fn from_adjacency(mut adj: Vec<Vec<u32>>, transitive: Option<bool>) -> Self {
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        Graph {
            n: adj.len(),
            adj,
            transitive,
        }
    }

    /// Erdős–Rényi graph `G(n, p)`.
    pub fn random<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(p.clamp(0.0, 1.0)) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges as pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Dense row-major adjacency matrix.
    pub fn adjacency_matrix(&self) -> Vec<bool> {
        let n = self.n;
        let mut m = vec![false; n * n];
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                m[u * n + v as usize] = true;
            }
        }
        m
    }

    pub fn complement(&self) -> Graph {
        let n = self.n;
        let mut mark = vec![false; n];
        let adj = (0..n)
            .map(|u| {
                for &v in &self.adj[u] {
                    mark[v as usize] = true;
                }
                let list = (0..n)
                    .filter(|&v| v != u && !mark[v])
                    .map(|v| v as u32)
                    .collect();
                for &v in &self.adj[u] {
                    mark[v as usize] = false;
                }
                list
            })
            .collect();
        Graph {
            n,
            adj,
            transitive: self.transitive,
        }
    }

    pub fn is_edgeless(&self) -> bool {
        self.adj.iter().all(Vec::is_empty)
    }

    /// Transitivity recorded at construction time, if any.
    pub fn declared_vertex_transitive(&self) -> Option<bool> {
        self.transitive
    }

    /// Returns a copy carrying the given transitivity declaration.
    pub fn with_declared_vertex_transitive(mut self, flag: Option<bool>) -> Self {
        self.transitive = flag;
        self
    }

    pub fn product(&self, other: &Graph, kind: ProductKind) -> Result<Graph, GraphError> {
        product(self, other, kind)
    }
}

/// `x ~ y` in the output iff `x != y` and `x !~ y` in the input.
pub fn complement(g: &Graph) -> Graph {
    g.complement()
}

pub(crate) fn check_size(n: usize, limit: usize) -> Result<(), GraphError> {
    if n == 0 {
        Err(GraphError::NoVertices)
    } else if n > limit {
        Err(GraphError::SizeOverflow {
            requested: n,
            limit,
        })
    } else {
        Ok(())
    }
}
