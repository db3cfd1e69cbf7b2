use std::fmt;
use std::str::FromStr;

use super::{check_size, Graph, GraphError, DEFAULT_MAX_VERTICES};

/// Named graph families.
///
/// The textual form accepted by [`FromStr`] is the CLI mini-language:
/// `K:n`, `C:n`, `E:n` (the colon is optional, so `C5` works), `petersen`, and
/// `hamming:l:d1,d2,...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedFamily {
    Complete(usize),
    Cycle(usize),
    Empty(usize),
    Petersen,
    /// Binary strings of the given length, adjacent when their Hamming distance
    /// lies in `distances`. `Hamming { length: 6, distances: [1,2,3] }` is
    /// Schrijver's 64-vertex graph.
    Hamming {
        length: usize,
        distances: Vec<usize>,
    },
}

impl NamedFamily {
    pub fn schrijver_graph() -> Self {
        NamedFamily::Hamming {
            length: 6,
            distances: vec![1, 2, 3],
        }
    }
}

pub fn make_named(family: &NamedFamily) -> Result<Graph, GraphError> {
    let g = match *family {
        NamedFamily::Complete(n) => {
            check_size(n, DEFAULT_MAX_VERTICES)?;
            let adj = (0..n)
                .map(|u| (0..n).filter(|&v| v != u).map(|v| v as u32).collect())
                .collect();
            Graph::from_adjacency(adj, None)
        }
        NamedFamily::Cycle(n) => {
            if n < 3 {
                return Err(GraphError::ParameterOutOfRange(format!(
                    "cycle needs at least 3 vertices, got {n}"
                )));
            }
            check_size(n, DEFAULT_MAX_VERTICES)?;
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))?
        }
        NamedFamily::Empty(n) => Graph::empty(n)?,
        NamedFamily::Petersen => {
            // Outer 5-cycle 0..5, inner pentagram 5..10, spokes i -- i+5.
            let outer = (0..5).map(|i| (i, (i + 1) % 5));
            let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
            let spokes = (0..5).map(|i| (i, i + 5));
            Graph::from_edges(10, outer.chain(inner).chain(spokes))?
        }
        NamedFamily::Hamming {
            length,
            ref distances,
        } => {
            if length == 0 || length > 16 {
                return Err(GraphError::ParameterOutOfRange(format!(
                    "Hamming length must be in 1..=16, got {length}"
                )));
            }
            if let Some(&d) = distances.iter().find(|&&d| d == 0 || d > length) {
                return Err(GraphError::ParameterOutOfRange(format!(
                    "Hamming distance {d} outside 1..={length}"
                )));
            }
            let n = 1usize << length;
            let mut allowed = [false; 17];
            for &d in distances {
                allowed[d] = true;
            }
            let adj = (0..n)
                .map(|u| {
                    (0..n)
                        .filter(|&v| allowed[(u ^ v).count_ones() as usize] && v != u)
                        .map(|v| v as u32)
                        .collect()
                })
                .collect();
            Graph::from_adjacency(adj, None)
        }
    };
    Ok(g.with_declared_vertex_transitive(Some(true)))
}

impl fmt::Display for NamedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedFamily::Complete(n) => write!(f, "K:{n}"),
            NamedFamily::Cycle(n) => write!(f, "C:{n}"),
            NamedFamily::Empty(n) => write!(f, "E:{n}"),
            NamedFamily::Petersen => write!(f, "petersen"),
            NamedFamily::Hamming { length, distances } => {
                let ds: Vec<String> = distances.iter().map(ToString::to_string).collect();
                write!(f, "hamming:{length}:{}", ds.join(","))
            }
        }
    }
}

impl FromStr for NamedFamily {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let spec = s.trim();
        let lower = spec.to_ascii_lowercase();
        let unknown = || GraphError::UnknownFamily(spec.to_string());
        let number = |t: &str| -> Result<usize, GraphError> {
            t.trim().parse::<usize>().map_err(|_| {
                GraphError::ParameterOutOfRange(format!("`{t}` is not a vertex count in `{spec}`"))
            })
        };
        if lower == "petersen" {
            return Ok(NamedFamily::Petersen);
        }
        if let Some(rest) = lower.strip_prefix("hamming:") {
            let (len, ds) = rest.split_once(':').ok_or_else(unknown)?;
            let length = number(len)?;
            let distances = ds
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(number)
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(NamedFamily::Hamming { length, distances });
        }
        let (head, tail) = lower.split_at(1.min(lower.len()));
        let tail = tail.strip_prefix(':').unwrap_or(tail);
        if tail.is_empty() {
            return Err(unknown());
        }
        match head {
            "k" => Ok(NamedFamily::Complete(number(tail)?)),
            "c" => Ok(NamedFamily::Cycle(number(tail)?)),
            "e" => Ok(NamedFamily::Empty(number(tail)?)),
            _ => Err(unknown()),
        }
    }
}
