#![allow(dead_code)]

use proptest::prelude::*;
use theta_forge::graph::{make_named, Graph, NamedFamily};

pub fn named(s: &str) -> Graph {
    make_named(&s.parse::<NamedFamily>().unwrap()).unwrap()
}

/// Graphs on `lo..=hi` vertices with an arbitrary edge set.
pub fn graph(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in (u + 1)..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}
