//! Named small instances used across the test suites and documentation.

use crate::graph::{Sign, SignedGraph, VertexId};

/// The Petersen graph, all edges positive. Vertices 0..4 form the outer
/// cycle, 5..9 the inner pentagram, with spokes i -- i+5.
pub fn petersen() -> SignedGraph {
    SignedGraph::from_edges(10, &petersen_edges(Sign::Positive))
}

/// The Petersen graph with every edge negative.
pub fn petersen_all_negative() -> SignedGraph {
    SignedGraph::from_edges(10, &petersen_edges(Sign::Negative))
}

fn petersen_edges(sign: Sign) -> Vec<(VertexId, VertexId, Sign)> {
    [
        (0, 1),
        (1, 2),
        (2, 3),
        (3, 4),
        (0, 4),
        (0, 5),
        (1, 6),
        (2, 7),
        (3, 8),
        (4, 9),
        (5, 7),
        (6, 8),
        (7, 9),
        (5, 8),
        (6, 9),
    ]
    .into_iter()
    .map(|(u, v)| (u, v, sign))
    .collect()
}

/// Complete graph on `n` vertices, all positive.
pub fn complete(n: usize) -> SignedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u, v, Sign::Positive));
        }
    }
    SignedGraph::from_edges(n, &edges)
}

/// Complete bipartite graph on parts of size `a` and `b`, all positive.
pub fn complete_bipartite(a: usize, b: usize) -> SignedGraph {
    let mut edges = Vec::new();
    for u in 0..a {
        for v in 0..b {
            edges.push((u, a + v, Sign::Positive));
        }
    }
    SignedGraph::from_edges(a + b, &edges)
}

/// Cycle on `n >= 1` vertices, all positive. `cycle(1)` is a positive loop,
/// `cycle(2)` a positive digon.
pub fn cycle(n: usize) -> SignedGraph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, Sign::Positive)).collect();
    SignedGraph::from_edges(n, &edges)
}

/// Two negative loops joined by a positive edge. Edge 0 is the loop at
/// vertex 0, edge 1 the link, edge 2 the loop at vertex 1.
pub fn dumbbell() -> SignedGraph {
    SignedGraph::from_edges(
        2,
        &[
            (0, 0, Sign::Negative),
            (1, 0, Sign::Positive),
            (1, 1, Sign::Negative),
        ],
    )
}

/// Two parallel edges of opposite sign: the smallest inadmissible graph with
/// minimum degree two.
pub fn mixed_digon() -> SignedGraph {
    SignedGraph::from_edges(2, &[(0, 1, Sign::Positive), (0, 1, Sign::Negative)])
}

/// A single vertex carrying two negative loops; reduces to the dumbbell.
pub fn double_loop_vertex() -> SignedGraph {
    SignedGraph::from_edges(1, &[(0, 0, Sign::Negative), (0, 0, Sign::Negative)])
}

/// Copy of `g` with the signs of the listed edges set to negative and all
/// others positive.
pub fn with_signature(g: &SignedGraph, negatives: &[usize]) -> SignedGraph {
    let mut out = g.clone();
    for e in g.edge_ids().collect::<Vec<_>>() {
        let sign = if negatives.contains(&e) {
            Sign::Negative
        } else {
            Sign::Positive
        };
        out.set_sign(e, sign).unwrap();
    }
    out
}
