//! Stable graphs: model, isomorphism, enumeration and spanning-tree data.

pub mod canon;
pub mod enumerate;
pub mod iso;
pub mod model;
pub mod trees;

pub use enumerate::enumerate_stable_graphs;
pub use iso::{automorphism_order, canonical_digest, canonical_form, canonical_graph, is_isomorphic};
pub use model::{Edge, Side, StableGraph, Vertex};
pub use trees::{cycle_data, kirchhoff_count, spanning_trees, CycleData, SpanningTree};

use crate::error::Result;

/// The standard test corpus: all stable graphs with `(g, n)` in
/// `{(1,1), (1,2), (2,0), (2,1), (2,2)}` and at most three edges, followed by
/// every single-edge subdivision of those with at least one edge.
pub fn corpus() -> Result<Vec<StableGraph>> {
    let mut out = base_corpus()?;
    let mut subs = Vec::new();
    for g in &out {
        for e in 0..g.num_edges() {
            subs.push(g.subdivide(e, 1)?);
        }
    }
    out.extend(subs);
    Ok(out)
}

/// The corpus without subdivisions.
pub fn base_corpus() -> Result<Vec<StableGraph>> {
    let mut out = Vec::new();
    for (g, n) in [(1, 1), (1, 2), (2, 0), (2, 1), (2, 2)] {
        out.extend(enumerate_stable_graphs(g, n, 3)?);
    }
    Ok(out)
}
