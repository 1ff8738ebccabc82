//! Isomorphism classes of stable graphs.

use sha2::{Digest, Sha256};

use super::canon::{canonicalize, Canon, DEFAULT_MAX_VERTICES};
use super::model::{Edge, StableGraph, Vertex};
use crate::error::Result;

type VLabel = (u32, Vec<u32>);

fn labeled(g: &StableGraph) -> (Vec<VLabel>, Vec<((usize, ()), (usize, ()))>) {
    let labels = g.vertices.iter().map(|v| (v.genus, v.legs.clone())).collect();
    let edges = g.edges.iter().map(|e| ((e.tail, ()), (e.head, ()))).collect();
    (labels, edges)
}

pub fn canon_of(g: &StableGraph) -> Result<Canon<VLabel, ()>> {
    let (l, e) = labeled(g);
    canonicalize(&l, &e, DEFAULT_MAX_VERTICES)
}

/// The canonical representative: vertices and edges in canonical order,
/// each edge oriented from its smaller to its larger endpoint.
pub fn canonical_graph(g: &StableGraph) -> Result<StableGraph> {
    let c = canon_of(g)?;
    Ok(StableGraph {
        vertices: c.key.vertices.iter().map(|(genus, legs)| Vertex { genus: *genus, legs: legs.clone() }).collect(),
        edges: c.key.edges.iter().map(|((a, _), (b, _))| Edge { tail: *a, head: *b }).collect(),
        semistable: g.semistable,
    })
}

/// A compact string that is equal for two graphs exactly when they are isomorphic.
pub fn canonical_form(g: &StableGraph) -> Result<String> {
    let c = canonical_graph(g)?;
    let vs: Vec<String> = c
        .vertices
        .iter()
        .map(|v| {
            let legs: Vec<String> = v.legs.iter().map(|l| l.to_string()).collect();
            format!("{}[{}]", v.genus, legs.join(","))
        })
        .collect();
    let es: Vec<String> = c.edges.iter().map(|e| format!("{}-{}", e.tail, e.head)).collect();
    Ok(format!("V{};E{}", vs.join(";"), es.join(",")))
}

pub fn canonical_digest(g: &StableGraph) -> Result<String> {
    let f = canonical_form(g)?;
    let h = Sha256::digest(f.as_bytes());
    Ok(h.iter().map(|b| format!("{b:02x}")).collect())
}

pub fn automorphism_order(g: &StableGraph) -> Result<u64> {
    Ok(canon_of(g)?.aut)
}

pub fn is_isomorphic(g: &StableGraph, h: &StableGraph) -> Result<bool> {
    Ok(canonical_form(g)? == canonical_form(h)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(g: u32, l: &[u32]) -> Vertex {
        StableGraph::v(g, l)
    }

    #[test]
    fn automorphism_examples() {
        let lp = StableGraph::raw(vec![v(2, &[])], vec![StableGraph::e(0, 0)], false);
        assert_eq!(automorphism_order(&lp).unwrap(), 2);
        let banana = StableGraph::raw(vec![v(0, &[]), v(0, &[])], vec![StableGraph::e(0, 1); 3], false);
        assert_eq!(automorphism_order(&banana).unwrap(), 12);
        let t = StableGraph::raw(vec![v(1, &[]), v(2, &[])], vec![StableGraph::e(0, 1)], false);
        assert_eq!(automorphism_order(&t).unwrap(), 1);
    }

    #[test]
    fn isomorphism_examples() {
        let g = StableGraph::raw(
            vec![v(0, &[1]), v(1, &[]), v(0, &[2])],
            vec![StableGraph::e(0, 1), StableGraph::e(1, 2), StableGraph::e(2, 0)],
            false,
        );
        let h = g.permute_vertices(&[2, 0, 1]).flip_edge(1).permute_edges(&[2, 0, 1]);
        assert!(is_isomorphic(&g, &h).unwrap());
        let lp = StableGraph::raw(vec![v(0, &[1])], vec![StableGraph::e(0, 0)], false);
        let tree = StableGraph::raw(vec![v(0, &[1, 2, 3]), v(1, &[])], vec![StableGraph::e(0, 1)], false);
        assert!(!is_isomorphic(&lp, &tree).unwrap());
        let g11 = StableGraph::raw(vec![v(1, &[]), v(1, &[])], vec![StableGraph::e(0, 1)], false);
        let ban = StableGraph::raw(vec![v(0, &[]), v(0, &[])], vec![StableGraph::e(0, 1); 3], false);
        assert!(!is_isomorphic(&g11, &ban).unwrap());
    }
}
