//! Decorated strata and the free module they span.
//!
//! A decorated stratum is a stable graph with a psi exponent on every
//! half-edge and leg and a multiset of kappa indices on every vertex. It stands
//! for the class `j_*[prod psi^e prod kappa]`, with no automorphism factor.
//! No relations between strata are imposed: two vectors are equal only if
//! every coefficient agrees.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::poly::MultiPoly;
use crate::graph::canon::{canonicalize, CanonKey, DEFAULT_MAX_VERTICES};
use crate::graph::{Side, StableGraph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DecoratedVertex {
    pub genus: u32,
    /// `(marking, psi exponent)`, sorted by marking.
    #[serde(default)]
    pub legs: Vec<(u32, u32)>,
    /// Indices `a >= 1` of the kappa classes `kappa_a` at this vertex, sorted.
    #[serde(default)]
    pub kappa: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DecoratedEdge {
    pub tail: usize,
    pub head: usize,
    #[serde(default)]
    pub psi_tail: u32,
    #[serde(default)]
    pub psi_head: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DecoratedGraph {
    pub vertices: Vec<DecoratedVertex>,
    #[serde(default)]
    pub edges: Vec<DecoratedEdge>,
}

pub type StrataKey = CanonKey<DecoratedVertex, u32>;

impl DecoratedGraph {
    pub fn undecorated(g: &StableGraph) -> Self {
        DecoratedGraph {
            vertices: g
                .vertices
                .iter()
                .map(|v| DecoratedVertex {
                    genus: v.genus,
                    legs: v.legs.iter().map(|&l| (l, 0)).collect(),
                    kappa: vec![],
                })
                .collect(),
            edges: g
                .edges
                .iter()
                .map(|e| DecoratedEdge { tail: e.tail, head: e.head, psi_tail: 0, psi_head: 0 })
                .collect(),
        }
    }

    pub fn graph(&self) -> StableGraph {
        StableGraph::raw(
            self.vertices
                .iter()
                .map(|v| Vertex { genus: v.genus, legs: v.legs.iter().map(|l| l.0).collect() })
                .collect(),
            self.edges.iter().map(|e| StableGraph::e(e.tail, e.head)).collect(),
            false,
        )
    }

    pub fn num_legs(&self) -> usize {
        self.vertices.iter().map(|v| v.legs.len()).sum()
    }

    pub fn codim(&self) -> u32 {
        let v: u32 =
            self.vertices.iter().map(|v| v.legs.iter().map(|l| l.1).sum::<u32>() + v.kappa.iter().sum::<u32>()).sum();
        v + self.edges.iter().map(|e| 1 + e.psi_tail + e.psi_head).sum::<u32>()
    }

    pub fn leg_vertex(&self, leg: u32) -> Option<usize> {
        self.vertices.iter().position(|v| v.legs.iter().any(|l| l.0 == leg))
    }

    fn labeled_edges(&self) -> Vec<((usize, u32), (usize, u32))> {
        self.edges.iter().map(|e| ((e.tail, e.psi_tail), (e.head, e.psi_head))).collect()
    }

    pub fn key(&self) -> Result<StrataKey> {
        Ok(canonicalize(&self.vertices, &self.labeled_edges(), DEFAULT_MAX_VERTICES)?.key)
    }

    pub fn automorphism_order(&self) -> Result<u64> {
        Ok(canonicalize(&self.vertices, &self.labeled_edges(), DEFAULT_MAX_VERTICES)?.aut)
    }

    pub fn from_key(key: &StrataKey) -> Self {
        DecoratedGraph {
            vertices: key.vertices.clone(),
            edges: key
                .edges
                .iter()
                .map(|&((t, pt), (h, ph))| DecoratedEdge { tail: t, head: h, psi_tail: pt, psi_head: ph })
                .collect(),
        }
    }

    /// Joins legs `i` and `j` into an edge from the vertex of `i` to the vertex
    /// of `j`; their psi exponents move to the new half-edges. Markings above
    /// the removed ones are shifted down, preserving order.
    pub fn glue(&self, i: u32, j: u32) -> Result<Self> {
        let (vi, vj) = match (self.leg_vertex(i), self.leg_vertex(j)) {
            (Some(a), Some(b)) if i != j => (a, b),
            _ => return Err(Error::Graph(format!("cannot glue markings {i} and {j}"))),
        };
        let exp = |v: usize, l: u32| self.vertices[v].legs.iter().find(|x| x.0 == l).map(|x| x.1).unwrap_or(0);
        let mut out = self.clone();
        out.edges.push(DecoratedEdge { tail: vi, head: vj, psi_tail: exp(vi, i), psi_head: exp(vj, j) });
        for v in &mut out.vertices {
            v.legs.retain(|l| l.0 != i && l.0 != j);
            for l in &mut v.legs {
                l.0 -= u32::from(l.0 > i) + u32::from(l.0 > j);
            }
        }
        Ok(out)
    }

    /// The half-edges at `v`: edge index and side.
    pub fn half_edges_at(&self, v: usize) -> Vec<(usize, Side)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.tail == v {
                out.push((i, Side::Tail));
            }
            if e.head == v {
                out.push((i, Side::Head));
            }
        }
        out
    }

    pub fn psi_mut(&mut self, e: usize, s: Side) -> &mut u32 {
        match s {
            Side::Tail => &mut self.edges[e].psi_tail,
            Side::Head => &mut self.edges[e].psi_head,
        }
    }

    /// Removes vertex `v`, which must have no incident edges left.
    pub(crate) fn remove_vertex(&mut self, v: usize) {
        self.vertices.remove(v);
        for e in &mut self.edges {
            e.tail -= usize::from(e.tail > v);
            e.head -= usize::from(e.head > v);
        }
    }
}

impl fmt::Display for DecoratedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "[g{}", v.genus)?;
            for &(l, e) in &v.legs {
                match e {
                    0 => write!(f, " {l}")?,
                    1 => write!(f, " psi{l}")?,
                    _ => write!(f, " psi{l}^{e}")?,
                }
            }
            for k in &v.kappa {
                write!(f, " k{k}")?;
            }
            write!(f, "]")?;
        }
        for e in &self.edges {
            write!(f, " {}", e.tail)?;
            if e.psi_tail > 0 {
                write!(f, "^{}", e.psi_tail)?;
            }
            write!(f, "-{}", e.head)?;
            if e.psi_head > 0 {
                write!(f, "^{}", e.psi_head)?;
            }
        }
        Ok(())
    }
}

/// A finite linear combination of decorated strata with polynomial coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StrataVector {
    terms: BTreeMap<StrataKey, MultiPoly>,
}

impl StrataVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, g: &DecoratedGraph, c: &MultiPoly) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        self.add_key(g.key()?, c.clone());
        Ok(())
    }

    pub fn add_key(&mut self, key: StrataKey, c: MultiPoly) {
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StrataKey, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn get(&self, key: &StrataKey) -> MultiPoly {
        self.terms.get(key).cloned().unwrap_or_else(MultiPoly::zero)
    }

    pub fn map_coefficients(&self, f: impl Fn(&StrataKey, &MultiPoly) -> MultiPoly) -> Self {
        let mut out = StrataVector::new();
        for (k, c) in &self.terms {
            out.add_key(k.clone(), f(k, c));
        }
        out
    }

    pub fn scale(&self, c: &MultiPoly) -> Self {
        self.map_coefficients(|_, x| x * c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_key(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_key(k.clone(), -c.clone());
        }
        out
    }

    pub fn filter(&self, keep: impl Fn(&DecoratedGraph) -> bool) -> Self {
        StrataVector {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(&DecoratedGraph::from_key(k)))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn codim_part(&self, c: u32) -> Self {
        self.filter(|g| g.codim() == c)
    }

    /// Glues the last `m` pairs of markings out of `n + 2m`.
    pub fn glue_last_pairs(&self, n: u32, m: u32) -> Result<Self> {
        let mut out = StrataVector::new();
        for (k, c) in &self.terms {
            let mut g = DecoratedGraph::from_key(k);
            for i in (0..m).rev() {
                g = g.glue(n + 2 * i + 1, n + 2 * i + 2)?;
            }
            out.add_term(&g, c)?;
        }
        Ok(out)
    }

    /// First stratum (in key order) where the two vectors differ, with both coefficients.
    pub fn first_difference(&self, other: &Self) -> Option<(DecoratedGraph, MultiPoly, MultiPoly)> {
        let d = self.sub(other);
        d.terms.keys().next().map(|k| (DecoratedGraph::from_key(k), self.get(k), other.get(k)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_graph() -> DecoratedGraph {
        DecoratedGraph::undecorated(&StableGraph::raw(vec![StableGraph::v(0, &[1])], vec![StableGraph::e(0, 0)], false))
    }

    #[test]
    fn glue_and_codim() {
        let mut g = DecoratedGraph::undecorated(&StableGraph::smooth(0, 3));
        g.vertices[0].legs[1].1 = 2;
        let h = g.glue(2, 3).unwrap();
        assert_eq!(h.vertices[0].legs, vec![(1, 0)]);
        assert_eq!(h.edges[0].psi_tail, 2);
        assert_eq!(h.codim(), 3);
        assert!(g.glue(2, 2).is_err());
    }

    #[test]
    fn loop_sides_are_identified() {
        let mut a = loop_graph();
        a.edges[0].psi_tail = 1;
        let mut b = loop_graph();
        b.edges[0].psi_head = 1;
        assert_eq!(a.key().unwrap(), b.key().unwrap());
        assert_eq!(a.automorphism_order().unwrap(), 1);
        assert_eq!(loop_graph().automorphism_order().unwrap(), 2);
    }

    #[test]
    fn vector_cancellation() {
        let mut v = StrataVector::new();
        v.add_term(&loop_graph(), &MultiPoly::int(2)).unwrap();
        let w = v.clone();
        assert!(v.sub(&w).is_empty());
        assert_eq!(v.add(&w).get(&loop_graph().key().unwrap()), MultiPoly::int(4));
        assert!(v.first_difference(&w).is_none());
    }
}
