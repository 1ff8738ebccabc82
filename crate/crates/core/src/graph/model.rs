//! The stable graph data model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub genus: u32,
    #[serde(default)]
    pub legs: Vec<u32>,
}

/// An edge oriented from `tail` to `head`. The tail half-edge sits at `tail`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    pub fn flipped(&self) -> Edge {
        Edge { tail: self.head, head: self.tail }
    }
}

/// Which end of an edge a half-edge is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Tail,
    Head,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StableGraph {
    pub vertices: Vec<Vertex>,
    #[serde(default)]
    pub edges: Vec<Edge>,
    #[serde(default)]
    pub semistable: bool,
}

impl StableGraph {
    /// Builds and validates a graph.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self> {
        let g = StableGraph { vertices, edges, semistable: false };
        g.validate()?;
        Ok(g)
    }

    /// Single vertex of genus `g` carrying legs `1..=n`.
    pub fn smooth(g: u32, n: u32) -> Self {
        StableGraph {
            vertices: vec![Vertex { genus: g, legs: (1..=n).collect() }],
            edges: Vec::new(),
            semistable: false,
        }
    }

    /// Builds without the stability check, for intermediate constructions.
    pub fn raw(vertices: Vec<Vertex>, edges: Vec<Edge>, semistable: bool) -> Self {
        let mut g = StableGraph { vertices, edges, semistable };
        for v in &mut g.vertices {
            v.legs.sort_unstable();
        }
        g
    }

    pub fn v(genus: u32, legs: &[u32]) -> Vertex {
        Vertex { genus, legs: legs.to_vec() }
    }

    pub fn e(tail: usize, head: usize) -> Edge {
        Edge { tail, head }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_legs(&self) -> usize {
        self.vertices.iter().map(|v| v.legs.len()).sum()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for (a, b) in [(e.tail, e.head), (e.head, e.tail)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn h1(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Graph("h1 of a disconnected graph".into()));
        }
        Ok(self.edges.len() + 1 - self.vertices.len())
    }

    pub fn genus(&self) -> Result<u32> {
        Ok(self.vertices.iter().map(|v| v.genus).sum::<u32>() + self.h1()? as u32)
    }

    /// Half-edges at `v`, with loops counted twice.
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

    /// Legs plus incident half-edges.
    pub fn valence(&self, v: usize) -> usize {
        self.vertices[v].legs.len() + self.half_edges_at(v).len()
    }

    pub fn vertex_of(&self, e: usize, s: Side) -> usize {
        match s {
            Side::Tail => self.edges[e].tail,
            Side::Head => self.edges[e].head,
        }
    }

    pub fn leg_vertex(&self, leg: u32) -> Option<usize> {
        self.vertices.iter().position(|v| v.legs.contains(&leg))
    }

    /// A genus-0, legless vertex of valence 2.
    pub fn is_semistable_vertex(&self, v: usize) -> bool {
        self.vertices[v].genus == 0 && self.vertices[v].legs.is_empty() && self.valence(v) == 2
    }

    pub fn is_stable_vertex(&self, v: usize) -> bool {
        2 * self.vertices[v].genus as i64 - 2 + self.valence(v) as i64 > 0
    }

    pub fn validate(&self) -> Result<()> {
        let nv = self.vertices.len();
        if nv == 0 {
            return Err(Error::Graph("graph has no vertices".into()));
        }
        if let Some(e) = self.edges.iter().find(|e| e.tail >= nv || e.head >= nv) {
            return Err(Error::Graph(format!("edge {e:?} refers to a missing vertex")));
        }
        let mut legs: Vec<u32> = self.vertices.iter().flat_map(|v| v.legs.iter().copied()).collect();
        legs.sort_unstable();
        if legs.iter().enumerate().any(|(i, &l)| l != i as u32 + 1) {
            return Err(Error::Graph(format!("markings must be exactly 1..=n, found {legs:?}")));
        }
        if !self.is_connected() {
            return Err(Error::Graph("graph is disconnected".into()));
        }
        for v in 0..nv {
            if self.is_stable_vertex(v) {
                continue;
            }
            if self.semistable && self.is_semistable_vertex(v) {
                continue;
            }
            return Err(Error::Graph(format!("vertex {v} is unstable")));
        }
        Ok(())
    }

    /// Reverses the orientation of one edge.
    pub fn flip_edge(&self, e: usize) -> Self {
        let mut g = self.clone();
        g.edges[e] = g.edges[e].flipped();
        g
    }

    /// Reorders edges: the new edge `i` is the old edge `order[i]`.
    pub fn permute_edges(&self, order: &[usize]) -> Self {
        let mut g = self.clone();
        g.edges = order.iter().map(|&i| self.edges[i]).collect();
        g
    }

    /// Replaces edge `e` by a path of `d + 1` edges through `d` new genus-0 vertices.
    /// The first segment keeps index `e`; the others are appended in path order.
    pub fn subdivide(&self, e: usize, d: usize) -> Result<Self> {
        if e >= self.edges.len() {
            return Err(Error::Graph(format!("no edge {e}")));
        }
        if d == 0 {
            return Ok(self.clone());
        }
        let mut g = self.clone();
        let Edge { tail, head } = self.edges[e];
        let first_new = g.vertices.len();
        for _ in 0..d {
            g.vertices.push(Vertex { genus: 0, legs: Vec::new() });
        }
        g.edges[e] = Edge { tail, head: first_new };
        for k in 0..d {
            let from = first_new + k;
            let to = if k + 1 < d { first_new + k + 1 } else { head };
            g.edges.push(Edge { tail: from, head: to });
        }
        g.semistable = true;
        Ok(g)
    }

    /// Subdivides every edge `e` into `ds[e] + 1` edges.
    pub fn subdivide_all(&self, ds: &[usize]) -> Result<Self> {
        if ds.len() != self.edges.len() {
            return Err(Error::Graph("one subdivision count per edge expected".into()));
        }
        let mut g = self.clone();
        for (e, &d) in ds.iter().enumerate() {
            g = g.subdivide(e, d)?;
        }
        Ok(g)
    }

    /// Joins legs `i` and `j` into a new last edge from the carrier of `i` to that of `j`.
    /// Remaining markings are compacted to `1..` in their original order.
    pub fn glue_legs(&self, i: u32, j: u32) -> Result<Self> {
        if i == j {
            return Err(Error::Graph("cannot glue a leg to itself".into()));
        }
        let vi = self.leg_vertex(i).ok_or_else(|| Error::Graph(format!("missing marking {i}")))?;
        let vj = self.leg_vertex(j).ok_or_else(|| Error::Graph(format!("missing marking {j}")))?;
        let mut g = self.clone();
        for v in &mut g.vertices {
            v.legs.retain(|&l| l != i && l != j);
        }
        g.edges.push(Edge { tail: vi, head: vj });
        g.compact_legs();
        Ok(g)
    }

    /// Renumbers markings to `1..=n` preserving their relative order.
    pub fn compact_legs(&mut self) {
        let mut all: Vec<u32> = self.vertices.iter().flat_map(|v| v.legs.iter().copied()).collect();
        all.sort_unstable();
        for v in &mut self.vertices {
            for l in &mut v.legs {
                *l = all.binary_search(l).expect("present") as u32 + 1;
            }
            v.legs.sort_unstable();
        }
    }

    /// Applies a marking relabeling `leg -> f(leg)`.
    pub fn relabel_legs(&self, f: impl Fn(u32) -> u32) -> Self {
        let mut g = self.clone();
        for v in &mut g.vertices {
            for l in &mut v.legs {
                *l = f(*l);
            }
            v.legs.sort_unstable();
        }
        g
    }

    /// Reorders vertices: new vertex `i` is old vertex `order[i]`.
    pub fn permute_vertices(&self, order: &[usize]) -> Self {
        let mut inv = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            inv[old] = new;
        }
        StableGraph {
            vertices: order.iter().map(|&o| self.vertices[o].clone()).collect(),
            edges: self.edges.iter().map(|e| Edge { tail: inv[e.tail], head: inv[e.head] }).collect(),
            semistable: self.semistable,
        }
    }
}

impl std::fmt::Display for StableGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for v in &self.vertices {
            write!(f, "[g{}", v.genus)?;
            for l in &v.legs {
                write!(f, " {l}")?;
            }
            write!(f, "]")?;
        }
        for e in &self.edges {
            write!(f, " {}-{}", e.tail, e.head)?;
        }
        Ok(())
    }
}
