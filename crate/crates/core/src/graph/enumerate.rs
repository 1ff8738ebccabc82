//! Exhaustive generation of stable graphs up to isomorphism.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::iso::{canonical_form, canonical_graph};
use super::model::{Edge, StableGraph, Vertex};
use crate::error::{Error, Result};

/// Generation is exponential; refuse anything past desk scale.
pub const MAX_GENUS: u32 = 4;
pub const MAX_LEGS: u32 = 6;

/// All stable graphs of genus `g` with `n` legs and at most `max_edges` edges,
/// one canonical representative per isomorphism class, sorted by (edges, vertices, form).
pub fn enumerate_stable_graphs(g: u32, n: u32, max_edges: usize) -> Result<Vec<StableGraph>> {
    if g > MAX_GENUS || n > MAX_LEGS {
        return Err(Error::Budget(format!("(g, n) = ({g}, {n}) is beyond the enumeration bound")));
    }
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Ok(Vec::new());
    }
    let mut jobs = Vec::new();
    for nv in 1..=max_edges + 1 {
        for ne in nv - 1..=max_edges {
            let h1 = ne + 1 - nv;
            if h1 as u32 > g {
                continue;
            }
            for genera in genus_partitions(g - h1 as u32, nv) {
                jobs.push((genera, ne));
            }
        }
    }
    let found: Vec<(String, StableGraph)> = jobs
        .par_iter()
        .map(|(genera, ne)| graphs_with(genera, *ne, n))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut uniq: BTreeMap<String, StableGraph> = BTreeMap::new();
    for (k, gr) in found {
        uniq.entry(k).or_insert(gr);
    }
    let mut out: Vec<StableGraph> = uniq.into_values().collect();
    out.sort_by_cached_key(|gr| (gr.num_edges(), gr.num_vertices(), canonical_form(gr).unwrap_or_default()));
    Ok(out)
}

/// Nonincreasing sequences of `len` naturals summing to `total`.
fn genus_partitions(total: u32, len: usize) -> Vec<Vec<u32>> {
    fn rec(left: u32, len: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in (0..=left.min(max)).rev() {
            cur.push(x);
            rec(left - x, len, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, len, total, &mut Vec::new(), &mut out);
    out
}

fn graphs_with(genera: &[u32], ne: usize, n: u32) -> Result<Vec<(String, StableGraph)>> {
    let nv = genera.len();
    let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|i| (i..nv).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut choice = Vec::new();
    let mut edge_sets = Vec::new();
    fn rec(pairs: &[(usize, usize)], start: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..pairs.len() {
            cur.push(i);
            rec(pairs, i, left - 1, cur, out);
            cur.pop();
        }
    }
    rec(&pairs, 0, ne, &mut choice, &mut edge_sets);
    for es in edge_sets {
        let edges: Vec<Edge> = es.iter().map(|&i| Edge { tail: pairs[i].0, head: pairs[i].1 }).collect();
        let base =
            StableGraph::raw(genera.iter().map(|&g| Vertex { genus: g, legs: Vec::new() }).collect(), edges, false);
        if !base.is_connected() {
            continue;
        }
        let total = (nv as u64).pow(n);
        for code in 0..total {
            let mut gr = base.clone();
            let mut c = code;
            for leg in 1..=n {
                gr.vertices[(c % nv as u64) as usize].legs.push(leg);
                c /= nv as u64;
            }
            if (0..nv).all(|v| gr.is_stable_vertex(v)) {
                let canon = canonical_graph(&gr)?;
                out.push((canonical_form(&canon)?, canon));
            }
        }
    }
    Ok(out)
}
