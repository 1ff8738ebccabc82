//! Timing rows comparing the three ways of computing `C(G)`.

use std::time::Instant;

use serde::Serialize;

use crate::drinvariant::{cg_with, Method, OracleParams};
use crate::error::Result;
use crate::graph::StableGraph;

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub graph: String,
    pub vertices: usize,
    pub edges: usize,
    pub method: Method,
    pub micros: u128,
    pub terms: usize,
    /// `None` for the zero polynomial.
    pub degree: Option<u32>,
}

pub const CSV_HEADER: &str = "graph,vertices,edges,method,micros,terms,degree";

impl BenchRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.graph,
            self.vertices,
            self.edges,
            self.method,
            self.micros,
            self.terms,
            self.degree.map(|d| d.to_string()).unwrap_or_default()
        )
    }
}

/// Times each method on each graph, keeping the best of `repeat` runs.
/// No cache is involved.
pub fn bench_rows(
    graphs: &[StableGraph],
    methods: &[Method],
    repeat: usize,
    oracle: &OracleParams,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for g in graphs {
        for &method in methods {
            let mut best = u128::MAX;
            let mut value = None;
            for _ in 0..repeat.max(1) {
                let start = Instant::now();
                let inv = cg_with(g, method, oracle)?;
                best = best.min(start.elapsed().as_micros());
                value = Some(inv.value);
            }
            let value = value.expect("at least one run");
            rows.push(BenchRow {
                graph: g.to_string(),
                vertices: g.num_vertices(),
                edges: g.num_edges(),
                method,
                micros: best,
                terms: value.len(),
                degree: value.total_degree(),
            });
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.csv());
        s.push('\n');
    }
    s
}
