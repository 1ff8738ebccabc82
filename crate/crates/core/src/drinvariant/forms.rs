//! Per-tree data shared by the evaluators, and vertex-charge variables.

use crate::error::Result;
use crate::exactmath::poly::{MultiPoly, Relation};
use crate::graph::{cycle_data, spanning_trees, CycleData, StableGraph};

/// Name of the charge variable of vertex `v`.
pub fn charge_var(v: usize) -> String {
    format!("x_{v}")
}

/// `sum_v x_v = 0`, eliminating `x_0`.
pub fn charge_relation(nv: usize) -> Relation {
    let form: MultiPoly = (0..nv).map(|v| MultiPoly::var(&charge_var(v))).sum();
    Relation::new(form, &charge_var(0)).expect("linear relation")
}

/// Sum of charge variables over a vertex set, reduced modulo the charge relation.
pub fn charge_sum(nv: usize, vs: &[usize]) -> MultiPoly {
    let p: MultiPoly = vs.iter().map(|&v| MultiPoly::var(&charge_var(v))).sum();
    charge_relation(nv).normalize(&p)
}

#[derive(Clone, Debug)]
pub struct TreeData {
    pub tree: Vec<usize>,
    pub cycles: CycleData,
}

impl TreeData {
    pub fn all(g: &StableGraph) -> Result<Vec<TreeData>> {
        spanning_trees(g)?.into_iter().map(|t| Ok(TreeData { cycles: cycle_data(g, &t)?, tree: t })).collect()
    }

    pub fn first(g: &StableGraph) -> Result<TreeData> {
        let t = spanning_trees(g)?.into_iter().next().expect("connected graph has a tree");
        Ok(TreeData { cycles: cycle_data(g, &t)?, tree: t })
    }

    pub fn in_tree(&self, e: usize) -> bool {
        self.tree.contains(&e)
    }
}
