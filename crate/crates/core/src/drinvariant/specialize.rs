//! Substituting leg and genus data for the vertex charges.

use std::collections::BTreeMap;

use super::cache::Evaluator;
use super::forms::charge_var;
use crate::error::{Error, Result};
use crate::exactmath::poly::{MultiPoly, Relation};
use crate::exactmath::rational::int;
use crate::graph::StableGraph;

/// Data for `a_v = sum_{legs at v} a_i - (2 g_v - 2 + n_v) b - delta_v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specialization {
    pub g: u32,
    pub b: MultiPoly,
    /// `a_1, ..., a_n`.
    pub legs: Vec<MultiPoly>,
    /// One integer per vertex; empty means all zero.
    pub delta: Vec<i64>,
    /// The relation of the coefficient ring results are reduced in.
    pub relation: Relation,
}

impl Specialization {
    /// Symbolic `b` and `a_1, ..., a_n`.
    pub fn symbolic(g: u32, n: usize) -> Self {
        Specialization {
            g,
            b: MultiPoly::var("b"),
            legs: (1..=n).map(|i| MultiPoly::var(&format!("a_{i}"))).collect(),
            delta: Vec::new(),
            relation: Relation::charge_sum(n, 2 * g as i64 - 2 + n as i64),
        }
    }

    pub fn numeric(g: u32, b: i64, legs: &[i64]) -> Self {
        Specialization {
            g,
            b: MultiPoly::int(b),
            legs: legs.iter().map(|&a| MultiPoly::int(a)).collect(),
            delta: Vec::new(),
            relation: Relation::charge_sum(legs.len(), 2 * g as i64 - 2 + legs.len() as i64),
        }
    }

    pub fn with_delta(mut self, delta: Vec<i64>) -> Self {
        self.delta = delta;
        self
    }

    /// Replaces the leg charges, keeping the ambient relation. Used when the
    /// charges are expressions in the variables of another moduli space.
    pub fn with_legs(mut self, legs: Vec<MultiPoly>) -> Self {
        self.legs = legs;
        self
    }

    pub fn with_relation(mut self, relation: Relation) -> Self {
        self.relation = relation;
        self
    }

    pub fn n(&self) -> usize {
        self.legs.len()
    }

    pub fn normalize(&self, p: &MultiPoly) -> MultiPoly {
        self.relation.normalize(p)
    }

    /// The charge assigned to each vertex of `g`.
    pub fn vertex_charges(&self, graph: &StableGraph) -> Result<Vec<MultiPoly>> {
        if graph.num_legs() != self.n() {
            return Err(Error::Domain(format!(
                "graph has {} markings but {} leg charges were given",
                graph.num_legs(),
                self.n()
            )));
        }
        if !self.delta.is_empty() && self.delta.len() != graph.num_vertices() {
            return Err(Error::Domain("one delta per vertex expected".into()));
        }
        if self.delta.iter().sum::<i64>() != 0 {
            return Err(Error::Domain("multidegree shifts must sum to zero".into()));
        }
        let residual = self.normalize(
            &(self.legs.iter().cloned().sum::<MultiPoly>()
                - self.b.scale(&int(2 * self.g as i64 - 2 + self.n() as i64))),
        );
        if !residual.is_zero() {
            return Err(Error::Domain(format!("charge relation violated: residual {residual}")));
        }
        Ok((0..graph.num_vertices())
            .map(|v| {
                if graph.semistable && graph.is_semistable_vertex(v) {
                    return MultiPoly::zero();
                }
                let vert = &graph.vertices[v];
                let mut a: MultiPoly = vert.legs.iter().map(|&i| self.legs[i as usize - 1].clone()).sum();
                let w = 2 * vert.genus as i64 - 2 + graph.valence(v) as i64;
                a -= &self.b.scale(&int(w));
                let d = self.delta.get(v).copied().unwrap_or(0);
                a - MultiPoly::int(d)
            })
            .collect())
    }
}

/// Substitutes the vertex charges into an invariant of `graph`.
pub fn specialize(graph: &StableGraph, value: &MultiPoly, spec: &Specialization) -> Result<MultiPoly> {
    let charges = spec.vertex_charges(graph)?;
    let subs: BTreeMap<String, MultiPoly> =
        charges.into_iter().enumerate().skip(1).map(|(v, c)| (charge_var(v), c)).collect();
    if let Some(x) = value.vars().iter().find(|x| !subs.contains_key(*x)) {
        return Err(Error::Domain(format!("unexpected variable {x} in a graph invariant")));
    }
    Ok(spec.normalize(&value.substitute_many(&subs)))
}

/// The DR coefficient attached to `graph` with `ds[e]` psi-insertions on edge `e`:
/// the specialized invariant of the subdivided graph.
pub fn dr_coeff(graph: &StableGraph, ds: &[usize], spec: &Specialization, eval: &Evaluator) -> Result<MultiPoly> {
    let sub = graph.subdivide_all(ds)?;
    let c = eval.invariant(&sub)?;
    specialize(&sub, &c, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drinvariant::invariant::Method;
    use crate::exactmath::rational::rat;

    #[test]
    fn charges_of_a_tree() {
        let g = StableGraph::raw(
            vec![StableGraph::v(1, &[1]), StableGraph::v(1, &[2, 3])],
            vec![StableGraph::e(0, 1)],
            false,
        );
        let spec = Specialization::symbolic(2, 3);
        let ch = spec.vertex_charges(&g).unwrap();
        assert_eq!(ch[0], MultiPoly::var("a_1") - MultiPoly::monomial(int(2), &[("b", 1)]));
        let d = spec.clone().with_delta(vec![3, -3]).vertex_charges(&g).unwrap();
        assert_eq!(d[0], MultiPoly::var("a_1") - MultiPoly::monomial(int(2), &[("b", 1)]) - MultiPoly::int(3));
        assert!(spec.with_delta(vec![1, 0]).vertex_charges(&g).is_err());
    }

    #[test]
    fn numeric_relation_is_checked() {
        let g = StableGraph::smooth(1, 2);
        assert!(Specialization::numeric(1, 1, &[1, 1]).vertex_charges(&g).is_ok());
        assert!(Specialization::numeric(1, 1, &[1, 2]).vertex_charges(&g).is_err());
    }

    #[test]
    fn dr_coefficients() {
        let eval = Evaluator::new(Method::ZagierLaurent);
        let pt = StableGraph::smooth(1, 1);
        assert_eq!(dr_coeff(&pt, &[], &Specialization::symbolic(1, 1), &eval).unwrap(), MultiPoly::one());
        let lp = StableGraph::raw(vec![StableGraph::v(0, &[1])], vec![StableGraph::e(0, 0)], false);
        let spec = Specialization::symbolic(1, 1);
        assert_eq!(dr_coeff(&lp, &[0], &spec, &eval).unwrap(), MultiPoly::constant(rat(-1, 12)));
        let sub = lp.subdivide(0, 1).unwrap();
        let oracle = Evaluator::new(Method::Oracle);
        let expect = specialize(&sub, &oracle.invariant(&sub).unwrap(), &spec).unwrap();
        assert_eq!(dr_coeff(&lp, &[1], &spec, &eval).unwrap(), expect);
    }
}
