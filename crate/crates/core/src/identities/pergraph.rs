//! Identities between graph invariants of a single graph and its subgraphs.

use std::collections::BTreeMap;

use super::report::{CheckReport, Tally};
use crate::drinvariant::{cg_top, cg_zagier, charge_var, specialize, Evaluator, Specialization, Strategy};
use crate::error::{Error, Result};
use crate::exactmath::bernoulli::regularize_vars;
use crate::exactmath::interp::{interpolate_simplex, simplex_points, validate};
use crate::exactmath::poly::{MultiPoly, Relation};
use crate::exactmath::rational::{int, Rational};
use crate::graph::{StableGraph, Vertex};

/// `p` with the charges of the endpoints of the edges in `cut` shifted by
/// `+k_i` (tail) and `-k_i` (head), multiplied by `prod k_i`, and summed over
/// positive `k_i` by zeta regularization.
fn twist_and_sum(graph: &StableGraph, cut: &[usize], p: &MultiPoly) -> MultiPoly {
    let mut subs: BTreeMap<String, MultiPoly> = BTreeMap::new();
    let ks: Vec<String> = (1..=cut.len()).map(|i| format!("k_{i}")).collect();
    for (k, &e) in ks.iter().zip(cut) {
        let edge = graph.edges[e];
        for (v, sign) in [(edge.tail, 1), (edge.head, -1)] {
            if v > 0 {
                let entry = subs.entry(charge_var(v)).or_insert_with(|| MultiPoly::var(&charge_var(v)));
                *entry += MultiPoly::monomial(int(sign), &[(k, 1)]);
            }
        }
    }
    let prod = ks.iter().fold(MultiPoly::one(), |acc, k| &acc * &MultiPoly::var(k));
    let krefs: Vec<&str> = ks.iter().map(|s| s.as_str()).collect();
    regularize_vars(&(&p.substitute_many(&subs) * &prod), &krefs)
}

/// Edge sets whose removal leaves the graph connected, with the remaining graph.
fn connected_cuts(graph: &StableGraph) -> Vec<(Vec<usize>, StableGraph)> {
    let ne = graph.num_edges();
    (0u32..(1 << ne))
        .filter_map(|mask| {
            let cut: Vec<usize> = (0..ne).filter(|e| mask >> e & 1 == 1).collect();
            let kept = (0..ne).filter(|e| mask >> e & 1 == 0).map(|e| graph.edges[e]).collect();
            let rest = StableGraph::raw(graph.vertices.clone(), kept, graph.semistable);
            rest.is_connected().then_some((cut, rest))
        })
        .collect()
}

/// `C(G)` equals the sum over connected cuts `S` of the twisted, regularized
/// top-degree invariant of `G \ S`.
pub fn check_topdeg_per_graph(graph: &StableGraph, strategy: Strategy) -> Result<CheckReport> {
    let mut tally = Tally::new("topdeg_per_graph", format!("{graph} {strategy:?}"));
    let lhs = cg_zagier(graph, strategy)?.value;
    let mut rhs = MultiPoly::zero();
    for (cut, rest) in connected_cuts(graph) {
        rhs += twist_and_sum(graph, &cut, &cg_top(&rest, strategy)?.value);
    }
    tally.check(lhs == rhs, || format!("C = {lhs}, cut sum = {rhs}"));
    Ok(tally.finish())
}

/// The inverse relation: the top-degree invariant is the signed sum over
/// connected cuts of the twisted, regularized full invariants.
pub fn check_corollary_inversion(graph: &StableGraph, strategy: Strategy) -> Result<CheckReport> {
    let mut tally = Tally::new("corollary_inversion", format!("{graph} {strategy:?}"));
    let lhs = cg_top(graph, strategy)?.value;
    let mut rhs = MultiPoly::zero();
    for (cut, rest) in connected_cuts(graph) {
        let term = twist_and_sum(graph, &cut, &cg_zagier(&rest, strategy)?.value);
        rhs += if cut.len() % 2 == 0 { term } else { -term };
    }
    tally.check(lhs == rhs, || format!("top part = {lhs}, signed cut sum = {rhs}"));
    Ok(tally.finish())
}

/// The auxiliary congruence for `graph` with its current markings, modulo
/// the cube of `T = a_{n+1} - b`:
/// `T [sum_w (2g_w-2+n_w) b P_w - sum_i a_i P_i] = T^2 (1 - deg) C`.
pub fn check_aux_lemma(graph: &StableGraph, strategy: Strategy) -> Result<CheckReport> {
    let mut tally = Tally::new("aux_lemma", format!("{graph}"));
    let n = graph.num_legs();
    let g = graph.genus()?;
    let c = cg_zagier(graph, strategy)?.value;
    let nv = graph.num_vertices();
    let xs: Vec<String> = (1..nv).map(charge_var).collect();
    let xrefs: Vec<&str> = xs.iter().map(|s| s.as_str()).collect();
    let t = MultiPoly::var("T");
    let b = MultiPoly::var("b");
    let leg = |i: u32| MultiPoly::var(&format!("a_{i}"));
    let weight = |v: usize| {
        if graph.semistable && graph.is_semistable_vertex(v) {
            0
        } else {
            2 * graph.vertices[v].genus as i64 - 2 + graph.valence(v) as i64
        }
    };
    // T + sum_v a_v = 0, i.e. sum a_i - (2g-2+n) b + T = 0.
    let m = 2 * g as i64 - 2 + n as i64;
    let (relation, order_var) = if n > 0 {
        let form = (1..=n as u32).map(leg).sum::<MultiPoly>() - b.scale(&int(m)) + t.clone();
        (Relation::new(form, "a_1")?, "T")
    } else {
        if m == 0 {
            return Err(Error::Domain("the congruence is empty without markings in genus 1".into()));
        }
        (Relation::new(t.clone() - b.scale(&int(m)), "T")?, "b")
    };
    let charges: Vec<MultiPoly> = (0..nv)
        .map(|v| {
            if graph.semistable && graph.is_semistable_vertex(v) {
                return MultiPoly::zero();
            }
            graph.vertices[v].legs.iter().map(|&i| leg(i)).sum::<MultiPoly>() - b.scale(&int(weight(v)))
        })
        .collect();
    let at = |shift: Option<usize>, p: &MultiPoly| {
        let subs: BTreeMap<String, MultiPoly> = (1..nv)
            .map(|v| {
                let mut a = charges[v].clone();
                if shift == Some(v) {
                    a += &t;
                }
                (charge_var(v), a)
            })
            .collect();
        relation.normalize(&p.substitute_many(&subs))
    };
    let mut lhs = MultiPoly::zero();
    for w in 0..nv {
        let k = weight(w);
        if k != 0 {
            lhs += &(&b * &at(Some(w), &c)).scale(&int(k));
        }
        for &i in &graph.vertices[w].legs {
            lhs -= &(&relation.normalize(&leg(i)) * &at(Some(w), &c));
        }
    }
    let lhs = relation.normalize(&(&t * &lhs));
    let rhs = relation.normalize(&(&(&t * &t) * &at(None, &(c.clone() - c.euler(&xrefs)))));
    let diff = (lhs - rhs).truncate_in(&[order_var], 2);
    tally.check(diff.is_zero(), || format!("difference {diff} modulo {order_var}^3"));
    Ok(tally.finish())
}

/// All ways of placing markings `1..=n` on the non-semistable vertices of
/// `graph` (ignoring its current markings) that keep every vertex stable.
pub fn leg_assignments(graph: &StableGraph, n: u32) -> Vec<StableGraph> {
    let carriers: Vec<usize> =
        (0..graph.num_vertices()).filter(|&v| !(graph.semistable && graph.is_semistable_vertex(v))).collect();
    let bare: Vec<Vertex> = graph.vertices.iter().map(|v| Vertex { genus: v.genus, legs: vec![] }).collect();
    let mut out = Vec::new();
    let total = (carriers.len() as u64).pow(n);
    for code in 0..total {
        let mut vs = bare.clone();
        let mut c = code;
        for i in 1..=n {
            vs[carriers[(c % carriers.len() as u64) as usize]].legs.push(i);
            c /= carriers.len() as u64;
        }
        let h = StableGraph::raw(vs, graph.edges.clone(), graph.semistable);
        let stable = carriers.iter().all(|&v| 2 * h.vertices[v].genus as i64 - 2 + h.valence(v) as i64 > 0);
        if stable {
            out.push(h);
        }
    }
    out
}

/// Integer charges satisfying the charge relation of `(g, n)` with `b = 1`.
pub fn sample_charges(g: u32, n: usize) -> (i64, Vec<i64>) {
    let b = 1;
    if n == 0 {
        return (0, vec![]);
    }
    let mut legs: Vec<i64> = (1..n as i64).map(|i| if i % 2 == 1 { i + 1 } else { -i }).collect();
    legs.insert(0, (2 * g as i64 - 2 + n as i64) * b - legs.iter().sum::<i64>());
    (b, legs)
}

/// The DR coefficient of `graph` with multidegree shifts `delta` is a
/// polynomial of degree at most `2|E|` in the shifts: interpolated from a
/// simplex stencil of numeric samples, validated on every shift vector in
/// `[-3, 3]^V` with zero sum, and compared with the symbolic substitution.
pub fn check_delta_polynomiality(graph: &StableGraph, eval: &Evaluator, reference: Strategy) -> Result<CheckReport> {
    let mut tally = Tally::new("unidr_delta", format!("{graph}"));
    let g = graph.genus()?;
    let (b, legs) = sample_charges(g, graph.num_legs());
    let spec = Specialization::numeric(g, b, &legs);
    let stable: Vec<usize> =
        (0..graph.num_vertices()).filter(|&v| !(graph.semistable && graph.is_semistable_vertex(v))).collect();
    let nv = graph.num_vertices();
    let vars: Vec<String> = stable.iter().skip(1).map(|v| format!("d_{v}")).collect();
    let degree = 2 * graph.num_edges() as u32;
    let value = eval.invariant(graph)?;
    let sample = |free: &[i64]| -> Result<Rational> {
        let mut delta = vec![0i64; nv];
        for (&v, &d) in stable.iter().skip(1).zip(free) {
            delta[v] = d;
        }
        delta[stable[0]] = -free.iter().sum::<i64>();
        let p = specialize(graph, &value, &spec.clone().with_delta(delta))?;
        Ok(p.constant_term())
    };

    let offset = vec![-3i64; vars.len()];
    let mut stencil = BTreeMap::new();
    for x in simplex_points(vars.len(), degree) {
        let pt: Vec<i64> = x.iter().zip(&offset).map(|(a, o)| a + o).collect();
        stencil.insert(pt.clone(), sample(&pt)?);
    }
    let fitted = interpolate_simplex(&vars, degree, &offset, &stencil)?;

    let mut boxed = BTreeMap::new();
    for pt in box_points(vars.len(), 3) {
        if (-pt.iter().sum::<i64>()).abs() <= 3 {
            boxed.insert(pt.clone(), sample(&pt)?);
        }
    }
    let check = validate(&fitted, &vars, &boxed);
    tally.count(boxed.len());
    tally.check(check.is_ok(), || check.as_ref().err().map(|e| e.to_string()).unwrap_or_default());

    // Symbolic shifts d_v on top of the numeric charges, from an independent evaluation.
    let charges = spec.vertex_charges(graph)?;
    let sum_free: MultiPoly = vars.iter().map(|v| MultiPoly::var(v)).sum();
    let subs: BTreeMap<String, MultiPoly> = (1..nv)
        .map(|v| {
            let shift = if graph.semistable && graph.is_semistable_vertex(v) {
                MultiPoly::zero()
            } else if v == stable[0] {
                -sum_free.clone()
            } else {
                MultiPoly::var(&format!("d_{v}"))
            };
            (charge_var(v), &charges[v] - &shift)
        })
        .collect();
    let symbolic = cg_zagier(graph, reference)?.value.substitute_many(&subs);
    let deg = symbolic.total_degree().unwrap_or(0);
    tally.check(deg <= degree, || format!("degree {deg} in the shifts exceeds {degree}"));
    tally.check(symbolic == fitted, || format!("interpolant {fitted} vs substitution {symbolic}"));
    Ok(tally.finish())
}

fn box_points(m: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (-r..=r).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_graph() -> StableGraph {
        StableGraph::raw(vec![StableGraph::v(0, &[1])], vec![StableGraph::e(0, 0)], false)
    }

    fn edge() -> StableGraph {
        StableGraph::raw(vec![StableGraph::v(1, &[1]), StableGraph::v(1, &[])], vec![StableGraph::e(0, 1)], false)
    }

    #[test]
    fn small_graphs() {
        for g in [loop_graph(), edge()] {
            for s in [Strategy::Laurent, Strategy::Division] {
                for r in [
                    check_topdeg_per_graph(&g, s).unwrap(),
                    check_corollary_inversion(&g, s).unwrap(),
                    check_aux_lemma(&g, s).unwrap(),
                ] {
                    assert!(r.passed() && r.witness.is_none(), "{r}");
                }
            }
        }
    }

    #[test]
    fn loop_cut_is_minus_one_twelfth() {
        let g = loop_graph();
        let p = twist_and_sum(&g, &[0], &MultiPoly::one());
        assert_eq!(p, MultiPoly::constant(crate::exactmath::rational::rat(-1, 12)));
    }

    #[test]
    fn delta_shifts() {
        let eval = Evaluator::new(crate::drinvariant::Method::ZagierDivision);
        let banana = StableGraph::raw(
            vec![StableGraph::v(0, &[1]), StableGraph::v(0, &[2])],
            vec![StableGraph::e(0, 1), StableGraph::e(0, 1), StableGraph::e(0, 1)],
            false,
        );
        for g in [edge(), banana] {
            let r = check_delta_polynomiality(&g, &eval, Strategy::Laurent).unwrap();
            assert!(r.witness.is_none(), "{r}");
        }
    }

    #[test]
    fn assignments_respect_stability() {
        let e = edge();
        // Two markings on two genus-1 vertices: all four placements are stable.
        assert_eq!(leg_assignments(&e, 2).len(), 4);
        let l = loop_graph();
        assert_eq!(leg_assignments(&l, 1).len(), 1);
        assert_eq!(leg_assignments(&l, 0).len(), 0);
    }
}
