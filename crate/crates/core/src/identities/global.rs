//! Identities between whole DR formulas, compared in the free module of
//! decorated strata.

use std::collections::BTreeMap;

use super::push::compare;
use super::report::{CheckReport, Tally};
use crate::drclass::{assemble_dr_with, DecoratedGraph, Flavor, StrataVector};
use crate::drinvariant::{Evaluator, Specialization};
use crate::error::{Error, Result};
use crate::exactmath::bernoulli::{regularize_vars, substitute_bernoulli_var, BernoulliRule};
use crate::exactmath::poly::MultiPoly;
use crate::exactmath::rational::{factorial, int, Rational};
use crate::graph::canon::{canonicalize, DEFAULT_MAX_VERTICES};
use crate::graph::{enumerate_stable_graphs, StableGraph};

/// The DR formula on `(g - m, n + 2m)` with charges `a_1..a_n, k_1, -k_1, ..., k_m, -k_m`,
/// reduced modulo the charge relation of `(g, n)`.
fn split_table(g: u32, n: u32, m: u32, c_max: u32, flavor: Flavor, eval: &Evaluator) -> Result<StrataVector> {
    let base = Specialization::symbolic(g, n as usize);
    let mut legs = base.legs.clone();
    for i in 1..=m {
        let k = MultiPoly::var(&format!("k_{i}"));
        legs.push(k.clone());
        legs.push(-k);
    }
    let spec =
        Specialization::symbolic(g - m, (n + 2 * m) as usize).with_legs(legs).with_relation(base.relation.clone());
    assemble_dr_with(g - m, c_max, flavor, &spec, eval)?.to_strata()
}

fn full_table(g: u32, n: u32, c_max: u32, eval: &Evaluator) -> Result<StrataVector> {
    assemble_dr_with(g, c_max, Flavor::Full, &Specialization::symbolic(g, n as usize), eval)?.to_strata()
}

fn check_range(g: u32, n: u32) -> Result<()> {
    if g == 0 {
        return Err(Error::Domain("the identity needs genus at least 1".into()));
    }
    if 2 * g + n < 3 {
        return Err(Error::Domain(format!("M_{{{g},{n}}} is not stable")));
    }
    Ok(())
}

/// `(2 codim - deg)` applied to the DR formula of `(g, n)` equals the gluing of
/// `-(k^2/2) DR_{g-1}(b; a, k, -k)` with `k^d` replaced by `B_d`.
pub fn check_codim_minus_deg(g: u32, n: u32, c_max: u32, eval: &Evaluator) -> Result<CheckReport> {
    check_range(g, n)?;
    let mut tally = Tally::new("codim_minus_deg", format!("g={g} n={n} c_max={c_max}"));
    let mut vars = vec!["b".to_string()];
    vars.extend((1..=n).map(|i| format!("a_{i}")));
    let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let lhs = full_table(g, n, c_max, eval)?.map_coefficients(|key, p| {
        let c = DecoratedGraph::from_key(key).codim();
        p.scale(&int(2 * c as i64)) - p.euler(&refs)
    });
    let rhs = if c_max == 0 {
        StrataVector::new()
    } else {
        let weight = MultiPoly::monomial(Rational::new((-1).into(), 2.into()), &[("k_1", 2)]);
        split_table(g, n, 1, c_max - 1, Flavor::Full, eval)?
            .scale(&weight)
            .map_coefficients(|_, p| substitute_bernoulli_var(p, "k_1", BernoulliRule::Plain))
            .glue_last_pairs(n, 1)?
    };
    compare(&mut tally, "class", &lhs, &rhs);
    Ok(tally.finish())
}

/// The full DR formula equals the sum over `m` of `1/(2^m m!)` times the gluing
/// of `prod k_i` times the top-degree DR formula of `(g - m, n + 2m)`, each
/// `k_i` summed over the positive integers by zeta regularization. Also
/// cross-checks the gluing multiplicities by orbit counting.
pub fn check_topdeg_global(g: u32, n: u32, c_max: u32, eval: &Evaluator) -> Result<CheckReport> {
    check_range(g, n)?;
    let mut tally = Tally::new("topdeg_global", format!("g={g} n={n} c_max={c_max}"));
    let lhs = full_table(g, n, c_max, eval)?;
    let mut rhs = StrataVector::new();
    for m in 0..=g.min(c_max) {
        if 2 * (g - m) + n + 2 * m < 3 {
            continue;
        }
        let ks: Vec<String> = (1..=m).map(|i| format!("k_{i}")).collect();
        let krefs: Vec<&str> = ks.iter().map(|s| s.as_str()).collect();
        let prod = krefs.iter().fold(MultiPoly::one(), |acc, k| &acc * &MultiPoly::var(k));
        let norm = Rational::from_integer(factorial(m) * (1u64 << m)).recip();
        let part = split_table(g, n, m, c_max - m, Flavor::Top, eval)?
            .map_coefficients(|_, p| regularize_vars(&(p * &prod), &krefs).scale(&norm))
            .glue_last_pairs(n, m)?;
        rhs = rhs.add(&part);
    }
    compare(&mut tally, "class", &lhs, &rhs);
    for graph in enumerate_stable_graphs(g, n, c_max as usize)? {
        gluing_multiplicities(&graph, &mut tally)?;
    }
    Ok(tally.finish())
}

/// For every set `S` of edges whose removal keeps the graph connected, the
/// `2^m m!` labelings of the cut half-edges fall into orbits under the
/// automorphisms fixing `S`; each orbit has size `|Aut(G, S)| / |Aut(G'')|`
/// where `G''` is the cut graph, and the orbit sizes add up to `2^m m!`.
fn gluing_multiplicities(graph: &StableGraph, tally: &mut Tally) -> Result<()> {
    let ne = graph.num_edges();
    let n = graph.num_legs() as u32;
    for mask in 1u32..(1 << ne) {
        let s: Vec<usize> = (0..ne).filter(|e| mask >> e & 1 == 1).collect();
        let kept: Vec<_> = (0..ne).filter(|e| mask >> e & 1 == 0).map(|e| graph.edges[e]).collect();
        if !StableGraph::raw(graph.vertices.clone(), kept.clone(), false).is_connected() {
            continue;
        }
        let m = s.len();
        let labeled: Vec<_> = graph
            .edges
            .iter()
            .enumerate()
            .map(|(e, x)| {
                let l = u8::from(mask >> e & 1 == 1);
                ((x.tail, l), (x.head, l))
            })
            .collect();
        let aut_s = canonicalize(&graph.vertices, &labeled, DEFAULT_MAX_VERTICES)?.aut;
        let mut orbits: BTreeMap<_, u64> = BTreeMap::new();
        for order in permutations(m) {
            for flips in 0u32..(1 << m) {
                let mut cut =
                    DecoratedGraph::undecorated(&StableGraph::raw(graph.vertices.clone(), kept.clone(), false));
                for (i, &pos) in order.iter().enumerate() {
                    let e = graph.edges[s[pos]];
                    let (t, h) = if flips >> i & 1 == 1 { (e.head, e.tail) } else { (e.tail, e.head) };
                    cut.vertices[t].legs.push((n + 2 * i as u32 + 1, 0));
                    cut.vertices[h].legs.push((n + 2 * i as u32 + 2, 0));
                }
                for v in &mut cut.vertices {
                    v.legs.sort_unstable();
                }
                *orbits.entry(cut.key()?).or_default() += 1;
            }
        }
        let labelings = factorial(m as u32) * (1u64 << m);
        let mut total = 0u64;
        for (key, size) in &orbits {
            let aut_cut = DecoratedGraph::from_key(key).automorphism_order()?;
            let expect = aut_s / aut_cut;
            tally.check(aut_s % aut_cut == 0 && *size == expect, || {
                format!("orbit of {} has {size} labelings, expected {aut_s}/{aut_cut}", DecoratedGraph::from_key(key))
            });
            total += expect;
        }
        tally.check(labelings == total.into(), || format!("orbit sizes of {graph} add up to {total}, not {labelings}"));
    }
    Ok(())
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, m - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drinvariant::Method;
    use crate::identities::Status;

    #[test]
    fn genus_one_one_point() {
        let eval = Evaluator::new(Method::ZagierLaurent);
        for r in [check_codim_minus_deg(1, 1, 1, &eval).unwrap(), check_topdeg_global(1, 1, 1, &eval).unwrap()] {
            assert_eq!(r.status, Status::Pass, "{r}");
        }
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(3).len(), 6);
    }
}
