//! Pushforward along the map forgetting one marking, on decorated strata.
//!
//! On a stable carrier vertex the kappa classes are pulled back as
//! `kappa_a = pi^* kappa_a + psi^a` and powers of the forgotten psi become
//! kappa classes; without any such power the string rule lowers one psi
//! exponent at the vertex. On a genus-0 trivalent carrier the vertex is
//! contracted.

use std::collections::BTreeMap;

use super::strata::{DecoratedEdge, DecoratedGraph, StrataVector};
use super::table::{assemble_dr_with, Flavor};
use crate::drinvariant::{Evaluator, Specialization};
use crate::error::{Error, Result};
use crate::exactmath::interp::fit_consecutive;
use crate::exactmath::poly::MultiPoly;
use crate::exactmath::rational::{int, Rational};
use crate::graph::Side;

/// Forgets marking `leg`; markings above it shift down by one.
pub fn forget_pushforward(v: &StrataVector, leg: u32) -> Result<StrataVector> {
    let mut out = StrataVector::new();
    for (key, coeff) in v.iter() {
        let g = DecoratedGraph::from_key(key);
        for (h, c) in push_stratum(&g, leg)? {
            out.add_term(&h, &coeff.scale(&c))?;
        }
    }
    Ok(out)
}

fn push_stratum(g: &DecoratedGraph, leg: u32) -> Result<Vec<(DecoratedGraph, Rational)>> {
    let v0 = g.leg_vertex(leg).ok_or_else(|| Error::Domain(format!("no marking {leg} to forget")))?;
    let mut base = g.clone();
    let s = {
        let legs = &mut base.vertices[v0].legs;
        let i = legs.iter().position(|l| l.0 == leg).expect("leg present");
        legs.remove(i).1
    };
    for vert in &mut base.vertices {
        for l in &mut vert.legs {
            if l.0 > leg {
                l.0 -= 1;
            }
        }
    }
    let halves = base.half_edges_at(v0);
    let genus = base.vertices[v0].genus;
    let valence = base.vertices[v0].legs.len() + halves.len();
    if 2 * genus as i64 - 2 + valence as i64 > 0 {
        Ok(push_stable(base, v0, s, valence))
    } else {
        contract(base, v0, s).map(|x| x.into_iter().collect())
    }
}

fn push_stable(base: DecoratedGraph, v0: usize, s: u32, valence: usize) -> Vec<(DecoratedGraph, Rational)> {
    let kappa = base.vertices[v0].kappa.clone();
    let kappa0 = int(2 * base.vertices[v0].genus as i64 - 2 + valence as i64);
    let mut out = Vec::new();
    for mask in 0u32..(1 << kappa.len()) {
        let taken: u32 = (0..kappa.len()).filter(|i| mask >> i & 1 == 1).map(|i| kappa[i]).sum();
        let rest: Vec<u32> = (0..kappa.len()).filter(|i| mask >> i & 1 == 0).map(|i| kappa[i]).collect();
        let total = s + taken;
        let mut h = base.clone();
        h.vertices[v0].kappa = rest;
        if total >= 2 {
            h.vertices[v0].kappa.push(total - 1);
            h.vertices[v0].kappa.sort_unstable();
            out.push((h, int(1)));
        } else if total == 1 {
            out.push((h, kappa0.clone()));
        } else {
            for i in 0..h.vertices[v0].legs.len() {
                if h.vertices[v0].legs[i].1 > 0 {
                    let mut k = h.clone();
                    k.vertices[v0].legs[i].1 -= 1;
                    out.push((k, int(1)));
                }
            }
            for (e, side) in h.half_edges_at(v0) {
                if *h.clone().psi_mut(e, side) > 0 {
                    let mut k = h.clone();
                    *k.psi_mut(e, side) -= 1;
                    out.push((k, int(1)));
                }
            }
        }
    }
    out
}

/// Contracts the genus-0 vertex `v0`, left with exactly two special points.
fn contract(mut base: DecoratedGraph, v0: usize, s: u32) -> Result<Option<(DecoratedGraph, Rational)>> {
    let halves = base.half_edges_at(v0);
    let vert = &base.vertices[v0];
    let decorated = s > 0
        || !vert.kappa.is_empty()
        || vert.legs.iter().any(|l| l.1 > 0)
        || halves.iter().any(|&(e, side)| *base.clone().psi_mut(e, side) > 0);
    if decorated {
        return Ok(None);
    }
    let other = |e: &DecoratedEdge, side: Side| match side {
        Side::Tail => (e.head, e.psi_head),
        Side::Head => (e.tail, e.psi_tail),
    };
    match (vert.legs.as_slice(), halves.as_slice()) {
        ([(l, _)], [(e, side)]) => {
            let l = *l;
            let (w, psi) = other(&base.edges[*e], *side);
            base.edges.remove(*e);
            base.vertices[w].legs.push((l, psi));
            base.vertices[w].legs.sort_unstable();
        }
        ([], [(e1, s1), (e2, s2)]) if e1 != e2 => {
            let (a, pa) = other(&base.edges[*e1], *s1);
            let (b, pb) = other(&base.edges[*e2], *s2);
            let (hi, lo) = if e1 > e2 { (*e1, *e2) } else { (*e2, *e1) };
            base.edges.remove(hi);
            base.edges.remove(lo);
            base.edges.push(DecoratedEdge { tail: a, head: b, psi_tail: pa, psi_head: pb });
        }
        _ => return Err(Error::Domain("forgetting this marking leaves an unstable curve".into())),
    }
    base.remove_vertex(v0);
    Ok(Some((base, int(1))))
}

/// The pushforward of the codimension-`c` part of the DR table of `(g, n+1)`
/// at numeric charges `b` and `a_2, ..., a_n`, as a polynomial in `var`
/// standing for `a_{n+1}`. Obtained by sampling integer values of `a_{n+1}`
/// (with `a_1` fixed by the charge relation) and interpolating; two extra
/// samples validate the degree bound `2c`.
pub fn push_sweep(g: u32, n: u32, c: u32, b: i64, rest: &[i64], var: &str, eval: &Evaluator) -> Result<StrataVector> {
    if rest.len() + 1 != n as usize {
        return Err(Error::Domain(format!("expected {} charges a_2..a_n", n.saturating_sub(1))));
    }
    if n == 0 {
        return Err(Error::Domain("at least one marking must remain".into()));
    }
    let points = 2 * c as i64 + 3;
    let start = -(c as i64) - 1;
    let mut samples: BTreeMap<_, Vec<Rational>> = BTreeMap::new();
    for (step, x) in (start..start + points).enumerate() {
        let m = 2 * g as i64 - 2 + n as i64 + 1;
        let a1 = m * b - rest.iter().sum::<i64>() - x;
        let mut legs = vec![a1];
        legs.extend_from_slice(rest);
        legs.push(x);
        let spec = Specialization::numeric(g, b, &legs);
        let table = assemble_dr_with(g, c, Flavor::Full, &spec, eval)?.codim_part(c);
        let pushed = forget_pushforward(&table.to_strata()?, n + 1)?;
        for (key, val) in pushed.iter() {
            let col =
                samples.entry(key.clone()).or_insert_with(|| vec![Rational::from_integer(0.into()); points as usize]);
            col[step] = val.constant_term();
        }
    }
    let mut out = StrataVector::new();
    for (key, values) in samples {
        let coeffs = fit_consecutive(start, &values);
        if coeffs.len() > 2 * c as usize + 1 {
            return Err(Error::Interpolation(format!("degree in {var} exceeds {}", 2 * c)));
        }
        let poly: MultiPoly =
            coeffs.iter().enumerate().map(|(k, q)| MultiPoly::monomial(q.clone(), &[(var, k as u32)])).sum();
        out.add_key(key, poly);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drclass::strata::DecoratedVertex;

    fn vert(genus: u32, legs: &[(u32, u32)], kappa: &[u32]) -> DecoratedVertex {
        DecoratedVertex { genus, legs: legs.to_vec(), kappa: kappa.to_vec() }
    }

    fn single(g: DecoratedGraph) -> StrataVector {
        let mut v = StrataVector::new();
        v.add_term(&g, &MultiPoly::one()).unwrap();
        v
    }

    #[test]
    fn dilaton_and_string() {
        let psi2 = DecoratedGraph { vertices: vec![vert(1, &[(1, 0), (2, 1)], &[])], edges: vec![] };
        let pushed = forget_pushforward(&single(psi2), 2).unwrap();
        let triv = DecoratedGraph { vertices: vec![vert(1, &[(1, 0)], &[])], edges: vec![] };
        assert_eq!(pushed.get(&triv.key().unwrap()), MultiPoly::int(1));
        assert_eq!(pushed.len(), 1);

        let plain = DecoratedGraph { vertices: vec![vert(1, &[(1, 1), (2, 0)], &[])], edges: vec![] };
        let pushed = forget_pushforward(&single(plain), 2).unwrap();
        assert_eq!(pushed.get(&triv.key().unwrap()), MultiPoly::int(1));

        let nothing = DecoratedGraph { vertices: vec![vert(1, &[(1, 0), (2, 0)], &[])], edges: vec![] };
        assert!(forget_pushforward(&single(nothing), 2).unwrap().is_empty());
    }

    #[test]
    fn kappa_pullback() {
        // kappa_1 psi_2 on M_{1,2}: (pi^* kappa_1 + psi_2) psi_2 pushes to kappa_0 kappa_1 + kappa_1.
        let g = DecoratedGraph { vertices: vec![vert(1, &[(1, 0), (2, 1)], &[1])], edges: vec![] };
        let pushed = forget_pushforward(&single(g), 2).unwrap();
        let k1 = DecoratedGraph { vertices: vec![vert(1, &[(1, 0)], &[1])], edges: vec![] };
        assert_eq!(pushed.get(&k1.key().unwrap()), MultiPoly::int(2));
    }

    #[test]
    fn bubble_contraction() {
        // A rational bubble carrying markings 1 and 3, attached to a genus-1 vertex with psi on its side.
        let g = DecoratedGraph {
            vertices: vec![vert(0, &[(1, 0), (3, 0)], &[]), vert(1, &[(2, 0)], &[])],
            edges: vec![DecoratedEdge { tail: 0, head: 1, psi_tail: 0, psi_head: 2 }],
        };
        let pushed = forget_pushforward(&single(g), 3).unwrap();
        let expect = DecoratedGraph { vertices: vec![vert(1, &[(1, 2), (2, 0)], &[])], edges: vec![] };
        assert_eq!(pushed.get(&expect.key().unwrap()), MultiPoly::int(1));

        let chain = DecoratedGraph {
            vertices: vec![vert(1, &[(1, 0)], &[]), vert(0, &[(2, 0)], &[]), vert(1, &[], &[])],
            edges: vec![
                DecoratedEdge { tail: 0, head: 1, psi_tail: 1, psi_head: 0 },
                DecoratedEdge { tail: 1, head: 2, psi_tail: 0, psi_head: 0 },
            ],
        };
        let pushed = forget_pushforward(&single(chain), 2).unwrap();
        let expect = DecoratedGraph {
            vertices: vec![vert(1, &[(1, 0)], &[]), vert(1, &[], &[])],
            edges: vec![DecoratedEdge { tail: 0, head: 1, psi_tail: 1, psi_head: 0 }],
        };
        assert_eq!(pushed.get(&expect.key().unwrap()), MultiPoly::int(1));
    }
}
