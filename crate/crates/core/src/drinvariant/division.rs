//! Spanning-tree formula evaluated by clearing denominators.
//!
//! Every tree term is multiplied by the product `D` of all distinct cycle forms,
//! which turns it into a power series. Only the part of `z`-degree
//! `2|E| + deg D` of the summed numerator matters; dividing it exactly by `D`
//! gives the degree-`2|E|` part of the (regular) total, whose `prod z_e^2`
//! coefficient is the answer.

use super::forms::{charge_sum, TreeData};
use super::laurent::Flavor;
use crate::error::{Error, Result};
use crate::exactmath::poly::MultiPoly;
use crate::exactmath::rational::{factorial, int, Rational};
use crate::exactmath::series::bernoulli_gf_coeffs;
use crate::graph::StableGraph;

fn zvar(e: usize) -> String {
    format!("z_{e}")
}

/// Sign-normalized form: first nonzero coefficient positive. Returns the sign flipped out.
fn normalize(form: &[i64]) -> (Vec<i64>, i64) {
    let lead = form.iter().find(|&&c| c != 0).copied().unwrap_or(1);
    let s = lead.signum();
    (form.iter().map(|c| c * s).collect(), s)
}

fn form_poly(form: &[i64]) -> MultiPoly {
    form.iter().enumerate().filter(|(_, &c)| c != 0).map(|(e, &c)| MultiPoly::monomial(int(c), &[(&zvar(e), 1)])).sum()
}

pub(crate) fn evaluate(g: &StableGraph, flavor: Flavor) -> Result<MultiPoly> {
    let n = g.num_edges();
    let nv = g.num_vertices();
    let trees = TreeData::all(g)?;
    let zs: Vec<String> = (0..n).map(zvar).collect();
    let zrefs: Vec<&str> = zs.iter().map(|s| s.as_str()).collect();
    let is_z = |v: &str| u32::from(v.starts_with("z_"));

    let mut distinct: Vec<Vec<i64>> = Vec::new();
    for td in &trees {
        for e in 0..n {
            if let Some(f) = &td.cycles.cycle[e] {
                let (nf, _) = normalize(f);
                if !distinct.contains(&nf) {
                    distinct.push(nf);
                }
            }
        }
    }
    let k = (2 * n + distinct.len()) as u32;

    let mut numerator = MultiPoly::zero();
    for td in &trees {
        let mut term = MultiPoly::one();
        let mut mine: Vec<Vec<i64>> = Vec::new();
        for e in 0..n {
            let Some(f) = &td.cycles.cycle[e] else { continue };
            let (nf, s) = normalize(f);
            mine.push(nf);
            term = term.scale(&int(s));
            term = term.mul_truncated(&MultiPoly::var(&zvar(e)), &is_z, k);
            if flavor == Flavor::Full {
                let l = form_poly(f);
                let coeffs = bernoulli_gf_coeffs(k as usize);
                let mut b = MultiPoly::zero();
                let mut power = MultiPoly::one();
                for (j, c) in coeffs.iter().enumerate() {
                    if j > 0 {
                        power = power.mul_truncated(&l, &is_z, k);
                    }
                    b += power.scale(c);
                }
                term = term.mul_truncated(&b, &is_z, k);
            }
        }
        for f in &distinct {
            if !mine.contains(f) {
                term = term.mul_truncated(&form_poly(f), &is_z, k);
            }
        }
        for &e in &td.tree {
            let a = charge_sum(nv, td.cycles.head_side[e].as_ref().expect("tree edge"));
            let az = &a * &MultiPoly::var(&zvar(e));
            let mut ex = MultiPoly::zero();
            let mut power = MultiPoly::one();
            for j in 0..=k {
                if j > 0 {
                    power = power.mul_truncated(&az, &is_z, k);
                }
                ex += power.scale(&Rational::from_integer(factorial(j)).recip());
            }
            term = term.mul_truncated(&ex, &is_z, k);
        }
        numerator += term.part_of_degree_in(&zrefs, k);
    }

    let mut quotient = numerator;
    for f in &distinct {
        let lead = f.iter().position(|&c| c != 0).expect("nonzero form");
        quotient = quotient
            .div_exact_linear(&form_poly(f), &zvar(lead))
            .map_err(|e| Error::Division(format!("cycle form does not divide the numerator: {e}")))?;
    }
    let mut result = quotient;
    for z in &zs {
        result = result.coeff_of(z, 2);
    }
    if n % 2 == 1 {
        result = -result;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::rat;

    #[test]
    fn anchors() {
        let lp = StableGraph::raw(vec![StableGraph::v(0, &[1])], vec![StableGraph::e(0, 0)], false);
        assert_eq!(evaluate(&lp, Flavor::Full).unwrap(), MultiPoly::constant(rat(-1, 12)));
        assert!(evaluate(&lp, Flavor::Top).unwrap().is_zero());
        let t =
            StableGraph::raw(vec![StableGraph::v(1, &[1]), StableGraph::v(1, &[])], vec![StableGraph::e(0, 1)], false);
        assert_eq!(evaluate(&t, Flavor::Full).unwrap(), MultiPoly::monomial(rat(-1, 2), &[("x_1", 2)]));
    }
}
