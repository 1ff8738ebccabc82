//! The reference evaluator: weighting sums at many `(charges, r)` samples,
//! fitted in `r` and then interpolated in the charges.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::forms::charge_var;
use super::weighting::ResiduePlan;
use crate::error::{Error, Result};
use crate::exactmath::interp::{eval_univariate, fit_consecutive, interpolate_simplex, simplex_points, validate};
use crate::exactmath::poly::MultiPoly;
use crate::exactmath::rational::{int, Rational};
use crate::graph::StableGraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleParams {
    /// Extra `r` samples used only for validation.
    pub validation_r: usize,
    /// How many times the `r` range may be doubled after a failed fit.
    pub max_escalations: u32,
}

impl Default for OracleParams {
    fn default() -> Self {
        OracleParams { validation_r: 2, max_escalations: 3 }
    }
}

#[derive(Clone, Debug, Default)]
pub struct OracleStats {
    pub charge_points: usize,
    pub r_samples: usize,
    pub max_r0: i64,
}

/// Constant term in `r` of the weighting sum for fixed integer charges.
pub fn constant_term_in_r(g: &StableGraph, charges: &[i64], params: &OracleParams) -> Result<(Rational, i64)> {
    let plan = ResiduePlan::new(g)?;
    constant_term_with(&plan, g, charges, params)
}

fn constant_term_with(
    plan: &ResiduePlan,
    g: &StableGraph,
    charges: &[i64],
    params: &OracleParams,
) -> Result<(Rational, i64)> {
    let ne = g.num_edges();
    let h1 = g.h1()?;
    let maxa = charges.iter().map(|a| a.abs()).max().unwrap_or(0);
    let mut r0 = 4 * ne as i64 * maxa + 6;
    // S(r) = sum prod w w' has degree <= 2|E| + h1.
    let nfit = 2 * ne + h1 + 1;
    for _ in 0..=params.max_escalations {
        let n = nfit + params.validation_r;
        let vals: Vec<BigInt> = (0..n as i64).map(|i| plan.raw_sum(charges, r0 + i)).collect::<Result<_>>()?;
        let vals: Vec<Rational> = vals.into_iter().map(Rational::from_integer).collect();
        let coeffs = fit_consecutive(r0, &vals[..nfit]);
        let ok = (nfit..n).all(|i| eval_univariate(&coeffs, &int(r0 + i as i64)) == vals[i])
            && coeffs.iter().take(h1).all(|c| c.is_zero());
        if ok {
            let c = coeffs.get(h1).cloned().unwrap_or_else(Rational::zero);
            return Ok((c / Rational::from_integer(BigInt::from(2).pow(ne as u32)), r0));
        }
        r0 *= 2;
    }
    Err(Error::Interpolation(format!(
        "weighting sum is not polynomial in r on the sampled range for charges {charges:?}"
    )))
}

/// `C(G)` as a polynomial in `x_1, ..., x_{V-1}` (with `x_0 = -sum`).
pub fn cg_oracle_with(g: &StableGraph, params: &OracleParams) -> Result<(MultiPoly, OracleStats)> {
    let nv = g.num_vertices();
    let ne = g.num_edges();
    let d = 2 * ne as u32;
    let m = nv - 1;
    let plan = ResiduePlan::new(g)?;
    let charges_of = |x: &[i64]| -> Vec<i64> {
        let mut c = vec![-x.iter().sum::<i64>()];
        c.extend_from_slice(x);
        c
    };
    let mut pts = simplex_points(m, d);
    let mut checks: Vec<Vec<i64>> = Vec::new();
    if m > 0 {
        checks.push(vec![-1; m]);
        let mut p = vec![0; m];
        p[0] = d as i64 + 1;
        checks.push(p);
        let mut q = vec![1; m];
        q[m - 1] = -2;
        checks.push(q);
    }
    checks.retain(|c| !pts.contains(c));
    pts.extend(checks.iter().cloned());
    let samples: Vec<(Vec<i64>, Rational, i64)> = pts
        .par_iter()
        .map(|x| {
            let (v, r0) = constant_term_with(&plan, g, &charges_of(x), params)?;
            Ok((x.clone(), v, r0))
        })
        .collect::<Result<_>>()?;
    let stats = OracleStats {
        charge_points: samples.len(),
        r_samples: samples.len() * (2 * ne + g.h1()? + 1 + params.validation_r),
        max_r0: samples.iter().map(|s| s.2).max().unwrap_or(0),
    };
    let vars: Vec<String> = (1..nv).map(charge_var).collect();
    let values: BTreeMap<Vec<i64>, Rational> = samples.into_iter().map(|(x, v, _)| (x, v)).collect();
    let poly = interpolate_simplex(&vars, d, &vec![0; m], &values)?;
    let extra: BTreeMap<Vec<i64>, Rational> = checks.iter().map(|c| (c.clone(), values[c].clone())).collect();
    validate(&poly, &vars, &extra)?;
    Ok((poly, stats))
}

pub fn cg_oracle(g: &StableGraph) -> Result<MultiPoly> {
    Ok(cg_oracle_with(g, &OracleParams::default())?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::rat;

    #[test]
    fn anchors() {
        let pt = StableGraph::smooth(1, 1);
        assert_eq!(cg_oracle(&pt).unwrap(), MultiPoly::int(1));
        let lp = StableGraph::raw(vec![StableGraph::v(0, &[1])], vec![StableGraph::e(0, 0)], false);
        assert_eq!(cg_oracle(&lp).unwrap(), MultiPoly::constant(rat(-1, 12)));
        let t =
            StableGraph::raw(vec![StableGraph::v(1, &[1]), StableGraph::v(1, &[])], vec![StableGraph::e(0, 1)], false);
        // charges (-x_1, x_1): a_{e,T} = x_1 so C = -x_1^2/2
        assert_eq!(cg_oracle(&t).unwrap(), MultiPoly::monomial(rat(-1, 2), &[("x_1", 2)]));
    }
}
