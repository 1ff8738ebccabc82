//! Exact polynomial interpolation on integer points.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::poly::MultiPoly;
use super::rational::{factorial, int, Rational};
use crate::error::{Error, Result};

/// The falling-factorial binomial `C(x, k)` as a polynomial in `x`.
pub fn binomial_poly(x: &MultiPoly, k: u32) -> MultiPoly {
    let mut acc = MultiPoly::one();
    for j in 0..k {
        acc = &acc * &(x - &MultiPoly::int(j as i64));
    }
    acc.scale(&Rational::from_integer(factorial(k)).recip())
}

/// Coefficients (constant first) of the unique polynomial of degree `< values.len()`
/// with `p(start + i) = values[i]`.
pub fn fit_consecutive(start: i64, values: &[Rational]) -> Vec<Rational> {
    let n = values.len();
    let mut diffs = values.to_vec();
    let mut newton = Vec::with_capacity(n);
    for _ in 0..n {
        newton.push(diffs[0].clone());
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    let x = MultiPoly::var("x") - MultiPoly::int(start);
    let mut p = MultiPoly::zero();
    for (k, c) in newton.iter().enumerate() {
        if !c.is_zero() {
            p += binomial_poly(&x, k as u32).scale(c);
        }
    }
    let deg = p.degree_in("x");
    let mut out: Vec<Rational> = (0..=deg).map(|k| p.coeff_of("x", k).constant_term()).collect();
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

pub fn eval_univariate(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// All `x` in `N^m` with `|x| <= d`, in lexicographic order.
pub fn simplex_points(m: usize, d: u32) -> Vec<Vec<i64>> {
    fn rec(m: usize, left: u32, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur.push(k as i64);
            rec(m, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, d, &mut Vec::new(), &mut out);
    out
}

/// Interpolates a polynomial of total degree `<= d` in `vars` from its values at
/// `offset + x` for every simplex point `x`. Values are looked up by the shifted point.
pub fn interpolate_simplex(
    vars: &[String],
    d: u32,
    offset: &[i64],
    values: &BTreeMap<Vec<i64>, Rational>,
) -> Result<MultiPoly> {
    let m = vars.len();
    let pts = simplex_points(m, d);
    let lookup = |x: &[i64]| -> Result<Rational> {
        let y: Vec<i64> = x.iter().zip(offset).map(|(a, b)| a + b).collect();
        values.get(&y).cloned().ok_or_else(|| Error::Interpolation(format!("missing sample at {y:?}")))
    };
    let coeffs = newton_coefficients(&pts, m, &lookup)?;
    let xs: Vec<MultiPoly> = vars.iter().zip(offset).map(|(v, o)| MultiPoly::var(v) - MultiPoly::int(*o)).collect();
    let mut acc = MultiPoly::zero();
    for (k, c) in coeffs {
        if c.is_zero() {
            continue;
        }
        let mut term = MultiPoly::constant(c);
        for (i, &ki) in k.iter().enumerate() {
            if ki > 0 {
                term = &term * &binomial_poly(&xs[i], ki as u32);
            }
        }
        acc += term;
    }
    Ok(acc)
}

/// Newton coefficients `c_k = (Delta^k f)(0)`, differencing one axis at a time.
fn newton_coefficients(
    pts: &[Vec<i64>],
    m: usize,
    lookup: &dyn Fn(&[i64]) -> Result<Rational>,
) -> Result<BTreeMap<Vec<i64>, Rational>> {
    let mut table: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
    for p in pts {
        table.insert(p.clone(), lookup(p)?);
    }
    // Along each axis, replace f by its Newton coefficients in that axis.
    // On the simplex, each axis line {x : x_j fixed for j != axis} is a full segment.
    for axis in 0..m {
        let mut lines: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
        for p in pts {
            let mut key = p.clone();
            key[axis] = 0;
            lines.entry(key).or_default().push(p[axis]);
        }
        for (key, mut idx) in lines {
            idx.sort_unstable();
            let vals: Vec<Rational> = idx
                .iter()
                .map(|&t| {
                    let mut q = key.clone();
                    q[axis] = t;
                    table[&q].clone()
                })
                .collect();
            let mut diffs = vals;
            let mut newton = Vec::with_capacity(idx.len());
            for _ in 0..idx.len() {
                newton.push(diffs[0].clone());
                diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
            }
            for (t, c) in idx.iter().zip(newton) {
                let mut q = key.clone();
                q[axis] = *t;
                table.insert(q, c);
            }
        }
    }
    Ok(table)
}

/// Checks `p` against samples, returning the first mismatch.
pub fn validate(p: &MultiPoly, vars: &[String], samples: &BTreeMap<Vec<i64>, Rational>) -> Result<()> {
    for (pt, v) in samples {
        let vals: BTreeMap<String, Rational> = vars.iter().cloned().zip(pt.iter().map(|&x| int(x))).collect();
        let got = p.eval(&vals)?;
        if &got != v {
            return Err(Error::Interpolation(format!("validation failed at {pt:?}: interpolant {got}, sample {v}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::rat;

    #[test]
    fn univariate_fit() {
        // (r^2 - 1)/12 sampled at 5..9
        let vals: Vec<Rational> = (5..10).map(|r| rat(r * r - 1, 12)).collect();
        let c = fit_consecutive(5, &vals);
        assert_eq!(c, vec![rat(-1, 12), int(0), rat(1, 12)]);
        assert_eq!(eval_univariate(&c, &int(11)), int(10));
    }

    #[test]
    fn simplex_count() {
        assert_eq!(simplex_points(2, 3).len(), 10);
        assert_eq!(simplex_points(3, 4).len(), 35);
        assert_eq!(simplex_points(0, 4).len(), 1);
    }

    #[test]
    fn recovers_polynomial() {
        let vars = vec!["x".to_string(), "y".to_string()];
        let target = MultiPoly::var("x").pow(3) * MultiPoly::int(2) - MultiPoly::var("x") * MultiPoly::var("y")
            + MultiPoly::constant(rat(1, 3));
        let off = vec![-2, 1];
        let mut vals = BTreeMap::new();
        for p in simplex_points(2, 3) {
            let y: Vec<i64> = p.iter().zip(&off).map(|(a, b)| a + b).collect();
            let m: BTreeMap<String, Rational> = vars.iter().cloned().zip(y.iter().map(|&v| int(v))).collect();
            vals.insert(y, target.eval(&m).unwrap());
        }
        let p = interpolate_simplex(&vars, 3, &off, &vals).unwrap();
        assert_eq!(p, target);
        assert!(validate(&p, &vars, &vals).is_ok());
    }
}
