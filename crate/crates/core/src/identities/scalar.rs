//! Scalar series identities used in the proofs, verified to a fixed order.

use num_traits::Zero;

use super::report::{CheckReport, Tally};
use crate::error::{Error, Result};
use crate::exactmath::bernoulli::{bernoulli, zeta_reg};
use crate::exactmath::poly::MultiPoly;
use crate::exactmath::rational::{factorial, int, rat, Rational};
use crate::exactmath::series::{laurent_invert_linear, TruncSeries, Window};

fn inv_factorial(k: u32) -> Rational {
    Rational::from_integer(factorial(k)).recip()
}

/// `e^U/(e^U - 1)^2 - 1/U^2` in one variable, through `U^order`.
fn zeta_kernel(var: &str, order: i32) -> Result<TruncSeries> {
    let w = Window::uniform(1, -3, order + 3, order + 3);
    let u = TruncSeries::monomial(&[var], w.clone(), vec![1], int(1));
    let e = u.exp_of()?;
    let em1 = e.sub(&TruncSeries::constant(&[var], w.clone(), int(1)));
    let inv = em1.inverse_of()?;
    let pole = TruncSeries::monomial(&[var], w, vec![-2], int(1));
    Ok(e.multiply(&inv).multiply(&inv).sub(&pole))
}

/// `-(d/dT)^2 (T/(e^T - 1))` through `T^order`.
fn bernoulli_second(var: &str, order: i32) -> Result<TruncSeries> {
    let w = Window::uniform(1, 0, order + 2, order + 2);
    let t = TruncSeries::monomial(&[var], w, vec![1], int(1));
    Ok(t.bernoulli_gf()?.derivative(0).derivative(0).scale(&int(-1)))
}

/// Runs the four identities through series order `order` (at least 4).
pub fn check_scalar_identities(order: u32) -> Result<Vec<CheckReport>> {
    if order < 4 {
        return Err(Error::Domain("series order must be at least 4".into()));
    }
    let n = order as i32;
    let mut out = Vec::new();

    // Summing exp(kU) with k^d -> zeta(-d-1).
    let mut t = Tally::new("scalar_zeta_exp", format!("N={order}"));
    let rhs = zeta_kernel("U", n)?;
    for d in 0..=n {
        let lhs = zeta_reg(d as u32) * inv_factorial(d as u32);
        let r = rhs.coefficient_at(&[d]);
        t.check(lhs == r, || format!("U^{d}: {lhs} vs {r}"));
    }
    out.push(t.finish());

    // The X^2 coefficient of X/(e^{X+Y}-1) - X/(X+Y), expanded with X dominant.
    let mut t = Tally::new("scalar_pole_subtraction", format!("N={order}"));
    let vars = ["X", "Y"];
    let w = Window::uniform(2, -(n + 3), n + 4, n + 4);
    let x = TruncSeries::monomial(&vars, w.clone(), vec![1, 0], int(1));
    let inv = laurent_invert_linear(&vars, w.clone(), &vec![1, 1])?;
    let s = TruncSeries::linear(&vars, w.clone(), &vec![1, 1]);
    let bgf = s.bernoulli_gf()?;
    let frac = x.multiply(&inv).multiply(&bgf);
    let diff = frac.sub(&x.multiply(&inv));
    let kernel = zeta_kernel("Y", n)?;
    for i in 0..=n {
        let l = diff.coefficient_at(&[2, i]);
        let r = -kernel.coefficient_at(&[i]);
        t.check(l == r, || format!("X^2 Y^{i}: {l} vs {r}"));
    }
    out.push(t.finish());

    // Summing exp(kT) with k^d -> -B_{d+2}.
    let mut t = Tally::new("scalar_shifted_bernoulli", format!("N={order}"));
    let rhs = bernoulli_second("T", n)?;
    for d in 0..=n {
        let lhs = -bernoulli(d as u32 + 2) * inv_factorial(d as u32);
        let r = rhs.coefficient_at(&[d]);
        t.check(lhs == r, || format!("T^{d}: {lhs} vs {r}"));
    }
    out.push(t.finish());

    // (X d/dX + Y d/dY) X/(e^{X+Y}-1) - X^2 (d/dY)^2 (Y/(e^Y-1)) has no X^2 Y^i terms.
    let mut t = Tally::new("scalar_euler_bernoulli", format!("N={order}"));
    let euler = frac.euler(&[0, 1]);
    let second = bernoulli_second("Y", n)?;
    for i in 0..=n {
        let c = euler.coefficient_at(&[2, i]) + second.coefficient_at(&[i]);
        t.check(c.is_zero(), || format!("X^2 Y^{i}: {c}"));
    }
    out.push(t.finish());
    Ok(out)
}

fn exp_truncated(arg: &MultiPoly, order: u32) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    let mut power = MultiPoly::one();
    for j in 0..=order {
        if j > 0 {
            power = &power * arg;
        }
        acc += power.scale(&inv_factorial(j));
    }
    acc
}

/// `(f(alpha) - f(beta))` with `f(s) = (e^{s z} - 1)/z`, through `z^order`.
fn divided_exp_difference(alpha: &MultiPoly, beta: &MultiPoly, z: &MultiPoly, order: u32) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    let (mut pa, mut pb, mut pz) = (MultiPoly::one(), MultiPoly::one(), MultiPoly::one());
    for j in 1..=order + 1 {
        pa = &pa * alpha;
        pb = &pb * beta;
        if j > 1 {
            pz = &pz * z;
        }
        acc += (&(&pa - &pb) * &pz).scale(&inv_factorial(j));
    }
    acc
}

/// The series `Qbar(A, T, r)` in `psi = p`, `psi' = q` through total degree `order`.
pub fn qbar(order: u32) -> Result<MultiPoly> {
    let v = MultiPoly::var;
    let (a, t, r, p, q) = (v("A"), v("T"), v("r"), v("p"), v("q"));
    let half = |x: MultiPoly| (&x * &x).scale(&rat(1, 2));
    let alpha = half(&(&a - &t) + &r);
    let beta = half(&a - &t);
    let u = &p + &q;
    let top = order + 1;
    let first = -divided_exp_difference(&alpha, &beta, &u, top);
    let second = &exp_truncated(&(&half(a.clone()) * &q), top) * &divided_exp_difference(&alpha, &beta, &p, top);
    let numerator = (first + second).truncate_in(&["p", "q"], top);
    numerator.div_exact_linear(&q, "q")
}

/// `Qbar(k, T, r)/r = k^2 exp((k^2/2)(psi + psi')) T` modulo `(r, T^2)`, through `order`.
pub fn check_qbar(order: u32) -> Result<CheckReport> {
    let mut t = Tally::new("qbar", format!("order={order}"));
    let qb = qbar(order)?;
    let over_r = qb.div_exact_linear(&MultiPoly::var("r"), "r");
    t.check(over_r.is_ok(), || "Qbar is not divisible by r".into());
    let Ok(over_r) = over_r else { return Ok(t.finish()) };
    let k = MultiPoly::var("k");
    let lhs = over_r.substitute("A", &k).substitute("r", &MultiPoly::zero()).truncate_in(&["T"], 1);
    let k2 = &k * &k;
    let u = &MultiPoly::var("p") + &MultiPoly::var("q");
    let rhs = (&(&k2 * &exp_truncated(&(&k2.scale(&rat(1, 2)) * &u), order)) * &MultiPoly::var("T"))
        .truncate_in(&["p", "q"], order);
    for d in 0..=order {
        let l = lhs.part_of_degree_in(&["p", "q"], d);
        let r = rhs.part_of_degree_in(&["p", "q"], d);
        t.check(l == r, || format!("psi degree {d}: {l} vs {r}"));
    }
    Ok(t.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_at_low_order() {
        for r in check_scalar_identities(8).unwrap() {
            assert!(r.witness.is_none(), "{r}");
        }
        assert!(check_scalar_identities(3).is_err());
    }

    #[test]
    fn zeta_kernel_values() {
        let k = zeta_kernel("U", 4).unwrap();
        assert_eq!(k.coefficient_at(&[0]), rat(-1, 12));
        assert_eq!(k.coefficient_at(&[2]), rat(1, 240));
    }

    #[test]
    fn qbar_congruence() {
        let r = check_qbar(3).unwrap();
        assert!(r.witness.is_none(), "{r}");
        let slice = qbar(2).unwrap().div_exact_linear(&MultiPoly::var("r"), "r").unwrap();
        let low = slice
            .substitute("r", &MultiPoly::zero())
            .substitute("A", &MultiPoly::var("k"))
            .part_of_degree_in(&["p", "q"], 0)
            .truncate_in(&["T"], 1);
        assert_eq!(low, MultiPoly::monomial(int(1), &[("k", 2), ("T", 1)]));
    }
}
