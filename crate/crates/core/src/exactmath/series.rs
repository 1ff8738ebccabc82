//! Truncated multivariate Laurent series.
//!
//! Variables are listed from most to least dominant. A series lives in the
//! iterated Laurent field where later variables are infinitesimal relative to
//! earlier ones, so the leading term of a series minimizes the exponent of the
//! last variable first, then the one before it, and so on.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::rational::{factorial, int, Rational};
use crate::error::{Error, Result};

/// Exponent bounds: `floor[i] <= e[i] <= ceil[i]` and `sum e <= cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub floor: Vec<i32>,
    pub ceil: Vec<i32>,
    pub cap: i32,
}

impl Window {
    pub fn uniform(nvars: usize, floor: i32, ceil: i32, cap: i32) -> Self {
        Window { floor: vec![floor; nvars], ceil: vec![ceil; nvars], cap }
    }

    pub fn contains(&self, e: &[i32]) -> bool {
        e.iter().sum::<i32>() <= self.cap
            && e.iter().zip(&self.floor).all(|(x, f)| x >= f)
            && e.iter().zip(&self.ceil).all(|(x, c)| x <= c)
    }

    /// Strictly inside on every side, i.e. not touched by truncation of a single product.
    pub fn interior(&self, e: &[i32]) -> bool {
        e.iter().sum::<i32>() < self.cap
            && e.iter().zip(&self.floor).all(|(x, f)| x > f)
            && e.iter().zip(&self.ceil).all(|(x, c)| x < c)
    }

    fn check(&self) -> Result<()> {
        if self.floor.iter().zip(&self.ceil).any(|(f, c)| f >= c) {
            return Err(Error::Series("window too small: floor must be below ceiling".into()));
        }
        Ok(())
    }
}

/// Integer linear form `sum c_i x_i` over the series variables.
pub type LinearForm = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    vars: Vec<String>,
    window: Window,
    terms: BTreeMap<Vec<i32>, Rational>,
}

/// Iterated-Laurent comparison: last variable first.
pub fn laurent_cmp(a: &[i32], b: &[i32]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

impl TruncSeries {
    pub fn zero(vars: &[&str], window: Window) -> Self {
        assert_eq!(vars.len(), window.floor.len(), "window arity");
        TruncSeries { vars: vars.iter().map(|s| s.to_string()).collect(), window, terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[&str], window: Window, c: Rational) -> Self {
        let mut s = Self::zero(vars, window);
        let e = vec![0; s.vars.len()];
        s.insert(e, c);
        s
    }

    pub fn monomial(vars: &[&str], window: Window, e: Vec<i32>, c: Rational) -> Self {
        let mut s = Self::zero(vars, window);
        s.insert(e, c);
        s
    }

    pub fn linear(vars: &[&str], window: Window, form: &LinearForm) -> Self {
        let mut s = Self::zero(vars, window);
        for (i, &c) in form.iter().enumerate() {
            let mut e = vec![0; s.vars.len()];
            e[i] = 1;
            s.insert(e, int(c));
        }
        s
    }

    pub fn vars(&self) -> Vec<&str> {
        self.vars.iter().map(|s| s.as_str()).collect()
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i32>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient_at(&self, e: &[i32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<(&Vec<i32>, &Rational)> {
        self.terms.iter().min_by(|a, b| laurent_cmp(a.0, b.0))
    }

    fn insert(&mut self, e: Vec<i32>, c: Rational) {
        if c.is_zero() || !self.window.contains(&e) {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_shape(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "series over different variables");
    }

    fn like(&self) -> Self {
        TruncSeries { vars: self.vars.clone(), window: self.window.clone(), terms: BTreeMap::new() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_shape(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = self.like();
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect();
        }
        out
    }

    pub fn shift(&self, by: &[i32]) -> Self {
        let mut out = self.like();
        for (e, c) in &self.terms {
            let e2: Vec<i32> = e.iter().zip(by).map(|(x, y)| x + y).collect();
            out.insert(e2, c.clone());
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Self {
        self.same_shape(other);
        let mut acc: BTreeMap<Vec<i32>, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if self.window.contains(&e) {
                    *acc.entry(e).or_insert_with(Rational::zero) += ca * cb;
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        TruncSeries { vars: self.vars.clone(), window: self.window.clone(), terms: acc }
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = self.like();
        for (e, c) in &self.terms {
            if e[var] != 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                out.insert(e2, c * int(e[var] as i64));
            }
        }
        out
    }

    /// Keeps the terms with the given exponent in one variable, setting it to zero.
    pub fn slice(&self, var: usize, exp: i32) -> Self {
        let mut out = self.like();
        for (e, c) in &self.terms {
            if e[var] == exp {
                let mut e2 = e.clone();
                e2[var] = 0;
                out.insert(e2, c.clone());
            }
        }
        out
    }

    /// Applies `x_1 d/dx_1 + ... ` over the listed variables.
    pub fn euler(&self, vars: &[usize]) -> Self {
        let mut out = self.like();
        for (e, c) in &self.terms {
            let d: i32 = vars.iter().map(|&i| e[i]).sum();
            out.insert(e.clone(), c * int(d as i64));
        }
        out
    }

    /// `sum_k coeffs[k] * self^k`. Requires every term to be infinitesimal so
    /// that powers leave the window.
    pub fn compose(&self, coeffs: &[Rational]) -> Result<Self> {
        let mut acc = self.like();
        let mut power = Self::constant(&self.vars(), self.window.clone(), int(1));
        for (k, c) in coeffs.iter().enumerate() {
            if k > 0 {
                power = power.multiply(self);
                if power.is_zero() {
                    break;
                }
            }
            acc = acc.add(&power.scale(c));
        }
        Ok(acc)
    }

    /// `exp(self)` for a series without constant term.
    pub fn exp_of(&self) -> Result<Self> {
        let origin = vec![0; self.vars.len()];
        if !self.coefficient_at(&origin).is_zero() {
            return Err(Error::Series("exp_of needs a zero constant term".into()));
        }
        let bound = self.power_bound()?;
        let coeffs: Vec<Rational> = (0..=bound).map(|k| Rational::from_integer(factorial(k)).recip()).collect();
        self.compose(&coeffs)
    }

    /// `u/(e^u - 1)` evaluated at `self`, which must have no constant term.
    pub fn bernoulli_gf(&self) -> Result<Self> {
        let origin = vec![0; self.vars.len()];
        if !self.coefficient_at(&origin).is_zero() {
            return Err(Error::Series("bernoulli_gf needs a zero constant term".into()));
        }
        let bound = self.power_bound()?;
        let coeffs = bernoulli_gf_coeffs(bound as usize);
        self.compose(&coeffs)
    }

    /// Largest power that can still land inside the window.
    fn power_bound(&self) -> Result<u32> {
        if self.is_zero() {
            return Ok(0);
        }
        let mind = self.terms.keys().map(|e| e.iter().sum::<i32>()).min().unwrap_or(1);
        if mind <= 0 {
            return Err(Error::Series("series is not infinitesimal in total degree".into()));
        }
        Ok((self.window.cap.max(0) / mind) as u32)
    }

    /// Multiplicative inverse, expanding around the iterated-Laurent leading term.
    pub fn inverse_of(&self) -> Result<Self> {
        self.window.check()?;
        let (lead_e, lead_c) = match self.leading() {
            Some((e, c)) => (e.clone(), c.clone()),
            None => return Err(Error::Series("cannot invert the zero series".into())),
        };
        let neg: Vec<i32> = lead_e.iter().map(|x| -x).collect();
        let inv_lead = lead_c.recip();
        // self = lead * (1 + r)
        let mut r = self.shift(&neg).scale(&inv_lead);
        let one = vec![0; self.vars.len()];
        r.insert(one, int(-1));
        // Terms of the geometric sum are shifted back by the leading exponent at the end.
        let mut window = self.window.clone();
        for (i, x) in lead_e.iter().enumerate() {
            window.floor[i] += x;
            window.ceil[i] += x;
        }
        window.cap += lead_e.iter().sum::<i32>();
        r.window = window.clone();
        let mut geom = Self::constant(&self.vars(), window.clone(), int(1));
        let mut power = geom.clone();
        let neg_r = r.scale(&int(-1));
        let limit = 10_000;
        for step in 0.. {
            power = power.multiply(&neg_r);
            if power.is_zero() {
                break;
            }
            if step > limit {
                return Err(Error::Series("inverse does not converge inside the window".into()));
            }
            geom = geom.add(&power);
        }
        let mut out = self.like();
        for (e, c) in &geom.terms {
            let e2: Vec<i32> = e.iter().zip(&neg).map(|(x, y)| x + y).collect();
            out.insert(e2, c * &inv_lead);
        }
        Ok(out)
    }
}

/// Coefficients `B_m / m!` of `u/(e^u - 1)` computed by inverting `(e^u - 1)/u`,
/// independently of the Bernoulli recurrence.
pub fn bernoulli_gf_coeffs(order: usize) -> Vec<Rational> {
    let f: Vec<Rational> = (0..=order).map(|k| Rational::from_integer(factorial(k as u32 + 1)).recip()).collect();
    let mut g = vec![Rational::zero(); order + 1];
    g[0] = Rational::one();
    for k in 1..=order {
        let s: Rational = (1..=k).map(|j| &f[j] * &g[k - j]).sum();
        g[k] = -s;
    }
    g
}

/// `1/f` expanded around the first variable (in the series order) on which `f` depends.
pub fn laurent_invert_linear(vars: &[&str], window: Window, f: &LinearForm) -> Result<TruncSeries> {
    window.check()?;
    let m = f.iter().position(|&c| c != 0).ok_or_else(|| Error::Series("cannot invert the zero form".into()))?;
    let c = int(f[m]);
    let mut rest = f.clone();
    rest[m] = 0;
    // x = -rest / (c z_m), then 1/f = (1/(c z_m)) * sum x^j
    let mut x = TruncSeries::zero(vars, window.clone());
    for (i, &ci) in rest.iter().enumerate() {
        if ci == 0 {
            continue;
        }
        let mut e = vec![0; vars.len()];
        e[i] += 1;
        e[m] -= 1;
        x.terms.insert(e, -int(ci) / &c);
    }
    // Work with an enlarged window for the geometric sum, then cut back.
    let mut wide = window.clone();
    wide.floor[m] += 1;
    wide.ceil[m] += 1;
    wide.cap += 1;
    x.window = wide.clone();
    let mut acc = TruncSeries::constant(vars, wide.clone(), int(1));
    let mut power = acc.clone();
    for step in 0.. {
        power = power.multiply(&x);
        if power.is_zero() {
            break;
        }
        if step > 10_000 {
            return Err(Error::Series("geometric series does not leave the window".into()));
        }
        acc = acc.add(&power);
    }
    let mut out = TruncSeries::zero(vars, window);
    for (e, coeff) in acc.terms {
        let mut e = e;
        e[m] -= 1;
        out.insert(e, coeff / &c);
    }
    if out.is_zero() {
        return Err(Error::Series("window too small to represent any term".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::bernoulli::bernoulli;
    use crate::exactmath::rational::rat;
    use proptest::prelude::*;

    fn win2(n: i32) -> Window {
        Window::uniform(2, -n, n, n)
    }

    #[test]
    fn invert_single_variable() {
        let s = laurent_invert_linear(&["z1", "z2"], win2(6), &vec![1, 0]).unwrap();
        assert_eq!(s.terms().len(), 1);
        assert_eq!(s.coefficient_at(&[-1, 0]), int(1));
    }

    #[test]
    fn invert_sum_geometric() {
        let s = laurent_invert_linear(&["z1", "z2"], win2(8), &vec![1, 1]).unwrap();
        assert_eq!(s.coefficient_at(&[-1, 0]), int(1));
        assert_eq!(s.coefficient_at(&[-2, 1]), int(-1));
        assert_eq!(s.coefficient_at(&[-3, 2]), int(1));
    }

    #[test]
    fn inverse_times_form_is_one_inside() {
        let w = win2(8);
        let f = vec![1, -1];
        let inv = laurent_invert_linear(&["z1", "z2"], w.clone(), &f).unwrap();
        let prod = inv.multiply(&TruncSeries::linear(&["z1", "z2"], w.clone(), &f));
        for (e, c) in prod.terms() {
            if w.interior(e) && e[0] > w.floor[0] + 1 {
                let expect = if e.iter().all(|&x| x == 0) { int(1) } else { int(0) };
                assert_eq!(*c, expect, "at {e:?}");
            }
        }
        assert_eq!(prod.coefficient_at(&[0, 0]), int(1));
    }

    #[test]
    fn tiny_window_rejected() {
        assert!(laurent_invert_linear(&["z"], Window::uniform(1, 2, 2, 4), &vec![1]).is_err());
    }

    #[test]
    fn bernoulli_gf_matches_numbers() {
        let u = TruncSeries::linear(&["u"], Window::uniform(1, 0, 30, 30), &vec![1]);
        let b = u.bernoulli_gf().unwrap();
        assert_eq!(b.coefficient_at(&[2]), rat(1, 12));
        assert_eq!(b.coefficient_at(&[1]), rat(-1, 2));
        for m in 0..=30u32 {
            let expect = bernoulli(m) / Rational::from_integer(factorial(m));
            assert_eq!(b.coefficient_at(&[m as i32]), expect, "m = {m}");
        }
    }

    #[test]
    fn derivative_of_exp() {
        let u = TruncSeries::linear(&["u"], Window::uniform(1, 0, 10, 10), &vec![1]);
        let e = u.exp_of().unwrap();
        assert_eq!(e.derivative(0).coefficient_at(&[0]), int(1));
        assert!(TruncSeries::constant(&["u"], Window::uniform(1, 0, 3, 3), int(1)).exp_of().is_err());
    }

    #[test]
    fn general_inverse_of_unit() {
        let w = Window::uniform(1, -4, 12, 12);
        let u = TruncSeries::linear(&["u"], w.clone(), &vec![1]);
        // (e^u - 1) has leading term u.
        let em1 = u.exp_of().unwrap().sub(&TruncSeries::constant(&["u"], w.clone(), int(1)));
        let inv = em1.inverse_of().unwrap();
        assert_eq!(inv.coefficient_at(&[-1]), int(1));
        assert_eq!(inv.coefficient_at(&[0]), rat(-1, 2));
        assert_eq!(inv.coefficient_at(&[1]), rat(1, 12));
        assert!(TruncSeries::zero(&["u"], w).inverse_of().is_err());
    }

    proptest! {
        #[test]
        fn inverse_property(a in -3i64..4, b in -3i64..4, c in -3i64..4) {
            prop_assume!(a != 0 || b != 0 || c != 0);
            let vars = ["z1", "z2", "z3"];
            let w = Window::uniform(3, -7, 7, 7);
            let f = vec![a, b, c];
            let inv = laurent_invert_linear(&vars, w.clone(), &f).unwrap();
            let prod = inv.multiply(&TruncSeries::linear(&vars, w.clone(), &f));
            for (e, coef) in prod.terms() {
                let deep = e.iter().zip(&w.floor).all(|(x, f)| *x > f + 1)
                    && e.iter().zip(&w.ceil).all(|(x, c)| *x < c - 1)
                    && e.iter().sum::<i32>() < w.cap - 1;
                if deep {
                    let expect = if e.iter().all(|&x| x == 0) { int(1) } else { int(0) };
                    prop_assert_eq!(coef.clone(), expect);
                }
            }
        }
    }
}
