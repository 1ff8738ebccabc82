//! Spanning-tree formula evaluated by iterated Laurent expansion.
//!
//! With edges ordered `z_0, z_1, ...` (earlier variables dominant), the monomial
//! substitution `z_i = t_0 t_1 ... t_i` turns every factor into an honest power
//! series in `t`: a linear form whose first nonzero coefficient sits at `z_m`
//! equals `z_m * U` with `U` a unit, and `z_e / z_m` is a monomial for `e >= m`.
//! The target `prod z_e^2` becomes `prod_j t_j^{2(n-j)}`, so truncating each
//! `t_j` at that exponent is exact and the whole computation fits in a small box.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::forms::{charge_sum, TreeData};
use crate::error::{Error, Result};
use crate::exactmath::poly::MultiPoly;
use crate::exactmath::rational::{factorial, Rational};
use crate::exactmath::series::bernoulli_gf_coeffs;
use crate::graph::StableGraph;

/// Integer coefficients with overflow detection.
pub(crate) trait Coef: Clone + Send + Sync {
    fn zero() -> Self;
    fn from_big(x: &BigInt) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Coef for i128 {
    fn zero() -> Self {
        0
    }
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i128()
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coef for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Dense power series truncated to the box `0 <= e_j <= bound[j]`.
#[derive(Clone)]
pub(crate) struct BoxSeries<C> {
    bound: Vec<u32>,
    strides: Vec<usize>,
    data: Vec<C>,
}

impl<C: Coef> BoxSeries<C> {
    fn zero(bound: &[u32]) -> Self {
        let mut strides = vec![1usize; bound.len()];
        for j in (0..bound.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * (bound[j + 1] as usize + 1);
        }
        let size = bound.iter().map(|&b| b as usize + 1).product();
        BoxSeries { bound: bound.to_vec(), strides, data: vec![C::zero(); size] }
    }

    fn index(&self, e: &[u32]) -> Option<usize> {
        if e.iter().zip(&self.bound).any(|(x, b)| x > b) {
            return None;
        }
        Some(e.iter().zip(&self.strides).map(|(&x, s)| x as usize * s).sum())
    }

    fn decode(&self, mut i: usize) -> Vec<u32> {
        self.strides
            .iter()
            .map(|s| {
                let x = i / s;
                i %= s;
                x as u32
            })
            .collect()
    }

    fn get(&self, e: &[u32]) -> C {
        self.index(e).map(|i| self.data[i].clone()).unwrap_or_else(C::zero)
    }

    fn add_at(&mut self, e: &[u32], c: &C) -> Option<()> {
        if let Some(i) = self.index(e) {
            self.data[i] = self.data[i].add(c)?;
        }
        Some(())
    }

    fn nonzeros(&self) -> Vec<(Vec<u32>, C)> {
        self.data.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (self.decode(i), c.clone())).collect()
    }

    fn mul(&self, other: &Self) -> Option<Self> {
        let mut out = Self::zero(&self.bound);
        let a = self.nonzeros();
        let b = other.nonzeros();
        let mut e = vec![0u32; self.bound.len()];
        for (ea, ca) in &a {
            'inner: for (eb, cb) in &b {
                for j in 0..e.len() {
                    e[j] = ea[j] + eb[j];
                    if e[j] > self.bound[j] {
                        continue 'inner;
                    }
                }
                let i: usize = e.iter().zip(&self.strides).map(|(&x, s)| x as usize * s).sum();
                out.data[i] = out.data[i].add(&ca.mul(cb)?)?;
            }
        }
        Some(out)
    }

    /// Multiplies by `c * t^shift`.
    fn shifted_scaled(&self, shift: &[u32], c: &C) -> Option<Self> {
        let mut out = Self::zero(&self.bound);
        for (e, x) in self.nonzeros() {
            let e2: Vec<u32> = e.iter().zip(shift).map(|(a, b)| a + b).collect();
            out.add_at(&e2, &x.mul(c)?)?;
        }
        Some(out)
    }

    fn add_assign(&mut self, other: &Self) -> Option<()> {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a = a.add(b)?;
            }
        }
        Some(())
    }

    /// Inverse of a series with constant term `±1`, by the usual recursion in
    /// index order (every proper divisor of a monomial has a smaller index).
    fn inverse_unit(&self) -> Option<Self> {
        let c0 = self.data[0].to_big();
        if c0.abs() != BigInt::one() {
            return None;
        }
        let s = C::from_big(&c0)?;
        let rest: Vec<(Vec<u32>, C)> = self.nonzeros().into_iter().filter(|(e, _)| e.iter().any(|&x| x > 0)).collect();
        let mut out = Self::zero(&self.bound);
        out.data[0] = s.clone();
        let neg_s = C::from_big(&-c0)?;
        for i in 1..out.data.len() {
            let e = out.decode(i);
            let mut acc = C::zero();
            for (eb, cb) in &rest {
                if eb.iter().zip(&e).all(|(b, x)| b <= x) {
                    let diff: Vec<u32> = e.iter().zip(eb).map(|(x, b)| x - b).collect();
                    let prev = out.get(&diff);
                    if !prev.is_zero() {
                        acc = acc.add(&cb.mul(&prev)?)?;
                    }
                }
            }
            out.data[i] = acc.mul(&neg_s)?;
        }
        Some(out)
    }
}

/// Exponent vector of the monomial `t_{from} ... t_{to}` (empty when `from > to`).
fn run(n: usize, from: usize, to: usize) -> Vec<u32> {
    (0..n).map(|j| u32::from(j >= from && j <= to)).collect()
}

pub(crate) fn target(n: usize) -> Vec<u32> {
    (0..n).map(|j| 2 * (n - j) as u32).collect()
}

/// Which per-edge factor to use for a non-tree edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Flavor {
    /// `z_e / (exp(z_{e,T}) - 1)`
    Full,
    /// `z_e / z_{e,T}`
    Top,
}

/// `z_e / (exp(L) - 1)` (or `z_e / L`) scaled by an integer so all coefficients are integral.
/// Returns the series and the scale.
fn edge_factor<C: Coef>(n: usize, e: usize, form: &[i64], flavor: Flavor) -> Option<(BoxSeries<C>, BigInt)> {
    let bound = target(n);
    let m = form.iter().position(|&c| c != 0)?;
    let mut u = BoxSeries::<C>::zero(&bound);
    u.add_at(&vec![0; n], &C::from_big(&BigInt::from(form[m]))?)?;
    for (j, &c) in form.iter().enumerate().skip(m + 1) {
        if c != 0 {
            u.add_at(&run(n, m + 1, j), &C::from_big(&BigInt::from(c))?)?;
        }
    }
    let u_inv = u.inverse_unit()?;
    let ratio = run(n, m + 1, e);
    let one = C::from_big(&BigInt::one())?;
    match flavor {
        Flavor::Top => Some((u_inv.shifted_scaled(&ratio, &one)?, BigInt::one())),
        Flavor::Full => {
            // sum_k c_k z_m^k U^{k-1}, with c_k = B_k / k!
            let kmax = bound[0] as usize;
            let coeffs = bernoulli_gf_coeffs(kmax);
            let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let zm = run(n, 0, m);
            let mut acc = BoxSeries::<C>::zero(&bound);
            let mut power = u_inv;
            let mut shift = vec![0u32; n];
            for (k, c) in coeffs.iter().enumerate() {
                if k > 0 {
                    power = power.mul(&u)?;
                    for (s, z) in shift.iter_mut().zip(&zm) {
                        *s += z;
                    }
                }
                if c.is_zero() {
                    continue;
                }
                let ci = C::from_big(&(c * Rational::from_integer(den.clone())).to_integer())?;
                acc.add_assign(&power.shifted_scaled(&shift, &ci)?)?;
            }
            Some((acc.shifted_scaled(&ratio, &one)?, den))
        }
    }
}

/// The series part of one tree's term (everything except the exponentials), with its scale.
fn tree_series<C: Coef>(g: &StableGraph, td: &TreeData, flavor: Flavor) -> Option<(BoxSeries<C>, BigInt)> {
    let n = g.num_edges();
    let bound = target(n);
    let mut acc = BoxSeries::<C>::zero(&bound);
    acc.add_at(&vec![0; n], &C::from_big(&BigInt::one())?)?;
    let mut den = BigInt::one();
    for e in 0..n {
        if td.in_tree(e) {
            continue;
        }
        let form = td.cycles.cycle[e].as_ref().expect("non-tree edge");
        let (f, d) = edge_factor::<C>(n, e, form, flavor)?;
        acc = acc.mul(&f)?;
        den *= d;
    }
    Some((acc, den))
}

/// Extracts `[series * prod_{e in T} exp(A_e z_e)]_{prod z^2}`.
fn extract(g: &StableGraph, td: &TreeData, lookup: &dyn Fn(&[u32]) -> BigInt) -> MultiPoly {
    let n = g.num_edges();
    let nv = g.num_vertices();
    let tree_edges: Vec<usize> = td.tree.clone();
    let charges: Vec<MultiPoly> =
        tree_edges.iter().map(|&e| charge_sum(nv, td.cycles.head_side[e].as_ref().expect("tree edge"))).collect();
    let mut powers: Vec<Vec<MultiPoly>> = vec![vec![MultiPoly::one()]; tree_edges.len()];
    let mut total = MultiPoly::zero();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        rem: Vec<u32>,
        coef: MultiPoly,
        n: usize,
        tree_edges: &[usize],
        charges: &[MultiPoly],
        powers: &mut Vec<Vec<MultiPoly>>,
        lookup: &dyn Fn(&[u32]) -> BigInt,
        total: &mut MultiPoly,
    ) {
        if i == tree_edges.len() {
            let c = lookup(&rem);
            if !num_traits::Zero::is_zero(&c) {
                *total += coef.scale(&Rational::from_integer(c));
            }
            return;
        }
        let e = tree_edges[i];
        let step = run(n, 0, e);
        let mut rem = rem;
        let mut k = 0u32;
        loop {
            while powers[i].len() <= k as usize {
                let next = &powers[i][powers[i].len() - 1] * &charges[i];
                powers[i].push(next);
            }
            let term = (&coef * &powers[i][k as usize]).scale(&Rational::from_integer(factorial(k)).recip());
            rec(i + 1, rem.clone(), term, n, tree_edges, charges, powers, lookup, total);
            if rem.iter().zip(&step).any(|(r, s)| r < s) {
                break;
            }
            for (r, s) in rem.iter_mut().zip(&step) {
                *r -= s;
            }
            k += 1;
        }
    }
    rec(0, target(n), MultiPoly::one(), n, &tree_edges, &charges, &mut powers, lookup, &mut total);
    total
}

fn tree_term<C: Coef>(g: &StableGraph, td: &TreeData, flavor: Flavor) -> Option<MultiPoly> {
    let (s, den) = tree_series::<C>(g, td, flavor)?;
    let lookup = |e: &[u32]| s.get(e).to_big();
    let p = extract(g, td, &lookup);
    Some(p.scale(&Rational::new(BigInt::one(), den)))
}

/// `(-1)^{|E|} sum_T [...]`, trying machine integers first.
pub(crate) fn evaluate(g: &StableGraph, flavor: Flavor) -> Result<MultiPoly> {
    let trees = TreeData::all(g)?;
    let mut total = MultiPoly::zero();
    for td in &trees {
        let t = match tree_term::<i128>(g, td, flavor) {
            Some(t) => t,
            None => tree_term::<BigInt>(g, td, flavor)
                .ok_or_else(|| Error::Series("form without a leading variable".into()))?,
        };
        total += t;
    }
    if g.num_edges() % 2 == 1 {
        total = -total;
    }
    Ok(total)
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
        let expect = MultiPoly::monomial(rat(-1, 2), &[("x_1", 2)]);
        assert_eq!(evaluate(&t, Flavor::Full).unwrap(), expect);
        assert_eq!(evaluate(&t, Flavor::Top).unwrap(), expect);
        assert_eq!(evaluate(&StableGraph::smooth(1, 1), Flavor::Full).unwrap(), MultiPoly::one());
    }

    #[test]
    fn integer_paths_agree() {
        let banana = StableGraph::raw(
            vec![StableGraph::v(0, &[1]), StableGraph::v(0, &[])],
            vec![StableGraph::e(0, 1); 3],
            false,
        );
        for td in TreeData::all(&banana).unwrap() {
            let a = tree_term::<i128>(&banana, &td, Flavor::Full).unwrap();
            let b = tree_term::<BigInt>(&banana, &td, Flavor::Full).unwrap();
            assert_eq!(a, b);
        }
    }
}
