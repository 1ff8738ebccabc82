//! Sparse multivariate polynomials over named variables.
//!
//! Variables are kept in a sorted alphabet (natural order, so `a_2 < a_10`)
//! and unused variables are dropped after every operation, which makes
//! structural equality coincide with polynomial equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{int, parse_pq, to_pq, to_short, Rational};
use crate::error::{Error, Result};

/// Orders `a_2` before `a_10`: compares the alphabetic stem, then any numeric suffix.
pub fn var_cmp(x: &str, y: &str) -> Ordering {
    fn split(s: &str) -> (&str, Option<u64>) {
        let stem = s.trim_end_matches(|c: char| c.is_ascii_digit());
        let num = s[stem.len()..].parse().ok();
        (stem, num)
    }
    let (sx, nx) = split(x);
    let (sy, ny) = split(y);
    sx.cmp(sy).then(nx.cmp(&ny)).then(x.cmp(y))
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(int(1))
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MultiPoly { vars: Vec::new(), terms }
    }

    pub fn int(c: i64) -> Self {
        Self::constant(int(c))
    }

    pub fn var(name: &str) -> Self {
        Self::monomial(int(1), &[(name, 1)])
    }

    /// `c * prod v^e`. Repeated variables are multiplied together.
    pub fn monomial(c: Rational, exps: &[(&str, u32)]) -> Self {
        let mut m: BTreeMap<&str, u32> = BTreeMap::new();
        for &(v, e) in exps {
            *m.entry(v).or_default() += e;
        }
        let mut vars: Vec<String> = m.keys().map(|s| s.to_string()).collect();
        vars.sort_by(|a, b| var_cmp(a, b));
        let exp = vars.iter().map(|v| m[v.as_str()]).collect();
        let mut terms = BTreeMap::new();
        terms.insert(exp, c);
        let mut p = MultiPoly { vars, terms };
        p.compact();
        p
    }

    /// Linear form `sum c_i v_i`.
    pub fn linear(parts: &[(Rational, &str)]) -> Self {
        parts.iter().map(|(c, v)| Self::monomial(c.clone(), &[(v, 1)])).fold(Self::zero(), |a, b| a + b)
    }

    pub fn from_terms<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<(S, u32)>, Rational)>,
        S: AsRef<str>,
    {
        let mut acc = Self::zero();
        for (exps, c) in terms {
            let e: Vec<(&str, u32)> = exps.iter().map(|(v, e)| (v.as_ref(), *e)).collect();
            acc += Self::monomial(c, &e);
        }
        acc
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn used_vars(&self) -> Vec<String> {
        self.vars.clone()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .iter()
            .find(|(e, _)| e.iter().all(|&x| x == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Terms as `(exponent map, coefficient)` in a deterministic order.
    pub fn terms(&self) -> Vec<(BTreeMap<String, u32>, Rational)> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let m = self.vars.iter().zip(e).filter(|(_, &x)| x > 0).map(|(v, &x)| (v.clone(), x)).collect();
                (m, c.clone())
            })
            .collect()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        match self.index_of(var) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        self.filter_terms(|e| e.iter().sum::<u32>() == d)
    }

    pub fn homogeneous_parts(&self) -> BTreeMap<u32, MultiPoly> {
        let mut out: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for d in self.terms.keys().map(|e| e.iter().sum::<u32>()) {
            out.entry(d).or_insert_with(|| self.homogeneous_part(d));
        }
        out
    }

    /// Part of total degree at most `d` in the listed variables.
    pub fn truncate_in(&self, vars: &[&str], d: u32) -> Self {
        let idx: Vec<usize> = vars.iter().filter_map(|v| self.index_of(v)).collect();
        self.filter_terms(|e| idx.iter().map(|&i| e[i]).sum::<u32>() <= d)
    }

    /// Part of total degree exactly `d` in the listed variables.
    pub fn part_of_degree_in(&self, vars: &[&str], d: u32) -> Self {
        let idx: Vec<usize> = vars.iter().filter_map(|v| self.index_of(v)).collect();
        self.filter_terms(|e| idx.iter().map(|&i| e[i]).sum::<u32>() == d)
    }

    /// Coefficient of an exact monomial.
    pub fn coefficient(&self, exps: &[(&str, u32)]) -> Rational {
        let mut want = vec![0u32; self.vars.len()];
        for &(v, e) in exps {
            if e == 0 {
                continue;
            }
            match self.index_of(v) {
                Some(i) => want[i] += e,
                None => return Rational::zero(),
            }
        }
        self.terms.get(&want).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient polynomial of `var^k`.
    pub fn coeff_of(&self, var: &str, k: u32) -> Self {
        let Some(i) = self.index_of(var) else {
            return if k == 0 { self.clone() } else { Self::zero() };
        };
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] == k {
                let mut e = e.clone();
                e[i] = 0;
                terms.insert(e, c.clone());
            }
        }
        let mut p = MultiPoly { vars: self.vars.clone(), terms };
        p.compact();
        p
    }

    /// `(k, coefficient)` pairs of a polynomial assumed to involve only `var`.
    pub fn univariate_terms(&self, var: &str) -> Vec<(u32, Rational)> {
        (0..=self.degree_in(var))
            .map(|k| (k, self.coeff_of(var, k).constant_term()))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// Replaces each `var^m` by the scalar `f(m)`.
    pub fn map_var_powers(&self, var: &str, f: impl Fn(u32) -> Rational) -> Self {
        let Some(i) = self.index_of(var) else {
            return self.scale(&f(0));
        };
        let mut cache: BTreeMap<u32, Rational> = BTreeMap::new();
        let mut terms: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (e, c) in &self.terms {
            let v = cache.entry(e[i]).or_insert_with(|| f(e[i])).clone();
            if v.is_zero() {
                continue;
            }
            let mut e = e.clone();
            e[i] = 0;
            *terms.entry(e).or_insert_with(Rational::zero) += c * v;
        }
        let mut p = MultiPoly { vars: self.vars.clone(), terms };
        p.compact();
        p
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, var: &str) -> Self {
        let Some(i) = self.index_of(var) else {
            return Self::zero();
        };
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                terms.insert(e2, c * int(e[i] as i64));
            }
        }
        let mut p = MultiPoly { vars: self.vars.clone(), terms };
        p.compact();
        p
    }

    /// The Euler operator restricted to `vars`: multiplies each term by its degree in them.
    pub fn euler(&self, vars: &[&str]) -> Self {
        let idx: Vec<usize> = vars.iter().filter_map(|v| self.index_of(v)).collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let d: u32 = idx.iter().map(|&i| e[i]).sum();
                (e.clone(), c * int(d as i64))
            })
            .collect();
        let mut p = MultiPoly { vars: self.vars.clone(), terms };
        p.compact();
        p
    }

    pub fn substitute(&self, var: &str, value: &MultiPoly) -> Self {
        let mut m = BTreeMap::new();
        m.insert(var.to_string(), value.clone());
        self.substitute_many(&m)
    }

    /// Simultaneous substitution of several variables.
    pub fn substitute_many(&self, subs: &BTreeMap<String, MultiPoly>) -> Self {
        let hit: Vec<(usize, &MultiPoly)> =
            self.vars.iter().enumerate().filter_map(|(i, v)| subs.get(v).map(|p| (i, p))).collect();
        if hit.is_empty() {
            return self.clone();
        }
        let mut powers: Vec<Vec<MultiPoly>> = hit.iter().map(|_| vec![Self::one()]).collect();
        let mut acc = Self::zero();
        // Group by the untouched part so each group multiplies one product of powers.
        let mut grouped: BTreeMap<Vec<u32>, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let key: Vec<u32> = hit.iter().map(|&(i, _)| e[i]).collect();
            let mut rest = e.clone();
            for &(i, _) in &hit {
                rest[i] = 0;
            }
            let mut t = BTreeMap::new();
            t.insert(rest, c.clone());
            let part = MultiPoly { vars: self.vars.clone(), terms: t };
            *grouped.entry(key).or_default() += part;
        }
        for (key, rest) in grouped {
            let mut prod = rest;
            for (j, &k) in key.iter().enumerate() {
                while powers[j].len() <= k as usize {
                    let next = powers[j].last().expect("nonempty") * hit[j].1;
                    powers[j].push(next);
                }
                prod = &prod * &powers[j][k as usize];
            }
            acc += prod;
        }
        acc
    }

    /// Substitutes rational values for some variables.
    pub fn eval_partial(&self, values: &BTreeMap<String, Rational>) -> Self {
        let subs = values.iter().map(|(k, v)| (k.clone(), Self::constant(v.clone()))).collect();
        self.substitute_many(&subs)
    }

    /// Full evaluation. Errors if a variable is left unassigned.
    pub fn eval(&self, values: &BTreeMap<String, Rational>) -> Result<Rational> {
        let p = self.eval_partial(values);
        if !p.is_constant() {
            return Err(Error::Domain(format!("unassigned variables {:?}", p.vars)));
        }
        Ok(p.constant_term())
    }

    /// Product keeping only terms whose weighted degree is at most `max`.
    pub fn mul_truncated(&self, other: &Self, weight: &dyn Fn(&str) -> u32, max: u32) -> Self {
        let vars = merge_vars(&self.vars, &other.vars);
        let w: Vec<u32> = vars.iter().map(|v| weight(v)).collect();
        let a = self.reindexed(&vars);
        let b = other.reindexed(&vars);
        let wdeg = |e: &Vec<u32>| e.iter().zip(&w).map(|(x, y)| x * y).sum::<u32>();
        let bw: Vec<(&Vec<u32>, &Rational, u32)> = b.iter().map(|(e, c)| (e, c, wdeg(e))).collect();
        let mut terms: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, ca) in &a {
            let da = wdeg(ea);
            if da > max {
                continue;
            }
            for (eb, cb, db) in &bw {
                if da + db > max {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                *terms.entry(e).or_insert_with(Rational::zero) += ca * *cb;
            }
        }
        let mut p = MultiPoly { vars, terms };
        p.compact();
        p
    }

    /// Renames variables. The map must not merge two variables into one that
    /// already coexist with conflicting meaning; merging is treated as multiplication.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> Self {
        let mut acc = Self::zero();
        for (exps, c) in self.terms() {
            let e: Vec<(String, u32)> = exps.into_iter().map(|(v, x)| (f(&v), x)).collect();
            let e: Vec<(&str, u32)> = e.iter().map(|(v, x)| (v.as_str(), *x)).collect();
            acc += Self::monomial(c, &e);
        }
        acc
    }

    /// Exact division by a polynomial that is linear in `lead` with coefficient ±1.
    pub fn div_exact_linear(&self, divisor: &MultiPoly, lead: &str) -> Result<Self> {
        let c = divisor.coeff_of(lead, 1);
        if divisor.degree_in(lead) != 1 || !c.is_constant() || c.constant_term().abs() != int(1) {
            return Err(Error::Division(format!("divisor is not monic-linear in {lead}")));
        }
        let sign = c.constant_term();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        loop {
            let d = rem.degree_in(lead);
            if d == 0 {
                break;
            }
            let top = rem.coeff_of(lead, d);
            let q = (&top * &Self::var(lead).pow(d - 1)).scale(&sign);
            rem = &rem - &(&q * divisor);
            quot += q;
        }
        if !rem.is_zero() {
            return Err(Error::Division(format!("nonzero remainder {rem}")));
        }
        Ok(quot)
    }

    fn index_of(&self, var: &str) -> Option<usize> {
        self.vars.binary_search_by(|v| var_cmp(v, var)).ok()
    }

    fn filter_terms(&self, keep: impl Fn(&Vec<u32>) -> bool) -> Self {
        let terms = self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (e.clone(), c.clone())).collect();
        let mut p = MultiPoly { vars: self.vars.clone(), terms };
        p.compact();
        p
    }

    fn reindexed(&self, vars: &[String]) -> BTreeMap<Vec<u32>, Rational> {
        if vars == self.vars.as_slice() {
            return self.terms.clone();
        }
        let map: Vec<usize> =
            self.vars.iter().map(|v| vars.binary_search_by(|w| var_cmp(w, v)).expect("superset alphabet")).collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut out = vec![0u32; vars.len()];
                for (i, &x) in e.iter().enumerate() {
                    out[map[i]] = x;
                }
                (out, c.clone())
            })
            .collect()
    }

    /// Drops zero coefficients and variables that no longer occur.
    fn compact(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        let used: Vec<bool> = (0..self.vars.len()).map(|i| self.terms.keys().any(|e| e[i] > 0)).collect();
        if used.iter().all(|&u| u) {
            return;
        }
        let vars = self.vars.iter().zip(&used).filter(|(_, &u)| u).map(|(v, _)| v.clone()).collect();
        let terms = std::mem::take(&mut self.terms)
            .into_iter()
            .map(|(e, c)| {
                let e = e.into_iter().zip(&used).filter(|(_, &u)| u).map(|(x, _)| x).collect();
                (e, c)
            })
            .collect();
        self.vars = vars;
        self.terms = terms;
    }

    fn combine(&self, other: &Self, sign: i32) -> Self {
        let vars = merge_vars(&self.vars, &other.vars);
        let mut terms = self.reindexed(&vars);
        for (e, c) in other.reindexed(&vars) {
            let slot = terms.entry(e).or_insert_with(Rational::zero);
            if sign > 0 {
                *slot += c;
            } else {
                *slot -= c;
            }
        }
        let mut p = MultiPoly { vars, terms };
        p.compact();
        p
    }

    fn product(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let vars = merge_vars(&self.vars, &other.vars);
        let a = self.reindexed(&vars);
        let b = other.reindexed(&vars);
        let mut terms: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *terms.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        let mut p = MultiPoly { vars, terms };
        p.compact();
        p
    }
}

fn merge_vars(a: &[String], b: &[String]) -> Vec<String> {
    if a == b {
        return a.to_vec();
    }
    let mut v: Vec<String> = a.iter().chain(b).cloned().collect();
    v.sort_by(|x, y| var_cmp(x, y));
    v.dedup();
    v
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.combine(rhs, 1)
    }
}
impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.combine(rhs, -1)
    }
}
impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.product(rhs)
    }
}
impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}
impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}
impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}
impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&int(-1))
    }
}
impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}
impl AddAssign for MultiPoly {
    fn add_assign(&mut self, rhs: MultiPoly) {
        *self = &*self + &rhs;
    }
}
impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        *self = &*self + rhs;
    }
}
impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        *self = &*self - rhs;
    }
}
impl std::iter::Sum for MultiPoly {
    fn sum<I: Iterator<Item = MultiPoly>>(iter: I) -> Self {
        iter.fold(MultiPoly::zero(), |a, b| a + b)
    }
}

impl fmt::Display for MultiPoly {
    /// Highest total degree first; coefficients in short rational form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut ts: Vec<(&Vec<u32>, &Rational)> = self.terms.iter().collect();
        ts.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then(b.cmp(a))
        });
        for (k, (e, c)) in ts.into_iter().enumerate() {
            let mono: Vec<String> = self
                .vars
                .iter()
                .zip(e.iter())
                .filter(|(_, &x)| x > 0)
                .map(|(v, &x)| if x == 1 { v.clone() } else { format!("{v}^{x}") })
                .collect();
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if mono.is_empty() {
                write!(f, "{}", to_short(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", to_short(&mag), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Parses a monomial such as `b^2*a_2` or `1`.
pub fn parse_monomial(s: &str) -> Result<Vec<(String, u32)>> {
    let s = s.trim();
    if s.is_empty() || s == "1" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for factor in s.split('*') {
        let factor = factor.trim();
        let (v, e) = match factor.split_once('^') {
            Some((v, e)) => {
                (v.trim(), e.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?)
            }
            None => (factor, 1),
        };
        let ok = !v.is_empty()
            && v.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(Error::Parse(format!("bad variable {v:?}")));
        }
        out.push((v.to_string(), e));
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: String,
    exp: BTreeMap<String, u32>,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    vars: Vec<String>,
    terms: Vec<TermJson>,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self.terms().into_iter().map(|(exp, c)| TermJson { coeff: to_pq(&c), exp }).collect();
        PolyJson { vars: self.vars.clone(), terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        let mut acc = MultiPoly::zero();
        for t in j.terms {
            let c = parse_pq(&t.coeff).map_err(D::Error::custom)?;
            if let Some(v) = t.exp.keys().find(|v| !j.vars.contains(v)) {
                return Err(D::Error::custom(format!("variable {v} not in vars")));
            }
            let e: Vec<(&str, u32)> = t.exp.iter().map(|(v, x)| (v.as_str(), *x)).collect();
            acc += MultiPoly::monomial(c, &e);
        }
        Ok(acc)
    }
}

/// A linear relation `form = 0` used to eliminate one variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    form: MultiPoly,
    eliminated: String,
    solution: MultiPoly,
}

impl Relation {
    pub fn new(form: MultiPoly, eliminated: &str) -> Result<Self> {
        if form.total_degree() != Some(1) || form.terms.keys().any(|e| e.iter().sum::<u32>() > 1) {
            return Err(Error::Domain("relation must be a linear form".into()));
        }
        let c = form.coefficient(&[(eliminated, 1)]);
        if c.abs() != int(1) {
            return Err(Error::Domain(format!("{eliminated} must appear with coefficient ±1 in the relation")));
        }
        let rest = &form - &MultiPoly::monomial(c.clone(), &[(eliminated, 1)]);
        let solution = rest.scale(&(-c.recip()));
        Ok(Relation { form, eliminated: eliminated.to_string(), solution })
    }

    /// `a_1 + ... + a_n - m b = 0`, eliminating `a_1`. Without legs the
    /// relation forces `b = 0`, and `b` is eliminated instead.
    pub fn charge_sum(n: usize, m: i64) -> Self {
        if n == 0 {
            return Relation::new(MultiPoly::var("b"), "b").expect("valid charge relation");
        }
        let mut form = MultiPoly::int(0);
        for i in 1..=n {
            form += MultiPoly::var(&format!("a_{i}"));
        }
        form -= &MultiPoly::monomial(int(m), &[("b", 1)]);
        Relation::new(form, "a_1").expect("valid charge relation")
    }

    pub fn form(&self) -> &MultiPoly {
        &self.form
    }

    pub fn eliminated(&self) -> &str {
        &self.eliminated
    }

    /// What the eliminated variable is replaced by.
    pub fn solution(&self) -> &MultiPoly {
        &self.solution
    }

    pub fn normalize(&self, p: &MultiPoly) -> MultiPoly {
        p.substitute(&self.eliminated, &self.solution)
    }
}

/// Substitutes `var = center + t` and drops powers of `t` above `order`.
pub fn expand_and_truncate(p: &MultiPoly, var: &str, center: &MultiPoly, t: &str, order: u32) -> Result<MultiPoly> {
    if center.vars.iter().any(|v| v == var) {
        return Err(Error::Domain(format!("center involves {var}")));
    }
    let shifted = center + &MultiPoly::var(t);
    let mut acc = MultiPoly::zero();
    let mut power = MultiPoly::one();
    let w = |v: &str| u32::from(v == t);
    for k in 0..=p.degree_in(var) {
        if k > 0 {
            power = power.mul_truncated(&shifted, &w, order);
        }
        acc += p.coeff_of(var, k).mul_truncated(&power, &w, order);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::rat;
    use proptest::prelude::*;

    fn v(s: &str) -> MultiPoly {
        MultiPoly::var(s)
    }

    #[test]
    fn natural_variable_order() {
        let p = v("a_10") + v("a_2") + v("b");
        assert_eq!(p.vars(), &["a_2".to_string(), "a_10".into(), "b".into()]);
    }

    #[test]
    fn arithmetic_and_display() {
        let p = &(v("a") + v("b")) * &(v("a") - v("b"));
        assert_eq!(p, v("a").pow(2) - v("b").pow(2));
        assert_eq!(p.to_string(), "a^2 - b^2");
        assert_eq!(MultiPoly::constant(rat(-1, 12)).to_string(), "-1/12");
        assert!((&p - &p).is_zero());
        assert!((&p - &p).vars().is_empty());
    }

    #[test]
    fn normalize_examples() {
        let r = Relation::new(v("a_1") + v("a_2"), "a_1").unwrap();
        assert!(r.normalize(&(v("a_1") + v("a_2"))).is_zero());
        assert_eq!(r.normalize(&v("a_1").pow(2)), v("a_2").pow(2));
        let r2 = Relation::charge_sum(2, 2);
        assert_eq!(r2.normalize(&v("a_1")), MultiPoly::monomial(int(2), &[("b", 1)]) - v("a_2"));
        assert!(Relation::new(v("a").pow(2), "a").is_err());
        assert!(Relation::new(MultiPoly::monomial(int(2), &[("a", 1)]), "a").is_err());
    }

    #[test]
    fn expand_examples() {
        let b = v("b");
        let t = v("t");
        let p = expand_and_truncate(&v("a").pow(2), "a", &b, "t", 2).unwrap();
        assert_eq!(p, b.pow(2) + MultiPoly::monomial(int(2), &[("b", 1), ("t", 1)]) + t.pow(2));
        let p3 = expand_and_truncate(&v("a").pow(3), "a", &b, "t", 2).unwrap();
        assert_eq!(
            p3,
            b.pow(3)
                + MultiPoly::monomial(int(3), &[("b", 2), ("t", 1)])
                + MultiPoly::monomial(int(3), &[("b", 1), ("t", 2)])
        );
        let z = expand_and_truncate(&(v("a") - v("b")).pow(3), "a", &b, "t", 2).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn json_round_trip() {
        let p = MultiPoly::monomial(rat(-1, 2), &[("a_2", 2)]) + MultiPoly::constant(rat(3, 4));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"vars":["a_2"],"terms":[{"coeff":"3/4","exp":{}},{"coeff":"-1/2","exp":{"a_2":2}}]}"#);
        let back: MultiPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn linear_division() {
        let l = v("x") - v("y");
        let q = v("x") * v("x") + v("y") * MultiPoly::int(3);
        let prod = &q * &l;
        assert_eq!(prod.div_exact_linear(&l, "x").unwrap(), q);
        assert!((&prod + &MultiPoly::int(1)).div_exact_linear(&l, "x").is_err());
    }

    #[test]
    fn monomial_parsing() {
        assert_eq!(parse_monomial("b^2*a_2").unwrap(), vec![("b".into(), 2), ("a_2".into(), 1)]);
        assert!(parse_monomial("1").unwrap().is_empty());
        assert!(parse_monomial("2b").is_err());
    }

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        let names = ["a_1", "a_2", "a_3", "b"];
        proptest::collection::vec((proptest::collection::vec(0u32..3, 4), -5i64..5), 0..5).prop_map(move |ts| {
            ts.into_iter()
                .map(|(e, c)| {
                    let exps: Vec<(&str, u32)> = names.iter().copied().zip(e).collect();
                    MultiPoly::monomial(int(c), &exps)
                })
                .sum()
        })
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent_and_multiplicative(p in arb_poly(), q in arb_poly()) {
            let r = Relation::charge_sum(3, 1);
            let np = r.normalize(&p);
            prop_assert_eq!(r.normalize(&np), np.clone());
            prop_assert!(!np.vars().iter().any(|x| x == "a_1"));
            let nq = r.normalize(&q);
            prop_assert_eq!(r.normalize(&(&p * &q)), r.normalize(&(&np * &nq)));
        }

        #[test]
        fn ring_laws(p in arb_poly(), q in arb_poly(), s in arb_poly()) {
            prop_assert_eq!(&(&p + &q) * &s, &(&p * &s) + &(&q * &s));
            prop_assert_eq!(&p * &q, &q * &p);
        }
    }
}
