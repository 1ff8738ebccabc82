//! Bernoulli numbers and negative-zeta regularized power sums.

use std::sync::{OnceLock, RwLock};

use num_traits::Zero;

use super::poly::MultiPoly;
use super::rational::{binomial, int, Rational};
use crate::error::{Error, Result};

fn table() -> &'static RwLock<Vec<Rational>> {
    static TABLE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![int(1)]))
}

/// `B_m` with the `u/(e^u - 1)` convention, so `B_1 = -1/2`.
pub fn bernoulli(m: u32) -> Rational {
    let m = m as usize;
    {
        let t = table().read().expect("bernoulli table poisoned");
        if let Some(b) = t.get(m) {
            return b.clone();
        }
    }
    let mut t = table().write().expect("bernoulli table poisoned");
    // Another writer may have filled the table in the meantime.
    while t.len() <= m {
        let k = t.len();
        // sum_{j<=k} C(k+1, j) B_j = 0
        let mut s = Rational::zero();
        for (j, bj) in t.iter().enumerate() {
            s += Rational::from_integer(binomial(k as u32 + 1, j as u32)) * bj;
        }
        let next = -s / Rational::from_integer(binomial(k as u32 + 1, k as u32));
        t.push(next);
    }
    t[m].clone()
}

/// `zeta(-d-1) = -B_{d+2}/(d+2)`, the regularized value of `sum_{k>=1} k^{d+1}`.
pub fn zeta_reg(d: u32) -> Rational {
    -bernoulli(d + 2) / int(d as i64 + 2)
}

/// `zeta(-m)` for `m >= 1`, i.e. the regularized `sum_{k>=1} k^m`.
fn zeta_neg(m: u32) -> Rational {
    debug_assert!(m >= 1);
    zeta_reg(m - 1)
}

/// How the constant term is treated by [`regularize_poly_sum`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ConstantTerm {
    /// Map `k^0` to zero.
    #[default]
    Zero,
    /// Refuse inputs with a nonzero constant term.
    Reject,
}

/// Replaces `k^m` by `zeta(-m)` term-wise.
pub fn regularize_poly_sum(p: &MultiPoly, var: &str, constant: ConstantTerm) -> Result<Rational> {
    check_univariate(p, var)?;
    let mut acc = Rational::zero();
    for (m, c) in p.univariate_terms(var) {
        if m == 0 {
            if constant == ConstantTerm::Reject && !c.is_zero() {
                return Err(Error::Domain("constant term has no regularized power sum".into()));
            }
            continue;
        }
        acc += c * zeta_neg(m);
    }
    Ok(acc)
}

/// Multivariate version of [`regularize_poly_sum`]: every listed variable is
/// summed independently, leaving a polynomial in the remaining variables.
pub fn regularize_vars(p: &MultiPoly, vars: &[&str]) -> MultiPoly {
    let mut cur = p.clone();
    for v in vars {
        cur = cur.map_var_powers(v, |m| if m == 0 { Rational::zero() } else { zeta_neg(m) });
    }
    cur
}

/// The two power-to-Bernoulli substitution rules used by the identity checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BernoulliRule {
    /// `k^d -> B_d`
    Plain,
    /// `k^d -> -B_{d+2}`
    ShiftedNeg,
}

impl std::str::FromStr for BernoulliRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "B_d" | "plain" => Ok(BernoulliRule::Plain),
            "-B_{d+2}" | "shifted" => Ok(BernoulliRule::ShiftedNeg),
            other => Err(Error::Parse(format!("unknown bernoulli rule {other:?}"))),
        }
    }
}

impl BernoulliRule {
    pub fn value(self, d: u32) -> Rational {
        match self {
            BernoulliRule::Plain => bernoulli(d),
            BernoulliRule::ShiftedNeg => -bernoulli(d + 2),
        }
    }
}

pub fn substitute_bernoulli(p: &MultiPoly, var: &str, rule: BernoulliRule) -> Result<Rational> {
    check_univariate(p, var)?;
    Ok(p.univariate_terms(var).into_iter().map(|(d, c)| c * rule.value(d)).sum())
}

/// Applies the substitution to `var` only, keeping the other variables symbolic.
pub fn substitute_bernoulli_var(p: &MultiPoly, var: &str, rule: BernoulliRule) -> MultiPoly {
    p.map_var_powers(var, |d| rule.value(d))
}

fn check_univariate(p: &MultiPoly, var: &str) -> Result<()> {
    if let Some(other) = p.used_vars().into_iter().find(|v| v != var) {
        return Err(Error::Domain(format!("expected a polynomial in {var} only, found {other}")));
    }
    Ok(())
}
