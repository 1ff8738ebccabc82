//! Exact arithmetic: rationals, Bernoulli numbers, multivariate polynomials,
//! truncated series and interpolation.

pub mod bernoulli;
pub mod interp;
pub mod poly;
pub mod rational;
pub mod series;

pub use bernoulli::{
    bernoulli, regularize_poly_sum, regularize_vars, substitute_bernoulli, substitute_bernoulli_var, zeta_reg,
    BernoulliRule, ConstantTerm,
};
pub use poly::{expand_and_truncate, MultiPoly, Relation};
pub use rational::{int, rat, Rational};
pub use series::{LinearForm, TruncSeries, Window};
