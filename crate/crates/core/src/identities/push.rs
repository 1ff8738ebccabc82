//! The forgetful pushforward of the DR formula.

use super::report::{CheckReport, Tally};
use crate::drclass::{assemble_dr, forget_pushforward, push_sweep, DecoratedGraph, Flavor, StrataVector};
use crate::drinvariant::{Evaluator, Specialization};
use crate::error::{Error, Result};
use crate::exactmath::poly::{expand_and_truncate, MultiPoly};
use crate::exactmath::rational::int;

/// Pushes the codimension-`c` part of the DR formula on `(g, n+1)` forward to
/// `(g, n)`, expands around `a_{n+1} = b` and compares: the constant and linear
/// terms vanish and the quadratic term is `(g+1-c)` times the codimension
/// `c-1` part on `(g, n)`. For `c > g` the comparison is only reported.
pub fn check_dr_push(g: u32, n: u32, c: u32, eval: &Evaluator) -> Result<CheckReport> {
    let mut tally = Tally::new("dr_push", format!("g={g} n={n} c={c}"));
    if c == 0 {
        return Err(Error::Domain("the pushforward check needs codimension at least 1".into()));
    }
    if n == 0 && g == 1 {
        return Err(Error::Domain("forgetting the only marking of M_{1,1} leaves an unstable curve".into()));
    }
    let quadratic = push_expansion(g, n, c, eval, &mut tally)?;
    let rhs = assemble_dr(g, n, c - 1, Flavor::Full, eval)?.codim_part(c - 1).to_strata()?;
    let rhs = rhs.scale(&MultiPoly::int(g as i64 + 1 - c as i64));
    compare(&mut tally, "quotient", &quadratic, &rhs);
    Ok(tally.finish_as(c > g))
}

/// The pushforward expanded in `T = a_{n+1} - b`: returns the `T^2` part and
/// checks that lower powers vanish.
fn push_expansion(g: u32, n: u32, c: u32, eval: &Evaluator, tally: &mut Tally) -> Result<StrataVector> {
    let table = assemble_dr(g, n + 1, c, Flavor::Full, eval)?.codim_part(c);
    let pushed = forget_pushforward(&table.to_strata()?, n + 1)?;
    let last = format!("a_{}", n + 1);
    let mut parts = [StrataVector::new(), StrataVector::new(), StrataVector::new()];
    for (key, coeff) in pushed.iter() {
        // With no other markings a_1 is eliminated and a_1 - b = (2g-2) b.
        let e = if n == 0 {
            let t = MultiPoly::var("T").scale(&int(2 * g as i64 - 2).recip());
            coeff.substitute("b", &t)
        } else {
            expand_and_truncate(coeff, &last, &MultiPoly::var("b"), "T", 2)?
        };
        for (k, part) in parts.iter_mut().enumerate() {
            part.add_key(key.clone(), e.coeff_of("T", k as u32));
        }
    }
    for (k, part) in parts.iter().take(2).enumerate() {
        tally.check(part.is_empty(), || {
            let (key, p) = part.iter().next().expect("nonempty");
            format!("T^{k} term {} -> {}", DecoratedGraph::from_key(key), p)
        });
    }
    let [_, _, quadratic] = parts;
    Ok(quadratic)
}

pub(crate) fn compare(tally: &mut Tally, what: &str, lhs: &StrataVector, rhs: &StrataVector) {
    tally.count(lhs.len().max(rhs.len()));
    let diff = lhs.first_difference(rhs);
    tally.check(diff.is_none(), || {
        let (g, l, r) = diff.expect("difference");
        format!("{what} at {g}: {l} vs {r}")
    });
}

/// The same comparison at numeric charges, with `a_{n+1}` recovered by
/// interpolation: `rest` gives `a_2, ..., a_n`.
pub fn check_dr_push_numeric(g: u32, n: u32, c: u32, b: i64, rest: &[i64], eval: &Evaluator) -> Result<CheckReport> {
    if c == 0 || n == 0 {
        return Err(Error::Domain("the numeric sweep needs c >= 1 and a remaining marking".into()));
    }
    let mut tally = Tally::new("dr_push_numeric", format!("g={g} n={n} c={c} b={b} a={rest:?}"));
    let swept = push_sweep(g, n, c, b, rest, "x", eval)?;
    let mut quadratic = StrataVector::new();
    for (key, p) in swept.iter() {
        let e = expand_and_truncate(p, "x", &MultiPoly::int(b), "T", 2)?;
        for k in 0..2 {
            let low = e.coeff_of("T", k);
            tally.check(low.is_zero(), || format!("T^{k} term {} -> {}", DecoratedGraph::from_key(key), low));
        }
        quadratic.add_key(key.clone(), e.coeff_of("T", 2));
    }
    let m = 2 * g as i64 - 2 + n as i64;
    let mut legs = vec![m * b - rest.iter().sum::<i64>()];
    legs.extend_from_slice(rest);
    let spec = Specialization::numeric(g, b, &legs);
    let rhs = crate::drclass::assemble_dr_with(g, c - 1, Flavor::Full, &spec, eval)?.codim_part(c - 1).to_strata()?;
    compare(&mut tally, "quotient", &quadratic, &rhs.scale(&MultiPoly::int(g as i64 + 1 - c as i64)));
    Ok(tally.finish_as(c > g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drinvariant::Method;

    #[test]
    fn genus_one() {
        let eval = Evaluator::new(Method::ZagierLaurent);
        let r = check_dr_push(1, 1, 1, &eval).unwrap();
        assert_eq!(r.status, super::super::report::Status::Pass, "{r}");
        let r = check_dr_push_numeric(1, 1, 1, 1, &[], &eval).unwrap();
        assert_eq!(r.status, super::super::report::Status::Pass, "{r}");
        let r = check_dr_push_numeric(2, 2, 1, 2, &[-3], &eval).unwrap();
        assert_eq!(r.status, super::super::report::Status::Pass, "{r}");
        assert!(check_dr_push(1, 0, 1, &eval).is_err());
    }

    #[test]
    fn no_markings_left() {
        let eval = Evaluator::new(Method::ZagierLaurent);
        let r = check_dr_push(2, 0, 2, &eval).unwrap();
        assert_eq!(r.status, super::super::report::Status::Pass, "{r}");
    }
}
