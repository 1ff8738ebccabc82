//! Direct enumeration of mod-r weightings.

use num_bigint::BigInt;

use super::forms::TreeData;
use crate::error::{Error, Result};
use crate::exactmath::rational::Rational;
use crate::graph::StableGraph;

/// Upper bound on the number of weightings enumerated for one `(charges, r)` sample.
pub const WEIGHTING_BUDGET: u128 = 200_000_000;

/// Precomputed residue formulas: every tree-edge residue is an affine function
/// of the free (non-tree) residues.
pub(crate) struct ResiduePlan {
    free: Vec<usize>,
    /// For each tree edge: (constant vertex-set selector, coefficients over `free`).
    tree: Vec<(Vec<usize>, Vec<i64>)>,
    loops: usize,
    edges: usize,
}

impl ResiduePlan {
    pub(crate) fn new(g: &StableGraph) -> Result<Self> {
        let td = TreeData::first(g)?;
        let free: Vec<usize> = (0..g.num_edges()).filter(|&e| !td.tree.contains(&e) && !g.edges[e].is_loop()).collect();
        let loops = g.edges.iter().filter(|e| e.is_loop()).count();
        let mut tree = Vec::new();
        for &e in &td.tree {
            let h = td.cycles.head_side[e].clone().expect("tree edge");
            // x_e = sum_{v in H} a_v + sum_f s_f x_f, s_f = +1 if tail(f) in H, -1 if head(f) in H.
            let coeffs = free
                .iter()
                .map(|&f| {
                    let ed = g.edges[f];
                    let t = h.contains(&ed.tail) as i64;
                    let hd = h.contains(&ed.head) as i64;
                    t - hd
                })
                .collect();
            tree.push((h, coeffs));
        }
        Ok(ResiduePlan { free, tree, loops, edges: g.num_edges() })
    }

    /// `sum_w prod_e w(h) w(h')` over all weightings, without the `1/2` and `r^{-h1}` factors.
    pub(crate) fn raw_sum(&self, charges: &[i64], r: i64) -> Result<BigInt> {
        let count = (r as u128).pow((self.free.len() + self.loops) as u32);
        if count > WEIGHTING_BUDGET {
            return Err(Error::Budget(format!("{count} weightings at r = {r}")));
        }
        let base: Vec<i64> =
            self.tree.iter().map(|(h, _)| h.iter().map(|&v| charges[v]).sum::<i64>().rem_euclid(r)).collect();
        let pair = |x: i64| -> i128 { (x as i128) * ((r - x) as i128) };
        // Each loop contributes an independent factor sum_x x(r - x).
        let loop_factor: i128 = (1..r).map(pair).sum();
        let mut total: i128 = 0;
        let k = self.free.len();
        let mut xs = vec![0i64; k];
        loop {
            let mut prod: i128 = 1;
            for &x in &xs {
                prod *= pair(x);
                if prod == 0 {
                    break;
                }
            }
            if prod != 0 {
                for (i, (_, coeffs)) in self.tree.iter().enumerate() {
                    let mut x = base[i];
                    for (c, f) in coeffs.iter().zip(&xs) {
                        x += c * f;
                    }
                    let x = x.rem_euclid(r);
                    prod = prod.checked_mul(pair(x)).ok_or_else(|| Error::Budget("i128 overflow".into()))?;
                    if prod == 0 {
                        break;
                    }
                }
                total = total.checked_add(prod).ok_or_else(|| Error::Budget("i128 overflow".into()))?;
            }
            // Odometer over free residues.
            let mut j = 0;
            while j < k {
                xs[j] += 1;
                if xs[j] < r {
                    break;
                }
                xs[j] = 0;
                j += 1;
            }
            if j == k {
                break;
            }
        }
        let mut out = BigInt::from(total);
        for _ in 0..self.loops {
            out *= BigInt::from(loop_factor);
        }
        Ok(out)
    }

    pub(crate) fn num_edges(&self) -> usize {
        self.edges
    }
}

/// `r^{-h1} sum_w prod_e (1/2) w(h) w(h')` for integer vertex charges summing to zero.
pub fn weighting_sum(g: &StableGraph, charges: &[i64], r: i64) -> Result<Rational> {
    if r < 2 {
        return Err(Error::Domain("r must be at least 2".into()));
    }
    if charges.len() != g.num_vertices() {
        return Err(Error::Domain("one charge per vertex expected".into()));
    }
    if charges.iter().sum::<i64>() != 0 {
        return Err(Error::Domain("charges must sum to zero".into()));
    }
    let plan = ResiduePlan::new(g)?;
    let raw = plan.raw_sum(charges, r)?;
    let h1 = g.h1()? as u32;
    let den = BigInt::from(2).pow(plan.num_edges() as u32) * BigInt::from(r).pow(h1);
    Ok(Rational::new(raw, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::{int, rat};

    #[test]
    fn examples() {
        let lp = StableGraph::raw(vec![StableGraph::v(1, &[])], vec![StableGraph::e(0, 0)], false);
        assert_eq!(weighting_sum(&lp, &[0], 5).unwrap(), int(2));
        let t =
            StableGraph::raw(vec![StableGraph::v(1, &[]), StableGraph::v(1, &[])], vec![StableGraph::e(0, 1)], false);
        assert_eq!(weighting_sum(&t, &[1, -1], 7).unwrap(), int(3));
        assert_eq!(weighting_sum(&t, &[0, 0], 9).unwrap(), int(0));
        assert!(weighting_sum(&t, &[1, 0], 9).is_err());
    }

    // Brute force over all residue assignments to half-edges.
    fn brute(g: &StableGraph, charges: &[i64], r: i64) -> Rational {
        let ne = g.num_edges();
        let mut total = BigInt::from(0);
        let mut xs = vec![0i64; ne];
        loop {
            let ok = (0..g.num_vertices()).all(|v| {
                let mut s = 0;
                for (e, ed) in g.edges.iter().enumerate() {
                    if ed.tail == v {
                        s += xs[e];
                    }
                    if ed.head == v {
                        s -= xs[e];
                    }
                }
                (s + charges[v]).rem_euclid(r) == 0
            });
            if ok {
                let p: i128 = xs.iter().map(|&x| (x as i128) * (((r - x) % r) as i128)).product();
                total += BigInt::from(p);
            }
            let mut j = 0;
            while j < ne {
                xs[j] += 1;
                if xs[j] < r {
                    break;
                }
                xs[j] = 0;
                j += 1;
            }
            if j == ne {
                break;
            }
        }
        let h1 = g.h1().unwrap() as u32;
        Rational::new(total, BigInt::from(2).pow(ne as u32) * BigInt::from(r).pow(h1))
    }

    #[test]
    fn matches_brute_force() {
        let theta = StableGraph::raw(
            vec![StableGraph::v(0, &[1]), StableGraph::v(0, &[2]), StableGraph::v(1, &[])],
            vec![StableGraph::e(0, 1), StableGraph::e(1, 0), StableGraph::e(1, 2), StableGraph::e(2, 2)],
            false,
        );
        for (ch, r) in [(vec![1, 2, -3], 7), (vec![0, -4, 4], 6), (vec![3, 3, -6], 5)] {
            assert_eq!(weighting_sum(&theta, &ch, r).unwrap(), brute(&theta, &ch, r), "{ch:?} r={r}");
        }
        let _ = rat(1, 2);
    }
}
