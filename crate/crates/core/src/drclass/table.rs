//! DR coefficient tables over decorated strata.
//!
//! A table entry is keyed by a stable graph, an exponent `d_e` per edge and a
//! monomial `kappa_1^p prod psi_i^{q_i}`, and is the coefficient of the class
//! `kappa_1^p prod psi_i^{q_i} j_*[prod_e (psi_h + psi_h')^{d_e}]` in the total
//! DR formula. Isomorphic decorations are merged, so the automorphism factor
//! is that of the decorated graph.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::strata::{DecoratedGraph, StrataVector};
use crate::drinvariant::{dr_coeff, Evaluator, Specialization};
use crate::error::{Error, Result};
use crate::exactmath::poly::{parse_monomial, MultiPoly};
use crate::exactmath::rational::{binomial, factorial, int, rat, Rational};
use crate::graph::canon::{canonicalize, CanonKey, DEFAULT_MAX_VERTICES};
use crate::graph::{enumerate_stable_graphs, StableGraph, Vertex};

pub const TABLE_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    Full,
    Top,
}

impl FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Flavor::Full),
            "top" | "top-degree" => Ok(Flavor::Top),
            _ => Err(Error::Parse(format!("unknown flavor {s:?}"))),
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Full => "full",
            Flavor::Top => "top",
        })
    }
}

/// `kappa_1^kappa1 prod_i psi_i^{psi[i-1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorMonomial {
    pub kappa1: u32,
    pub psi: Vec<u32>,
}

impl DivisorMonomial {
    pub fn trivial(n: usize) -> Self {
        DivisorMonomial { kappa1: 0, psi: vec![0; n] }
    }

    pub fn codim(&self) -> u32 {
        self.kappa1 + self.psi.iter().sum::<u32>()
    }

    pub fn is_trivial(&self) -> bool {
        self.codim() == 0
    }

    /// All monomials in `n` markings of codimension at most `c`.
    pub fn up_to(n: usize, c: u32) -> Vec<Self> {
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i == cur.len() {
                out.push(cur.clone());
                return;
            }
            for e in 0..=left {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        let mut out = Vec::new();
        for p in 0..=c {
            let mut qs = Vec::new();
            rec(0, c - p, &mut vec![0; n], &mut qs);
            out.extend(qs.into_iter().map(|psi| DivisorMonomial { kappa1: p, psi }));
        }
        out
    }

    /// The coefficient of this monomial in `exp(-(b^2/2) kappa_1 + sum (a_i^2/2) psi_i)`.
    pub fn exp_coefficient(&self, b: &MultiPoly, legs: &[MultiPoly]) -> MultiPoly {
        let half = |x: &MultiPoly, e: u32| {
            (x * x).scale(&rat(1, 2)).pow(e).scale(&Rational::from_integer(factorial(e)).recip())
        };
        let mut acc = half(b, self.kappa1).scale(&int(if self.kappa1.is_multiple_of(2) { 1 } else { -1 }));
        for (a, &q) in legs.iter().zip(&self.psi) {
            if q > 0 {
                acc = &acc * &half(a, q);
            }
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DecoratedStratum {
    pub graph: StableGraph,
    pub edge_psi: Vec<u32>,
    pub divisor: DivisorMonomial,
}

impl DecoratedStratum {
    pub fn codim(&self) -> u32 {
        self.graph.num_edges() as u32 + self.edge_psi.iter().sum::<u32>() + self.divisor.codim()
    }

    /// The class as a combination of decorated strata.
    pub fn expand(&self) -> Vec<(DecoratedGraph, Rational)> {
        let mut base = DecoratedGraph::undecorated(&self.graph);
        for v in &mut base.vertices {
            for l in &mut v.legs {
                l.1 = self.divisor.psi[l.0 as usize - 1];
            }
        }
        let mut acc = vec![(base, int(1))];
        for (e, &d) in self.edge_psi.iter().enumerate() {
            let mut next = Vec::new();
            for (g, c) in &acc {
                for i in 0..=d {
                    let mut h = g.clone();
                    h.edges[e].psi_tail = i;
                    h.edges[e].psi_head = d - i;
                    next.push((h, c * Rational::from_integer(binomial(d, i))));
                }
            }
            acc = next;
        }
        let nv = self.graph.num_vertices();
        let mut next = Vec::new();
        for split in compositions(self.divisor.kappa1, nv) {
            let mult = split.iter().fold(Rational::from_integer(factorial(self.divisor.kappa1)), |m, &p| {
                m / Rational::from_integer(factorial(p))
            });
            for (g, c) in &acc {
                let mut h = g.clone();
                for (v, &p) in split.iter().enumerate() {
                    h.vertices[v].kappa = vec![1; p as usize];
                }
                next.push((h, c * &mult));
            }
        }
        next
    }
}

impl fmt::Display for DecoratedStratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.graph.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let legs: Vec<String> = v.legs.iter().map(|l| l.to_string()).collect();
            write!(f, "[g{} {{{}}}]", v.genus, legs.join(","))?;
        }
        for (e, d) in self.graph.edges.iter().zip(&self.edge_psi) {
            write!(f, " {}-{}", e.tail, e.head)?;
            if *d > 0 {
                write!(f, "^{d}")?;
            }
        }
        if self.divisor.kappa1 > 0 {
            write!(f, " kappa1^{}", self.divisor.kappa1)?;
        }
        for (i, q) in self.divisor.psi.iter().enumerate() {
            if *q > 0 {
                write!(f, " psi{}^{}", i + 1, q)?;
            }
        }
        Ok(())
    }
}

/// Ordered splittings of `total` into `parts` naturals.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub stratum: DecoratedStratum,
    pub poly: MultiPoly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrTable {
    pub schema: u32,
    pub g: u32,
    pub n: u32,
    pub c_max: u32,
    pub flavor: Flavor,
    pub entries: Vec<TableEntry>,
}

impl DrTable {
    pub fn to_strata(&self) -> Result<StrataVector> {
        let mut out = StrataVector::new();
        for entry in &self.entries {
            for (g, c) in entry.stratum.expand() {
                out.add_term(&g, &entry.poly.scale(&c))?;
            }
        }
        Ok(out)
    }

    pub fn codim_part(&self, c: u32) -> DrTable {
        DrTable { entries: self.entries.iter().filter(|e| e.stratum.codim() == c).cloned().collect(), ..self.clone() }
    }

    pub fn get(&self, s: &DecoratedStratum) -> Option<&MultiPoly> {
        self.entries.iter().find(|e| &e.stratum == s).map(|e| &e.poly)
    }

    /// Entries with only edge decorations (the piecewise polynomial part).
    pub fn polynomial_part(&self) -> DrTable {
        DrTable {
            entries: self.entries.iter().filter(|e| e.stratum.divisor.is_trivial()).cloned().collect(),
            ..self.clone()
        }
    }
}

type GraphDecoration = CanonKey<Vertex, u32>;

/// One representative per isomorphism class of (graph, edge exponents) with
/// `|E| + sum d <= c_max`, with the order of its automorphism group.
fn decorated_graphs(g: u32, n: u32, c_max: u32) -> Result<Vec<(StableGraph, Vec<u32>, u64)>> {
    let mut found: BTreeMap<GraphDecoration, u64> = BTreeMap::new();
    for gr in enumerate_stable_graphs(g, n, c_max as usize)? {
        let ne = gr.num_edges();
        for ds in compositions_bounded(ne, c_max - ne as u32) {
            let edges: Vec<((usize, u32), (usize, u32))> =
                gr.edges.iter().zip(&ds).map(|(e, &d)| ((e.tail, d), (e.head, d))).collect();
            let c = canonicalize(&gr.vertices, &edges, DEFAULT_MAX_VERTICES)?;
            found.entry(c.key).or_insert(c.aut);
        }
    }
    Ok(found
        .into_iter()
        .map(|(key, aut)| {
            let graph = StableGraph::raw(
                key.vertices.clone(),
                key.edges.iter().map(|e| StableGraph::e(e.0 .0, e.1 .0)).collect(),
                false,
            );
            let ds = key.edges.iter().map(|e| e.0 .1).collect();
            (graph, ds, aut)
        })
        .collect())
}

/// Vectors in `N^len` with sum at most `max`.
fn compositions_bounded(len: usize, max: u32) -> Vec<Vec<u32>> {
    (0..=max).flat_map(|s| compositions(s, len)).collect()
}

/// The total DR formula of `M_{g,n}` up to codimension `c_max`, with symbolic `b, a_i`.
pub fn assemble_dr(g: u32, n: u32, c_max: u32, flavor: Flavor, eval: &Evaluator) -> Result<DrTable> {
    assemble_dr_with(g, c_max, flavor, &Specialization::symbolic(g, n as usize), eval)
}

/// The total DR formula with the given charges; entries are reduced modulo the
/// specialization's relation. The top flavor keeps the part of degree exactly
/// twice the codimension in all variables.
pub fn assemble_dr_with(
    g: u32,
    c_max: u32,
    flavor: Flavor,
    spec: &Specialization,
    eval: &Evaluator,
) -> Result<DrTable> {
    let n = spec.n() as u32;
    let decorated = decorated_graphs(g, n, c_max)?;
    let divisors = DivisorMonomial::up_to(n as usize, c_max);
    let per_graph: Vec<Vec<TableEntry>> = decorated
        .par_iter()
        .map(|(graph, ds, aut)| -> Result<Vec<TableEntry>> {
            let codim0 = graph.num_edges() as u32 + ds.iter().sum::<u32>();
            let ds_usize: Vec<usize> = ds.iter().map(|&d| d as usize).collect();
            let base = match flavor {
                Flavor::Full => dr_coeff(graph, &ds_usize, spec, eval)?,
                Flavor::Top => {
                    let sub = graph.subdivide_all(&ds_usize)?;
                    let top = eval.top(&sub)?;
                    crate::drinvariant::specialize(&sub, &top, spec)?
                }
            };
            let mut weight = int(*aut as i64).recip();
            for &d in ds {
                weight /= Rational::from_integer(factorial(d + 1));
                if d % 2 == 1 {
                    weight = -weight;
                }
            }
            let base = base.scale(&weight);
            let mut out = Vec::new();
            for div in divisors.iter().filter(|m| codim0 + m.codim() <= c_max) {
                let codim = codim0 + div.codim();
                let mut poly = spec.normalize(&(&base * &div.exp_coefficient(&spec.b, &spec.legs)));
                if flavor == Flavor::Top {
                    poly = poly.homogeneous_part(2 * codim);
                }
                if !poly.is_zero() {
                    out.push(TableEntry {
                        stratum: DecoratedStratum { graph: graph.clone(), edge_psi: ds.clone(), divisor: div.clone() },
                        poly,
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut entries: Vec<TableEntry> = per_graph.into_iter().flatten().collect();
    entries.sort_by_cached_key(|e| {
        let s = &e.stratum;
        (
            s.codim(),
            s.graph.num_edges(),
            s.graph.vertices.clone(),
            s.graph.edges.clone(),
            s.edge_psi.clone(),
            s.divisor.clone(),
        )
    });
    Ok(DrTable { schema: TABLE_SCHEMA, g, n, c_max, flavor, entries })
}

/// The coefficient of `monomial` (in `b, a_2, ..., a_n`) in every entry of codimension `c`.
pub fn extract_coefficient(table: &DrTable, monomial: &str, c: u32) -> Result<Vec<(DecoratedStratum, Rational)>> {
    if table.flavor != Flavor::Full {
        return Err(Error::Domain("coefficients are extracted from full tables".into()));
    }
    if c > table.c_max {
        return Err(Error::Domain(format!("codimension {c} exceeds the table bound {}", table.c_max)));
    }
    let exps = parse_monomial(monomial)?;
    let eliminated = if table.n == 0 { "b" } else { "a_1" };
    if exps.iter().any(|(v, _)| v == eliminated) {
        return Err(Error::Domain(format!("{eliminated} is eliminated by the charge relation")));
    }
    let refs: Vec<(&str, u32)> = exps.iter().map(|(v, e)| (v.as_str(), *e)).collect();
    Ok(table
        .entries
        .iter()
        .filter(|e| e.stratum.codim() == c)
        .map(|e| (e.stratum.clone(), e.poly.coefficient(&refs)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drinvariant::Method;

    fn eval() -> Evaluator {
        Evaluator::new(Method::ZagierLaurent)
    }

    #[test]
    fn codim_zero_of_three_pointed_sphere() {
        let t = assemble_dr(0, 3, 0, Flavor::Full, &eval()).unwrap();
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.entries[0].poly, MultiPoly::one());
    }

    #[test]
    fn genus_one_one_point() {
        let t = assemble_dr(1, 1, 1, Flavor::Full, &eval()).unwrap();
        let find = |edges: usize, kappa: u32, psi: u32| {
            t.entries
                .iter()
                .find(|e| {
                    e.stratum.graph.num_edges() == edges
                        && e.stratum.divisor.kappa1 == kappa
                        && e.stratum.divisor.psi[0] == psi
                })
                .map(|e| e.poly.clone())
                .unwrap()
        };
        assert_eq!(find(1, 0, 0), MultiPoly::constant(rat(-1, 24)));
        assert_eq!(find(0, 0, 1), MultiPoly::monomial(rat(1, 2), &[("b", 2)]));
        assert_eq!(find(0, 1, 0), MultiPoly::monomial(rat(-1, 2), &[("b", 2)]));
        let psi = extract_coefficient(&t, "b^2", 1).unwrap();
        assert!(psi.iter().any(|(s, c)| s.divisor.psi == vec![1] && c == &rat(1, 2)));
        assert!(extract_coefficient(&t, "a_1", 1).is_err());
        assert!(extract_coefficient(&t, "b^4", 1).unwrap().iter().all(|(_, c)| c == &int(0)));
    }

    #[test]
    fn degree_bounds_and_top_part() {
        for (g, n) in [(1, 2), (2, 0), (2, 1)] {
            let full = assemble_dr(g, n, 2, Flavor::Full, &eval()).unwrap();
            let top = assemble_dr(g, n, 2, Flavor::Top, &eval()).unwrap();
            for e in &full.entries {
                assert!(e.poly.total_degree().unwrap_or(0) <= 2 * e.stratum.codim());
                let t = top.get(&e.stratum).cloned().unwrap_or_else(MultiPoly::zero);
                assert_eq!(t, e.poly.homogeneous_part(2 * e.stratum.codim()), "{}", e.stratum);
            }
            for e in &top.entries {
                assert!(e.poly.is_homogeneous(2 * e.stratum.codim()));
            }
        }
    }

    #[test]
    fn divisor_factor_reassembles() {
        let full = assemble_dr(1, 2, 2, Flavor::Full, &eval()).unwrap();
        let spec = Specialization::symbolic(1, 2);
        for e in &full.entries {
            let bare = DecoratedStratum { divisor: DivisorMonomial::trivial(2), ..e.stratum.clone() };
            let p = full.get(&bare).cloned().unwrap_or_else(MultiPoly::zero);
            let expect = spec.normalize(&(&p * &e.stratum.divisor.exp_coefficient(&spec.b, &spec.legs)));
            assert_eq!(e.poly, expect, "{}", e.stratum);
        }
    }

    #[test]
    fn expansion_of_edge_and_kappa() {
        let s = DecoratedStratum {
            graph: StableGraph::raw(
                vec![StableGraph::v(1, &[1]), StableGraph::v(1, &[2])],
                vec![StableGraph::e(0, 1)],
                false,
            ),
            edge_psi: vec![2],
            divisor: DivisorMonomial { kappa1: 1, psi: vec![0, 0] },
        };
        let terms = s.expand();
        assert_eq!(terms.len(), 6);
        let total: Rational = terms.iter().map(|t| t.1.clone()).sum();
        assert_eq!(total, int(8));
    }
}
