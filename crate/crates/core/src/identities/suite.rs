//! Named groups of checks, run in parallel with deterministic output order.

use std::str::FromStr;

use rayon::prelude::*;

use super::report::CheckReport;
use super::*;
use crate::drinvariant::{Evaluator, Method, Strategy};
use crate::error::{Error, Result};
use crate::graph::{corpus, StableGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Scalar,
    Topdeg,
    Aux,
    Codimdeg,
    Push,
    Unidr,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "scalar" => Suite::Scalar,
            "topdeg" => Suite::Topdeg,
            "aux" => Suite::Aux,
            "codimdeg" => Suite::Codimdeg,
            "push" => Suite::Push,
            "unidr" => Suite::Unidr,
            _ => return Err(Error::Parse(format!("unknown suite {s:?}"))),
        })
    }
}

/// Restrictions and orders for a suite run. `None` means the default grid.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub g: Option<u32>,
    pub n: Option<u32>,
    pub codim: Option<u32>,
    pub series_order: u32,
    pub qbar_order: u32,
    /// Graphs for the per-graph checks; the standard corpus when `None`.
    pub graphs: Option<Vec<StableGraph>>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { g: None, n: None, codim: None, series_order: 20, qbar_order: 4, graphs: None }
    }
}

pub const GLOBAL_CASES: [(u32, u32); 4] = [(1, 1), (1, 2), (2, 0), (2, 1)];
pub const GLOBAL_CODIM: u32 = 2;
pub const PUSH_CASES: [(u32, u32, u32); 3] = [(1, 1, 1), (1, 1, 2), (2, 1, 1)];

enum Job {
    Scalar,
    Qbar,
    Topdeg(StableGraph, Strategy),
    Inversion(StableGraph, Strategy),
    Aux(StableGraph),
    Delta(StableGraph),
    CodimDeg(u32, u32, u32),
    Global(u32, u32, u32),
    Push(u32, u32, u32),
}

impl SuiteOptions {
    fn keep(&self, g: u32, n: u32) -> bool {
        self.g.is_none_or(|x| x == g) && self.n.is_none_or(|x| x == n)
    }

    fn global_cases(&self) -> Vec<(u32, u32, u32)> {
        let mut cases: Vec<(u32, u32)> = GLOBAL_CASES.iter().copied().filter(|&(g, n)| self.keep(g, n)).collect();
        if let (Some(g), Some(n)) = (self.g, self.n) {
            if cases.is_empty() {
                cases.push((g, n));
            }
        }
        cases.into_iter().map(|(g, n)| (g, n, self.codim.unwrap_or(GLOBAL_CODIM))).collect()
    }

    fn push_cases(&self) -> Vec<(u32, u32, u32)> {
        let mut cases: Vec<_> = PUSH_CASES
            .iter()
            .copied()
            .filter(|&(g, n, c)| self.keep(g, n) && self.codim.is_none_or(|x| x == c))
            .collect();
        if let (Some(g), Some(n), Some(c)) = (self.g, self.n, self.codim) {
            if cases.is_empty() {
                cases.push((g, n, c));
            }
        }
        cases
    }

    fn graphs(&self) -> Result<Vec<StableGraph>> {
        let all = match &self.graphs {
            Some(gs) => gs.clone(),
            None => corpus()?,
        };
        let mut out = Vec::new();
        for gr in all {
            if self.keep(gr.genus()?, gr.num_legs() as u32) {
                out.push(gr);
            }
        }
        Ok(out)
    }
}

fn jobs(suite: Suite, opts: &SuiteOptions) -> Result<Vec<Job>> {
    let mut jobs = Vec::new();
    let want = |s: Suite| suite == Suite::All || suite == s;
    if want(Suite::Scalar) {
        jobs.push(Job::Scalar);
        jobs.push(Job::Qbar);
    }
    let graphs = if want(Suite::Topdeg) || want(Suite::Aux) || want(Suite::Unidr) { opts.graphs()? } else { vec![] };
    if want(Suite::Topdeg) {
        for gr in &graphs {
            for s in [Strategy::Laurent, Strategy::Division] {
                jobs.push(Job::Topdeg(gr.clone(), s));
                jobs.push(Job::Inversion(gr.clone(), s));
            }
        }
        for (g, n, c) in opts.global_cases() {
            jobs.push(Job::Global(g, n, c));
        }
    }
    if want(Suite::Aux) {
        for gr in &graphs {
            for h in leg_assignments(gr, gr.num_legs() as u32) {
                jobs.push(Job::Aux(h));
            }
        }
    }
    if want(Suite::Unidr) {
        jobs.extend(graphs.iter().cloned().map(Job::Delta));
    }
    if want(Suite::Codimdeg) {
        for (g, n, c) in opts.global_cases() {
            jobs.push(Job::CodimDeg(g, n, c));
        }
    }
    if want(Suite::Push) {
        for (g, n, c) in opts.push_cases() {
            jobs.push(Job::Push(g, n, c));
        }
    }
    Ok(jobs)
}

/// Runs a suite. Reports are sorted by check name, then parameters.
pub fn run_suite(suite: Suite, opts: &SuiteOptions, eval: &Evaluator) -> Result<Vec<CheckReport>> {
    let division = Evaluator::new(Method::ZagierDivision);
    let jobs = jobs(suite, opts)?;
    let nested: Vec<Vec<CheckReport>> = jobs
        .par_iter()
        .map(|job| -> Result<Vec<CheckReport>> {
            Ok(match job {
                Job::Scalar => check_scalar_identities(opts.series_order)?,
                Job::Qbar => vec![check_qbar(opts.qbar_order)?],
                Job::Topdeg(gr, s) => vec![check_topdeg_per_graph(gr, *s)?],
                Job::Inversion(gr, s) => vec![check_corollary_inversion(gr, *s)?],
                Job::Aux(gr) => vec![check_aux_lemma(gr, Strategy::Laurent)?],
                Job::Delta(gr) => vec![check_delta_polynomiality(gr, &division, Strategy::Laurent)?],
                Job::CodimDeg(g, n, c) => vec![check_codim_minus_deg(*g, *n, *c, eval)?],
                Job::Global(g, n, c) => vec![check_topdeg_global(*g, *n, *c, eval)?],
                Job::Push(g, n, c) => vec![check_dr_push(*g, *n, *c, eval)?],
            })
        })
        .collect::<Result<_>>()?;
    let mut reports: Vec<CheckReport> = nested.into_iter().flatten().collect();
    reports.sort_by(|a, b| (&a.name, &a.params).cmp(&(&b.name, &b.params)));
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restricted_push_suite() {
        let opts = SuiteOptions { g: Some(1), n: Some(1), codim: Some(1), ..Default::default() };
        let eval = Evaluator::new(Method::ZagierLaurent);
        let reports = run_suite(Suite::Push, &opts, &eval).unwrap();
        assert_eq!(reports.len(), 1);
        assert!(reports[0].passed());
        assert!("bogus".parse::<Suite>().is_err());
    }
}
