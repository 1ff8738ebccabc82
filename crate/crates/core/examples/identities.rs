//! Identity checks, one small instance of each.
//!
//! cargo run --release --example identities

use drcalc::drinvariant::{Evaluator, Method, Strategy};
use drcalc::graph::StableGraph;
use drcalc::identities::{
    check_aux_lemma, check_codim_minus_deg, check_corollary_inversion, check_dr_push, check_scalar_identities,
    check_topdeg_global, check_topdeg_per_graph, run_suite, Suite, SuiteOptions,
};

fn main() -> drcalc::Result<()> {
    let eval = Evaluator::new(Method::ZagierLaurent);
    let theta = StableGraph::new(
        vec![StableGraph::v(0, &[1]), StableGraph::v(0, &[])],
        vec![StableGraph::e(0, 1), StableGraph::e(0, 1), StableGraph::e(0, 1)],
    )?;

    let mut reports = check_scalar_identities(12)?;
    reports.push(check_topdeg_per_graph(&theta, Strategy::Laurent)?);
    reports.push(check_corollary_inversion(&theta, Strategy::Division)?);
    reports.push(check_aux_lemma(&theta, Strategy::Laurent)?);
    reports.push(check_codim_minus_deg(1, 1, 2, &eval)?);
    reports.push(check_topdeg_global(1, 2, 2, &eval)?);
    reports.push(check_dr_push(1, 1, 1, &eval)?);
    for r in &reports {
        println!("{r}");
    }

    // The same machinery, grouped: the pushforward suite restricted to genus 1.
    let opts = SuiteOptions { g: Some(1), ..SuiteOptions::default() };
    for r in run_suite(Suite::Push, &opts, &eval)? {
        println!("{r}");
    }
    Ok(())
}
