//! Mechanical checks of the combinatorial identities behind the DR formula.
//!
//! Every check returns a [`CheckReport`]; a failing report names the first
//! differing term.

pub mod global;
pub mod pergraph;
pub mod push;
pub mod report;
pub mod scalar;
pub mod suite;

pub use global::{check_codim_minus_deg, check_topdeg_global};
pub use pergraph::{
    check_aux_lemma, check_corollary_inversion, check_delta_polynomiality, check_topdeg_per_graph, leg_assignments,
    sample_charges,
};
pub use push::{check_dr_push, check_dr_push_numeric};
pub use report::{CheckReport, Status};
pub use scalar::{check_qbar, check_scalar_identities, qbar};
pub use suite::{run_suite, Suite, SuiteOptions};
