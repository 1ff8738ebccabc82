//! Evaluators for the graph invariant `C(G)` and its specializations.

pub mod cache;
mod division;
pub mod forms;
pub mod invariant;
mod laurent;
pub mod oracle;
pub mod specialize;
pub mod weighting;

pub use cache::{Cache, CacheEntry, Evaluator, Part};
pub use forms::{charge_relation, charge_var};
pub use invariant::{cg, cg_top, cg_with, cg_zagier, GraphInvariant, Method, Strategy};
pub use oracle::{cg_oracle, OracleParams};
pub use specialize::{dr_coeff, specialize, Specialization};
pub use weighting::weighting_sum;
