//! Exact computation of double ramification graph invariants and DR formula
//! coefficient tables on stable graphs, with mechanical checkers for the
//! identities relating them.

pub mod cli;
pub mod drclass;
pub mod drinvariant;
pub mod error;
pub mod exactmath;
pub mod graph;
pub mod identities;

pub use error::{Error, Result};
