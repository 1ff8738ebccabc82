//! DR coefficient tables, the free module of decorated strata, and the
//! forgetful pushforward.

pub mod pushforward;
pub mod strata;
pub mod table;

pub use pushforward::{forget_pushforward, push_sweep};
pub use strata::{DecoratedEdge, DecoratedGraph, DecoratedVertex, StrataKey, StrataVector};
pub use table::{
    assemble_dr, assemble_dr_with, extract_coefficient, DecoratedStratum, DivisorMonomial, DrTable, Flavor, TableEntry,
};
