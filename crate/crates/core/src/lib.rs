//! Multi-twisted codes over prime fields.
//!
//! The crate is layered bottom-up: [`algebra`] provides GF(p) and GF(p)[x],
//! [`factorization`] splits binomials `x^n - a`, [`lincode`] holds generic
//! linear-code machinery and the minimum-distance engines, [`constacyclic`]
//! and [`mtcore`] realize the code families, [`constructions`] turns the
//! construction theorems into checked builders, and [`search`] samples
//! multipliers for those builders.

pub mod algebra;
pub mod error;
pub mod lincode;

pub use error::{Error, Result};
pub mod constacyclic;
pub mod constructions;
pub mod factorization;
pub mod mtcore;
pub mod reference;
pub mod rng;
pub mod search;
