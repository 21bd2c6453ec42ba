//! Randomized property suites over the construction theorems and the
//! acceptance criteria built on them.

pub mod criteria;
pub mod instances;
