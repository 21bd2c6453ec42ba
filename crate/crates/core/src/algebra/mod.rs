//! Arithmetic in GF(p) and GF(p)[x].

mod field;
mod poly;

pub use field::{elem_order, FieldElement, PrimeField};
pub use poly::{poly_divmod, poly_ext_gcd, poly_gcd, poly_powmod, Poly};

pub(crate) use field::{ext_gcd_i64, factor_u64, gcd_u64};
