//! Generic linear codes over GF(p): generator matrices, row reduction and
//! exact minimum distance.

mod bz;
mod distance;
mod kernel;
mod matrix;

pub use distance::{
    min_distance, min_distance_bz, min_distance_exhaustive, min_distance_with, DistanceOptions, DistanceResult, Method,
    Progress, EXHAUSTIVE_THRESHOLD,
};
pub use matrix::{CodeParams, GenMatrix};

/// Hamming weight of a residue vector.
pub fn hamming_weight(v: &[u32]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}
