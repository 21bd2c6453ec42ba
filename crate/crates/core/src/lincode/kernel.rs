//! Residue-vector primitives shared by the distance engines.

use std::cmp::Ordering;
use std::ops::{Add, Sub};

use crate::algebra::PrimeField;

/// Storage type for a residue inside the enumeration hot loops: `u8` when
/// p < 256, `u16` otherwise.
pub(crate) trait Sym:
    Copy + Default + Eq + Ord + Send + Sync + Add<Output = Self> + Sub<Output = Self> + 'static
{
    fn from_u32(v: u32) -> Self;
    fn to_u32(self) -> u32;
}

impl Sym for u8 {
    #[inline]
    fn from_u32(v: u32) -> Self {
        v as u8
    }
    #[inline]
    fn to_u32(self) -> u32 {
        self as u32
    }
}

impl Sym for u16 {
    #[inline]
    fn from_u32(v: u32) -> Self {
        v as u16
    }
    #[inline]
    fn to_u32(self) -> u32 {
        self as u32
    }
}

/// `acc += row (mod q)` without intermediate overflow.
#[inline]
pub(crate) fn add_row<T: Sym>(acc: &mut [T], row: &[T], q: T) {
    for (a, &b) in acc.iter_mut().zip(row) {
        let t = q - b;
        *a = if *a >= t { *a - t } else { *a + b };
    }
}

#[inline]
pub(crate) fn weight<T: Sym>(v: &[T]) -> usize {
    let zero = T::default();
    v.iter().filter(|&&x| x != zero).count()
}

pub(crate) fn to_sym<T: Sym>(row: &[u32]) -> Vec<T> {
    row.iter().map(|&v| T::from_u32(v)).collect()
}

pub(crate) fn scaled<T: Sym>(field: PrimeField, row: &[T], c: u32) -> Vec<T> {
    row.iter().map(|&v| T::from_u32(field.mul(v.to_u32(), c))).collect()
}

/// Scale a nonzero vector so its first nonzero entry is 1.
pub(crate) fn normalize(field: PrimeField, v: &[u32]) -> Vec<u32> {
    match v.iter().find(|&&x| x != 0) {
        None => v.to_vec(),
        Some(&lead) => {
            let inv = field.inv(lead).expect("nonzero");
            v.iter().map(|&x| field.mul(x, inv)).collect()
        }
    }
}

/// Minimum-weight tracker with a deterministic witness: among all codewords
/// of the smallest weight seen, keep the lexicographically smallest one in
/// normalized form (first nonzero entry 1).
#[derive(Clone, Debug)]
pub(crate) struct Best {
    pub weight: usize,
    pub witness: Vec<u32>,
}

impl Best {
    pub fn empty() -> Self {
        Self {
            weight: usize::MAX,
            witness: Vec::new(),
        }
    }

    /// Offer a codeword of weight `w`, materialized lazily by `make`.
    #[inline]
    pub fn offer(&mut self, field: PrimeField, w: usize, make: impl FnOnce() -> Vec<u32>) {
        if w > self.weight {
            return;
        }
        let cand = normalize(field, &make());
        if w < self.weight || cand < self.witness {
            self.weight = w;
            self.witness = cand;
        }
    }

    pub fn merge(self, other: Best) -> Best {
        match self.weight.cmp(&other.weight) {
            Ordering::Less => self,
            Ordering::Greater => other,
            Ordering::Equal => {
                if other.witness < self.witness {
                    other
                } else {
                    self
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_row_wraps_without_overflow() {
        let q = 251u8;
        let mut acc = vec![250u8, 0, 125, 200];
        add_row(&mut acc, &[250, 250, 126, 51], q);
        assert_eq!(acc, vec![249, 250, 0, 0]);
        assert_eq!(weight(&acc), 2);
    }

    #[test]
    fn best_prefers_lighter_then_smaller() {
        let f = PrimeField::new(3).unwrap();
        let mut b = Best::empty();
        b.offer(f, 3, || vec![2, 2, 0, 2]);
        assert_eq!(b.witness, vec![1, 1, 0, 1]);
        b.offer(f, 3, || vec![0, 1, 1, 1]);
        assert_eq!(b.witness, vec![0, 1, 1, 1]);
        b.offer(f, 4, || vec![0, 0, 0, 0]);
        assert_eq!(b.weight, 3);
        let merged = b.clone().merge(Best {
            weight: 2,
            witness: vec![1, 1, 0, 0],
        });
        assert_eq!(merged.weight, 2);
    }
}
