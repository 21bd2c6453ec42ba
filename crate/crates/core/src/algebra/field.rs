use std::fmt;

use crate::error::{Error, Result};

/// The prime field GF(p) for a prime `p < 2^16`.
///
/// Elements are plain residues in `[0, p)`; products of two residues fit in
/// a `u32`, so no wide arithmetic is needed anywhere.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub const MAX_MODULUS: u64 = 1 << 16;

    pub fn new(p: u64) -> Result<Self> {
        if !(2..Self::MAX_MODULUS).contains(&p) {
            return Err(Error::OutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p: p as u32 })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    /// Size of the field as a wide integer, for counting arguments.
    #[inline]
    pub fn order(self) -> u64 {
        self.p as u64
    }

    /// Reduce an arbitrary (possibly negative) integer to a canonical residue.
    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn elem(self, v: i64) -> FieldElement {
        FieldElement {
            value: self.reduce(v),
            field: self,
        }
    }

    pub fn zero(self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(self) -> FieldElement {
        self.elem(1)
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        a * b % self.p
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p as u64 - 2))
        }
    }

    /// Raise to a signed power; negative exponents go through the inverse.
    pub fn pow_signed(self, a: u32, e: i64) -> Option<u32> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            self.inv(a).map(|ai| self.pow(ai, e.unsigned_abs()))
        }
    }

    /// Multiplicative order of a nonzero residue.
    pub fn order_of(self, a: u32) -> Result<u64> {
        let a = a % self.p;
        if a == 0 {
            return Err(Error::ZeroElement);
        }
        // The order divides p - 1: strip prime factors while the power stays 1.
        let mut r = self.p as u64 - 1;
        for (q, _) in factor_u64(r) {
            while r.is_multiple_of(q) && self.pow(a, r / q) == 1 {
                r /= q;
            }
        }
        Ok(r)
    }
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

/// An element of a [`PrimeField`], carrying its field so that mixing fields
/// is detected instead of silently producing garbage.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    field: PrimeField,
}

// Arithmetic is fallible (operands must share a field), so the operator traits do not fit.
#[allow(clippy::should_implement_trait)]
impl FieldElement {
    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn field(self) -> PrimeField {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_field(self, other: Self) -> Result<PrimeField> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.p, other.field.p));
        }
        Ok(self.field)
    }

    fn with(self, value: u32) -> Self {
        Self {
            value,
            field: self.field,
        }
    }

    pub fn add(self, other: Self) -> Result<Self> {
        let f = self.same_field(other)?;
        Ok(self.with(f.add(self.value, other.value)))
    }

    pub fn sub(self, other: Self) -> Result<Self> {
        let f = self.same_field(other)?;
        Ok(self.with(f.sub(self.value, other.value)))
    }

    pub fn mul(self, other: Self) -> Result<Self> {
        let f = self.same_field(other)?;
        Ok(self.with(f.mul(self.value, other.value)))
    }

    pub fn div(self, other: Self) -> Result<Self> {
        let f = self.same_field(other)?;
        let inv = f.inv(other.value).ok_or(Error::ZeroElement)?;
        Ok(self.with(f.mul(self.value, inv)))
    }

    pub fn neg(self) -> Self {
        self.with(self.field.neg(self.value))
    }

    pub fn inverse(self) -> Result<Self> {
        let inv = self.field.inv(self.value).ok_or(Error::ZeroElement)?;
        Ok(self.with(inv))
    }

    pub fn pow(self, e: u64) -> Self {
        self.with(self.field.pow(self.value, e))
    }

    /// Smallest `r >= 1` with `self^r = 1`.
    pub fn order(self) -> Result<u64> {
        self.field.order_of(self.value)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.field.p)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Multiplicative order of a nonzero field element.
pub fn elem_order(a: FieldElement) -> Result<u64> {
    a.order()
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Trial-division factorization into (prime, exponent) pairs, ascending.
pub(crate) fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Integer extended gcd: returns `(g, u, v)` with `u*a + v*b = g`.
pub(crate) fn ext_gcd_i64(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0, s0, t0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction() {
        assert_eq!(PrimeField::new(7).unwrap().p(), 7);
        assert_eq!(PrimeField::new(2).unwrap().p(), 2);
        assert_eq!(PrimeField::new(6), Err(Error::NotPrime(6)));
        assert_eq!(PrimeField::new(1), Err(Error::OutOfRange(1)));
        assert_eq!(PrimeField::new(65536), Err(Error::OutOfRange(65536)));
        assert!(PrimeField::new(65521).is_ok());
    }

    #[test]
    fn orders_in_gf7() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(elem_order(f.elem(1)).unwrap(), 1);
        assert_eq!(elem_order(f.elem(4)).unwrap(), 3);
        assert_eq!(elem_order(f.elem(3)).unwrap(), 6);
        assert_eq!(elem_order(f.elem(0)), Err(Error::ZeroElement));
    }

    #[test]
    fn order_matches_repeated_multiplication() {
        for p in (2..100).filter(|&p| is_prime(p)) {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p as u32 {
                let mut r = 1;
                let mut x = a;
                while x != 1 {
                    x = f.mul(x, a);
                    r += 1;
                }
                let ord = f.order_of(a).unwrap();
                assert_eq!(ord, r, "p={p} a={a}");
                assert_eq!((p - 1) % ord, 0);
            }
        }
    }

    #[test]
    fn inverses() {
        for p in (2..100).filter(|&p| is_prime(p)) {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p as u32 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            assert_eq!(f.inv(0), None);
        }
    }

    #[test]
    fn cross_field_is_an_error() {
        let f3 = PrimeField::new(3).unwrap();
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f3.elem(1).add(f5.elem(1)), Err(Error::FieldMismatch(3, 5)));
        assert_eq!(f3.elem(2).mul(f3.elem(2)).unwrap().value(), 1);
        assert_eq!(f5.elem(-2).value(), 3);
    }

    #[test]
    fn integer_ext_gcd() {
        let (g, u, v) = ext_gcd_i64(2, 3);
        assert_eq!((g, u * 2 + v * 3), (1, 1));
    }
}
