use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{FieldElement, PrimeField};
use crate::error::{Error, Result};

/// Dense univariate polynomial over a prime field.
///
/// `coeffs[i]` is the coefficient of `x^i`. The representation is canonical:
/// there is never a trailing zero, so the zero polynomial has no coefficients
/// and its degree is `None` (standing in for minus infinity).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: PrimeField,
    coeffs: Vec<u32>,
}

impl Poly {
    /// Build from residues, reducing each modulo p and trimming.
    pub fn new(field: PrimeField, coeffs: Vec<u32>) -> Self {
        let p = field.p();
        let coeffs = coeffs.into_iter().map(|c| c % p).collect();
        Self::from_raw(field, coeffs)
    }

    /// Build from signed integers (negative values are reduced).
    pub fn from_i64(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::from_raw(field, coeffs.iter().map(|&c| field.reduce(c)).collect())
    }

    /// Caller guarantees all entries are already in `[0, p)`.
    pub(crate) fn from_raw(field: PrimeField, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn zero(field: PrimeField) -> Self {
        Self {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: PrimeField, c: u32) -> Self {
        Self::new(field, vec![c])
    }

    pub fn x(field: PrimeField) -> Self {
        Self::monomial(field, 1, 1)
    }

    pub fn monomial(field: PrimeField, c: u32, n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = c % field.p();
        Self::from_raw(field, coeffs)
    }

    /// The binomial `x^n - a`.
    pub fn binomial(field: PrimeField, n: usize, a: u32) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = 1;
        coeffs[0] = field.sub(coeffs[0], a % field.p());
        Self::from_raw(field, coeffs)
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u32> {
        self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; only for size estimates.
    pub(crate) fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<u32> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(1)
    }

    fn check_field(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.p(), other.field.p()));
        }
        Ok(())
    }

    fn assert_field(&self, other: &Poly) {
        assert!(
            self.field == other.field,
            "polynomial arithmetic across {} and {}",
            self.field,
            other.field
        );
    }

    pub fn scale(&self, c: u32) -> Poly {
        let f = self.field;
        let c = c % f.p();
        Self::from_raw(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    /// Scale so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None | Some(1) => self.clone(),
            Some(lc) => self.scale(self.field.inv(lc).expect("nonzero leading coefficient")),
        }
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn eval_elem(&self, x: FieldElement) -> Result<FieldElement> {
        if x.field() != self.field {
            return Err(Error::FieldMismatch(self.field.p(), x.field().p()));
        }
        Ok(self.field.elem(self.eval(x.value()) as i64))
    }

    pub fn derivative(&self) -> Poly {
        let f = self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, (i as u64 % f.order()) as u32))
            .collect();
        Self::from_raw(f, coeffs)
    }

    /// Multiply by `x^s`.
    pub fn shift(&self, s: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; s];
        coeffs.extend_from_slice(&self.coeffs);
        Self::from_raw(self.field, coeffs)
    }

    /// Quotient and remainder; `f = q*g + r` with `deg r < deg g`.
    pub fn divmod(&self, g: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(g)?;
        let dg = g.degree().ok_or(Error::DivisionByZeroPoly)?;
        let f = self.field;
        if self.coeffs.len() <= dg {
            return Ok((Poly::zero(f), self.clone()));
        }
        let lc_inv = f.inv(g.coeffs[dg]).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0; rem.len() - dg];
        for i in (dg..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let t = f.mul(c, lc_inv);
            quot[i - dg] = t;
            for (j, &gc) in g.coeffs.iter().enumerate() {
                rem[i - dg + j] = f.sub(rem[i - dg + j], f.mul(t, gc));
            }
        }
        rem.truncate(dg);
        Ok((Self::from_raw(f, quot), Self::from_raw(f, rem)))
    }

    pub fn rem(&self, g: &Poly) -> Result<Poly> {
        self.divmod(g).map(|(_, r)| r)
    }

    /// Exact division; errors unless `g` divides `self`.
    pub fn div_exact(&self, g: &Poly) -> Result<Poly> {
        let (q, r) = self.divmod(g)?;
        if !r.is_zero() {
            return Err(Error::HypothesisViolation(format!("{g} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn divides(&self, f: &Poly) -> Result<bool> {
        Ok(f.rem(self)?.is_zero())
    }

    /// Reduce modulo `x^n - a` by folding: `x^(n+i) = a * x^i`.
    pub fn reduce_binomial(&self, n: usize, a: u32) -> Poly {
        assert!(n >= 1, "binomial degree must be positive");
        let f = self.field;
        if self.coeffs.len() <= n {
            return self.clone();
        }
        let mut out = vec![0u32; n];
        // Coefficient of x^(i) contributes a^(i / n) to x^(i mod n).
        let mut factor = 1u32;
        for (chunk_idx, chunk) in self.coeffs.chunks(n).enumerate() {
            if chunk_idx > 0 {
                factor = f.mul(factor, a % f.p());
            }
            for (j, &c) in chunk.iter().enumerate() {
                out[j] = f.add(out[j], f.mul(c, factor));
            }
        }
        Self::from_raw(f, out)
    }

    /// Monic gcd.
    pub fn gcd(&self, g: &Poly) -> Result<Poly> {
        self.check_field(g)?;
        if self.is_zero() && g.is_zero() {
            return Err(Error::BothZero);
        }
        let (mut a, mut b) = (self.clone(), g.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Extended gcd: `(d, u, v)` with `d` monic and `u*self + v*g = d`.
    pub fn ext_gcd(&self, g: &Poly) -> Result<(Poly, Poly, Poly)> {
        self.check_field(g)?;
        if self.is_zero() && g.is_zero() {
            return Err(Error::BothZero);
        }
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), g.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let lc_inv = f.inv(r0.leading().expect("nonzero gcd")).expect("unit");
        Ok((r0.scale(lc_inv), s0.scale(lc_inv), t0.scale(lc_inv)))
    }

    /// Least common multiple, monic. Zero if either input is zero.
    pub fn lcm(&self, g: &Poly) -> Result<Poly> {
        self.check_field(g)?;
        if self.is_zero() || g.is_zero() {
            return Ok(Poly::zero(self.field));
        }
        let d = self.gcd(g)?;
        Ok((&self.div_exact(&d)? * g).monic())
    }

    pub fn mul_mod(&self, other: &Poly, modulus: &Poly) -> Result<Poly> {
        (self * other).rem(modulus)
    }

    /// `base^e mod modulus` by square-and-multiply.
    pub fn powmod(&self, e: u64, modulus: &Poly) -> Result<Poly> {
        self.check_field(modulus)?;
        if modulus.degree().unwrap_or(0) == 0 {
            return Err(Error::ConstantModulus);
        }
        let mut base = self.rem(modulus)?;
        let mut acc = Poly::one(self.field);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, modulus)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, modulus)?;
            }
        }
        Ok(acc)
    }

    /// Ascending coefficient array, e.g. `[5,0,0,0,0,1]` for `x^5 - 2` over GF(7).
    pub fn to_array_string(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.field)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.assert_field(rhs);
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect();
        Poly::from_raw(f, coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.assert_field(rhs);
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect();
        Poly::from_raw(f, coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = self.field;
        Poly::from_raw(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.assert_field(rhs);
        let f = self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let p = f.p() as u64;
        // Accumulate in u64 and reduce once per output coefficient.
        let mut acc = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                acc[i + j] += a as u64 * b as u64;
                if acc[i + j] >= 1 << 62 {
                    acc[i + j] %= p;
                }
            }
        }
        Poly::from_raw(f, acc.into_iter().map(|c| (c % p) as u32).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Free-function form of [`Poly::divmod`].
pub fn poly_divmod(f: &Poly, g: &Poly) -> Result<(Poly, Poly)> {
    f.divmod(g)
}

/// Free-function form of [`Poly::gcd`].
pub fn poly_gcd(f: &Poly, g: &Poly) -> Result<Poly> {
    f.gcd(g)
}

/// Free-function form of [`Poly::ext_gcd`].
pub fn poly_ext_gcd(f: &Poly, g: &Poly) -> Result<(Poly, Poly, Poly)> {
    f.ext_gcd(g)
}

/// Free-function form of [`Poly::powmod`].
pub fn poly_powmod(base: &Poly, e: u64, modulus: &Poly) -> Result<Poly> {
    base.powmod(e, modulus)
}
