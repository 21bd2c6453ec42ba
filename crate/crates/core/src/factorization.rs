//! Binomials `x^n - a` over GF(p): irreducible factorization, irreducibility
//! testing, multiplicative orders and the structured gcd of two binomials.

use rand::Rng;

use crate::algebra::{ext_gcd_i64, factor_u64, gcd_u64, FieldElement, Poly, PrimeField};
use crate::error::{Error, Result};
use crate::rng::{self, StreamRng};

/// `x^n - a` with `a != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Binomial {
    n: usize,
    a: FieldElement,
}

impl Binomial {
    pub fn new(n: usize, a: FieldElement) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidBlock("binomial degree must be positive".into()));
        }
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(Self { n, a })
    }

    /// Convenience constructor from a field and a signed constant.
    pub fn over(field: PrimeField, n: usize, a: i64) -> Result<Self> {
        Self::new(n, field.elem(a))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> FieldElement {
        self.a
    }

    pub fn field(&self) -> PrimeField {
        self.a.field()
    }

    /// Whether `gcd(n, p) = 1`, i.e. `x^n - a` is squarefree.
    pub fn is_coprime_regime(&self) -> bool {
        gcd_u64(self.n as u64, self.field().order()) == 1
    }

    pub fn to_poly(&self) -> Poly {
        Poly::binomial(self.field(), self.n, self.a.value())
    }

    fn require_coprime(&self) -> Result<()> {
        if !self.is_coprime_regime() {
            return Err(Error::NotSquarefreeRegime {
                n: self.n,
                p: self.field().p(),
            });
        }
        Ok(())
    }
}

/// Complete factorization of a binomial into distinct monic irreducibles,
/// sorted by degree and then by ascending coefficient array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub input: Binomial,
    pub factors: Vec<Poly>,
}

impl Factorization {
    pub fn product(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::one(self.input.field()), |acc, f| &acc * f)
    }

    /// Number of monic divisors, `2^(#factors)`, saturating.
    pub fn divisor_count(&self) -> u128 {
        1u128.checked_shl(self.factors.len() as u32).unwrap_or(u128::MAX)
    }

    /// Lazily enumerate monic divisors as subset products, at most `cap` of
    /// them. Subsets are visited in binary-counter order over the factor list,
    /// starting with the empty product `1`.
    pub fn divisors(&self, cap: usize) -> impl Iterator<Item = Poly> + '_ {
        let total = self.divisor_count();
        let field = self.input.field();
        (0u128..total).take(cap).map(move |mask| {
            self.factors
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(Poly::one(field), |acc, (_, f)| &acc * f)
        })
    }
}

/// Multiplicative order of `q` modulo `m`.
pub fn mult_order(q: u64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::NotCoprime { q, m });
    }
    if m == 1 {
        return Ok(1);
    }
    if gcd_u64(q % m, m) != 1 {
        return Err(Error::NotCoprime { q, m });
    }
    let phi = euler_phi(m);
    let mut k = phi;
    for (r, _) in factor_u64(phi) {
        while k.is_multiple_of(r) && pow_mod_u64(q, k / r, m) == 1 {
            k /= r;
        }
    }
    Ok(k)
}

pub(crate) fn euler_phi(m: u64) -> u64 {
    factor_u64(m).into_iter().fold(m, |acc, (r, _)| acc / r * (r - 1))
}

fn pow_mod_u64(base: u64, mut e: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128 % m128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        e >>= 1;
    }
    acc as u64
}

/// Factor `x^n - a` with the seed derived from the binomial itself.
pub fn factor_binomial(b: &Binomial) -> Result<Factorization> {
    let seed = (b.field().p() as u64) << 40 ^ (b.n as u64) << 16 ^ b.a.value() as u64;
    factor_binomial_with_rng(b, &mut rng::stream(seed, 0))
}

/// Factor `x^n - a`, drawing splitting probes from `rng`. The output is
/// canonically sorted, so it does not depend on the random stream.
pub fn factor_binomial_with_rng(b: &Binomial, rng: &mut StreamRng) -> Result<Factorization> {
    b.require_coprime()?;
    let f = b.to_poly();
    let mut factors = Vec::new();
    for (d, part) in distinct_degree(&f)? {
        equal_degree(&part, d, rng, &mut factors)?;
    }
    factors.sort_by(|x, y| x.degree().cmp(&y.degree()).then_with(|| x.coeffs().cmp(y.coeffs())));
    Ok(Factorization { input: *b, factors })
}

/// Distinct-degree split of a monic squarefree polynomial: pairs `(d, g)`
/// where `g` is the product of all irreducible factors of degree `d`.
fn distinct_degree(f: &Poly) -> Result<Vec<(usize, Poly)>> {
    let field = f.field();
    let x = Poly::x(field);
    let mut rest = f.monic();
    let mut out = Vec::new();
    let mut frob = x.clone();
    let mut d = 1;
    while rest.deg0() >= 2 * d {
        frob = frob.powmod(field.order(), &rest)?;
        let g = (&frob - &x).gcd(&rest)?;
        if !g.is_one() {
            rest = rest.div_exact(&g)?;
            frob = frob.rem(&rest)?;
            out.push((d, g));
        }
        d += 1;
    }
    if rest.deg0() > 0 {
        out.push((rest.deg0(), rest));
    }
    Ok(out)
}

/// Split a product of distinct irreducibles of common degree `d`.
fn equal_degree(f: &Poly, d: usize, rng: &mut StreamRng, out: &mut Vec<Poly>) -> Result<()> {
    let n = f.deg0();
    if n == d {
        out.push(f.monic());
        return Ok(());
    }
    let field = f.field();
    loop {
        let r = Poly::new(field, (0..n).map(|_| rng.random_range(0..field.p())).collect());
        if r.is_constant() {
            continue;
        }
        let probe = if field.p() == 2 {
            trace_map(&r, d, f)?
        } else {
            &half_power(&r, d, f)? - &Poly::one(field)
        };
        if probe.is_zero() {
            continue;
        }
        let g = probe.gcd(f)?;
        let dg = g.deg0();
        if dg > 0 && dg < n {
            let cofactor = f.div_exact(&g)?;
            equal_degree(&g, d, rng, out)?;
            equal_degree(&cofactor, d, rng, out)?;
            return Ok(());
        }
    }
}

/// `r^((p^d - 1)/2) mod f`, written as `(r^(1 + p + ... + p^(d-1)))^((p-1)/2)`
/// so the exponent never overflows.
fn half_power(r: &Poly, d: usize, f: &Poly) -> Result<Poly> {
    let p = f.field().order();
    let mut norm = r.rem(f)?;
    let mut conj = norm.clone();
    for _ in 1..d {
        conj = conj.powmod(p, f)?;
        norm = norm.mul_mod(&conj, f)?;
    }
    norm.powmod((p - 1) / 2, f)
}

/// `r + r^2 + r^4 + ... + r^(2^(d-1)) mod f` over GF(2).
fn trace_map(r: &Poly, d: usize, f: &Poly) -> Result<Poly> {
    let mut term = r.rem(f)?;
    let mut acc = term.clone();
    for _ in 1..d {
        term = term.mul_mod(&term, f)?;
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let n = match f.degree() {
        None | Some(0) => return Err(Error::ConstantPoly),
        Some(n) => n,
    };
    if n == 1 {
        return Ok(true);
    }
    let f = f.monic();
    let field = f.field();
    let x = Poly::x(field);
    // frob[i] = x^(p^i) mod f
    let mut frob = Vec::with_capacity(n + 1);
    frob.push(x.clone());
    for i in 1..=n {
        let next = frob[i - 1].powmod(field.order(), &f)?;
        frob.push(next);
    }
    if frob[n] != x.rem(&f)? {
        return Ok(false);
    }
    for (r, _) in factor_u64(n as u64) {
        let k = n / r as usize;
        if !(&frob[k] - &x).gcd(&f)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `gcd(x^n1 - a1, x^n2 - a2)`, checked against the binomial-gcd theorem:
/// the result is `1` or `x^e - a1^u a2^v` with `e = gcd(n1, n2)` and
/// `u*(n1/e) + v*(n2/e) = 1`.
pub fn binomial_gcd(b1: &Binomial, b2: &Binomial) -> Result<Poly> {
    let field = b1.field();
    if field != b2.field() {
        return Err(Error::FieldMismatch(field.p(), b2.field().p()));
    }
    b1.require_coprime()?;
    b2.require_coprime()?;
    let d = b1.to_poly().gcd(&b2.to_poly())?;
    if d.is_one() {
        return Ok(d);
    }
    let e = gcd_u64(b1.n as u64, b2.n as u64) as usize;
    let (_, u, v) = ext_gcd_i64((b1.n / e) as i64, (b2.n / e) as i64);
    let a = field.mul(
        field.pow_signed(b1.a.value(), u).expect("a1 nonzero"),
        field.pow_signed(b2.a.value(), v).expect("a2 nonzero"),
    );
    let expected = Poly::binomial(field, e, a);
    if d != expected {
        return Err(Error::StructureViolation(format!(
            "gcd({}, {}) = {d}, expected 1 or {expected}",
            b1.to_poly(),
            b2.to_poly()
        )));
    }
    Ok(d)
}
