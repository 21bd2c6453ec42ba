//! Constacyclic codes: ideals of GF(p)[x] / (x^n - a).

use serde::{Deserialize, Serialize};

use crate::algebra::{FieldElement, Poly, PrimeField};
use crate::error::{Error, Result};
use crate::factorization::{factor_binomial, Binomial};
use crate::lincode::{min_distance_with, CodeParams, DistanceOptions, DistanceResult, GenMatrix};

/// A constacyclic code `<g>` of length `n` and shift constant `a`, with
/// canonical (monic, dividing) generator `g` and check polynomial `h`,
/// `g * h = x^n - a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstacyclicCode {
    modulus: Binomial,
    g: Poly,
    h: Poly,
}

impl ConstacyclicCode {
    pub fn n(&self) -> usize {
        self.modulus.n()
    }

    pub fn a(&self) -> FieldElement {
        self.modulus.a()
    }

    pub fn field(&self) -> PrimeField {
        self.modulus.field()
    }

    pub fn binomial(&self) -> &Binomial {
        &self.modulus
    }

    pub fn generator(&self) -> &Poly {
        &self.g
    }

    pub fn check_poly(&self) -> &Poly {
        &self.h
    }

    /// Dimension `deg h = n - deg g`.
    pub fn k(&self) -> usize {
        self.h.deg0()
    }

    /// Basis `x^i g mod (x^n - a)` for `i < k`.
    pub fn genmatrix(&self) -> GenMatrix {
        let n = self.n();
        let a = self.a().value();
        let rows = (0..self.k())
            .map(|i| {
                let r = self.g.shift(i).reduce_binomial(n, a);
                let mut row = r.into_coeffs();
                row.resize(n, 0);
                row
            })
            .collect();
        GenMatrix::with_length(self.field(), n, rows).expect("rows have length n")
    }

    pub fn min_distance(&self, opts: &DistanceOptions) -> Result<DistanceResult> {
        min_distance_with(&self.genmatrix(), opts)
    }

    pub fn params(&self, opts: &DistanceOptions) -> Result<CodeParams> {
        let d = self.min_distance(opts)?.d;
        CodeParams::new(self.n(), self.k(), d, self.field().p())
    }
}

/// Validate `g | x^n - a` and build the code. `g` is normalized to monic.
pub fn make_constacyclic(n: usize, a: FieldElement, g: &Poly) -> Result<ConstacyclicCode> {
    let modulus = Binomial::new(n, a)?;
    if g.field() != a.field() {
        return Err(Error::FieldMismatch(a.field().p(), g.field().p()));
    }
    let deg = g.degree().ok_or(Error::ZeroGenerator)?;
    if deg >= n {
        return Err(Error::DegenerateGenerator { deg, n });
    }
    let g = g.monic();
    let (h, r) = modulus.to_poly().divmod(&g)?;
    if !r.is_zero() {
        return Err(Error::NotADivisor { n, a: a.value() });
    }
    Ok(ConstacyclicCode { modulus, g, h })
}

/// `gcd(g', x^n - a)`: the canonical generator of the ideal `<g'>`.
pub fn canonical_generator(n: usize, a: FieldElement, g_prime: &Poly) -> Result<Poly> {
    if g_prime.is_zero() {
        return Err(Error::ZeroGenerator);
    }
    let modulus = Binomial::new(n, a)?.to_poly();
    g_prime.gcd(&modulus)
}

/// Whether `<g'> = <g>` in GF(p)[x]/(x^n - a), for canonical `g`.
pub fn generators_equivalent(n: usize, a: FieldElement, g: &Poly, g_prime: &Poly) -> Result<bool> {
    let modulus = Binomial::new(n, a)?.to_poly();
    if g.is_zero() || !g.divides(&modulus)? {
        return Err(Error::NotCanonical { n, a: a.value() });
    }
    Ok(canonical_generator(n, a, g_prime)? == g.monic())
}

/// `(c_0, ..., c_{n-1}) -> (a c_{n-1}, c_0, ..., c_{n-2})`.
pub fn constacyclic_shift(v: &[u32], a: FieldElement) -> Vec<u32> {
    let Some((&last, rest)) = v.split_last() else {
        return Vec::new();
    };
    let f = a.field();
    let mut out = Vec::with_capacity(v.len());
    out.push(f.mul(a.value(), last));
    out.extend_from_slice(rest);
    out
}

/// Up to `cap` monic divisors of `x^n - a`, as subset products of its
/// irreducible factors (binary-counter order, starting with `1`).
pub fn divisors(b: &Binomial, cap: usize) -> Result<Vec<Poly>> {
    let f = factor_binomial(b)?;
    Ok(f.divisors(cap).collect())
}

/// JSON fragment `{"n": 20, "a": 2, "gen": [2,2,0,0,1,1,1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstacyclicSpec {
    pub n: usize,
    pub a: i64,
    pub gen: Vec<i64>,
}

impl ConstacyclicSpec {
    pub fn build(&self, field: PrimeField) -> Result<ConstacyclicCode> {
        make_constacyclic(self.n, field.elem(self.a), &Poly::from_i64(field, &self.gen))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincode::min_distance_exhaustive;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn poly(p: u64, c: &[i64]) -> Poly {
        Poly::from_i64(gf(p), c)
    }

    fn reference_h20() -> (Poly, Poly) {
        // x^20 - 2 = g h over GF(3)
        let g = poly(3, &[2, 2, 0, 0, 1, 1, 1]);
        let h = Poly::binomial(gf(3), 20, 2).div_exact(&g).unwrap();
        (g, h)
    }

    #[test]
    fn make_examples() {
        let f3 = gf(3);
        let (_, h) = reference_h20();
        let c = make_constacyclic(20, f3.elem(2), &h).unwrap();
        assert_eq!(c.k(), 6);
        let d = min_distance_exhaustive(&c.genmatrix(), u64::MAX).unwrap().d;
        assert_eq!(d, 9);

        let full = make_constacyclic(5, f3.elem(1), &Poly::one(f3)).unwrap();
        assert_eq!(full.k(), 5);
        assert_eq!(
            full.params(&DistanceOptions::default()).unwrap(),
            CodeParams::new(5, 5, 1, 3).unwrap()
        );

        let f7 = gf(7);
        let c = make_constacyclic(4, f7.elem(2), &Poly::one(f7)).unwrap();
        assert_eq!(
            c.params(&DistanceOptions::default()).unwrap(),
            CodeParams::new(4, 4, 1, 7).unwrap()
        );
    }

    #[test]
    fn make_errors() {
        let f3 = gf(3);
        assert_eq!(
            make_constacyclic(4, f3.elem(1), &poly(3, &[1, 0, 1, 1])),
            Err(Error::NotADivisor { n: 4, a: 1 })
        );
        assert_eq!(
            make_constacyclic(4, f3.elem(1), &Poly::binomial(f3, 4, 1)),
            Err(Error::DegenerateGenerator { deg: 4, n: 4 })
        );
        assert_eq!(
            make_constacyclic(4, f3.elem(1), &Poly::zero(f3)),
            Err(Error::ZeroGenerator)
        );
    }

    #[test]
    fn genmatrix_examples() {
        let f5 = gf(5);
        let c = make_constacyclic(3, f5.elem(1), &Poly::one(f5)).unwrap();
        assert_eq!(c.genmatrix(), GenMatrix::identity(f5, 3));

        let f3 = gf(3);
        let c = make_constacyclic(2, f3.elem(1), &poly(3, &[-1, 1])).unwrap();
        assert_eq!(c.genmatrix().rows(), vec![vec![2, 1]]);
    }

    #[test]
    fn canonical_generator_examples() {
        let f3 = gf(3);
        let (g, h) = reference_h20();
        // p coprime to h
        let p = poly(3, &[1, 1]);
        assert!(p.gcd(&h).unwrap().is_one());
        assert_eq!(canonical_generator(20, f3.elem(2), &(&g * &p)).unwrap(), g);
        assert!(canonical_generator(20, f3.elem(2), &Poly::one(f3)).unwrap().is_one());
        assert_eq!(
            canonical_generator(20, f3.elem(2), &Poly::zero(f3)),
            Err(Error::ZeroGenerator)
        );
    }

    #[test]
    fn canonical_generator_matches_row_space() {
        // g' = g (x - 1) for the divisor of x^16 - 1 used in the GF(7) corollary example
        let f7 = gf(7);
        let g = poly(7, &[6, 2, 1, 3, 5, 1, 2, 1, 6, 1]);
        let g_prime = &g * &poly(7, &[-1, 1]);
        let canon = canonical_generator(16, f7.elem(1), &g_prime).unwrap();
        let spanned = GenMatrix::new(
            f7,
            (0..16)
                .map(|i| {
                    let mut r = g_prime.shift(i).reduce_binomial(16, 1).into_coeffs();
                    r.resize(16, 0);
                    r
                })
                .collect(),
        )
        .unwrap();
        let canon_code = make_constacyclic(16, f7.elem(1), &canon).unwrap();
        assert!(spanned.same_row_space(&canon_code.genmatrix()));
    }

    #[test]
    fn equivalence_examples() {
        let f3 = gf(3);
        let (g, h) = reference_h20();
        let a = f3.elem(2);
        assert!(generators_equivalent(20, a, &g, &(&g * &poly(3, &[1, 1]))).unwrap());
        assert!(!generators_equivalent(20, a, &g, &(&g * &h)).unwrap());
        assert_eq!(
            generators_equivalent(20, a, &poly(3, &[1, 0, 1, 1]), &g),
            Err(Error::NotCanonical { n: 20, a: 2 })
        );
    }

    #[test]
    fn shift_examples() {
        let f3 = gf(3);
        assert_eq!(constacyclic_shift(&[1, 2, 0, 2], f3.elem(2)), vec![1, 1, 2, 0]);
        assert!(constacyclic_shift(&[], f3.elem(2)).is_empty());
    }

    #[test]
    fn divisors_give_codes_of_expected_dimension_closed_under_shift() {
        for p in [3u64, 5, 7] {
            let f = gf(p);
            for n in 1..=12usize {
                if (n as u64).is_multiple_of(p) {
                    continue;
                }
                for a in 1..p as i64 {
                    let b = Binomial::over(f, n, a).unwrap();
                    for g in divisors(&b, 64).unwrap() {
                        if g.deg0() >= n {
                            continue;
                        }
                        let c = make_constacyclic(n, f.elem(a), &g).unwrap();
                        let m = c.genmatrix();
                        assert_eq!(m.rank(), n - g.deg0());
                        for row in m.rows() {
                            assert!(m.contains(&constacyclic_shift(&row, f.elem(a))));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn equivalence_agrees_with_row_space_oracle() {
        use rand::Rng;
        let f3 = gf(3);
        let mut rng = crate::rng::stream(11, 0);
        let span = |n: usize, a: u32, g: &Poly| {
            let rows = (0..n)
                .map(|i| {
                    let mut r = g.shift(i).reduce_binomial(n, a).into_coeffs();
                    r.resize(n, 0);
                    r
                })
                .collect();
            GenMatrix::with_length(f3, n, rows).unwrap()
        };
        for _ in 0..300 {
            let n = rng.random_range(1..=12usize);
            if n % 3 == 0 {
                continue;
            }
            let a = rng.random_range(1..3u32);
            let b = Binomial::over(f3, n, a as i64).unwrap();
            let divs = divisors(&b, 64).unwrap();
            let g = &divs[rng.random_range(0..divs.len())];
            let p: Vec<u32> = (0..rng.random_range(1..6)).map(|_| rng.random_range(0..3)).collect();
            let p = Poly::new(f3, p);
            if p.is_zero() {
                continue;
            }
            let g_prime = g * &p;
            if g_prime.reduce_binomial(n, a).is_zero() {
                continue;
            }
            let oracle = span(n, a, g).same_row_space(&span(n, a, &g_prime));
            assert_eq!(
                generators_equivalent(n, f3.elem(a as i64), g, &g_prime).unwrap(),
                oracle
            );
        }
    }

    #[test]
    fn spec_fragment_round_trip() {
        let spec: ConstacyclicSpec = serde_json::from_str(r#"{"n": 20, "a": 2, "gen": [2,2,0,0,1,1,1]}"#).unwrap();
        let c = spec.build(gf(3)).unwrap();
        assert_eq!(c.k(), 14);
        let again: ConstacyclicSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(again, spec);
    }
}
