//! Random small instances for the construction theorems, each checked
//! against independently computed constituent distances.

use mtcodes::algebra::{FieldElement, Poly, PrimeField};
use mtcodes::constacyclic::{canonical_generator, divisors, make_constacyclic};
use mtcodes::constructions::{
    build_coprime_concat, build_corollary, build_shared_factor, build_subcode_sum, candidate_splits, check_degenerate,
    qt_bound, ConstructionReport, Evaluator, SubcodeBlock,
};
use mtcodes::factorization::Binomial;
use mtcodes::lincode::{hamming_weight, min_distance_exhaustive, DistanceOptions, GenMatrix, Method};
use mtcodes::rng::StreamRng;
use mtcodes::search::sample_coprime_poly;
use mtcodes::Error;
use rand::seq::IndexedRandom;
use rand::Rng;

/// Largest message count for which an instance is evaluated exhaustively.
pub const MESSAGE_LIMIT: u64 = 200_000;

/// Longest block used by the construction suites.
pub const MAX_BLOCK: usize = 12;

const PRIMES: [u64; 3] = [3, 5, 7];

/// Outcome of one random trial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Trial {
    /// The drawn instance did not meet the hypotheses or was too large.
    Rejected,
    Held,
    Violated(String),
}

pub fn deg(p: &Poly) -> usize {
    p.degree().unwrap_or(0)
}

pub fn random_field(rng: &mut StreamRng) -> PrimeField {
    PrimeField::new(*PRIMES.choose(rng).expect("nonempty")).expect("prime")
}

fn nonzero(rng: &mut StreamRng, f: PrimeField) -> i64 {
    rng.random_range(1..i64::from(f.p()))
}

/// `x^n - a` with `1 <= n <= max_n` and `gcd(n, p) = 1`.
pub fn random_binomial(rng: &mut StreamRng, f: PrimeField, max_n: usize) -> Binomial {
    loop {
        let n = rng.random_range(1..=max_n);
        if !(n as u64).is_multiple_of(u64::from(f.p())) {
            return Binomial::over(f, n, nonzero(rng, f)).expect("valid binomial");
        }
    }
}

/// Monic divisors of `x^n - a` other than `x^n - a` itself.
pub fn proper_divisors(b: &Binomial) -> Vec<Poly> {
    divisors(b, 1 << 12)
        .expect("coprime regime")
        .into_iter()
        .filter(|g| deg(g) < b.n())
        .collect()
}

fn feasible(f: PrimeField, k: usize) -> bool {
    u64::from(f.p())
        .checked_pow(k as u32)
        .is_some_and(|m| m - 1 <= MESSAGE_LIMIT)
}

fn exhaustive() -> Evaluator {
    Evaluator::new(DistanceOptions::with_method(Method::Exhaustive))
}

/// Exact distance of `<g>` mod `x^n - a`, computed here rather than by the
/// builders.
fn constituent_distance(n: usize, a: FieldElement, g: &Poly) -> Result<usize, Error> {
    let c = make_constacyclic(n, a, g)?;
    Ok(min_distance_exhaustive(&c.genmatrix(), u64::MAX)?.d)
}

fn coprime_sample(rng: &mut StreamRng, h: &Poly, max_deg: usize) -> Option<Poly> {
    match sample_coprime_poly(h, max_deg, rng) {
        Ok(p) => Some(p),
        Err(Error::ExhaustedRejections(_)) => None,
        Err(e) => panic!("sampling failed: {e}"),
    }
}

fn evaluate(report: &mut ConstructionReport) -> Result<usize, Error> {
    exhaustive().evaluate(report).map(|r| r.d)
}

fn describe(report: &ConstructionReport) -> String {
    let blocks: Vec<String> = report
        .code
        .generator()
        .blocks()
        .iter()
        .zip(report.code.generator().polys())
        .map(|(b, p)| format!("(x^{}-{}: {})", b.m(), b.a(), p.to_array_string()))
        .collect();
    format!("GF({}) {}", report.code.field().p(), blocks.join(" "))
}

macro_rules! violated {
    ($($t:tt)*) => {
        return Trial::Violated(format!($($t)*))
    };
}

macro_rules! attempt {
    ($e:expr, $ctx:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => violated!("{}: {err}", $ctx),
        }
    };
}

/// Two binomials with `gcd(x^{n1} - a1, x^{n2} - a2) = 1`: the concatenation
/// is exactly `[n1 + n2, k1 + k2, min(d1, d2)]`.
pub fn coprime_concat_trial(rng: &mut StreamRng) -> Trial {
    let f = random_field(rng);
    let b1 = random_binomial(rng, f, MAX_BLOCK);
    let b2 = random_binomial(rng, f, MAX_BLOCK);
    if !b1.to_poly().gcd(&b2.to_poly()).expect("same field").is_one() {
        return Trial::Rejected;
    }
    let g1 = proper_divisors(&b1).choose(rng).cloned().expect("1 divides");
    let g2 = proper_divisors(&b2).choose(rng).cloned().expect("1 divides");
    let (k1, k2) = (b1.n() - deg(&g1), b2.n() - deg(&g2));
    if !feasible(f, k1 + k2) {
        return Trial::Rejected;
    }
    let mut report = attempt!(build_coprime_concat(&exhaustive(), &b1, &g1, &b2, &g2), "build");
    let d = attempt!(evaluate(&mut report), "distance");
    let d1 = attempt!(constituent_distance(b1.n(), b1.a(), &g1), "d1");
    let d2 = attempt!(constituent_distance(b2.n(), b2.a(), &g2), "d2");
    let got = (report.code.n(), report.code.k(), d);
    let want = (b1.n() + b2.n(), k1 + k2, d1.min(d2));
    if got != want {
        violated!("{}: got {got:?}, want {want:?}", describe(&report));
    }
    Trial::Held
}

/// A pair of binomials with a nontrivial common factor, and a split of it.
struct SharedPair {
    b1: Binomial,
    b2: Binomial,
    g: Poly,
    h: Poly,
    h1: Poly,
    h2: Poly,
}

fn shared_pair(rng: &mut StreamRng, distinct_lengths: bool) -> Option<SharedPair> {
    let f = random_field(rng);
    let b1 = random_binomial(rng, f, MAX_BLOCK);
    let b2 = random_binomial(rng, f, MAX_BLOCK);
    if distinct_lengths && b1.n() == b2.n() {
        return None;
    }
    let d = b1.to_poly().gcd(&b2.to_poly()).expect("same field");
    if d.is_one() {
        return None;
    }
    let (g, h) = candidate_splits(&b1, &b2, 1 << 12).ok()?.choose(rng).cloned()?;
    let h1 = b1.to_poly().div_exact(&d).expect("gcd divides");
    let h2 = b2.to_poly().div_exact(&d).expect("gcd divides");
    Some(SharedPair { b1, b2, g, h, h1, h2 })
}

/// Generator `(g p1, g p2)` on binomials sharing a factor: a weight-2
/// codeword exists, so `d <= 2`. Returns whether the exact distance was
/// also computed.
pub fn degenerate_trial(rng: &mut StreamRng) -> (Trial, bool) {
    let Some(s) = shared_pair(rng, true) else {
        return (Trial::Rejected, false);
    };
    let (Some(p1), Some(p2)) = (
        coprime_sample(rng, &(&s.h * &s.h1), s.b1.n() - 1),
        coprime_sample(rng, &(&s.h * &s.h2), s.b2.n() - 1),
    ) else {
        return (Trial::Rejected, false);
    };
    let mut report = match check_degenerate(&s.b1, &s.b2, (&s.g, &s.h), &p1, &p2) {
        Ok(r) => r,
        Err(e) => return (Trial::Violated(format!("build: {e}")), false),
    };
    let Some(w) = report.witness.clone() else {
        return (Trial::Violated(format!("{}: no witness", describe(&report))), false);
    };
    if hamming_weight(&w) != 2 || !report.code.matrix().contains(&w) {
        return (
            Trial::Violated(format!("{}: bad witness {w:?}", describe(&report))),
            false,
        );
    }
    if !feasible(report.code.field(), report.code.k()) {
        return (Trial::Held, false);
    }
    match evaluate(&mut report) {
        Ok(d) if d <= 2 => (Trial::Held, true),
        Ok(d) => (Trial::Violated(format!("{}: d = {d} > 2", describe(&report))), true),
        Err(e) => (Trial::Violated(format!("distance: {e}")), true),
    }
}

/// Generator `(p1 h h1, p2 h h2)`: dimension `deg g`, `d >= d1 + d2`.
pub fn shared_factor_trial(rng: &mut StreamRng) -> Trial {
    let Some(s) = shared_pair(rng, false) else {
        return Trial::Rejected;
    };
    let f = s.b1.field();
    if deg(&s.g) == 0 || !feasible(f, deg(&s.g)) {
        return Trial::Rejected;
    }
    let (Some(p1), Some(p2)) = (
        coprime_sample(rng, &s.g, s.b1.n() - 1),
        coprime_sample(rng, &s.g, s.b2.n() - 1),
    ) else {
        return Trial::Rejected;
    };
    let mut report = attempt!(
        build_shared_factor(&exhaustive(), &s.b1, &s.b2, (&s.g, &s.h), &p1, &p2),
        "build"
    );
    let d = attempt!(evaluate(&mut report), "distance");
    let d1 = attempt!(constituent_distance(s.b1.n(), s.b1.a(), &(&s.h * &s.h1)), "d1");
    let d2 = attempt!(constituent_distance(s.b2.n(), s.b2.a(), &(&s.h * &s.h2)), "d2");
    if report.code.k() != deg(&s.g) || d < d1 + d2 {
        violated!(
            "{}: k = {}, d = {d}, d1 + d2 = {}",
            describe(&report),
            report.code.k(),
            d1 + d2
        );
    }
    Trial::Held
}

/// `SUBCODE(k)` over `ell` blocks with `deg h_i = k`: `d >= sum d_i`.
pub fn subcode_trial(rng: &mut StreamRng, ell: usize) -> Trial {
    let f = random_field(rng);
    let k = rng.random_range(1..=6);
    if !feasible(f, k) {
        return Trial::Rejected;
    }
    let mut specs = Vec::with_capacity(ell);
    for _ in 0..ell {
        let b = random_binomial(rng, f, MAX_BLOCK);
        if b.n() < k {
            return Trial::Rejected;
        }
        let candidates: Vec<Poly> = proper_divisors(&b)
            .into_iter()
            .filter(|g| b.n() - deg(g) == k)
            .collect();
        let Some(g) = candidates.choose(rng).cloned() else {
            return Trial::Rejected;
        };
        let h = b.to_poly().div_exact(&g).expect("divisor");
        let Some(p) = coprime_sample(rng, &h, b.n() - 1) else {
            return Trial::Rejected;
        };
        specs.push(SubcodeBlock { binomial: b, g, p });
    }
    let mut report = attempt!(build_subcode_sum(&exhaustive(), &specs, k), "build");
    let d = attempt!(evaluate(&mut report), "distance");
    let mut sum = 0;
    for s in &specs {
        sum += attempt!(constituent_distance(s.binomial.n(), s.binomial.a(), &s.g), "d_i");
    }
    if report.code.k() != k || d < sum {
        violated!(
            "{}: k = {}, d = {d}, sum d_i = {sum}",
            describe(&report),
            report.code.k()
        );
    }
    Trial::Held
}

/// `SUBCODE(n1)` on `(p1, g p2)` with `deg h = n1`: `d >= d(<g p2>) + 1`.
pub fn corollary_trial(rng: &mut StreamRng) -> Trial {
    let f = random_field(rng);
    let b2 = random_binomial(rng, f, MAX_BLOCK);
    let splits: Vec<(Poly, Poly)> = proper_divisors(&b2)
        .into_iter()
        .map(|g| {
            let h = b2.to_poly().div_exact(&g).expect("divisor");
            (g, h)
        })
        .filter(|(_, h)| deg(h) >= 1 && deg(h) < b2.n())
        .collect();
    let Some((g, h)) = splits.choose(rng).cloned() else {
        return Trial::Rejected;
    };
    let n1 = deg(&h);
    if !feasible(f, n1) {
        return Trial::Rejected;
    }
    let b1 = Binomial::over(f, n1, nonzero(rng, f)).expect("valid binomial");
    let (Some(p1), Some(p2)) = (
        coprime_sample(rng, &b1.to_poly(), n1 - 1),
        coprime_sample(rng, &h, b2.n() - 1),
    ) else {
        return Trial::Rejected;
    };
    let mut report = attempt!(build_corollary(&exhaustive(), &b1, &p1, &b2, (&g, &h), &p2), "build");
    let d = attempt!(evaluate(&mut report), "distance");
    let c2 = attempt!(canonical_generator(b2.n(), b2.a(), &(&g * &p2)), "canonical");
    let d2 = attempt!(constituent_distance(b2.n(), b2.a(), &c2), "d2");
    if report.code.k() != n1 || d < d2 + 1 {
        violated!("{}: k = {}, d = {d}, d2 = {d2}", describe(&report), report.code.k());
    }
    Trial::Held
}

/// Quasi-twisted `(f_1 g, .., f_l g)`: `d >= l d(<g>)`.
pub fn qt_trial(rng: &mut StreamRng) -> Trial {
    let f = random_field(rng);
    let b = random_binomial(rng, f, MAX_BLOCK);
    let g = proper_divisors(&b).choose(rng).cloned().expect("1 divides");
    let h = b.to_poly().div_exact(&g).expect("divisor");
    if !feasible(f, deg(&h)) {
        return Trial::Rejected;
    }
    let ell = rng.random_range(2..=3);
    let mut fs = Vec::with_capacity(ell);
    for _ in 0..ell {
        match coprime_sample(rng, &h, b.n() - 1) {
            Some(p) => fs.push(p),
            None => return Trial::Rejected,
        }
    }
    let mut report = attempt!(qt_bound(&exhaustive(), &b, &g, &fs), "build");
    let d = attempt!(evaluate(&mut report), "distance");
    let dg = attempt!(constituent_distance(b.n(), b.a(), &g), "d(g)");
    if report.code.k() != deg(&h) || d < ell * dg {
        violated!(
            "{}: k = {}, d = {d}, l d(g) = {}",
            describe(&report),
            report.code.k(),
            ell * dg
        );
    }
    Trial::Held
}

/// The span of `x^i g'` mod `x^n - a` for `0 <= i < n`.
pub fn ideal_span(n: usize, a: FieldElement, g: &Poly) -> GenMatrix {
    let rows = (0..n)
        .map(|i| {
            let mut r = g.shift(i).reduce_binomial(n, a.value()).into_coeffs();
            r.resize(n, 0);
            r
        })
        .collect();
    GenMatrix::with_length(a.field(), n, rows).expect("rows have length n")
}

/// Every nonzero polynomial over `f` of degree below `n`.
pub fn all_polys(f: PrimeField, n: usize) -> impl Iterator<Item = Poly> {
    let p = f.p();
    let total = u64::from(p).pow(n as u32);
    (1..total).map(move |mut idx| {
        let coeffs = (0..n)
            .map(|_| {
                let c = (idx % u64::from(p)) as u32;
                idx /= u64::from(p);
                c
            })
            .collect();
        Poly::new(f, coeffs)
    })
}

/// Random `k x n` generator matrix of full rank.
pub fn random_full_rank(rng: &mut StreamRng, f: PrimeField, k: usize, n: usize) -> GenMatrix {
    loop {
        let rows = (0..k)
            .map(|_| (0..n).map(|_| rng.random_range(0..f.p())).collect())
            .collect();
        let m = GenMatrix::with_length(f, n, rows).expect("rows have length n");
        if m.is_full_rank() {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mtcodes::rng::stream;

    fn run(mut trial: impl FnMut(&mut StreamRng) -> Trial, want: usize) {
        let mut rng = stream(99, 0);
        let mut held = 0;
        for _ in 0..want * 200 {
            match trial(&mut rng) {
                Trial::Held => held += 1,
                Trial::Rejected => {}
                Trial::Violated(m) => panic!("{m}"),
            }
            if held == want {
                return;
            }
        }
        panic!("only {held} of {want} instances accepted");
    }

    #[test]
    fn each_generator_produces_instances() {
        run(coprime_concat_trial, 5);
        run(|r| degenerate_trial(r).0, 5);
        run(shared_factor_trial, 5);
        run(|r| subcode_trial(r, 2), 5);
        run(|r| subcode_trial(r, 3), 3);
        run(corollary_trial, 5);
        run(qt_trial, 5);
    }

    #[test]
    fn all_polys_enumerates_nonzero_polys() {
        let f = PrimeField::new(3).unwrap();
        let v: Vec<Poly> = all_polys(f, 2).collect();
        assert_eq!(v.len(), 8);
        assert!(v.iter().all(|p| !p.is_zero() && deg(p) < 2));
    }

    #[test]
    fn ideal_span_of_divisor_has_codimension_deg_g() {
        let f = PrimeField::new(3).unwrap();
        let b = Binomial::over(f, 4, 1).unwrap();
        for g in proper_divisors(&b) {
            assert_eq!(ideal_span(4, b.a(), &g).rank(), 4 - deg(&g));
        }
    }
}
