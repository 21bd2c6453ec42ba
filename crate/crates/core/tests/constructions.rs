//! Construction reports on small instances: hypotheses, bounds, and
//! agreement with codes assembled directly.

use mtcodes::algebra::{Poly, PrimeField};
use mtcodes::constacyclic::divisors;
use mtcodes::constructions::{
    build_coprime_concat, build_shared_factor, candidate_splits, qt_bound, BoundKind, Evaluator, Template,
};
use mtcodes::factorization::Binomial;
use mtcodes::lincode::{hamming_weight, DistanceOptions, Method};
use mtcodes::mtcore::{make_mt_code, MtBlock, MtGenerator};
use mtcodes::reference::shared_factor_60;
use mtcodes::Error;
use proptest::prelude::*;

fn gf(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn exhaustive() -> Evaluator {
    Evaluator::new(DistanceOptions::with_method(Method::Exhaustive))
}

fn deg(p: &Poly) -> usize {
    p.degree().unwrap_or(0)
}

/// All codewords of a small code, by enumerating messages.
fn codewords(m: &mtcodes::lincode::GenMatrix) -> Vec<Vec<u32>> {
    let q = u64::from(m.field().p());
    let total = q.pow(m.k() as u32);
    (1..total)
        .map(|mut i| {
            let msg: Vec<u32> = (0..m.k())
                .map(|_| {
                    let d = (i % q) as u32;
                    i /= q;
                    d
                })
                .collect();
            m.encode(&msg).unwrap()
        })
        .collect()
}

fn arb_binomial(p: u64) -> impl Strategy<Value = Binomial> {
    (1usize..=10, 1..p as i64)
        .prop_filter("coprime regime", move |(n, _)| !(*n as u64).is_multiple_of(p))
        .prop_map(move |(n, a)| Binomial::over(gf(p), n, a).unwrap())
}

fn arb_pair() -> impl Strategy<Value = (Binomial, Binomial)> {
    prop_oneof![Just(3u64), Just(5), Just(7)].prop_flat_map(|p| (arb_binomial(p), arb_binomial(p)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn coprime_concat_dimension_and_exact_distance((b1, b2) in arb_pair(), i in any::<usize>(), j in any::<usize>()) {
        let d1s = divisors(&b1, 256).unwrap();
        let d2s = divisors(&b2, 256).unwrap();
        let g1 = &d1s[i % d1s.len()];
        let g2 = &d2s[j % d2s.len()];
        prop_assume!(deg(g1) < b1.n() && deg(g2) < b2.n());
        let k = b1.n() - deg(g1) + b2.n() - deg(g2);
        prop_assume!(u64::from(b1.field().p()).pow(k as u32) <= 100_000);
        let ev = exhaustive();
        match build_coprime_concat(&ev, &b1, g1, &b2, g2) {
            Ok(mut r) => {
                prop_assert_eq!(r.code.k(), k);
                ev.evaluate(&mut r).unwrap();
                prop_assert_eq!(r.bound_kind, BoundKind::ExactMin);
                prop_assert_eq!(r.bound_holds(), Some(true));
            }
            Err(Error::GcdNotOne(_)) => {
                prop_assert!(!b1.to_poly().gcd(&b2.to_poly()).unwrap().is_one());
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn shared_factor_has_no_single_block_codewords((b1, b2) in arb_pair(), pick in any::<usize>()) {
        let splits = candidate_splits(&b1, &b2, 256).unwrap();
        prop_assume!(!splits.is_empty());
        let (g, h) = &splits[pick % splits.len()];
        prop_assume!(deg(g) >= 1 && u64::from(b1.field().p()).pow(deg(g) as u32) <= 20_000);
        let one = Poly::one(b1.field());
        let ev = exhaustive();
        let mut r = build_shared_factor(&ev, &b1, &b2, (g, h), &one, &one).unwrap();
        prop_assert_eq!(r.code.k(), deg(g));
        let n1 = b1.n();
        for c in codewords(r.code.matrix()) {
            prop_assert!(hamming_weight(&c[..n1]) > 0 && hamming_weight(&c[n1..]) > 0);
        }
        ev.evaluate(&mut r).unwrap();
        prop_assert_eq!(r.bound_holds(), Some(true));
    }

    #[test]
    fn qt_matches_direct_mt_code(b in prop_oneof![arb_binomial(3), arb_binomial(5)], i in any::<usize>(), ell in 1usize..=3) {
        let ds = divisors(&b, 256).unwrap();
        let g = &ds[i % ds.len()];
        prop_assume!(deg(g) < b.n());
        let f = b.field();
        let fs: Vec<Poly> = (0..ell).map(|t| Poly::new(f, vec![1 + t as u32 % (f.p() - 1)])).collect();
        let r = qt_bound(&exhaustive(), &b, g, &fs).unwrap();
        let block = MtBlock::new(b.n(), b.a()).unwrap();
        let direct = make_mt_code(
            &MtGenerator::new(vec![block; ell], fs.iter().map(|p| p * g).collect()).unwrap(),
        )
        .unwrap();
        prop_assert!(r.code.matrix().same_row_space(direct.matrix()));
    }
}

#[test]
fn hypotheses_are_checked_before_building() {
    let f = gf(3);
    let b1 = Binomial::over(f, 20, 2).unwrap();
    let b2 = Binomial::over(f, 40, 1).unwrap();
    let one = Poly::one(f);
    // a split that does not multiply to the gcd
    let bad = Poly::from_i64(f, &[1, 1]);
    assert!(matches!(
        build_shared_factor(&exhaustive(), &b1, &b2, (&bad, &one), &one, &one),
        Err(Error::HypothesisViolation(_))
    ));
}

#[test]
fn templates_rebuild_from_their_multipliers() {
    let t = shared_factor_60();
    let ps = t.multipliers().unwrap();
    assert_eq!(t.with_multipliers(&ps).unwrap(), t);
    let mut r = t.build(&exhaustive()).unwrap();
    exhaustive().evaluate(&mut r).unwrap();
    assert_eq!(r.params().unwrap().to_string(), "[60,6,36]_3");
    assert_eq!((r.bound_kind, r.bound_value), (BoundKind::LowerSum, 27));
}

#[test]
fn template_rejects_multiplier_sharing_a_factor() {
    let Template::SharedFactor { q, b1, b2, g, p2, .. } = shared_factor_60() else {
        unreachable!()
    };
    // g itself is never coprime to g
    let t = Template::SharedFactor {
        q,
        b1,
        b2,
        g: g.clone(),
        p1: g,
        p2,
    };
    assert!(matches!(t.build(&exhaustive()), Err(Error::HypothesisViolation(_))));
}
