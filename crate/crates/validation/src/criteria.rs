//! The acceptance criteria, each returning a single pass/fail outcome.

use std::fmt;
use std::time::{Duration, Instant};

use mtcodes::algebra::{Poly, PrimeField};
use mtcodes::constacyclic::{generators_equivalent, make_constacyclic};
use mtcodes::constructions::{ConstructionReport, Evaluator, Template};
use mtcodes::factorization::{binomial_gcd, Binomial};
use mtcodes::lincode::{
    hamming_weight, min_distance_bz, min_distance_exhaustive, CodeParams, DistanceOptions, GenMatrix, Method,
};
use mtcodes::reference::{shared_factor_60, CodeSource, ReferenceFixture};
use mtcodes::rng::{stream, StreamRng};
use mtcodes::search::{run_search, write_results_csv, BestKnownTable, SearchConfig, Verdict};
use rand::Rng;
use rayon::prelude::*;

use crate::instances::{self, all_polys, deg, ideal_span, proper_divisors, random_full_rank, Trial};

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} criterion {:>2}: {} ({:.2?}) - {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed,
            self.detail
        )
    }
}

/// Runs `body`, which reports `(pass, detail)`, and applies `limit`.
fn timed(id: u32, title: &'static str, limit: Option<Duration>, body: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (mut pass, mut detail) = body();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            pass = false;
            detail = format!("{detail}; exceeded the {limit:?} limit");
        }
    }
    Outcome {
        id,
        title,
        pass,
        detail,
        elapsed,
    }
}

fn gf(p: u64) -> PrimeField {
    PrimeField::new(p).expect("prime")
}

fn reference_source(n: usize, k: usize, d: usize) -> CodeSource {
    ReferenceFixture::bundled()
        .codes
        .into_iter()
        .find(|c| (c.expected.n, c.expected.k, c.expected.d) == (n, k, d))
        .map(|c| c.source)
        .expect("bundled reference code")
}

fn reference_template(n: usize, k: usize, d: usize) -> Template {
    match reference_source(n, k, d) {
        CodeSource::Template(t) => t,
        CodeSource::Constacyclic { .. } => panic!("[{n},{k},{d}] is not a template"),
    }
}

fn constacyclic_params(n: usize, k: usize, d: usize, method: Method) -> mtcodes::Result<CodeParams> {
    let CodeSource::Constacyclic { q, n, a, gen } = reference_source(n, k, d) else {
        panic!("[{n},{k},{d}] is not constacyclic");
    };
    let f = PrimeField::new(q)?;
    make_constacyclic(n, f.elem(a), &Poly::from_i64(f, &gen))?.params(&DistanceOptions::with_method(method))
}

fn built(template: &Template, method: Method) -> mtcodes::Result<ConstructionReport> {
    let ev = Evaluator::new(DistanceOptions::with_method(method));
    let mut report = template.build(&ev)?;
    ev.evaluate(&mut report)?;
    Ok(report)
}

fn show(r: &ConstructionReport) -> String {
    let p = r.params().map_or_else(|| "?".into(), |p| p.to_string());
    format!("{p} ({} {})", r.bound_kind, r.bound_value)
}

pub fn criterion_1() -> Outcome {
    timed(1, "binomial gcd examples", Some(Duration::from_secs(1)), || {
        let f = gf(7);
        let cases = [
            ((10, 4), (15, 1), vec![5, 0, 0, 0, 0, 1]),
            ((11, 5), (16, 4), vec![4, 1]),
            ((12, 3), (15, 4), vec![1]),
        ];
        let mut bad = Vec::new();
        for ((n1, a1), (n2, a2), want) in cases {
            let b1 = Binomial::over(f, n1, a1).expect("binomial");
            let b2 = Binomial::over(f, n2, a2).expect("binomial");
            match binomial_gcd(&b1, &b2) {
                Ok(g) if g == Poly::from_i64(f, &want) => {}
                Ok(g) => bad.push(format!("gcd(x^{n1}-{a1}, x^{n2}-{a2}) = {g}")),
                Err(e) => bad.push(e.to_string()),
            }
        }
        (
            bad.is_empty(),
            if bad.is_empty() {
                "3/3 exact".into()
            } else {
                bad.join("; ")
            },
        )
    })
}

pub fn criterion_2() -> Outcome {
    timed(2, "length-60 shared-factor chain", Some(Duration::from_secs(1)), || {
        let c1 = constacyclic_params(20, 6, 9, Method::Exhaustive);
        let c2 = constacyclic_params(40, 6, 18, Method::Exhaustive);
        let mt = built(&shared_factor_60(), Method::Exhaustive);
        match (c1, c2, mt) {
            (Ok(c1), Ok(c2), Ok(mt)) => {
                let ok = (c1.n, c1.k, c1.d) == (20, 6, 9)
                    && (c2.n, c2.k, c2.d) == (40, 6, 18)
                    && mt.params().map(|p| (p.n, p.k, p.d)) == Some((60, 6, 36))
                    && mt.bound_value == 27;
                (ok, format!("{c1}, {c2}, {}", show(&mt)))
            }
            (a, b, c) => (false, format!("{:?} {:?} {:?}", a.err(), b.err(), c.err())),
        }
    })
}

pub fn criterion_3() -> Outcome {
    timed(
        3,
        "length-23 corollary code, exhaustive",
        Some(Duration::from_secs(30)),
        || match built(&reference_template(23, 7, 13), Method::Exhaustive) {
            Ok(r) => {
                let ok = r.params().map(|p| (p.n, p.k, p.d)) == Some((23, 7, 13)) && r.bound_holds() == Some(true);
                (ok, show(&r))
            }
            Err(e) => (false, e.to_string()),
        },
    )
}

pub fn criterion_4() -> Outcome {
    timed(
        4,
        "length-54 subcode, exhaustive, table MATCHES",
        Some(Duration::from_secs(1)),
        || {
            let c2 = constacyclic_params(50, 4, 42, Method::Exhaustive);
            let mt = built(&reference_template(54, 4, 44), Method::Exhaustive);
            match (c2, mt) {
                (Ok(c2), Ok(mt)) => {
                    let p = mt.params().expect("distance computed");
                    let verdict = BestKnownTable::bundled().verdict(p.q, p.n, p.k, p.d);
                    let ok = (c2.n, c2.k, c2.d) == (50, 4, 42)
                        && (p.n, p.k, p.d) == (54, 4, 44)
                        && verdict == Verdict::Matches;
                    let mut detail = format!("{c2}, {}, verdict {verdict}", show(&mt));
                    if !ok {
                        detail.push_str(
                            "; the listed multiplier yields a weight-43 codeword (independently confirmed), \
                         see the decisions ledger",
                        );
                    }
                    (ok, detail)
                }
                (a, b) => (false, format!("{:?} {:?}", a.err(), b.err())),
            }
        },
    )
}

pub fn criterion_5() -> Outcome {
    timed(
        5,
        "length-33 subcode, exhaustive",
        Some(Duration::from_secs(30)),
        || match built(&reference_template(33, 12, 12), Method::Exhaustive) {
            Ok(r) => {
                let exact = r.params().map(|p| (p.n, p.k, p.d)) == Some((33, 12, 12));
                let bound_equal = r.bound_value == 12;
                let mut detail = show(&r);
                if exact && !bound_equal {
                    detail.push_str(
                        "; parameters exact, but the required bound 12 cannot occur: the second \
                         constituent is a [20,12] code, so d2 <= 9 and d1 + d2 <= 11",
                    );
                }
                (exact && bound_equal, detail)
            }
            Err(e) => (false, e.to_string()),
        },
    )
}

/// BZ against exhaustive on `count` random codes with `q^k <= 10^5`.
pub fn bz_agreement(seed: u64, count: usize) -> (usize, Vec<String>) {
    let primes = [2u64, 3, 5, 7, 11];
    let disagreements: Vec<String> = (0..count as u64)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng: StreamRng = stream(seed, i);
            let f = gf(primes[rng.random_range(0..primes.len())]);
            let max_k = (1..=16u32)
                .take_while(|&k| u64::from(f.p()).pow(k) <= 100_000)
                .last()
                .unwrap_or(1);
            let k = rng.random_range(1..=max_k as usize);
            let n = rng.random_range(k..=k + 24);
            let m: GenMatrix = random_full_rank(&mut rng, f, k, n);
            let ex = min_distance_exhaustive(&m, u64::MAX).ok()?;
            let bz = match min_distance_bz(&m) {
                Ok(r) => r,
                Err(e) => return Some(format!("code {i}: bz error {e}")),
            };
            let witness_ok = hamming_weight(&bz.witness) == bz.d && m.contains(&bz.witness);
            (bz.d != ex.d || !witness_ok)
                .then(|| format!("code {i} over GF({}): bz {} exhaustive {}", f.p(), bz.d, ex.d))
        })
        .collect();
    (count, disagreements)
}

pub fn criterion_6() -> Outcome {
    timed(
        6,
        "length-53 subcode via BZ",
        Some(Duration::from_secs(30 * 60)),
        || {
            let (count, bad) = bz_agreement(6, 240);
            if !bad.is_empty() {
                return (
                    false,
                    format!("BZ disagreed on {} of {count} codes: {}", bad.len(), bad.join("; ")),
                );
            }
            match built(&reference_template(53, 18, 21), Method::Bz) {
                Ok(r) => {
                    let ok = r.params().map(|p| (p.n, p.k, p.d)) == Some((53, 18, 21)) && r.bound_value == 12;
                    let mut detail = format!("BZ agreed with exhaustive on {count} codes; {}", show(&r));
                    if !ok {
                        detail.push_str(
                            "; the listed multiplier admits a lower-weight codeword (independently confirmed), \
                         see the decisions ledger",
                        );
                    }
                    (ok, detail)
                }
                Err(e) => (false, e.to_string()),
            }
        },
    )
}

/// Expected gcd of two binomials in the coprime regime: `x^d - a1^u a2^v`
/// when that binomial divides both, else 1.
pub fn expected_binomial_gcd(b1: &Binomial, b2: &Binomial) -> Poly {
    let f = b1.field();
    let (n1, n2) = (b1.n() as i64, b2.n() as i64);
    let (d, u, v) = ext_gcd(n1, n2);
    let (t1, t2) = (n1 / d, n2 / d);
    let c = f.mul(
        f.pow_signed(b1.a().value(), u).expect("nonzero"),
        f.pow_signed(b2.a().value(), v).expect("nonzero"),
    );
    if f.pow(c, t1 as u64) == b1.a().value() && f.pow(c, t2 as u64) == b2.a().value() {
        Poly::binomial(f, d as usize, c)
    } else {
        Poly::one(f)
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (d, x, y) = ext_gcd(b, a % b);
        (d, y, x - (a / b) * y)
    }
}

/// Random binomial pairs in the coprime regime; returns violations.
pub fn gcd_suite(seed: u64, count: usize) -> Vec<String> {
    let primes = [2u64, 3, 5, 7, 11, 13, 17, 31];
    (0..count as u64)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = stream(seed, i);
            let f = gf(primes[rng.random_range(0..primes.len())]);
            let b1 = instances::random_binomial(&mut rng, f, 60);
            let b2 = instances::random_binomial(&mut rng, f, 60);
            let euclid = b1.to_poly().gcd(&b2.to_poly()).ok()?;
            let want = expected_binomial_gcd(&b1, &b2);
            let shape_ok = euclid.is_one() || {
                let m = deg(&euclid);
                m == num_gcd(b1.n(), b2.n()) && euclid == Poly::binomial(f, m, f.neg(euclid.coeff(0)))
            };
            let api = binomial_gcd(&b1, &b2).ok();
            (!shape_ok || euclid != want || api.as_ref() != Some(&euclid)).then(|| {
                format!(
                    "GF({}) x^{}-{} x^{}-{}: euclid {euclid}, expected {want}, api {api:?}",
                    f.p(),
                    b1.n(),
                    b1.a(),
                    b2.n(),
                    b2.a()
                )
            })
        })
        .collect()
}

fn num_gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

pub fn criterion_7() -> Outcome {
    timed(7, "binomial gcd theorem, 1000 random pairs", None, || {
        let bad = gcd_suite(7, 1000);
        (
            bad.is_empty(),
            format!("1000 pairs, {} violations {}", bad.len(), bad.join("; "))
                .trim_end()
                .to_string(),
        )
    })
}

/// Tally of one property suite.
#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub held: usize,
    pub tried: usize,
    pub violations: Vec<String>,
}

/// Runs `trial` on streams `0, 1, ..` until `want` instances hold or
/// `want * 500` draws are spent.
pub fn run_suite(seed: u64, want: usize, trial: impl Fn(&mut StreamRng) -> Trial + Sync) -> Tally {
    const BATCH: u64 = 256;
    let mut tally = Tally::default();
    let mut next = 0u64;
    while tally.held < want && tally.tried < want * 500 {
        let results: Vec<Trial> = (next..next + BATCH)
            .into_par_iter()
            .map(|i| trial(&mut stream(seed, i)))
            .collect();
        next += BATCH;
        for r in results {
            if tally.held >= want {
                break;
            }
            tally.tried += 1;
            match r {
                Trial::Held => tally.held += 1,
                Trial::Rejected => {}
                Trial::Violated(m) => tally.violations.push(m),
            }
        }
    }
    tally
}

pub fn criterion_8() -> Outcome {
    timed(8, "construction theorem suites", None, || {
        let suites: [(&str, usize, Tally); 7] = [
            (
                "coprime concat",
                100,
                run_suite(81, 100, instances::coprime_concat_trial),
            ),
            (
                "degenerate",
                50,
                run_suite(82, 50, |r| instances::degenerate_trial(r).0),
            ),
            ("shared factor", 100, run_suite(83, 100, instances::shared_factor_trial)),
            (
                "subcode l=2",
                100,
                run_suite(84, 100, |r| instances::subcode_trial(r, 2)),
            ),
            (
                "subcode l=3",
                100,
                run_suite(85, 100, |r| instances::subcode_trial(r, 3)),
            ),
            ("corollary", 50, run_suite(86, 50, instances::corollary_trial)),
            ("qt", 50, run_suite(87, 50, instances::qt_trial)),
        ];
        let mut pass = true;
        let mut parts = Vec::new();
        for (name, want, t) in &suites {
            pass &= t.held >= *want && t.violations.is_empty();
            let mut s = format!("{name} {}/{want}", t.held);
            if !t.violations.is_empty() {
                s.push_str(&format!(" VIOLATIONS: {}", t.violations.join(" | ")));
            }
            parts.push(s);
        }
        (pass, parts.join(", "))
    })
}

/// For every divisor `g` of `x^n - a` over GF(3) and every nonzero `p` of
/// degree below `n`: `<g p> = <g>` by the library, by `gcd(p, h) = 1`, and
/// by row spaces must agree. Returns (cases, disagreements).
pub fn lemma_suite(lengths: &[usize]) -> (usize, Vec<String>) {
    let f = gf(3);
    let mut cases = 0;
    let mut bad = Vec::new();
    for &n in lengths {
        for a in 1..=2 {
            let b = Binomial::over(f, n, a).expect("binomial");
            let mut gs = proper_divisors(&b);
            gs.push(b.to_poly());
            for g in gs {
                let h = b.to_poly().div_exact(&g).expect("divisor");
                let base = ideal_span(n, b.a(), &g);
                let ps: Vec<Poly> = all_polys(f, n).collect();
                cases += ps.len();
                bad.extend(
                    ps.par_iter()
                        .filter_map(|p| {
                            let gp = &g * p;
                            let lib = generators_equivalent(n, b.a(), &g, &gp);
                            let coprime = p.gcd(&h).expect("same field").is_one();
                            let rows = base.same_row_space(&ideal_span(n, b.a(), &gp));
                            (lib.as_ref().ok() != Some(&coprime) || rows != coprime)
                                .then(|| format!("n={n} a={a} g={g} p={p}: lib {lib:?} gcd {coprime} rows {rows}"))
                        })
                        .collect::<Vec<_>>(),
                );
            }
        }
    }
    (cases, bad)
}

pub fn criterion_9() -> Outcome {
    timed(9, "generator equivalence over GF(3), n <= 10", None, || {
        let (cases, bad) = lemma_suite(&[1, 2, 4, 5, 7, 8, 10]);
        (
            bad.is_empty(),
            format!("{cases} cases, {} disagreements {}", bad.len(), bad.join("; "))
                .trim_end()
                .to_string(),
        )
    })
}

/// Search config on the length-60 template with its published multipliers
/// injected as candidate 0.
pub fn determinism_config() -> SearchConfig {
    let Template::SharedFactor { p1, p2, .. } = shared_factor_60() else {
        unreachable!("shared-factor template")
    };
    SearchConfig {
        template: shared_factor_60(),
        multiplier_degree_bounds: vec![5, 8],
        num_candidates: 24,
        seed: 2024,
        distance_budget: 1 << 20,
        keep_top: 24,
        method: Method::Exhaustive,
        inject: vec![vec![p1, p2]],
    }
}

/// Results CSV of `cfg` on a pool of `threads` workers.
pub fn search_csv(cfg: &SearchConfig, threads: usize) -> mtcodes::Result<Vec<u8>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(|| {
        let results = run_search(cfg, &BestKnownTable::bundled())?;
        let mut out = Vec::new();
        write_results_csv(&results, &mut out)?;
        Ok(out)
    })
}

pub fn criterion_10() -> Outcome {
    timed(10, "search determinism across 1, 2, 8 workers", None, || {
        let cfg = determinism_config();
        let runs: Vec<_> = [1, 2, 8].into_iter().map(|t| search_csv(&cfg, t)).collect();
        let runs: Vec<Vec<u8>> = match runs.into_iter().collect() {
            Ok(r) => r,
            Err(e) => return (false, e.to_string()),
        };
        let identical = runs.windows(2).all(|w| w[0] == w[1]);
        let results = run_search(&cfg, &BestKnownTable::bundled()).expect("search ran above");
        let injected = results.iter().find(|r| r.candidate_index == 0);
        let top = results.first().map(|r| (r.candidate_index, r.n, r.k, r.d, r.verdict));
        let ok = identical && top == Some((0, 60, 6, Some(36), Verdict::Matches));
        (
            ok,
            format!(
                "CSVs identical: {identical}; candidate 0: {}",
                injected.map_or("missing".into(), |r| {
                    let d = r.d.map_or_else(|| "?".into(), |d| d.to_string());
                    format!("[{},{},{d}] {}", r.n, r.k, r.verdict)
                })
            ),
        )
    })
}

pub fn all() -> Vec<fn() -> Outcome> {
    vec![
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ]
}
