//! Search runs end to end: determinism, ranking, and recomputability.

use mtcodes::constructions::{Evaluator, Template};
use mtcodes::lincode::{DistanceOptions, Method};
use mtcodes::reference::shared_factor_60;
use mtcodes::rng::stream;
use mtcodes::search::{
    read_results_csv, run_search, sample_coprime_poly, write_results_csv, BestKnownTable, SearchConfig, Verdict,
};

fn config() -> SearchConfig {
    let Template::SharedFactor { p1, p2, .. } = shared_factor_60() else {
        unreachable!()
    };
    SearchConfig {
        template: shared_factor_60(),
        multiplier_degree_bounds: vec![4, 6],
        num_candidates: 20,
        seed: 77,
        distance_budget: 1 << 16,
        keep_top: 10,
        method: Method::Exhaustive,
        inject: vec![vec![p1, p2]],
    }
}

fn csv_with(threads: usize, cfg: &SearchConfig) -> Vec<u8> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| {
        let mut out = Vec::new();
        write_results_csv(&run_search(cfg, &BestKnownTable::bundled()).unwrap(), &mut out).unwrap();
        out
    })
}

#[test]
fn csv_is_byte_identical_for_any_worker_count() {
    let cfg = config();
    let one = csv_with(1, &cfg);
    for t in [2, 5, 8] {
        assert_eq!(csv_with(t, &cfg), one);
    }
}

#[test]
fn injected_reference_multipliers_rank_first() {
    let results = run_search(&config(), &BestKnownTable::bundled()).unwrap();
    let top = &results[0];
    assert_eq!((top.candidate_index, top.n, top.k, top.d), (0, 60, 6, Some(36)));
    assert_eq!(top.verdict, Verdict::Matches);
}

#[test]
fn ranking_is_strict_and_results_recompute() {
    let cfg = config();
    let results = run_search(&cfg, &BestKnownTable::bundled()).unwrap();
    assert_eq!(results.len(), cfg.keep_top);
    for w in results.windows(2) {
        let key = |r: &mtcodes::search::SearchResult| {
            (
                r.d.is_none(),
                std::cmp::Reverse(r.d),
                std::cmp::Reverse(r.k),
                r.candidate_index,
            )
        };
        assert!(key(&w[0]) < key(&w[1]));
    }
    let ev = Evaluator::new(DistanceOptions::with_method(Method::Exhaustive));
    for r in &results {
        let mut report = cfg
            .template
            .with_multipliers(&r.multipliers)
            .unwrap()
            .build(&ev)
            .unwrap();
        ev.evaluate(&mut report).unwrap();
        assert_eq!((report.code.n(), report.code.k(), report.actual_d), (r.n, r.k, r.d));
        assert_eq!(report.bound_value, r.bound);
    }
}

#[test]
fn csv_round_trips_multipliers() {
    let cfg = config();
    let results = run_search(&cfg, &BestKnownTable::bundled()).unwrap();
    let mut out = Vec::new();
    write_results_csv(&results, &mut out).unwrap();
    let rows = read_results_csv(out.as_slice()).unwrap();
    for (row, r) in rows.iter().zip(&results) {
        let coeffs = row.multiplier_coeffs().unwrap();
        let polys: Vec<Vec<i64>> = r
            .multipliers
            .iter()
            .map(|p| p.coeffs().iter().map(|&c| i64::from(c)).collect())
            .collect();
        assert_eq!(coeffs, polys);
    }
}

#[test]
fn samples_are_always_coprime_to_targets() {
    let targets = shared_factor_60().coprime_targets().unwrap();
    let mut rng = stream(3, 0);
    for _ in 0..2000 {
        for h in &targets {
            let p = sample_coprime_poly(h, 7, &mut rng).unwrap();
            assert!(p.gcd(h).unwrap().is_one());
        }
    }
}
