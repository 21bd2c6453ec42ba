//! Randomized multiplier search over construction templates, ranked against a
//! table of best-known code parameters.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Poly;
use crate::constructions::{Evaluator, Template};
use crate::error::{Error, Result};
use crate::lincode::{DistanceOptions, Method};
use crate::rng::stream;

/// Consecutive rejections after which sampling gives up.
pub const MAX_REJECTIONS: usize = 10_000;

/// Uniform nonzero `p` with `deg p <= max_deg` and `gcd(p, h) = 1`.
pub fn sample_coprime_poly<R: Rng + ?Sized>(h: &Poly, max_deg: usize, rng: &mut R) -> Result<Poly> {
    sample_counting(h, max_deg, rng).map(|(p, _)| p)
}

/// The sample and the number of draws it took.
fn sample_counting<R: Rng + ?Sized>(h: &Poly, max_deg: usize, rng: &mut R) -> Result<(Poly, usize)> {
    let f = h.field();
    let p = f.p();
    for attempt in 1..=MAX_REJECTIONS {
        let coeffs: Vec<u32> = (0..=max_deg).map(|_| rng.random_range(0..p)).collect();
        let cand = Poly::new(f, coeffs);
        if cand.is_zero() {
            continue;
        }
        if h.is_zero() || cand.gcd(h)?.is_one() {
            return Ok((cand, attempt));
        }
    }
    Err(Error::ExhaustedRejections(MAX_REJECTIONS))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct TableRow {
    q: u32,
    n: usize,
    k: usize,
    d: usize,
}

/// Best-known minimum distances keyed by `(q, n, k)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BestKnownTable {
    entries: BTreeMap<(u32, usize, usize), usize>,
}

impl BestKnownTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Entries for the codes reproduced by the bundled examples.
    pub fn bundled() -> Self {
        let mut t = Self::new();
        for (q, n, k, d) in [
            (3, 60, 6, 36),
            (7, 23, 7, 13),
            (7, 54, 4, 44),
            (5, 53, 18, 21),
            (3, 33, 12, 12),
        ] {
            t.insert(q, n, k, d).expect("valid entry");
        }
        t
    }

    pub fn insert(&mut self, q: u32, n: usize, k: usize, d: usize) -> Result<()> {
        if d == 0 {
            return Err(Error::Parse(format!(
                "best-known distance must be positive for ({q},{n},{k})"
            )));
        }
        self.entries.insert((q, n, k), d);
        Ok(())
    }

    pub fn lookup(&self, q: u32, n: usize, k: usize) -> Option<usize> {
        self.entries.get(&(q, n, k)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// CSV with header `q,n,k,d`.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut t = Self::new();
        for row in csv::Reader::from_reader(reader).deserialize::<TableRow>() {
            let r = row?;
            t.insert(r.q, r.n, r.k, r.d)?;
        }
        Ok(t)
    }

    pub fn to_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for (&(q, n, k), &d) in &self.entries {
            w.serialize(TableRow { q, n, k, d })?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn verdict(&self, q: u32, n: usize, k: usize, d: usize) -> Verdict {
        match self.lookup(q, n, k) {
            None => Verdict::Absent,
            Some(best) => match d.cmp(&best) {
                Ordering::Greater => Verdict::Beats,
                Ordering::Equal => Verdict::Matches,
                Ordering::Less => Verdict::Below,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Beats,
    Matches,
    Below,
    Absent,
    /// Distance computation exceeded the budget.
    Skipped,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Beats => "BEATS",
            Verdict::Matches => "MATCHES",
            Verdict::Below => "BELOW",
            Verdict::Absent => "ABSENT",
            Verdict::Skipped => "SKIPPED",
        })
    }
}

impl FromStr for Verdict {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "BEATS" => Verdict::Beats,
            "MATCHES" => Verdict::Matches,
            "BELOW" => Verdict::Below,
            "ABSENT" => Verdict::Absent,
            "SKIPPED" => Verdict::Skipped,
            other => return Err(Error::Parse(format!("unknown verdict `{other}`"))),
        })
    }
}

fn default_budget() -> u64 {
    1 << 28
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub template: Template,
    /// Maximum multiplier degree per slot.
    pub multiplier_degree_bounds: Vec<usize>,
    pub num_candidates: usize,
    #[serde(default)]
    pub seed: u64,
    /// Messages any one candidate's distance computation may enumerate.
    #[serde(default = "default_budget")]
    pub distance_budget: u64,
    pub keep_top: usize,
    #[serde(default)]
    pub method: Method,
    /// Fixed multipliers evaluated as candidates `0, 1, ..`.
    #[serde(default)]
    pub inject: Vec<Vec<Vec<i64>>>,
}

impl SearchConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.num_candidates == 0 {
            return bad("num_candidates must be at least 1".into());
        }
        if self.keep_top == 0 {
            return bad("keep_top must be at least 1".into());
        }
        let lens = self.template.slot_block_lengths();
        if self.multiplier_degree_bounds.len() != lens.len() {
            return bad(format!(
                "template has {} multiplier slots but {} degree bounds were given",
                lens.len(),
                self.multiplier_degree_bounds.len()
            ));
        }
        for (i, (&b, &m)) in self.multiplier_degree_bounds.iter().zip(&lens).enumerate() {
            if b >= m {
                return bad(format!("degree bound {b} for slot {i} is not below block length {m}"));
            }
        }
        if self.inject.len() > self.num_candidates {
            return bad("more injected candidates than num_candidates".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub candidate_index: usize,
    pub multipliers: Vec<Poly>,
    pub q: u32,
    pub n: usize,
    pub k: usize,
    /// `None` when the distance computation was skipped.
    pub d: Option<usize>,
    /// The construction's theorem bound.
    pub bound: usize,
    pub verdict: Verdict,
}

fn rank_order(a: &SearchResult, b: &SearchResult) -> Ordering {
    // computed distances before skipped ones, then d desc, k desc, index asc
    b.d.is_some()
        .cmp(&a.d.is_some())
        .then(b.d.cmp(&a.d))
        .then(b.k.cmp(&a.k))
        .then(a.candidate_index.cmp(&b.candidate_index))
}

fn candidate_multipliers(cfg: &SearchConfig, targets: &[Poly], index: usize) -> Result<Vec<Poly>> {
    if let Some(fixed) = cfg.inject.get(index) {
        let f = cfg.template.field()?;
        return Ok(fixed.iter().map(|c| Poly::from_i64(f, c)).collect());
    }
    let mut rng = stream(cfg.seed, index as u64);
    targets
        .iter()
        .zip(&cfg.multiplier_degree_bounds)
        .map(|(h, &deg)| sample_coprime_poly(h, deg, &mut rng))
        .collect()
}

fn evaluate_candidate(
    cfg: &SearchConfig,
    table: &BestKnownTable,
    ev: &Evaluator,
    targets: &[Poly],
    index: usize,
) -> Result<SearchResult> {
    let multipliers = candidate_multipliers(cfg, targets, index)?;
    let mut report = cfg.template.with_multipliers(&multipliers)?.build(ev)?;
    let q = report.code.field().p();
    let (n, k) = (report.code.n(), report.code.k());
    let (d, verdict) = match ev.evaluate(&mut report) {
        Ok(r) => (Some(r.d), table.verdict(q, n, k, r.d)),
        Err(Error::BudgetExceeded { .. }) => (None, Verdict::Skipped),
        Err(e) => return Err(e),
    };
    Ok(SearchResult {
        candidate_index: index,
        multipliers,
        q,
        n,
        k,
        d,
        bound: report.bound_value,
        verdict,
    })
}

/// Evaluate `num_candidates` candidates and return the `keep_top` best. The
/// output depends only on `(config, table)`, not on the worker count.
pub fn run_search(cfg: &SearchConfig, table: &BestKnownTable) -> Result<Vec<SearchResult>> {
    cfg.validate()?;
    let targets = cfg.template.coprime_targets()?;
    let ev = Evaluator::new(DistanceOptions {
        method: cfg.method,
        budget: Some(cfg.distance_budget),
        progress: None,
    });
    let mut results = (0..cfg.num_candidates)
        .into_par_iter()
        .map(|i| evaluate_candidate(cfg, table, &ev, &targets, i))
        .collect::<Result<Vec<_>>>()?;
    results.sort_by(rank_order);
    results.truncate(cfg.keep_top);
    Ok(results)
}

/// One line of the results CSV.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRow {
    pub rank: usize,
    pub candidate: usize,
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub d: Option<usize>,
    pub bound: usize,
    pub verdict: Verdict,
    /// Semicolon-separated ascending coefficient arrays.
    pub multipliers: String,
}

impl ResultRow {
    pub fn multiplier_coeffs(&self) -> Result<Vec<Vec<i64>>> {
        if self.multipliers.is_empty() {
            return Ok(Vec::new());
        }
        self.multipliers
            .split(';')
            .map(|s| serde_json::from_str(s).map_err(Error::from))
            .collect()
    }
}

pub fn result_rows(results: &[SearchResult]) -> Vec<ResultRow> {
    results
        .iter()
        .enumerate()
        .map(|(i, r)| ResultRow {
            rank: i + 1,
            candidate: r.candidate_index,
            q: r.q,
            n: r.n,
            k: r.k,
            d: r.d,
            bound: r.bound,
            verdict: r.verdict,
            multipliers: r
                .multipliers
                .iter()
                .map(Poly::to_array_string)
                .collect::<Vec<_>>()
                .join(";"),
        })
        .collect()
}

/// Results CSV with header `rank,candidate,q,n,k,d,bound,verdict,multipliers`.
pub fn write_results_csv<W: Write>(results: &[SearchResult], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in result_rows(results) {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_results_csv<R: Read>(reader: R) -> Result<Vec<ResultRow>> {
    csv::Reader::from_reader(reader)
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}
