use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bz;
use super::kernel::{add_row, scaled, to_sym, weight, Best, Sym};
use super::matrix::GenMatrix;
use crate::error::{Error, Result};

/// Codeword count above which `Method::Auto` switches to Brouwer-Zimmermann.
pub const EXHAUSTIVE_THRESHOLD: u64 = 1 << 22;

/// Inner Gray-code run length per parallel chunk (in messages, roughly).
const CHUNK_MESSAGES: u64 = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Auto,
    Exhaustive,
    Bz,
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "exhaustive" => Ok(Method::Exhaustive),
            "bz" => Ok(Method::Bz),
            other => Err(Error::Parse(format!("unknown distance method `{other}`"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Auto => "auto",
            Method::Exhaustive => "exhaustive",
            Method::Bz => "bz",
        })
    }
}

/// Pollable progress of a running engine. `done/total` counts messages;
/// the BZ engine additionally publishes its current bounds.
#[derive(Debug, Default)]
pub struct Progress {
    done: AtomicU64,
    total: AtomicU64,
    lower: AtomicU64,
    upper: AtomicU64,
}

impl Progress {
    pub fn new() -> Arc<Self> {
        Arc::new(Self::default())
    }

    /// Fraction of planned work completed, in `[0, 1]`.
    pub fn fraction(&self) -> f64 {
        let total = self.total.load(Ordering::Relaxed);
        if total == 0 {
            return 0.0;
        }
        (self.done.load(Ordering::Relaxed) as f64 / total as f64).min(1.0)
    }

    /// `(lower, upper)` distance bounds; zero until published.
    pub fn bounds(&self) -> (u64, u64) {
        (self.lower.load(Ordering::Relaxed), self.upper.load(Ordering::Relaxed))
    }

    pub(crate) fn set_total(&self, total: u64) {
        self.total.store(total, Ordering::Relaxed);
    }

    pub(crate) fn advance(&self, by: u64) {
        self.done.fetch_add(by, Ordering::Relaxed);
    }

    pub(crate) fn set_bounds(&self, lower: u64, upper: u64) {
        self.lower.store(lower, Ordering::Relaxed);
        self.upper.store(upper, Ordering::Relaxed);
    }
}

#[derive(Clone, Debug, Default)]
pub struct DistanceOptions {
    pub method: Method,
    /// Maximum number of messages any engine may enumerate.
    pub budget: Option<u64>,
    pub progress: Option<Arc<Progress>>,
}

impl DistanceOptions {
    pub fn with_method(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = Some(budget);
        self
    }
}

/// Exact minimum distance together with a codeword attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceResult {
    pub d: usize,
    /// Lexicographically smallest normalized minimum-weight codeword among
    /// those the engine enumerated.
    pub witness: Vec<u32>,
    /// Engine that produced the result (never `Auto`).
    pub method: Method,
    /// Number of messages enumerated.
    pub enumerated: u64,
}

pub(crate) fn check_full_rank(m: &GenMatrix) -> Result<()> {
    let (_, rank) = m.rref_rank()?;
    if rank != m.k() {
        return Err(Error::RankDeficient { rank, k: m.k() });
    }
    Ok(())
}

/// `q^k - 1` as a wide integer (saturating).
pub(crate) fn nonzero_messages(m: &GenMatrix) -> u128 {
    let q = m.field().order() as u128;
    let mut total: u128 = 1;
    for _ in 0..m.k() {
        total = total.saturating_mul(q);
    }
    total - 1
}

/// Minimum distance by enumerating every nonzero message.
pub fn min_distance_exhaustive(m: &GenMatrix, budget: u64) -> Result<DistanceResult> {
    exhaustive(m, budget, None)
}

/// Minimum distance by Brouwer-Zimmermann information-set enumeration.
pub fn min_distance_bz(m: &GenMatrix) -> Result<DistanceResult> {
    bz::min_distance(m, None, None)
}

/// Minimum distance, choosing the engine by code size.
pub fn min_distance(m: &GenMatrix) -> Result<DistanceResult> {
    min_distance_with(m, &DistanceOptions::default())
}

pub fn min_distance_with(m: &GenMatrix, opts: &DistanceOptions) -> Result<DistanceResult> {
    let progress = opts.progress.as_deref();
    match opts.method {
        Method::Exhaustive => exhaustive(m, opts.budget.unwrap_or(u64::MAX), progress),
        Method::Bz => bz::min_distance(m, opts.budget, progress),
        Method::Auto => {
            let limit = opts.budget.unwrap_or(u64::MAX).min(EXHAUSTIVE_THRESHOLD);
            if nonzero_messages(m) <= limit as u128 {
                exhaustive(m, limit, progress)
            } else {
                bz::min_distance(m, opts.budget, progress)
            }
        }
    }
}

fn exhaustive(m: &GenMatrix, budget: u64, progress: Option<&Progress>) -> Result<DistanceResult> {
    let needed = nonzero_messages(m);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    check_full_rank(m)?;
    let best = if m.field().p() < 256 {
        exhaustive_typed::<u8>(m, progress)
    } else {
        exhaustive_typed::<u16>(m, progress)
    };
    Ok(DistanceResult {
        d: best.weight,
        witness: best.witness,
        method: Method::Exhaustive,
        enumerated: needed as u64,
    })
}

/// All `q^k` messages, split into `q^t` chunks by their top `t` coordinates;
/// each chunk walks its remaining `r = k - t` coordinates in modular Gray
/// order, so every step adds exactly one generator row.
fn exhaustive_typed<T: Sym>(m: &GenMatrix, progress: Option<&Progress>) -> Best {
    let field = m.field();
    let q = field.order();
    let k = m.k();
    let rows: Vec<Vec<T>> = m.rows().iter().map(|r| to_sym(r)).collect();
    let qt = T::from_u32(field.p());

    let mut r = 0;
    let mut inner = 1u64;
    while r < k && inner < CHUNK_MESSAGES {
        inner *= q;
        r += 1;
    }
    let t = k - r;
    let chunks = q.pow(t as u32);
    // step s (1-based) bumps the lowest nonzero base-q digit of s
    let steps: Vec<u8> = (1..inner)
        .map(|s| {
            let mut s = s;
            let mut j = 0u8;
            while s % q == 0 {
                s /= q;
                j += 1;
            }
            j
        })
        .collect();
    if let Some(p) = progress {
        p.set_total(chunks * inner);
    }

    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![T::default(); m.n()];
            let mut digits = c;
            for row in &rows[r..] {
                let coef = (digits % q) as u32;
                digits /= q;
                if coef != 0 {
                    add_row(&mut acc, &scaled(field, row, coef), qt);
                }
            }
            let mut best = Best::empty();
            let consider = |acc: &[T], best: &mut Best| {
                let w = weight(acc);
                if w > 0 && w <= best.weight {
                    best.offer(field, w, || acc.iter().map(|v| v.to_u32()).collect());
                }
            };
            consider(&acc, &mut best);
            for &j in &steps {
                add_row(&mut acc, &rows[j as usize], qt);
                consider(&acc, &mut best);
            }
            if let Some(p) = progress {
                p.advance(inner);
            }
            best
        })
        .reduce(Best::empty, Best::merge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeField;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn identity_has_distance_one() {
        for k in 1..=5 {
            let m = GenMatrix::identity(gf(5), k);
            let r = min_distance_exhaustive(&m, u64::MAX).unwrap();
            assert_eq!(r.d, 1);
            assert_eq!(r.witness.iter().filter(|&&v| v != 0).count(), 1);
        }
    }

    #[test]
    fn repetition_code() {
        let m = GenMatrix::new(gf(3), vec![vec![1; 9]]).unwrap();
        let r = min_distance_exhaustive(&m, 10).unwrap();
        assert_eq!(r.d, 9);
        assert_eq!(r.witness, vec![1; 9]);
    }

    #[test]
    fn budget_and_rank_errors() {
        let m = GenMatrix::identity(gf(3), 4);
        assert_eq!(
            min_distance_exhaustive(&m, 79),
            Err(Error::BudgetExceeded { needed: 80, budget: 79 })
        );
        let dep = GenMatrix::new(gf(3), vec![vec![1, 2, 1], vec![2, 1, 2]]).unwrap();
        assert_eq!(
            min_distance_exhaustive(&dep, 100),
            Err(Error::RankDeficient { rank: 1, k: 2 })
        );
    }

    #[test]
    fn large_field_uses_wide_symbols() {
        let f = gf(257);
        let m = GenMatrix::new(f, vec![vec![1, 256, 3, 0], vec![0, 1, 1, 1]]).unwrap();
        let r = min_distance_exhaustive(&m, u64::MAX).unwrap();
        assert_eq!(r.d, 3);
        assert!(m.contains(&r.witness));
    }

    #[test]
    fn progress_reaches_one() {
        let p = Progress::new();
        let m = GenMatrix::identity(gf(3), 9);
        let opts = DistanceOptions {
            method: Method::Exhaustive,
            budget: None,
            progress: Some(p.clone()),
        };
        min_distance_with(&m, &opts).unwrap();
        assert!((p.fraction() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn method_parse() {
        assert_eq!("bz".parse::<Method>().unwrap(), Method::Bz);
        assert!("fast".parse::<Method>().is_err());
    }
}
