//! Brouwer-Zimmermann minimum distance.
//!
//! The generator matrix is brought into systematic form on a sequence of
//! disjoint information sets `I_1, I_2, ...`, chosen greedily left to right.
//! A set whose columns only reach rank `r < k` is completed with earlier
//! columns and carries a penalty of `k - r`.
//!
//! Messages are enumerated by weight `w = 1, 2, ...`, per set. Once all
//! messages of weight `<= w_j` have been visited for set `j`, any codeword
//! not yet seen has more than `w_j` nonzeros on that set's pivot columns,
//! hence at least `w_j + 1 - penalty_j` on `I_j`. Summing over the disjoint
//! sets gives a lower bound; the lightest codeword seen is the upper bound.
//! The search stops when they meet.

use rayon::prelude::*;

use super::distance::{check_full_rank, DistanceResult, Method, Progress};
use super::kernel::{add_row, scaled, to_sym, weight, Best, Sym};
use super::matrix::{eliminate, GenMatrix};
use crate::algebra::PrimeField;
use crate::error::{Error, Result};

/// One systematic form of the generator matrix.
#[derive(Debug)]
struct InfoSet<T> {
    /// Pivot column of message coordinate `i`.
    pivots: Vec<usize>,
    /// Columns outside the pivot set, in increasing order.
    others: Vec<usize>,
    /// Rows restricted to `others`.
    rows: Vec<Vec<T>>,
    /// Same rows times 2 (the Gray step from value q-1 back to 1).
    rows2: Vec<Vec<T>>,
    penalty: usize,
}

/// Column sets and their systematic forms, greedy over the columns that are
/// still unused.
fn information_sets(m: &GenMatrix) -> Vec<(Vec<usize>, Vec<Vec<u32>>, usize)> {
    let n = m.n();
    let k = m.k();
    let base = m.rows();
    let mut unused = vec![true; n];
    let mut out = Vec::new();
    loop {
        let mut order: Vec<usize> = (0..n).filter(|&c| unused[c]).collect();
        if order.is_empty() {
            break;
        }
        order.extend((0..n).filter(|&c| !unused[c]));
        let mut rows = base.clone();
        let pivots = eliminate(m.field(), &mut rows, &order);
        debug_assert_eq!(pivots.len(), k);
        let own: Vec<usize> = pivots.iter().copied().filter(|&c| unused[c]).collect();
        if own.is_empty() {
            break;
        }
        for &c in &own {
            unused[c] = false;
        }
        out.push((pivots, rows, k - own.len()));
    }
    out
}

fn prepare<T: Sym>(m: &GenMatrix) -> Vec<InfoSet<T>> {
    let field = m.field();
    information_sets(m)
        .into_iter()
        .map(|(pivots, rows, penalty)| {
            let mut is_pivot = vec![false; m.n()];
            for &c in &pivots {
                is_pivot[c] = true;
            }
            let others: Vec<usize> = (0..m.n()).filter(|&c| !is_pivot[c]).collect();
            let rows: Vec<Vec<T>> = rows
                .iter()
                .map(|r| to_sym(&others.iter().map(|&c| r[c]).collect::<Vec<_>>()))
                .collect();
            let rows2 = rows.iter().map(|r| scaled(field, r, 2)).collect();
            InfoSet {
                pivots,
                others,
                rows,
                rows2,
                penalty,
            }
        })
        .collect()
}

pub(crate) fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Normalized messages of weight `w` (first nonzero coordinate is 1).
fn level_size(k: usize, w: usize, q: u64) -> u128 {
    binomial(k, w) * ((q - 1) as u128).pow(w as u32 - 1)
}

pub(crate) fn min_distance(m: &GenMatrix, budget: Option<u64>, progress: Option<&Progress>) -> Result<DistanceResult> {
    check_full_rank(m)?;
    if m.field().p() < 256 {
        run::<u8>(m, budget, progress)
    } else {
        run::<u16>(m, budget, progress)
    }
}

fn run<T: Sym>(m: &GenMatrix, budget: Option<u64>, progress: Option<&Progress>) -> Result<DistanceResult> {
    let field = m.field();
    let k = m.k();
    let q = field.order();
    let sets = prepare::<T>(m);
    let mut completed = vec![0usize; sets.len()];
    let mut best = Best::empty();
    let mut enumerated: u128 = 0;

    let lower_bound = |completed: &[usize]| -> usize {
        sets.iter()
            .zip(completed)
            .map(|(s, &c)| (c + 1).saturating_sub(s.penalty))
            .sum()
    };

    'levels: for w in 1..=k {
        // every level of every set is visited, even where the set cannot
        // raise the bound yet: the bound for level w assumes all lighter
        // messages of that set were seen
        for (j, set) in sets.iter().enumerate() {
            let size = level_size(k, w, q);
            if let Some(b) = budget {
                if enumerated + size > b as u128 {
                    return Err(Error::BudgetExceeded {
                        needed: enumerated + size,
                        budget: b,
                    });
                }
            }
            if let Some(p) = progress {
                p.set_total((enumerated + size).min(u64::MAX as u128) as u64);
            }
            best = best.merge(enumerate_level(field, set, k, w, progress));
            enumerated += size;
            completed[j] = w;
            let lower = lower_bound(&completed);
            if let Some(p) = progress {
                p.set_bounds(lower as u64, best.weight as u64);
            }
            if lower >= best.weight {
                break 'levels;
            }
        }
    }

    Ok(DistanceResult {
        d: best.weight,
        witness: best.witness,
        method: Method::Bz,
        enumerated: enumerated.min(u64::MAX as u128) as u64,
    })
}

/// Visit every normalized weight-`w` message of one systematic form.
/// Work is split by the first support position; each task walks the rest
/// of the support lexicographically and the nonzero values in Gray order.
fn enumerate_level<T: Sym>(
    field: PrimeField,
    set: &InfoSet<T>,
    k: usize,
    w: usize,
    progress: Option<&Progress>,
) -> Best {
    let q = field.p();
    let qt = T::from_u32(q);
    let radix = (q - 1) as u64;
    let value_steps = radix.pow(w as u32 - 1);
    let width = set.others.len();

    (0..=k - w)
        .into_par_iter()
        .map(|first| {
            let mut best = Best::empty();
            let mut support: Vec<usize> = (first..first + w).collect();
            let mut vals = vec![1u32; w];
            let mut acc = vec![T::default(); width];
            loop {
                acc.iter_mut().for_each(|v| *v = T::default());
                for &s in &support {
                    add_row(&mut acc, &set.rows[s], qt);
                }
                vals.iter_mut().for_each(|v| *v = 1);
                visit(field, set, &support, &vals, &acc, w, &mut best);
                for step in 1..value_steps {
                    let mut s = step;
                    let mut digit = 0;
                    while s % radix == 0 {
                        s /= radix;
                        digit += 1;
                    }
                    let pos = 1 + digit;
                    let row = support[pos];
                    if vals[pos] == q - 1 {
                        add_row(&mut acc, &set.rows2[row], qt);
                        vals[pos] = 1;
                    } else {
                        add_row(&mut acc, &set.rows[row], qt);
                        vals[pos] += 1;
                    }
                    visit(field, set, &support, &vals, &acc, w, &mut best);
                }
                if !next_combination(&mut support[1..], k) {
                    break;
                }
            }
            if let Some(p) = progress {
                let count = binomial(k - first - 1, w - 1) * value_steps as u128;
                p.advance(count.min(u64::MAX as u128) as u64);
            }
            best
        })
        .reduce(Best::empty, Best::merge)
}

#[inline]
fn visit<T: Sym>(
    field: PrimeField,
    set: &InfoSet<T>,
    support: &[usize],
    vals: &[u32],
    acc: &[T],
    w: usize,
    best: &mut Best,
) {
    let wt = w + weight(acc);
    if wt > best.weight {
        return;
    }
    best.offer(field, wt, || {
        let mut full = vec![0u32; set.pivots.len() + set.others.len()];
        for (&s, &v) in support.iter().zip(vals) {
            full[set.pivots[s]] = v;
        }
        for (&c, &v) in set.others.iter().zip(acc) {
            full[c] = v.to_u32();
        }
        full
    });
}

/// Advance a strictly increasing index list within `..k` to the next
/// combination in lexicographic order; `false` when exhausted.
fn next_combination(c: &mut [usize], k: usize) -> bool {
    let len = c.len();
    for i in (0..len).rev() {
        if c[i] < k - len + i {
            c[i] += 1;
            for j in i + 1..len {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
