use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::PrimeField;
use crate::error::{Error, Result};

/// A `k x n` matrix over GF(p) whose rows span a linear code.
///
/// Entries are stored as `u16` residues (p < 2^16). Full rank is not assumed;
/// the distance engines check it.
#[derive(Clone, PartialEq, Eq)]
pub struct GenMatrix {
    field: PrimeField,
    n: usize,
    rows: Vec<Vec<u16>>,
}

impl GenMatrix {
    /// Rows of residues; entries are reduced mod p.
    pub fn new(field: PrimeField, rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        Self::with_length(field, n, rows)
    }

    pub fn with_length(field: PrimeField, n: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::RaggedMatrix);
        }
        let p = field.p();
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|v| (v % p) as u16).collect())
            .collect();
        Ok(Self { field, n, rows })
    }

    pub fn identity(field: PrimeField, k: usize) -> Self {
        let rows = (0..k).map(|i| (0..k).map(|j| u32::from(i == j)).collect()).collect();
        Self::new(field, rows).expect("square")
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Number of rows.
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    /// Number of columns (code length).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> Vec<u32> {
        self.rows[i].iter().map(|&v| v as u32).collect()
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.k()).map(|i| self.row(i)).collect()
    }

    /// Codeword `msg * M`.
    pub fn encode(&self, msg: &[u32]) -> Result<Vec<u32>> {
        if msg.len() != self.k() {
            return Err(Error::LengthMismatch {
                expected: self.k(),
                got: msg.len(),
            });
        }
        let f = self.field;
        let mut out = vec![0u32; self.n];
        for (&c, row) in msg.iter().zip(&self.rows) {
            let c = c % f.p();
            if c == 0 {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(row) {
                *o = f.add(*o, f.mul(c, v as u32));
            }
        }
        Ok(out)
    }

    /// Reduced row-echelon form (zero rows kept at the bottom) and rank.
    pub fn rref_rank(&self) -> Result<(GenMatrix, usize)> {
        if self.rows.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let mut rows = self.rows();
        let order: Vec<usize> = (0..self.n).collect();
        let pivots = eliminate(self.field, &mut rows, &order);
        let m = GenMatrix::with_length(self.field, self.n, rows)?;
        Ok((m, pivots.len()))
    }

    pub fn rank(&self) -> usize {
        if self.rows.is_empty() {
            return 0;
        }
        self.rref_rank().map(|(_, r)| r).unwrap_or(0)
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.k()
    }

    /// Nonzero rows of the RREF: a canonical basis of the row space.
    pub fn canonical_basis(&self) -> Vec<Vec<u32>> {
        if self.rows.is_empty() {
            return Vec::new();
        }
        let (r, rank) = self.rref_rank().expect("nonempty");
        r.rows().into_iter().take(rank).collect()
    }

    /// Row-space equality (same field and length required).
    pub fn same_row_space(&self, other: &GenMatrix) -> bool {
        self.field == other.field && self.n == other.n && self.canonical_basis() == other.canonical_basis()
    }

    /// Whether `v` lies in the row space.
    pub fn contains(&self, v: &[u32]) -> bool {
        if v.len() != self.n {
            return false;
        }
        let mut rows = self.rows();
        let base = self.rank();
        rows.push(v.to_vec());
        let ext = GenMatrix::with_length(self.field, self.n, rows).expect("lengths checked");
        ext.rank() == base
    }

    /// Whether the row space of `self` is contained in that of `other`.
    pub fn row_space_within(&self, other: &GenMatrix) -> bool {
        if self.field != other.field || self.n != other.n {
            return false;
        }
        let mut rows = other.rows();
        let base = other.rank();
        rows.extend(self.rows());
        GenMatrix::with_length(self.field, self.n, rows)
            .map(|m| m.rank() == base)
            .unwrap_or(false)
    }

    /// New matrix with column `j` taken from column `perm[j]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<GenMatrix> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| perm.iter().map(|&j| r[j] as u32).collect())
            .collect();
        GenMatrix::with_length(self.field, self.n, rows)
    }

    /// Index of the first row lying in the span of the rows before it.
    pub fn first_dependent_row(&self) -> Option<usize> {
        let f = self.field;
        // echelon basis as (pivot column, row with 1 at pivot)
        let mut basis: Vec<(usize, Vec<u32>)> = Vec::new();
        for (i, row) in self.rows().into_iter().enumerate() {
            let mut v = row;
            for (c, b) in &basis {
                let t = v[*c];
                if t != 0 {
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x = f.sub(*x, f.mul(t, y));
                    }
                }
            }
            match v.iter().position(|&x| x != 0) {
                None => return Some(i),
                Some(c) => {
                    let inv = f.inv(v[c]).expect("nonzero");
                    v.iter_mut().for_each(|x| *x = f.mul(*x, inv));
                    basis.push((c, v));
                }
            }
        }
        None
    }

    /// Stack the rows of `self` and `other`.
    pub fn stack(&self, other: &GenMatrix) -> Result<GenMatrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.p(), other.field.p()));
        }
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let mut rows = self.rows();
        rows.extend(other.rows());
        GenMatrix::with_length(self.field, self.n, rows)
    }
}

impl fmt::Debug for GenMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {}", self.k(), self.n, self.field)?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// Gauss-Jordan elimination visiting columns in `order`. Rows are permuted so
/// that row `i` carries the `i`-th pivot; returns the pivot columns.
pub(crate) fn eliminate(field: PrimeField, rows: &mut [Vec<u32>], order: &[usize]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for &c in order {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = field.inv(rows[r][c]).expect("nonzero pivot");
        for v in rows[r].iter_mut() {
            *v = field.mul(*v, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let t = row[c];
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                *v = field.sub(*v, field.mul(t, pv));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Length, dimension, minimum distance and field size of a linear code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub q: u32,
}

impl CodeParams {
    /// Validates `1 <= k <= n` and `1 <= d <= n - k + 1`.
    pub fn new(n: usize, k: usize, d: usize, q: u32) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidParams(format!("dimension {k} for length {n}")));
        }
        if d == 0 || d > n - k + 1 {
            return Err(Error::InvalidParams(format!(
                "distance {d} violates the Singleton bound for [{n},{k}]"
            )));
        }
        Ok(Self { n, k, d, q })
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]_{}", self.n, self.k, self.d, self.q)
    }
}
