//! One-generator multi-twisted (MT) codes.
//!
//! Codewords are laid out block-major: block 0 coefficients in ascending
//! exponent order, then block 1, and so on.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{FieldElement, Poly, PrimeField};
use crate::error::{Error, Result};
use crate::lincode::{min_distance_with, CodeParams, DistanceOptions, DistanceResult, GenMatrix};

/// One component ring GF(p)[x] / (x^m - a).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MtBlock {
    m: usize,
    a: FieldElement,
}

impl MtBlock {
    pub fn new(m: usize, a: FieldElement) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidBlock("block length must be positive".into()));
        }
        if a.is_zero() {
            return Err(Error::InvalidBlock("shift constant must be nonzero".into()));
        }
        Ok(Self { m, a })
    }

    pub fn over(field: PrimeField, m: usize, a: i64) -> Result<Self> {
        Self::new(m, field.elem(a))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> FieldElement {
        self.a
    }

    pub fn field(&self) -> PrimeField {
        self.a.field()
    }

    /// `x^m - a`.
    pub fn modulus(&self) -> Poly {
        Poly::binomial(self.field(), self.m, self.a.value())
    }
}

/// Generator tuple `(g_1, ..., g_l)` with `g_i` reduced mod `x^{m_i} - a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MtGenerator {
    blocks: Vec<MtBlock>,
    polys: Vec<Poly>,
}

impl MtGenerator {
    pub fn new(blocks: Vec<MtBlock>, polys: Vec<Poly>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidBlock("at least one block required".into()));
        }
        if blocks.len() != polys.len() {
            return Err(Error::LengthMismatch {
                expected: blocks.len(),
                got: polys.len(),
            });
        }
        let field = blocks[0].field();
        for b in &blocks {
            if b.field() != field {
                return Err(Error::FieldMismatch(field.p(), b.field().p()));
            }
        }
        let mut reduced = Vec::with_capacity(polys.len());
        for (b, g) in blocks.iter().zip(polys) {
            if g.field() != field {
                return Err(Error::FieldMismatch(field.p(), g.field().p()));
            }
            reduced.push(g.reduce_binomial(b.m, b.a.value()));
        }
        Ok(Self { blocks, polys: reduced })
    }

    pub fn blocks(&self) -> &[MtBlock] {
        &self.blocks
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn field(&self) -> PrimeField {
        self.blocks[0].field()
    }

    /// Total length `n = sum m_i`.
    pub fn n(&self) -> usize {
        self.blocks.iter().map(|b| b.m).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.polys.iter().all(Poly::is_zero)
    }

    /// Block-major coefficient vector of the generator.
    pub fn to_vector(&self) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.n());
        for (b, g) in self.blocks.iter().zip(&self.polys) {
            let start = v.len();
            v.extend_from_slice(g.coeffs());
            v.resize(start + b.m, 0);
        }
        v
    }

    /// Vectors of `x^i G` for `i < count`.
    pub fn shift_rows(&self, count: usize) -> Vec<Vec<u32>> {
        let mut rows = Vec::with_capacity(count);
        let mut cur = self.to_vector();
        for _ in 0..count {
            let next = shift_unchecked(&cur, &self.blocks);
            rows.push(std::mem::replace(&mut cur, next));
        }
        rows
    }
}

fn shift_unchecked(v: &[u32], blocks: &[MtBlock]) -> Vec<u32> {
    let mut out = Vec::with_capacity(v.len());
    let mut start = 0;
    for b in blocks {
        let seg = &v[start..start + b.m];
        out.push(b.field().mul(b.a.value(), seg[b.m - 1]));
        out.extend_from_slice(&seg[..b.m - 1]);
        start += b.m;
    }
    out
}

/// Blockwise twisted shift: each segment `(c_0..c_{m-1})` becomes
/// `(a c_{m-1}, c_0, .., c_{m-2})`.
pub fn mt_shift(v: &[u32], blocks: &[MtBlock]) -> Result<Vec<u32>> {
    let n: usize = blocks.iter().map(|b| b.m).sum();
    if v.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: v.len(),
        });
    }
    Ok(shift_unchecked(v, blocks))
}

/// Monic least-degree `f` with `f G = 0` in every block:
/// `lcm_i (x^{m_i} - a_i) / gcd(g_i, x^{m_i} - a_i)`.
pub fn mt_annihilator(g: &MtGenerator) -> Result<Poly> {
    if g.is_zero() {
        return Err(Error::ZeroGenerator);
    }
    let mut acc = Poly::one(g.field());
    for (b, p) in g.blocks.iter().zip(&g.polys) {
        let modulus = b.modulus();
        let part = if p.is_zero() {
            Poly::one(g.field())
        } else {
            modulus.div_exact(&p.gcd(&modulus)?)?
        };
        acc = acc.lcm(&part)?;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    /// The whole GF(p)[x]-span of the generator.
    Full,
    /// Span of the first `k` shifts.
    Subcode(usize),
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeKind::Full => f.write_str("FULL"),
            CodeKind::Subcode(k) => write!(f, "SUBCODE({k})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MtCode {
    generator: MtGenerator,
    kind: CodeKind,
    matrix: GenMatrix,
}

impl MtCode {
    pub fn generator(&self) -> &MtGenerator {
        &self.generator
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn matrix(&self) -> &GenMatrix {
        &self.matrix
    }

    pub fn field(&self) -> PrimeField {
        self.generator.field()
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn k(&self) -> usize {
        self.matrix.k()
    }

    pub fn min_distance(&self, opts: &DistanceOptions) -> Result<DistanceResult> {
        min_distance_with(&self.matrix, opts)
    }

    pub fn params(&self, opts: &DistanceOptions) -> Result<CodeParams> {
        let d = self.min_distance(opts)?.d;
        CodeParams::new(self.n(), self.k(), d, self.field().p())
    }

    pub fn to_spec(&self) -> MtCodeSpec {
        MtCodeSpec::from_generator(&self.generator, self.kind)
    }
}

/// The full MT code generated by `G`, with `k = deg(annihilator)`.
pub fn make_mt_code(g: &MtGenerator) -> Result<MtCode> {
    let k = mt_annihilator(g)?.deg0();
    // x^0 G .. x^{k-1} G independent and x^k G dependent pins the span at k
    let rows = g.shift_rows(k + 1);
    let probe = GenMatrix::with_length(g.field(), g.n(), rows)?;
    let observed = match probe.first_dependent_row() {
        Some(i) => i,
        None => k + 1,
    };
    if observed != k {
        return Err(Error::RankMismatch {
            expected: k,
            rank: observed,
        });
    }
    let mut rows = probe.rows();
    rows.truncate(k);
    Ok(MtCode {
        generator: g.clone(),
        kind: CodeKind::Full,
        matrix: GenMatrix::with_length(g.field(), g.n(), rows)?,
    })
}

/// Span of `x^i G` for `i < k`; the rows must be independent.
pub fn mt_subcode(g: &MtGenerator, k: usize) -> Result<MtCode> {
    if k == 0 {
        return Err(Error::InvalidParams("subcode dimension must be positive".into()));
    }
    if g.is_zero() {
        return Err(Error::ZeroGenerator);
    }
    let matrix = GenMatrix::with_length(g.field(), g.n(), g.shift_rows(k))?;
    if let Some(index) = matrix.first_dependent_row() {
        return Err(Error::DependentShifts { index });
    }
    Ok(MtCode {
        generator: g.clone(),
        kind: CodeKind::Subcode(k),
        matrix,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub m: usize,
    pub a: i64,
    pub gen: Vec<i64>,
}

/// JSON MT code spec:
/// `{"q": 3, "kind": {"subcode": 12}, "blocks": [{"m": 13, "a": 1, "gen": [2,1]}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MtCodeSpec {
    pub q: u64,
    pub kind: CodeKind,
    pub blocks: Vec<BlockSpec>,
}

impl MtCodeSpec {
    pub fn from_generator(g: &MtGenerator, kind: CodeKind) -> Self {
        Self {
            q: g.field().order(),
            kind,
            blocks: g
                .blocks
                .iter()
                .zip(&g.polys)
                .map(|(b, p)| BlockSpec {
                    m: b.m,
                    a: i64::from(b.a.value()),
                    gen: p.coeffs().iter().map(|&c| i64::from(c)).collect(),
                })
                .collect(),
        }
    }

    pub fn generator(&self) -> Result<MtGenerator> {
        let field = PrimeField::new(self.q)?;
        let mut blocks = Vec::with_capacity(self.blocks.len());
        let mut polys = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            blocks.push(MtBlock::over(field, b.m, b.a)?);
            polys.push(Poly::from_i64(field, &b.gen));
        }
        MtGenerator::new(blocks, polys)
    }

    pub fn build(&self) -> Result<MtCode> {
        let g = self.generator()?;
        match self.kind {
            CodeKind::Full => make_mt_code(&g),
            CodeKind::Subcode(k) => mt_subcode(&g, k),
        }
    }
}

/// Explicit generator matrix: `{"q": 5, "rows": [[1,0,2], [0,1,4]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixSpec {
    pub q: u64,
    pub rows: Vec<Vec<i64>>,
}

impl MatrixSpec {
    pub fn build(&self) -> Result<GenMatrix> {
        let field = PrimeField::new(self.q)?;
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&v| field.reduce(v)).collect())
            .collect();
        GenMatrix::new(field, rows)
    }
}

/// Either code description accepted wherever a code file is read.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CodeSpec {
    Mt(MtCodeSpec),
    Matrix(MatrixSpec),
}

impl CodeSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn genmatrix(&self) -> Result<GenMatrix> {
        match self {
            CodeSpec::Mt(s) => Ok(s.build()?.matrix),
            CodeSpec::Matrix(s) => s.build(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constacyclic::make_constacyclic;
    use crate::factorization::{factor_binomial, Binomial};
    use crate::lincode::min_distance_exhaustive;
    use proptest::prelude::*;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn poly(p: u64, c: &[i64]) -> Poly {
        Poly::from_i64(gf(p), c)
    }

    #[test]
    fn shift_examples() {
        let f3 = gf(3);
        let blocks = [MtBlock::over(f3, 2, 2).unwrap(), MtBlock::over(f3, 3, 1).unwrap()];
        assert_eq!(mt_shift(&[1, 2, 1, 0, 2], &blocks).unwrap(), vec![1, 1, 2, 1, 0]);
        assert_eq!(
            mt_shift(&[1, 2], &blocks),
            Err(Error::LengthMismatch { expected: 5, got: 2 })
        );

        let f7 = gf(7);
        let a = f7.elem(3);
        let single = [MtBlock::new(4, a).unwrap()];
        let v0 = vec![1, 5, 0, 2];
        let mut v = v0.clone();
        for _ in 0..4 {
            v = mt_shift(&v, &single).unwrap();
        }
        assert_eq!(v, v0.iter().map(|&c| f7.mul(c, 3)).collect::<Vec<_>>());
        for _ in 4..4 * a.order().unwrap() as usize {
            v = mt_shift(&v, &single).unwrap();
        }
        assert_eq!(v, v0);
    }

    #[test]
    fn block_validation() {
        let f3 = gf(3);
        assert!(MtBlock::over(f3, 0, 1).is_err());
        assert!(MtBlock::over(f3, 3, 0).is_err());
        assert!(MtGenerator::new(vec![], vec![]).is_err());
        let g = MtGenerator::new(vec![MtBlock::over(f3, 3, 1).unwrap()], vec![poly(3, &[0, 0, 0, 1])]).unwrap();
        assert_eq!(g.polys()[0], Poly::one(f3));
    }

    #[test]
    fn annihilator_examples() {
        let f3 = gf(3);
        // single block: annihilator of g is h
        let b = MtBlock::over(f3, 20, 2).unwrap();
        let g = poly(3, &[2, 2, 0, 0, 1, 1, 1]);
        let h = b.modulus().div_exact(&g).unwrap();
        let gen = MtGenerator::new(vec![b], vec![g]).unwrap();
        assert_eq!(mt_annihilator(&gen).unwrap(), h);

        let zero = MtGenerator::new(vec![b], vec![Poly::zero(f3)]).unwrap();
        assert_eq!(mt_annihilator(&zero), Err(Error::ZeroGenerator));
        assert_eq!(make_mt_code(&zero), Err(Error::ZeroGenerator));
    }

    #[test]
    fn coprime_concat_annihilator_is_product() {
        // x^4 - 1 and x^4 - 2 over GF(3): gcd 1
        let f3 = gf(3);
        let b1 = MtBlock::over(f3, 4, 1).unwrap();
        let b2 = MtBlock::over(f3, 4, 2).unwrap();
        assert!(b1.modulus().gcd(&b2.modulus()).unwrap().is_one());
        let g1 = poly(3, &[1, 1]);
        let g2 = poly(3, &[2, 1, 1]);
        let h1 = b1.modulus().div_exact(&g1).unwrap();
        let h2 = b2.modulus().div_exact(&g2).unwrap();
        let gen = MtGenerator::new(vec![b1, b2], vec![g1.clone(), g2.clone()]).unwrap();
        assert_eq!(mt_annihilator(&gen).unwrap(), (&h1 * &h2).monic());

        let code = make_mt_code(&gen).unwrap();
        assert_eq!(code.k(), 3 + 2);
        let d1 = make_constacyclic(4, f3.elem(1), &g1)
            .unwrap()
            .params(&Default::default())
            .unwrap()
            .d;
        let d2 = make_constacyclic(4, f3.elem(2), &g2)
            .unwrap()
            .params(&Default::default())
            .unwrap()
            .d;
        let d = min_distance_exhaustive(code.matrix(), u64::MAX).unwrap().d;
        assert_eq!(d, d1.min(d2));
    }

    #[test]
    fn single_block_matches_constacyclic() {
        for p in [3u64, 5, 7] {
            let f = gf(p);
            for m in 1..=12usize {
                if (m as u64).is_multiple_of(p) {
                    continue;
                }
                for a in 1..p as i64 {
                    let bin = Binomial::over(f, m, a).unwrap();
                    for g in factor_binomial(&bin).unwrap().divisors(64) {
                        if g.deg0() >= m {
                            continue;
                        }
                        let c = make_constacyclic(m, f.elem(a), &g).unwrap();
                        let gen = MtGenerator::new(vec![MtBlock::over(f, m, a).unwrap()], vec![g]).unwrap();
                        let mt = make_mt_code(&gen).unwrap();
                        assert!(mt.matrix().same_row_space(&c.genmatrix()));
                        assert_eq!(mt.k(), c.k());
                    }
                }
            }
        }
    }

    #[test]
    fn subcode_examples() {
        let f3 = gf(3);
        let blocks = vec![MtBlock::over(f3, 4, 1).unwrap(), MtBlock::over(f3, 5, 2).unwrap()];
        let gen = MtGenerator::new(blocks, vec![poly(3, &[1, 1]), poly(3, &[2, 0, 1])]).unwrap();
        let one = mt_subcode(&gen, 1).unwrap();
        assert_eq!(one.matrix().rows(), vec![gen.to_vector()]);
        assert_eq!(one.kind(), CodeKind::Subcode(1));

        let full = make_mt_code(&gen).unwrap();
        let sub = mt_subcode(&gen, full.k()).unwrap();
        assert!(sub.matrix().same_row_space(full.matrix()));
        assert_eq!(
            mt_subcode(&gen, full.k() + 1),
            Err(Error::DependentShifts { index: full.k() })
        );
    }

    #[test]
    fn spec_round_trip() {
        let json = r#"{"q": 3, "kind": {"subcode": 2}, "blocks": [{"m": 4, "a": 1, "gen": [1,1]}, {"m": 5, "a": -1, "gen": [2,0,1]}]}"#;
        let spec: MtCodeSpec = serde_json::from_str(json).unwrap();
        let code = spec.build().unwrap();
        assert_eq!((code.n(), code.k()), (9, 2));
        assert_eq!(code.generator().blocks()[1].a().value(), 2);
        let back: MtCodeSpec = serde_json::from_str(&serde_json::to_string(&code.to_spec()).unwrap()).unwrap();
        assert_eq!(back.build().unwrap(), code);

        let full: MtCodeSpec =
            serde_json::from_str(r#"{"q": 3, "kind": "full", "blocks": [{"m": 4, "a": 1, "gen": [1,1]}]}"#).unwrap();
        assert_eq!(full.kind, CodeKind::Full);

        match CodeSpec::from_json(r#"{"q": 5, "rows": [[1,0,2],[0,1,-1]]}"#).unwrap() {
            CodeSpec::Matrix(m) => assert_eq!(m.build().unwrap().row(1), vec![0, 1, 4]),
            other => panic!("parsed as {other:?}"),
        }
        assert!(matches!(CodeSpec::from_json(json).unwrap(), CodeSpec::Mt(_)));
    }

    fn arb_generator() -> impl Strategy<Value = MtGenerator> {
        let block = (
            prop::sample::select(vec![3u64, 5, 7]),
            1usize..=6,
            1i64..7,
            prop::collection::vec(0i64..7, 0..7),
        );
        (
            prop::sample::select(vec![3u64, 5, 7]),
            prop::collection::vec(block, 1..=3),
        )
            .prop_filter_map("nonzero generator", |(p, raw)| {
                let f = gf(p);
                let mut blocks = Vec::new();
                let mut polys = Vec::new();
                for (_, m, a, c) in raw {
                    blocks.push(MtBlock::over(f, m, 1 + (a - 1) % (p as i64 - 1)).ok()?);
                    polys.push(Poly::from_i64(f, &c));
                }
                let g = MtGenerator::new(blocks, polys).ok()?;
                (!g.is_zero()).then_some(g)
            })
    }

    /// Minimal polynomial of `G` read off the first linear dependency
    /// among `x^i G`, by elimination with a tracked combination.
    fn krylov_min_poly(g: &MtGenerator) -> Poly {
        let f = g.field();
        let rows = g.shift_rows(g.n() + 1);
        // (reduced row, combination of original rows) pairs
        let mut basis: Vec<(usize, Vec<u32>, Vec<u32>)> = Vec::new();
        for (i, row) in rows.into_iter().enumerate() {
            let mut v = row;
            let mut comb = vec![0u32; i + 1];
            comb[i] = 1;
            for (c, b, bc) in &basis {
                let t = v[*c];
                if t != 0 {
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x = f.sub(*x, f.mul(t, y));
                    }
                    for (x, &y) in comb.iter_mut().zip(bc) {
                        *x = f.sub(*x, f.mul(t, y));
                    }
                }
            }
            match v.iter().position(|&x| x != 0) {
                None => return Poly::new(f, comb).monic(),
                Some(c) => {
                    let inv = f.inv(v[c]).unwrap();
                    v.iter_mut().for_each(|x| *x = f.mul(*x, inv));
                    comb.iter_mut().for_each(|x| *x = f.mul(*x, inv));
                    comb.resize(g.n() + 1, 0);
                    basis.push((c, v, comb));
                }
            }
        }
        unreachable!("n + 1 vectors of length n are dependent")
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn full_dimension_is_annihilator_degree(g in arb_generator()) {
            let ann = mt_annihilator(&g).unwrap();
            let all = GenMatrix::with_length(g.field(), g.n(), g.shift_rows(g.n() + 1)).unwrap();
            prop_assert_eq!(all.rank(), ann.deg0());
            let code = make_mt_code(&g).unwrap();
            prop_assert_eq!(code.k(), ann.deg0());
        }

        #[test]
        fn full_code_is_shift_invariant(g in arb_generator()) {
            let code = make_mt_code(&g).unwrap();
            for row in code.matrix().rows() {
                prop_assert!(code.matrix().contains(&mt_shift(&row, g.blocks()).unwrap()));
            }
        }

        #[test]
        fn annihilator_kills_and_is_minimal(g in arb_generator()) {
            let ann = mt_annihilator(&g).unwrap();
            let kills = |f: &Poly| {
                g.blocks().iter().zip(g.polys()).all(|(b, p)| {
                    (f * p).reduce_binomial(b.m(), b.a().value()).is_zero()
                })
            };
            prop_assert!(kills(&ann));
            prop_assert_eq!(ann, krylov_min_poly(&g));
        }

        #[test]
        fn subcode_within_full(g in arb_generator(), k in 1usize..6) {
            let full = make_mt_code(&g).unwrap();
            let k = k.min(full.k());
            let sub = mt_subcode(&g, k).unwrap();
            prop_assert!(sub.matrix().row_space_within(full.matrix()));
        }
    }
}
