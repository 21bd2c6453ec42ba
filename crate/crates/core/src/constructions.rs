//! Checked builders for the MT construction theorems.
//!
//! Every builder validates its hypotheses, realizes the code through
//! [`mtcore`](crate::mtcore), and records the predicted dimension together
//! with the distance bound the theorem promises. Distances of the codes
//! themselves are only computed on request through an [`Evaluator`].

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::algebra::{Poly, PrimeField};
use crate::constacyclic::{canonical_generator, make_constacyclic, ConstacyclicCode};
use crate::error::{Error, Result};
use crate::factorization::{factor_binomial, Binomial};
use crate::lincode::{CodeParams, DistanceOptions, DistanceResult};
use crate::mtcore::{make_mt_code, mt_subcode, MtBlock, MtCode, MtCodeSpec, MtGenerator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundKind {
    /// `d = bound`.
    ExactMin,
    /// `d <= 2`.
    Upper2,
    /// `d >= d1 + d2`.
    LowerSum,
    /// `d >= sum d_i` over more than two blocks.
    LowerSumEll,
    /// `d >= d2 + 1`.
    LowerD2Plus1,
    /// `d >= l d(C_g)`.
    LowerQt,
}

impl BoundKind {
    /// Whether a computed distance `d` is consistent with `bound`.
    pub fn holds(self, d: usize, bound: usize) -> bool {
        match self {
            BoundKind::ExactMin => d == bound,
            BoundKind::Upper2 => d <= bound,
            _ => d >= bound,
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::ExactMin => "EXACT_MIN",
            BoundKind::Upper2 => "UPPER_2",
            BoundKind::LowerSum => "LOWER_SUM",
            BoundKind::LowerSumEll => "LOWER_SUM_ELL",
            BoundKind::LowerD2Plus1 => "LOWER_D2_PLUS_1",
            BoundKind::LowerQt => "LOWER_QT",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionReport {
    pub code: MtCode,
    pub predicted_n: usize,
    pub predicted_k: usize,
    pub bound_kind: BoundKind,
    pub bound_value: usize,
    /// Exact distance, once computed.
    pub actual_d: Option<usize>,
    /// Parameters of the constituent codes entering the bound.
    pub constituents: Vec<CodeParams>,
    /// Codeword exhibited by the theorem's proof, if it names one.
    pub witness: Option<Vec<u32>>,
}

impl ConstructionReport {
    /// `None` until `actual_d` is known.
    pub fn bound_holds(&self) -> Option<bool> {
        self.actual_d.map(|d| self.bound_kind.holds(d, self.bound_value))
    }

    pub fn params(&self) -> Option<CodeParams> {
        let d = self.actual_d?;
        CodeParams::new(self.code.n(), self.code.k(), d, self.code.field().p()).ok()
    }

    pub fn to_record(&self) -> ReportRecord {
        ReportRecord {
            code: self.code.to_spec(),
            predicted_n: self.predicted_n,
            predicted_k: self.predicted_k,
            bound_kind: self.bound_kind,
            bound_value: self.bound_value,
            actual_d: self.actual_d,
            constituents: self.constituents.clone(),
            witness: self.witness.clone(),
        }
    }
}

/// Serialized report: the MT code spec with the report fields alongside, so
/// the file also reads back as a plain code spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    #[serde(flatten)]
    pub code: MtCodeSpec,
    pub predicted_n: usize,
    pub predicted_k: usize,
    pub bound_kind: BoundKind,
    pub bound_value: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actual_d: Option<usize>,
    #[serde(default)]
    pub constituents: Vec<CodeParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<u32>>,
}

type CacheKey = (u32, usize, u32, Vec<u32>);

/// Distance oracle for builders: constituent distances are memoized, and
/// report distances use the configured options.
#[derive(Debug, Default)]
pub struct Evaluator {
    opts: DistanceOptions,
    cache: Mutex<HashMap<CacheKey, CodeParams>>,
}

impl Evaluator {
    pub fn new(opts: DistanceOptions) -> Self {
        Self {
            opts,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn options(&self) -> &DistanceOptions {
        &self.opts
    }

    /// Parameters of a constacyclic constituent. The budget does not apply
    /// here: constituents are fixed inputs, not candidates.
    pub fn constituent(&self, c: &ConstacyclicCode) -> Result<CodeParams> {
        let key = (c.field().p(), c.n(), c.a().value(), c.generator().coeffs().to_vec());
        if let Some(p) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(*p);
        }
        let opts = DistanceOptions {
            method: self.opts.method,
            budget: None,
            progress: None,
        };
        let params = c.params(&opts)?;
        self.cache.lock().expect("cache lock").insert(key, params);
        Ok(params)
    }

    /// Compute the exact distance of the report's code and record it.
    pub fn evaluate(&self, report: &mut ConstructionReport) -> Result<DistanceResult> {
        let r = report.code.min_distance(&self.opts)?;
        report.actual_d = Some(r.d);
        Ok(r)
    }
}

fn violation(msg: impl Into<String>) -> Error {
    Error::HypothesisViolation(msg.into())
}

fn same_field(b1: &Binomial, b2: &Binomial) -> Result<()> {
    if b1.field() != b2.field() {
        return Err(Error::FieldMismatch(b1.field().p(), b2.field().p()));
    }
    Ok(())
}

/// `gcd(x^{n1} - a1, x^{n2} - a2)` as a binomial, if it is not 1.
fn gcd_binomial(b1: &Binomial, b2: &Binomial) -> Result<Option<Binomial>> {
    same_field(b1, b2)?;
    let d = b1.to_poly().gcd(&b2.to_poly())?;
    if d.is_one() {
        return Ok(None);
    }
    let m = d.deg0();
    let shape = Poly::binomial(d.field(), m, d.field().neg(d.coeff(0)));
    if d != shape || d.coeff(0) == 0 {
        return Err(Error::StructureViolation(format!("gcd {d} is not a binomial")));
    }
    Ok(Some(Binomial::new(m, d.field().elem(-i64::from(d.coeff(0))))?))
}

fn block(b: &Binomial) -> MtBlock {
    MtBlock::new(b.n(), b.a()).expect("binomials are valid blocks")
}

fn check_prediction(code: &MtCode, n: usize, k: usize) -> Result<()> {
    if code.n() != n {
        return Err(Error::PredictionMismatch {
            what: "length",
            predicted: n,
            actual: code.n(),
        });
    }
    if code.k() != k {
        return Err(Error::PredictionMismatch {
            what: "dimension",
            predicted: k,
            actual: code.k(),
        });
    }
    Ok(())
}

fn require_coprime(a: &Poly, b: &Poly, what: &str) -> Result<()> {
    if a.is_zero() {
        return Err(violation(format!("{what}: multiplier is zero")));
    }
    if !a.gcd(b)?.is_one() {
        return Err(violation(format!("{what}: gcd({a}, {b}) != 1")));
    }
    Ok(())
}

/// Validated split `x^m - a = g h` of the gcd of two binomials, with the
/// cofactors `h_i = (x^{n_i} - a_i) / (g h)`.
struct SharedSplit {
    g: Poly,
    h: Poly,
    h1: Poly,
    h2: Poly,
}

fn shared_split(b1: &Binomial, b2: &Binomial, g: &Poly, h: &Poly) -> Result<SharedSplit> {
    let d = gcd_binomial(b1, b2)?.ok_or_else(|| violation("gcd of the binomials is 1"))?;
    let dp = d.to_poly();
    if g.is_zero() || h.is_zero() || (g * h).monic() != dp {
        return Err(violation(format!("split: g h != {dp}")));
    }
    let (g, h) = (g.monic(), h.monic());
    let h1 = b1.to_poly().div_exact(&dp)?;
    let h2 = b2.to_poly().div_exact(&dp)?;
    Ok(SharedSplit { g, h, h1, h2 })
}

/// Candidate `(g, h)` splits of `gcd(x^{n1} - a1, x^{n2} - a2)`, from its
/// factorization; at most `cap` are returned.
pub fn candidate_splits(b1: &Binomial, b2: &Binomial, cap: usize) -> Result<Vec<(Poly, Poly)>> {
    let Some(d) = gcd_binomial(b1, b2)? else {
        return Ok(Vec::new());
    };
    let dp = d.to_poly();
    factor_binomial(&d)?
        .divisors(cap)
        .map(|g| {
            let h = dp.div_exact(&g)?;
            Ok((g, h))
        })
        .collect()
}

/// Concatenation over coprime binomials: generator `(g1, g2)`, exact
/// distance `min(d1, d2)`.
pub fn build_coprime_concat(
    ev: &Evaluator,
    b1: &Binomial,
    g1: &Poly,
    b2: &Binomial,
    g2: &Poly,
) -> Result<ConstructionReport> {
    if let Some(d) = gcd_binomial(b1, b2)? {
        return Err(Error::GcdNotOne(d.to_poly().to_string()));
    }
    let c1 = make_constacyclic(b1.n(), b1.a(), g1)?;
    let c2 = make_constacyclic(b2.n(), b2.a(), g2)?;
    let gen = MtGenerator::new(
        vec![block(b1), block(b2)],
        vec![c1.generator().clone(), c2.generator().clone()],
    )?;
    let code = make_mt_code(&gen)?;
    let (n, k) = (b1.n() + b2.n(), c1.k() + c2.k());
    check_prediction(&code, n, k)?;
    let p1 = ev.constituent(&c1)?;
    let p2 = ev.constituent(&c2)?;
    Ok(ConstructionReport {
        code,
        predicted_n: n,
        predicted_k: k,
        bound_kind: BoundKind::ExactMin,
        bound_value: p1.d.min(p2.d),
        actual_d: None,
        constituents: vec![p1, p2],
        witness: None,
    })
}

/// Generator `(g p1, g p2)` over binomials sharing `x^m - a = g h`:
/// distance at most 2, with a weight-2 witness.
pub fn check_degenerate(
    b1: &Binomial,
    b2: &Binomial,
    split: (&Poly, &Poly),
    p1: &Poly,
    p2: &Poly,
) -> Result<ConstructionReport> {
    if b1.n() == b2.n() {
        return Err(violation("block lengths must differ"));
    }
    let s = shared_split(b1, b2, split.0, split.1)?;
    require_coprime(p1, &(&s.h * &s.h1), "p1 against h h1")?;
    require_coprime(p2, &(&s.h * &s.h2), "p2 against h h2")?;
    let gen = MtGenerator::new(vec![block(b1), block(b2)], vec![&s.g * p1, &s.g * p2])?;
    let code = make_mt_code(&gen)?;
    let n = b1.n() + b2.n();
    let k = s.h.deg0() + s.h1.deg0() + s.h2.deg0();
    check_prediction(&code, n, k)?;

    // the longer block carries the shorter binomial, the other block is zero
    let mut witness = vec![0u32; n];
    let f = b1.field();
    let (offset, short) = if b1.n() > b2.n() { (0, b2) } else { (b1.n(), b1) };
    witness[offset] = f.neg(short.a().value());
    witness[offset + short.n()] = 1;
    if !code.matrix().contains(&witness) {
        return Err(Error::StructureViolation("weight-2 witness is not a codeword".into()));
    }
    Ok(ConstructionReport {
        code,
        predicted_n: n,
        predicted_k: k,
        bound_kind: BoundKind::Upper2,
        bound_value: 2,
        actual_d: None,
        constituents: Vec::new(),
        witness: Some(witness),
    })
}

/// Generator `(p1 h h1, p2 h h2)` over binomials sharing `x^m - a = g h`:
/// dimension `deg g`, distance at least `d(<h h1>) + d(<h h2>)`.
pub fn build_shared_factor(
    ev: &Evaluator,
    b1: &Binomial,
    b2: &Binomial,
    split: (&Poly, &Poly),
    p1: &Poly,
    p2: &Poly,
) -> Result<ConstructionReport> {
    let s = shared_split(b1, b2, split.0, split.1)?;
    if s.g.is_constant() {
        return Err(violation("g must be nonconstant"));
    }
    require_coprime(p1, &s.g, "p1 against g")?;
    require_coprime(p2, &s.g, "p2 against g")?;
    let hh1 = &s.h * &s.h1;
    let hh2 = &s.h * &s.h2;
    let c1 = make_constacyclic(b1.n(), b1.a(), &hh1)?;
    let c2 = make_constacyclic(b2.n(), b2.a(), &hh2)?;
    let gen = MtGenerator::new(vec![block(b1), block(b2)], vec![p1 * &hh1, p2 * &hh2])?;
    let code = make_mt_code(&gen)?;
    let (n, k) = (b1.n() + b2.n(), s.g.deg0());
    check_prediction(&code, n, k)?;
    let d1 = ev.constituent(&c1)?;
    let d2 = ev.constituent(&c2)?;
    Ok(ConstructionReport {
        code,
        predicted_n: n,
        predicted_k: k,
        bound_kind: BoundKind::LowerSum,
        bound_value: d1.d + d2.d,
        actual_d: None,
        constituents: vec![d1, d2],
        witness: None,
    })
}

/// One block of a subcode construction: `x^n - a = g h`, multiplier `p`.
#[derive(Clone, Debug)]
pub struct SubcodeBlock {
    pub binomial: Binomial,
    pub g: Poly,
    pub p: Poly,
}

/// `SUBCODE(k)` on `(p_1 g_1, .., p_l g_l)` with every `deg h_i = k`:
/// distance at least `sum d(<g_i>)`.
pub fn build_subcode_sum(ev: &Evaluator, specs: &[SubcodeBlock], k: usize) -> Result<ConstructionReport> {
    if specs.is_empty() {
        return Err(violation("at least one block required"));
    }
    let codes = specs
        .iter()
        .map(|s| make_constacyclic(s.binomial.n(), s.binomial.a(), &s.g))
        .collect::<Result<Vec<_>>>()?;
    let dims: Vec<usize> = codes.iter().map(ConstacyclicCode::k).collect();
    if dims.iter().any(|&d| d != dims[0]) {
        return Err(Error::UnequalDimensions(dims));
    }
    if dims[0] != k {
        return Err(violation(format!("k = {k} but deg h_i = {}", dims[0])));
    }
    for (i, (s, c)) in specs.iter().zip(&codes).enumerate() {
        require_coprime(&s.p, c.check_poly(), &format!("p{} against h{}", i + 1, i + 1))?;
    }
    let gen = MtGenerator::new(
        specs.iter().map(|s| block(&s.binomial)).collect(),
        specs.iter().zip(&codes).map(|(s, c)| &s.p * c.generator()).collect(),
    )?;
    let code = mt_subcode(&gen, k)?;
    let n = specs.iter().map(|s| s.binomial.n()).sum();
    check_prediction(&code, n, k)?;
    let constituents = codes.iter().map(|c| ev.constituent(c)).collect::<Result<Vec<_>>>()?;
    Ok(ConstructionReport {
        code,
        predicted_n: n,
        predicted_k: k,
        bound_kind: if specs.len() > 2 {
            BoundKind::LowerSumEll
        } else {
            BoundKind::LowerSum
        },
        bound_value: constituents.iter().map(|c| c.d).sum(),
        actual_d: None,
        constituents,
        witness: None,
    })
}

/// `SUBCODE(n1)` on `(p1, g p2)` where `x^{n2} - a2 = g h`, `deg h = n1`:
/// distance at least `d(<g p2>) + 1`.
pub fn build_corollary(
    ev: &Evaluator,
    b1: &Binomial,
    p1: &Poly,
    b2: &Binomial,
    split: (&Poly, &Poly),
    p2: &Poly,
) -> Result<ConstructionReport> {
    same_field(b1, b2)?;
    let (n1, n2) = (b1.n(), b2.n());
    if n1 >= n2 {
        return Err(violation(format!("need n1 < n2, got {n1} >= {n2}")));
    }
    let (g, h) = split;
    if g.is_zero() || h.is_zero() || (g * h).monic() != b2.to_poly() {
        return Err(violation(format!("split: g h != {}", b2.to_poly())));
    }
    if h.deg0() != n1 {
        return Err(violation(format!("deg h = {} but n1 = {n1}", h.deg0())));
    }
    require_coprime(p1, &b1.to_poly(), "p1 against x^n1 - a1")?;
    require_coprime(p2, h, "p2 against h")?;
    let gp2 = g * p2;
    let c2 = make_constacyclic(n2, b2.a(), &canonical_generator(n2, b2.a(), &gp2)?)?;
    let gen = MtGenerator::new(vec![block(b1), block(b2)], vec![p1.clone(), gp2])?;
    let code = mt_subcode(&gen, n1)?;
    check_prediction(&code, n1 + n2, n1)?;
    let d2 = ev.constituent(&c2)?;
    Ok(ConstructionReport {
        code,
        predicted_n: n1 + n2,
        predicted_k: n1,
        bound_kind: BoundKind::LowerD2Plus1,
        bound_value: d2.d + 1,
        actual_d: None,
        constituents: vec![d2],
        witness: None,
    })
}

/// Quasi-twisted code on `l` copies of `(m, a)` with generator
/// `(f_1 g, .., f_l g)`: distance at least `l d(<g>)`.
pub fn qt_bound(ev: &Evaluator, b: &Binomial, g: &Poly, fs: &[Poly]) -> Result<ConstructionReport> {
    if fs.is_empty() {
        return Err(violation("at least one multiplier required"));
    }
    let c = make_constacyclic(b.n(), b.a(), g)?;
    for (i, f) in fs.iter().enumerate() {
        require_coprime(f, c.check_poly(), &format!("f{} against h", i + 1))?;
    }
    let gen = MtGenerator::new(vec![block(b); fs.len()], fs.iter().map(|f| f * c.generator()).collect())?;
    let code = make_mt_code(&gen)?;
    let (n, k) = (b.n() * fs.len(), c.k());
    check_prediction(&code, n, k)?;
    let dg = ev.constituent(&c)?;
    Ok(ConstructionReport {
        code,
        predicted_n: n,
        predicted_k: k,
        bound_kind: BoundKind::LowerQt,
        bound_value: fs.len() * dg.d,
        actual_d: None,
        constituents: vec![dg],
        witness: None,
    })
}

/// `x^n - a` in JSON: `{"n": 20, "a": 2}`; negative `a` is reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialSpec {
    pub n: usize,
    pub a: i64,
}

impl BinomialSpec {
    pub fn build(&self, field: PrimeField) -> Result<Binomial> {
        Binomial::over(field, self.n, self.a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubcodeBlockSpec {
    pub n: usize,
    pub a: i64,
    pub g: Vec<i64>,
    #[serde(default = "one_poly")]
    pub p: Vec<i64>,
}

fn one_poly() -> Vec<i64> {
    vec![1]
}

/// A named construction with its fixed inputs and multiplier polynomials.
/// Where a split `(g, h)` is needed only `g` is given; `h` is the cofactor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "snake_case")]
pub enum Template {
    CoprimeConcat {
        q: u64,
        b1: BinomialSpec,
        g1: Vec<i64>,
        b2: BinomialSpec,
        g2: Vec<i64>,
    },
    Degenerate {
        q: u64,
        b1: BinomialSpec,
        b2: BinomialSpec,
        g: Vec<i64>,
        #[serde(default = "one_poly")]
        p1: Vec<i64>,
        #[serde(default = "one_poly")]
        p2: Vec<i64>,
    },
    SharedFactor {
        q: u64,
        b1: BinomialSpec,
        b2: BinomialSpec,
        g: Vec<i64>,
        #[serde(default = "one_poly")]
        p1: Vec<i64>,
        #[serde(default = "one_poly")]
        p2: Vec<i64>,
    },
    SubcodeSum {
        q: u64,
        k: usize,
        blocks: Vec<SubcodeBlockSpec>,
    },
    Corollary {
        q: u64,
        b1: BinomialSpec,
        #[serde(default = "one_poly")]
        p1: Vec<i64>,
        b2: BinomialSpec,
        g: Vec<i64>,
        #[serde(default = "one_poly")]
        p2: Vec<i64>,
    },
    Qt {
        q: u64,
        m: usize,
        a: i64,
        g: Vec<i64>,
        fs: Vec<Vec<i64>>,
    },
}

fn to_i64(p: &Poly) -> Vec<i64> {
    p.coeffs().iter().map(|&c| i64::from(c)).collect()
}

impl Template {
    pub fn name(&self) -> &'static str {
        match self {
            Template::CoprimeConcat { .. } => "coprime_concat",
            Template::Degenerate { .. } => "degenerate",
            Template::SharedFactor { .. } => "shared_factor",
            Template::SubcodeSum { .. } => "subcode_sum",
            Template::Corollary { .. } => "corollary",
            Template::Qt { .. } => "qt",
        }
    }

    pub fn field(&self) -> Result<PrimeField> {
        let q = match self {
            Template::CoprimeConcat { q, .. }
            | Template::Degenerate { q, .. }
            | Template::SharedFactor { q, .. }
            | Template::SubcodeSum { q, .. }
            | Template::Corollary { q, .. }
            | Template::Qt { q, .. } => *q,
        };
        PrimeField::new(q)
    }

    /// Validate the hypotheses and realize the code.
    pub fn build(&self, ev: &Evaluator) -> Result<ConstructionReport> {
        let f = self.field()?;
        let poly = |c: &[i64]| Poly::from_i64(f, c);
        match self {
            Template::CoprimeConcat { b1, g1, b2, g2, .. } => {
                build_coprime_concat(ev, &b1.build(f)?, &poly(g1), &b2.build(f)?, &poly(g2))
            }
            Template::Degenerate { b1, b2, g, p1, p2, .. } => {
                let (b1, b2) = (b1.build(f)?, b2.build(f)?);
                let (g, h) = self.split_of(&b1, &b2, &poly(g))?;
                check_degenerate(&b1, &b2, (&g, &h), &poly(p1), &poly(p2))
            }
            Template::SharedFactor { b1, b2, g, p1, p2, .. } => {
                let (b1, b2) = (b1.build(f)?, b2.build(f)?);
                let (g, h) = self.split_of(&b1, &b2, &poly(g))?;
                build_shared_factor(ev, &b1, &b2, (&g, &h), &poly(p1), &poly(p2))
            }
            Template::SubcodeSum { k, blocks, .. } => {
                let specs = blocks
                    .iter()
                    .map(|b| {
                        Ok(SubcodeBlock {
                            binomial: Binomial::over(f, b.n, b.a)?,
                            g: poly(&b.g),
                            p: poly(&b.p),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                build_subcode_sum(ev, &specs, *k)
            }
            Template::Corollary { b1, p1, b2, g, p2, .. } => {
                let (b1, b2) = (b1.build(f)?, b2.build(f)?);
                let g = poly(g);
                let h = cofactor(&b2.to_poly(), &g)?;
                build_corollary(ev, &b1, &poly(p1), &b2, (&g, &h), &poly(p2))
            }
            Template::Qt { m, a, g, fs, .. } => {
                let fs: Vec<Poly> = fs.iter().map(|c| poly(c)).collect();
                qt_bound(ev, &Binomial::over(f, *m, *a)?, &poly(g), &fs)
            }
        }
    }

    fn split_of(&self, b1: &Binomial, b2: &Binomial, g: &Poly) -> Result<(Poly, Poly)> {
        let d = gcd_binomial(b1, b2)?.ok_or_else(|| violation("gcd of the binomials is 1"))?;
        let h = cofactor(&d.to_poly(), g)?;
        Ok((g.clone(), h))
    }

    /// Length of the block each multiplier slot acts on.
    pub fn slot_block_lengths(&self) -> Vec<usize> {
        match self {
            Template::CoprimeConcat { .. } => Vec::new(),
            Template::Degenerate { b1, b2, .. }
            | Template::SharedFactor { b1, b2, .. }
            | Template::Corollary { b1, b2, .. } => vec![b1.n, b2.n],
            Template::SubcodeSum { blocks, .. } => blocks.iter().map(|b| b.n).collect(),
            Template::Qt { m, fs, .. } => vec![*m; fs.len()],
        }
    }

    /// Current multiplier polynomials, in slot order.
    pub fn multipliers(&self) -> Result<Vec<Poly>> {
        let f = self.field()?;
        let poly = |c: &[i64]| Poly::from_i64(f, c);
        Ok(match self {
            Template::CoprimeConcat { .. } => Vec::new(),
            Template::Degenerate { p1, p2, .. }
            | Template::SharedFactor { p1, p2, .. }
            | Template::Corollary { p1, p2, .. } => vec![poly(p1), poly(p2)],
            Template::SubcodeSum { blocks, .. } => blocks.iter().map(|b| poly(&b.p)).collect(),
            Template::Qt { fs, .. } => fs.iter().map(|c| poly(c)).collect(),
        })
    }

    /// Polynomials each multiplier slot must be coprime to.
    pub fn coprime_targets(&self) -> Result<Vec<Poly>> {
        let f = self.field()?;
        let poly = |c: &[i64]| Poly::from_i64(f, c);
        match self {
            Template::CoprimeConcat { .. } => Ok(Vec::new()),
            Template::Degenerate { b1, b2, g, .. } => {
                let (b1, b2) = (b1.build(f)?, b2.build(f)?);
                let (g, h) = self.split_of(&b1, &b2, &poly(g))?;
                let s = shared_split(&b1, &b2, &g, &h)?;
                Ok(vec![&s.h * &s.h1, &s.h * &s.h2])
            }
            Template::SharedFactor { b1, b2, g, .. } => {
                let (b1, b2) = (b1.build(f)?, b2.build(f)?);
                let (g, h) = self.split_of(&b1, &b2, &poly(g))?;
                let s = shared_split(&b1, &b2, &g, &h)?;
                Ok(vec![s.g.clone(), s.g])
            }
            Template::SubcodeSum { blocks, .. } => blocks
                .iter()
                .map(|b| cofactor(&Binomial::over(f, b.n, b.a)?.to_poly(), &poly(&b.g)))
                .collect(),
            Template::Corollary { b1, b2, g, .. } => {
                let b2 = b2.build(f)?.to_poly();
                Ok(vec![b1.build(f)?.to_poly(), cofactor(&b2, &poly(g))?])
            }
            Template::Qt { m, a, g, fs, .. } => {
                let h = cofactor(&Binomial::over(f, *m, *a)?.to_poly(), &poly(g))?;
                Ok(vec![h; fs.len()])
            }
        }
    }

    /// Copy of the template with the multiplier slots replaced.
    pub fn with_multipliers(&self, ps: &[Poly]) -> Result<Template> {
        let want = self.multipliers()?.len();
        if ps.len() != want {
            return Err(Error::LengthMismatch {
                expected: want,
                got: ps.len(),
            });
        }
        let mut t = self.clone();
        match &mut t {
            Template::CoprimeConcat { .. } => {}
            Template::Degenerate { p1, p2, .. }
            | Template::SharedFactor { p1, p2, .. }
            | Template::Corollary { p1, p2, .. } => {
                *p1 = to_i64(&ps[0]);
                *p2 = to_i64(&ps[1]);
            }
            Template::SubcodeSum { blocks, .. } => {
                for (b, p) in blocks.iter_mut().zip(ps) {
                    b.p = to_i64(p);
                }
            }
            Template::Qt { fs, .. } => *fs = ps.iter().map(to_i64).collect(),
        }
        Ok(t)
    }
}

fn cofactor(modulus: &Poly, g: &Poly) -> Result<Poly> {
    if g.is_zero() {
        return Err(Error::ZeroGenerator);
    }
    modulus
        .div_exact(g)
        .map_err(|_| violation(format!("{g} does not divide {modulus}")))
}

/// Parameters of the full code `<g>` of length `n`, shift constant `a`.
pub fn constituent_params(ev: &Evaluator, b: &Binomial, g: &Poly) -> Result<CodeParams> {
    ev.constituent(&make_constacyclic(b.n(), b.a(), g)?)
}

/// Codewords of `code` supported on exactly one block, by enumeration.
pub fn single_block_codewords(code: &MtCode, budget: u64) -> Result<u64> {
    let m = code.matrix();
    let total = (m.field().order() as u128)
        .checked_pow(m.k() as u32)
        .map_or(u128::MAX, |t| t - 1);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded { needed: total, budget });
    }
    let lens: Vec<usize> = code.generator().blocks().iter().map(MtBlock::m).collect();
    let q = code.field().order();
    let k = m.k();
    let mut msg = vec![0u32; k];
    let mut count = 0;
    for _ in 0..total {
        for c in msg.iter_mut() {
            *c += 1;
            if u64::from(*c) < q {
                break;
            }
            *c = 0;
        }
        let w = m.encode(&msg)?;
        let mut start = 0;
        let mut nonzero_blocks = 0;
        for &l in &lens {
            if w[start..start + l].iter().any(|&x| x != 0) {
                nonzero_blocks += 1;
            }
            start += l;
        }
        if nonzero_blocks == 1 {
            count += 1;
        }
    }
    Ok(count)
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

    fn bin(p: u64, n: usize, a: i64) -> Binomial {
        Binomial::over(gf(p), n, a).unwrap()
    }

    fn exact(r: &ConstructionReport) -> usize {
        min_distance_exhaustive(r.code.matrix(), u64::MAX).unwrap().d
    }

    #[test]
    fn coprime_concat_small() {
        let ev = Evaluator::default();
        let r = build_coprime_concat(
            &ev,
            &bin(3, 2, 1),
            &poly(3, &[2, 1]),
            &bin(3, 4, 2),
            &poly(3, &[2, 1, 1]),
        )
        .unwrap();
        assert_eq!((r.predicted_n, r.predicted_k), (6, 3));
        let d1 = min_distance_exhaustive(
            &make_constacyclic(2, gf(3).elem(1), &poly(3, &[2, 1]))
                .unwrap()
                .genmatrix(),
            u64::MAX,
        )
        .unwrap()
        .d;
        let d2 = min_distance_exhaustive(
            &make_constacyclic(4, gf(3).elem(2), &poly(3, &[2, 1, 1]))
                .unwrap()
                .genmatrix(),
            u64::MAX,
        )
        .unwrap()
        .d;
        assert_eq!(r.bound_value, d1.min(d2));
        assert_eq!(exact(&r), r.bound_value);

        let full = build_coprime_concat(&ev, &bin(3, 2, 1), &poly(3, &[1]), &bin(3, 4, 2), &poly(3, &[1])).unwrap();
        let mut full = full;
        ev.evaluate(&mut full).unwrap();
        assert_eq!(full.params().unwrap(), CodeParams::new(6, 6, 1, 3).unwrap());
        assert_eq!(full.bound_holds(), Some(true));
    }

    #[test]
    fn coprime_concat_errors() {
        let ev = Evaluator::default();
        assert!(matches!(
            build_coprime_concat(&ev, &bin(3, 4, 1), &poly(3, &[1]), &bin(3, 2, 2), &poly(3, &[1])),
            Err(Error::GcdNotOne(_))
        ));
        assert!(matches!(
            build_coprime_concat(&ev, &bin(3, 2, 1), &poly(3, &[0, 1]), &bin(3, 4, 2), &poly(3, &[1])),
            Err(Error::NotADivisor { .. })
        ));
    }

    #[test]
    fn degenerate_small() {
        // gcd(x^4 - 1, x^2 - 2) = x^2 - 2 over GF(3)
        let (b1, b2) = (bin(3, 4, 1), bin(3, 2, 2));
        for (g, h) in candidate_splits(&b1, &b2, 16).unwrap() {
            let r = check_degenerate(&b1, &b2, (&g, &h), &poly(3, &[1]), &poly(3, &[1])).unwrap();
            let w = r.witness.clone().unwrap();
            assert_eq!(w.iter().filter(|&&x| x != 0).count(), 2);
            assert!(exact(&r) <= 2);
        }
        assert!(matches!(
            check_degenerate(
                &b1,
                &b1,
                (&poly(3, &[1]), &poly(3, &[1])),
                &poly(3, &[1]),
                &poly(3, &[1])
            ),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn shared_factor_identity_multipliers_have_no_single_block_words() {
        // gcd(x^8 - 1, x^4 - 1) = x^4 - 1 over GF(5) = (x-1)(x-2)(x-3)(x-4)
        let ev = Evaluator::default();
        let (b1, b2) = (bin(5, 8, 1), bin(5, 4, 1));
        let g = poly(5, &[-1, 1]) * poly(5, &[-2, 1]);
        let h = Poly::binomial(gf(5), 4, 1).div_exact(&g).unwrap();
        let r = build_shared_factor(&ev, &b1, &b2, (&g, &h), &poly(5, &[1]), &poly(5, &[1])).unwrap();
        assert_eq!(r.predicted_k, 2);
        assert_eq!(single_block_codewords(&r.code, 1 << 20).unwrap(), 0);
        assert!(exact(&r) >= r.bound_value);
    }

    #[test]
    fn corollary_identity_multipliers() {
        // x^4 - 1 over GF(5), h = (x-1)(x-2), n1 = 2
        let ev = Evaluator::default();
        let g = poly(5, &[-3, 1]) * poly(5, &[-4, 1]);
        let h = poly(5, &[-1, 1]) * poly(5, &[-2, 1]);
        let b1 = bin(5, 2, 2);
        let r = build_corollary(&ev, &b1, &poly(5, &[1]), &bin(5, 4, 1), (&g, &h), &poly(5, &[1])).unwrap();
        assert_eq!((r.code.n(), r.code.k()), (6, 2));
        assert!(exact(&r) >= r.bound_value);
    }

    #[test]
    fn qt_cases() {
        let ev = Evaluator::default();
        let b = bin(3, 8, 1);
        let g = poly(3, &[1, 1]) * poly(3, &[2, 1]);
        let single = qt_bound(&ev, &b, &g, &[poly(3, &[1])]).unwrap();
        let cc = make_constacyclic(8, gf(3).elem(1), &g).unwrap();
        assert!(single.code.matrix().same_row_space(&cc.genmatrix()));
        assert_eq!(exact(&single), single.bound_value);

        let doubled = qt_bound(&ev, &b, &g, &[poly(3, &[1]), poly(3, &[1])]).unwrap();
        assert_eq!(exact(&doubled), 2 * single.bound_value);
        assert!(matches!(
            qt_bound(&ev, &b, &g, &[poly(3, &[1, 0, 1])]),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn subcode_sum_rejects_unequal_dimensions() {
        let ev = Evaluator::default();
        let specs = vec![
            SubcodeBlock {
                binomial: bin(3, 4, 1),
                g: poly(3, &[1]),
                p: poly(3, &[1]),
            },
            SubcodeBlock {
                binomial: bin(3, 5, 1),
                g: poly(3, &[1]),
                p: poly(3, &[1]),
            },
        ];
        assert_eq!(
            build_subcode_sum(&ev, &specs, 4),
            Err(Error::UnequalDimensions(vec![4, 5]))
        );
    }

    #[test]
    fn template_json_round_trip() {
        let json = r#"{"construction": "shared_factor", "q": 3, "b1": {"n": 20, "a": 2},
            "b2": {"n": 40, "a": 1}, "g": [2,2,0,0,1,1,1], "p1": [0,2,1,1], "p2": [1,2,1,1,1,1]}"#;
        let t: Template = serde_json::from_str(json).unwrap();
        assert_eq!(t.name(), "shared_factor");
        assert_eq!(t.multipliers().unwrap().len(), 2);
        let back: Template = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, t);
        let swapped = t.with_multipliers(&[poly(3, &[1]), poly(3, &[2])]).unwrap();
        assert_eq!(swapped.multipliers().unwrap()[1], poly(3, &[2]));

        let ev = Evaluator::default();
        let r = t.build(&ev).unwrap();
        let rec = r.to_record();
        let text = serde_json::to_string(&rec).unwrap();
        let as_code: MtCodeSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(as_code.build().unwrap(), r.code);
        assert_eq!(serde_json::from_str::<ReportRecord>(&text).unwrap(), rec);
    }
}
