//! Bundled reference examples and a verifier that recomputes them.
//!
//! The fixture is plain data (serde), so a modified copy can be loaded from
//! JSON and checked the same way.

use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::algebra::{Poly, PrimeField};
use crate::constacyclic::make_constacyclic;
use crate::constructions::{BinomialSpec, Evaluator, SubcodeBlockSpec, Template};
use crate::error::Result;
use crate::factorization::binomial_gcd;
use crate::lincode::DistanceOptions;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcdCheck {
    pub name: String,
    pub q: u64,
    pub b1: BinomialSpec,
    pub b2: BinomialSpec,
    /// Ascending coefficients of the expected monic gcd.
    pub expected: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub n: usize,
    pub k: usize,
    pub d: usize,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.n, self.k, self.d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeSource {
    /// `<gen>` in GF(q)[x] / (x^n - a).
    Constacyclic {
        q: u64,
        n: usize,
        a: i64,
        gen: Vec<i64>,
    },
    Template(Template),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeCheck {
    pub name: String,
    pub expected: Expected,
    pub source: CodeSource,
    /// Skipped under `skip_slow`.
    #[serde(default)]
    pub slow: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceFixture {
    pub gcds: Vec<GcdCheck>,
    pub codes: Vec<CodeCheck>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub expected: String,
    pub computed: String,
    /// Theorem bound, for construction checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    pub status: Status,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    /// True iff no check failed (skipped checks do not fail the report).
    pub fn overall(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(
                f,
                "{:<8} {:<33} expected {:<14} computed {}",
                c.status, c.name, c.expected, c.computed
            )?;
            if let Some(b) = &c.bound {
                write!(f, " ({b})")?;
            }
            writeln!(f)?;
        }
        write!(f, "overall: {}", if self.overall() { "PASS" } else { "FAIL" })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    pub skip_slow: bool,
}

fn v(c: &[i64]) -> Vec<i64> {
    c.to_vec()
}

impl ReferenceFixture {
    pub fn bundled() -> Self {
        let b = |n, a| BinomialSpec { n, a };
        let gcd = |name: &str, b1, b2, expected: &[i64]| GcdCheck {
            name: name.into(),
            q: 7,
            b1,
            b2,
            expected: v(expected),
        };
        let code = |name: &str, (n, k, d), source, slow| CodeCheck {
            name: name.into(),
            expected: Expected { n, k, d },
            source,
            slow,
        };
        let ex2_g2 = v(&[
            2, 3, 5, 4, 6, 4, 0, 2, 2, 5, 2, 6, 4, 6, 5, 1, 2, 1, 0, 6, 5, 5, 3, 0, 6, 1, 5, 2, 0, 6, 4, 3, 5, 2, 2, 1,
            4, 1, 2, 3, 0, 3, 5, 5, 5, 1, 1,
        ]);
        let ex3_g2 = v(&[1, 1, 2, 4, 4, 4, 0, 4, 0, 2, 0, 3, 4, 2, 3, 2, 1]);
        Self {
            gcds: vec![
                gcd(
                    "gcd(x^10-4, x^15-1) over GF(7)",
                    b(10, 4),
                    b(15, 1),
                    &[5, 0, 0, 0, 0, 1],
                ),
                gcd("gcd(x^11-5, x^16-4) over GF(7)", b(11, 5), b(16, 4), &[4, 1]),
                gcd("gcd(x^12-3, x^15-4) over GF(7)", b(12, 3), b(15, 4), &[1]),
            ],
            codes: vec![
                code(
                    "constacyclic <h h1>, n=20 a=2",
                    (20, 6, 9),
                    CodeSource::Constacyclic {
                        q: 3,
                        n: 20,
                        a: 2,
                        gen: v(&[2, 1, 2, 1, 1, 2, 0, 1, 0, 1, 2, 1, 0, 2, 1]),
                    },
                    false,
                ),
                code(
                    "constacyclic <h h2>, n=40 a=1",
                    (40, 6, 18),
                    CodeSource::Constacyclic {
                        q: 3,
                        n: 40,
                        a: 1,
                        gen: v(&[
                            1, 2, 1, 2, 2, 1, 0, 2, 0, 2, 1, 2, 0, 1, 2, 0, 0, 0, 0, 0, 2, 1, 2, 1, 1, 2, 0, 1, 0, 1,
                            2, 1, 0, 2, 1,
                        ]),
                    },
                    false,
                ),
                code(
                    "shared factor (20,2)+(40,1)",
                    (60, 6, 36),
                    CodeSource::Template(shared_factor_60()),
                    false,
                ),
                code(
                    "corollary (7,1)+(16,1)",
                    (23, 7, 13),
                    CodeSource::Template(Template::Corollary {
                        q: 7,
                        b1: b(7, 1),
                        p1: v(&[0, 0, 4, 2, 1, 2, 1]),
                        b2: b(16, 1),
                        g: v(&[6, 2, 1, 3, 5, 1, 2, 1, 6, 1]),
                        p2: v(&[1, 6, 1, 1, 6, 0, 2]),
                    }),
                    false,
                ),
                code(
                    "constacyclic <g2>, n=50 a=3",
                    (50, 4, 42),
                    CodeSource::Constacyclic {
                        q: 7,
                        n: 50,
                        a: 3,
                        gen: ex2_g2.clone(),
                    },
                    false,
                ),
                code(
                    "subcode (4,2)+(50,3)",
                    (54, 4, 44),
                    CodeSource::Template(Template::SubcodeSum {
                        q: 7,
                        k: 4,
                        blocks: vec![
                            SubcodeBlockSpec {
                                n: 4,
                                a: 2,
                                g: v(&[1]),
                                p: v(&[1]),
                            },
                            SubcodeBlockSpec {
                                n: 50,
                                a: 3,
                                g: ex2_g2,
                                p: v(&[5, 1, 2, 1]),
                            },
                        ],
                    }),
                    false,
                ),
                code(
                    "constacyclic <g2>, n=34 a=2",
                    (34, 18, 10),
                    CodeSource::Constacyclic {
                        q: 5,
                        n: 34,
                        a: 2,
                        gen: ex3_g2.clone(),
                    },
                    false,
                ),
                code(
                    "subcode (19,1)+(34,2)",
                    (53, 18, 21),
                    CodeSource::Template(Template::SubcodeSum {
                        q: 5,
                        k: 18,
                        blocks: vec![
                            SubcodeBlockSpec {
                                n: 19,
                                a: 1,
                                g: v(&[4, 1]),
                                p: v(&[1]),
                            },
                            SubcodeBlockSpec {
                                n: 34,
                                a: 2,
                                g: ex3_g2,
                                p: v(&[1, 0, 4, 4, 4, 4, 3, 3, 2, 4, 2, 4, 2, 3, 2, 3, 2, 3]),
                            },
                        ],
                    }),
                    true,
                ),
                code(
                    "subcode (13,1)+(20,2)",
                    (33, 12, 12),
                    CodeSource::Template(Template::SubcodeSum {
                        q: 3,
                        k: 12,
                        blocks: vec![
                            SubcodeBlockSpec {
                                n: 13,
                                a: 1,
                                g: v(&[2, 1]),
                                p: v(&[1]),
                            },
                            SubcodeBlockSpec {
                                n: 20,
                                a: 2,
                                g: v(&[1, 1, 2, 2, 1, 2, 2, 1, 1]),
                                p: v(&[0, 2, 1, 2, 2, 1, 1, 2, 1, 2, 1, 2]),
                            },
                        ],
                    }),
                    false,
                ),
            ],
        }
    }

    pub fn len(&self) -> usize {
        self.gcds.len() + self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn run(&self, opts: VerifyOptions) -> VerifyReport {
        let mut checks: Vec<CheckOutcome> = self.gcds.iter().map(run_gcd).collect();
        let ev = Evaluator::new(DistanceOptions::default());
        for c in &self.codes {
            if opts.skip_slow && c.slow {
                checks.push(CheckOutcome {
                    name: c.name.clone(),
                    expected: c.expected.to_string(),
                    computed: "-".into(),
                    bound: None,
                    status: Status::Skipped,
                    elapsed: Duration::ZERO,
                });
            } else {
                checks.push(run_code(&ev, c));
            }
        }
        VerifyReport { checks }
    }
}

/// The shared-factor construction of length 60 over GF(3), with its
/// published multipliers.
pub fn shared_factor_60() -> Template {
    Template::SharedFactor {
        q: 3,
        b1: BinomialSpec { n: 20, a: 2 },
        b2: BinomialSpec { n: 40, a: 1 },
        g: v(&[2, 2, 0, 0, 1, 1, 1]),
        p1: v(&[0, 2, 1, 1]),
        p2: v(&[1, 2, 1, 1, 1, 1]),
    }
}

fn failed(name: &str, expected: String, err: impl fmt::Display, elapsed: Duration) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        expected,
        computed: format!("error: {err}"),
        bound: None,
        status: Status::Fail,
        elapsed,
    }
}

fn run_gcd(c: &GcdCheck) -> CheckOutcome {
    let start = Instant::now();
    let compute = || -> Result<(Poly, Poly)> {
        let f = PrimeField::new(c.q)?;
        let g = binomial_gcd(&c.b1.build(f)?, &c.b2.build(f)?)?;
        Ok((g, Poly::from_i64(f, &c.expected)))
    };
    match compute() {
        Ok((got, want)) => CheckOutcome {
            name: c.name.clone(),
            expected: want.to_string(),
            computed: got.to_string(),
            bound: None,
            status: if got == want { Status::Pass } else { Status::Fail },
            elapsed: start.elapsed(),
        },
        Err(e) => failed(&c.name, format!("{:?}", c.expected), e, start.elapsed()),
    }
}

fn run_code(ev: &Evaluator, c: &CodeCheck) -> CheckOutcome {
    let start = Instant::now();
    let compute = || -> Result<(Expected, Option<(String, bool)>)> {
        match &c.source {
            CodeSource::Constacyclic { q, n, a, gen } => {
                let f = PrimeField::new(*q)?;
                let code = make_constacyclic(*n, f.elem(*a), &Poly::from_i64(f, gen))?;
                let p = code.params(ev.options())?;
                Ok((Expected { n: p.n, k: p.k, d: p.d }, None))
            }
            CodeSource::Template(t) => {
                let mut r = t.build(ev)?;
                let d = ev.evaluate(&mut r)?.d;
                let bound = format!("{} {}", r.bound_kind, r.bound_value);
                let holds = r.bound_holds() == Some(true);
                Ok((
                    Expected {
                        n: r.code.n(),
                        k: r.code.k(),
                        d,
                    },
                    Some((bound, holds)),
                ))
            }
        }
    };
    match compute() {
        Ok((got, bound)) => {
            let ok = got == c.expected && bound.as_ref().is_none_or(|(_, holds)| *holds);
            CheckOutcome {
                name: c.name.clone(),
                expected: c.expected.to_string(),
                computed: got.to_string(),
                bound: bound.map(|(b, _)| b),
                status: if ok { Status::Pass } else { Status::Fail },
                elapsed: start.elapsed(),
            }
        }
        Err(e) => failed(&c.name, c.expected.to_string(), e, start.elapsed()),
    }
}
