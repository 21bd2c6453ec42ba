//! Argument handling and subcommands for the `mtcodes` binary.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use mtcodes::algebra::PrimeField;
use mtcodes::constructions::{BinomialSpec, Evaluator, Template};
use mtcodes::factorization::{binomial_gcd, factor_binomial, Binomial};
use mtcodes::lincode::{min_distance_with, DistanceOptions, Method};
use mtcodes::mtcore::CodeSpec;
use mtcodes::reference::{ReferenceFixture, VerifyOptions};
use mtcodes::search::{run_search, write_results_csv, BestKnownTable, SearchConfig};

#[derive(Debug, Parser)]
#[command(name = "mtcodes", version, about = "Multi-twisted codes over prime fields")]
#[command(arg_required_else_help = true)]
pub struct Cli {
    /// Worker threads (1 reproduces every output exactly).
    #[arg(long, global = true, env = "MTCODES_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor x^n - a over GF(q); prints one coefficient array per line.
    Factor {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
    },
    /// gcd of two binomials x^n - a, each given as `n,a`.
    Gcd {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        b1: BinomialArg,
        #[arg(long, allow_hyphen_values = true)]
        b2: BinomialArg,
    },
    /// Build a construction from a template and write the code spec.
    Construct {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also compute the exact minimum distance.
        #[arg(long)]
        distance: bool,
    },
    /// Exact minimum distance of a code spec.
    Mindist {
        #[arg(long)]
        code: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Randomized multiplier search.
    Search {
        #[arg(long)]
        config: PathBuf,
        /// Best-known table CSV (`q,n,k,d`); the bundled table if omitted.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Results CSV; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute every bundled reference example.
    VerifyPaper {
        /// Skip the slow length-53 distance computation.
        #[arg(long)]
        skip_slow: bool,
        /// Fixture JSON replacing the bundled examples.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    #[arg(long, default_value = "auto")]
    pub method: Method,
    /// Maximum number of messages to enumerate.
    #[arg(long)]
    pub budget: Option<u64>,
}

/// `n,a` on the command line.
#[derive(Clone, Copy, Debug)]
pub struct BinomialArg(pub BinomialSpec);

impl FromStr for BinomialArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (n, a) = s.split_once(',').ok_or_else(|| format!("expected `n,a`, got `{s}`"))?;
        let n = n.trim().parse().map_err(|e| format!("bad n in `{s}`: {e}"))?;
        let a = a.trim().parse().map_err(|e| format!("bad a in `{s}`: {e}"))?;
        Ok(Self(BinomialSpec { n, a }))
    }
}

/// Parse `args`, run the command, and return the process exit status:
/// 0 on success, 1 on computational errors, 2 on usage errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn execute(cli: Cli) -> anyhow::Result<i32> {
    let pool = match cli.threads {
        Some(0) => bail!("--threads must be at least 1"),
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?,
        None => rayon::ThreadPoolBuilder::new().build()?,
    };
    pool.install(|| dispatch(cli.command))
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn dispatch(cmd: Command) -> anyhow::Result<i32> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cmd {
        Command::Factor { q, n, a } => {
            let b = Binomial::over(PrimeField::new(q)?, n, a)?;
            for f in factor_binomial(&b)?.factors {
                writeln!(out, "{}", f.to_array_string())?;
            }
        }
        Command::Gcd { q, b1, b2 } => {
            let f = PrimeField::new(q)?;
            let g = binomial_gcd(&b1.0.build(f)?, &b2.0.build(f)?)?;
            writeln!(out, "{}", g.to_array_string())?;
        }
        Command::Construct {
            spec,
            out: path,
            distance,
        } => {
            let template: Template = serde_json::from_str(&read(&spec)?).context("parsing template")?;
            let ev = Evaluator::default();
            let mut report = template.build(&ev)?;
            if distance {
                ev.evaluate(&mut report)?;
            }
            let json = serde_json::to_string_pretty(&report.to_record())?;
            fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
            let d = report.actual_d.map_or_else(|| "?".to_string(), |d| d.to_string());
            writeln!(
                out,
                "{} [{},{},{}]_{} {} {}",
                template.name(),
                report.code.n(),
                report.code.k(),
                d,
                report.code.field().p(),
                report.bound_kind,
                report.bound_value
            )?;
        }
        Command::Mindist { code, engine } => {
            let m = CodeSpec::from_json(&read(&code)?)?.genmatrix()?;
            let opts = DistanceOptions {
                method: engine.method,
                budget: engine.budget,
                progress: None,
            };
            let r = min_distance_with(&m, &opts)?;
            writeln!(out, "d={}", r.d)?;
            let w: Vec<String> = r.witness.iter().map(u32::to_string).collect();
            writeln!(out, "witness=[{}]", w.join(","))?;
        }
        Command::Search {
            config,
            table,
            seed,
            out: path,
        } => {
            let mut cfg = SearchConfig::from_json(&read(&config)?)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let table = match table {
                Some(p) => BestKnownTable::from_csv(read(&p)?.as_bytes())?,
                None => BestKnownTable::bundled(),
            };
            let results = run_search(&cfg, &table)?;
            match path {
                Some(p) => {
                    let file = fs::File::create(&p).with_context(|| format!("creating {}", p.display()))?;
                    write_results_csv(&results, file)?;
                    writeln!(out, "{} results written to {}", results.len(), p.display())?;
                }
                None => write_results_csv(&results, &mut out)?,
            }
        }
        Command::VerifyPaper { skip_slow, fixture } => {
            let fixture = match fixture {
                Some(p) => serde_json::from_str(&read(&p)?).context("parsing fixture")?,
                None => ReferenceFixture::bundled(),
            };
            let report = fixture.run(VerifyOptions { skip_slow });
            writeln!(out, "{report}")?;
            return Ok(if report.overall() { 0 } else { 1 });
        }
    }
    Ok(0)
}
