//! Command-line front end: every library operation as a subcommand writing
//! JSON (or CSV for asymptotic tables).

pub mod cache;

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hypercount::beta::{m_split, sign_theta};
use hypercount::census::{census, count_constellations, count_hypermaps, CountQuery, MapKind};
use hypercount::character::{chi, frobenius_count};
use hypercount::littlewood::verify_littlewood;
use hypercount::oracle::{brute_constellations, brute_hypermaps};
use hypercount::relation::{asymptotic_table, coeff_table, verify_relation};
use hypercount::{bigser, Error, Partition};

#[derive(Debug, Parser)]
#[command(
    name = "hypercount",
    version,
    about = "Exact counts of rooted hypermaps and constellations"
)]
pub struct Cli {
    /// Worker threads (defaults to available parallelism)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write output to this file instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Irreducible character value chi^lambda at cycle type mu
    Chi {
        #[arg(long, value_parser = parse_partition)]
        lambda: Partition,
        #[arg(long, value_parser = parse_partition)]
        mu: Partition,
    },
    /// Tuples of given cycle types whose product with a fixed alpha is the identity
    Frobenius {
        #[arg(long, value_parser = parse_partition)]
        alpha: Partition,
        /// One cycle type per factor; repeat the flag
        #[arg(long = "beta", value_parser = parse_partition)]
        betas: Vec<Partition>,
    },
    /// m-split and sign of a partition
    Split {
        #[arg(long, value_parser = parse_partition)]
        theta: Partition,
        #[arg(long)]
        m: usize,
    },
    /// Coefficient table e, d, c for all indices up to the given order
    Coeffs {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        order: usize,
    },
    /// Rooted maps of one kind, size and genus
    Count(CountArgs),
    /// Character-based census of rooted maps with n hyperedges
    Census(SizeArgs),
    /// Brute-force census of rooted maps with n hyperedges
    Oracle(SizeArgs),
    #[command(subcommand)]
    Verify(Verify),
    /// Exact ratios H / (m^{2g} C) as CSV
    Asymptotics {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        g: usize,
        #[arg(long = "n", value_delimiter = ',', required = true)]
        ns: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<usize>>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// Character factorization at m-multiples of partitions
    Littlewood {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        max_size: usize,
    },
    /// Hypermap counts against the weighted sum of marked constellation counts
    Relation {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        g_max: usize,
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<usize>>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Kind {
    Hypermap,
    Constellation,
}

impl From<Kind> for MapKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Hypermap => MapKind::Hypermap,
            Kind::Constellation => MapKind::Constellation,
        }
    }
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    genus: usize,
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    marks: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct SizeArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    s.parse::<Partition>().map_err(|e| e.to_string())
}

fn degree_set(d: Option<Vec<usize>>) -> Option<BTreeSet<usize>> {
    d.map(|v| v.into_iter().collect())
}

/// What a successful command produced.
enum Outcome {
    Ok(String),
    /// A verification report containing failures.
    Failed(String),
}

#[derive(Serialize)]
struct Value<'a> {
    #[serde(serialize_with = "bigser::bigint")]
    value: &'a num_bigint::BigInt,
}

#[derive(Serialize)]
struct Count<'a, Q: Serialize> {
    query: Q,
    #[serde(serialize_with = "bigser::biguint")]
    count: &'a num_bigint::BigUint,
}

#[derive(Serialize)]
struct SplitReport {
    splittable: bool,
    components: Option<Vec<Partition>>,
    sign: Option<i8>,
}

#[derive(Serialize)]
struct FrobeniusQuery<'a> {
    alpha: &'a Partition,
    betas: &'a [Partition],
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn execute(command: Command) -> Result<Outcome, Error> {
    let out = match command {
        Command::Chi { lambda, mu } => json(&Value {
            value: &chi(&lambda, &mu)?,
        }),
        Command::Frobenius { alpha, betas } => json(&Count {
            count: &frobenius_count(&alpha, &betas)?,
            query: FrobeniusQuery {
                alpha: &alpha,
                betas: &betas,
            },
        }),
        Command::Split { theta, m } => {
            let components = m_split(&theta, m)?;
            let sign = match components {
                Some(_) => Some(sign_theta(&theta, m)?),
                None => None,
            };
            json(&SplitReport {
                splittable: components.is_some(),
                components,
                sign,
            })
        }
        Command::Coeffs { m, order } => json(&coeff_table(m, order)?),
        Command::Count(a) => {
            let q = CountQuery {
                kind: a.kind.into(),
                m: a.m,
                n: a.n,
                genus: a.genus,
                degrees: degree_set(a.degrees),
                marks: a.marks.unwrap_or_default(),
            };
            let count = match q.kind {
                MapKind::Hypermap => count_hypermaps(&q)?,
                MapKind::Constellation => count_constellations(&q)?,
            };
            json(&Count {
                query: &q,
                count: &count,
            })
        }
        Command::Census(a) => {
            let c = census(a.kind.into(), a.m, a.n)?;
            let records: Vec<_> = c
                .records()?
                .into_iter()
                .filter(|r| r.mu.size() == a.n)
                .collect();
            json(&records)
        }
        Command::Oracle(a) => {
            let c = match a.kind {
                Kind::Hypermap => brute_hypermaps(a.n, a.m)?,
                Kind::Constellation => brute_constellations(a.n, a.m)?,
            };
            json(&c.records()?)
        }
        Command::Verify(Verify::Littlewood { m, max_size }) => {
            let report = verify_littlewood(max_size, m)?;
            let text = json(&report);
            if !report.failures.is_empty() {
                return Ok(Outcome::Failed(text));
            }
            text
        }
        Command::Verify(Verify::Relation {
            m,
            n_max,
            g_max,
            degrees,
        }) => {
            let report = verify_relation(n_max, m, g_max, degree_set(degrees))?;
            let text = json(&report);
            if !report.failures.is_empty() {
                return Ok(Outcome::Failed(text));
            }
            text
        }
        Command::Asymptotics { m, g, ns, degrees } => {
            let rows = asymptotic_table(m, g, &degree_set(degrees), &ns)?;
            let mut s = String::from("n,numerator,denominator\n");
            for r in rows {
                s.push_str(&format!(
                    "{},{},{}\n",
                    r.n,
                    r.ratio.numer(),
                    r.ratio.denom()
                ));
            }
            s
        }
    };
    Ok(Outcome::Ok(out))
}

fn emit(text: &str, output: &Option<PathBuf>) -> std::io::Result<()> {
    match output {
        Some(path) => fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

/// Runs a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return 2;
        }
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return 2;
        }
    };
    let cache_dir = cache::cache_dir();
    if let Some(dir) = &cache_dir {
        if let Err(e) = cache::load(dir) {
            eprintln!("warning: ignoring character cache: {e}");
        }
    }
    let output = cli.output.clone();
    let result = pool.install(|| execute(cli.command));
    if let Some(dir) = &cache_dir {
        if let Err(e) = cache::store(dir) {
            eprintln!("warning: cannot write character cache: {e}");
        }
    }
    let (text, code) = match result {
        Ok(Outcome::Ok(t)) => (t, 0),
        Ok(Outcome::Failed(t)) => (t, 1),
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if let Err(e) = emit(&text, &output) {
        eprintln!("error: cannot write output: {e}");
        return 2;
    }
    code
}
