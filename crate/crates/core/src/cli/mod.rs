//! The `drcalc` command line.
//!
//! [`run`] parses arguments, resolves the [`Config`], runs one subcommand on a
//! dedicated thread pool and returns the process exit code: 0 on success, 1
//! when a check fails, 2 on malformed input.

pub mod bench;
pub mod config;
pub mod io;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

pub use config::{Config, FlagOverrides};

use crate::drclass::{
    assemble_dr, extract_coefficient, forget_pushforward, push_sweep, DecoratedGraph, DrTable, Flavor, StrataVector,
};
use crate::drinvariant::{Cache, Evaluator, Method};
use crate::error::{Error, Result};
use crate::exactmath::poly::{parse_monomial, MultiPoly};
use crate::exactmath::rational::to_pq;
use crate::graph::{automorphism_order, canonical_digest, canonical_form, enumerate_stable_graphs, StableGraph};
use crate::identities::{run_suite, CheckReport, Status, Suite, SuiteOptions};
use io::{emit, read_graph, read_graphs, read_json, to_sorted_json, GraphListFile, FILE_SCHEMA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "drcalc", version, about = "Exact DR graph invariants, DR coefficient tables and identity checks")]
struct Cli {
    /// TOML configuration file (also `DRCALC_CONFIG`, else `./drcalc.toml` if present).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Result cache directory (also `DRCALC_CACHE_DIR`).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Neither read nor write the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads (also `DRCALC_JOBS`).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Treat report-only outcomes as failures.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stable graph utilities.
    Graphs {
        #[command(subcommand)]
        command: GraphsCommand,
    },
    /// The DR graph invariant of one graph.
    Invariant(InvariantArgs),
    /// The DR coefficient table of a moduli space.
    Table(TableArgs),
    /// Coefficients of one charge monomial in a table.
    Coeff(CoeffArgs),
    /// Pushforward along the map forgetting a marking.
    Push(PushArgs),
    /// Run identity checks.
    Verify(VerifyArgs),
    /// CSV timings of the three methods.
    Bench(BenchArgs),
    /// Result cache administration.
    Cache {
        #[command(subcommand)]
        command: CacheCommand,
    },
}

#[derive(Debug, Subcommand)]
enum GraphsCommand {
    /// All stable graphs of genus g with n legs, up to isomorphism.
    Gen {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
        /// Defaults to 3g - 3 + n, i.e. no bound.
        #[arg(long)]
        max_edges: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Canonical form, digest and automorphism count of a graph.
    Canon {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct InvariantArgs {
    #[arg(long)]
    graph: PathBuf,
    /// oracle, laurent, division, both (oracle and laurent) or all.
    #[arg(long, default_value = "both")]
    method: String,
    /// full or top.
    #[arg(long, default_value = "full")]
    flavor: Flavor,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long)]
    g: u32,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    codim: u32,
    #[arg(long, default_value = "full")]
    flavor: Flavor,
    #[arg(long, default_value = "laurent")]
    method: Method,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CoeffArgs {
    #[arg(long)]
    table: PathBuf,
    /// A monomial in b, a_2, ..., a_n such as `b^2` or `b*a_2`.
    #[arg(long)]
    monomial: String,
    /// Defaults to half the degree of the monomial.
    #[arg(long)]
    codim: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PushArgs {
    /// Symbolic mode: a full table to push forward.
    #[arg(long, conflicts_with_all = ["g", "n", "codim", "b", "a"])]
    table: Option<PathBuf>,
    /// Marking to forget in symbolic mode; defaults to the last one.
    #[arg(long, requires = "table")]
    leg: Option<u32>,
    /// Numeric mode: genus.
    #[arg(long, requires_all = ["n", "codim", "b"])]
    g: Option<u32>,
    /// Numeric mode: markings left after forgetting the last one.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    codim: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<i64>,
    /// Comma-separated values of a_2, ..., a_n.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a: Vec<i64>,
    #[arg(long, default_value = "laurent")]
    method: Method,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// all, scalar, topdeg, aux, codimdeg, push or unidr.
    #[arg(long, default_value = "all")]
    suite: Suite,
    #[arg(long)]
    g: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    codim: Option<u32>,
    /// Graph or graph list for the per-graph checks instead of the corpus.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, default_value = "laurent")]
    method: Method,
    /// Write a JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Include timings in the JSON report.
    #[arg(long)]
    timings: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Graph or graph list; defaults to the corpus without subdivisions.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Comma-separated methods.
    #[arg(long, value_delimiter = ',', default_value = "oracle,laurent,division")]
    method: Vec<Method>,
    #[arg(long, default_value_t = 1)]
    repeat: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum CacheCommand {
    /// Entry counts per method and part.
    Stats,
    /// Remove every entry.
    Clear,
    /// Recompute a random sample of entries and compare.
    Verify {
        #[arg(long, default_value_t = 20)]
        sample: usize,
    },
}

/// Runs the CLI with the process environment, printing to stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut out = std::io::stdout();
    let mut err = std::io::stderr();
    run_with(argv, |k| std::env::var(k).ok(), &mut out, &mut err)
}

/// As [`run`], with an explicit environment and output streams.
pub fn run_with<I, T>(
    argv: I,
    env: impl Fn(&str) -> Option<String>,
    out: &mut (dyn Write + Send),
    err: &mut (dyn Write + Send),
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    let flags = FlagOverrides {
        config: cli.config.clone(),
        cache_dir: cli.cache_dir.clone(),
        no_cache: cli.no_cache,
        jobs: cli.jobs,
        strict: cli.strict,
    };
    let result = Config::resolve(&flags, env).and_then(|cfg| {
        let mut pool = rayon::ThreadPoolBuilder::new();
        if let Some(j) = cfg.jobs {
            pool = pool.num_threads(j);
        }
        let pool = pool.build().map_err(|e| Error::Domain(e.to_string()))?;
        pool.install(|| dispatch(cli.command, &cfg, out, err))
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "drcalc: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::Json(_)
        | Error::Graph(_)
        | Error::Domain(_)
        | Error::Io(_)
        | Error::Unsupported(_) => EXIT_BAD_INPUT,
        _ => EXIT_CHECK_FAILED,
    }
}

fn evaluator(cfg: &Config, method: Method) -> Evaluator {
    let e = Evaluator::new(method).with_oracle(cfg.oracle.clone());
    if cfg.cache {
        e.with_cache(Cache::new(&cfg.cache_dir))
    } else {
        e
    }
}

fn dispatch(cmd: Command, cfg: &Config, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32> {
    match cmd {
        Command::Graphs { command } => graphs(command, out),
        Command::Invariant(a) => invariant(a, cfg, out),
        Command::Table(a) => table(a, cfg, out),
        Command::Coeff(a) => coeff(a, out),
        Command::Push(a) => push(a, cfg, out),
        Command::Verify(a) => verify(a, cfg, out),
        Command::Bench(a) => bench_cmd(a, cfg, out, err),
        Command::Cache { command } => cache(command, cfg, out),
    }
}

fn graphs(cmd: GraphsCommand, out: &mut (dyn Write + Send)) -> Result<i32> {
    match cmd {
        GraphsCommand::Gen { g, n, max_edges, out: path } => {
            let bound = max_edges.unwrap_or((3 * g + n).saturating_sub(3) as usize);
            let graphs = enumerate_stable_graphs(g, n, bound)?;
            let file = GraphListFile { schema: FILE_SCHEMA, g, n, count: graphs.len(), graphs };
            emit(&to_sorted_json(&file)?, path.as_deref(), out)?;
        }
        GraphsCommand::Canon { graph, out: path } => {
            #[derive(Serialize)]
            struct Canon {
                schema: u32,
                canonical_form: String,
                digest: String,
                automorphisms: u64,
            }
            let g = read_graph(&graph)?;
            let c = Canon {
                schema: FILE_SCHEMA,
                canonical_form: canonical_form(&g)?,
                digest: canonical_digest(&g)?,
                automorphisms: automorphism_order(&g)?,
            };
            emit(&to_sorted_json(&c)?, path.as_deref(), out)?;
        }
    }
    Ok(EXIT_OK)
}

fn parse_methods(s: &str) -> Result<Vec<Method>> {
    match s {
        "both" => Ok(vec![Method::Oracle, Method::ZagierLaurent]),
        "all" => Ok(Method::ALL.to_vec()),
        other => Ok(vec![other.parse()?]),
    }
}

#[derive(Serialize)]
struct InvariantResult {
    method: Method,
    value: MultiPoly,
    text: String,
    provenance: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct InvariantFile {
    schema: u32,
    graph: StableGraph,
    flavor: Flavor,
    results: Vec<InvariantResult>,
    agree: bool,
}

fn invariant(a: InvariantArgs, cfg: &Config, out: &mut (dyn Write + Send)) -> Result<i32> {
    let g = read_graph(&a.graph)?;
    let methods = parse_methods(&a.method)?;
    let digest = canonical_digest(&g)?;
    let mut results = Vec::new();
    for m in methods {
        let ev = evaluator(cfg, m);
        let value = match a.flavor {
            Flavor::Full => ev.invariant(&g)?,
            Flavor::Top => ev.top(&g)?,
        };
        let mut provenance = BTreeMap::new();
        provenance.insert("canonical_digest".to_string(), digest.clone());
        provenance.insert("parameters".to_string(), ev.params());
        provenance.insert("eliminated".to_string(), "x_0".to_string());
        provenance.insert("version".to_string(), env!("CARGO_PKG_VERSION").to_string());
        results.push(InvariantResult { method: m, text: value.to_string(), value, provenance });
    }
    let agree = results.windows(2).all(|w| w[0].value == w[1].value);
    let file = InvariantFile { schema: FILE_SCHEMA, graph: g, flavor: a.flavor, results, agree };
    emit(&to_sorted_json(&file)?, a.out.as_deref(), out)?;
    Ok(if agree { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn table(a: TableArgs, cfg: &Config, out: &mut (dyn Write + Send)) -> Result<i32> {
    let t = assemble_dr(a.g, a.n, a.codim, a.flavor, &evaluator(cfg, a.method))?;
    emit(&to_sorted_json(&t)?, a.out.as_deref(), out)?;
    Ok(EXIT_OK)
}

fn read_table(path: &Path) -> Result<DrTable> {
    let t: DrTable = read_json(path)?;
    if t.schema != crate::drclass::table::TABLE_SCHEMA {
        return Err(Error::Parse(format!("{}: unsupported table schema {}", path.display(), t.schema)));
    }
    Ok(t)
}

fn coeff(a: CoeffArgs, out: &mut (dyn Write + Send)) -> Result<i32> {
    #[derive(Serialize)]
    struct Entry {
        stratum: crate::drclass::DecoratedStratum,
        coeff: String,
    }
    #[derive(Serialize)]
    struct CoeffFile {
        schema: u32,
        g: u32,
        n: u32,
        codim: u32,
        monomial: String,
        entries: Vec<Entry>,
    }
    let t = read_table(&a.table)?;
    let degree: u32 = parse_monomial(&a.monomial)?.iter().map(|(_, e)| e).sum();
    let c = a.codim.unwrap_or(degree / 2);
    let entries = extract_coefficient(&t, &a.monomial, c)?
        .into_iter()
        .map(|(stratum, q)| Entry { stratum, coeff: to_pq(&q) })
        .collect();
    let file = CoeffFile { schema: FILE_SCHEMA, g: t.g, n: t.n, codim: c, monomial: a.monomial, entries };
    emit(&to_sorted_json(&file)?, a.out.as_deref(), out)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct StrataEntry {
    stratum: DecoratedGraph,
    poly: MultiPoly,
}

fn strata_entries(v: &StrataVector) -> Vec<StrataEntry> {
    v.iter().map(|(k, p)| StrataEntry { stratum: DecoratedGraph::from_key(k), poly: p.clone() }).collect()
}

fn push(a: PushArgs, cfg: &Config, out: &mut (dyn Write + Send)) -> Result<i32> {
    #[derive(Serialize)]
    struct PushFile {
        schema: u32,
        g: u32,
        n: u32,
        forgotten: u32,
        #[serde(skip_serializing_if = "BTreeMap::is_empty")]
        charges: BTreeMap<String, i64>,
        entries: Vec<StrataEntry>,
    }
    let file = if let Some(path) = &a.table {
        let t = read_table(path)?;
        if t.flavor != Flavor::Full {
            return Err(Error::Domain("push needs a full table".into()));
        }
        if t.n == 0 {
            return Err(Error::Domain("the table has no marking to forget".into()));
        }
        let leg = a.leg.unwrap_or(t.n);
        let pushed = forget_pushforward(&t.to_strata()?, leg)?;
        PushFile {
            schema: FILE_SCHEMA,
            g: t.g,
            n: t.n - 1,
            forgotten: leg,
            charges: BTreeMap::new(),
            entries: strata_entries(&pushed),
        }
    } else {
        let (Some(g), Some(n), Some(c), Some(b)) = (a.g, a.n, a.codim, a.b) else {
            return Err(Error::Parse("push needs --table, or --g, --n, --codim and --b".into()));
        };
        let var = format!("a_{}", n + 1);
        let pushed = push_sweep(g, n, c, b, &a.a, &var, &evaluator(cfg, a.method))?;
        let mut charges = BTreeMap::from([("b".to_string(), b)]);
        for (i, v) in a.a.iter().enumerate() {
            charges.insert(format!("a_{}", i + 2), *v);
        }
        PushFile { schema: FILE_SCHEMA, g, n, forgotten: n + 1, charges, entries: strata_entries(&pushed) }
    };
    emit(&to_sorted_json(&file)?, a.out.as_deref(), out)?;
    Ok(EXIT_OK)
}

fn verify(a: VerifyArgs, cfg: &Config, out: &mut (dyn Write + Send)) -> Result<i32> {
    #[derive(Serialize)]
    struct Row {
        name: String,
        params: String,
        status: Status,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<String>,
        compared: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        millis: Option<u64>,
    }
    #[derive(Serialize)]
    struct ReportFile {
        schema: u32,
        suite: String,
        strict: bool,
        passed: bool,
        reports: Vec<Row>,
    }
    let opts = SuiteOptions {
        g: a.g,
        n: a.n,
        codim: a.codim,
        series_order: cfg.series_order,
        qbar_order: cfg.qbar_order,
        graphs: a.graph.as_deref().map(read_graphs).transpose()?,
    };
    let reports: Vec<CheckReport> = run_suite(a.suite, &opts, &evaluator(cfg, a.method))?;
    for r in &reports {
        writeln!(out, "{r}")?;
    }
    let ok = |r: &CheckReport| r.status == Status::Pass || (r.status == Status::Reported && !cfg.strict);
    let passed = reports.iter().all(ok);
    let failed = reports.iter().filter(|r| !ok(r)).count();
    writeln!(out, "{} checks, {} failed", reports.len(), failed)?;
    if let Some(path) = &a.report {
        let file = ReportFile {
            schema: FILE_SCHEMA,
            suite: format!("{:?}", a.suite).to_lowercase(),
            strict: cfg.strict,
            passed,
            reports: reports
                .into_iter()
                .map(|r| Row {
                    name: r.name,
                    params: r.params,
                    status: r.status,
                    witness: r.witness,
                    compared: r.compared,
                    millis: a.timings.then_some(r.millis),
                })
                .collect(),
        };
        std::fs::write(path, to_sorted_json(&file)?)?;
    }
    Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn bench_cmd(a: BenchArgs, cfg: &Config, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32> {
    let graphs = match &a.graph {
        Some(p) => read_graphs(p)?,
        None => crate::graph::base_corpus()?,
    };
    writeln!(err, "timing {} graphs x {} methods", graphs.len(), a.method.len())?;
    let rows = bench::bench_rows(&graphs, &a.method, a.repeat, &cfg.oracle)?;
    emit(&bench::to_csv(&rows), a.out.as_deref(), out)?;
    Ok(EXIT_OK)
}

fn cache(cmd: CacheCommand, cfg: &Config, out: &mut (dyn Write + Send)) -> Result<i32> {
    let store = Cache::new(&cfg.cache_dir);
    match cmd {
        CacheCommand::Stats => {
            #[derive(Serialize)]
            struct Stats {
                schema: u32,
                dir: String,
                entries: usize,
                by_kind: BTreeMap<String, usize>,
            }
            let entries = store.entries()?;
            let mut by_kind = BTreeMap::new();
            for e in &entries {
                *by_kind.entry(format!("{}/{:?}", e.method, e.part).to_lowercase()).or_insert(0) += 1;
            }
            let s =
                Stats { schema: FILE_SCHEMA, dir: store.dir().display().to_string(), entries: entries.len(), by_kind };
            emit(&to_sorted_json(&s)?, None, out)?;
            Ok(EXIT_OK)
        }
        CacheCommand::Clear => {
            let n = store.clear()?;
            writeln!(out, "removed {n} entries from {}", store.dir().display())?;
            Ok(EXIT_OK)
        }
        CacheCommand::Verify { sample } => {
            #[derive(Serialize)]
            struct VerifyFile {
                schema: u32,
                checked: usize,
                skipped: usize,
                mismatches: Vec<String>,
            }
            let entries = store.entries()?;
            let mut rng = StdRng::seed_from_u64(cfg.seed);
            let mut picked = rand::seq::index::sample(&mut rng, entries.len(), sample.min(entries.len())).into_vec();
            picked.sort_unstable();
            let (mut checked, mut skipped, mut mismatches) = (0, 0, Vec::new());
            for i in picked {
                let e = &entries[i];
                let ev = Evaluator::new(e.method).with_oracle(cfg.oracle.clone());
                if ev.params() != e.params {
                    skipped += 1;
                    continue;
                }
                checked += 1;
                if ev.recompute(e)? != e.value {
                    mismatches.push(format!("{} {} {:?}", e.canonical_form, e.method, e.part));
                }
            }
            let ok = mismatches.is_empty();
            emit(&to_sorted_json(&VerifyFile { schema: FILE_SCHEMA, checked, skipped, mismatches })?, None, out)?;
            Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use io::GraphFile;

    fn run_in(dir: &Path, args: &[&str]) -> (i32, String, String) {
        let cache = dir.join("cache");
        let env = move |k: &str| (k == crate::drinvariant::cache::CACHE_ENV).then(|| cache.display().to_string());
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("drcalc").chain(args.iter().copied());
        let code = run_with(argv, env, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn census_and_bad_input() {
        let dir = tempfile::tempdir().unwrap();
        let (code, out, _) = run_in(dir.path(), &["graphs", "gen", "--g", "2", "--n", "0"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["count"], 7);

        assert_eq!(run_in(dir.path(), &["frobnicate"]).0, EXIT_BAD_INPUT);
        assert_eq!(run_in(dir.path(), &["invariant", "--graph", "/nonexistent.json"]).0, EXIT_BAD_INPUT);
        assert_eq!(run_in(dir.path(), &["--help"]).0, EXIT_OK);
    }

    #[test]
    fn loop_invariant_through_the_cache() {
        let dir = tempfile::tempdir().unwrap();
        let g = dir.path().join("loop.json");
        let lp = StableGraph::raw(vec![StableGraph::v(0, &[1, 2])], vec![StableGraph::e(0, 0)], false);
        std::fs::write(&g, to_sorted_json(&GraphFile { schema: FILE_SCHEMA, graph: lp }).unwrap()).unwrap();
        let args = ["invariant", "--graph", g.to_str().unwrap(), "--method", "all"];
        let (code, first, _) = run_in(dir.path(), &args);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&first).unwrap();
        assert_eq!(v["agree"], true);
        assert_eq!(v["results"][0]["text"], "-1/12");
        let (_, second, _) = run_in(dir.path(), &args);
        assert_eq!(first, second);

        let (code, stats, _) = run_in(dir.path(), &["cache", "stats"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&stats).unwrap();
        assert_eq!(v["entries"], 3);
        let (code, verify, _) = run_in(dir.path(), &["cache", "verify"]);
        assert_eq!(code, EXIT_OK, "{verify}");
        let (code, _, _) = run_in(dir.path(), &["cache", "clear"]);
        assert_eq!(code, EXIT_OK);
    }
}
