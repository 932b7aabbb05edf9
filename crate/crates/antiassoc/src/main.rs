use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};

use antiassoc::corpus::{self, Corpus};
use antiassoc::suites::{self, Suite, SuiteConfig};
use antiassoc::{run, Format, Report, RunConfig};
use antiassoc_core::cohomology::{central_extension, check_ts, compute_h2, is_cocycle, Cocycle};
use antiassoc_core::scalars::{eval_rational, parse_expr};
use antiassoc_core::{RatFun, Rational};

/// Verify the classification tables of small nilpotent antiassociative algebras.
///
/// Every flag can also be set through an environment variable with the
/// ANTIASSOC_ prefix, e.g. ANTIASSOC_PRECISION=512.
#[derive(Parser, Debug)]
#[command(name = "antiassoc", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Corpus file; the bundled corpus is used when absent.
    #[arg(long, global = true, env = "ANTIASSOC_CORPUS")]
    corpus: Option<PathBuf>,
    /// Working precision in bits for numeric ladders (at least 64).
    #[arg(long, global = true, env = "ANTIASSOC_PRECISION", default_value_t = 256)]
    precision: usize,
    /// Residual tolerance on the final rung, in (0, 1).
    #[arg(long, global = true, env = "ANTIASSOC_TOL", default_value_t = 1e-8)]
    tol: f64,
    /// Ratio between consecutive ladder rungs, as a rational in (0, 1).
    #[arg(long, global = true, env = "ANTIASSOC_LADDER_RATIO", default_value = "1/10000")]
    ladder_ratio: String,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "ANTIASSOC_JOBS", default_value_t = 0)]
    jobs: usize,
    #[arg(long, global = true, env = "ANTIASSOC_FORMAT", value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, env = "ANTIASSOC_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run verification suites.
    Verify {
        /// Suite to run; repeatable. Defaults to all.
        #[arg(long = "suite", value_enum)]
        suites: Vec<SuiteArg>,
    },
    /// Print an algebra's multiplication table and invariants.
    Show { id: String },
    /// Compute the second cohomology of an algebra.
    H2 { id: String },
    /// Build a central extension from cocycles given as forms in Dij.
    Extend {
        id: String,
        #[arg(long = "cocycle", required = true)]
        cocycles: Vec<String>,
    },
    /// Check one degeneration claim.
    Degen { claim: String },
    /// Orbit and component dimensions.
    Dims,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum SuiteArg {
    All,
    Identities,
    Cohomology,
    Extensions,
    Alpha,
    Degenerations,
    Dimensions,
}

impl SuiteArg {
    fn expand(self) -> Vec<Suite> {
        match self {
            SuiteArg::All => Suite::ALL.to_vec(),
            SuiteArg::Identities => vec![Suite::Identities],
            SuiteArg::Cohomology => vec![Suite::Cohomology],
            SuiteArg::Extensions => vec![Suite::Extensions],
            SuiteArg::Alpha => vec![Suite::Alpha],
            SuiteArg::Degenerations => vec![Suite::Degenerations],
            SuiteArg::Dimensions => vec![Suite::Dimensions],
        }
    }
}

fn suite_config(g: &Global) -> anyhow::Result<SuiteConfig> {
    if g.precision < 64 {
        bail!("--precision must be at least 64");
    }
    if !(g.tol > 0.0 && g.tol < 1.0) {
        bail!("--tol must lie in (0, 1)");
    }
    let ratio: Rational = parse_expr(&g.ladder_ratio, &[])
        .map_err(|e| anyhow!("--ladder-ratio: {e}"))
        .and_then(|e| eval_rational(&e).map_err(|e| anyhow!("--ladder-ratio: {e}")))?;
    if ratio <= Rational::from_integer(0.into()) || ratio >= Rational::from_integer(1.into()) {
        bail!("--ladder-ratio must lie in (0, 1)");
    }
    Ok(SuiteConfig {
        precision: g.precision,
        tolerance: g.tol,
        ladder_ratio: ratio,
        seed: g.seed,
    })
}

fn load(g: &Global) -> Result<Corpus, corpus::CorpusError> {
    match &g.corpus {
        Some(p) => corpus::load_corpus(p),
        None => corpus::parse_corpus(corpus::BUNDLED),
    }
}

fn emit(report: &Report, format: Format) -> ExitCode {
    print!("{}", report.render(format));
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match suite_config(&cli.global) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let corpus = match load(&cli.global) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: corpus: {e}");
            return ExitCode::from(2);
        }
    };
    match execute(&cli, &corpus, cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli, corpus: &Corpus, cfg: SuiteConfig) -> anyhow::Result<ExitCode> {
    let g = &cli.global;
    let run_cfg = |suites: Vec<Suite>| RunConfig {
        suites,
        suite: cfg.clone(),
        jobs: g.jobs,
    };
    match &cli.command {
        Command::Verify { suites } => {
            let mut selected: Vec<Suite> = suites.iter().flat_map(|s| s.expand()).collect();
            if selected.is_empty() {
                selected = Suite::ALL.to_vec();
            }
            Ok(emit(&run(corpus, &run_cfg(selected)), g.format))
        }
        Command::Dims => Ok(emit(&run(corpus, &run_cfg(vec![Suite::Dimensions])), g.format)),
        Command::Degen { claim } => {
            let c = corpus
                .claim(claim)
                .with_context(|| format!("no degeneration claim `{claim}`"))?;
            let mut report = run(corpus, &run_cfg(Vec::new()));
            report.records = suites::degenerations(corpus, &cfg)
                .into_iter()
                .filter(|r| r.id == c.record.id || r.id.starts_with(&format!("{} (", c.record.id)))
                .collect();
            report.summary = antiassoc::report::summarize(&report.records);
            if g.format == Format::Text {
                for r in &report.records {
                    for (t, res) in &r.trace {
                        println!("  t = {t:.3e}  residual = {res:.3e}");
                    }
                }
            }
            Ok(emit(&report, g.format))
        }
        Command::Show { id } => {
            let e = corpus.algebra(id).with_context(|| format!("no algebra `{id}`"))?;
            let fp = e.algebra.fingerprint();
            match g.format {
                Format::Json => {
                    let v = serde_json::json!({
                        "id": e.record.id,
                        "name": e.record.name,
                        "dim": e.record.dim,
                        "params": e.algebra.params.iter().map(|p| p.name.clone()).collect::<Vec<_>>(),
                        "table": e.algebra.table_string(&corpus.vars),
                        "fingerprint": format!("{fp:?}"),
                    });
                    println!("{}", serde_json::to_string_pretty(&v)?);
                }
                Format::Text => {
                    println!("{} ({}), dimension {}", e.record.id, e.record.name, e.record.dim);
                    println!("{}", e.algebra.table_string(&corpus.vars));
                    println!("fingerprint (generic): {fp:?}");
                    println!(
                        "source: {} [{:?}]",
                        e.record.provenance.location, e.record.provenance.kind
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::H2 { id } => {
            let e = corpus.algebra(id).with_context(|| format!("no algebra `{id}`"))?;
            let spaces = compute_h2(&e.algebra);
            let reps: Vec<String> = spaces.reps.iter().map(|c| cocycle_string(c, corpus)).collect();
            let table = corpus.h2_table(id).map(|h| h.record.generators.clone());
            match g.format {
                Format::Json => {
                    let v = serde_json::json!({
                        "id": id,
                        "z2": spaces.z2.dim(),
                        "b2": spaces.b2.dim(),
                        "h2": spaces.h2_dim(),
                        "representatives": reps,
                        "listed": table,
                    });
                    println!("{}", serde_json::to_string_pretty(&v)?);
                }
                Format::Text => {
                    println!(
                        "dim Z2 = {}, dim B2 = {}, dim H2 = {}",
                        spaces.z2.dim(),
                        spaces.b2.dim(),
                        spaces.h2_dim()
                    );
                    println!("representatives: {}", reps.join(", "));
                    if let Some(t) = table {
                        println!("listed generators: {}", t.join(", "));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Extend { id, cocycles } => {
            let e = corpus.algebra(id).with_context(|| format!("no algebra `{id}`"))?;
            let thetas = cocycles
                .iter()
                .map(|t| corpus.parse_cocycle(&e.algebra, t))
                .collect::<Result<Vec<_>, _>>()?;
            for (t, th) in cocycles.iter().zip(&thetas) {
                if !is_cocycle(&e.algebra, th) {
                    bail!("`{t}` is not a cocycle of {id}");
                }
            }
            let ts = check_ts(&e.algebra, &thetas);
            let ext = central_extension(&e.algebra, &thetas, &format!("{id}+ext"))?;
            let matches: Vec<&str> = corpus
                .algebras
                .iter()
                .filter(|a| a.algebra.constants() == ext.constants())
                .map(|a| a.record.id.as_str())
                .collect();
            println!("{}", ext.table_string(&corpus.vars));
            println!(
                "T_s: {} (radical dim {}, independent classes {})",
                if ts.holds { "holds" } else { "fails" },
                ts.radical_dim,
                ts.independent
            );
            println!("fingerprint (generic): {:?}", ext.fingerprint());
            if !matches.is_empty() {
                println!("table equals corpus record(s): {}", matches.join(", "));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cocycle_string(c: &Cocycle<RatFun>, corpus: &Corpus) -> String {
    let n = c.dim();
    let mut parts = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = &c.m[(i, j)];
            if v.is_zero() {
                continue;
            }
            let s = v.to_expr_string(&corpus.vars);
            parts.push(match s.as_str() {
                "1" => format!("D{}{}", i + 1, j + 1),
                "-1" => format!("-D{}{}", i + 1, j + 1),
                _ => format!("({s})*D{}{}", i + 1, j + 1),
            });
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}
