//! Running suites and rendering reports.

use std::fmt::Write as _;

use serde::Serialize;

use crate::corpus::Corpus;
use crate::schema::FORMAT_VERSION;
use crate::suites::{run_suite, Outcome, Record, Suite, SuiteConfig};

/// Version of the JSON report layout. Bumped together with the corpus format.
pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub suites: Vec<Suite>,
    pub suite: SuiteConfig,
    /// Worker threads; `0` lets the pool decide.
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            suites: Suite::ALL.to_vec(),
            suite: SuiteConfig::default(),
            jobs: 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
    pub info: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub suites: Vec<Suite>,
    pub precision: usize,
    pub tolerance: f64,
    pub ladder_ratio: String,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub report_version: u32,
    pub corpus_version: u32,
    pub config: ConfigEcho,
    pub summary: Summary,
    pub records: Vec<Record>,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per record, then a summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let _ = write!(
                out,
                "{:<12} {:<13} {:<36} {:<18} {}",
                r.outcome.label(),
                r.suite.as_str(),
                r.id,
                r.status,
                r.detail
            );
            if r.precision_bound {
                out.push_str(" (precision-bound)");
            }
            let _ = writeln!(out, " [{}; {}]", r.location, r.provenance);
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "summary: {} pass, {} fail, {} inconclusive, {} info",
            s.pass, s.fail, s.inconclusive, s.info
        );
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
        }
    }
}

pub fn summarize(records: &[Record]) -> Summary {
    let mut s = Summary::default();
    for r in records {
        match r.outcome {
            Outcome::Pass => s.pass += 1,
            Outcome::Fail => s.fail += 1,
            Outcome::Inconclusive => s.inconclusive += 1,
            Outcome::Info => s.info += 1,
        }
    }
    s
}

/// Runs the selected suites. Records come back sorted by suite, then id, so
/// the output does not depend on scheduling.
pub fn run(corpus: &Corpus, cfg: &RunConfig) -> Report {
    let mut suites = cfg.suites.clone();
    suites.sort();
    suites.dedup();
    let work = || {
        let mut records: Vec<Record> = suites.iter().flat_map(|s| run_suite(corpus, *s, &cfg.suite)).collect();
        records.sort_by(|a, b| (a.suite, &a.id).cmp(&(b.suite, &b.id)));
        records
    };
    let records = match rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    };
    let q = &cfg.suite.ladder_ratio;
    Report {
        report_version: REPORT_VERSION,
        corpus_version: FORMAT_VERSION,
        config: ConfigEcho {
            suites,
            precision: cfg.suite.precision,
            tolerance: cfg.suite.tolerance,
            ladder_ratio: format!("{}/{}", q.numer(), q.denom()),
            seed: cfg.suite.seed,
        },
        summary: summarize(&records),
        records,
    }
}
