//! Verification suites. Each suite turns corpus records into report records;
//! nothing here prints.

use std::collections::BTreeSet;

use antiassoc_core::algebra::Fingerprint;
use antiassoc_core::cohomology::{
    central_extension, check_ts, compute_h2, compute_z2, generic_radical_rank, is_cocycle, verify_alpha_formulas,
    verify_reduction,
};
use antiassoc_core::degeneration::{
    check_degeneration, claim_rng, der_monotonicity, family_closure_dim, DegenConfig, DerStatus, Mode, Status, Verdict,
};
use antiassoc_core::{Algebra, Cyclo12, RatFun, Rational, Vars};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{AlgebraEntry, ClaimEntry, Corpus};
use crate::schema::{AlgebraClass, OrbitDimKind, Provenance, ProvenanceKind};

/// Random cocycle subspaces drawn per `T_s`-emptiness claim.
pub const TS_PROBES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Cohomology,
    Extensions,
    Alpha,
    Degenerations,
    Dimensions,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Identities,
        Suite::Cohomology,
        Suite::Extensions,
        Suite::Alpha,
        Suite::Degenerations,
        Suite::Dimensions,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Cohomology => "cohomology",
            Suite::Extensions => "extensions",
            Suite::Alpha => "alpha",
            Suite::Degenerations => "degenerations",
            Suite::Dimensions => "dimensions",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    /// Listed but never fails a run.
    Inconclusive,
    /// Informational, e.g. a printed basis kept for comparison.
    Info,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Inconclusive => "INCONCLUSIVE",
            Outcome::Info => "INFO",
        }
    }

    fn of(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub suite: Suite,
    pub id: String,
    pub outcome: Outcome,
    pub status: String,
    pub location: String,
    pub provenance: &'static str,
    pub detail: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<(f64, f64)>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub precision_bound: bool,
}

impl Record {
    fn new(suite: Suite, id: impl Into<String>, ok: bool, status: &str, prov: &Provenance, detail: String) -> Self {
        Record {
            suite,
            id: id.into(),
            outcome: Outcome::of(ok),
            status: status.to_string(),
            location: prov.location.clone(),
            provenance: match prov.kind {
                ProvenanceKind::Quoted => "quoted",
                ProvenanceKind::Reconstructed => "reconstructed",
            },
            detail,
            trace: Vec::new(),
            precision_bound: false,
        }
    }
}

/// Parameters shared by every suite.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub precision: usize,
    pub tolerance: f64,
    pub ladder_ratio: Rational,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let d = DegenConfig::default();
        SuiteConfig {
            precision: d.precision,
            tolerance: d.tolerance,
            ladder_ratio: d.ratio,
            seed: 0,
        }
    }
}

impl SuiteConfig {
    pub fn degen(&self, mode: Mode) -> DegenConfig {
        DegenConfig {
            precision: self.precision,
            tolerance: self.tolerance,
            ratio: self.ladder_ratio.clone(),
            mode,
            seed: self.seed,
            ..DegenConfig::default()
        }
    }
}

pub fn run_suite(corpus: &Corpus, suite: Suite, cfg: &SuiteConfig) -> Vec<Record> {
    match suite {
        Suite::Identities => identities(corpus),
        Suite::Cohomology => cohomology(corpus),
        Suite::Extensions => extensions(corpus, cfg),
        Suite::Alpha => alpha(corpus),
        Suite::Degenerations => degenerations(corpus, cfg),
        Suite::Dimensions => dimensions(corpus, cfg),
    }
}

/// Antiassociativity, nilpotency and cocycle conditions for every record.
pub fn validate_corpus(corpus: &Corpus) -> Vec<Record> {
    let mut out = identities(corpus);
    out.extend(cohomology(corpus));
    out
}

fn first_violation(a: &Algebra<RatFun>, vars: &Vars) -> Option<String> {
    a.antiassociativity_violations().first().map(|v| {
        let (i, j, k) = (v.triple.0 + 1, v.triple.1 + 1, v.triple.2 + 1);
        format!(
            "(e{i}e{j})e{k} + e{i}(e{j}e{k}) = {}",
            antiassoc_core::algebra::vector_string(&v.residual, vars)
        )
    })
}

pub fn identities(corpus: &Corpus) -> Vec<Record> {
    let mut out: Vec<Record> = corpus
        .algebras
        .par_iter()
        .map(|e| {
            let a = &e.algebra;
            let chain = a.power_chain();
            let mut problems = Vec::new();
            if let Some(v) = first_violation(a, &corpus.vars) {
                problems.push(format!("antiassociativity fails: {v}"));
            }
            if !chain.is_nilpotent4() {
                problems.push(format!("A^4 has dimension {}", chain.a4.max(chain.a2a2)));
            }
            match e.record.class {
                AlgebraClass::TwoStep if chain.a3 != 0 => problems.push("declared 2-step but A^3 != 0".into()),
                AlgebraClass::NonTwoStep if chain.a3 == 0 => problems.push("declared non-2-step but A^3 = 0".into()),
                _ => {}
            }
            let detail = if problems.is_empty() {
                format!("dim A^2 = {}, A^3 = {}, A^4 = 0", chain.a2, chain.a3)
            } else {
                problems.join("; ")
            };
            Record::new(
                Suite::Identities,
                &e.record.id,
                problems.is_empty(),
                if problems.is_empty() {
                    "identities hold"
                } else {
                    "identity failure"
                },
                &e.record.provenance,
                detail,
            )
        })
        .collect();
    let count = |dim: usize, class: Option<AlgebraClass>| {
        corpus
            .algebras
            .iter()
            .filter(|e| e.record.dim == dim && e.record.class != AlgebraClass::Auxiliary)
            .filter(|e| class.is_none_or(|c| e.record.class == c))
            .count()
    };
    let counts = (
        count(3, None),
        count(4, Some(AlgebraClass::TwoStep)),
        count(4, Some(AlgebraClass::NonTwoStep)),
        count(5, None),
    );
    let families5 = corpus
        .algebras
        .iter()
        .filter(|e| e.record.dim == 5 && e.record.class == AlgebraClass::NonTwoStep && e.is_family())
        .count();
    let ok = counts == (5, 15, 3, 30) && families5 == 4;
    out.push(Record::new(
        Suite::Identities,
        "classification counts",
        ok,
        "counted",
        &Provenance {
            kind: ProvenanceKind::Quoted,
            location: "classification statements".into(),
        },
        format!(
            "{} three-dim, {} four-dim 2-step, {} four-dim non-2-step, {} five-dim ({} one-parameter families)",
            counts.0, counts.1, counts.2, counts.3, families5
        ),
    ));
    out
}

pub fn cohomology(corpus: &Corpus) -> Vec<Record> {
    corpus
        .h2
        .par_iter()
        .map(|h| {
            let a = &corpus.algebra(&h.record.algebra).expect("resolved").algebra;
            let spaces = compute_h2(a);
            let mut problems = Vec::new();
            if !spaces.z2.contains_space(&spaces.b2) {
                problems.push("B^2 is not contained in Z^2".to_string());
            }
            for (k, g) in h.generators.iter().enumerate() {
                if !is_cocycle(a, g) {
                    problems.push(format!(
                        "generator {} ({}) violates the cocycle condition",
                        k + 1,
                        h.record.generators[k]
                    ));
                }
            }
            if problems.is_empty() && !antiassoc_core::cohomology::independent_classes(a, &h.generators) {
                problems.push("generators are dependent modulo B^2".into());
            }
            if spaces.h2_dim() != h.generators.len() {
                problems.push(format!(
                    "dim H^2 = {} but {} generators are listed",
                    spaces.h2_dim(),
                    h.generators.len()
                ));
            }
            let ok = problems.is_empty();
            let detail = if ok {
                format!(
                    "dim Z^2 = {}, dim B^2 = {}, dim H^2 = {}",
                    spaces.z2.dim(),
                    spaces.b2.dim(),
                    spaces.h2_dim()
                )
            } else {
                problems.join("; ")
            };
            Record::new(
                Suite::Cohomology,
                format!("H2({})", h.record.algebra),
                ok,
                if ok { "matches" } else { "mismatch" },
                &h.record.provenance,
                detail,
            )
        })
        .collect()
}

fn first_mismatch(a: &Algebra<RatFun>, b: &Algebra<RatFun>, vars: &Vars) -> Option<String> {
    if a.dim() != b.dim() {
        return Some(format!("dimension {} vs {}", a.dim(), b.dim()));
    }
    let n = a.dim();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if a.get(i, j, k) != b.get(i, j, k) {
                    return Some(format!(
                        "c[{}][{}][{}]: {} vs {}",
                        i + 1,
                        j + 1,
                        k + 1,
                        a.get(i, j, k).to_expr_string(vars),
                        b.get(i, j, k).to_expr_string(vars)
                    ));
                }
            }
        }
    }
    None
}

/// A random member of a family (or the algebra itself) with exact constants.
fn random_member(alg: &Algebra<RatFun>, rng: &mut impl Rng) -> Algebra<Cyclo12> {
    loop {
        let point: Vec<(usize, Cyclo12)> = alg
            .params
            .iter()
            .map(|p| (p.var, Cyclo12::from_rational(random_rational_any(rng))))
            .collect();
        if let Ok(a) = alg.instantiate(&point) {
            return a;
        }
    }
}

fn random_rational_any(rng: &mut impl Rng) -> Rational {
    loop {
        let p: i64 = rng.gen_range(-9..=9);
        let q: i64 = rng.gen_range(1..=7);
        if p != 0 {
            return Rational::new(p.into(), q.into());
        }
    }
}

/// Prime modulus for the falsification probe. Rank modulo `P` never exceeds
/// the rank over the rationals, so a full-rank hit is a genuine witness.
const P: u64 = (1 << 61) - 1;

fn mul_p(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn inv_p(a: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, P - 2, 1);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_p(acc, base);
        }
        base = mul_p(base, base);
        e >>= 1;
    }
    acc
}

fn int_p(n: &num_bigint::BigInt) -> u64 {
    use num_traits::ToPrimitive;
    let r = n % num_bigint::BigInt::from(P);
    let r = r.to_i128().expect("reduced");
    r.rem_euclid(P as i128) as u64
}

fn rational_p(c: &Cyclo12) -> Option<u64> {
    let q = c.as_rational()?;
    Some(mul_p(int_p(q.numer()), inv_p(int_p(q.denom()))))
}

fn rank_p(mut rows: Vec<Vec<u64>>, cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = inv_p(rows[rank][c]);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for row in tail {
            let f = mul_p(row[c], inv);
            if f == 0 {
                continue;
            }
            for (x, &p) in row[c..cols].iter_mut().zip(&pivot[c..cols]) {
                *x = (*x + P - mul_p(f, p)) % P;
            }
        }
        rank += 1;
    }
    rank
}

/// Searches random cocycle subspaces for one whose common annihilator meets
/// `Ann(A)` trivially. Returns the number of probes, or the first witness.
///
/// A cocycle `θ` kills `b ∈ Ann(A)` on both sides iff `θ(b, eⱼ) = θ(eⱼ, b) = 0`
/// for all `j`. That condition is linear in `θ`, so it is tabulated once per
/// basis cocycle of `Z²` and combined per probe.
fn probe_ts(alg: &Algebra<RatFun>, h2_dim: usize, probes: usize, rng: &mut impl Rng) -> Result<usize, String> {
    let n = alg.dim();
    let batch = 500;
    let mut done = 0;
    while done < probes {
        let a = random_member(alg, rng);
        let ann: Vec<Vec<Cyclo12>> = a.annihilator().basis().to_vec();
        let z2: Vec<Vec<Cyclo12>> = compute_z2(&a).basis().to_vec();
        if ann.is_empty() || z2.is_empty() {
            return Ok(probes);
        }
        let blocks = z2
            .iter()
            .map(|z| {
                let mut rows = Vec::with_capacity(2 * n);
                for j in 0..n {
                    for side in [false, true] {
                        let row = ann
                            .iter()
                            .map(|b| {
                                let v = (0..n).fold(Cyclo12::zero(), |acc, i| {
                                    let k = if side { j * n + i } else { i * n + j };
                                    &acc + &(&b[i] * &z[k])
                                });
                                rational_p(&v)
                            })
                            .collect::<Option<Vec<u64>>>()?;
                        rows.push(row);
                    }
                }
                Some(rows)
            })
            .collect::<Option<Vec<Vec<Vec<u64>>>>>()
            .ok_or_else(|| "probe needs a rational sample".to_string())?;
        for _ in 0..batch.min(probes - done) {
            done += 1;
            let s = rng.gen_range(1..=h2_dim.max(1));
            let mut m: Vec<Vec<u64>> = Vec::with_capacity(s * 2 * n);
            for _ in 0..s {
                let mut acc = vec![vec![0u64; ann.len()]; 2 * n];
                for block in &blocks {
                    let c: i64 = rng.gen_range(-5..=5);
                    if c == 0 {
                        continue;
                    }
                    let c = c.rem_euclid(P as i64) as u64;
                    for (ar, br) in acc.iter_mut().zip(block) {
                        for (x, y) in ar.iter_mut().zip(br) {
                            *x = (*x + mul_p(c, *y)) % P;
                        }
                    }
                }
                m.extend(acc);
            }
            if rank_p(m, ann.len()) == ann.len() {
                return Err(format!("probe {done}: {s} random cocycles with trivial common radical"));
            }
        }
    }
    Ok(done)
}

fn fingerprints(e: &AlgebraEntry, rng: &mut impl Rng) -> BTreeSet<Fingerprint> {
    if !e.is_family() {
        return BTreeSet::from([e.algebra.as_constant().expect("constant algebra").fingerprint()]);
    }
    (0..5).map(|_| random_member(&e.algebra, rng).fingerprint()).collect()
}

pub fn extensions(corpus: &Corpus, cfg: &SuiteConfig) -> Vec<Record> {
    let mut out: Vec<Record> = corpus
        .extensions
        .par_iter()
        .map(|x| {
            let result = corpus.algebra(&x.record.result).expect("resolved");
            let ts = check_ts(&x.base, &x.cocycles);
            let mut problems = Vec::new();
            if !ts.holds {
                problems.push(format!(
                    "T_s fails (radical dim {}, independent {})",
                    ts.radical_dim, ts.independent
                ));
            }
            match central_extension(&x.base, &x.cocycles, &x.record.result) {
                Ok(ext) => {
                    if let Some(m) = first_mismatch(&ext, &result.algebra, &corpus.vars) {
                        problems.push(format!("table differs from {}: {m}", x.record.result));
                    }
                }
                Err(e) => problems.push(e.to_string()),
            }
            let ok = problems.is_empty();
            let detail = if ok {
                format!("reproduces {} verbatim; T_s holds", x.record.result)
            } else {
                problems.join("; ")
            };
            Record::new(
                Suite::Extensions,
                &x.record.id,
                ok,
                if ok { "reproduced" } else { "mismatch" },
                &x.record.provenance,
                detail,
            )
        })
        .collect();

    out.par_extend(corpus.file.ts_empty.par_iter().map(|rec| {
        let a = &corpus.algebra(&rec.algebra).expect("resolved").algebra;
        let h = corpus.h2_table(&rec.algebra).expect("resolved");
        let mut tmp = corpus.vars.clone();
        let alphas: Vec<usize> = (0..h.generators.len()).map(|k| tmp.intern(&format!("__alpha{k}"))).collect();
        let (rank, ann) = generic_radical_rank(a, &h.generators, &alphas);
        let common = check_ts(a, &h.generators).radical_dim;
        let mut rng = claim_rng(cfg.seed, &rec.algebra);
        let probe = probe_ts(a, h.generators.len(), TS_PROBES, &mut rng);
        let ok = rank < ann && common > 0 && probe.is_ok();
        let detail = match &probe {
            Ok(k) => format!(
                "generic rank {rank} < dim Ann {ann}; all of H^2 kills a {common}-dim part of Ann; {k} random subspaces degenerate"
            ),
            Err(w) => format!("generic rank {rank}, dim Ann {ann}, common radical {common}; {w}"),
        };
        Record::new(
            Suite::Extensions,
            format!("T_s empty for {}", rec.algebra),
            ok,
            if ok { "no annihilator-free extension" } else { "counterexample" },
            &rec.provenance,
            detail,
        )
    }));

    for e in &corpus.algebras {
        let Some(s) = &e.record.split_of else { continue };
        let base = corpus.algebra(&s.base).expect("resolved");
        let sum = base.algebra.direct_sum_trivial(s.extra, &e.record.id);
        let m = first_mismatch(&sum, &e.algebra, &corpus.vars);
        out.push(Record::new(
            Suite::Extensions,
            format!("{} split", e.record.id),
            m.is_none(),
            if m.is_none() { "reproduced" } else { "mismatch" },
            &e.record.provenance,
            m.unwrap_or_else(|| format!("equals {} plus {} trivial dimension(s)", s.base, s.extra)),
        ));
    }

    // Every non-2-step classified algebra of dimension ≥ 4 is produced exactly once.
    let mut uncovered = Vec::new();
    for e in &corpus.algebras {
        if e.record.class != AlgebraClass::NonTwoStep || e.record.dim < 4 {
            continue;
        }
        let hits = corpus
            .extensions
            .iter()
            .filter(|x| x.record.result == e.record.id)
            .count();
        let split = e.record.split_of.is_some();
        if hits + usize::from(split) != 1 {
            uncovered.push(format!("{} ({} specs)", e.record.id, hits));
        }
    }
    out.push(Record::new(
        Suite::Extensions,
        "coverage",
        uncovered.is_empty(),
        "counted",
        &Provenance {
            kind: ProvenanceKind::Quoted,
            location: "classification tables".into(),
        },
        if uncovered.is_empty() {
            "every non-2-step algebra has exactly one extension record or split tag".into()
        } else {
            format!("not covered exactly once: {}", uncovered.join(", "))
        },
    ));

    for dim in [4usize, 5] {
        let group: Vec<&AlgebraEntry> = corpus
            .algebras
            .iter()
            .filter(|e| e.record.dim == dim && e.record.class == AlgebraClass::NonTwoStep)
            .collect();
        let prints: Vec<BTreeSet<Fingerprint>> = group
            .par_iter()
            .map(|e| fingerprints(e, &mut claim_rng(cfg.seed, &e.record.id)))
            .collect();
        let mut separated = 0;
        for i in 0..group.len() {
            for j in i + 1..group.len() {
                if prints[i].is_disjoint(&prints[j]) {
                    separated += 1;
                    continue;
                }
                let mut r = Record::new(
                    Suite::Extensions,
                    format!("fingerprint {} ~ {}", group[i].record.id, group[j].record.id),
                    true,
                    "inconclusive",
                    &group[j].record.provenance,
                    "invariants do not separate this pair".into(),
                );
                r.outcome = Outcome::Inconclusive;
                out.push(r);
            }
        }
        let pairs = group.len() * group.len().saturating_sub(1) / 2;
        out.push(Record::new(
            Suite::Extensions,
            format!("fingerprints dim {dim}"),
            true,
            "separation",
            &Provenance {
                kind: ProvenanceKind::Quoted,
                location: "classification tables".into(),
            },
            format!("{separated} of {pairs} pairs separated by invariants"),
        ));
    }
    out
}

pub fn alpha(corpus: &Corpus) -> Vec<Record> {
    let mut out: Vec<Record> = corpus
        .alpha_sets
        .par_iter()
        .map(|a| {
            let rep = verify_alpha_formulas(&a.set);
            let ok = rep.passed();
            let detail = if ok {
                format!("{} identities exact; phi is an automorphism", rep.checks.len())
            } else if let Some(e) = &rep.error {
                e.to_string()
            } else {
                let bad: Vec<String> = rep
                    .checks
                    .iter()
                    .filter(|c| !c.ok)
                    .map(|c| {
                        format!(
                            "alpha*{}: computed {}",
                            c.index + 1,
                            c.computed.to_expr_string(&corpus.vars)
                        )
                    })
                    .collect();
                bad.join("; ")
            };
            Record::new(
                Suite::Alpha,
                &a.record.id,
                ok,
                if ok { "exact" } else { "mismatch" },
                &a.record.provenance,
                detail,
            )
        })
        .collect();
    out.par_extend(corpus.reductions.par_iter().map(|r| {
        let set = &corpus
            .alpha_sets
            .iter()
            .find(|a| a.record.id == r.record.alpha_set)
            .expect("resolved")
            .set;
        let res = verify_reduction(set, &r.reduction);
        let ok = matches!(res, Ok(true));
        let detail = match res {
            Ok(true) => "moved class spans the stated representative".to_string(),
            Ok(false) => "moved class differs from the stated representative".to_string(),
            Err(e) => e.to_string(),
        };
        Record::new(
            Suite::Alpha,
            format!("reduction {}", r.record.id),
            ok,
            if ok { "exact" } else { "mismatch" },
            &r.record.provenance,
            detail,
        )
    }));
    out
}

fn fmt_verdict(v: &Verdict) -> String {
    match v.status {
        Status::VerifiedExact => format!("exact with t = s^{}", v.exponent.unwrap_or(1)),
        Status::VerifiedNumeric => format!(
            "numeric along {}, final residual {:.1e}",
            v.ray.unwrap_or("?"),
            v.trace.last().map_or(f64::NAN, |x| x.1)
        ),
        _ => v.notes.join("; "),
    }
}

fn degeneration_record(corpus: &Corpus, c: &ClaimEntry, cfg: &SuiteConfig) -> Record {
    let verdict = check_degeneration(&c.claim, &corpus.vars, &cfg.degen(Mode::Auto));
    let mut parts = vec![fmt_verdict(&verdict)];
    let mut ok = verdict.status.is_verified();
    let mut trace = verdict.trace.clone();
    let mut precision_bound = verdict.precision_bound;
    if verdict.status == Status::VerifiedExact {
        let num = check_degeneration(&c.claim, &corpus.vars, &cfg.degen(Mode::Numeric));
        if num.status.is_verified() {
            parts.push(format!(
                "numeric cross-check final residual {:.1e}",
                num.trace.last().map_or(f64::NAN, |x| x.1)
            ));
        } else {
            ok = false;
            parts.push(format!("numeric cross-check failed: {}", num.notes.join("; ")));
        }
        trace = num.trace;
        precision_bound |= num.precision_bound;
    }
    let der = der_monotonicity(&c.claim, &corpus.vars, cfg.seed);
    let rel = if der.moving { "<=" } else { "<" };
    let dims: Vec<String> = der
        .samples
        .iter()
        .map(|(l, s, t)| format!("{l}: {s} {rel} {t}"))
        .collect();
    match der.status {
        DerStatus::Strict if der.family && der.samples.len() < 3 => {
            ok = false;
            parts.push(format!("Der checked at only {} samples", der.samples.len()));
        }
        DerStatus::Strict if der.moving => parts.push(format!("Der (family source) {}", dims.join(", "))),
        DerStatus::Strict => parts.push(format!("Der {}", dims.join(", "))),
        DerStatus::Skipped => parts.push("Der test skipped (not proper)".into()),
        DerStatus::Violated => {
            ok = false;
            parts.push(format!("Der not increasing: {}", dims.join(", ")));
        }
        DerStatus::Unavailable => {
            ok = false;
            parts.push("Der test had no exact sample".into());
        }
    }
    let mut r = Record::new(
        Suite::Degenerations,
        &c.record.id,
        ok,
        verdict.status.as_str(),
        &c.record.provenance,
        format!("[{}] {}", c.record.table.as_str(), parts.join("; ")),
    );
    r.trace = trace;
    r.precision_bound = precision_bound;
    r
}

pub fn degenerations(corpus: &Corpus, cfg: &SuiteConfig) -> Vec<Record> {
    let mut out: Vec<Record> = corpus
        .claims
        .par_iter()
        .map(|c| degeneration_record(corpus, c, cfg))
        .collect();
    for c in &corpus.claims {
        let Some(printed) = &c.as_printed else { continue };
        let mut claim = c.claim.clone();
        claim.basis = printed.clone();
        let v = check_degeneration(&claim, &corpus.vars, &cfg.degen(Mode::Auto));
        let mut r = Record::new(
            Suite::Degenerations,
            format!("{} (as printed)", c.record.id),
            true,
            v.status.as_str(),
            &c.record.provenance,
            format!("printed basis, kept for comparison: {}", fmt_verdict(&v)),
        );
        r.outcome = Outcome::Info;
        out.push(r);
    }
    out
}

/// Orbit dimension of a constant algebra, or closure dimension of a family.
fn closure_dim(e: &AlgebraEntry, seed: u64) -> (usize, String) {
    if e.is_family() {
        let fd = family_closure_dim(&e.algebra, &mut claim_rng(seed, &e.record.id), 3);
        (
            fd.max,
            format!(
                "family closure ranks {:?}, generic member orbit dims {:?}",
                fd.ranks, fd.member_orbit_dims
            ),
        )
    } else {
        let a = e.algebra.as_constant().expect("constant algebra");
        let d = a.orbit_dim();
        (
            d,
            format!("n^2 - dim Der = {} - {}", a.dim() * a.dim(), a.derivations().dim()),
        )
    }
}

pub fn dimensions(corpus: &Corpus, cfg: &SuiteConfig) -> Vec<Record> {
    let mut out: Vec<Record> = corpus
        .file
        .orbit_dims
        .par_iter()
        .map(|rec| {
            let e = corpus.algebra(&rec.algebra).expect("resolved");
            let (d, how) = closure_dim(e, cfg.seed);
            let kind = match rec.kind {
                OrbitDimKind::Orbit => "orbit",
                OrbitDimKind::FamilyClosure => "family closure",
            };
            Record::new(
                Suite::Dimensions,
                format!("dim O({})", rec.algebra),
                d == rec.value,
                kind,
                &rec.provenance,
                format!("computed {d}, stated {}; {how}", rec.value),
            )
        })
        .collect();
    for rec in &corpus.file.components {
        let dims: Vec<(String, usize)> = rec
            .sources
            .par_iter()
            .map(|s| (s.clone(), closure_dim(corpus.algebra(s).expect("resolved"), cfg.seed).0))
            .collect();
        let max = dims.iter().map(|x| x.1).max().unwrap_or(0);
        let list: Vec<String> = dims.iter().map(|(s, d)| format!("{s}: {d}")).collect();
        out.push(Record::new(
            Suite::Dimensions,
            format!("components dim {}", rec.dim),
            max == rec.variety_dim,
            "component dimensions",
            &rec.provenance,
            format!(
                "{} components, max dimension {max} (stated {}); {}",
                rec.sources.len(),
                rec.variety_dim,
                list.join(", ")
            ),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use antiassoc_core::linalg::Matrix;
    use rand::SeedableRng;

    #[test]
    fn modular_rank_matches_exact_rank() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..300 {
            let (r, c) = (rng.gen_range(1..7), rng.gen_range(1..7));
            let ints: Vec<Vec<i64>> = (0..r)
                .map(|_| (0..c).map(|_| rng.gen_range(-2..=2)).collect())
                .collect();
            let exact = Matrix::from_rows(
                c,
                ints.iter()
                    .map(|row| row.iter().map(|&x| Rational::from_integer(x.into())).collect())
                    .collect(),
            );
            let modular = ints
                .iter()
                .map(|row| row.iter().map(|&x| int_p(&x.into())).collect())
                .collect();
            assert_eq!(rank_p(modular, c), exact.rank());
        }
    }

    #[test]
    fn modular_inverse() {
        for a in [1u64, 2, 3, 12345, P - 1] {
            assert_eq!(mul_p(a, inv_p(a)), 1);
        }
        assert_eq!(int_p(&(-1).into()), P - 1);
    }
}
