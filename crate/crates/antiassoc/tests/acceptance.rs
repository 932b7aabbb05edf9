//! End-to-end acceptance run over the bundled corpus. Prints one line per
//! criterion and exits nonzero when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use antiassoc::schema::AlgebraClass;
use antiassoc::suites::{self, TS_PROBES};
use antiassoc::{bundled, Corpus, Outcome, Record, SuiteConfig};
use antiassoc_core::cohomology::{aut_action, compute_b2, compute_h2, compute_z2, is_automorphism, Cocycle};
use antiassoc_core::degeneration::{der_monotonicity, DerStatus};
use antiassoc_core::linalg::{Matrix, Subspace};
use antiassoc_core::{Algebra, Cyclo12, Field, Rational};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn no_failures(records: &[Record]) -> Result<(), String> {
    let failed: Vec<&str> = records
        .iter()
        .filter(|r| r.outcome == Outcome::Fail)
        .map(|r| r.id.as_str())
        .collect();
    ensure(failed.is_empty(), || format!("failed records: {}", failed.join(", ")))
}

fn record<'a>(records: &'a [Record], id: &str) -> Result<&'a Record, String> {
    records
        .iter()
        .find(|r| r.id == id)
        .ok_or_else(|| format!("no record `{id}`"))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn identities(c: &Corpus) -> Check {
    let (records, took) = timed(|| suites::identities(c));
    no_failures(&records)?;
    let classified = c
        .algebras
        .iter()
        .filter(|e| e.record.class != AlgebraClass::Auxiliary)
        .count();
    ensure(classified == 53, || format!("{classified} classified algebras"))?;
    ensure(
        record(&records, "classification counts")?.outcome == Outcome::Pass,
        || "classification counts differ".into(),
    )?;
    ensure(took < Duration::from_secs(5), || format!("took {took:?}"))?;
    Ok(format!("{} algebras, {took:.2?}", c.algebras.len()))
}

fn cohomology(c: &Corpus) -> Check {
    let records = suites::cohomology(c);
    no_failures(&records)?;
    for (id, dim) in [("A3.1", 4), ("A4.1", 9), ("A4.8", 2), ("A4.13", 2)] {
        let a = &c.algebra(id).ok_or(format!("no {id}"))?.algebra;
        let h = compute_h2(a).h2_dim();
        ensure(h == dim, || format!("dim H2({id}) = {h}, expected {dim}"))?;
    }
    Ok(format!("{} tables", records.len()))
}

fn alpha(c: &Corpus) -> Check {
    let records = suites::alpha(c);
    no_failures(&records)?;
    let formulas: usize = c.alpha_sets.iter().map(|a| a.record.formulas.len()).sum();
    ensure(formulas >= 36, || format!("only {formulas} formulas"))?;
    Ok(format!("{formulas} formulas, {} reductions", c.reductions.len()))
}

fn extensions(c: &Corpus, cfg: &SuiteConfig) -> Check {
    let records = suites::extensions(c, cfg);
    no_failures(&records)?;
    let r = record(&records, "A3.1+<n1+n2>")?;
    ensure(r.detail.contains("reproduces AA4.2 verbatim"), || r.detail.clone())?;
    let ts: Vec<&Record> = records.iter().filter(|r| r.id.starts_with("T_s empty for")).collect();
    ensure(ts.len() == c.file.ts_empty.len(), || {
        format!("{} T_s records", ts.len())
    })?;
    for r in &ts {
        ensure(r.outcome == Outcome::Pass, || format!("{}: {}", r.id, r.detail))?;
    }
    let inconclusive = records.iter().filter(|r| r.outcome == Outcome::Inconclusive).count();
    Ok(format!(
        "{} extensions, {} T_s claims x {TS_PROBES} probes, {inconclusive} fingerprint pairs inconclusive",
        c.extensions.len(),
        ts.len()
    ))
}

fn degenerations(c: &Corpus, cfg: &SuiteConfig) -> Check {
    let (records, took) = timed(|| suites::degenerations(c, cfg));
    no_failures(&records)?;
    for claim in &c.claims {
        let r = record(&records, &claim.record.id)?;
        ensure(
            matches!(r.status.as_str(), "verified-exact" | "verified-numeric"),
            || format!("{}: {}", r.id, r.status),
        )?;
        let residuals: Vec<f64> = r.trace.iter().map(|&(_, res)| res).collect();
        ensure(residuals.windows(2).skip(2).all(|w| w[1] <= w[0]), || {
            format!("{}: residuals not monotone", r.id)
        })?;
        if r.status == "verified-numeric" {
            let last = residuals.last().copied().unwrap_or(f64::INFINITY);
            ensure(last < cfg.tolerance, || format!("{}: final residual {last:e}", r.id))?;
        }
    }
    ensure(took < Duration::from_secs(60), || format!("took {took:?}"))?;
    Ok(format!("{} claims, {took:.2?}", c.claims.len()))
}

fn dimensions(c: &Corpus, cfg: &SuiteConfig) -> Check {
    let records = suites::dimensions(c, cfg);
    no_failures(&records)?;
    for (id, dim) in [
        ("V3+2", 24),
        ("V4+1", 20),
        ("AA5.10", 20),
        ("AA5.14", 20),
        ("AA5.19", 20),
        ("AA5.21", 20),
        ("AA5.23", 20),
        ("AA5.26", 20),
        ("AA4.3", 12),
    ] {
        let r = record(&records, &format!("dim O({id})"))?;
        ensure(
            r.outcome == Outcome::Pass && r.detail.starts_with(&format!("computed {dim},")),
            || format!("{id}: {}", r.detail),
        )?;
    }
    for (n, max) in [(4, 12), (5, 24)] {
        let r = record(&records, &format!("components dim {n}"))?;
        ensure(
            r.outcome == Outcome::Pass && r.detail.contains(&format!("max dimension {max}")),
            || format!("dim {n}: {}", r.detail),
        )?;
    }
    // Rigid orbits computed directly.
    for (id, dim) in [("AA5.10", 20), ("AA4.3", 12)] {
        let o = c.algebra(id).ok_or(format!("no {id}"))?.algebra.orbit_dim();
        ensure(o == dim, || format!("n^2 - dim Der({id}) = {o}"))?;
    }
    Ok(format!("{} values", records.len()))
}

fn der_condition(c: &Corpus, cfg: &SuiteConfig) -> Check {
    let mut families = 0;
    for claim in &c.claims {
        let rep = der_monotonicity(&claim.claim, &c.vars, cfg.seed);
        let id = &claim.record.id;
        match rep.status {
            DerStatus::Strict => {}
            DerStatus::Skipped => ensure(!claim.claim.is_proper(), || format!("{id}: skipped"))?,
            s => return Err(format!("{id}: {s:?} {:?}", rep.samples)),
        }
        if rep.family {
            families += 1;
            ensure(rep.samples.len() >= 3, || {
                format!("{id}: {} samples", rep.samples.len())
            })?;
        } else if rep.status == DerStatus::Strict {
            ensure(rep.samples.iter().all(|(_, s, t)| s < t), || {
                format!("{id}: {:?}", rep.samples)
            })?;
        }
    }
    Ok(format!("{} claims, {families} with sampled indices", c.claims.len()))
}

fn q(rng: &mut StdRng) -> Rational {
    Rational::new(rng.gen_range(-20i64..=20).into(), rng.gen_range(1i64..=9).into())
}

fn cyclo(rng: &mut StdRng) -> Cyclo12 {
    Cyclo12::from_coeffs([q(rng), q(rng), q(rng), q(rng)])
}

fn field_axioms<F: Field>(rng: &mut StdRng, draw: fn(&mut StdRng) -> F) -> Result<(), String> {
    for _ in 0..500 {
        let (a, b, c) = (draw(rng), draw(rng), draw(rng));
        ensure(
            (a.clone() + b.clone()) * c.clone() == a.clone() * c.clone() + b.clone() * c.clone(),
            || "distributivity".into(),
        )?;
        ensure(
            (a.clone() * b.clone()) * c.clone() == a.clone() * (b.clone() * c.clone()),
            || "associativity".into(),
        )?;
        ensure(a.clone() * b.clone() == b.clone() * a.clone(), || {
            "commutativity".into()
        })?;
        if !a.is_zero() {
            ensure((a.clone() * a.inv().unwrap()).is_one(), || "inverse".into())?;
        }
        ensure((a.clone() - a).is_zero(), || "negation".into())?;
    }
    Ok(())
}

fn random_invertible(rng: &mut StdRng, n: usize) -> Matrix<Rational> {
    loop {
        let rows = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| Rational::from_integer(rng.gen_range(-2i64..=2).into()))
                    .collect()
            })
            .collect();
        let m = Matrix::from_rows(n, rows);
        if !m.det().is_zero() {
            return m;
        }
    }
}

fn rational_table(a: &Algebra<Cyclo12>) -> Option<Algebra<Rational>> {
    let n = a.dim();
    let mut out = Algebra::zero(&a.name, n);
    for (idx, v) in a.constants().iter().enumerate() {
        out.set(idx / (n * n), idx / n % n, idx % n, v.as_rational()?.clone());
    }
    Some(out)
}

fn properties(c: &Corpus) -> Check {
    let mut rng = StdRng::seed_from_u64(20240611);
    field_axioms(&mut rng, q).map_err(|e| format!("rational {e}"))?;
    field_axioms(&mut rng, cyclo).map_err(|e| format!("cyclotomic {e}"))?;

    for _ in 0..200 {
        let mut span = |k: usize| {
            let vs = (0..k).map(|_| {
                (0..6)
                    .map(|_| Rational::from_integer(rng.gen_range(-2i64..=2).into()))
                    .collect()
            });
            Subspace::span(6, vs.collect())
        };
        let (u, w) = (span(3), span(4));
        ensure(u.sum(&w).dim() + u.intersect(&w).dim() == u.dim() + w.dim(), || {
            "dimension formula".into()
        })?;
    }

    let tables: Vec<Algebra<Rational>> = c
        .algebras
        .iter()
        .filter_map(|e| e.algebra.as_constant())
        .filter_map(|a| rational_table(&a))
        .collect();
    for a in &tables {
        let n = a.dim();
        let fp = a.fingerprint();
        let p = random_invertible(&mut rng, n);
        ensure(a.change_basis(&p).unwrap().fingerprint() == fp, || {
            format!("{}: fingerprint", a.name)
        })?;

        let der = a.derivations();
        let mats: Vec<Matrix<Rational>> = der
            .basis()
            .iter()
            .map(|v| Matrix::from_rows(n, v.chunks(n).map(<[_]>::to_vec).collect()))
            .collect();
        for x in &mats {
            for y in &mats {
                let (xy, yx) = (x.mul(y), y.mul(x));
                let bracket: Vec<Rational> = (0..n * n)
                    .map(|k| xy[(k / n, k % n)].clone() - yx[(k / n, k % n)].clone())
                    .collect();
                ensure(der.contains(&bracket), || format!("{}: Der not closed", a.name))?;
            }
        }

        let ann = a.annihilator();
        let full = Subspace::full(n);
        ensure(
            ann.contains_space(&a.subspace_product(&ann, &full))
                && ann.contains_space(&a.subspace_product(&full, &ann)),
            || format!("{}: Ann not an ideal", a.name),
        )?;
    }

    let a31 = rational_table(&c.algebra("A3.1").ok_or("no A3.1")?.algebra.as_constant().unwrap()).unwrap();
    for _ in 0..20 {
        let nz = |rng: &mut StdRng| loop {
            let v = q(rng);
            if !v.is_zero() {
                break v;
            }
        };
        let (x, y) = (nz(&mut rng), nz(&mut rng));
        let (z, t, r) = (q(&mut rng), q(&mut rng), q(&mut rng));
        let zero = || Rational::from_integer(0.into());
        let phi = Matrix::from_rows(
            3,
            vec![
                vec![x.clone(), zero(), zero()],
                vec![z, x.clone() * x, r],
                vec![t, zero(), y],
            ],
        );
        ensure(is_automorphism(&a31, &phi), || "automorphism shape".into())?;
        let (z2, b2) = (compute_z2(&a31), compute_b2(&a31));
        for (space, name) in [(&z2, "Z2"), (&b2, "B2")] {
            for v in space.basis() {
                let moved = aut_action(&a31, &phi, &Cocycle::from_flat(3, v)).unwrap();
                ensure(space.contains(&moved.flat()), || format!("{name} not preserved"))?;
            }
        }
    }
    Ok(format!("{} tables, seed 20240611", tables.len()))
}

fn main() -> ExitCode {
    let corpus = bundled();
    let cfg = SuiteConfig::default();
    let criteria: [(&str, &dyn Fn() -> Check); 8] = [
        ("identities", &|| identities(&corpus)),
        ("second cohomology tables", &|| cohomology(&corpus)),
        ("alpha formulas", &|| alpha(&corpus)),
        ("extensions and T_s emptiness", &|| extensions(&corpus, &cfg)),
        ("degenerations", &|| degenerations(&corpus, &cfg)),
        ("orbit and component dimensions", &|| dimensions(&corpus, &cfg)),
        ("derivation dimension condition", &|| der_condition(&corpus, &cfg)),
        ("property checks", &|| properties(&corpus)),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail})", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
