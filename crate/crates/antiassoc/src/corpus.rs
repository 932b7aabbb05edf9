//! Loading the corpus file and resolving it into core types.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use antiassoc_core::cohomology::{delta_symbols, AlphaFormulaSet, Cocycle, Reduction};
use antiassoc_core::degeneration::{DegenerationClaim, ParamBasis};
use antiassoc_core::linalg::Matrix;
use antiassoc_core::scalars::{eval_cyclo, eval_exact_ratfun, eval_rational, parse_expr, ExactEnv};
use antiassoc_core::{Algebra, Cyclo12, Expr, Param, RatFun, Rational, Vars};

use crate::schema::*;

/// The corpus shipped with the crate.
pub const BUNDLED: &str = include_str!("../data/corpus.json");

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unsupported format version {0}, expected {FORMAT_VERSION}")]
    Version(u32),
    #[error("{record}: duplicate id")]
    Duplicate { record: String },
    #[error("{record}: dangling id `{id}`")]
    Dangling { record: String, id: String },
    #[error("{record}: cannot parse `{text}`: {message}")]
    Parse {
        record: String,
        text: String,
        message: String,
    },
    #[error("{record}: {message}")]
    Invalid { record: String, message: String },
}

type Result<T> = std::result::Result<T, CorpusError>;

#[derive(Clone, Debug)]
pub struct AlgebraEntry {
    pub record: AlgebraRecord,
    pub algebra: Algebra<RatFun>,
}

impl AlgebraEntry {
    pub fn is_family(&self) -> bool {
        !self.algebra.params.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct H2Entry {
    pub record: H2Record,
    pub generators: Vec<Cocycle<RatFun>>,
}

#[derive(Clone, Debug)]
pub struct ExtensionEntry {
    pub record: ExtensionRecord,
    /// Base algebra with `base_params` substituted.
    pub base: Algebra<RatFun>,
    pub cocycles: Vec<Cocycle<RatFun>>,
}

#[derive(Clone, Debug)]
pub struct AlphaEntry {
    pub record: AlphaSetRecord,
    pub set: AlphaFormulaSet,
    pub phi_symbols: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct ReductionEntry {
    pub record: ReductionRecord,
    pub reduction: Reduction,
}

#[derive(Clone, Debug)]
pub struct ClaimEntry {
    pub record: DegenerationRecord,
    pub claim: DegenerationClaim,
    pub as_printed: Option<ParamBasis>,
}

/// A loaded, cross-referenced corpus. Immutable once built.
#[derive(Clone, Debug)]
pub struct Corpus {
    pub file: CorpusFile,
    pub vars: Vars,
    pub algebras: Vec<AlgebraEntry>,
    index: BTreeMap<String, usize>,
    pub h2: Vec<H2Entry>,
    pub extensions: Vec<ExtensionEntry>,
    pub alpha_sets: Vec<AlphaEntry>,
    pub reductions: Vec<ReductionEntry>,
    pub claims: Vec<ClaimEntry>,
}

impl Corpus {
    pub fn algebra(&self, id: &str) -> Option<&AlgebraEntry> {
        self.index.get(id).map(|&i| &self.algebras[i])
    }

    pub fn claim(&self, id: &str) -> Option<&ClaimEntry> {
        self.claims.iter().find(|c| c.record.id == id)
    }

    pub fn h2_table(&self, id: &str) -> Option<&H2Entry> {
        self.h2.iter().find(|h| h.record.algebra == id)
    }

    /// Parses a linear form in `Dij` (and the parameters of `algebra`).
    pub fn parse_cocycle(&self, algebra: &Algebra<RatFun>, text: &str) -> Result<Cocycle<RatFun>> {
        let n = algebra.dim();
        let coeffs = linear_form("cocycle", text, &delta_symbols(n), &param_env(algebra), &self.vars)?;
        Ok(Cocycle::from_flat(n, &coeffs))
    }
}

pub fn bundled() -> Corpus {
    parse_corpus(BUNDLED).expect("bundled corpus is valid")
}

pub fn load_corpus(path: &Path) -> Result<Corpus> {
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_corpus(&text)
}

pub fn parse_corpus(text: &str) -> Result<Corpus> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: CorpusFile = serde_path_to_error::deserialize(de).map_err(|e| CorpusError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    resolve(file)
}

/// Pretty JSON for a corpus file; loading the output gives back the same file.
pub fn to_json(file: &CorpusFile) -> String {
    serde_json::to_string_pretty(file).expect("corpus serializes")
}

fn parse(record: &str, text: &str, symbols: &[&str]) -> Result<Expr> {
    parse_expr(text, symbols).map_err(|e| CorpusError::Parse {
        record: record.to_string(),
        text: text.to_string(),
        message: e.to_string(),
    })
}

fn invalid(record: &str, message: impl Into<String>) -> CorpusError {
    CorpusError::Invalid {
        record: record.to_string(),
        message: message.into(),
    }
}

fn closed_value(record: &str, text: &str) -> Result<Cyclo12> {
    let e = parse(record, text, &[])?;
    eval_cyclo(&e, &BTreeMap::new()).map_err(|e| invalid(record, format!("`{text}`: {e}")))
}

/// Coefficients of a linear form in `basis` with the other symbols bound in
/// `env`. Fails when the form is not linear or not rational.
fn linear_form(record: &str, text: &str, basis: &[String], env: &ExactEnv, vars: &Vars) -> Result<Vec<RatFun>> {
    let mut symbols: Vec<&str> = basis.iter().map(String::as_str).collect();
    symbols.extend(env.bindings.keys().map(String::as_str));
    let e = parse(record, text, &symbols)?;
    let mut tmp = vars.clone();
    let mut env = env.clone();
    let slots: Vec<usize> = basis
        .iter()
        .map(|b| {
            let v = tmp.intern(&format!("__lin_{b}"));
            env.bind(b, RatFun::var(v));
            v
        })
        .collect();
    let f = eval_exact_ratfun(&e, &env).map_err(|err| invalid(record, format!("`{text}`: {err}")))?;
    let coeffs: Vec<RatFun> = slots.iter().map(|&v| f.derivative(v)).collect();
    let mut rest = f.clone();
    for (c, &v) in coeffs.iter().zip(&slots) {
        rest = &rest - &(c * &RatFun::var(v));
        if slots.iter().any(|&w| !c.derivative(w).is_zero()) {
            return Err(invalid(record, format!("`{text}` is not linear")));
        }
    }
    if !rest.is_zero() {
        return Err(invalid(record, format!("`{text}` has a constant term")));
    }
    Ok(coeffs)
}

fn param_env(alg: &Algebra<RatFun>) -> ExactEnv {
    let mut env = ExactEnv::new();
    for p in &alg.params {
        env.bind(&p.name, RatFun::var(p.var));
    }
    env
}

fn basis_names(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("e{k}")).collect()
}

/// Identifiers in `text` that are not reserved words.
fn identifiers(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars().chain(std::iter::once(' ')) {
        if ch.is_ascii_alphanumeric() || ch == '_' {
            cur.push(ch);
        } else if !cur.is_empty() {
            let first = cur.chars().next().unwrap_or('0');
            if !first.is_ascii_digit() && !matches!(cur.as_str(), "i" | "w" | "sqrt") && !out.contains(&cur) {
                out.push(cur.clone());
            }
            cur.clear();
        }
    }
    out
}

struct Resolver {
    vars: Vars,
    algebras: Vec<AlgebraEntry>,
    index: BTreeMap<String, usize>,
}

impl Resolver {
    fn get(&self, record: &str, id: &str) -> Result<&AlgebraEntry> {
        self.index
            .get(id)
            .map(|&i| &self.algebras[i])
            .ok_or_else(|| CorpusError::Dangling {
                record: record.to_string(),
                id: id.to_string(),
            })
    }

    fn cocycles(&self, record: &str, texts: &[String], n: usize, env: &ExactEnv) -> Result<Vec<Cocycle<RatFun>>> {
        let deltas = delta_symbols(n);
        texts
            .iter()
            .map(|t| {
                Ok(Cocycle::from_flat(
                    n,
                    &linear_form(record, t, &deltas, env, &self.vars)?,
                ))
            })
            .collect()
    }
}

fn resolve(file: CorpusFile) -> Result<Corpus> {
    if file.format_version != FORMAT_VERSION {
        return Err(CorpusError::Version(file.format_version));
    }
    let mut r = Resolver {
        vars: Vars::new(),
        algebras: Vec::new(),
        index: BTreeMap::new(),
    };
    for (pos, rec) in file.algebras.iter().enumerate() {
        let label = format!("algebras[{pos}] ({})", rec.id);
        if r.index.insert(rec.id.clone(), pos).is_some() {
            return Err(CorpusError::Duplicate { record: label });
        }
        let mut alg = Algebra::<RatFun>::zero(&rec.id, rec.dim);
        for p in &rec.params {
            let excluded = p
                .excluded
                .iter()
                .map(|x| closed_value(&label, x))
                .collect::<Result<Vec<_>>>()?;
            alg.params.push(Param {
                name: p.name.clone(),
                var: r.vars.intern(&p.name),
                excluded,
            });
        }
        let env = param_env(&alg);
        let names = basis_names(rec.dim);
        let mut seen = BTreeSet::new();
        for (i, j, text) in &rec.products {
            if !(1..=rec.dim).contains(i) || !(1..=rec.dim).contains(j) {
                return Err(invalid(&label, format!("product index ({i}, {j}) out of range")));
            }
            if !seen.insert((*i, *j)) {
                return Err(invalid(&label, format!("product e{i}e{j} listed twice")));
            }
            let coeffs = linear_form(&label, text, &names, &env, &r.vars)?;
            for (k, c) in coeffs.into_iter().enumerate() {
                alg.set(i - 1, j - 1, k, c);
            }
        }
        r.algebras.push(AlgebraEntry {
            record: rec.clone(),
            algebra: alg,
        });
    }
    for (pos, rec) in file.algebras.iter().enumerate() {
        if let Some(s) = &rec.split_of {
            let label = format!("algebras[{pos}] ({})", rec.id);
            let base = r.get(&label, &s.base)?;
            if base.record.dim + s.extra != rec.dim {
                return Err(invalid(&label, "split dimension does not add up"));
            }
        }
    }

    let mut h2 = Vec::new();
    for (pos, rec) in file.h2_tables.iter().enumerate() {
        let label = format!("h2_tables[{pos}] ({})", rec.algebra);
        let a = r.get(&label, &rec.algebra)?;
        let generators = r.cocycles(&label, &rec.generators, a.record.dim, &param_env(&a.algebra))?;
        h2.push(H2Entry {
            record: rec.clone(),
            generators,
        });
    }
    for (pos, rec) in file.ts_empty.iter().enumerate() {
        let label = format!("ts_empty[{pos}] ({})", rec.algebra);
        r.get(&label, &rec.algebra)?;
        if !h2.iter().any(|h| h.record.algebra == rec.algebra) {
            return Err(invalid(&label, "no H² table for this algebra"));
        }
    }

    let mut extensions = Vec::new();
    let mut ext_ids = BTreeSet::new();
    for (pos, rec) in file.extensions.iter().enumerate() {
        let label = format!("extensions[{pos}] ({})", rec.id);
        if !ext_ids.insert(rec.id.clone()) {
            return Err(CorpusError::Duplicate { record: label });
        }
        let base = r.get(&label, &rec.base)?.algebra.clone();
        let result = r.get(&label, &rec.result)?;
        if result.record.dim != base.dim() + rec.cocycles.len() {
            return Err(invalid(&label, "result dimension does not match base plus cocycles"));
        }
        let mut subs = BTreeMap::new();
        for (name, value) in &rec.base_params {
            let p = base
                .params
                .iter()
                .find(|p| &p.name == name)
                .ok_or_else(|| invalid(&label, format!("`{name}` is not a parameter of {}", rec.base)))?;
            subs.insert(p.var, RatFun::constant(closed_value(&label, value)?));
        }
        let mut inst = base.clone();
        if !subs.is_empty() {
            let n = base.dim();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let v = base
                            .get(i, j, k)
                            .substitute(&subs)
                            .ok_or_else(|| invalid(&label, "parameter value is a pole"))?;
                        inst.set(i, j, k, v);
                    }
                }
            }
            inst.params.retain(|p| !subs.contains_key(&p.var));
        }
        let mut env = param_env(&inst);
        for p in &result.algebra.params {
            env.bind(&p.name, RatFun::var(p.var));
        }
        let cocycles = r.cocycles(&label, &rec.cocycles, base.dim(), &env)?;
        extensions.push(ExtensionEntry {
            record: rec.clone(),
            base: inst,
            cocycles,
        });
    }

    let mut alpha_sets: Vec<AlphaEntry> = Vec::new();
    for (pos, rec) in file.alpha_formula_sets.iter().enumerate() {
        let label = format!("alpha_formula_sets[{pos}] ({})", rec.id);
        if alpha_sets.iter().any(|a| a.record.id == rec.id) {
            return Err(CorpusError::Duplicate { record: label });
        }
        let a = r.get(&label, &rec.algebra)?.algebra.clone();
        let n = a.dim();
        let env = param_env(&a);
        let generators = r.cocycles(&label, &rec.generators, n, &env)?;
        if rec.phi.len() != n || rec.phi.iter().any(|row| row.len() != n) {
            return Err(invalid(&label, format!("phi must be {n}×{n}")));
        }
        if rec.formulas.len() != generators.len() {
            return Err(invalid(&label, "one formula per generator expected"));
        }
        let params: Vec<&str> = a.params.iter().map(|p| p.name.as_str()).collect();
        let mut phi_symbols: Vec<String> = Vec::new();
        for text in rec.phi.iter().flatten() {
            for s in identifiers(text) {
                if !params.contains(&s.as_str()) && !phi_symbols.contains(&s) {
                    phi_symbols.push(s);
                }
            }
        }
        let alpha_names: Vec<String> = (1..=generators.len()).map(|k| format!("a{k}")).collect();
        if let Some(clash) = phi_symbols.iter().find(|s| alpha_names.contains(s)) {
            return Err(invalid(
                &label,
                format!("phi symbol `{clash}` clashes with an alpha name"),
            ));
        }
        let mut fenv = env.clone();
        for s in &phi_symbols {
            let v = r.vars.intern(s);
            fenv.bind(s, RatFun::var(v));
        }
        let mut symbols: Vec<&str> = params.clone();
        symbols.extend(phi_symbols.iter().map(String::as_str));
        let mut phi = Matrix::<RatFun>::zeros(n, n);
        for (i, row) in rec.phi.iter().enumerate() {
            for (j, text) in row.iter().enumerate() {
                let e = parse(&label, text, &symbols)?;
                phi[(i, j)] = eval_exact_ratfun(&e, &fenv).map_err(|err| invalid(&label, err.to_string()))?;
            }
        }
        let alpha_vars: Vec<usize> = alpha_names
            .iter()
            .map(|s| {
                let v = r.vars.intern(s);
                fenv.bind(s, RatFun::var(v));
                v
            })
            .collect();
        symbols.extend(alpha_names.iter().map(String::as_str));
        let formulas = rec
            .formulas
            .iter()
            .map(|text| {
                let e = parse(&label, text, &symbols)?;
                eval_exact_ratfun(&e, &fenv).map_err(|err| invalid(&label, err.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        alpha_sets.push(AlphaEntry {
            record: rec.clone(),
            set: AlphaFormulaSet {
                id: rec.id.clone(),
                algebra: a,
                generators,
                alpha_vars,
                phi,
                formulas,
            },
            phi_symbols,
        });
    }

    let mut reductions = Vec::new();
    for (pos, rec) in file.reductions.iter().enumerate() {
        let label = format!("reductions[{pos}] ({})", rec.id);
        let entry = alpha_sets
            .iter()
            .find(|a| a.record.id == rec.alpha_set)
            .ok_or_else(|| CorpusError::Dangling {
                record: label.clone(),
                id: rec.alpha_set.clone(),
            })?;
        let s = entry.set.alpha_vars.len();
        if rec.alphas.len() != s || rec.expected.iter().any(|v| v.len() != s) {
            return Err(invalid(&label, format!("alpha vectors must have {s} entries")));
        }
        let mut point = Vec::new();
        for p in &entry.set.algebra.params {
            let text = rec
                .params
                .get(&p.name)
                .ok_or_else(|| invalid(&label, format!("missing value for parameter `{}`", p.name)))?;
            point.push((p.var, closed_value(&label, text)?));
        }
        for k in rec.params.keys() {
            if !entry.set.algebra.params.iter().any(|p| &p.name == k) {
                return Err(invalid(&label, format!("`{k}` is not a parameter")));
            }
        }
        for k in rec.phi.keys() {
            if !entry.phi_symbols.contains(k) {
                return Err(invalid(&label, format!("`{k}` is not an entry of phi")));
            }
        }
        let alphas = rec
            .alphas
            .iter()
            .map(|t| closed_value(&label, t))
            .collect::<Result<Vec<_>>>()?;
        for (v, x) in entry.set.alpha_vars.iter().zip(&alphas) {
            point.push((*v, x.clone()));
        }
        for s in &entry.phi_symbols {
            let v = match rec.phi.get(s) {
                Some(t) => closed_value(&label, t)?,
                None => Cyclo12::zero(),
            };
            point.push((r.vars.index(s).expect("interned"), v));
        }
        let expected = rec
            .expected
            .iter()
            .map(|row| row.iter().map(|t| closed_value(&label, t)).collect())
            .collect::<Result<Vec<_>>>()?;
        reductions.push(ReductionEntry {
            record: rec.clone(),
            reduction: Reduction {
                point,
                input: vec![alphas],
                expected,
            },
        });
    }

    let mut claims: Vec<ClaimEntry> = Vec::new();
    for (pos, rec) in file.degenerations.iter().enumerate() {
        let label = format!("degenerations[{pos}] ({})", rec.id);
        if claims.iter().any(|c| c.record.id == rec.id) {
            return Err(CorpusError::Duplicate { record: label });
        }
        claims.push(resolve_claim(&r, &label, rec)?);
    }

    for (pos, rec) in file.orbit_dims.iter().enumerate() {
        let label = format!("orbit_dims[{pos}] ({})", rec.algebra);
        let a = r.get(&label, &rec.algebra)?;
        if (rec.kind == OrbitDimKind::FamilyClosure) != a.is_family() {
            return Err(invalid(&label, "kind does not match whether the algebra is a family"));
        }
    }
    for (pos, rec) in file.components.iter().enumerate() {
        let label = format!("components[{pos}]");
        for s in &rec.sources {
            if r.get(&label, s)?.record.dim != rec.dim {
                return Err(invalid(&label, format!("{s} has the wrong dimension")));
            }
        }
    }

    Ok(Corpus {
        file,
        vars: r.vars,
        algebras: r.algebras,
        index: r.index,
        h2,
        extensions,
        alpha_sets,
        reductions,
        claims,
    })
}

fn resolve_basis(r: &Resolver, label: &str, rows: &[BasisRow], n: usize, symbols: &[&str]) -> Result<ParamBasis> {
    if rows.len() != n {
        return Err(invalid(label, format!("basis must have {n} rows")));
    }
    let names = basis_names(n);
    let mut entries = Vec::with_capacity(n * n);
    for row in rows {
        match row {
            BasisRow::Coords(cs) => {
                if cs.len() != n {
                    return Err(invalid(label, format!("basis rows must have {n} entries")));
                }
                for c in cs {
                    entries.push(parse(label, c, symbols)?);
                }
            }
            BasisRow::Form(text) => {
                // Linearity is checked with every claim symbol kept formal.
                let mut tmp = r.vars.clone();
                let mut env = ExactEnv::new();
                for s in symbols {
                    let v = tmp.intern(&format!("__sym_{s}"));
                    env.bind(s, RatFun::var(v));
                }
                linear_form(label, text, &names, &env, &tmp)?;
                let mut all: Vec<&str> = symbols.to_vec();
                all.extend(names.iter().map(String::as_str));
                let e = parse(label, text, &all)?;
                for k in 0..n {
                    entries.push(e.substitute(&|s: &str| {
                        names.iter().position(|x| x == s).map(|p| Expr::int(i64::from(p == k)))
                    }));
                }
            }
        }
    }
    Ok(ParamBasis { n, entries })
}

fn resolve_claim(r: &Resolver, label: &str, rec: &DegenerationRecord) -> Result<ClaimEntry> {
    let source = r.get(label, &rec.source)?;
    let target = r.get(label, &rec.target)?;
    let n = source.record.dim;
    if target.record.dim != n {
        return Err(invalid(label, "source and target dimensions differ"));
    }
    let sym = &rec.symbols;
    let mut symbols: Vec<&str> = vec!["t"];
    symbols.extend(sym.free.iter().map(String::as_str));
    symbols.extend(sym.sampled.iter().map(String::as_str));
    symbols.extend(sym.fixed.keys().map(String::as_str));
    let assigned = |alg: &Algebra<RatFun>, map: &BTreeMap<String, String>| -> Result<Vec<(usize, Expr)>> {
        map.iter()
            .map(|(name, text)| {
                let p = alg
                    .params
                    .iter()
                    .find(|p| &p.name == name)
                    .ok_or_else(|| invalid(label, format!("`{name}` is not a parameter of {}", alg.name)))?;
                Ok((p.var, parse(label, text, &symbols)?))
            })
            .collect()
    };
    let source_index = assigned(&source.algebra, &rec.source_index)?;
    let target_params = assigned(&target.algebra, &rec.target_params)?;
    for (alg, given) in [(&source.algebra, &source_index), (&target.algebra, &target_params)] {
        for p in &alg.params {
            let bound = given.iter().any(|(v, _)| *v == p.var);
            if !bound && !sym.free.contains(&p.name) && !sym.sampled.contains(&p.name) {
                return Err(invalid(
                    label,
                    format!("parameter `{}` of {} is unbound", p.name, alg.name),
                ));
            }
        }
    }
    let fixed = sym
        .fixed
        .iter()
        .map(|(k, v)| Ok((k.clone(), closed_value(label, v)?)))
        .collect::<Result<Vec<_>>>()?;
    let der_samples = rec
        .der_samples
        .iter()
        .map(|t| {
            let e = parse(label, t, &[])?;
            eval_rational(&e).map_err(|err| invalid(label, err.to_string()))
        })
        .collect::<Result<Vec<Rational>>>()?;
    let basis = resolve_basis(r, label, &rec.basis, n, &symbols)?;
    let as_printed = rec
        .as_printed
        .as_ref()
        .map(|rows| resolve_basis(r, label, rows, n, &symbols))
        .transpose()?;
    Ok(ClaimEntry {
        record: rec.clone(),
        claim: DegenerationClaim {
            id: rec.id.clone(),
            source_id: rec.source.clone(),
            target_id: rec.target.clone(),
            source: source.algebra.clone(),
            target: target.algebra.clone(),
            source_index,
            target_params,
            basis,
            free_symbols: sym.free.clone(),
            sampled_symbols: sym.sampled.clone(),
            fixed,
            der_samples,
        },
        as_printed,
    })
}
