//! Degeneration claims: parametrized bases, exact and numeric limit checks,
//! orbit and family-closure dimensions, and the derivation-dimension
//! necessary condition.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::field::Field;
use crate::linalg::{solve_complex, Matrix};
use crate::scalars::bigcomplex::rational_to_float;
use crate::scalars::eval::{eval_exact_ratfun, eval_value, EvalError, ExactEnv, NumEnv};
use crate::scalars::{BigComplex, Cyclo12, Expr, Poly, RatFun, Rational, Value, Vars};

/// Name reserved for the substitution variable `t = s^N`.
const S_VAR: &str = "__s";

/// `n×n` expressions; entry `(i, j)` is the coefficient of `eⱼ` in `Eᵢ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamBasis {
    pub n: usize,
    pub entries: Vec<Expr>,
}

impl ParamBasis {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Expr::int(0); n * n];
        for i in 0..n {
            entries[i * n + i] = Expr::int(1);
        }
        ParamBasis { n, entries }
    }

    pub fn entry(&self, i: usize, j: usize) -> &Expr {
        &self.entries[i * self.n + j]
    }

    pub fn root_denominator(&self) -> u64 {
        self.entries
            .iter()
            .fold(1, |l, e| crate::scalars::rational::lcm_u64(l, e.root_denominator()))
    }
}

/// A claimed degeneration `source → target` with all symbols resolved.
#[derive(Clone, Debug)]
pub struct DegenerationClaim {
    pub id: String,
    pub source_id: String,
    pub target_id: String,
    pub source: Algebra<RatFun>,
    pub target: Algebra<RatFun>,
    /// Parameter variable of the source family and its value in terms of
    /// the claim symbols.
    pub source_index: Vec<(usize, Expr)>,
    pub target_params: Vec<(usize, Expr)>,
    pub basis: ParamBasis,
    /// Symbols kept symbolic in exact mode and sampled in numeric mode.
    pub free_symbols: Vec<String>,
    /// Symbols sampled at random rationals in both modes.
    pub sampled_symbols: Vec<String>,
    pub fixed: Vec<(String, Cyclo12)>,
    /// Preferred `t` values for the derivation test on families.
    pub der_samples: Vec<Rational>,
}

impl DegenerationClaim {
    /// Lcm of every fractional exponent denominator in the claim.
    pub fn substitution_exponent(&self) -> u64 {
        let mut l = self.basis.root_denominator();
        for (_, e) in self.source_index.iter().chain(&self.target_params) {
            l = crate::scalars::rational::lcm_u64(l, e.root_denominator());
        }
        l
    }

    pub fn is_family_claim(&self) -> bool {
        !self.source.params.is_empty() || !self.target.params.is_empty()
    }

    pub fn is_proper(&self) -> bool {
        self.source_id != self.target_id
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    VerifiedExact,
    VerifiedNumeric,
    Failed,
    Inapplicable,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::VerifiedExact => "verified-exact",
            Status::VerifiedNumeric => "verified-numeric",
            Status::Failed => "failed",
            Status::Inapplicable => "inapplicable",
        }
    }

    pub fn is_verified(&self) -> bool {
        matches!(self, Status::VerifiedExact | Status::VerifiedNumeric)
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: Status,
    /// `(t, max |c′(t) − c_target|)` per rung of the accepted (or last) ladder.
    pub trace: Vec<(f64, f64)>,
    pub notes: Vec<String>,
    pub exponent: Option<u64>,
    /// Ray used for the accepted numeric ladder.
    pub ray: Option<&'static str>,
    /// First offending `(i, j, k)`, one-based.
    pub offending: Option<(usize, usize, usize)>,
    pub precision_bound: bool,
}

impl Verdict {
    fn new(status: Status) -> Self {
        Verdict {
            status,
            trace: Vec::new(),
            notes: Vec::new(),
            exponent: None,
            ray: None,
            offending: None,
            precision_bound: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Exact when every entry admits it, otherwise numeric.
    Auto,
    Exact,
    Numeric,
}

#[derive(Clone, Debug)]
pub struct DegenConfig {
    pub precision: usize,
    pub tolerance: f64,
    pub t0: Rational,
    /// Ratio between consecutive rungs.
    pub ratio: Rational,
    pub rungs: usize,
    /// Rungs before this index are exempt from the monotonicity test.
    pub monotone_from: usize,
    pub samples: usize,
    pub mode: Mode,
    pub seed: u64,
}

impl Default for DegenConfig {
    fn default() -> Self {
        DegenConfig {
            precision: 256,
            tolerance: 1e-8,
            t0: Rational::new(1.into(), 100.into()),
            ratio: Rational::new(1.into(), 10000.into()),
            rungs: 13,
            monotone_from: 3,
            samples: 3,
            mode: Mode::Auto,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DegenError {
    #[error("dimension mismatch between source ({0}) and target ({1})")]
    Dimension(usize, usize),
    #[error("expression error: {0}")]
    Eval(#[from] EvalError),
    #[error("basis is singular")]
    Singular,
    #[error("parameter has a pole")]
    Pole,
}

/// Per-claim random generator, independent of scheduling.
pub fn claim_rng(seed: u64, id: &str) -> ChaCha8Rng {
    use rand::SeedableRng;
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in id.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

/// A random nonzero rational `p/q` with `|p| ≤ 9`, `1 ≤ q ≤ 7`, avoiding `±1`.
pub fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let p: i64 = rng.gen_range(-9..=9);
        let q: i64 = rng.gen_range(1..=7);
        let r = Rational::new(p.into(), q.into());
        if p != 0 && r != Rational::from_integer(1.into()) && r != Rational::from_integer((-1).into()) {
            return r;
        }
    }
}

fn sample_sets(claim: &DegenerationClaim, rng: &mut ChaCha8Rng, count: usize) -> Vec<Vec<(String, Rational)>> {
    if claim.sampled_symbols.is_empty() {
        return vec![Vec::new()];
    }
    (0..count)
        .map(|_| {
            claim
                .sampled_symbols
                .iter()
                .map(|s| (s.clone(), random_rational(rng)))
                .collect()
        })
        .collect()
}

/// Polynomial that every denominator in `dens` divides, built by multiplying
/// in each denominator not already dividing the running product.
fn common_denominator<'a>(dens: impl Iterator<Item = &'a Poly>) -> Poly {
    let mut l = Poly::one();
    for d in dens {
        if d.is_constant() || l.div_exact(d).is_some() {
            continue;
        }
        if d.div_exact(&l).is_some() {
            l = d.clone();
        } else {
            l = &l * d;
        }
    }
    l
}

/// Determinant by cofactor expansion over column subsets.
fn poly_det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    // minors[mask] = det of rows (n - popcount(mask))..n with columns in mask
    let mut minors: BTreeMap<u32, Poly> = BTreeMap::new();
    minors.insert(0, Poly::one());
    for size in 1..=n {
        let row = n - size;
        let mut next = BTreeMap::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let mut acc = Poly::zero();
            let mut sign_pos = true;
            for c in 0..n {
                if mask & (1 << c) == 0 {
                    continue;
                }
                let sub = mask & !(1 << c);
                let a = &m[row][c];
                if !a.is_zero() {
                    if let Some(mn) = minors.get(&sub) {
                        let t = a * mn;
                        acc = if sign_pos { &acc + &t } else { &acc - &t };
                    }
                }
                sign_pos = !sign_pos;
            }
            next.insert(mask, acc);
        }
        minors = next;
    }
    minors.remove(&((1u32 << n) - 1)).unwrap_or_else(Poly::zero)
}

fn minor_matrix(m: &[Vec<Poly>], skip_r: usize, skip_c: usize) -> Vec<Vec<Poly>> {
    m.iter()
        .enumerate()
        .filter(|(r, _)| *r != skip_r)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(c, _)| *c != skip_c)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Structure constants in the basis `E`, as `(numerator, denominator)`
/// polynomial pairs indexed `(i·n + j)·n + k`.
struct MovedPolys {
    num: Vec<Poly>,
    den: Vec<Poly>,
}

/// `E` is given by rows of rational functions (row `i` = coordinates of `Eᵢ`).
fn moved_polys(consts: &[RatFun], n: usize, rows: &[Vec<RatFun>]) -> Result<MovedPolys, DegenError> {
    // Scale each basis vector by a common denominator of its entries.
    let scales: Vec<Poly> = rows
        .iter()
        .map(|r| common_denominator(r.iter().map(RatFun::den)))
        .collect();
    // ptilde[a][i] = coefficient of e_a in D_i·E_i (columns are basis vectors)
    let mut pt = vec![vec![Poly::zero(); n]; n];
    for i in 0..n {
        for a in 0..n {
            let x = &rows[i][a];
            if x.is_zero() {
                continue;
            }
            let f = scales[i].div_exact(x.den()).expect("scale is a common multiple");
            pt[a][i] = x.num() * &f;
        }
    }
    let det = poly_det(&pt);
    if det.is_zero() {
        return Err(DegenError::Singular);
    }
    // adj[k][a] = cofactor (a, k)
    let mut adj = vec![vec![Poly::zero(); n]; n];
    for a in 0..n {
        for k in 0..n {
            let c = poly_det(&minor_matrix(&pt, a, k));
            adj[k][a] = if (a + k) % 2 == 0 { c } else { -c };
        }
    }
    let dc = common_denominator(consts.iter().map(RatFun::den));
    let cpoly: Vec<Poly> = consts
        .iter()
        .map(|c| c.num() * &dc.div_exact(c.den()).expect("common multiple"))
        .collect();
    let mut num = Vec::with_capacity(n * n * n);
    let mut den = Vec::with_capacity(n * n * n);
    let base_den = &det * &dc;
    for i in 0..n {
        for j in 0..n {
            // v = Σ_ab pt[a][i] pt[b][j] c_ab
            let mut v = vec![Poly::zero(); n];
            for a in 0..n {
                if pt[a][i].is_zero() {
                    continue;
                }
                for b in 0..n {
                    if pt[b][j].is_zero() {
                        continue;
                    }
                    let w = &pt[a][i] * &pt[b][j];
                    for m in 0..n {
                        let c = &cpoly[(a * n + b) * n + m];
                        if !c.is_zero() {
                            v[m] = &v[m] + &(&w * c);
                        }
                    }
                }
            }
            let dij = &(&scales[i] * &scales[j]) * &base_den;
            for k in 0..n {
                let mut acc = Poly::zero();
                for (m, vm) in v.iter().enumerate() {
                    if !vm.is_zero() && !adj[k][m].is_zero() {
                        acc = &acc + &(&adj[k][m] * vm);
                    }
                }
                num.push(&acc * &scales[k]);
                den.push(dij.clone());
            }
        }
    }
    Ok(MovedPolys { num, den })
}

/// Structure constants of `A` in the basis `rows` (row `i` = `Eᵢ`), as
/// rational functions.
pub fn moved_constants_exact(a: &Algebra<RatFun>, rows: &[Vec<RatFun>]) -> Result<Vec<RatFun>, DegenError> {
    let n = a.dim();
    let mp = moved_polys(a.constants(), n, rows)?;
    Ok(mp
        .num
        .into_iter()
        .zip(mp.den)
        .map(|(p, q)| RatFun::new(p, q).expect("nonzero denominator"))
        .collect())
}

/// Structure constants in the basis `rows` at a numeric point.
pub fn moved_constants_numeric(
    consts: &[BigComplex],
    n: usize,
    rows: &[Vec<BigComplex>],
) -> Result<Vec<BigComplex>, DegenError> {
    let prec = rows[0][0].prec();
    // p[a][i] = coefficient of e_a in E_i
    let p: Vec<Vec<BigComplex>> = (0..n).map(|a| (0..n).map(|i| rows[i][a].clone()).collect()).collect();
    let mut rhs = vec![vec![BigComplex::zero(prec); n * n]; n];
    for i in 0..n {
        for j in 0..n {
            for a in 0..n {
                if p[a][i].is_zero() {
                    continue;
                }
                for b in 0..n {
                    if p[b][j].is_zero() {
                        continue;
                    }
                    let w = &p[a][i] * &p[b][j];
                    for m in 0..n {
                        let c = &consts[(a * n + b) * n + m];
                        if !c.is_zero() {
                            let d = &w * c;
                            rhs[m][i * n + j] = &rhs[m][i * n + j] + &d;
                        }
                    }
                }
            }
        }
    }
    let (x, _) = solve_complex(&p, &rhs).ok_or(DegenError::Singular)?;
    let mut out = Vec::with_capacity(n * n * n);
    for ij in 0..n * n {
        for xk in x.iter().take(n) {
            out.push(xk[ij].clone());
        }
    }
    Ok(out)
}

fn param_subs(
    alg: &Algebra<RatFun>,
    assigned: &[(usize, Expr)],
    env: &ExactEnv,
    vars: &Vars,
) -> Result<BTreeMap<usize, RatFun>, DegenError> {
    let mut subs = BTreeMap::new();
    for p in &alg.params {
        let v = match assigned.iter().find(|(v, _)| *v == p.var) {
            Some((_, e)) => eval_exact_ratfun(e, env)?,
            None => env
                .bindings
                .get(vars.name(p.var))
                .cloned()
                .unwrap_or_else(|| RatFun::var(p.var)),
        };
        subs.insert(p.var, v);
    }
    Ok(subs)
}

fn substitute_all(consts: &[RatFun], subs: &BTreeMap<usize, RatFun>) -> Result<Vec<RatFun>, DegenError> {
    if subs.is_empty() {
        return Ok(consts.to_vec());
    }
    consts
        .iter()
        .map(|c| c.substitute(subs).ok_or(DegenError::Pole))
        .collect()
}

fn idx3(n: usize, ix: usize) -> (usize, usize, usize) {
    (ix / (n * n) + 1, (ix / n) % n + 1, ix % n + 1)
}

fn exact_check(
    claim: &DegenerationClaim,
    vars: &Vars,
    samples: &[Vec<(String, Rational)>],
) -> Result<Verdict, DegenError> {
    let n = claim.source.dim();
    let big_n = claim.substitution_exponent();
    let mut vars = vars.clone();
    let s = vars.intern(S_VAR);
    let mut verdict = Verdict::new(Status::VerifiedExact);
    verdict.exponent = Some(big_n);
    for sample in samples {
        let mut env = ExactEnv::new();
        env.bind("t", RatFun::from_poly(Poly::var(s).pow(big_n as u32)));
        for f in &claim.free_symbols {
            let v = vars.intern(f);
            env.bind(f, RatFun::var(v));
        }
        for (name, q) in sample {
            env.bind(name, RatFun::from_rational(q.clone()));
        }
        for (name, c) in &claim.fixed {
            env.bind(name, RatFun::constant(c.clone()));
        }
        let rows: Vec<Vec<RatFun>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| eval_exact_ratfun(claim.basis.entry(i, j), &env))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        let src_subs = param_subs(&claim.source, &claim.source_index, &env, &vars)?;
        let consts = substitute_all(claim.source.constants(), &src_subs)?;
        let tgt_subs = param_subs(&claim.target, &claim.target_params, &env, &vars)?;
        let target = substitute_all(claim.target.constants(), &tgt_subs)?;
        let mp = match moved_polys(&consts, n, &rows) {
            Ok(m) => m,
            Err(DegenError::Singular) => {
                verdict.status = Status::Failed;
                verdict.notes.push("basis determinant vanishes identically".into());
                return Ok(verdict);
            }
            Err(e) => return Err(e),
        };
        for ix in 0..n * n * n {
            let (p, q) = (&mp.num[ix], &mp.den[ix]);
            let tq = &target[ix];
            let oq = q.order_in(s).expect("nonzero denominator");
            let limit_ok = if p.is_zero() {
                tq.is_zero()
            } else {
                let op = p.order_in(s).expect("nonzero");
                if op < oq {
                    verdict.status = Status::Failed;
                    verdict.offending = Some(idx3(n, ix));
                    verdict
                        .notes
                        .push(format!("c'{:?} diverges like s^-{} as s -> 0", idx3(n, ix), oq - op));
                    return Ok(verdict);
                }
                if op > oq {
                    tq.is_zero()
                } else {
                    let lp = p.coeff_in(s, op);
                    let lq = q.coeff_in(s, oq);
                    &lp * tq.den() == &lq * tq.num()
                }
            };
            if !limit_ok {
                verdict.status = Status::Failed;
                verdict.offending = Some(idx3(n, ix));
                verdict
                    .notes
                    .push(format!("limit of c'{:?} differs from the target constant", idx3(n, ix)));
                return Ok(verdict);
            }
        }
        if !sample.is_empty() {
            let desc: Vec<String> = sample
                .iter()
                .map(|(k, v)| format!("{k}={}", crate::scalars::rational::fmt_rational(v)))
                .collect();
            verdict.notes.push(format!("exact at {}", desc.join(", ")));
        }
    }
    verdict.notes.push(format!("t = s^{big_n}"));
    Ok(verdict)
}

const RAYS: [(&str, i64); 3] = [
    ("positive real axis", 0),
    ("ray e^{i*pi/4}", 1),
    ("ray e^{-i*pi/4}", -1),
];

fn eval_poly_complex(p: &Poly, point: &BTreeMap<usize, BigComplex>, prec: usize) -> Option<BigComplex> {
    for v in p.vars() {
        if !point.contains_key(&v) {
            return None;
        }
    }
    Some(p.eval_with(
        BigComplex::zero(prec),
        |v| point[&v].clone(),
        |c| BigComplex::from_cyclo(&c, prec),
    ))
}

fn eval_ratfun_complex(r: &RatFun, point: &BTreeMap<usize, BigComplex>, prec: usize) -> Option<BigComplex> {
    let n = eval_poly_complex(r.num(), point, prec)?;
    if r.is_poly() {
        return Some(n);
    }
    let d = eval_poly_complex(r.den(), point, prec)?;
    Some(&n * &d.recip()?)
}

fn family_point(
    alg: &Algebra<RatFun>,
    assigned: &[(usize, Expr)],
    env: &mut NumEnv,
    vars: &Vars,
) -> Result<BTreeMap<usize, BigComplex>, DegenError> {
    let prec = env.prec;
    let mut point = BTreeMap::new();
    for p in &alg.params {
        let v = match assigned.iter().find(|(v, _)| *v == p.var) {
            Some((_, e)) => eval_value(e, env)?,
            None => env
                .bindings
                .get(vars.name(p.var))
                .cloned()
                .ok_or_else(|| EvalError::Unbound(vars.name(p.var).to_string()))?,
        };
        point.insert(p.var, v.to_complex(prec));
    }
    Ok(point)
}

struct Ladder {
    trace: Vec<(f64, f64)>,
    residuals: Vec<astro_float::BigFloat>,
    failure: Option<String>,
    underflow: bool,
}

fn run_ladder(
    claim: &DegenerationClaim,
    vars: &Vars,
    cfg: &DegenConfig,
    sample: &[(String, Rational)],
    free_values: &[(String, Rational)],
    ray: i64,
) -> Ladder {
    let mut out = Ladder {
        trace: Vec::new(),
        residuals: Vec::new(),
        failure: None,
        underflow: false,
    };
    let mut t_abs = cfg.t0.clone();
    for rung in 0..cfg.rungs {
        if rung > 0 {
            t_abs = &t_abs * &cfg.ratio;
        }
        // A probe at the configured precision sizes the guard bits needed
        // for the badly scaled basis at this rung.
        let probe = evaluate_rung(claim, vars, cfg.precision, &t_abs, sample, free_values, ray, None);
        let result = probe.and_then(|(_, range, _)| {
            let wp = cfg.precision + 2 * range + 64;
            evaluate_rung(claim, vars, wp, &t_abs, sample, free_values, ray, Some(()))
        });
        match result {
            Ok((r, _, underflow)) => {
                out.underflow |= underflow;
                out.trace.push((
                    crate::scalars::rational::to_f64(&t_abs),
                    crate::scalars::bigcomplex::float_to_f64(&r),
                ));
                out.residuals.push(r);
            }
            Err(e) => {
                out.failure = Some(format!("rung {rung}: {e}"));
                return out;
            }
        }
    }
    out
}

/// Residual at one rung, the exponent range of the basis entries in bits,
/// and whether evaluation lost more than half the working precision.
#[allow(clippy::too_many_arguments)]
fn evaluate_rung(
    claim: &DegenerationClaim,
    vars: &Vars,
    prec: usize,
    t_abs: &Rational,
    sample: &[(String, Rational)],
    free_values: &[(String, Rational)],
    ray: i64,
    full: Option<()>,
) -> Result<(astro_float::BigFloat, usize, bool), DegenError> {
    let n = claim.source.dim();
    let mut env = NumEnv::new(prec);
    let t_val = if ray == 0 {
        Value::Exact(Cyclo12::from_rational(t_abs.clone()))
    } else {
        let dir = BigComplex::unit_root(ray, 4, prec, env.consts());
        Value::Approx(&BigComplex::from_rational(t_abs, prec) * &dir)
    };
    env.bind("t", t_val);
    for (k, v) in sample.iter().chain(free_values) {
        env.bind(k, Value::Exact(Cyclo12::from_rational(v.clone())));
    }
    for (k, c) in &claim.fixed {
        env.bind(k, Value::Exact(c.clone()));
    }
    let mut rows = Vec::with_capacity(n);
    let (mut lo, mut hi) = (i64::MAX, i64::MIN);
    for i in 0..n {
        let mut r = Vec::with_capacity(n);
        for j in 0..n {
            let x = eval_value(claim.basis.entry(i, j), &mut env)?.to_complex(prec);
            if !x.is_zero() {
                let e = x.magnitude_exp();
                lo = lo.min(e);
                hi = hi.max(e);
            }
            r.push(x);
        }
        rows.push(r);
    }
    let range = if hi >= lo { (hi - lo) as usize } else { 0 };
    let zero = astro_float::BigFloat::from_f64(0.0, prec);
    if full.is_none() {
        return Ok((zero, range, env.underflow));
    }
    let sp = family_point(&claim.source, &claim.source_index, &mut env, vars)?;
    let tp = family_point(&claim.target, &claim.target_params, &mut env, vars)?;
    let consts: Vec<BigComplex> = claim
        .source
        .constants()
        .iter()
        .map(|c| eval_ratfun_complex(c, &sp, prec).ok_or(DegenError::Pole))
        .collect::<Result<_, _>>()?;
    let target: Vec<BigComplex> = claim
        .target
        .constants()
        .iter()
        .map(|c| eval_ratfun_complex(c, &tp, prec).ok_or(DegenError::Pole))
        .collect::<Result<_, _>>()?;
    let moved = moved_constants_numeric(&consts, n, &rows)?;
    let mut worst = zero;
    for (a, b) in moved.iter().zip(&target) {
        let d = (a - b).abs();
        if d.cmp(&worst).unwrap_or(0) > 0 {
            worst = d;
        }
    }
    Ok((worst, range, env.underflow))
}

fn judge_ladder(l: &Ladder, cfg: &DegenConfig) -> Result<(), String> {
    if let Some(f) = &l.failure {
        return Err(f.clone());
    }
    let prec = cfg.precision;
    let floor = rational_to_float(
        &Rational::new(1.into(), num_bigint::BigInt::from(1u8) << (prec / 2)),
        prec,
    );
    let below = |x: &astro_float::BigFloat| x.cmp(&floor).unwrap_or(1) <= 0;
    for m in cfg.monotone_from.max(1)..l.residuals.len() {
        let (a, b) = (&l.residuals[m - 1], &l.residuals[m]);
        let decreasing = b.cmp(a).unwrap_or(1) < 0;
        if !decreasing && !(below(a) && below(b)) {
            return Err(format!("residual does not decrease at rung {m}"));
        }
    }
    let tol = astro_float::BigFloat::from_f64(cfg.tolerance, prec);
    match l.residuals.last() {
        Some(r) if r.cmp(&tol).unwrap_or(1) < 0 => Ok(()),
        Some(_) => Err("final residual above tolerance".into()),
        None => Err("empty ladder".into()),
    }
}

fn numeric_check(
    claim: &DegenerationClaim,
    vars: &Vars,
    cfg: &DegenConfig,
    samples: &[Vec<(String, Rational)>],
    rng: &mut ChaCha8Rng,
) -> Verdict {
    let free_values: Vec<(String, Rational)> = claim
        .free_symbols
        .iter()
        .map(|f| (f.clone(), random_rational(rng)))
        .collect();
    let mut verdict = Verdict::new(Status::Failed);
    let floor_exp = -((cfg.precision / 2) as f64) * core::f64::consts::LN_2 / core::f64::consts::LN_10;
    verdict.precision_bound = cfg.tolerance < libm_pow10(floor_exp);
    let mut last_err = String::new();
    for (ray_name, ray) in RAYS {
        let mut ok = true;
        let mut trace = Vec::new();
        for sample in samples {
            let l = run_ladder(claim, vars, cfg, sample, &free_values, ray);
            if trace.is_empty() {
                trace = l.trace.clone();
            }
            if let Err(e) = judge_ladder(&l, cfg) {
                last_err = format!("{ray_name}: {e}");
                trace = l.trace.clone();
                ok = false;
                if l.underflow {
                    verdict
                        .notes
                        .push("cancellation exceeded half the working precision".into());
                }
                break;
            }
        }
        verdict.trace = trace;
        if ok {
            verdict.status = Status::VerifiedNumeric;
            verdict.ray = Some(ray_name);
            verdict.precision_bound = false;
            if ray != 0 {
                verdict
                    .notes
                    .push(format!("positive real path failed; accepted along {ray_name}"));
            }
            return verdict;
        }
    }
    verdict.notes.push(last_err);
    if verdict.precision_bound {
        verdict
            .notes
            .push("tolerance is below the precision floor 2^(-precision/2)".into());
    }
    verdict
}

fn libm_pow10(x: f64) -> f64 {
    // 10^x for the moderate exponents used here, without std.
    let mut r = 1.0f64;
    let mut k = x;
    while k <= -1.0 {
        r /= 10.0;
        k += 1.0;
    }
    while k >= 1.0 {
        r *= 10.0;
        k -= 1.0;
    }
    // remaining fractional part: 10^k = e^{k ln 10}, series is fine for |k| < 1
    let y = k * core::f64::consts::LN_10;
    let mut term = 1.0;
    let mut sum = 1.0;
    for i in 1..30 {
        term *= y / i as f64;
        sum += term;
    }
    r * sum
}

/// Verifies a claim. Exact mode is tried first in [`Mode::Auto`]; claims
/// whose entries have no exact form after `t = s^N` fall back to numeric.
pub fn check_degeneration(claim: &DegenerationClaim, vars: &Vars, cfg: &DegenConfig) -> Verdict {
    let (n, m) = (claim.source.dim(), claim.target.dim());
    if n != m || claim.basis.n != n {
        let mut v = Verdict::new(Status::Inapplicable);
        v.notes.push(DegenError::Dimension(n, m).to_string());
        return v;
    }
    let mut rng = claim_rng(cfg.seed, &claim.id);
    let samples = sample_sets(claim, &mut rng, cfg.samples);
    if cfg.mode != Mode::Numeric {
        match exact_check(claim, vars, &samples) {
            Ok(v) => return v,
            Err(DegenError::Eval(EvalError::NotExact(what))) if cfg.mode == Mode::Auto => {
                let mut v = numeric_check(claim, vars, cfg, &samples, &mut rng);
                v.notes.insert(0, format!("numeric mode: no exact form for {what}"));
                return v;
            }
            Err(e) => {
                let mut v = Verdict::new(Status::Failed);
                v.notes.push(e.to_string());
                return v;
            }
        }
    }
    numeric_check(claim, vars, cfg, &samples, &mut rng)
}

/// Rank of the tangent map `gl(n) → C^{n³}` at `μ`, optionally augmented
/// by extra directions.
pub fn tangent_rank<F: Field>(a: &Algebra<F>, extra: &[Vec<F>]) -> usize {
    let n = a.dim();
    let mut m = Matrix::zeros(0, n * n * n);
    for aa in 0..n {
        for b in 0..n {
            let mut row = vec![F::zero(); n * n * n];
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let ix = (i * n + j) * n + k;
                        let mut v = F::zero();
                        if k == aa {
                            v = v + a.get(i, j, b).clone();
                        }
                        if i == b {
                            v = v - a.get(aa, j, k).clone();
                        }
                        if j == b {
                            v = v - a.get(i, aa, k).clone();
                        }
                        row[ix] = v;
                    }
                }
            }
            m.push_row(row);
        }
    }
    for e in extra {
        m.push_row(e.clone());
    }
    if m.rows() == 0 {
        return 0;
    }
    m.rank()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyDim {
    pub ranks: Vec<usize>,
    pub max: usize,
    /// Generic orbit dimension of a member (`n² − dim Der`) per sample.
    pub member_orbit_dims: Vec<usize>,
}

/// Dimension of the closure of the union of orbits of a family.
pub fn family_closure_dim(family: &Algebra<RatFun>, rng: &mut ChaCha8Rng, samples: usize) -> FamilyDim {
    let mut ranks = Vec::new();
    let mut orbit = Vec::new();
    let mut tries = 0;
    while ranks.len() < samples.max(3) && tries < 50 {
        tries += 1;
        let point: Vec<(usize, Cyclo12)> = family
            .params
            .iter()
            .map(|p| (p.var, Cyclo12::from_rational(random_rational(rng))))
            .collect();
        let Ok(a) = family.instantiate(&point) else { continue };
        let mut extra = Vec::new();
        let mut pole = false;
        for p in &family.params {
            let mut row = Vec::with_capacity(family.constants().len());
            for c in family.constants() {
                match c.derivative(p.var).eval_cyclo(&point) {
                    Some(v) => row.push(v),
                    None => pole = true,
                }
            }
            extra.push(row);
        }
        if pole {
            continue;
        }
        ranks.push(tangent_rank(&a, &extra));
        orbit.push(a.orbit_dim());
    }
    let max = ranks.iter().copied().max().unwrap_or(0);
    FamilyDim {
        ranks,
        max,
        member_orbit_dims: orbit,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerStatus {
    /// `dim Der(source) < dim Der(target)` everywhere it was tested, or
    /// `<=` when the source index moves with `t` (see [`DerReport::moving`]).
    Strict,
    Violated,
    /// Source and target coincide.
    Skipped,
    /// No usable sample could be evaluated exactly.
    Unavailable,
}

#[derive(Clone, Debug)]
pub struct DerReport {
    pub status: DerStatus,
    /// `(sample label, dim Der(source), dim Der(target))`.
    pub samples: Vec<(String, usize, usize)>,
    pub family: bool,
    /// The source index depends on `t`, so the source is the one-parameter
    /// family `A(t)` and its orbit union has dimension `dim O(A(t)) + 1`.
    /// The necessary condition is then `dim O(target) < dim O(A(t)) + 1`,
    /// i.e. `dim Der(source) <= dim Der(target)`.
    pub moving: bool,
}

fn exact_member(
    alg: &Algebra<RatFun>,
    assigned: &[(usize, Expr)],
    bindings: &BTreeMap<String, Cyclo12>,
    vars: &Vars,
) -> Option<Algebra<Cyclo12>> {
    let mut point = Vec::new();
    for p in &alg.params {
        let v = match assigned.iter().find(|(v, _)| *v == p.var) {
            Some((_, e)) => crate::scalars::eval_cyclo(e, bindings).ok()?,
            None => bindings.get(vars.name(p.var))?.clone(),
        };
        point.push((p.var, v));
    }
    alg.instantiate(&point).ok()
}

/// The necessary condition `Der(A) < Der(B)` for a proper degeneration.
pub fn der_monotonicity(claim: &DegenerationClaim, vars: &Vars, seed: u64) -> DerReport {
    let family = claim.is_family_claim() || !claim.sampled_symbols.is_empty();
    let moving = claim
        .source_index
        .iter()
        .any(|(_, e)| e.symbols().iter().any(|s| s == "t"));
    if !claim.is_proper() {
        return DerReport {
            status: DerStatus::Skipped,
            samples: Vec::new(),
            family,
            moving,
        };
    }
    let mut rng = claim_rng(seed ^ 0x5eed, &claim.id);
    let mut candidates: Vec<Rational> = claim.der_samples.clone();
    if !family {
        candidates = vec![Rational::from_integer(1.into())];
    } else {
        for _ in 0..20 {
            candidates.push(random_rational(&mut rng));
        }
    }
    let mut samples = Vec::new();
    let mut violated = false;
    for t in candidates {
        if samples.len() == if family { 3 } else { 1 } {
            break;
        }
        let mut b: BTreeMap<String, Cyclo12> = BTreeMap::new();
        b.insert("t".into(), Cyclo12::from_rational(t.clone()));
        for s in claim.free_symbols.iter().chain(&claim.sampled_symbols) {
            b.insert(s.clone(), Cyclo12::from_rational(random_rational(&mut rng)));
        }
        for (k, c) in &claim.fixed {
            b.insert(k.clone(), c.clone());
        }
        let (Some(src), Some(tgt)) = (
            exact_member(&claim.source, &claim.source_index, &b, vars),
            exact_member(&claim.target, &claim.target_params, &b, vars),
        ) else {
            continue;
        };
        let (ds, dt) = (src.derivations().dim(), tgt.derivations().dim());
        violated |= if moving { ds > dt } else { ds >= dt };
        let label = if family {
            format!("t={}", crate::scalars::rational::fmt_rational(&t))
        } else {
            "constant".to_string()
        };
        samples.push((label, ds, dt));
    }
    let status = if samples.is_empty() {
        DerStatus::Unavailable
    } else if violated {
        DerStatus::Violated
    } else {
        DerStatus::Strict
    };
    DerReport {
        status,
        samples,
        family,
        moving,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse_expr;

    fn alg(name: &str, n: usize, prods: &[(usize, usize, usize, i64)]) -> Algebra<RatFun> {
        let mut a = Algebra::zero(name, n);
        for &(i, j, k, c) in prods {
            a.set(i - 1, j - 1, k - 1, RatFun::from_int(c));
        }
        a
    }

    fn basis(n: usize, rows: &[&[&str]]) -> ParamBasis {
        let mut entries = Vec::new();
        for r in rows {
            for e in *r {
                entries.push(parse_expr(e, &["t"]).unwrap());
            }
        }
        ParamBasis { n, entries }
    }

    fn claim(src: Algebra<RatFun>, tgt: Algebra<RatFun>, b: ParamBasis) -> DegenerationClaim {
        DegenerationClaim {
            id: "test".into(),
            source_id: src.name.clone(),
            target_id: tgt.name.clone(),
            source: src,
            target: tgt,
            source_index: Vec::new(),
            target_params: Vec::new(),
            basis: b,
            free_symbols: Vec::new(),
            sampled_symbols: Vec::new(),
            fixed: Vec::new(),
            der_samples: Vec::new(),
        }
    }

    #[test]
    fn four_dimensional_rows() {
        // e1e1=e2, e1e2=e4, e2e1=-e4, e3e3=e4  ->  e1e1=e2, e1e2=e4, e1e3=e4, e2e1=-e4
        let src = alg("AA4.3", 4, &[(1, 1, 2, 1), (1, 2, 4, 1), (2, 1, 4, -1), (3, 3, 4, 1)]);
        let tgt = alg("AA4.2", 4, &[(1, 1, 2, 1), (1, 2, 4, 1), (1, 3, 4, 1), (2, 1, 4, -1)]);
        let good = basis(
            4,
            &[
                &["1", "0", "1/(2*t)", "0"],
                &["0", "1", "0", "1/(4*t^2)"],
                &["0", "1/2", "t", "0"],
                &["0", "0", "0", "1"],
            ],
        );
        let c = claim(src.clone(), tgt.clone(), good);
        let cfg = DegenConfig::default();
        let vars = Vars::new();
        let v = check_degeneration(&c, &vars, &cfg);
        assert_eq!(v.status, Status::VerifiedExact, "{:?}", v.notes);
        let cfgn = DegenConfig {
            mode: Mode::Numeric,
            ..DegenConfig::default()
        };
        let v = check_degeneration(&c, &vars, &cfgn);
        assert_eq!(v.status, Status::VerifiedNumeric, "{:?} {:?}", v.notes, v.trace);
        let same = claim(tgt.clone(), tgt.clone(), ParamBasis::identity(4));
        assert_eq!(check_degeneration(&same, &vars, &cfg).status, Status::VerifiedExact);
    }

    #[test]
    fn moved_constants_scale_and_round_trip() {
        let a = alg("AA3.1", 3, &[(1, 1, 2, 1), (1, 2, 3, 1), (2, 1, 3, -1)]);
        let t = RatFun::var(0);
        let rows: Vec<Vec<RatFun>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { t.clone() } else { RatFun::zero() })
                    .collect()
            })
            .collect();
        let c = moved_constants_exact(&a, &rows).unwrap();
        for (x, y) in c.iter().zip(a.constants()) {
            assert_eq!(x, &(y * &t));
        }
    }

    #[test]
    fn tangent_rank_matches_orbit_dim() {
        let a = alg("AA3.1", 3, &[(1, 1, 2, 1), (1, 2, 3, 1), (2, 1, 3, -1)]);
        let c = a.as_constant().unwrap();
        assert_eq!(tangent_rank(&c, &[]), c.orbit_dim());
        assert_eq!(Algebra::<Cyclo12>::zero("0", 3).orbit_dim(), 0);
    }
}
