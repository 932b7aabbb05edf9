//! Evaluation of [`Expr`] trees, exactly into rational functions or
//! numerically into [`Value`]s that stay exact for as long as possible.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};

use astro_float::Consts;
use num_traits::Signed;

use super::bigcomplex::BigComplex;
use super::cyclo::Cyclo12;
use super::expr::Expr;
use super::poly::Poly;
use super::ratfun::RatFun;
use super::rational::{exact_root, Rational};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound symbol '{0}'")]
    Unbound(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("no exact value for {0}")]
    NotExact(String),
}

/// A scalar that is exact in `Q(ζ₁₂)` when possible.
#[derive(Clone, Debug)]
pub enum Value {
    Exact(Cyclo12),
    Approx(BigComplex),
}

impl Value {
    pub fn to_complex(&self, prec: usize) -> BigComplex {
        match self {
            Value::Exact(c) => BigComplex::from_cyclo(c, prec),
            Value::Approx(z) => z.clone(),
        }
    }

    pub fn as_exact(&self) -> Option<&Cyclo12> {
        match self {
            Value::Exact(c) => Some(c),
            Value::Approx(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(c) => c.is_zero(),
            Value::Approx(z) => z.is_zero(),
        }
    }
}

/// Exact `d`-th root (principal branch) of a rational, if it lies in
/// `Q(ζ₁₂)`. Negative radicands work for `d ∈ {2, 3, 6}` via `e^{iπ/d} = ζ^{6/d}`.
pub fn exact_root_cyclo(c: &Cyclo12, d: u64) -> Option<Cyclo12> {
    if d == 1 {
        return Some(c.clone());
    }
    let q = c.as_rational()?;
    let k = u32::try_from(d).ok()?;
    if !q.is_negative() {
        return exact_root(q, k).map(Cyclo12::from_rational);
    }
    if 6 % d != 0 {
        return None;
    }
    let r = exact_root(&-q.clone(), k)?;
    Some(Cyclo12::zeta().pow(6 / k).scale(&r))
}

/// Bindings for exact evaluation into `RatFun`.
#[derive(Clone, Debug, Default)]
pub struct ExactEnv {
    pub bindings: BTreeMap<String, RatFun>,
}

impl ExactEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, name: &str, v: RatFun) -> &mut Self {
        self.bindings.insert(name.to_string(), v);
        self
    }
}

/// `a^(1/d)` for a rational function whose numerator is a monomial and whose
/// denominator is a monomial, with every exponent divisible by `d`.
fn ratfun_root(a: &RatFun, d: u64) -> Option<RatFun> {
    if a.is_zero() {
        return Some(RatFun::zero());
    }
    let (nm, nc) = a.num().as_monomial()?;
    let (dm, dc) = a.den().as_monomial()?;
    let dd = d as u32;
    if nm.iter().chain(dm.iter()).any(|e| e % dd != 0) {
        return None;
    }
    let c = &(nc.clone()) * &dc.inv()?;
    let root = exact_root_cyclo(&c, d)?;
    let n = Poly::monomial(root, nm.iter().map(|e| e / dd).collect());
    let den = Poly::monomial(Cyclo12::one(), dm.iter().map(|e| e / dd).collect());
    RatFun::new(n, den)
}

pub fn eval_exact_ratfun(e: &Expr, env: &ExactEnv) -> Result<RatFun, EvalError> {
    let r = |x: &Expr| eval_exact_ratfun(x, env);
    Ok(match e {
        Expr::Num(q) => RatFun::from_rational(q.clone()),
        Expr::I => RatFun::constant(Cyclo12::i()),
        Expr::W => RatFun::constant(Cyclo12::omega()),
        Expr::Sym(s) => env
            .bindings
            .get(s)
            .cloned()
            .ok_or_else(|| EvalError::Unbound(s.clone()))?,
        Expr::Neg(a) => -r(a)?,
        Expr::Add(a, b) => &r(a)? + &r(b)?,
        Expr::Sub(a, b) => &r(a)? - &r(b)?,
        Expr::Mul(a, b) => &r(a)? * &r(b)?,
        Expr::Div(a, b) => &r(a)? * &r(b)?.inv().ok_or(EvalError::DivisionByZero)?,
        Expr::Pow(a, n, d) => {
            let base = r(a)?;
            let base = if *d == 1 {
                base
            } else {
                ratfun_root(&base, *d).ok_or_else(|| EvalError::NotExact(e.to_string()))?
            };
            base.pow(*n).ok_or(EvalError::DivisionByZero)?
        }
        Expr::Sqrt(a) => ratfun_root(&r(a)?, 2).ok_or_else(|| EvalError::NotExact(e.to_string()))?,
    })
}

/// Numeric environment: working precision, bindings and constant caches.
pub struct NumEnv {
    pub prec: usize,
    pub bindings: BTreeMap<String, Value>,
    /// Set when an addition loses more than half of the working precision.
    pub underflow: bool,
    consts: Consts,
}

impl NumEnv {
    pub fn new(prec: usize) -> Self {
        NumEnv {
            prec,
            bindings: BTreeMap::new(),
            underflow: false,
            consts: Consts::new().expect("constant cache"),
        }
    }

    pub fn bind(&mut self, name: &str, v: Value) -> &mut Self {
        self.bindings.insert(name.to_string(), v);
        self
    }

    pub fn consts(&mut self) -> &mut Consts {
        &mut self.consts
    }
}

fn approx_binop(
    a: Value,
    b: Value,
    env: &mut NumEnv,
    exact: impl Fn(&Cyclo12, &Cyclo12) -> Option<Cyclo12>,
    approx: impl Fn(&BigComplex, &BigComplex) -> Option<(BigComplex, bool)>,
) -> Result<Value, EvalError> {
    if let (Value::Exact(x), Value::Exact(y)) = (&a, &b) {
        return exact(x, y).map(Value::Exact).ok_or(EvalError::DivisionByZero);
    }
    let (x, y) = (a.to_complex(env.prec), b.to_complex(env.prec));
    let (v, lost) = approx(&x, &y).ok_or(EvalError::DivisionByZero)?;
    env.underflow |= lost;
    Ok(Value::Approx(v))
}

fn value_root_pow(v: Value, n: i64, d: u64, env: &mut NumEnv) -> Result<Value, EvalError> {
    if let Value::Exact(c) = &v {
        if let Some(root) = exact_root_cyclo(c, d) {
            return root.powi(n).map(Value::Exact).ok_or(EvalError::DivisionByZero);
        }
    }
    let z = v.to_complex(env.prec);
    z.pow_rational(n, d, env.consts())
        .map(Value::Approx)
        .ok_or(EvalError::DivisionByZero)
}

pub fn eval_value(e: &Expr, env: &mut NumEnv) -> Result<Value, EvalError> {
    Ok(match e {
        Expr::Num(q) => Value::Exact(Cyclo12::from_rational(q.clone())),
        Expr::I => Value::Exact(Cyclo12::i()),
        Expr::W => Value::Exact(Cyclo12::omega()),
        Expr::Sym(s) => env
            .bindings
            .get(s)
            .cloned()
            .ok_or_else(|| EvalError::Unbound(s.clone()))?,
        Expr::Neg(a) => match eval_value(a, env)? {
            Value::Exact(c) => Value::Exact(-c),
            Value::Approx(z) => Value::Approx(-z),
        },
        Expr::Add(a, b) => {
            let (x, y) = (eval_value(a, env)?, eval_value(b, env)?);
            approx_binop(x, y, env, |p, q| Some(p + q), |p, q| Some(p.add_checked(q)))?
        }
        Expr::Sub(a, b) => {
            let (x, y) = (eval_value(a, env)?, eval_value(b, env)?);
            approx_binop(x, y, env, |p, q| Some(p - q), |p, q| Some(p.sub_checked(q)))?
        }
        Expr::Mul(a, b) => {
            let (x, y) = (eval_value(a, env)?, eval_value(b, env)?);
            approx_binop(x, y, env, |p, q| Some(p * q), |p, q| Some((p * q, false)))?
        }
        Expr::Div(a, b) => {
            let (x, y) = (eval_value(a, env)?, eval_value(b, env)?);
            approx_binop(
                x,
                y,
                env,
                |p, q| Some(p * &q.inv()?),
                |p, q| Some((p * &q.recip()?, false)),
            )?
        }
        Expr::Pow(a, n, d) => {
            let v = eval_value(a, env)?;
            value_root_pow(v, *n, *d, env)?
        }
        Expr::Sqrt(a) => {
            let v = eval_value(a, env)?;
            value_root_pow(v, 1, 2, env)?
        }
    })
}

/// Exact value in `Q(ζ₁₂)` of a closed expression, if it has one.
pub fn eval_cyclo(e: &Expr, bindings: &BTreeMap<String, Cyclo12>) -> Result<Cyclo12, EvalError> {
    let mut env = ExactEnv::new();
    for (k, v) in bindings {
        env.bind(k, RatFun::constant(v.clone()));
    }
    let r = eval_exact_ratfun(e, &env)?;
    r.as_constant().ok_or_else(|| EvalError::NotExact(e.to_string()))
}

/// Rational value of a closed expression, if it is rational.
pub fn eval_rational(e: &Expr) -> Result<Rational, EvalError> {
    let c = eval_cyclo(e, &BTreeMap::new())?;
    c.as_rational()
        .cloned()
        .ok_or_else(|| EvalError::NotExact(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::expr::parse_expr;
    use crate::scalars::rational::rat;

    #[test]
    fn exact_radicals() {
        let e = parse_expr("sqrt(-t*(8 + 7*t))", &["t"]).unwrap();
        let mut b = BTreeMap::new();
        b.insert("t".into(), Cyclo12::from_rational(rat(-8, 7)));
        assert!(eval_cyclo(&e, &b).unwrap().is_zero());
        b.insert("t".into(), Cyclo12::from_rational(rat(-1, 8)));
        // radicand 57/64 is not a square
        assert!(eval_cyclo(&e, &b).is_err());
        b.insert("t".into(), Cyclo12::from_rational(rat(-8, 11)));
        assert_eq!(eval_cyclo(&e, &b).unwrap(), Cyclo12::from_rational(rat(16, 11)));
        b.insert("t".into(), Cyclo12::from_int(1));
        // sqrt(-15) = i*sqrt(15) is outside the field
        assert!(eval_cyclo(&e, &b).is_err());
    }

    #[test]
    fn fractional_powers_of_substituted_parameter() {
        let e = parse_expr("1/(2*t^(5/6))", &["t"]).unwrap();
        let mut env = ExactEnv::new();
        env.bind("t", RatFun::from_poly(Poly::var(0).pow(12)));
        let r = eval_exact_ratfun(&e, &env).unwrap();
        let want = RatFun::new(Poly::from_rational(rat(1, 2)), Poly::var(0).pow(10)).unwrap();
        assert_eq!(r, want);
        env.bind("t", RatFun::var(0));
        assert!(matches!(eval_exact_ratfun(&e, &env), Err(EvalError::NotExact(_))));
    }

    #[test]
    fn numeric_agrees_with_exact() {
        let e = parse_expr("(t^2 - 1)/(t + 1) - t", &["t"]).unwrap();
        let mut env = NumEnv::new(128);
        env.bind("t", Value::Exact(Cyclo12::from_rational(rat(3, 7))));
        match eval_value(&e, &mut env).unwrap() {
            Value::Exact(c) => assert_eq!(c, Cyclo12::from_int(-1)),
            Value::Approx(_) => panic!("should stay exact"),
        }
        let s = parse_expr("sqrt(2)^2", &[]).unwrap();
        let v = eval_value(&s, &mut env).unwrap().to_complex(128);
        let (re, im) = v.to_f64_pair();
        assert!((re - 2.0).abs() < 1e-15 && im.abs() < 1e-15);
        let u = parse_expr("sqrt(-4)", &[]).unwrap();
        assert_eq!(
            eval_value(&u, &mut env).unwrap().as_exact(),
            Some(&Cyclo12::i().scale(&rat(2, 1)))
        );
    }
}
