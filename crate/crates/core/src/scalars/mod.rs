//! Scalar types: rationals, the twelfth cyclotomic field, multivariate
//! polynomials and rational functions over it, symbolic expressions and
//! arbitrary-precision complex floats.

pub mod bigcomplex;
pub mod cyclo;
pub mod eval;
pub mod expr;
pub mod poly;
pub mod ratfun;
pub mod rational;

pub use bigcomplex::BigComplex;
pub use cyclo::Cyclo12;
pub use eval::{eval_cyclo, eval_exact_ratfun, eval_rational, eval_value, EvalError, ExactEnv, NumEnv, Value};
pub use expr::{parse_expr, Expr, ParseError};
pub use poly::{Monomial, Poly, Vars};
pub use ratfun::RatFun;
pub use rational::Rational;
