//! Rational functions `p/q` with `p, q` sparse polynomials over `Q(ζ₁₂)`.
//!
//! Normal form: the denominator is nonzero with leading coefficient 1, the
//! common monomial content is cancelled, and exact polynomial division is
//! attempted. For univariate data a full gcd is cancelled as well. Equality is
//! decided by cross-multiplication, so the representation need not be unique.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use super::cyclo::Cyclo12;
use super::poly::{Poly, Vars};
use super::rational::Rational;

#[derive(Clone, Debug)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn zero() -> Self {
        RatFun::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        RatFun::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Cyclo12) -> Self {
        RatFun::from_poly(Poly::constant(c))
    }

    pub fn from_rational(q: Rational) -> Self {
        RatFun::constant(Cyclo12::from_rational(q))
    }

    pub fn from_int(n: i64) -> Self {
        RatFun::constant(Cyclo12::from_int(n))
    }

    pub fn var(i: usize) -> Self {
        RatFun::from_poly(Poly::var(i))
    }

    /// `num/den`, or `None` if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(RatFun { num, den }.normalized())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Cyclo12> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(&n * &d.inv()?)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        Some(
            RatFun {
                num: self.den.clone(),
                den: self.num.clone(),
            }
            .normalized(),
        )
    }

    pub fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Some(RatFun {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn scale(&self, c: &Cyclo12) -> Self {
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
        .normalized()
    }

    pub fn derivative(&self, var: usize) -> Self {
        let n = &(&self.num.derivative(var) * &self.den) - &(&self.num * &self.den.derivative(var));
        RatFun {
            num: n,
            den: &self.den * &self.den,
        }
        .normalized()
    }

    /// Substitutes rational functions for variables.
    pub fn substitute(&self, subs: &BTreeMap<usize, RatFun>) -> Option<RatFun> {
        let f = |p: &Poly| {
            p.eval_with(
                RatFun::zero(),
                |i| subs.get(&i).cloned().unwrap_or_else(|| RatFun::var(i)),
                RatFun::constant,
            )
        };
        let d = f(&self.den);
        if d.is_zero() {
            return None;
        }
        Some(&f(&self.num) * &d.inv()?)
    }

    /// Evaluates at a point of `Q(ζ₁₂)`. `None` if the denominator vanishes.
    pub fn eval_cyclo(&self, point: &[(usize, Cyclo12)]) -> Option<Cyclo12> {
        let d = self.den.eval_cyclo(point);
        let n = self.num.eval_cyclo(point);
        Some(&n * &d.inv()?)
    }

    /// Pivot weight: number of terms plus total degree.
    pub fn weight(&self) -> usize {
        self.num.num_terms()
            + self.den.num_terms()
            + self.num.total_degree().unwrap_or(0) as usize
            + self.den.total_degree().unwrap_or(0) as usize
    }

    pub fn to_expr_string(&self, vars: &Vars) -> String {
        let n = self.num.to_expr_string(vars);
        if self.den.is_one() {
            return n;
        }
        let d = self.den.to_expr_string(vars);
        let wrap = |s: String, simple: bool| if simple { s } else { alloc::format!("({s})") };
        let n_simple = self.num.num_terms() <= 1 && !n.starts_with('-') && !n.contains('*');
        let d_simple = self.den.num_terms() <= 1 && !d.contains('*') && !d.contains('/');
        alloc::format!("{}/{}", wrap(n, n_simple), wrap(d, d_simple))
    }

    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            self.den = Poly::one();
            return self;
        }
        if let Some(c) = self.den.as_constant() {
            let ci = c.inv().expect("nonzero denominator");
            return RatFun {
                num: self.num.scale(&ci),
                den: Poly::one(),
            };
        }
        let gn = self.num.monomial_content();
        let gd = self.den.monomial_content();
        let g: Vec<u32> = gn.iter().zip(gd.iter()).map(|(a, b)| *a.min(b)).collect();
        if g.iter().any(|e| *e > 0) {
            self.num = self.num.div_monomial(&g);
            self.den = self.den.div_monomial(&g);
        }
        if let Some(q) = self.num.div_exact(&self.den) {
            return RatFun::from_poly(q);
        }
        if let Some(v) = univariate_var(&self.num, &self.den) {
            let g = ugcd(&self.num, &self.den, v);
            if g.degree_in(v).unwrap_or(0) > 0 {
                self.num = self.num.div_exact(&g).expect("gcd divides");
                self.den = self.den.div_exact(&g).expect("gcd divides");
            }
        }
        let lc = self.den.leading().map(|(_, c)| c.clone()).expect("nonzero");
        if !lc.is_one() {
            let li = lc.inv().expect("nonzero");
            self.num = self.num.scale(&li);
            self.den = self.den.scale(&li);
        }
        self
    }
}

/// Common single variable of `a` and `b`, if both involve at most that one.
fn univariate_var(a: &Poly, b: &Poly) -> Option<usize> {
    let mut vs = a.vars();
    for v in b.vars() {
        if !vs.contains(&v) {
            vs.push(v);
        }
    }
    (vs.len() == 1).then(|| vs[0])
}

fn dense(p: &Poly, v: usize) -> Vec<Cyclo12> {
    let d = p.degree_in(v).unwrap_or(0) as usize;
    let mut out = vec![Cyclo12::zero(); d + 1];
    for (m, c) in p.terms() {
        out[m.get(v).copied().unwrap_or(0) as usize] = c.clone();
    }
    out
}

fn sparse(c: &[Cyclo12], v: usize) -> Poly {
    let mut p = Poly::zero();
    for (k, x) in c.iter().enumerate() {
        p = &p + &Poly::monomial(x.clone(), Poly::var_mono(v, k as u32));
    }
    p
}

fn strip(mut c: Vec<Cyclo12>) -> Vec<Cyclo12> {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    c
}

/// Monic gcd of two univariate polynomials in variable `v`.
fn ugcd(a: &Poly, b: &Poly, v: usize) -> Poly {
    let mut x = strip(dense(a, v));
    let mut y = strip(dense(b, v));
    while !y.is_empty() {
        let r = urem(&x, &y);
        x = y;
        y = r;
    }
    if x.is_empty() {
        return Poly::one();
    }
    let li = x.last().unwrap().inv().unwrap();
    sparse(&x.iter().map(|c| c * &li).collect::<Vec<_>>(), v)
}

fn urem(a: &[Cyclo12], b: &[Cyclo12]) -> Vec<Cyclo12> {
    let mut r = a.to_vec();
    let bl = b.last().unwrap().inv().unwrap();
    while r.len() >= b.len() {
        let f = r.last().unwrap() * &bl;
        let shift = r.len() - b.len();
        for (k, bc) in b.iter().enumerate() {
            r[shift + k] = &r[shift + k] - &(&f * bc);
        }
        r.pop();
        r = strip(r);
    }
    r
}

impl PartialEq for RatFun {
    fn eq(&self, o: &Self) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        &self.num * &o.den == &o.num * &self.den
    }
}

impl<'a> Add<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn add(self, o: &'a RatFun) -> RatFun {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFun {
                num: &self.num + &o.num,
                den: self.den.clone(),
            }
            .normalized();
        }
        if o.den.is_one() {
            return RatFun {
                num: &self.num + &(&o.num * &self.den),
                den: self.den.clone(),
            }
            .normalized();
        }
        if self.den.is_one() {
            return RatFun {
                num: &(&self.num * &o.den) + &o.num,
                den: o.den.clone(),
            }
            .normalized();
        }
        RatFun {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
        .normalized()
    }
}

impl<'a> Sub<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn sub(self, o: &'a RatFun) -> RatFun {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn mul(self, o: &'a RatFun) -> RatFun {
        if self.is_zero() || o.is_zero() {
            return RatFun::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFun::from_poly(&self.num * &o.num);
        }
        // Cross-cancel before multiplying out.
        let (mut n1, mut d2) = (self.num.clone(), o.den.clone());
        let (mut n2, mut d1) = (o.num.clone(), self.den.clone());
        if !d2.is_one() {
            if let Some(q) = n1.div_exact(&d2) {
                n1 = q;
                d2 = Poly::one();
            }
        }
        if !d1.is_one() {
            if let Some(q) = n2.div_exact(&d1) {
                n2 = q;
                d1 = Poly::one();
            }
        }
        RatFun {
            num: &n1 * &n2,
            den: &d1 * &d2,
        }
        .normalized()
    }
}

impl Add for RatFun {
    type Output = RatFun;
    fn add(self, o: RatFun) -> RatFun {
        &self + &o
    }
}

impl Sub for RatFun {
    type Output = RatFun;
    fn sub(self, o: RatFun) -> RatFun {
        &self - &o
    }
}

impl Mul for RatFun {
    type Output = RatFun;
    fn mul(self, o: RatFun) -> RatFun {
        &self * &o
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -(self.clone())
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> Self {
        RatFun::from_poly(p)
    }
}

impl From<Cyclo12> for RatFun {
    fn from(c: Cyclo12) -> Self {
        RatFun::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation() {
        let x = RatFun::var(0);
        let one = RatFun::one();
        let a = &(&x * &x) - &one;
        let b = &x - &one;
        let q = &a * &b.inv().unwrap();
        assert!(q.is_poly());
        assert_eq!(q, &x + &one);
        // gcd cancellation when no exact division is possible
        let r = &(&(&x + &one) * &(&x + &RatFun::from_int(2)))
            * &(&(&x + &one) * &(&x - &RatFun::from_int(3))).inv().unwrap();
        assert_eq!(r.den().degree_in(0), Some(1));
    }

    #[test]
    fn field_identities() {
        let x = RatFun::var(0);
        let y = RatFun::var(1);
        let f = &(&x + &y) * &(&x - &y).inv().unwrap();
        let g = f.inv().unwrap();
        assert!((&f * &g).is_one());
        assert!((&f - &f).is_zero());
        let h = &f + &g;
        assert_eq!(&h - &g, f);
    }

    #[test]
    fn derivative_quotient_rule() {
        let x = RatFun::var(0);
        let f = x.inv().unwrap();
        assert_eq!(f.derivative(0), -(&x * &x).inv().unwrap());
    }
}
