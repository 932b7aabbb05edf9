//! Sparse multivariate polynomials with coefficients in `Q(ζ₁₂)`.
//!
//! Variables are plain indices. A [`Vars`] table maps indices to names and is
//! only needed for parsing and printing. Monomials are exponent vectors with
//! trailing zeros trimmed, so the derived ordering on `Vec<u32>` is the
//! lexicographic order with variable 0 most significant.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use super::cyclo::Cyclo12;
use super::rational::Rational;

pub type Monomial = Vec<u32>;

/// Symbol table shared by every polynomial of one computation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vars {
    names: Vec<String>,
}

impl Vars {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<I: IntoIterator<Item = S>, S: Into<String>>(names: I) -> Self {
        let mut v = Vars::new();
        for n in names {
            v.intern(&n.into());
        }
        v
    }

    /// Returns the index of `name`, adding it if necessary.
    pub fn intern(&mut self, name: &str) -> usize {
        if let Some(i) = self.index(name) {
            return i;
        }
        self.names.push(name.to_string());
        self.names.len() - 1
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    let n = a.len().max(b.len());
    let mut m = vec![0; n];
    for (i, e) in m.iter_mut().enumerate() {
        *e = a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0);
    }
    m
}

fn mono_div(a: &[u32], b: &[u32]) -> Option<Monomial> {
    if b.len() > a.len() {
        // trimmed: b has a nonzero exponent beyond a's support
        return None;
    }
    let mut m = a.to_vec();
    for (i, e) in b.iter().enumerate() {
        if m[i] < *e {
            return None;
        }
        m[i] -= e;
    }
    Some(trim(m))
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Cyclo12>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Cyclo12::one())
    }

    pub fn constant(c: Cyclo12) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn from_rational(q: Rational) -> Self {
        Poly::constant(Cyclo12::from_rational(q))
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(Cyclo12::from_int(n))
    }

    pub fn var(i: usize) -> Self {
        Poly::monomial(Cyclo12::one(), Poly::var_mono(i, 1))
    }

    pub fn var_mono(i: usize, e: u32) -> Monomial {
        let mut m = vec![0; i + 1];
        m[i] = e;
        trim(m)
    }

    pub fn monomial(c: Cyclo12, m: Monomial) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(trim(m), c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Cyclo12)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_empty())
    }

    pub fn as_constant(&self) -> Option<Cyclo12> {
        if self.is_zero() {
            Some(Cyclo12::zero())
        } else if self.is_constant() {
            self.terms.get(&Vec::new()).cloned()
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// Whether `self` is a single term.
    pub fn as_monomial(&self) -> Option<(&Monomial, &Cyclo12)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Leading term in lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Cyclo12)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: Cyclo12) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &Cyclo12) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &[u32], c: &Cyclo12) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, v)| (mono_mul(k, m), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Total degree (`None` for the zero polynomial).
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.get(var).copied().unwrap_or(0)).max()
    }

    /// Lowest power of `var` that occurs (`None` for zero).
    pub fn order_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.get(var).copied().unwrap_or(0)).min()
    }

    /// Coefficient of `var^k`, as a polynomial in the other variables.
    pub fn coeff_in(&self, var: usize, k: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.get(var).copied().unwrap_or(0) == k {
                let mut m2 = m.clone();
                if var < m2.len() {
                    m2[var] = 0;
                }
                out.add_term(trim(m2), c.clone());
            }
        }
        out
    }

    /// Variables that actually occur.
    pub fn vars(&self) -> Vec<usize> {
        let mut seen = Vec::new();
        for m in self.terms.keys() {
            for (i, e) in m.iter().enumerate() {
                if *e > 0 && !seen.contains(&i) {
                    seen.push(i);
                }
            }
        }
        seen.sort_unstable();
        seen
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Vec::new();
        };
        let mut g = first.clone();
        for m in it {
            g.truncate(m.len());
            for (i, e) in g.iter_mut().enumerate() {
                *e = (*e).min(m[i]);
            }
        }
        trim(g)
    }

    /// Divides every exponent vector by the monomial `m`, which must divide
    /// every term.
    pub fn div_monomial(&self, m: &[u32]) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (mono_div(k, m).expect("monomial divides"), v.clone()))
                .collect(),
        }
    }

    /// Exact division. Returns `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        let dm = dm.clone();
        let dinv = dc.inv()?;
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.inv()?));
        }
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((rm, rc)) = r.leading() {
            let m = mono_div(rm, &dm)?;
            let c = rc * &dinv;
            r = &r - &d.mul_monomial(&m, &c);
            q.add_term(m, c);
        }
        Some(q)
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.get(var).copied().unwrap_or(0);
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[var] -= 1;
            out.add_term(trim(m2), c.scale(&super::rational::int(e as i64)));
        }
        out
    }

    /// Substitutes polynomials for some variables.
    pub fn substitute(&self, subs: &BTreeMap<usize, Poly>) -> Poly {
        self.eval_with(
            Poly::zero(),
            |i| subs.get(&i).cloned().unwrap_or_else(|| Poly::var(i)),
            Poly::constant,
        )
    }

    /// Evaluates at a point with values in `Q(ζ₁₂)`. Missing variables are
    /// treated as zero.
    pub fn eval_cyclo(&self, point: &[(usize, Cyclo12)]) -> Cyclo12 {
        let mut acc = Cyclo12::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let v = point
                    .iter()
                    .find(|(j, _)| *j == i)
                    .map(|(_, v)| v.clone())
                    .unwrap_or_else(Cyclo12::zero);
                t = &t * &v.pow(*e);
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Generic evaluation in any commutative ring `R` given images of the
    /// variables and of the coefficients.
    pub fn eval_with<R, FV, FC>(&self, zero: R, var: FV, coeff: FC) -> R
    where
        R: Clone + Add<Output = R> + Mul<Output = R>,
        FV: Fn(usize) -> R,
        FC: Fn(Cyclo12) -> R,
    {
        let mut cache: BTreeMap<(usize, u32), R> = BTreeMap::new();
        let mut acc = zero;
        for (m, c) in &self.terms {
            let mut t = coeff(c.clone());
            for (i, e) in m.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let p = cache
                    .entry((i, *e))
                    .or_insert_with(|| {
                        let v = var(i);
                        let mut r = v.clone();
                        for _ in 1..*e {
                            r = r * v.clone();
                        }
                        r
                    })
                    .clone();
                t = t * p;
            }
            acc = acc + t;
        }
        acc
    }

    /// Renders the polynomial in expression syntax.
    pub fn to_expr_string(&self, vars: &Vars) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| {
                    if *e == 1 {
                        vars.name(i).to_string()
                    } else {
                        alloc::format!("{}^{}", vars.name(i), e)
                    }
                })
                .collect();
            let (neg, mag) = split_sign(c);
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let cs = mag.to_expr_string();
            let simple = mag.is_rational();
            if mono.is_empty() {
                if simple {
                    out.push_str(&cs);
                } else {
                    out.push('(');
                    out.push_str(&cs);
                    out.push(')');
                }
            } else {
                if !mag.is_one() {
                    if simple && mag.as_rational().is_some_and(|q| q.denom() == &1.into()) {
                        out.push_str(&cs);
                    } else {
                        out.push('(');
                        out.push_str(&cs);
                        out.push(')');
                    }
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

/// Splits a coefficient into a sign and a magnitude when it is rational.
fn split_sign(c: &Cyclo12) -> (bool, Cyclo12) {
    match c.as_rational() {
        Some(q) if *q < Rational::from_integer(0.into()) => (true, -c.clone()),
        _ => (false, c.clone()),
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &'a Poly) -> Poly {
        let (big, small) = if self.terms.len() >= o.terms.len() {
            (self, o)
        } else {
            (o, self)
        };
        let mut r = big.clone();
        for (m, c) in &small.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &'a Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c);
        }
        r
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &'a Poly) -> Poly {
        let mut r = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(mono_mul(m1, m2), c1 * c2);
            }
        }
        r
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -(self.clone())
    }
}
