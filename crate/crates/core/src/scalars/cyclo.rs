//! The cyclotomic field `Q(ζ)` with `ζ` a primitive twelfth root of unity.
//!
//! Elements are stored in the power basis `1, ζ, ζ², ζ³` modulo the
//! cyclotomic polynomial `ζ⁴ − ζ² + 1`. The imaginary unit is `ζ³` and the
//! primitive cube root of unity `ω = e^{2πi/3}` is `ζ⁴ = ζ² − 1`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{fmt_rational, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cyclo12 {
    c: [Rational; 4],
}

impl Cyclo12 {
    pub fn from_coeffs(c: [Rational; 4]) -> Self {
        Cyclo12 { c }
    }

    pub fn coeffs(&self) -> &[Rational; 4] {
        &self.c
    }

    pub fn from_rational(q: Rational) -> Self {
        Cyclo12 {
            c: [q, Rational::zero(), Rational::zero(), Rational::zero()],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(super::rational::int(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `ζ = e^{iπ/6}`.
    pub fn zeta() -> Self {
        let z = Rational::zero();
        Cyclo12 {
            c: [z.clone(), Rational::one(), z.clone(), z],
        }
    }

    /// The imaginary unit `i = ζ³`.
    pub fn i() -> Self {
        let z = Rational::zero();
        Cyclo12 {
            c: [z.clone(), z.clone(), z, Rational::one()],
        }
    }

    /// `ω = ζ² − 1`, a primitive cube root of unity.
    pub fn omega() -> Self {
        let z = Rational::zero();
        Cyclo12 {
            c: [-Rational::one(), z.clone(), Rational::one(), z],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.c[0])
    }

    /// Galois conjugate `ζ ↦ ζ^k` for `k ∈ {1, 5, 7, 11}`.
    pub fn conjugate(&self, k: u32) -> Self {
        let img = match k % 12 {
            1 => return self.clone(),
            5 => Cyclo12::zeta().pow(5),
            7 => -Cyclo12::zeta(),
            11 => Cyclo12::zeta().pow(11),
            _ => panic!("ζ^{k} is not a primitive twelfth root of unity"),
        };
        let mut acc = Cyclo12::from_rational(self.c[0].clone());
        let mut p = Cyclo12::one();
        for j in 1..4 {
            p = &p * &img;
            acc = acc + p.scale(&self.c[j]);
        }
        acc
    }

    /// Complex conjugation, which is `ζ ↦ ζ¹¹`.
    pub fn complex_conj(&self) -> Self {
        self.conjugate(11)
    }

    /// Field norm down to `Q`.
    pub fn norm(&self) -> Rational {
        let n = self * &self.conjugate(5) * &self.conjugate(7) * &self.conjugate(11);
        debug_assert!(n.is_rational());
        n.c[0].clone()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.is_rational() {
            return Some(Cyclo12::from_rational(self.c[0].recip()));
        }
        let rest = self.conjugate(5) * &self.conjugate(7) * &self.conjugate(11);
        let n = (self * &rest).c[0].clone();
        Some(rest.scale(&n.recip()))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Cyclo12 {
            c: [&self.c[0] * q, &self.c[1] * q, &self.c[2] * q, &self.c[3] * q],
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Cyclo12::one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn powi(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u32))
        } else {
            Some(self.inv()?.pow(e.unsigned_abs() as u32))
        }
    }

    /// Coordinates in the basis `1, i, ω, iω`: `(a, b, c, d)` with
    /// `self = a + b·i + c·ω + d·i·ω`.
    pub fn to_i_omega(&self) -> [Rational; 4] {
        // ζ = −iω, ζ² = 1 + ω, ζ³ = i.
        let [a0, a1, a2, a3] = &self.c;
        [a0 + a2, a3.clone(), a2.clone(), -a1.clone()]
    }

    pub fn from_i_omega(v: [Rational; 4]) -> Self {
        let [a, b, c, d] = v;
        // a + b i + c ω + d iω = a + b ζ³ + c(ζ² − 1) − d ζ
        Cyclo12 { c: [a - &c, -d, c, b] }
    }

    /// Weight used by pivot selection: total size of the rational coordinates.
    pub fn weight(&self) -> usize {
        self.c
            .iter()
            .filter(|q| !q.is_zero())
            .map(|q| (q.numer().bits() + q.denom().bits()) as usize)
            .sum()
    }

    /// Renders the element in expression syntax using `i` and `w`.
    pub fn to_expr_string(&self) -> String {
        let [a, b, c, d] = self.to_i_omega();
        let mut parts: Vec<(Rational, &str)> = Vec::new();
        for (q, unit) in [(a, ""), (b, "i"), (c, "w"), (d, "i*w")] {
            if !q.is_zero() {
                parts.push((q, unit));
            }
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (q, unit)) in parts.iter().enumerate() {
            let neg = *q < Rational::zero();
            let mag = if neg { -q.clone() } else { q.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if unit.is_empty() {
                out.push_str(&fmt_rational(&mag));
            } else if mag.is_one() {
                out.push_str(unit);
            } else if mag.denom().is_one() {
                out.push_str(&alloc::format!("{}*{}", fmt_rational(&mag), unit));
            } else {
                out.push_str(&alloc::format!("({})*{}", fmt_rational(&mag), unit));
            }
        }
        out
    }

    fn mul_raw(&self, o: &Self) -> Self {
        if o.is_rational() {
            return self.scale(&o.c[0]);
        }
        if self.is_rational() {
            return o.scale(&self.c[0]);
        }
        let mut p: [Rational; 7] = Default::default();
        for i in 0..4 {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if o.c[j].is_zero() {
                    continue;
                }
                p[i + j] += &self.c[i] * &o.c[j];
            }
        }
        // ζ⁶ = −1, ζ⁵ = ζ³ − ζ, ζ⁴ = ζ² − 1.
        let [p0, p1, p2, p3, p4, p5, p6] = p;
        Cyclo12 {
            c: [p0 - &p4 - &p6, p1 - &p5, p2 + &p4, p3 + p5],
        }
    }
}

impl Default for Cyclo12 {
    fn default() -> Self {
        Cyclo12::zero()
    }
}

impl fmt::Display for Cyclo12 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

impl From<Rational> for Cyclo12 {
    fn from(q: Rational) -> Self {
        Cyclo12::from_rational(q)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a Cyclo12> for &'a Cyclo12 {
            type Output = Cyclo12;
            fn $m(self, o: &'a Cyclo12) -> Cyclo12 {
                let f: fn(&Cyclo12, &Cyclo12) -> Cyclo12 = $body;
                f(self, o)
            }
        }
        impl $tr<Cyclo12> for Cyclo12 {
            type Output = Cyclo12;
            fn $m(self, o: Cyclo12) -> Cyclo12 {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Cyclo12> for Cyclo12 {
            type Output = Cyclo12;
            fn $m(self, o: &'a Cyclo12) -> Cyclo12 {
                (&self).$m(o)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| Cyclo12 {
    c: [
        &a.c[0] + &b.c[0],
        &a.c[1] + &b.c[1],
        &a.c[2] + &b.c[2],
        &a.c[3] + &b.c[3],
    ],
});
forward_binop!(Sub, sub, |a, b| Cyclo12 {
    c: [
        &a.c[0] - &b.c[0],
        &a.c[1] - &b.c[1],
        &a.c[2] - &b.c[2],
        &a.c[3] - &b.c[3],
    ],
});
forward_binop!(Mul, mul, |a, b| a.mul_raw(b));

impl Neg for Cyclo12 {
    type Output = Cyclo12;
    fn neg(self) -> Cyclo12 {
        let [a, b, c, d] = self.c;
        Cyclo12 { c: [-a, -b, -c, -d] }
    }
}

impl Neg for &Cyclo12 {
    type Output = Cyclo12;
    fn neg(self) -> Cyclo12 {
        -(self.clone())
    }
}
