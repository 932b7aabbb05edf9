//! Arbitrary-precision complex numbers on top of `astro_float::BigFloat`.
//!
//! Every value carries its working precision in bits. Binary operations round
//! to the larger of the two precisions. Branches are principal throughout.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigInt;
use num_traits::Zero;

use super::cyclo::Cyclo12;
use super::rational::Rational;

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Clone, Debug)]
pub struct BigComplex {
    re: BigFloat,
    im: BigFloat,
    prec: usize,
}

fn bigint_to_float(n: &BigInt, p: usize) -> BigFloat {
    let (sign, digits) = n.to_u64_digits();
    let wide = 64 * (digits.len() + 1);
    let base = BigFloat::from_f64(18446744073709551616.0, 64);
    let mut acc = BigFloat::from_u64(0, 64);
    for d in digits.iter().rev() {
        acc = acc.mul(&base, wide, RM).add(&BigFloat::from_u64(*d, 64), wide, RM);
    }
    if sign == num_bigint::Sign::Minus {
        acc = BigFloat::neg(&acc);
    }
    let mut out = acc;
    let _ = out.set_precision(p, RM);
    out
}

pub fn rational_to_float(q: &Rational, p: usize) -> BigFloat {
    let n = bigint_to_float(q.numer(), p + 64);
    let d = bigint_to_float(q.denom(), p + 64);
    n.div(&d, p, RM)
}

/// Nearest `f64`, for reporting only.
pub fn float_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let Some((m, _, s, e, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let top = *m.last().unwrap_or(&0) as f64 / 18446744073709551616.0;
    let mut v = top;
    let mut e = e as i64;
    while e > 0 {
        let k = e.min(60);
        v *= (1u64 << k) as f64;
        e -= k;
        if v.is_infinite() {
            break;
        }
    }
    while e < 0 {
        let k = (-e).min(60);
        v /= (1u64 << k) as f64;
        e += k;
        if v == 0.0 {
            break;
        }
    }
    if s == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Binary exponent of a nonzero float, `i64::MIN` for zero.
fn exp_of(x: &BigFloat) -> i64 {
    if x.is_zero() {
        i64::MIN
    } else {
        x.exponent().map(|e| e as i64).unwrap_or(i64::MIN)
    }
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat, prec: usize) -> Self {
        BigComplex { re, im, prec }
    }

    pub fn zero(prec: usize) -> Self {
        BigComplex::from_f64(0.0, 0.0, prec)
    }

    pub fn one(prec: usize) -> Self {
        BigComplex::from_f64(1.0, 0.0, prec)
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        BigComplex {
            re: BigFloat::from_f64(re, prec),
            im: BigFloat::from_f64(im, prec),
            prec,
        }
    }

    pub fn from_rational(q: &Rational, prec: usize) -> Self {
        BigComplex {
            re: rational_to_float(q, prec),
            im: BigFloat::from_f64(0.0, prec),
            prec,
        }
    }

    /// Embeds `Q(ζ₁₂)` with `ζ = e^{iπ/6} = √3/2 + i/2`.
    pub fn from_cyclo(c: &Cyclo12, prec: usize) -> Self {
        if let Some(q) = c.as_rational() {
            return BigComplex::from_rational(q, prec);
        }
        let p = prec + 32;
        let half = BigFloat::from_f64(0.5, p);
        let s3 = BigFloat::from_f64(3.0, p).sqrt(p, RM).mul(&half, p, RM);
        let zeta = BigComplex::new(s3, half, p);
        let mut acc = BigComplex::zero(p);
        let mut pw = BigComplex::one(p);
        for (k, q) in c.coeffs().iter().enumerate() {
            if k > 0 {
                pw = &pw * &zeta;
            }
            if !q.is_zero() {
                acc = &acc + &(&pw * &BigComplex::from_rational(q, p));
            }
        }
        acc.with_prec(prec)
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn with_prec(mut self, prec: usize) -> Self {
        let _ = self.re.set_precision(prec, RM);
        let _ = self.im.set_precision(prec, RM);
        self.prec = prec;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.re.is_nan() || self.im.is_nan() || self.re.is_inf() || self.im.is_inf())
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (float_to_f64(&self.re), float_to_f64(&self.im))
    }

    /// Modulus `|z|`.
    pub fn abs(&self) -> BigFloat {
        let p = self.prec;
        let n = self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM);
        n.sqrt(p, RM)
    }

    /// Cheap magnitude `max(|re|, |im|)`, used for pivoting.
    pub fn max_abs(&self) -> BigFloat {
        let a = self.re.abs();
        let b = self.im.abs();
        if a.cmp(&b).unwrap_or(0) >= 0 {
            a
        } else {
            b
        }
    }

    /// Binary exponent of the largest component, `i64::MIN` for zero.
    pub fn magnitude_exp(&self) -> i64 {
        exp_of(&self.re).max(exp_of(&self.im))
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), BigFloat::neg(&self.im), self.prec)
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let p = self.prec;
        let n = self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM);
        Some(BigComplex::new(
            self.re.div(&n, p, RM),
            BigFloat::neg(&self.im).div(&n, p, RM),
            p,
        ))
    }

    /// Sum together with a flag that is set when more than half of the
    /// working precision cancelled.
    pub fn add_checked(&self, o: &Self) -> (Self, bool) {
        let r = self + o;
        (r.clone(), Self::cancelled(self, o, &r))
    }

    pub fn sub_checked(&self, o: &Self) -> (Self, bool) {
        let r = self - o;
        (r.clone(), Self::cancelled(self, o, &r))
    }

    fn cancelled(a: &Self, b: &Self, r: &Self) -> bool {
        if r.is_zero() {
            return false;
        }
        let top = a.magnitude_exp().max(b.magnitude_exp());
        top != i64::MIN && r.magnitude_exp() < top - (r.prec as i64) / 2
    }

    pub fn powi(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut b = base;
        let mut acc = BigComplex::one(self.prec);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            k >>= 1;
            if k > 0 {
                b = &b * &b;
            }
        }
        Some(acc)
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec;
        if self.is_zero() {
            return BigComplex::zero(p);
        }
        let wp = p + 16;
        let r = self.clone().with_prec(wp).abs();
        let two = BigFloat::from_f64(2.0, wp);
        let non_neg_re = !self.re.is_negative();
        if non_neg_re {
            let u = r.add(&self.re, wp, RM).div(&two, wp, RM).sqrt(wp, RM);
            let v = self.im.div(&u.mul(&two, wp, RM), wp, RM);
            BigComplex::new(u, v, wp).with_prec(p)
        } else {
            let mut v = r.sub(&self.re, wp, RM).div(&two, wp, RM).sqrt(wp, RM);
            if self.im.is_negative() {
                v = BigFloat::neg(&v);
            }
            let u = self.im.div(&v.mul(&two, wp, RM), wp, RM);
            BigComplex::new(u, v, wp).with_prec(p)
        }
    }

    /// Principal argument in `(−π, π]`.
    pub fn arg(&self, cc: &mut Consts) -> BigFloat {
        let p = self.prec + 16;
        let pi = cc.pi(p, RM);
        if self.re.is_zero() {
            let half = pi.div(&BigFloat::from_f64(2.0, p), p, RM);
            return if self.im.is_negative() {
                BigFloat::neg(&half)
            } else {
                half
            };
        }
        let a = self.im.div(&self.re, p, RM).atan(p, RM, cc);
        if !self.re.is_negative() {
            a
        } else if self.im.is_negative() {
            a.sub(&pi, p, RM)
        } else {
            a.add(&pi, p, RM)
        }
    }

    /// Principal power `z^{num/den} = exp((num/den)·Log z)`.
    pub fn pow_rational(&self, num: i64, den: u64, cc: &mut Consts) -> Option<Self> {
        if den == 1 {
            return self.powi(num);
        }
        if self.is_zero() {
            return if num > 0 {
                Some(BigComplex::zero(self.prec))
            } else {
                None
            };
        }
        if den == 2 {
            return self.sqrt().powi(num);
        }
        let p = self.prec;
        let wp = p + 32;
        let z = self.clone().with_prec(wp);
        let f = BigFloat::from_i64(num, wp).div(&BigFloat::from_u64(den, wp), wp, RM);
        let ln_r = z.abs().ln(wp, RM, cc);
        let mag = ln_r.mul(&f, wp, RM).exp(wp, RM, cc);
        let th = z.arg(cc).mul(&f, wp, RM);
        let re = mag.mul(&th.cos(wp, RM, cc), wp, RM);
        let im = mag.mul(&th.sin(wp, RM, cc), wp, RM);
        Some(BigComplex::new(re, im, wp).with_prec(p))
    }

    /// `e^{iθ}` for `θ = π·num/den`.
    pub fn unit_root(num: i64, den: u64, prec: usize, cc: &mut Consts) -> Self {
        let wp = prec + 32;
        let th = cc
            .pi(wp, RM)
            .mul(&BigFloat::from_i64(num, wp), wp, RM)
            .div(&BigFloat::from_u64(den, wp), wp, RM);
        BigComplex::new(th.cos(wp, RM, cc), th.sin(wp, RM, cc), wp).with_prec(prec)
    }

    /// Compares `|self|` against a nonnegative real bound.
    pub fn abs_cmp(&self, bound: &BigFloat) -> Ordering {
        match self.abs().cmp(bound) {
            Some(c) if c < 0 => Ordering::Less,
            Some(0) => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.to_f64_pair();
        if b == 0.0 {
            write!(f, "{a:e}")
        } else {
            write!(f, "{a:e}{}{:e}i", if b < 0.0 { "-" } else { "+" }, b.abs())
        }
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, o: &'a BigComplex) -> BigComplex {
        let p = self.prec.max(o.prec);
        BigComplex::new(self.re.add(&o.re, p, RM), self.im.add(&o.im, p, RM), p)
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &'a BigComplex) -> BigComplex {
        let p = self.prec.max(o.prec);
        BigComplex::new(self.re.sub(&o.re, p, RM), self.im.sub(&o.im, p, RM), p)
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: &'a BigComplex) -> BigComplex {
        let p = self.prec.max(o.prec);
        let wp = p + 8;
        let re = self.re.mul(&o.re, wp, RM).sub(&self.im.mul(&o.im, wp, RM), p, RM);
        let im = self.re.mul(&o.im, wp, RM).add(&self.im.mul(&o.re, wp, RM), p, RM);
        BigComplex::new(re, im, p)
    }
}

impl<'a> Div<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    /// Panics on division by zero; use [`BigComplex::recip`] to check first.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &'a BigComplex) -> BigComplex {
        self * &o.recip().expect("division by zero")
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(BigFloat::neg(&self.re), BigFloat::neg(&self.im), self.prec)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for BigComplex {
            type Output = BigComplex;
            fn $m(self, o: BigComplex) -> BigComplex {
                (&self).$m(&o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::rat;

    fn close(a: &BigComplex, re: f64, im: f64) -> bool {
        let (x, y) = a.to_f64_pair();
        (x - re).abs() < 1e-14 && (y - im).abs() < 1e-14
    }

    #[test]
    fn basic_ops() {
        let a = BigComplex::from_f64(1.0, 2.0, 128);
        let b = BigComplex::from_f64(-3.0, 0.5, 128);
        assert!(close(&(&a * &b), -4.0, -5.5));
        assert!(close(&(&(&a / &b) * &b), 1.0, 2.0));
        assert!(close(&BigComplex::from_rational(&rat(1, 3), 128), 1.0 / 3.0, 0.0));
    }

    #[test]
    fn principal_roots() {
        let mut cc = Consts::new().unwrap();
        let m1 = BigComplex::from_f64(-1.0, 0.0, 128);
        assert!(close(&m1.sqrt(), 0.0, 1.0));
        let s = BigComplex::from_f64(-4.0, -1e-30, 128).sqrt();
        assert!(close(&s, 0.0, -2.0));
        let q = BigComplex::from_f64(-8.0, 0.0, 128)
            .pow_rational(1, 3, &mut cc)
            .unwrap();
        assert!(close(&q, 1.0, 3f64.sqrt()));
        let w = BigComplex::from_cyclo(&Cyclo12::omega(), 128);
        assert!(close(&w, -0.5, 3f64.sqrt() / 2.0));
        let r = BigComplex::from_f64(16.0, 0.0, 128)
            .pow_rational(3, 4, &mut cc)
            .unwrap();
        assert!(close(&r, 8.0, 0.0));
    }

    #[test]
    fn cancellation_flag() {
        let a = BigComplex::from_f64(1.0, 0.0, 64);
        let b = BigComplex::from_f64(1.0 + 1e-15, 0.0, 64);
        assert!(a.sub_checked(&b).1);
        assert!(!a.add_checked(&b).1);
    }
}
