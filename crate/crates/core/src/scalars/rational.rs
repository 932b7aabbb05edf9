//! Rational helpers on top of `num_rational::BigRational`.

use alloc::string::String;
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Builds `n/d` from machine integers. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact `k`-th root of a non-negative rational if it exists.
pub fn exact_root(q: &Rational, k: u32) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    if k == 1 || q.is_zero() {
        return Some(q.clone());
    }
    let n = int_root(q.numer(), k)?;
    let d = int_root(q.denom(), k)?;
    Some(Rational::new(n, d))
}

fn int_root(n: &BigInt, k: u32) -> Option<BigInt> {
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Integer power with a possibly negative exponent. `None` for `0^-k`.
pub fn pow_i(q: &Rational, e: i64) -> Option<Rational> {
    if e >= 0 {
        return Some(num_traits::pow(q.clone(), e as usize));
    }
    if q.is_zero() {
        return None;
    }
    Some(num_traits::pow(q.recip(), e.unsigned_abs() as usize))
}

/// Plain `n` or `n/d` rendering.
pub fn fmt_rational(q: &Rational) -> String {
    use alloc::string::ToString;
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        alloc::format!("{}/{}", q.numer(), q.denom())
    }
}

/// Approximate `f64` value, used only for human-facing summaries.
pub fn to_f64(q: &Rational) -> f64 {
    let (n, d) = (q.numer(), q.denom());
    let shift = (n.bits() as i64 - d.bits() as i64) - 60;
    let (n2, d2) = if shift > 0 {
        (n.clone(), d.clone() << shift as usize)
    } else {
        (n.clone() << (-shift) as usize, d.clone())
    };
    let qi = n2 / d2;
    let (sign, digits) = qi.to_u64_digits();
    let mag = digits.first().copied().unwrap_or(0) as f64
        + digits.get(1).copied().unwrap_or(0) as f64 * 18446744073709551616.0;
    let v = libm_ldexp(mag, shift);
    if sign == Sign::Minus {
        -v
    } else {
        v
    }
}

fn libm_ldexp(x: f64, e: i64) -> f64 {
    let mut v = x;
    let mut e = e;
    while e > 0 {
        let s = e.min(60);
        v *= (1u64 << s) as f64;
        e -= s;
    }
    while e < 0 {
        let s = (-e).min(60);
        v /= (1u64 << s) as f64;
        e += s;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots() {
        assert_eq!(exact_root(&rat(9, 4), 2), Some(rat(3, 2)));
        assert_eq!(exact_root(&rat(2, 1), 2), None);
        assert_eq!(exact_root(&rat(-8, 1), 3), None);
        assert_eq!(exact_root(&rat(1, 16), 4), Some(rat(1, 2)));
    }

    #[test]
    fn approximations() {
        assert!((to_f64(&rat(1, 3)) - 1.0 / 3.0).abs() < 1e-15);
        assert!((to_f64(&rat(-7, 2)) + 3.5).abs() < 1e-15);
        assert_eq!(fmt_rational(&rat(6, 4)), "3/2");
        assert_eq!(pow_i(&rat(2, 3), -2), Some(rat(9, 4)));
        assert_eq!(pow_i(&int(0), -1), None);
    }
}
