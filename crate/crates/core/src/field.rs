//! The `Field` abstraction used by the exact linear algebra.

use core::fmt::Debug;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalars::{Cyclo12, RatFun, Rational};

pub trait Field:
    Clone + PartialEq + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    fn from_cyclo(c: &Cyclo12) -> Option<Self>;
    /// Size estimate; pivot selection prefers light entries.
    fn weight(&self) -> usize;

    fn from_int(n: i64) -> Self {
        Self::from_cyclo(&Cyclo12::from_int(n)).expect("integers embed")
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// `self / d`, `None` if `d` is zero.
    fn div(&self, d: &Self) -> Option<Self> {
        Some(self.clone() * d.inv()?)
    }
}

impl Field for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn one() -> Self {
        <Rational as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn from_cyclo(c: &Cyclo12) -> Option<Self> {
        c.as_rational().cloned()
    }
    fn weight(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

impl Field for Cyclo12 {
    fn zero() -> Self {
        Cyclo12::zero()
    }
    fn one() -> Self {
        Cyclo12::one()
    }
    fn is_zero(&self) -> bool {
        Cyclo12::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        Cyclo12::inv(self)
    }
    fn from_cyclo(c: &Cyclo12) -> Option<Self> {
        Some(c.clone())
    }
    fn weight(&self) -> usize {
        Cyclo12::weight(self)
    }
}

impl Field for RatFun {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn one() -> Self {
        RatFun::one()
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        RatFun::inv(self)
    }
    fn from_cyclo(c: &Cyclo12) -> Option<Self> {
        Some(RatFun::constant(c.clone()))
    }
    fn weight(&self) -> usize {
        RatFun::weight(self)
    }
}
