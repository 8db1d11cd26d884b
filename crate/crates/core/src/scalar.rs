//! Number types carrying the perturbation coefficients.
//!
//! The recurrences suffer heavy cancellation (the third-order energy is a
//! difference of nearly equal terms), so the default carrier is an exact
//! big rational. A 128-bit binary float covers frequencies that are only
//! known approximately.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use crate::model::ArithmeticMode;

/// Exact ratio of arbitrary-size integers, always in lowest terms.
pub type Rational = BigRational;

/// Binary float with a 128-bit significand, rounding half to even.
pub type Extended = FBig<HalfEven, 2>;

/// Significand width of [`Extended`] values.
pub const EXTENDED_PRECISION_BITS: usize = 128;

/// Field operations plus the few conversions the engine needs.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;

    fn one() -> Self;

    /// `numer / denom`; `denom` must be non-zero.
    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn to_f64(&self) -> f64;

    fn is_zero(&self) -> bool;

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Whether `self` should be treated as zero relative to `scale`.
    /// Exact types only accept true zero.
    fn negligible(&self, scale: f64) -> bool;
}

/// Scalars that can carry a full hypervirial computation.
pub trait SeriesScalar: Scalar {
    const MODE: ArithmeticMode;

    fn from_rational(value: &BigRational) -> Self;

    /// Exact numerator/denominator, when the representation has one.
    fn to_exact(&self) -> Option<BigRational>;
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn negligible(&self, _scale: f64) -> bool {
        Zero::is_zero(self)
    }
}

impl SeriesScalar for BigRational {
    const MODE: ArithmeticMode = ArithmeticMode::ExactRational;

    fn from_rational(value: &BigRational) -> Self {
        value.clone()
    }

    fn to_exact(&self) -> Option<BigRational> {
        Some(self.clone())
    }
}

// A few hundred ulps above the 2^-128 rounding floor.
const EXTENDED_EPSILON: f64 = 1e-36;

fn extended(value: i64) -> Extended {
    Extended::from(value).with_precision(EXTENDED_PRECISION_BITS).value()
}

fn ibig_to_bigint(value: &IBig) -> BigInt {
    value.to_string().parse().expect("decimal integer text")
}

fn bigint_to_ibig(value: &BigInt) -> IBig {
    value.to_string().parse().expect("decimal integer text")
}

impl Scalar for Extended {
    fn zero() -> Self {
        extended(0)
    }

    fn one() -> Self {
        extended(1)
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        extended(numer) / extended(denom)
    }

    fn to_f64(&self) -> f64 {
        Extended::to_f64(self).value()
    }

    fn is_zero(&self) -> bool {
        self.repr().significand().is_zero()
    }

    fn negligible(&self, scale: f64) -> bool {
        Scalar::to_f64(self).abs() <= EXTENDED_EPSILON * scale
    }
}

impl SeriesScalar for Extended {
    const MODE: ArithmeticMode = ArithmeticMode::ExtendedFloat;

    fn from_rational(value: &BigRational) -> Self {
        let numer = Extended::from(bigint_to_ibig(value.numer())).with_precision(EXTENDED_PRECISION_BITS).value();
        let denom = Extended::from(bigint_to_ibig(value.denom())).with_precision(EXTENDED_PRECISION_BITS).value();
        numer / denom
    }

    fn to_exact(&self) -> Option<BigRational> {
        let (significand, exponent) = self.repr().clone().into_parts();
        let significand = BigRational::from_integer(ibig_to_bigint(&significand));
        let two = BigRational::from_integer(2.into());
        let scale = num::pow(two, exponent.unsigned_abs());
        Some(if exponent >= 0 { significand * scale } else { significand / scale })
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn negligible(&self, scale: f64) -> bool {
        self.abs() <= 64.0 * f64::EPSILON * scale
    }
}

/// Sum of an iterator of scalars, starting from zero.
pub(crate) fn sum<S: Scalar>(terms: impl IntoIterator<Item = S>) -> S {
    terms.into_iter().fold(S::zero(), |acc, t| acc + t)
}

/// `base^exp` by repeated squaring.
pub(crate) fn powi<S: Scalar>(base: &S, exp: u32) -> S {
    let mut result = S::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b.clone();
        }
        b = b.clone() * b;
        e >>= 1;
    }
    result
}
