//! The physical problem: `H = -½ d²/dx² + ½ω²x² + ½λx² + c·λ²x³`, with the
//! cubic switch `c ∈ {0, 1}`.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, SeriesScalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ArithmeticMode {
    #[default]
    ExactRational,
    ExtendedFloat,
}

impl ArithmeticMode {
    pub fn name(self) -> &'static str {
        match self {
            ArithmeticMode::ExactRational => "rational",
            ArithmeticMode::ExtendedFloat => "float",
        }
    }
}

impl fmt::Display for ArithmeticMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ArithmeticMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" | "exact" | "exact-rational" => Ok(ArithmeticMode::ExactRational),
            "float" | "extended" | "extended-float" => Ok(ArithmeticMode::ExtendedFloat),
            other => Err(Error::Domain(format!("unknown arithmetic mode {other:?}"))),
        }
    }
}

/// Oscillator frequency, held as an exact positive rational.
///
/// Parsed from decimal (`"1.25"`) or fraction (`"5/4"`) notation; an `f64`
/// converts through its shortest round-trip decimal, so `0.1` means `1/10`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Omega(BigRational);

impl Omega {
    pub fn new(value: BigRational) -> Result<Self> {
        if !value.is_positive() {
            return Err(Error::Domain(format!("omega must be positive, got {value}")));
        }
        Ok(Omega(value))
    }

    pub fn from_f64(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::Domain(format!("omega must be finite, got {value}")));
        }
        format!("{value}").parse()
    }

    pub fn one() -> Self {
        Omega(BigRational::from_integer(1.into()))
    }

    pub fn exact(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        Scalar::to_f64(&self.0)
    }

    pub fn to_scalar<S: SeriesScalar>(&self) -> S {
        S::from_rational(&self.0)
    }
}

impl FromStr for Omega {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Domain(format!("cannot parse omega from {s:?}"));
        let value = if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            BigRational::new(num, den)
        } else {
            parse_decimal(s).ok_or_else(bad)?
        };
        Omega::new(value)
    }
}

impl fmt::Display for Omega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Exact value of a plain decimal literal such as `-12.0625`. No exponents.
fn parse_decimal(s: &str) -> Option<BigRational> {
    let (negative, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let joined = format!("{int_part}{frac_part}");
    let numer: BigInt = if joined.is_empty() { BigInt::zero() } else { joined.parse().ok()? };
    let denom = num::pow(BigInt::from(10), frac_part.len());
    let value = BigRational::new(numer, denom);
    Some(if negative { -value } else { value })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModelSpec {
    pub omega: Omega,
    /// Eigenstate index.
    pub n: usize,
    /// Whether the `λ²x³` term is present. Off leaves the exactly solvable
    /// `½(ω² + λ)x²` oscillator.
    pub cubic: bool,
    /// Highest power of λ kept in the energy series.
    pub max_order: usize,
    pub arithmetic_mode: ArithmeticMode,
}

impl ModelSpec {
    pub fn new(omega: Omega, n: usize, cubic: bool, max_order: usize) -> Result<Self> {
        let spec = ModelSpec { omega, n, cubic, max_order, arithmetic_mode: ArithmeticMode::ExactRational };
        spec.validate()?;
        Ok(spec)
    }

    /// Unit frequency, cubic term on, exact arithmetic.
    pub fn unit(n: usize, max_order: usize) -> Self {
        ModelSpec { omega: Omega::one(), n, cubic: true, max_order, arithmetic_mode: ArithmeticMode::ExactRational }
    }

    pub fn with_cubic(mut self, cubic: bool) -> Self {
        self.cubic = cubic;
        self
    }

    pub fn with_mode(mut self, mode: ArithmeticMode) -> Self {
        self.arithmetic_mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_order < 1 {
            return Err(Error::Domain("max_order must be at least 1".into()));
        }
        Ok(())
    }

    /// The cubic switch as a 0/1 factor.
    pub fn cubic_factor(&self) -> i64 {
        i64::from(self.cubic)
    }
}
