//! Numeric values used throughout the crate.
//!
//! Every eigenvalue, curvature and parameter is a [`Scalar`]: either an exact
//! rational number or a floating-point number carrying the absolute tolerance
//! used for all comparisons involving it. A single spectrum uses one
//! representation uniformly; mixing happens only when an exact constant (an
//! integer dimension, say) meets a floating value, in which case the result
//! is floating and inherits the tolerance.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float { value: f64, tol: f64 },
}

/// Numeric representation of a spectrum or family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NumericMode {
    Exact,
    Float { tol: f64 },
}

impl fmt::Display for NumericMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericMode::Exact => f.write_str("exact"),
            NumericMode::Float { tol } => write!(f, "float(tol={})", format_f64(*tol)),
        }
    }
}

impl Scalar {
    pub fn int(n: i64) -> Self {
        Scalar::Exact(Rational::from_integer(BigInt::from(n)))
    }

    /// Exact `num/den`. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Scalar::Exact(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(Rational::one())
    }

    pub fn float(value: f64, tol: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite value {value}")));
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive and finite, got {tol}"
            )));
        }
        Ok(Scalar::Float { value, tol })
    }

    /// Parses an exact value: an integer, `p/q`, or a decimal such as `0.01`
    /// or `2.5e-3` (decimals are read as the rational they denote).
    pub fn parse_exact(text: &str) -> Result<Self> {
        parse_rational(text.trim()).map(Scalar::Exact)
    }

    /// Parses a value in the given mode. In floating mode `p/q` is still
    /// accepted and converted to the nearest `f64`.
    pub fn parse_in(text: &str, mode: NumericMode) -> Result<Self> {
        let exact = Scalar::parse_exact(text)?;
        Ok(exact.in_mode(mode))
    }

    pub fn mode(&self) -> NumericMode {
        match self {
            Scalar::Exact(_) => NumericMode::Exact,
            Scalar::Float { tol, .. } => NumericMode::Float { tol: *tol },
        }
    }

    /// Converts to `mode`. Converting a floating value to exact mode yields
    /// the rational equal to its binary value.
    pub fn in_mode(&self, mode: NumericMode) -> Self {
        match (self, mode) {
            (Scalar::Exact(_), NumericMode::Exact) => self.clone(),
            (_, NumericMode::Float { tol }) => Scalar::Float {
                value: self.to_f64(),
                tol,
            },
            (Scalar::Float { value, .. }, NumericMode::Exact) => Scalar::Exact(
                Rational::from_float(*value).unwrap_or_else(Rational::zero),
            ),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float { .. } => None,
        }
    }

    pub fn tolerance(&self) -> Option<f64> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Float { tol, .. } => Some(*tol),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float { value, .. } => *value,
        }
    }

    /// Sign relative to zero. Floating values within their absolute tolerance
    /// of zero count as zero.
    pub fn sign(&self) -> Ordering {
        match self {
            Scalar::Exact(r) => r.cmp(&Rational::zero()),
            Scalar::Float { value, tol } => {
                if value.abs() <= *tol {
                    Ordering::Equal
                } else if *value > 0.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    /// Total order in exact mode; in floating mode two values are `Equal`
    /// when `|a - b| <= tol * max(1, |a|)`.
    pub fn compare(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => {
                let tol = self
                    .tolerance()
                    .unwrap_or(0.0)
                    .max(other.tolerance().unwrap_or(0.0));
                let a = self.to_f64();
                let b = other.to_f64();
                if (a - b).abs() <= tol * a.abs().max(1.0) {
                    Ordering::Equal
                } else {
                    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
                }
            }
        }
    }

    pub fn approx_eq(&self, other: &Scalar) -> bool {
        self.compare(other) == Ordering::Equal
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float { value, tol } => Scalar::Float {
                value: value.abs(),
                tol: *tol,
            },
        }
    }

    pub fn recip(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::InvalidParameter("reciprocal of zero".into()));
        }
        Ok(match self {
            Scalar::Exact(r) => Scalar::Exact(r.recip()),
            Scalar::Float { value, tol } => Scalar::Float {
                value: 1.0 / value,
                tol: *tol,
            },
        })
    }

    /// Square root. Exact only when numerator and denominator are perfect
    /// squares; otherwise an [`Error::InexactSqrt`].
    pub fn sqrt(&self) -> Result<Scalar> {
        if self.is_negative() {
            return Err(Error::InvalidParameter(format!("sqrt of negative {self}")));
        }
        match self {
            Scalar::Exact(r) => {
                let n = r.numer().sqrt();
                let d = r.denom().sqrt();
                if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
                    Ok(Scalar::Exact(Rational::new(n, d)))
                } else {
                    Err(Error::InexactSqrt(self.to_string()))
                }
            }
            Scalar::Float { value, tol } => Ok(Scalar::Float {
                value: value.max(0.0).sqrt(),
                tol: *tol,
            }),
        }
    }

    pub fn min<'a>(&'a self, other: &'a Scalar) -> &'a Scalar {
        if other.compare(self) == Ordering::Less {
            other
        } else {
            self
        }
    }

    pub fn max<'a>(&'a self, other: &'a Scalar) -> &'a Scalar {
        if other.compare(self) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    /// `max(self, 0)`.
    pub fn positive_part(&self) -> Scalar {
        if self.is_positive() {
            self.clone()
        } else {
            Scalar::zero().in_mode(self.mode())
        }
    }
}

impl fmt::Display for Scalar {
    /// Exact values print as `p/q` (or `p` for integers); floating values
    /// print with 17 significant digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Float { value, .. } => f.write_str(&format_f64(*value)),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scalar::parse_exact(s)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Exact(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

/// 17 significant digits, the round-trip precision of an `f64`.
pub fn format_f64(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    let magnitude = value.abs().log10().floor() as i32;
    if (-5..16).contains(&magnitude) {
        let decimals = (16 - magnitude).max(0) as usize;
        format!("{value:.decimals$}")
    } else {
        format!("{value:.16e}")
    }
}

fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidParameter(format!("cannot parse number '{text}'"));
    if text.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::InvalidParameter(format!("zero denominator in '{text}'")));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = text[pos + 1..].parse().map_err(|_| bad())?;
            (&text[..pos], exp)
        }
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = all_digits.parse().map_err(|_| bad())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

fn combine(lhs: &Scalar, rhs: &Scalar, exact: fn(&Rational, &Rational) -> Rational, float: fn(f64, f64) -> f64) -> Scalar {
    match (lhs, rhs) {
        (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(exact(a, b)),
        _ => {
            let tol = lhs
                .tolerance()
                .unwrap_or(0.0)
                .max(rhs.tolerance().unwrap_or(0.0));
            Scalar::Float {
                value: float(lhs.to_f64(), rhs.to_f64()),
                tol,
            }
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                combine(self, rhs, |a, b| a $op b, |a, b| a $op b)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);
scalar_binop!(Div, div, /);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float { value, tol } => Scalar::Float {
                value: -value,
                tol: *tol,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
