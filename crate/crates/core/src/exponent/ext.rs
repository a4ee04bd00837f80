//! Exact rationals extended with `±∞`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::ExactInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithmeticError {
    #[error("indeterminate form: {0}")]
    Indeterminate(&'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational literal {0:?}")]
    Parse(String),
    #[error("expected a finite value, got {0}")]
    NotFinite(String),
}

/// A rational number or one of the two signed infinities.
///
/// Ordering is the usual total order of the extended real line. Arithmetic on
/// finite values is exact; `∞ − ∞`, `0·∞` and `∞/∞` are reported as errors by
/// the `checked_*` methods, and the operator impls panic on them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtendedRational<I: ExactInt> {
    NegInf,
    Finite(Ratio<I>),
    PosInf,
}

use ExtendedRational::{Finite, NegInf, PosInf};

impl<I: ExactInt> ExtendedRational<I> {
    pub fn new(numer: i64, denom: i64) -> Self {
        Finite(ratio(numer, denom))
    }

    pub fn int(n: i64) -> Self {
        Self::new(n, 1)
    }

    pub fn zero() -> Self {
        Finite(Ratio::zero())
    }

    pub fn one() -> Self {
        Finite(Ratio::one())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Finite(_))
    }

    pub fn finite(&self) -> Option<&Ratio<I>> {
        match self {
            Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn try_finite(&self) -> Result<&Ratio<I>, ArithmeticError> {
        self.finite().ok_or_else(|| ArithmeticError::NotFinite(self.to_string()))
    }

    fn sign(&self) -> Ordering {
        match self {
            NegInf => Ordering::Less,
            PosInf => Ordering::Greater,
            Finite(r) => r.cmp(&Ratio::zero()),
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, ArithmeticError> {
        match (self, rhs) {
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
            (PosInf, NegInf) | (NegInf, PosInf) => Err(ArithmeticError::Indeterminate("inf - inf")),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
        }
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, ArithmeticError> {
        self.checked_add(&rhs.clone().neg())
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, ArithmeticError> {
        match (self, rhs) {
            (Finite(a), Finite(b)) => Ok(Finite(a * b)),
            _ => match (self.sign(), rhs.sign()) {
                (Ordering::Equal, _) | (_, Ordering::Equal) => Err(ArithmeticError::Indeterminate("0 * inf")),
                (a, b) if a == b => Ok(PosInf),
                _ => Ok(NegInf),
            },
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ArithmeticError> {
        match (self, rhs) {
            (_, Finite(b)) if b.is_zero() => Err(ArithmeticError::DivisionByZero),
            (Finite(a), Finite(b)) => Ok(Finite(a / b)),
            (Finite(_), _) => Ok(Self::zero()),
            (_, Finite(b)) => {
                if (self.sign() == Ordering::Greater) == b.is_positive() {
                    Ok(PosInf)
                } else {
                    Ok(NegInf)
                }
            }
            _ => Err(ArithmeticError::Indeterminate("inf / inf")),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            NegInf => f64::NEG_INFINITY,
            PosInf => f64::INFINITY,
            Finite(r) => ratio_to_f64(r),
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

/// Builds a finite rational from small integer parts.
pub fn ratio<I: ExactInt>(numer: i64, denom: i64) -> Ratio<I> {
    Ratio::new(
        I::from_i64(numer).expect("numerator fits"),
        I::from_i64(denom).expect("denominator fits"),
    )
}

pub fn ratio_to_f64<I: ExactInt>(r: &Ratio<I>) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d
    } else {
        // Very large parts: fall back to the decimal expansion.
        r.to_string()
            .split_once('/')
            .map(|(a, b)| a.parse::<f64>().unwrap_or(f64::NAN) / b.parse::<f64>().unwrap_or(f64::NAN))
            .unwrap_or(f64::NAN)
    }
}

/// Parses `n`, `n/d`, or a decimal literal such as `-0.25` exactly.
pub fn parse_ratio<I: ExactInt>(s: &str) -> Result<Ratio<I>, ArithmeticError> {
    let err = || ArithmeticError::Parse(s.to_string());
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: I = n.trim().parse().map_err(|_| err())?;
        let d: I = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(ArithmeticError::DivisionByZero);
        }
        return Ok(Ratio::new(n, d));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        if frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let negative = int_part.trim_start().starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        let int_value: I = if int_digits.is_empty() {
            I::zero()
        } else {
            int_digits.parse().map_err(|_| err())?
        };
        let frac_value: I = frac_part.parse().map_err(|_| err())?;
        let mut scale = I::one();
        let ten = I::from_u8(10).expect("10 fits");
        for _ in 0..frac_part.len() {
            scale = scale * ten.clone();
        }
        let magnitude = Ratio::new(int_value * scale.clone() + frac_value, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: I = t.trim_start_matches('+').parse().map_err(|_| err())?;
    Ok(Ratio::from_integer(n))
}

impl<I: ExactInt> From<Ratio<I>> for ExtendedRational<I> {
    fn from(r: Ratio<I>) -> Self {
        Finite(r)
    }
}

impl<I: ExactInt> PartialOrd for ExtendedRational<I> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<I: ExactInt> Ord for ExtendedRational<I> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (PosInf, _) | (_, NegInf) => Ordering::Greater,
        }
    }
}

impl<I: ExactInt> Neg for ExtendedRational<I> {
    type Output = Self;
    fn neg(self) -> Self {
        match self {
            NegInf => PosInf,
            PosInf => NegInf,
            Finite(r) => Finite(-r),
        }
    }
}

macro_rules! checked_operator {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<I: ExactInt> $trait for ExtendedRational<I> {
            type Output = Self;
            fn $method(self, rhs: Self) -> Self {
                match self.$checked(&rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{} {} {}: {}", self, stringify!($method), rhs, e),
                }
            }
        }
    };
}

checked_operator!(Add, add, checked_add);
checked_operator!(Sub, sub, checked_sub);
checked_operator!(Mul, mul, checked_mul);
checked_operator!(Div, div, checked_div);

impl<I: ExactInt> fmt::Display for ExtendedRational<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegInf => f.write_str("-inf"),
            PosInf => f.write_str("inf"),
            Finite(r) => write!(f, "{}", r),
        }
    }
}

impl<I: ExactInt> FromStr for ExtendedRational<I> {
    type Err = ArithmeticError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" | "∞" | "+∞" => Ok(PosInf),
            "-inf" | "-∞" => Ok(NegInf),
            t => parse_ratio(t).map(Finite),
        }
    }
}

impl<I: ExactInt> Serialize for ExtendedRational<I> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de, I: ExactInt> Deserialize<'de> for ExtendedRational<I> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
