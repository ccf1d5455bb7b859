//! Dual-mode scalars: exact rationals or binary64 floats.
//!
//! Every sequence and kernel in this crate carries one arithmetic mode
//! chosen at construction. Mixing modes in a binary operation is an
//! error, never a silent coercion; `to_float` is the only crossing.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arithmetic mode of a scalar, sequence, or kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Float => write!(f, "float"),
        }
    }
}

/// A number in one of the two arithmetic modes.
///
/// `Exact` holds a reduced arbitrary-precision rational (reduction and a
/// nonzero denominator are enforced by [`BigRational`] itself). `Float`
/// holds a binary64 value.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    /// Exact rational from an integer pair. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// The explicit mode crossing: exact values are rounded to f64.
    pub fn to_float(&self) -> f64 {
        match self {
            Scalar::Exact(q) => rational_to_f64(q),
            Scalar::Float(x) => *x,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_negative(),
            Scalar::Float(x) => *x < 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Float(_) => None,
        }
    }
}

/// Convert a big rational to f64 without overflowing intermediate
/// integer-to-float casts on huge numerators/denominators.
pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    // Fall back to scaling both parts by a common power of two.
    let bits = q.numer().bits().max(q.denom().bits());
    let shift = bits.saturating_sub(900) as u32;
    let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => {
                if q.denom() == &BigInt::from(1) {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Parses `"p/q"` or a bare integer as an exact rational, anything
    /// with a decimal point or exponent as a float.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let n = BigInt::from_str(num.trim())
                .map_err(|_| Error::MalformedScalar(s.to_string()))?;
            let d = BigInt::from_str(den.trim())
                .map_err(|_| Error::MalformedScalar(s.to_string()))?;
            if d.is_zero() {
                return Err(Error::MalformedScalar(s.to_string()));
            }
            return Ok(Scalar::Exact(BigRational::new(n, d)));
        }
        if !s.contains('.') && !s.contains('e') && !s.contains('E') {
            if let Ok(n) = BigInt::from_str(s) {
                return Ok(Scalar::Exact(BigRational::from_integer(n)));
            }
        }
        s.parse::<f64>()
            .map(Scalar::Float)
            .map_err(|_| Error::MalformedScalar(s.to_string()))
    }
}
