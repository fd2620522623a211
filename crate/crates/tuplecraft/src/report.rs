//! Exact-plus-float report quantities.
//!
//! Discrepancy terms and bounds are computed in exact rational arithmetic
//! wherever the underlying quantity is rational; floating point enters only
//! through the logarithmic integral and as a rendering convenience. A
//! [`Quantity`] carries both: the exact value when one exists, and an f64
//! for human consumption.

use num::ToPrimitive;
use serde::ser::{Serialize, SerializeMap, Serializer};
use std::fmt;

/// Exact rational used throughout the reports. Denominators of summed
/// discrepancies grow like lcm(1..Q), so this is backed by big integers.
pub type Rational = num::BigRational;

/// A report value: exact rational when the quantity is rational, always an
/// f64 rendering. Serializes as `{"num": "...", "den": "...", "float": f}`
/// (num/den as decimal strings — they routinely exceed u64) or `{"float": f}`
/// when no exact form exists.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    pub exact: Option<Rational>,
    pub float: f64,
}

impl Quantity {
    pub fn from_rational(r: Rational) -> Self {
        let float = r.to_f64().unwrap_or(f64::NAN);
        Quantity {
            exact: Some(r),
            float,
        }
    }

    pub fn from_integer(n: u64) -> Self {
        Quantity::from_rational(Rational::from_integer(n.into()))
    }

    /// Exact ratio of two machine integers.
    pub fn from_ratio(num: i128, den: i128) -> Self {
        Quantity::from_rational(Rational::new(num.into(), den.into()))
    }

    /// A value only known in floating point (quadratures and their sums).
    pub fn approx(float: f64) -> Self {
        Quantity { exact: None, float }
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let n = if self.exact.is_some() { 3 } else { 1 };
        let mut map = serializer.serialize_map(Some(n))?;
        if let Some(r) = &self.exact {
            map.serialize_entry("num", &r.numer().to_string())?;
            map.serialize_entry("den", &r.denom().to_string())?;
        }
        map.serialize_entry("float", &self.float)?;
        map.end()
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(r) if r.denom() == &num::BigInt::from(1) => write!(f, "{}", r.numer()),
            Some(r) => write!(f, "{}/{} (~{:.9})", r.numer(), r.denom(), self.float),
            None => write!(f, "{:.9}", self.float),
        }
    }
}
