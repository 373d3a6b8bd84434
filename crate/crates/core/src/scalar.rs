//! Scalar traits the algebra is generic over.
//!
//! Exact code (group rings, matrices, Smith normal form) is written against
//! [`Coeff`], an integer ring with Euclidean division. Numerical code
//! (multisignatures) is written against [`num_traits::Float`].

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Integer coefficient ring: `i64`, `i128` or arbitrary precision [`BigInt`].
pub trait Coeff:
    Integer + Signed + Clone + Hash + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("i64 fits every coefficient type")
    }

    /// Parses a decimal string, as used for coefficients too wide for a JSON number.
    fn parse_decimal(s: &str) -> Option<Self> {
        <Self as num_traits::Num>::from_str_radix(s.trim(), 10).ok()
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_even(&self) -> bool {
        Integer::is_even(self)
    }
}

impl<T> Coeff for T where
    T: Integer + Signed + Clone + Hash + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// Serializes a coefficient as a JSON number when it fits in `i64`, else as a string.
pub fn coeff_to_json<C: Coeff>(c: &C) -> serde_json::Value {
    match c.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(c.to_string()),
    }
}

pub fn coeff_from_json<C: Coeff>(v: &serde_json::Value) -> Option<C> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(<C as Coeff>::from_i64),
        serde_json::Value::String(s) => C::parse_decimal(s),
        _ => None,
    }
}

/// Arbitrary precision integer, the default coefficient type.
pub type Int = BigInt;
