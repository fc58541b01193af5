//! Exact integer and decimal arithmetic for wei, raw token units and USD.
//!
//! Amounts stay in [`BigUint`] / [`BigRational`] end to end. Floating point
//! only appears when a rate is rendered for humans.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

pub const ETH_DECIMALS: u32 = 18;

pub fn wei_per_eth() -> BigUint {
    BigUint::from(10u32).pow(ETH_DECIMALS)
}

pub fn pow10(exp: u32) -> BigUint {
    BigUint::from(10u32).pow(exp)
}

/// Parses a non-negative base-10 integer. No sign, no separators, no exponent.
pub fn parse_biguint(s: &str) -> Result<BigUint, ParseError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::Decimal(s.to_string()));
    }
    BigUint::from_str(s).map_err(|_| ParseError::Decimal(s.to_string()))
}

/// Parses `123`, `123.45` or `.5` into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational, ParseError> {
    let err = || ParseError::Decimal(s.to_string());
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer =
        BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| err())?;
    let denom = BigInt::from(pow10(frac_part.len() as u32));
    let r = BigRational::new(numer, denom);
    Ok(if neg { -r } else { r })
}

/// Exact rational for the shortest decimal rendering of `x` (so `0.01` is 1/100,
/// not the nearest binary fraction).
pub fn ratio_from_f64(x: f64) -> Result<BigRational, ParseError> {
    if !x.is_finite() {
        return Err(ParseError::Decimal(x.to_string()));
    }
    parse_decimal(&format!("{x}"))
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Renders `amount / 10^decimals` exactly, trimming trailing zeros: `970800000000000000000` at
/// 18 decimals is `"970.8"`.
pub fn format_units(amount: &BigUint, decimals: u32) -> String {
    let scale = pow10(decimals);
    let (int, frac) = amount.div_rem(&scale);
    if frac.is_zero() {
        return int.to_string();
    }
    let frac = format!("{:0>width$}", frac.to_string(), width = decimals as usize);
    format!("{int}.{}", frac.trim_end_matches('0'))
}

/// Parses a decimal amount in whole units into raw integer units. Fails when the value has
/// more fractional digits than `decimals`.
pub fn parse_units(s: &str, decimals: u32) -> Result<BigUint, ParseError> {
    let r = parse_decimal(s)?;
    if r.is_negative() {
        return Err(ParseError::Decimal(s.to_string()));
    }
    let scaled = r * BigRational::from_integer(BigInt::from(pow10(decimals)));
    if !scaled.is_integer() {
        return Err(ParseError::Decimal(s.to_string()));
    }
    scaled
        .to_integer()
        .to_biguint()
        .ok_or_else(|| ParseError::Decimal(s.to_string()))
}

/// Rounds a non-negative dollar amount to whole cents, halves away from zero.
pub fn round_half_up_cents(dollars: &BigRational) -> BigInt {
    let cents = dollars * BigRational::from_integer(BigInt::from(100));
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    if cents.is_negative() {
        -((-cents) + half).floor().to_integer()
    } else {
        (cents + half).floor().to_integer()
    }
}

pub fn format_cents(cents: &BigInt) -> String {
    let neg = cents.is_negative();
    let abs = cents.abs();
    let (whole, rem) = abs.div_rem(&BigInt::from(100));
    format!(
        "{}{}.{:02}",
        if neg { "-" } else { "" },
        whole,
        rem.to_u32().unwrap_or(0)
    )
}

/// Converts a wei total to USD cents at `usd_per_eth`, rounding half up.
pub fn wei_to_usd_cents(wei: &BigUint, usd_per_eth: &BigRational) -> BigInt {
    let eth = BigRational::new(BigInt::from(wei.clone()), BigInt::from(wei_per_eth()));
    round_half_up_cents(&(eth * usd_per_eth))
}

/// Exact rational rendered with a fixed number of fractional digits (truncated toward zero).
pub fn format_ratio(r: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(pow10(digits));
    let scaled = (r * BigRational::from_integer(scale.clone()))
        .trunc()
        .to_integer();
    let neg = scaled.is_negative();
    let (whole, frac) = scaled.abs().div_rem(&scale);
    let mut out = format!("{}{}", if neg { "-" } else { "" }, whole);
    if digits > 0 {
        let frac = format!("{:0>width$}", frac.to_string(), width = digits as usize);
        let frac = frac.trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    }
    out
}

/// Serde adapter: `BigUint` as a JSON decimal string.
pub mod dec_str {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = <std::borrow::Cow<'de, str>>::deserialize(d)?;
        parse_biguint(&s).map_err(serde::de::Error::custom)
    }
}

/// A positive decimal configuration value kept exactly (e.g. USD per ETH).
///
/// Accepts a TOML/JSON number or a decimal string.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactDecimal {
    text: String,
    value: BigRational,
}

impl ExactDecimal {
    pub fn parse(s: &str) -> Result<Self, ParseError> {
        let value = parse_decimal(s)?;
        Ok(Self {
            text: s.to_string(),
            value,
        })
    }

    pub fn from_f64(x: f64) -> Result<Self, ParseError> {
        Self::parse(&format!("{x}"))
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

impl fmt::Display for ExactDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl fmt::Debug for ExactDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactDecimal({})", self.text)
    }
}

impl Serialize for ExactDecimal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

impl<'de> Deserialize<'de> for ExactDecimal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(u64),
            Float(f64),
            Text(String),
        }
        let parsed = match Repr::deserialize(d)? {
            Repr::Int(n) => ExactDecimal::parse(&n.to_string()),
            Repr::Float(x) => ExactDecimal::from_f64(x),
            Repr::Text(s) => ExactDecimal::parse(&s),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}
