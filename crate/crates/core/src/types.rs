//! Fixed-width chain identifiers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

fn decode_fixed<const N: usize>(s: &str, kind: &'static str) -> Result<[u8; N], ParseError> {
    let body = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .unwrap_or(s);
    if body.len() != N * 2 {
        return Err(ParseError::HexLength {
            kind,
            expected: N,
            got: body.len(),
        });
    }
    let mut out = [0u8; N];
    hex::decode_to_slice(body, &mut out).map_err(|_| ParseError::HexDigit { kind })?;
    Ok(out)
}

macro_rules! fixed_bytes {
    ($name:ident, $len:expr, $kind:literal) => {
        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
        pub struct $name(pub [u8; $len]);

        impl $name {
            pub const LEN: usize = $len;
            pub const ZERO: Self = Self([0u8; $len]);

            pub fn as_bytes(&self) -> &[u8; $len] {
                &self.0
            }

            pub fn is_zero(&self) -> bool {
                self.0 == [0u8; $len]
            }
        }

        impl FromStr for $name {
            type Err = ParseError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                decode_fixed::<$len>(s, $kind).map(Self)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "0x{}", hex::encode(self.0))
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Display::fmt(self, f)
            }
        }

        impl From<[u8; $len]> for $name {
            fn from(bytes: [u8; $len]) -> Self {
                Self(bytes)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                let s = <std::borrow::Cow<'de, str>>::deserialize(deserializer)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

fixed_bytes!(Address, 20, "address");
fixed_bytes!(TxHash, 32, "transaction hash");

impl Address {
    /// Builds an address whose last eight bytes carry `n`; handy for fixtures.
    pub fn from_low_u64(n: u64) -> Self {
        let mut bytes = [0u8; 20];
        bytes[12..].copy_from_slice(&n.to_be_bytes());
        Self(bytes)
    }
}

impl TxHash {
    pub fn from_low_u64(n: u64) -> Self {
        let mut bytes = [0u8; 32];
        bytes[24..].copy_from_slice(&n.to_be_bytes());
        Self(bytes)
    }
}

/// Decodes a `0x`-prefixed (or bare) hex byte string of any even length.
pub fn decode_hex_bytes(s: &str) -> Result<Vec<u8>, ParseError> {
    let body = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .unwrap_or(s);
    hex::decode(body).map_err(|_| ParseError::HexDigit {
        kind: "byte string",
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn address_parses_mixed_case_and_renders_lowercase() {
        let a: Address = "0x2468293D8059bc578CF312F09Ed78D6CE1005dCb"
            .parse()
            .unwrap();
        assert_eq!(a.to_string(), "0x2468293d8059bc578cf312f09ed78d6ce1005dcb");
        let b: Address = "2468293d8059bc578cf312f09ed78d6ce1005dcb".parse().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn address_rejects_wrong_length() {
        assert!("0x1234".parse::<Address>().is_err());
        assert!("0xzz68293D8059bc578CF312F09Ed78D6CE1005dCb"
            .parse::<Address>()
            .is_err());
    }

    #[test]
    fn serde_uses_canonical_text() {
        let h = TxHash::from_low_u64(0xabcdef);
        let json = serde_json::to_string(&h).unwrap();
        assert_eq!(
            json,
            "\"0x0000000000000000000000000000000000000000000000000000000000abcdef\""
        );
        let back: TxHash = serde_json::from_str(&json.to_uppercase().replace("0X", "0x")).unwrap();
        assert_eq!(back, h);
    }
}
