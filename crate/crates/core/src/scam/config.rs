use std::path::Path;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::amount::{self, ExactDecimal};
use crate::error::{Error, Result};

/// Detector thresholds. Loaded from TOML; every field has a default.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorConfig {
    /// Maximum gap between a victim's ETH send and the counterfeit return.
    pub window_seconds: u64,
    /// Allowed relative deviation of airdrop rates from their median.
    pub rate_rel_tol: ExactDecimal,
    pub min_airdrop_txs: usize,
    #[serde(with = "wei_field")]
    pub min_eth_wei: BigUint,
    /// USD per ETH used for loss reporting.
    pub usd_rate: ExactDecimal,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            window_seconds: 7_200,
            rate_rel_tol: ExactDecimal::parse("0.01").expect("literal"),
            min_airdrop_txs: 2,
            min_eth_wei: amount::pow10(16),
            usd_rate: ExactDecimal::parse("233.64").expect("literal"),
        }
    }
}

impl DetectorConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        use num_traits::{Signed, Zero};
        if self.usd_rate.value().is_negative() || self.usd_rate.value().is_zero() {
            return Err(Error::Config("usd_rate must be positive".into()));
        }
        if self.rate_rel_tol.value().is_negative() {
            return Err(Error::Config("rate_rel_tol must be non-negative".into()));
        }
        if self.min_airdrop_txs == 0 {
            return Err(Error::Config("min_airdrop_txs must be at least 1".into()));
        }
        Ok(())
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }
}

mod wei_field {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(u64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(n) => Ok(BigUint::from(n)),
            Repr::Text(s) => amount::parse_biguint(&s).map_err(serde::de::Error::custom),
        }
    }
}
