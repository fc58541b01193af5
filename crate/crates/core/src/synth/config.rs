use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::amount::ExactDecimal;
use crate::chain_store::MAX_DECIMALS;
use crate::counterfeit::MatchStatus;
use crate::error::{Error, Result};

/// Scenario for [`generate`](super::generate). Every count defaults to zero, so an empty
/// file yields an empty ledger.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub start_timestamp: u64,
    pub span_days: u64,
    /// Take the first `targets` entries of the builtin list...
    pub targets: usize,
    /// ...or name them explicitly by symbol.
    pub target_symbols: Vec<String>,
    /// Creator pool shared by plain counterfeits; 0 gives each token its own creator.
    pub creators: usize,
    /// Share of plain counterfeits deployed through a factory contract.
    pub factory_fraction: f64,
    /// Upper bound on holders per plain counterfeit.
    pub max_holders: usize,
    pub counterfeits: Vec<CounterfeitPlan>,
    pub decoys: DecoyPlan,
    pub airdrop: AirdropPlan,
    pub arbitrage: ArbitragePlan,
    pub noise: NoisePlan,
    pub laundering: LaunderingPlan,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            seed: 0,
            start_timestamp: 1_500_000_000,
            span_days: 365,
            targets: 0,
            target_symbols: Vec::new(),
            creators: 0,
            factory_fraction: 0.0,
            max_holders: 0,
            counterfeits: Vec::new(),
            decoys: DecoyPlan::default(),
            airdrop: AirdropPlan::default(),
            arbitrage: ArbitragePlan::default(),
            noise: NoisePlan::default(),
            laundering: LaunderingPlan::default(),
        }
    }
}

/// `per_target` counterfeits of every target in one lexical cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterfeitPlan {
    pub name: MatchStatus,
    pub symbol: MatchStatus,
    pub per_target: usize,
}

/// Tokens that match a target but should be filtered (or held for review).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecoyPlan {
    pub rule1: usize,
    pub rule2: usize,
    pub rule3: usize,
    pub needs_review: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AirdropPlan {
    /// Randomised campaigns in addition to `fixed`.
    pub campaigns: usize,
    pub min_victims: usize,
    pub max_victims: usize,
    pub fixed: Vec<FixedAirdrop>,
}

impl Default for AirdropPlan {
    fn default() -> Self {
        AirdropPlan {
            campaigns: 0,
            min_victims: 2,
            max_victims: 12,
            fixed: Vec::new(),
        }
    }
}

/// A campaign with chosen parameters. Give at most one of `eth_per_victim` and
/// `eth_total`; amounts are in ETH with at most two decimals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedAirdrop {
    pub target: String,
    pub rate: ExactDecimal,
    pub victims: usize,
    #[serde(default)]
    pub eth_per_victim: Option<ExactDecimal>,
    #[serde(default)]
    pub eth_total: Option<ExactDecimal>,
    #[serde(default = "default_decimals")]
    pub decimals: u8,
}

fn default_decimals() -> u8 {
    18
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArbitragePlan {
    pub campaigns: usize,
    pub min_victims: usize,
    pub max_victims: usize,
    /// Victims paying again after a counterfeit return.
    pub secondary_fraction: f64,
    /// Victims first served official tokens.
    pub type2_fraction: f64,
    /// Victims who pay and receive nothing.
    pub no_return_fraction: f64,
}

impl Default for ArbitragePlan {
    fn default() -> Self {
        ArbitragePlan {
            campaigns: 0,
            min_victims: 1,
            max_victims: 10,
            secondary_fraction: 0.0,
            type2_fraction: 0.0,
            no_return_fraction: 0.0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoisePlan {
    pub transactions: usize,
    pub accounts: usize,
    pub benign_tokens: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LaunderingPlan {
    /// Fund-transfer hops between each scam receiver and an exchange.
    pub depth: usize,
    pub exchanges: usize,
}

fn fraction(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be in [0, 1], got {v}")))
    }
}

impl ScenarioConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: ScenarioConfig =
            toml::from_str(s).map_err(|e| Error::Config(format!("scenario: {e}")))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&s)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// Checks internal consistency. Target-dependent checks happen in `generate`.
    pub fn validate(&self) -> Result<()> {
        fraction("factory_fraction", self.factory_fraction)?;
        let a = &self.arbitrage;
        fraction("arbitrage.secondary_fraction", a.secondary_fraction)?;
        fraction("arbitrage.type2_fraction", a.type2_fraction)?;
        fraction("arbitrage.no_return_fraction", a.no_return_fraction)?;
        if a.min_victims == 0 || a.min_victims > a.max_victims {
            return Err(Error::Config(
                "arbitrage victims need 1 <= min_victims <= max_victims".into(),
            ));
        }
        let ad = &self.airdrop;
        if ad.min_victims < 2 || ad.min_victims > ad.max_victims {
            return Err(Error::Config(
                "airdrop victims need 2 <= min_victims <= max_victims".into(),
            ));
        }
        for f in &ad.fixed {
            if f.victims < 2 {
                return Err(Error::Config(format!(
                    "airdrop campaign on {} needs at least 2 victims",
                    f.target
                )));
            }
            if f.decimals > MAX_DECIMALS {
                return Err(Error::Config(format!(
                    "airdrop campaign on {}: decimals {} out of range",
                    f.target, f.decimals
                )));
            }
            if f.rate.value() <= &num_rational::BigRational::default() {
                return Err(Error::Config(format!(
                    "airdrop campaign on {}: rate must be positive",
                    f.target
                )));
            }
            if f.eth_per_victim.is_some() && f.eth_total.is_some() {
                return Err(Error::Config(format!(
                    "airdrop campaign on {}: give eth_per_victim or eth_total, not both",
                    f.target
                )));
            }
        }
        for p in &self.counterfeits {
            if p.name == MatchStatus::Unrelated && p.symbol == MatchStatus::Unrelated {
                return Err(Error::Config(
                    "a counterfeit plan cannot be unrelated on both name and symbol".into(),
                ));
            }
        }
        let planted = self.counterfeits.iter().any(|p| p.per_target > 0)
            || self.decoys != DecoyPlan::default()
            || ad.campaigns > 0
            || !ad.fixed.is_empty()
            || a.campaigns > 0;
        if planted && self.targets == 0 && self.target_symbols.is_empty() {
            return Err(Error::Config(
                "planted tokens require at least one target".into(),
            ));
        }
        if self.span_days < 30 {
            return Err(Error::Config("span_days must be at least 30".into()));
        }
        Ok(())
    }
}
