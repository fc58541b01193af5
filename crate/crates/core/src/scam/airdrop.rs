//! Airdrop scams: the counterfeit contract itself takes ETH, forwards it to a collector
//! and pays out tokens at a fixed rate, all inside one transaction.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::DetectorConfig;
use crate::amount::{self, dec_str};
use crate::chain_store::{ExternalTx, IndexedLedger};
use crate::error::{Error, Result};
use crate::types::{Address, TxHash};

/// Exact tokens-per-ETH rate. Serialised as `{"exact": "p/q", "approx": f64}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rate(pub BigRational);

impl Rate {
    pub fn as_f64(&self) -> f64 {
        amount::ratio_to_f64(&self.0)
    }
}

impl Serialize for Rate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Rate", 2)?;
        st.serialize_field("exact", &self.0.to_string())?;
        st.serialize_field("approx", &self.as_f64())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Rate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            exact: String,
        }
        let r = Repr::deserialize(d)?;
        r.exact
            .parse::<BigRational>()
            .map(Rate)
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AirdropEvidence {
    pub tx_hash: TxHash,
    pub victim: Address,
    #[serde(with = "dec_str")]
    pub eth_in_wei: BigUint,
    #[serde(with = "dec_str")]
    pub tokens_out_raw: BigUint,
    pub rate_tokens_per_eth: Rate,
    pub eth_forward_to: Address,
    pub token_distributor: Address,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AirdropFinding {
    pub token: Address,
    /// Median of the per-transaction rates.
    pub rate: Rate,
    pub evidences: Vec<AirdropEvidence>,
    pub victims: BTreeSet<Address>,
    #[serde(with = "dec_str")]
    pub eth_total_wei: BigUint,
}

/// `(raw / 10^decimals) / (wei / 10^18)` as an exact rational.
pub fn decimals_adjusted_rate(tokens_raw: &BigUint, decimals: u8, wei: &BigUint) -> BigRational {
    let numer = BigInt::from(tokens_raw.clone()) * BigInt::from(amount::wei_per_eth());
    let denom = BigInt::from(wei.clone()) * BigInt::from(amount::pow10(decimals as u32));
    BigRational::new(numer, denom)
}

/// Median of a non-empty sorted slice; mean of the middle pair for even lengths.
pub fn median(sorted: &[BigRational]) -> BigRational {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2].clone()
    } else {
        (&sorted[n / 2 - 1] + &sorted[n / 2]) / BigRational::from_integer(BigInt::from(2))
    }
}

/// Whether every rate is within `tol` (relative) of `center`.
pub fn rates_agree(rates: &[BigRational], center: &BigRational, tol: &BigRational) -> bool {
    let bound = (center * tol).abs();
    rates.iter().all(|r| (r - center).abs() <= bound)
}

/// Checks conditions one to three against a single external transaction.
fn evidence_for(
    ledger: &IndexedLedger,
    token: &Address,
    decimals: u8,
    tx: &ExternalTx,
    cfg: &DetectorConfig,
) -> Option<AirdropEvidence> {
    // (1) victim sends ETH to the contract
    if !tx.status
        || tx.to != Some(*token)
        || tx.value_wei.is_zero()
        || tx.value_wei < cfg.min_eth_wei
    {
        return None;
    }
    let victim = tx.from;

    // (2) tokens of this contract credited to the sender inside the same transaction
    let credits: Vec<_> = ledger
        .transfers_in_tx(&tx.hash)
        .iter()
        .filter(|ev| ev.token == *token && ev.to == victim && !ev.amount_raw.is_zero())
        .collect();
    let first_credit = credits.first()?;
    let tokens_out: BigUint = credits.iter().map(|ev| &ev.amount_raw).sum();

    // (3) the contract forwards the received ETH onwards, possibly split
    let forwards: Vec<_> = ledger
        .internal_txs_of(&tx.hash)
        .iter()
        .filter(|itx| itx.from == *token && !itx.value_wei.is_zero())
        .collect();
    if forwards.is_empty() {
        return None;
    }
    let forwarded: BigUint = forwards.iter().map(|itx| &itx.value_wei).sum();
    if forwarded != tx.value_wei {
        return None;
    }
    // largest share wins; ties go to the lowest trace index (internal txs are sorted)
    let forward_to = forwards
        .iter()
        .fold(
            None::<&&crate::chain_store::InternalTx>,
            |best, itx| match best {
                Some(b) if b.value_wei >= itx.value_wei => Some(b),
                _ => Some(itx),
            },
        )
        .map(|itx| itx.to)?;

    Some(AirdropEvidence {
        tx_hash: tx.hash,
        victim,
        eth_in_wei: tx.value_wei.clone(),
        rate_tokens_per_eth: Rate(decimals_adjusted_rate(&tokens_out, decimals, &tx.value_wei)),
        tokens_out_raw: tokens_out,
        eth_forward_to: forward_to,
        token_distributor: first_credit.from,
    })
}

/// Collects airdrop evidence for one token and returns a finding when enough
/// transactions qualify and their rates agree with the median.
pub fn detect_airdrop(
    ledger: &IndexedLedger,
    token: &Address,
    cfg: &DetectorConfig,
) -> Result<Option<AirdropFinding>> {
    let record = ledger.token(token).ok_or(Error::UnknownToken(*token))?;
    if ledger.transfer_count(token) == 0 {
        return Ok(None);
    }
    let t_end = ledger.blocks().last().map_or(0, |b| b.timestamp);
    let evidences: Vec<AirdropEvidence> = ledger
        .eth_sends_to(token, 0, t_end)?
        .into_iter()
        .filter_map(|tx| evidence_for(ledger, token, record.decimals, tx, cfg))
        .collect();
    if evidences.is_empty() || evidences.len() < cfg.min_airdrop_txs {
        return Ok(None);
    }

    let mut rates: Vec<BigRational> = evidences
        .iter()
        .map(|e| e.rate_tokens_per_eth.0.clone())
        .collect();
    rates.sort();
    let center = median(&rates);
    if !rates_agree(&rates, &center, cfg.rate_rel_tol.value()) {
        return Ok(None);
    }

    Ok(Some(AirdropFinding {
        token: *token,
        rate: Rate(center),
        victims: evidences.iter().map(|e| e.victim).collect(),
        eth_total_wei: evidences.iter().map(|e| &e.eth_in_wei).sum(),
        evidences,
    }))
}
