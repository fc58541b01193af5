//! Typed ledger records and their JSON Lines wire shapes.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::amount::{self, dec_str};
use crate::error::ParseError;
use crate::types::{decode_hex_bytes, Address, TxHash};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub number: u64,
    pub timestamp: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalTx {
    pub hash: TxHash,
    pub block: u64,
    pub from: Address,
    /// `None` for contract creation.
    pub to: Option<Address>,
    pub value_wei: BigUint,
    pub input_data: Vec<u8>,
    pub status: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CallType {
    Call,
    Create,
    Suicide,
    Staticcall,
    Delegatecall,
}

impl FromStr for CallType {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "call" => Ok(Self::Call),
            "create" | "create2" => Ok(Self::Create),
            "suicide" | "selfdestruct" => Ok(Self::Suicide),
            "staticcall" => Ok(Self::Staticcall),
            "delegatecall" => Ok(Self::Delegatecall),
            _ => Err(ParseError::CallType(s.to_string())),
        }
    }
}

impl fmt::Display for CallType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Call => "call",
            Self::Create => "create",
            Self::Suicide => "suicide",
            Self::Staticcall => "staticcall",
            Self::Delegatecall => "delegatecall",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InternalTx {
    pub parent_hash: TxHash,
    pub trace_index: u32,
    pub from: Address,
    pub to: Address,
    pub value_wei: BigUint,
    pub call_type: CallType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractRecord {
    pub address: Address,
    pub creator: Address,
    pub creation_tx: TxHash,
    pub bytecode: Vec<u8>,
    pub created_block: u64,
    /// The creator is itself a contract (factory deployment).
    pub created_via_internal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenRecord {
    pub address: Address,
    pub name: String,
    pub symbol: String,
    pub decimals: u8,
    #[serde(with = "dec_str")]
    pub total_supply_raw: BigUint,
}

pub const MAX_DECIMALS: u8 = 77;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferEvent {
    pub tx_hash: TxHash,
    pub log_index: u32,
    pub token: Address,
    pub from: Address,
    pub to: Address,
    #[serde(with = "dec_str")]
    pub amount_raw: BigUint,
}

/// Operator-supplied address labels.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSet {
    #[serde(rename = "exchanges", default)]
    pub exchange_addresses: BTreeSet<Address>,
    #[serde(default)]
    pub trusted_creators: BTreeSet<Address>,
    #[serde(rename = "official_tokens", default)]
    pub official_token_allowlist: BTreeSet<Address>,
    #[serde(rename = "migrated_tokens", default)]
    pub migrated_token_allowlist: BTreeSet<Address>,
}

// ---------------------------------------------------------------------------
// JSON Lines wire shapes. Hex and decimal fields arrive as strings and are
// validated separately so that a bad field yields a precise rejection.
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize, Serialize)]
pub(crate) struct RawTx {
    pub hash: String,
    pub block: u64,
    pub from: String,
    pub to: Option<String>,
    pub value_wei: String,
    #[serde(default)]
    pub input: String,
    pub status: bool,
}

#[derive(Debug, Deserialize, Serialize)]
pub(crate) struct RawInternalTx {
    pub parent_hash: String,
    pub trace_index: u32,
    pub from: String,
    pub to: String,
    pub value_wei: String,
    pub call_type: String,
}

#[derive(Debug, Deserialize, Serialize)]
pub(crate) struct RawContract {
    pub address: String,
    pub creator: String,
    pub creation_tx: String,
    pub bytecode: String,
    pub created_block: u64,
}

#[derive(Debug, Deserialize, Serialize)]
pub(crate) struct RawTransfer {
    pub tx_hash: String,
    pub log_index: u32,
    pub token: String,
    pub from: String,
    pub to: String,
    pub amount_raw: String,
}

#[derive(Debug, Deserialize, Serialize)]
pub(crate) struct RawTokenMetadata {
    pub address: String,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub symbol: String,
    pub decimals: i64,
    pub total_supply_raw: String,
}

impl RawTx {
    pub fn validate(self) -> Result<ExternalTx, String> {
        Ok(ExternalTx {
            hash: field("hash", self.hash.parse())?,
            block: self.block,
            from: field("from", self.from.parse())?,
            to: match self.to {
                Some(t) => Some(field("to", t.parse())?),
                None => None,
            },
            value_wei: field("value_wei", amount::parse_biguint(&self.value_wei))?,
            input_data: field("input", decode_hex_bytes(&self.input))?,
            status: self.status,
        })
    }

    pub fn from_record(tx: &ExternalTx) -> Self {
        Self {
            hash: tx.hash.to_string(),
            block: tx.block,
            from: tx.from.to_string(),
            to: tx.to.map(|a| a.to_string()),
            value_wei: tx.value_wei.to_string(),
            input: format!("0x{}", hex::encode(&tx.input_data)),
            status: tx.status,
        }
    }
}

impl RawInternalTx {
    pub fn validate(self) -> Result<InternalTx, String> {
        Ok(InternalTx {
            parent_hash: field("parent_hash", self.parent_hash.parse())?,
            trace_index: self.trace_index,
            from: field("from", self.from.parse())?,
            to: field("to", self.to.parse())?,
            value_wei: field("value_wei", amount::parse_biguint(&self.value_wei))?,
            call_type: field("call_type", self.call_type.parse())?,
        })
    }

    pub fn from_record(tx: &InternalTx) -> Self {
        Self {
            parent_hash: tx.parent_hash.to_string(),
            trace_index: tx.trace_index,
            from: tx.from.to_string(),
            to: tx.to.to_string(),
            value_wei: tx.value_wei.to_string(),
            call_type: tx.call_type.to_string(),
        }
    }
}

impl RawContract {
    /// `created_via_internal` is resolved later against the full contract set.
    pub fn validate(self) -> Result<ContractRecord, String> {
        Ok(ContractRecord {
            address: field("address", self.address.parse())?,
            creator: field("creator", self.creator.parse())?,
            creation_tx: field("creation_tx", self.creation_tx.parse())?,
            bytecode: field("bytecode", decode_hex_bytes(&self.bytecode))?,
            created_block: self.created_block,
            created_via_internal: false,
        })
    }

    pub fn from_record(c: &ContractRecord) -> Self {
        Self {
            address: c.address.to_string(),
            creator: c.creator.to_string(),
            creation_tx: c.creation_tx.to_string(),
            bytecode: format!("0x{}", hex::encode(&c.bytecode)),
            created_block: c.created_block,
        }
    }
}

impl RawTransfer {
    pub fn validate(self) -> Result<TransferEvent, String> {
        Ok(TransferEvent {
            tx_hash: field("tx_hash", self.tx_hash.parse())?,
            log_index: self.log_index,
            token: field("token", self.token.parse())?,
            from: field("from", self.from.parse())?,
            to: field("to", self.to.parse())?,
            amount_raw: field("amount_raw", amount::parse_biguint(&self.amount_raw))?,
        })
    }

    pub fn from_record(t: &TransferEvent) -> Self {
        Self {
            tx_hash: t.tx_hash.to_string(),
            log_index: t.log_index,
            token: t.token.to_string(),
            from: t.from.to_string(),
            to: t.to.to_string(),
            amount_raw: t.amount_raw.to_string(),
        }
    }
}

impl RawTokenMetadata {
    pub fn validate(self) -> Result<TokenRecord, String> {
        if !(0..=MAX_DECIMALS as i64).contains(&self.decimals) {
            return Err(format!(
                "decimals: {} outside 0..={MAX_DECIMALS}",
                self.decimals
            ));
        }
        Ok(TokenRecord {
            address: field("address", self.address.parse())?,
            name: self.name,
            symbol: self.symbol,
            decimals: self.decimals as u8,
            total_supply_raw: field(
                "total_supply_raw",
                amount::parse_biguint(&self.total_supply_raw),
            )?,
        })
    }

    pub fn from_record(t: &TokenRecord) -> Self {
        Self {
            address: t.address.to_string(),
            name: t.name.clone(),
            symbol: t.symbol.clone(),
            decimals: t.decimals as i64,
            total_supply_raw: t.total_supply_raw.to_string(),
        }
    }
}

fn field<T>(name: &str, r: Result<T, ParseError>) -> Result<T, String> {
    r.map_err(|e| format!("{name}: {e}"))
}
