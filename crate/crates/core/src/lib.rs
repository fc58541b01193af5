//! Detection of counterfeit ERC-20 tokens and the airdrop and arbitrage scams built on
//! them, from exported ledger data.

pub mod amount;
pub mod chain_store;
pub mod counterfeit;
pub mod error;
pub mod fixture;
pub mod graph;
pub mod pipeline;
pub mod scam;
pub mod synth;
pub mod types;

pub use error::{Error, ParseError, Result};
pub use types::{Address, TxHash};
