//! Programmatic ledger construction for tests, benches and the generator.

use num_bigint::BigUint;

use crate::chain_store::{
    erc20_stub, ingest_texts, Block, CallType, ContractRecord, ExternalTx, Ingested, InternalTx,
    LabelSet, LedgerTexts, LedgerWriter, TokenRecord, TransferEvent,
};
use crate::types::{Address, TxHash};

/// Appends records in the wire format; tx hashes are allocated sequentially
/// unless given explicitly.
#[derive(Debug, Default)]
pub struct LedgerBuilder {
    writer: LedgerWriter,
    last_block: Option<Block>,
    next_hash: u64,
}

impl LedgerBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a block explicitly.
    pub fn block(&mut self, number: u64, timestamp: u64) -> u64 {
        let b = Block { number, timestamp };
        self.writer.block(&b);
        if self.last_block.is_none_or(|l| number >= l.number) {
            self.last_block = Some(b);
        }
        number
    }

    /// Block at `timestamp`: reuses the latest block when the timestamp matches,
    /// otherwise opens the next block number.
    pub fn at(&mut self, timestamp: u64) -> u64 {
        match self.last_block {
            Some(b) if b.timestamp == timestamp => b.number,
            Some(b) => {
                assert!(timestamp > b.timestamp, "timestamps must not go backwards");
                self.block(b.number + 1, timestamp)
            }
            None => self.block(1, timestamp),
        }
    }

    pub fn fresh_hash(&mut self) -> TxHash {
        self.next_hash += 1;
        TxHash::from_low_u64(0x7000_0000_0000_0000 | self.next_hash)
    }

    pub fn push_tx(&mut self, tx: &ExternalTx) {
        self.writer.tx(tx);
    }

    /// Plain value transfer (or contract call) with success status.
    pub fn send(&mut self, block: u64, from: Address, to: Address, value_wei: BigUint) -> TxHash {
        let hash = self.fresh_hash();
        self.writer.tx(&ExternalTx {
            hash,
            block,
            from,
            to: Some(to),
            value_wei,
            input_data: Vec::new(),
            status: true,
        });
        hash
    }

    pub fn internal(
        &mut self,
        parent: TxHash,
        trace_index: u32,
        from: Address,
        to: Address,
        value_wei: BigUint,
    ) {
        self.writer.internal(&InternalTx {
            parent_hash: parent,
            trace_index,
            from,
            to,
            value_wei,
            call_type: CallType::Call,
        });
    }

    pub fn push_internal(&mut self, itx: &InternalTx) {
        self.writer.internal(itx);
    }

    pub fn push_contract(&mut self, c: &ContractRecord) {
        self.writer.contract(c);
    }

    pub fn push_token(&mut self, t: &TokenRecord) {
        self.writer.token(t);
    }

    /// Deploys an ERC-20 stub from an EOA and registers its metadata.
    /// Returns the creation transaction hash.
    #[allow(clippy::too_many_arguments)]
    pub fn deploy_token(
        &mut self,
        block: u64,
        creator: Address,
        address: Address,
        name: &str,
        symbol: &str,
        decimals: u8,
        total_supply_raw: BigUint,
    ) -> TxHash {
        let hash = self.fresh_hash();
        self.writer.tx(&ExternalTx {
            hash,
            block,
            from: creator,
            to: None,
            value_wei: BigUint::default(),
            input_data: Vec::new(),
            status: true,
        });
        self.writer.contract(&ContractRecord {
            address,
            creator,
            creation_tx: hash,
            bytecode: erc20_stub(address.as_bytes()),
            created_block: block,
            created_via_internal: false,
        });
        self.writer.token(&TokenRecord {
            address,
            name: name.to_string(),
            symbol: symbol.to_string(),
            decimals,
            total_supply_raw,
        });
        hash
    }

    pub fn transfer(
        &mut self,
        tx_hash: TxHash,
        log_index: u32,
        token: Address,
        from: Address,
        to: Address,
        amount_raw: BigUint,
    ) {
        self.writer.transfer(&TransferEvent {
            tx_hash,
            log_index,
            token,
            from,
            to,
            amount_raw,
        });
    }

    pub fn finish(self) -> LedgerTexts {
        self.writer.finish()
    }

    pub fn ingest(self, labels: LabelSet) -> Ingested {
        ingest_texts(&self.finish(), labels)
    }
}

/// `n` whole ETH in wei.
pub fn eth(n: u64) -> BigUint {
    BigUint::from(n) * crate::amount::wei_per_eth()
}

/// Address with a readable tag in its low bytes.
pub fn addr(n: u64) -> Address {
    Address::from_low_u64(n)
}
