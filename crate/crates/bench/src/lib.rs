//! Shared workloads for the benchmarks.

use ctrack::chain_store::{ingest_texts, IndexedLedger};
use ctrack::synth::{generate, ScenarioConfig, SynthOutput};

/// A mid-sized generated ledger; `scale` multiplies campaign and noise counts.
pub fn scenario(scale: usize) -> ScenarioConfig {
    ScenarioConfig::from_toml_str(&format!(
        r#"
        seed = 9
        targets = 20
        creators = 10
        factory_fraction = 0.2
        max_holders = 6
        [[counterfeits]]
        name = "identical"
        symbol = "identical"
        per_target = {scale}
        [[counterfeits]]
        name = "combo"
        symbol = "combo"
        per_target = {scale}
        [decoys]
        rule1 = 2
        rule2 = 2
        rule3 = 2
        needs_review = 2
        [airdrop]
        campaigns = {air}
        [arbitrage]
        campaigns = {arb}
        type2_fraction = 0.3
        no_return_fraction = 0.2
        [noise]
        transactions = {noise}
        accounts = 200
        benign_tokens = 10
        [laundering]
        depth = 3
        exchanges = 3
    "#,
        air = 10 * scale,
        arb = 10 * scale,
        noise = 2_000 * scale,
    ))
    .expect("benchmark scenario parses")
}

pub fn generated(scale: usize) -> SynthOutput {
    generate(&scenario(scale)).expect("benchmark scenario generates")
}

pub fn ledger(out: &SynthOutput) -> IndexedLedger {
    ingest_texts(&out.texts, out.labels.clone()).ledger
}
