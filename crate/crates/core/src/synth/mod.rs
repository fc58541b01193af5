//! Deterministic synthetic ledgers with planted counterfeits, scam campaigns, laundering
//! chains and benign noise, plus the ground truth to check detectors against.

mod config;
mod generate;
mod names;
mod output;
mod rng;
mod truth;

pub use config::{
    AirdropPlan, ArbitragePlan, CounterfeitPlan, DecoyPlan, FixedAirdrop, LaunderingPlan,
    NoisePlan, ScenarioConfig,
};
pub use generate::{generate, SynthOutput};
pub use names::{builtin_target, BUILTIN_TARGETS};
pub use output::{GROUND_TRUTH_FILE, LABELS_JSON_FILE, TARGETS_FILE};
pub use rng::{stream, Ids};
pub use truth::*;
