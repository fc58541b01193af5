//! Creator, holder and money-flow graphs plus per-token popularity statistics.

mod cooccurrence;
mod creator;
pub mod json;
mod money_flow;
mod stats;

pub use cooccurrence::{creator_cooccurrence, CooccurrenceMatrix};
pub use creator::{build_creator_graph, CreatorGraph, CreatorNodeKind, CreatorProfile};
pub use json::GraphJson;
pub use money_flow::{
    min_edge_wei, trace_money_flow, FlowEdge, FlowNode, FlowNodeKind, MoneyFlowGraph,
    DEFAULT_MAX_DEPTH,
};
pub use stats::{
    build_holder_graph, replay_balances, stats_csv, token_stats, token_stats_all, BalanceReplay,
    HolderGraph, HolderProfile, TokenStats, SECONDS_PER_DAY, STATS_CSV_HEADER,
};
