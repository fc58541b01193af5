use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha20Rng;

use super::config::ScenarioConfig;
use super::names::{builtin_target, draw_identifiers, BUILTIN_TARGETS};
use super::rng::{stream, Ids};
use super::truth::*;
use crate::amount::{pow10, wei_per_eth};
use crate::chain_store::{
    erc20_stub, stub_runtime, Block, CallType, ContractRecord, ExternalTx, InternalTx, LabelSet,
    LedgerTexts, LedgerWriter, TokenRecord, TransferEvent,
};
use crate::counterfeit::{FilterVerdict, MatchClass, MatchStatus, TargetToken};
use crate::error::{Error, Result};
use crate::types::{Address, TxHash};

const DAY: u64 = 86_400;
const HOUR: u64 = 3_600;
/// Well past the default arbitrage window, so rounds never overlap.
const ROUND_GAP_MIN: u64 = 4 * HOUR;
const AIRDROP_RATES: &[u64] = &[
    330, 1_215, 5_000, 10_000, 32_000, 47_015, 53_992, 91_255, 1_000_000, 1_125_000,
];
const AIRDROP_DECIMALS: &[u8] = &[18, 18, 8, 6];

/// Everything `generate` produces.
#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub texts: LedgerTexts,
    pub labels: LabelSet,
    pub targets: Vec<TargetToken>,
    pub truth: GroundTruth,
}

/// One transaction and everything it emits, placed on the timeline.
struct TxGroup {
    ts: u64,
    tx: ExternalTx,
    internals: Vec<InternalTx>,
    transfers: Vec<TransferEvent>,
    contract: Option<ContractRecord>,
    token: Option<TokenRecord>,
}

#[derive(Default)]
struct Timeline {
    groups: Vec<TxGroup>,
}

impl Timeline {
    fn push(&mut self, ts: u64, tx: ExternalTx) -> &mut TxGroup {
        self.groups.push(TxGroup {
            ts,
            tx,
            internals: Vec::new(),
            transfers: Vec::new(),
            contract: None,
            token: None,
        });
        self.groups.last_mut().expect("just pushed")
    }

    /// Writes groups in time order; each distinct timestamp gets the next block number.
    fn emit(mut self) -> LedgerTexts {
        self.groups.sort_by_key(|g| g.ts);
        let mut w = LedgerWriter::default();
        let mut block: Option<Block> = None;
        for mut g in self.groups {
            let number = match block {
                Some(b) if b.timestamp == g.ts => b.number,
                Some(b) => b.number + 1,
                None => 1,
            };
            if block.map(|b| b.number) != Some(number) {
                let b = Block {
                    number,
                    timestamp: g.ts,
                };
                w.block(&b);
                block = Some(b);
            }
            g.tx.block = number;
            w.tx(&g.tx);
            for itx in &g.internals {
                w.internal(itx);
            }
            if let Some(mut c) = g.contract {
                c.created_block = number;
                w.contract(&c);
            }
            if let Some(t) = &g.token {
                w.token(t);
            }
            for ev in &g.transfers {
                w.transfer(ev);
            }
        }
        w.finish()
    }
}

fn call(hash: TxHash, from: Address, to: Option<Address>, value_wei: BigUint) -> ExternalTx {
    ExternalTx {
        hash,
        block: 0,
        from,
        to,
        value_wei,
        input_data: Vec::new(),
        status: true,
    }
}

fn transfer(
    tx: TxHash,
    log_index: u32,
    token: Address,
    from: Address,
    to: Address,
    amount: BigUint,
) -> TransferEvent {
    TransferEvent {
        tx_hash: tx,
        log_index,
        token,
        from,
        to,
        amount_raw: amount,
    }
}

fn centi_eth(c: u64) -> BigUint {
    BigUint::from(c) * pow10(16)
}

struct Ctx<'a> {
    cfg: &'a ScenarioConfig,
    ids: Ids,
    targets: Vec<TargetToken>,
    official_creator: BTreeMap<Address, Address>,
    timeline: Timeline,
    labels: LabelSet,
    truth: GroundTruth,
    /// Unspent ETH per scam receiver, laundered at the end of its campaign.
    proceeds: BTreeMap<Address, (u64, BigUint, String)>,
    factories: BTreeSet<Address>,
}

impl<'a> Ctx<'a> {
    fn t0(&self) -> u64 {
        self.cfg.start_timestamp
    }

    fn span(&self) -> u64 {
        self.cfg.span_days * DAY
    }

    /// Deploys an ERC-20 stub and mints `supply` to `holder` in the creation tx.
    #[allow(clippy::too_many_arguments)]
    fn deploy_token(
        &mut self,
        ts: u64,
        tx: TxHash,
        deployer: Address,
        factory: Option<Address>,
        token: Address,
        name: &str,
        symbol: &str,
        decimals: u8,
        supply: BigUint,
        holder: Address,
    ) {
        let creator = factory.unwrap_or(deployer);
        let g = self
            .timeline
            .push(ts, call(tx, deployer, factory, BigUint::default()));
        g.contract = Some(ContractRecord {
            address: token,
            creator,
            creation_tx: tx,
            bytecode: erc20_stub(token.as_bytes()),
            created_block: 0,
            created_via_internal: factory.is_some(),
        });
        g.token = Some(TokenRecord {
            address: token,
            name: name.to_string(),
            symbol: symbol.to_string(),
            decimals,
            total_supply_raw: supply.clone(),
        });
        g.transfers
            .push(transfer(tx, 0, token, Address::ZERO, holder, supply));
    }

    /// A token transfer sent by `from` as a zero-value call to the token.
    fn token_transfer(
        &mut self,
        ts: u64,
        tx: TxHash,
        token: Address,
        from: Address,
        to: Address,
        amount: BigUint,
    ) {
        let g = self
            .timeline
            .push(ts, call(tx, from, Some(token), BigUint::default()));
        g.transfers.push(transfer(tx, 0, token, from, to, amount));
    }

    fn send(&mut self, ts: u64, tx: TxHash, from: Address, to: Address, wei: BigUint) {
        self.timeline.push(ts, call(tx, from, Some(to), wei));
    }

    fn credit(&mut self, receiver: Address, at: u64, wei: &BigUint, tag: &str) {
        let e = self
            .proceeds
            .entry(receiver)
            .or_insert((0, BigUint::default(), tag.to_string()));
        e.0 = e.0.max(at);
        e.1 += wei;
    }

    fn target_by_symbol(&self, symbol: &str) -> Result<TargetToken> {
        self.targets
            .iter()
            .find(|t| t.symbol == symbol)
            .cloned()
            .ok_or_else(|| Error::Config(format!("{symbol} is not among the scenario targets")))
    }

    fn plant(&mut self, p: PlantedToken) {
        self.truth.tokens.push(p);
    }
}

fn resolve_targets(cfg: &ScenarioConfig, ids: &Ids) -> Result<Vec<TargetToken>> {
    if !cfg.target_symbols.is_empty() {
        let mut seen = BTreeSet::new();
        return cfg
            .target_symbols
            .iter()
            .map(|s| {
                if !seen.insert(s) {
                    return Err(Error::Config(format!("target {s} listed twice")));
                }
                builtin_target(s, ids)
                    .ok_or_else(|| Error::Config(format!("unknown target symbol {s}")))
            })
            .collect();
    }
    if cfg.targets > BUILTIN_TARGETS.len() {
        return Err(Error::Config(format!(
            "at most {} builtin targets are available",
            BUILTIN_TARGETS.len()
        )));
    }
    Ok(BUILTIN_TARGETS[..cfg.targets]
        .iter()
        .map(|t| builtin_target(t.2, ids).expect("builtin"))
        .collect())
}

fn setup_targets(cx: &mut Ctx) {
    let t0 = cx.t0();
    for (i, t) in cx.targets.clone().iter().enumerate() {
        let creator = cx.ids.address(&format!("official-creator/{}", t.symbol), 0);
        let tx = cx.ids.tx(&format!("official/{}", t.symbol), 0);
        let supply = BigUint::from(1_000_000_000u64) * pow10(18);
        cx.deploy_token(
            t0 + i as u64,
            tx,
            creator,
            None,
            t.address,
            &t.name,
            &t.symbol,
            18,
            supply,
            creator,
        );
        cx.official_creator.insert(t.address, creator);
        cx.labels.official_token_allowlist.insert(t.address);
    }
}

fn factory_for(cx: &mut Ctx, creator: Address) -> Address {
    let factory = cx.ids.address(&format!("factory/{creator}"), 0);
    if cx.factories.insert(factory) {
        let tx = cx.ids.tx(&format!("factory/{creator}"), 0);
        let g = cx
            .timeline
            .push(cx.t0() + 1_000, call(tx, creator, None, BigUint::default()));
        g.contract = Some(ContractRecord {
            address: factory,
            creator,
            creation_tx: tx,
            bytecode: stub_runtime(&[], factory.as_bytes()),
            created_block: 0,
            created_via_internal: false,
        });
    }
    factory
}

fn plain_counterfeits(cx: &mut Ctx) -> Result<()> {
    let cfg = cx.cfg;
    for (pi, plan) in cfg.counterfeits.iter().enumerate() {
        let intended = MatchClass::new(plan.name, plan.symbol);
        for target in cx.targets.clone() {
            for k in 0..plan.per_target {
                let tag = format!("counterfeit/{pi}/{}/{k}", target.symbol);
                let mut rng = stream(cfg.seed, &tag);
                let (name, symbol) =
                    draw_identifiers(intended, Some(&target), &cx.targets, &mut rng)?;
                let creator = if cfg.creators > 0 {
                    cx.ids
                        .address("creator", rng.gen_range(0..cfg.creators) as u64)
                } else {
                    cx.ids.address(&tag, 1)
                };
                let factory = rng
                    .gen_bool(cfg.factory_fraction)
                    .then(|| factory_for(cx, creator));
                let token = cx.ids.address(&tag, 0);
                let deployed = cx.t0() + DAY + rng.gen_range(0..cx.span() / 2);
                let supply = BigUint::from(rng.gen_range(1_000u64..1_000_000_000)) * pow10(18);
                cx.deploy_token(
                    deployed,
                    cx.ids.tx(&tag, 0),
                    creator,
                    factory,
                    token,
                    &name,
                    &symbol,
                    18,
                    supply.clone(),
                    creator,
                );
                // holders never send ETH, so plain tokens stay clear of the scam detectors
                let holders = rng.gen_range(0..=cfg.max_holders);
                let mut ts = deployed;
                for h in 0..holders {
                    ts += rng.gen_range(60..=20 * DAY);
                    let holder = cx.ids.address(&format!("{tag}/holder"), h as u64);
                    let amount =
                        &supply / BigUint::from(2 * holders as u64 + rng.gen_range(1..4u64));
                    cx.token_transfer(
                        ts,
                        cx.ids.tx(&tag, 1 + h as u64),
                        token,
                        creator,
                        holder,
                        amount,
                    );
                }
                cx.plant(PlantedToken {
                    token,
                    target: target.address,
                    target_symbol: target.symbol.clone(),
                    name,
                    symbol,
                    intended,
                    verdict: FilterVerdict::Confirmed,
                    creator: factory.unwrap_or(creator),
                    factory,
                    scam: None,
                });
            }
        }
    }
    Ok(())
}

fn decoys(cx: &mut Ctx) -> Result<()> {
    let d = cx.cfg.decoys.clone();
    let identical = MatchClass::new(MatchStatus::Identical, MatchStatus::Identical);
    let kinds = [
        ("rule1", d.rule1, FilterVerdict::FilteredRule1),
        ("rule2", d.rule2, FilterVerdict::FilteredRule2),
        ("rule3", d.rule3, FilterVerdict::FilteredRule3),
        ("review", d.needs_review, FilterVerdict::NeedsReview),
    ];
    let short: Vec<TargetToken> = cx
        .targets
        .iter()
        .filter(|t| t.symbol.chars().count() < crate::counterfeit::SHORT_IDENTIFIER_CHARS)
        .cloned()
        .collect();
    for (kind, count, verdict) in kinds {
        for i in 0..count {
            let tag = format!("decoy/{kind}/{i}");
            let mut rng = stream(cx.cfg.seed, &tag);
            let (target, intended) = if verdict == FilterVerdict::NeedsReview {
                let t = short.get(i % short.len().max(1)).cloned().ok_or_else(|| {
                    Error::Config("needs_review decoys require a target with a short symbol".into())
                })?;
                (
                    t,
                    MatchClass::new(MatchStatus::Unrelated, MatchStatus::Combo),
                )
            } else {
                (cx.targets[i % cx.targets.len()].clone(), identical)
            };
            let (name, symbol) = draw_identifiers(intended, Some(&target), &cx.targets, &mut rng)?;
            let token = cx.ids.address(&tag, 0);
            let creator = match verdict {
                FilterVerdict::FilteredRule2 => {
                    let c = cx.official_creator[&target.address];
                    cx.labels.trusted_creators.insert(c);
                    c
                }
                _ => cx.ids.address(&tag, 1),
            };
            match verdict {
                FilterVerdict::FilteredRule1 => {
                    cx.labels.migrated_token_allowlist.insert(token);
                }
                FilterVerdict::FilteredRule3 => {
                    cx.labels.official_token_allowlist.insert(token);
                }
                _ => {}
            }
            let ts = cx.t0() + DAY + rng.gen_range(0..cx.span() / 2);
            let supply = BigUint::from(1_000_000u64) * pow10(18);
            cx.deploy_token(
                ts,
                cx.ids.tx(&tag, 0),
                creator,
                None,
                token,
                &name,
                &symbol,
                18,
                supply,
                creator,
            );
            cx.plant(PlantedToken {
                token,
                target: target.address,
                target_symbol: target.symbol.clone(),
                name,
                symbol,
                intended,
                verdict,
                creator,
                factory: None,
                scam: None,
            });
        }
    }
    Ok(())
}

/// Per-victim amounts in hundredths of an ETH.
fn split_centi(total: u64, n: usize) -> Vec<u64> {
    let (q, r) = total.div_rem(&(n as u64));
    (0..n as u64).map(|i| q + u64::from(i < r)).collect()
}

fn to_centi(v: &crate::amount::ExactDecimal, what: &str) -> Result<u64> {
    let c = v.value() * BigRational::from_integer(100.into());
    if !c.is_integer() || c <= BigRational::default() {
        return Err(Error::Config(format!(
            "{what} must be positive with at most two decimals"
        )));
    }
    u64::try_from(c.to_integer()).map_err(|_| Error::Config(format!("{what} is too large")))
}

struct AirdropSpec {
    tag: String,
    target: TargetToken,
    rate: BigRational,
    rate_text: String,
    decimals: u8,
    centi: Vec<u64>,
}

fn airdrop_specs(cx: &Ctx) -> Result<Vec<AirdropSpec>> {
    let plan = &cx.cfg.airdrop;
    let mut specs = Vec::new();
    for (i, f) in plan.fixed.iter().enumerate() {
        let target = cx.target_by_symbol(&f.target)?;
        let centi = match (&f.eth_per_victim, &f.eth_total) {
            (Some(per), None) => vec![to_centi(per, "eth_per_victim")?; f.victims],
            (None, Some(total)) => {
                let c = to_centi(total, "eth_total")?;
                if c < f.victims as u64 {
                    return Err(Error::Config(format!(
                        "eth_total on {} is below 0.01 ETH per victim",
                        f.target
                    )));
                }
                split_centi(c, f.victims)
            }
            _ => {
                let mut rng = stream(cx.cfg.seed, &format!("airdrop/fixed/{i}/amounts"));
                (0..f.victims).map(|_| rng.gen_range(2..=300)).collect()
            }
        };
        specs.push(AirdropSpec {
            tag: format!("airdrop/fixed/{i}"),
            target,
            rate: f.rate.value().clone(),
            rate_text: f.rate.as_str().to_string(),
            decimals: f.decimals,
            centi,
        });
    }
    for i in 0..plan.campaigns {
        let tag = format!("airdrop/random/{i}");
        let mut rng = stream(cx.cfg.seed, &tag);
        let target = cx
            .targets
            .choose(&mut rng)
            .expect("validated non-empty")
            .clone();
        let rate = *AIRDROP_RATES.choose(&mut rng).expect("non-empty");
        let victims = rng.gen_range(plan.min_victims..=plan.max_victims);
        specs.push(AirdropSpec {
            tag,
            target,
            rate: BigRational::from_integer(rate.into()),
            rate_text: rate.to_string(),
            decimals: *AIRDROP_DECIMALS.choose(&mut rng).expect("non-empty"),
            centi: (0..victims).map(|_| rng.gen_range(2..=300)).collect(),
        });
    }
    Ok(specs)
}

fn airdrops(cx: &mut Ctx) -> Result<()> {
    for spec in airdrop_specs(cx)? {
        let tag = &spec.tag;
        let mut rng = stream(cx.cfg.seed, &format!("{tag}/layout"));
        let token = cx.ids.address(tag, 0);
        let creator = cx.ids.address(tag, 1);
        let wallet = if rng.gen_bool(0.5) {
            creator
        } else {
            cx.ids.address(tag, 2)
        };
        let identical = MatchClass::new(MatchStatus::Identical, MatchStatus::Identical);
        let (name, symbol) =
            draw_identifiers(identical, Some(&spec.target), &cx.targets, &mut rng)?;

        let scale = BigRational::from_integer(pow10(spec.decimals as u32).into())
            / BigRational::from_integer(wei_per_eth().into());
        let amounts: Vec<(BigUint, BigUint)> = spec
            .centi
            .iter()
            .map(|&c| {
                let wei = centi_eth(c);
                let raw = (BigRational::from_integer(wei.clone().into()) * &spec.rate * &scale)
                    .floor()
                    .to_integer()
                    .to_biguint()
                    .expect("non-negative");
                (wei, raw)
            })
            .collect();
        let supply: BigUint = amounts.iter().map(|(_, r)| r).sum::<BigUint>() * 2u32 + 1u32;

        let deployed = cx.t0() + DAY + rng.gen_range(0..cx.span() * 3 / 5);
        cx.deploy_token(
            deployed,
            cx.ids.tx(tag, 0),
            creator,
            None,
            token,
            &name,
            &symbol,
            spec.decimals,
            supply,
            wallet,
        );

        let mut ts = deployed;
        let mut victims = Vec::new();
        let mut txs = Vec::new();
        let mut total = BigUint::default();
        for (v, (wei, raw)) in amounts.into_iter().enumerate() {
            ts += rng.gen_range(30..=2 * DAY);
            let victim = cx.ids.address(&format!("{tag}/victim"), v as u64);
            let tx = cx.ids.tx(tag, 1 + v as u64);
            let g = cx
                .timeline
                .push(ts, call(tx, victim, Some(token), wei.clone()));
            g.internals.push(InternalTx {
                parent_hash: tx,
                trace_index: 0,
                from: token,
                to: wallet,
                value_wei: wei.clone(),
                call_type: CallType::Call,
            });
            g.transfers
                .push(transfer(tx, 0, token, wallet, victim, raw));
            total += &wei;
            victims.push(victim);
            txs.push(tx);
        }
        cx.credit(wallet, ts, &total, tag);
        cx.plant(PlantedToken {
            token,
            target: spec.target.address,
            target_symbol: spec.target.symbol.clone(),
            name,
            symbol,
            intended: identical,
            verdict: FilterVerdict::Confirmed,
            creator,
            factory: None,
            scam: Some(ScamKind::Airdrop),
        });
        cx.truth.airdrops.push(PlantedAirdrop {
            token,
            target_symbol: spec.target.symbol.clone(),
            rate: spec.rate_text,
            decimals: spec.decimals,
            creator,
            scam_wallet: wallet,
            victims,
            evidence_txs: txs,
            eth_total_wei: total,
        });
    }
    Ok(())
}

fn draw_kind(rng: &mut ChaCha20Rng, cfg: &ScenarioConfig) -> VictimKind {
    let a = &cfg.arbitrage;
    if rng.gen_bool(a.no_return_fraction) {
        VictimKind::NoReturn
    } else if rng.gen_bool(a.type2_fraction) {
        VictimKind::Type2
    } else if rng.gen_bool(a.secondary_fraction) {
        VictimKind::Secondary
    } else {
        VictimKind::Plain
    }
}

enum Step {
    Pay {
        ts: u64,
        tx: TxHash,
        victim: Address,
        wei: BigUint,
    },
    Return {
        ts: u64,
        tx: TxHash,
        victim: Address,
        official: bool,
        amount: BigUint,
    },
}

fn arbitrage(cx: &mut Ctx) -> Result<()> {
    for i in 0..cx.cfg.arbitrage.campaigns {
        let tag = format!("arbitrage/{i}");
        let mut rng = stream(cx.cfg.seed, &tag);
        let target = cx
            .targets
            .choose(&mut rng)
            .expect("validated non-empty")
            .clone();
        let token = cx.ids.address(&tag, 0);
        let creator = cx.ids.address(&tag, 1);
        let receiver = cx.ids.address(&tag, 2);
        let distributor = if rng.gen_bool(0.5) {
            creator
        } else {
            cx.ids.address(&tag, 3)
        };
        let identical = MatchClass::new(MatchStatus::Identical, MatchStatus::Identical);
        let (name, symbol) = draw_identifiers(identical, Some(&target), &cx.targets, &mut rng)?;
        let token_per_centi = BigUint::from(rng.gen_range(1u64..=500)) * pow10(16);

        let start = cx.t0() + 2 * DAY + rng.gen_range(0..cx.span() * 3 / 5);
        let n = rng.gen_range(cx.cfg.arbitrage.min_victims..=cx.cfg.arbitrage.max_victims);
        let mut ntx = 1u64;
        let mut next_tx = |ids: &Ids| {
            ntx += 1;
            ids.tx(&tag, ntx)
        };
        let mut victims = Vec::new();
        let mut returned_total = BigUint::default();
        let mut paid_total = BigUint::default();
        let mut last = start;
        let mut official_needed = BigUint::default();
        let mut fake_out = BigUint::default();
        let mut steps: Vec<Step> = Vec::new();

        for v in 0..n {
            let victim = cx.ids.address(&format!("{tag}/victim"), v as u64);
            let kind = draw_kind(&mut rng, cx.cfg);
            let fake_rounds = match kind {
                VictimKind::Plain => 1,
                VictimKind::Secondary => rng.gen_range(2..=4),
                VictimKind::Type2 => rng.gen_range(1..=2),
                VictimKind::NoReturn => 0,
            };
            let mut ts = start + rng.gen_range(0..20 * DAY);
            let mut rounds = Vec::new();
            let mut first_centi = rng.gen_range(10..=2_000u64);
            let mut plan: Vec<(u64, Option<bool>)> = Vec::new();
            match kind {
                VictimKind::NoReturn => plan.push((first_centi, None)),
                VictimKind::Type2 => {
                    plan.push((first_centi, Some(true)));
                    for _ in 0..fake_rounds {
                        first_centi += rng.gen_range(10..=5_000);
                        plan.push((first_centi, Some(false)));
                    }
                }
                _ => {
                    for r in 0..fake_rounds {
                        let c = if r == 0 {
                            first_centi
                        } else {
                            rng.gen_range(10..=2_000)
                        };
                        plan.push((c, Some(false)));
                    }
                }
            }
            for (c, ret) in plan {
                let wei = centi_eth(c);
                let eth_tx = next_tx(&cx.ids);
                steps.push(Step::Pay {
                    ts,
                    tx: eth_tx,
                    victim,
                    wei: wei.clone(),
                });
                paid_total += &wei;
                let mut returned = None;
                if let Some(official) = ret {
                    let delta = rng.gen_range(60..=7_000);
                    let tx = next_tx(&cx.ids);
                    let amount = &token_per_centi * c;
                    if official {
                        official_needed += &amount;
                    } else {
                        fake_out += &amount;
                        returned_total += &wei;
                    }
                    steps.push(Step::Return {
                        ts: ts + delta,
                        tx,
                        victim,
                        official,
                        amount,
                    });
                    returned = Some(PlantedReturn {
                        tx,
                        log_index: 0,
                        official,
                        delta_seconds: delta,
                    });
                    ts += delta;
                }
                last = last.max(ts);
                rounds.push(PlantedRound {
                    eth_tx,
                    eth_wei: wei,
                    returned,
                });
                ts += rng.gen_range(ROUND_GAP_MIN..=3 * DAY);
            }
            victims.push(PlantedVictim {
                victim,
                kind,
                rounds,
            });
        }

        let supply = &fake_out * 2u32 + 1u32;
        cx.deploy_token(
            start - DAY,
            cx.ids.tx(&tag, 0),
            creator,
            None,
            token,
            &name,
            &symbol,
            18,
            supply,
            distributor,
        );
        if !official_needed.is_zero() {
            let official_creator = cx.official_creator[&target.address];
            let tx = cx.ids.tx(&tag, 1);
            cx.token_transfer(
                start - DAY + 60,
                tx,
                target.address,
                official_creator,
                distributor,
                official_needed,
            );
        }
        for step in steps {
            match step {
                Step::Pay {
                    ts,
                    tx,
                    victim,
                    wei,
                } => cx.send(ts, tx, victim, receiver, wei),
                Step::Return {
                    ts,
                    tx,
                    victim,
                    official,
                    amount,
                } => {
                    let t = if official { target.address } else { token };
                    cx.token_transfer(ts, tx, t, distributor, victim, amount);
                }
            }
        }
        cx.credit(receiver, last, &paid_total, &tag);
        cx.plant(PlantedToken {
            token,
            target: target.address,
            target_symbol: target.symbol.clone(),
            name,
            symbol,
            intended: identical,
            verdict: FilterVerdict::Confirmed,
            creator,
            factory: None,
            scam: Some(ScamKind::Arbitrage),
        });
        cx.truth.arbitrage.push(PlantedArbitrage {
            token,
            target_symbol: target.symbol.clone(),
            creator,
            eth_receiver: receiver,
            distributor,
            victims,
            detectable_eth_wei: returned_total,
        });
    }
    Ok(())
}

fn laundering(cx: &mut Ctx) {
    let plan = cx.cfg.laundering.clone();
    if plan.exchanges == 0 {
        return;
    }
    let exchanges: Vec<Address> = (0..plan.exchanges as u64)
        .map(|j| cx.ids.address("exchange", j))
        .collect();
    cx.labels
        .exchange_addresses
        .extend(exchanges.iter().copied());
    cx.truth.exchanges = exchanges.iter().copied().collect();
    for (source, (end, wei, tag)) in std::mem::take(&mut cx.proceeds) {
        let tag = format!("{tag}/launder");
        let mut rng = stream(cx.cfg.seed, &tag);
        let exchange = *exchanges.choose(&mut rng).expect("non-empty");
        let hops: Vec<Address> = (0..plan.depth as u64)
            .map(|h| cx.ids.address(&tag, h))
            .collect();
        let mut ts = end + rng.gen_range(HOUR..=DAY);
        let mut from = source;
        for (h, to) in hops.iter().chain(std::iter::once(&exchange)).enumerate() {
            cx.send(ts, cx.ids.tx(&tag, h as u64), from, *to, wei.clone());
            from = *to;
            ts += rng.gen_range(600..=DAY);
        }
        cx.truth.laundering.push(LaunderingPath {
            source,
            hops,
            exchange,
            amount_wei: wei,
        });
    }
}

fn noise(cx: &mut Ctx) -> Result<()> {
    let plan = cx.cfg.noise.clone();
    if plan.transactions == 0 && plan.benign_tokens == 0 {
        return Ok(());
    }
    if plan.accounts < 2 {
        return Err(Error::Config("noise needs at least 2 accounts".into()));
    }
    let mut rng = stream(cx.cfg.seed, "noise");
    let accounts: Vec<Address> = (0..plan.accounts as u64)
        .map(|j| cx.ids.address("noise", j))
        .collect();
    let mut balances: Vec<(Address, BTreeMap<Address, BigUint>)> = Vec::new();
    for b in 0..plan.benign_tokens {
        let tag = format!("noise/token/{b}");
        let token = cx.ids.address(&tag, 0);
        let owner = *accounts.choose(&mut rng).expect("non-empty");
        let (name, symbol) = draw_identifiers(MatchClass::UNRELATED, None, &cx.targets, &mut rng)?;
        let supply = BigUint::from(rng.gen_range(1_000u64..1_000_000_000)) * pow10(18);
        cx.deploy_token(
            cx.t0() + 2_000 + b as u64,
            cx.ids.tx(&tag, 0),
            owner,
            None,
            token,
            &name,
            &symbol,
            18,
            supply.clone(),
            owner,
        );
        balances.push((token, [(owner, supply)].into()));
    }
    let mut times: Vec<u64> = (0..plan.transactions)
        .map(|_| cx.t0() + HOUR + rng.gen_range(0..cx.span()))
        .collect();
    times.sort_unstable();
    for (i, ts) in times.into_iter().enumerate() {
        let tx = cx.ids.tx("noise", i as u64);
        let from = *accounts.choose(&mut rng).expect("non-empty");
        let mut to = *accounts.choose(&mut rng).expect("non-empty");
        if to == from {
            to = accounts
                [(accounts.iter().position(|a| *a == from).expect("member") + 1) % accounts.len()];
        }
        if !balances.is_empty() && rng.gen_bool(0.3) {
            let k = rng.gen_range(0..balances.len());
            let (token, book) = &mut balances[k];
            let holders: Vec<Address> = book
                .iter()
                .filter(|(_, b)| !b.is_zero())
                .map(|(a, _)| *a)
                .collect();
            let sender = *holders
                .choose(&mut rng)
                .expect("supply is never fully burned");
            let bal = book[&sender].clone();
            let amount = &bal / BigUint::from(rng.gen_range(2u64..10)) + 1u32;
            let amount = amount.min(bal);
            let to = if to == sender { from } else { to };
            let to = if to == sender {
                accounts[(accounts.iter().position(|a| *a == sender).unwrap() + 1) % accounts.len()]
            } else {
                to
            };
            *book.get_mut(&sender).expect("present") -= &amount;
            *book.entry(to).or_default() += &amount;
            let token = *token;
            cx.token_transfer(ts, tx, token, sender, to, amount);
        } else {
            let wei = BigUint::from(rng.gen_range(1u64..=5_000)) * pow10(15);
            let mut t = call(tx, from, Some(to), wei);
            t.status = !rng.gen_bool(0.05);
            cx.timeline.push(ts, t);
        }
    }
    Ok(())
}

fn finalize_totals(truth: &mut GroundTruth) {
    let t = &mut truth.totals;
    t.confirmed_counterfeits = truth
        .tokens
        .iter()
        .filter(|p| p.verdict == FilterVerdict::Confirmed)
        .count();
    t.airdrop_campaigns = truth.airdrops.len();
    t.airdrop_victims = truth.airdrops.iter().map(|a| a.victims.len()).sum();
    t.airdrop_eth_wei = truth.airdrops.iter().map(|a| &a.eth_total_wei).sum();
    let victims = truth.arbitrage.iter().flat_map(|c| &c.victims);
    t.arbitrage_evidences = victims
        .clone()
        .flat_map(|v| &v.rounds)
        .filter(|r| r.detectable())
        .count();
    t.arbitrage_victims = victims
        .clone()
        .filter(|v| v.rounds.iter().any(|r| r.detectable()))
        .count();
    t.undetectable_victims = victims.filter(|v| v.kind == VictimKind::NoReturn).count();
    t.arbitrage_eth_wei = truth.arbitrage.iter().map(|c| &c.detectable_eth_wei).sum();
    truth.tokens.sort_by_key(|p| p.token);
}

/// Builds a ledger and its ground truth from `cfg`. Identical configs give identical bytes.
pub fn generate(cfg: &ScenarioConfig) -> Result<SynthOutput> {
    cfg.validate()?;
    let ids = Ids::new(cfg.seed);
    let targets = resolve_targets(cfg, &ids)?;
    let mut cx = Ctx {
        cfg,
        ids,
        targets,
        official_creator: BTreeMap::new(),
        timeline: Timeline::default(),
        labels: LabelSet::default(),
        truth: GroundTruth {
            seed: cfg.seed,
            ..Default::default()
        },
        proceeds: BTreeMap::new(),
        factories: BTreeSet::new(),
    };
    setup_targets(&mut cx);
    plain_counterfeits(&mut cx)?;
    decoys(&mut cx)?;
    airdrops(&mut cx)?;
    arbitrage(&mut cx)?;
    laundering(&mut cx);
    noise(&mut cx)?;
    finalize_totals(&mut cx.truth);
    Ok(SynthOutput {
        texts: cx.timeline.emit(),
        labels: cx.labels,
        targets: cx.targets,
        truth: cx.truth,
    })
}
