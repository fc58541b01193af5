use rand::seq::SliceRandom;
use rand::Rng;

use crate::counterfeit::{classify_match, MatchClass, MatchStatus, TargetToken};
use crate::error::{Error, Result};
use crate::types::Address;

/// (cap rank, name, symbol) of the official tokens the generator can target.
pub const BUILTIN_TARGETS: &[(u32, &str, &str)] = &[
    (1, "Tether USD", "USDT"),
    (2, "BNB", "BNB"),
    (3, "ChainLink Token", "LINK"),
    (4, "HuobiToken", "HT"),
    (5, "Bitfinex LEO Token", "LEO"),
    (6, "Crypto.com Coin", "CRO"),
    (8, "Maker", "MKR"),
    (9, "USD Coin", "USDC"),
    (10, "OKB", "OKB"),
    (13, "BAT", "BAT"),
    (14, "Paxos Standard", "PAX"),
    (15, "ZRX", "ZRX"),
    (18, "OMG Network", "OMG"),
    (23, "TrueUSD", "TUSD"),
    (24, "HoloToken", "HOT"),
    (25, "Dai Stablecoin", "DAI"),
    (33, "EnjinCoin", "ENJ"),
    (39, "KyberNetwork", "KNC"),
    (67, "QuarkChain Token", "QKC"),
    (76, "Polymath", "POLY"),
    (77, "Fantom Token", "FTM"),
    (79, "Gnosis", "GNO"),
    (80, "Bancor", "BNT"),
    (95, "Matic Token", "MATIC"),
];

const NAME_AFFIXES: &[(&str, bool)] = &[
    ("Classic", false),
    ("Gold", false),
    ("Cash", false),
    ("Plus", false),
    ("V2", false),
    ("Official", true),
    ("Wrapped", true),
    ("Reserve", false),
    ("Airdrop", false),
];

const SYMBOL_FORMS: &[&str] = &[
    "{} Coin", "{}_huobi", "Token {}", "{}-V2", "{}.e", "({})", "{} Gold",
];

const SYLLABLES: &[&str] = &[
    "ka", "lo", "mi", "ra", "ve", "zu", "no", "xi", "pe", "tor", "lan", "qua", "bel", "fin", "dro",
    "mos", "yel", "gri", "vul", "sen",
];

pub fn target_address(symbol: &str, ids: &super::rng::Ids) -> Address {
    ids.address(&format!("target/{symbol}"), 0)
}

pub fn builtin_target(symbol: &str, ids: &super::rng::Ids) -> Option<TargetToken> {
    BUILTIN_TARGETS
        .iter()
        .find(|(_, _, s)| *s == symbol)
        .map(|&(rank, name, sym)| TargetToken {
            address: target_address(sym, ids),
            name: name.to_string(),
            symbol: sym.to_string(),
            cap_rank: rank,
        })
}

fn fill(form: &str, ident: &str) -> String {
    form.replace("{}", ident)
}

fn word<R: Rng>(rng: &mut R) -> String {
    let n = rng.gen_range(2..=3);
    let mut w: String = (0..n)
        .map(|_| *SYLLABLES.choose(rng).expect("non-empty"))
        .collect();
    w[..1].make_ascii_uppercase();
    w
}

fn draw_name<R: Rng>(status: MatchStatus, target: &TargetToken, rng: &mut R) -> String {
    match status {
        MatchStatus::Identical => {
            if rng.gen_bool(0.3) {
                target.name.to_uppercase()
            } else {
                target.name.clone()
            }
        }
        MatchStatus::Combo => {
            let (affix, prefix) = *NAME_AFFIXES.choose(rng).expect("non-empty");
            if prefix {
                format!("{affix} {}", target.name)
            } else {
                format!("{} {affix}", target.name)
            }
        }
        MatchStatus::Unrelated => format!(
            "{} {}",
            word(rng),
            ["Coin", "Token", "Chain"].choose(rng).unwrap()
        ),
    }
}

fn draw_symbol<R: Rng>(status: MatchStatus, target: &TargetToken, rng: &mut R) -> String {
    match status {
        MatchStatus::Identical => target.symbol.clone(),
        MatchStatus::Combo => fill(SYMBOL_FORMS.choose(rng).expect("non-empty"), &target.symbol),
        MatchStatus::Unrelated => {
            let n = rng.gen_range(3..=5);
            (0..n).map(|_| rng.gen_range(b'A'..=b'Z') as char).collect()
        }
    }
}

/// Draws a (name, symbol) pair that classifies as `intended` against `target` and as
/// unrelated against every other target.
pub fn draw_identifiers<R: Rng>(
    intended: MatchClass,
    target: Option<&TargetToken>,
    all_targets: &[TargetToken],
    rng: &mut R,
) -> Result<(String, String)> {
    let placeholder = TargetToken {
        address: Address::ZERO,
        name: String::new(),
        symbol: String::new(),
        cap_rank: 0,
    };
    let anchor = target.unwrap_or(&placeholder);
    for _ in 0..256 {
        let name = draw_name(intended.name_status, anchor, rng);
        let symbol = draw_symbol(intended.symbol_status, anchor, rng);
        let clean = all_targets.iter().all(|t| {
            let m = classify_match(&name, &symbol, t);
            if Some(t.address) == target.map(|a| a.address) {
                m == intended
            } else {
                m == MatchClass::UNRELATED
            }
        });
        if clean {
            return Ok((name, symbol));
        }
    }
    Err(Error::Config(format!(
        "could not draw identifiers for {:?} against {}",
        intended, anchor.symbol
    )))
}
