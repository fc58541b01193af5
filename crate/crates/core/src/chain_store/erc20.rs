//! ERC-20 classification by function-selector presence in runtime bytecode.

/// 4-byte selectors of the six mandatory ERC-20 functions.
pub const MANDATORY_SELECTORS: [(&str, [u8; 4]); 6] = [
    ("totalSupply()", [0x18, 0x16, 0x0d, 0xdd]),
    ("balanceOf(address)", [0x70, 0xa0, 0x82, 0x31]),
    ("transfer(address,uint256)", [0xa9, 0x05, 0x9c, 0xbb]),
    (
        "transferFrom(address,address,uint256)",
        [0x23, 0xb8, 0x72, 0xdd],
    ),
    ("approve(address,uint256)", [0x09, 0x5e, 0xa7, 0xb3]),
    ("allowance(address,address)", [0xdd, 0x62, 0xed, 0x3e]),
];

fn contains(haystack: &[u8], needle: &[u8; 4]) -> bool {
    haystack.windows(4).any(|w| w == needle)
}

/// True iff every mandatory selector occurs as a contiguous byte run in `bytecode`.
pub fn detect_erc20(bytecode: &[u8]) -> bool {
    MANDATORY_SELECTORS
        .iter()
        .all(|(_, sel)| contains(bytecode, sel))
}

/// Signatures of the mandatory functions whose selectors are absent.
pub fn missing_selectors(bytecode: &[u8]) -> Vec<&'static str> {
    MANDATORY_SELECTORS
        .iter()
        .filter(|(_, sel)| !contains(bytecode, sel))
        .map(|(sig, _)| *sig)
        .collect()
}

/// Minimal selector-bearing runtime stub: a `PUSH4 <selector> EQ` per selector
/// behind the usual free-memory-pointer prologue. Used by the synthetic generator.
pub fn stub_runtime(selectors: &[[u8; 4]], salt: &[u8]) -> Vec<u8> {
    let mut code = vec![0x60, 0x80, 0x60, 0x40, 0x52];
    for sel in selectors {
        code.push(0x63);
        code.extend_from_slice(sel);
        code.push(0x14);
    }
    code.push(0x00);
    // trailing metadata so distinct contracts get distinct code
    code.extend_from_slice(salt);
    code
}

pub fn erc20_stub(salt: &[u8]) -> Vec<u8> {
    let sels: Vec<[u8; 4]> = MANDATORY_SELECTORS.iter().map(|(_, s)| *s).collect();
    stub_runtime(&sels, salt)
}
