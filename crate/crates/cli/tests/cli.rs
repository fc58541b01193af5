use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

const BIN: &str = env!("CARGO_BIN_EXE_ctrack");

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn ctrack(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

const SMALL: &str = r#"
seed = 77
targets = 6
creators = 3
[[counterfeits]]
name = "identical"
symbol = "identical"
per_target = 1
[decoys]
rule1 = 1
needs_review = 1
[airdrop]
campaigns = 3
[arbitrage]
campaigns = 3
min_victims = 2
max_victims = 5
type2_fraction = 0.3
no_return_fraction = 0.3
[noise]
transactions = 150
accounts = 12
benign_tokens = 2
[laundering]
depth = 2
exchanges = 1
"#;

/// Generates a ledger from `scenario` under `root/ledger`.
fn synth(root: &Path, scenario: &str) -> PathBuf {
    let cfg = root.join("scenario.toml");
    std::fs::write(&cfg, scenario).unwrap();
    let dir = root.join("ledger");
    let o = ctrack(&["synth", "--scenario", p(&cfg), "--out", p(&dir)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    dir
}

fn dir_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().into_string().unwrap(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&ctrack(&["--help"])), 0);
    assert_eq!(code(&ctrack(&["--version"])), 0);
    assert_eq!(code(&ctrack(&["scan", "--help"])), 0);
}

#[test]
fn bad_invocations_exit_one() {
    assert_eq!(code(&ctrack(&[])), 1);
    assert_eq!(code(&ctrack(&["frobnicate"])), 1);
    assert_eq!(code(&ctrack(&["scan", "--threads", "many"])), 1);
}

#[test]
fn missing_inputs_name_the_flag() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = ctrack(&["scan", "--out", p(&out)]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("--targets"), "{}", stderr(&o));

    let o = ctrack(&[
        "detect",
        "--out",
        p(&out),
        "--targets",
        p(&fixture("missing.json")),
    ]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("--targets"));

    let o = ctrack(&["synth", "--out", p(&out)]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("--scenario"));

    let ledger = synth(tmp.path(), SMALL);
    let t = ledger.join("targets.json");
    let o = ctrack(&["scan", "--targets", p(&t), "--out", p(&out)]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("--ledger"));
    let o = ctrack(&[
        "scan",
        "--ledger",
        p(&tmp.path().join("nope")),
        "--targets",
        p(&t),
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("--ledger"));
}

#[test]
fn empty_targets_file_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let ledger = synth(tmp.path(), SMALL);
    for body in ["[]", "", "  \n"] {
        let t = tmp.path().join("t.json");
        std::fs::write(&t, body).unwrap();
        let o = ctrack(&[
            "scan",
            "--ledger",
            p(&ledger),
            "--targets",
            p(&t),
            "--out",
            p(&tmp.path().join("o")),
        ]);
        assert_eq!(code(&o), 1, "{body:?}: {}", stderr(&o));
    }
}

#[test]
fn malformed_inputs_are_data_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let ledger = synth(tmp.path(), SMALL);
    let out = tmp.path().join("o");
    let t = tmp.path().join("t.json");
    std::fs::write(&t, "{not json").unwrap();
    let o = ctrack(&[
        "scan",
        "--ledger",
        p(&ledger),
        "--targets",
        p(&t),
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));

    let labels = tmp.path().join("labels.json");
    std::fs::write(&labels, "[1, 2").unwrap();
    let o = ctrack(&[
        "ingest",
        "--ledger",
        p(&ledger),
        "--labels",
        p(&labels),
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn invalid_configs_are_usage_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let ledger = synth(tmp.path(), SMALL);
    let t = ledger.join("targets.json");
    let cfg = tmp.path().join("d.toml");
    std::fs::write(&cfg, "usd_rate = \"-1\"").unwrap();
    let out = tmp.path().join("o");
    let o = ctrack(&[
        "detect",
        "--ledger",
        p(&ledger),
        "--targets",
        p(&t),
        "--config",
        p(&cfg),
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    let o = ctrack(&[
        "graph",
        "--ledger",
        p(&ledger),
        "--targets",
        p(&t),
        "--max-depth",
        "0",
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 1);
    let s = tmp.path().join("bad.toml");
    std::fs::write(&s, "[airdrop]\nmin_victims = 9\nmax_victims = 3\n").unwrap();
    let o = ctrack(&[
        "synth",
        "--scenario",
        p(&s),
        "--out",
        p(&tmp.path().join("never")),
    ]);
    assert_eq!(code(&o), 1);
    assert!(!tmp.path().join("never").exists());
}

#[test]
fn ingest_reports_rejected_lines_and_succeeds() {
    let tmp = tempfile::tempdir().unwrap();
    let ledger = synth(tmp.path(), SMALL);
    let blocks = ledger.join("blocks.jsonl");
    let mut text = std::fs::read_to_string(&blocks).unwrap();
    text.push_str("{\"number\": \"x\"}\n");
    std::fs::write(&blocks, text).unwrap();
    let out = tmp.path().join("o");
    let o = ctrack(&["ingest", "--ledger", p(&ledger), "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = read_json(&out.join("ingest_report.json"));
    assert_eq!(r["report"]["rejections"].as_array().unwrap().len(), 1);
    assert_eq!(r["report"]["rejections"][0]["file"], "blocks");
    let m = read_json(&out.join("manifest.json"));
    assert_eq!(m["counts"]["rejected_lines"], 1);
}

#[test]
fn synth_then_detect_matches_ground_truth() {
    let tmp = tempfile::tempdir().unwrap();
    let ledger = synth(tmp.path(), SMALL);
    let out = tmp.path().join("d");
    let o = ctrack(&[
        "detect",
        "--ledger",
        p(&ledger),
        "--targets",
        p(&ledger.join("targets.json")),
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let truth = read_json(&ledger.join("ground_truth.json"));
    let totals = &truth["totals"];
    let s = read_json(&out.join("summary.json"));
    assert_eq!(s["airdrop"]["tokens"], totals["airdrop_campaigns"]);
    assert_eq!(s["airdrop"]["victims"], totals["airdrop_victims"]);
    assert_eq!(s["airdrop"]["eth_total_wei"], totals["airdrop_eth_wei"]);
    assert_eq!(s["arbitrage"]["victims"], totals["arbitrage_victims"]);
    assert_eq!(s["arbitrage"]["eth_total_wei"], totals["arbitrage_eth_wei"]);
    assert_eq!(s["airdrop"]["tokens"], 3);
    assert!(s["arbitrage"]["victims"].as_u64().unwrap() > 0);

    let evidence = std::fs::read_to_string(out.join("arbitrage_evidence.jsonl")).unwrap();
    assert_eq!(
        evidence.lines().count(),
        totals["arbitrage_evidences"].as_u64().unwrap() as usize
    );
    let findings = std::fs::read_to_string(out.join("airdrop_findings.jsonl")).unwrap();
    let found: Vec<String> = findings
        .lines()
        .map(|l| {
            serde_json::from_str::<Value>(l).unwrap()["token"]
                .as_str()
                .unwrap()
                .to_string()
        })
        .collect();
    let mut planted: Vec<String> = truth["airdrops"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["token"].as_str().unwrap().to_string())
        .collect();
    planted.sort();
    assert_eq!(found, planted);
}

#[test]
fn manifest_lists_every_output_with_its_hash() {
    let tmp = tempfile::tempdir().unwrap();
    let ledger = synth(tmp.path(), SMALL);
    let out = tmp.path().join("g");
    let o = ctrack(&[
        "graph",
        "--ledger",
        p(&ledger),
        "--targets",
        p(&ledger.join("targets.json")),
        "--out",
        p(&out),
        "--max-depth",
        "3",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let files = dir_files(&out);
    let m = read_json(&out.join("manifest.json"));
    let listed = m["outputs"].as_object().unwrap();
    assert_eq!(listed.len() + 1, files.len());
    for (name, bytes) in &files {
        if name == "manifest.json" {
            continue;
        }
        assert_eq!(listed[name], hex::encode(Sha256::digest(bytes)), "{name}");
    }
    assert_eq!(m["subcommand"], "graph");
    assert_eq!(m["tool"], "ctrack");
    assert!(m["config_digests"]["targets"].is_string());
    let csv = String::from_utf8(files["token_stats.csv"].clone()).unwrap();
    assert!(
        csv.starts_with("token,tx_count,first_ts,last_ts,active_days,holders,total_supply_raw\n")
    );
    let flow = read_json(&out.join("money_flow.json"));
    assert!(flow["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n["type"] == "exchange"));

    // the synth manifest covers the ledger files too
    let sm = read_json(&ledger.join("manifest.json"));
    assert_eq!(sm["outputs"].as_object().unwrap().len(), 9);
}

#[test]
fn report_is_byte_identical_across_runs_and_thread_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let ledger = synth(tmp.path(), SMALL);
    let t = ledger.join("targets.json");
    let mut runs = Vec::new();
    for threads in ["1", "4", "8", "4"] {
        let out = tmp.path().join(format!("r{}", runs.len()));
        let o = ctrack(&[
            "report",
            "--ledger",
            p(&ledger),
            "--targets",
            p(&t),
            "--threads",
            threads,
            "--out",
            p(&out),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let mut files = dir_files(&out);
        files.remove("manifest.json");
        runs.push(files);
    }
    assert_eq!(runs[0].len(), 10);
    assert!(runs.iter().all(|r| *r == runs[0]));
}

#[test]
fn report_over_top_airdrops_fixture_reproduces_airdrop_row() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = std::fs::read_to_string(fixture("top_airdrops.toml")).unwrap();
    let ledger = synth(tmp.path(), &scenario);
    let out = tmp.path().join("r");
    let o = ctrack(&[
        "report",
        "--ledger",
        p(&ledger),
        "--targets",
        p(&ledger.join("targets.json")),
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = read_json(&out.join("report.json"));
    let air = &r["scams"]["airdrop"];
    assert_eq!(air["eth_total"], "970.8");
    assert_eq!(air["usd_total"], "226817.71");
    assert_eq!(air["tokens"], 14);
    assert_eq!(r["scams"]["usd_rate"], "233.64");

    let findings = std::fs::read_to_string(out.join("airdrop_findings.jsonl")).unwrap();
    let rates: Vec<String> = findings
        .lines()
        .map(|l| {
            serde_json::from_str::<Value>(l).unwrap()["rate"]["exact"]
                .as_str()
                .unwrap()
                .to_string()
        })
        .collect();
    for want in ["32000", "1125000", "53992", "330"] {
        assert!(rates.iter().any(|r| r == want), "{want} not in {rates:?}");
    }
    let table1 = r["targets"].as_array().unwrap();
    assert_eq!(table1.len(), 10);
    assert_eq!(table1[0]["symbol"], "OMG");
    let lexical = &r["lexical"];
    assert_eq!(lexical["all"], r["verdicts"]["confirmed"]);
}
