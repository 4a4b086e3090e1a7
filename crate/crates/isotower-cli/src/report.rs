//! Report assembly: one JSON object per run (config, claims, summary) and a
//! human-readable table.

use isotower::claims::Setup;
use isotower::towers::Verdict;
use serde_json::json;

pub fn config_json(s: &Setup, selected: &[String], seed: u64, long: bool) -> serde_json::Value {
    json!({
        "mode": s.mode.name(),
        "alphas": s.alphas,
        "max_level": s.max_level,
        "convention": s.convention.name(),
        "variant": s.variant.name(),
        "policy": s.policy.name(),
        "seed": seed,
        "long": long,
        "claims": selected,
    })
}

pub fn report_json(config: serde_json::Value, verdicts: &[Verdict]) -> serde_json::Value {
    let passed = verdicts.iter().filter(|v| v.status == "pass").count();
    let failed = verdicts.iter().filter(|v| v.status == "fail").count();
    let skipped = verdicts.iter().filter(|v| v.status == "skipped").count();
    json!({
        "config": config,
        "claims": verdicts,
        "summary": {
            "total": verdicts.len(),
            "passed": passed,
            "failed": failed,
            "skipped": skipped,
        },
    })
}

pub fn human_table(verdicts: &[Verdict]) -> String {
    let mut out = String::new();
    let id_w = verdicts
        .iter()
        .map(|v| v.id.len())
        .max()
        .unwrap_or(8)
        .max("claim".len());
    out.push_str(&format!(
        "{:<id_w$}  {:<7}  {:>5}  {:>8}\n",
        "claim", "status", "level", "ms"
    ));
    for v in verdicts {
        out.push_str(&format!(
            "{:<id_w$}  {:<7}  {:>5}  {:>8}\n",
            v.id, v.status, v.level, v.runtime_ms
        ));
    }
    let passed = verdicts.iter().filter(|v| v.status == "pass").count();
    let failed = verdicts.iter().filter(|v| v.status == "fail").count();
    let skipped = verdicts.iter().filter(|v| v.status == "skipped").count();
    out.push_str(&format!(
        "total: {} pass, {} fail, {} skipped\n",
        passed, failed, skipped
    ));
    out
}
