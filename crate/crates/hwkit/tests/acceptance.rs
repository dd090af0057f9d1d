//! Acceptance report: one line per criterion, nonzero exit if any criterion fails.

use std::collections::BTreeMap;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const LIMITS: [(u32, f64); 10] =
    [(1, 10.0), (2, 1.0), (3, 120.0), (4, 5.0), (5, 1.0), (6, 1.0), (7, 120.0), (8, 10.0), (9, 60.0), (10, 60.0)];

fn spawn(args: &[&str]) -> std::process::Child {
    Command::new(env!("CARGO_BIN_EXE_hwkit"))
        .args(args)
        .env_remove("HWKIT_CACHE")
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("hwkit binary starts")
}

fn finish(child: std::process::Child) -> Output {
    child.wait_with_output().expect("hwkit binary finishes")
}

/// Parses `criterion {id} {title}: pass|FAIL in {secs} s` lines.
fn timings(stderr: &[u8]) -> BTreeMap<u32, f64> {
    let mut out = BTreeMap::new();
    for line in String::from_utf8_lossy(stderr).lines() {
        let Some(rest) = line.strip_prefix("criterion ") else { continue };
        let Some(id) = rest.split_whitespace().next().and_then(|t| t.parse().ok()) else { continue };
        let Some(secs) = rest.rsplit(" in ").next().and_then(|t| t.trim_end_matches(" s").parse().ok()) else { continue };
        out.insert(id, secs);
    }
    out
}

fn main() {
    let first = finish(spawn(&["suite", "default", "--json"]));
    let second = spawn(&["suite", "default", "--json"]);
    let corrupted = spawn(&["suite", "corrupted-candidate", "--json"]);
    let starved = spawn(&["suite", "bounds-starved", "--json"]);
    let (second, corrupted, starved) = (finish(second), finish(corrupted), finish(starved));

    let mut failures = 0;
    let mut line = |ok: bool, text: String| {
        println!("{} {text}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };

    let envelope: Value = match serde_json::from_slice(&first.stdout) {
        Ok(v) => v,
        Err(e) => {
            println!("FAIL suite output is not JSON: {e}");
            std::process::exit(1);
        }
    };
    let criteria = envelope["outputs"]["criteria"].as_array().cloned().unwrap_or_default();
    let times = timings(&first.stderr);
    for (id, limit) in LIMITS {
        let entry = criteria.iter().find(|c| c["id"].as_u64() == Some(u64::from(id)));
        let Some(entry) = entry else {
            line(false, format!("criterion {id}: missing from suite output"));
            continue;
        };
        let title = entry["title"].as_str().unwrap_or("?");
        let passed = entry["passed"].as_bool() == Some(true);
        let secs = times.get(&id).copied();
        let in_time = secs.is_some_and(|s| s < limit);
        let failed_checks: Vec<&str> = entry["checks"]
            .as_array()
            .map(|cs| cs.iter().filter(|c| c["passed"].as_bool() != Some(true)).filter_map(|c| c["name"].as_str()).collect())
            .unwrap_or_default();
        let checks = entry["checks"].as_array().map_or(0, Vec::len);
        let mut text = match secs {
            Some(s) => format!("criterion {id} {title}: {checks} checks in {s:.3} s (limit {limit} s)"),
            None => format!("criterion {id} {title}: {checks} checks, no timing reported"),
        };
        if !failed_checks.is_empty() {
            text.push_str(&format!("; failed: {}", failed_checks.join("; ")));
        }
        line(passed && in_time, text);
    }

    line(first.status.code() == Some(0), format!("suite default exit code {:?}", first.status.code()));
    line(
        first.stdout == second.stdout && !first.stdout.is_empty(),
        format!("suite default output identical across two runs ({} bytes)", first.stdout.len()),
    );
    line(corrupted.status.code() == Some(0), format!("corrupted-candidate profile exit code {:?}", corrupted.status.code()));
    line(starved.status.code() == Some(3), format!("bounds-starved profile exit code {:?} (expect 3)", starved.status.code()));

    println!("{} failure(s)", failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
