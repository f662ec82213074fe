use std::process::Command;

use proptest::prelude::*;
use smooth_world::arith::PrimeBase;
use smooth_world::config::{parse_args, Parsed, RunConfig, Subcommand};
use smooth_world::report::Format;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_smooth-world"));
    c.env_remove("SMOOTH_WORLD_THREADS")
        .env_remove("SMOOTH_WORLD_BUDGET_NODES")
        .env_remove("SMOOTH_WORLD_BUDGET_SECONDS");
    c
}

fn status(args: &[&str]) -> i32 {
    bin().args(args).output().unwrap().status.code().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(status(&["theorem1", "--primes", "2,9"]), 64);
    assert_eq!(status(&["theorem1", "--exponent", "99"]), 64);
    assert_eq!(status(&["nonsense"]), 64);
    assert_eq!(status(&["smooth", "--format", "csv"]), 64);
    assert_eq!(status(&["--help"]), 0);
    assert_eq!(status(&["theorem1", "--exponent", "2", "--limit", "25"]), 0);
    assert_eq!(status(&["flt", "--exponent", "3", "--limit", "100"]), 0);
}

#[test]
fn json_envelope() {
    let out = bin().args(["theorem1", "--exponent", "2", "--limit", "25"]).output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["theorem"], "T1_SCHUR_FLT");
    assert_eq!(v["witnesses"][0], serde_json::json!([9, 16, 25]));
    assert_eq!(v["stats"]["extracted"][0], serde_json::json!([3, 4, 5]));
    assert!(v["timing_ms"].is_null());
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["schema_version", "theorem", "params", "outcome", "witnesses", "stats", "timing_ms", "seed", "version"]);
}

#[test]
fn density_csv() {
    let out = bin().args(["density", "--primes", "2,3", "--exponent", "2", "--limit", "1000", "--format", "csv"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("2;3,2,100,20,7,"));
}

#[test]
fn thread_env_is_read() {
    let with_env = bin().env("SMOOTH_WORLD_THREADS", "0").args(["smooth"]).output().unwrap();
    assert_eq!(with_env.status.code(), Some(64));
}

fn config_strategy() -> impl Strategy<Value = RunConfig> {
    let commands = vec![Subcommand::Color, Subcommand::Theorem1, Subcommand::K2, Subcommand::Density, Subcommand::Suite];
    (
        prop::sample::select(commands),
        prop::sample::subsequence(vec![2u64, 3, 5, 7, 11, 13], 1..=6),
        1u32..=16,
        1u64..=1 << 40,
        1u32..=8,
        (2usize..=5, 1usize..=10, 3usize..=6),
        (proptest::option::of(1u64..1000), proptest::option::of(1u64..1000), 1u64..500),
        (prop::sample::select(vec![Format::Json, Format::Csv, Format::Text]), 1usize..=16, any::<u64>()),
        (proptest::option::of(1u64..1 << 30), proptest::option::of(1u64..3600), any::<bool>()),
    )
        .prop_map(|(command, primes, n, limit, colors, (s, w, length), (value, difference, trials), (format, threads, seed), (nodes, secs, timing))| RunConfig {
            command,
            base: PrimeBase::new(primes).unwrap(),
            n,
            limit,
            colors,
            s,
            w,
            length,
            value,
            difference,
            trials,
            format,
            threads,
            seed,
            budget_nodes: nodes,
            budget_seconds: secs,
            timing,
        })
}

proptest! {
    #[test]
    fn config_round_trip(c in config_strategy()) {
        match parse_args(c.render()) {
            Ok(Parsed::Run(back)) => prop_assert_eq!(back, c),
            other => prop_assert!(false, "{other:?}"),
        }
    }
}
