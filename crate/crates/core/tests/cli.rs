mod common;

use std::fs;
use std::process::Command;

use common::{config_for, run, stdout_json, workspace, write, write_json, COMMANDS};
use serde_json::{json, Value};
use seriesreal::format::{self, AnySeries};
use seriesreal::scalar;
use seriesreal::series::{LabeledSeries, SimpleSeries};

#[test]
fn rank_reports_two_on_count_of_a() {
    let ws = workspace();
    let o = run("rank", &config_for(ws.path(), "rank"), None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["hankel"]["rank"], 2);
    assert_eq!(v["hankel"]["stabilized"], true);
    assert_eq!(v["truncation"], 4);
    assert_eq!(v["lie_within_hankel_bound"], true);
}

#[test]
fn realize_output_reloads_and_verifies() {
    let ws = workspace();
    let d = ws.path();
    let out = d.join("realized.json");
    let o = run("realize", &config_for(d, "realize"), Some(&out));
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let doc: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let r = seriesreal::realize::LinearRealization::from_json(&doc).unwrap();
    assert_eq!(r.dim(), 2);
    assert_eq!(r.to_json(), doc);

    write_json(d, "verify_new.json", &json!({"series": "count.jsonl", "realization": "realized.json"}));
    let o = run("verify", &d.join("verify_new.json"), None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["realizes"], true);
}

#[test]
fn verify_round_trip_passes() {
    let ws = workspace();
    let o = run("verify", &config_for(ws.path(), "verify_triple"), None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["violations"], json!([]));
    assert_eq!(v["horizon"], 3);
}

#[test]
fn verify_flags_a_perturbed_labeled_series() {
    let ws = workspace();
    let d = ws.path();
    let p = match format::read_series(&fs::read_to_string(d.join("labeled.jsonl")).unwrap()).unwrap() {
        AnySeries::Labeled(p) => p,
        _ => unreachable!(),
    };
    let a = p.space().clone();
    let w = seriesreal::events::EventWord::from(vec![a.event("u", "hi", "a").unwrap(), a.event("v", "lo", "b").unwrap()]);
    let bump = LabeledSeries::from_entries(a, 3, [(w.clone(), scalar::ratio(1, 7))]).unwrap();
    let perturbed = LabeledSeries::linear_combine(&[scalar::one(), scalar::one()], &[&p, &bump]).unwrap();
    write(d, "labeled.jsonl", &format::emit_labeled(&perturbed));

    let o = run("verify", &config_for(d, "verify_triple"), None);
    assert_eq!(o.status.code(), Some(2));
    let v = stdout_json(&o);
    let violations = v["violations"].as_array().unwrap();
    assert_eq!(violations.len(), 1);
    assert_eq!(violations[0]["word"], json!([["u", "hi", "a"], ["v", "lo", "b"]]));
}

#[test]
fn verify_flags_a_perturbed_simple_series() {
    let ws = workspace();
    let d = ws.path();
    let p = common::count_of_a(4);
    let w = p.space().parse_chars("ba").unwrap();
    let bump = SimpleSeries::from_entries(p.space().clone(), 4, [(w, scalar::one())]).unwrap();
    write(d, "count.jsonl", &format::emit_simple(&p.sub(&bump).unwrap()));
    let o = run("verify", &config_for(d, "verify"), None);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout_json(&o)["first_mismatch"], json!(["b", "a"]));
}

#[test]
fn nerode_even_a_has_two_states() {
    let ws = workspace();
    let o = run("nerode", &config_for(ws.path(), "nerode"), None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let dfa: seriesreal::nerode::Dfa = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(dfa.states(), 2);
}

#[test]
fn nerode_from_word_list_and_series() {
    let ws = workspace();
    let d = ws.path();
    write_json(
        d,
        "words.json",
        &json!({
            "generators": ["a", "b"],
            "language": {"kind": "words", "words": [[], ["a"]]},
            "max_prefix": 3,
            "max_suffix": 3,
        }),
    );
    let o = run("nerode", &d.join("words.json"), None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    // {ε, a}: states for ε, a, and the sink.
    let dfa: seriesreal::nerode::Dfa = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(dfa.states(), 3);

    write(d, "astarb.jsonl", &format::emit_simple(&common::a_star_b(6)));
    write_json(
        d,
        "from_series.json",
        &json!({"language": {"kind": "series", "path": "astarb.jsonl"}, "max_prefix": 3, "max_suffix": 3}),
    );
    let o = run("nerode", &d.join("from_series.json"), None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let dfa: seriesreal::nerode::Dfa = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(dfa.states(), 3);
}

#[test]
fn regular_reports_every_projection() {
    let ws = workspace();
    let o = run("regular", &config_for(ws.path(), "regular"), None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["projections"].as_array().unwrap().len(), 4);
    assert_eq!(v["bracket_depth"], 2);
}

#[test]
fn fit_recovers_the_planted_cut() {
    let ws = workspace();
    let o = run("fit", &config_for(ws.path(), "fit"), None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["value"], 0.0);
    assert_eq!(v["exact_realization"], true);
    assert_eq!(v["horizon"], 3);
    assert!(v["active_parameters"]["active"].as_array().unwrap().contains(&json!(0)));
}

#[test]
fn simulate_emits_a_reloadable_series() {
    let ws = workspace();
    let d = ws.path();
    let out = d.join("sim.jsonl");
    let o = run("simulate", &config_for(d, "simulate"), Some(&out));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let log = format::parse_log(&text).unwrap();
    assert_eq!(log.emit(), text);
    let p = log.to_labeled_series().unwrap();
    assert_eq!(p.truncation(), 2);
    assert_eq!(p.evaluate(&seriesreal::events::EventWord::empty()).unwrap(), scalar::one());
}

#[test]
fn decompose_sums_back() {
    let ws = workspace();
    let o = run("decompose", &config_for(ws.path(), "decompose"), None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["sum_matches"], true);
    assert_eq!(v["parts"].as_object().unwrap().len(), 2);
}

#[test]
fn every_command_is_deterministic() {
    let ws = workspace();
    let d = ws.path();
    for cmd in COMMANDS {
        let config = config_for(d, cmd);
        let first = run(cmd, &config, Some(&d.join(format!("{cmd}.1"))));
        let second = run(cmd, &config, Some(&d.join(format!("{cmd}.2"))));
        assert_eq!(first.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&first.stderr));
        assert_eq!(first.status.code(), second.status.code());
        let a = fs::read(d.join(format!("{cmd}.1"))).unwrap();
        let b = fs::read(d.join(format!("{cmd}.2"))).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{cmd} output differs between runs");
    }
}

#[test]
fn input_errors_exit_one_with_json_on_stderr() {
    let ws = workspace();
    let d = ws.path();
    let missing = run("rank", &d.join("nope.json"), None);
    assert_eq!(missing.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&missing.stderr).unwrap();
    assert_eq!(err["error"], "io");

    write_json(d, "bad.json", &json!({"series": "labeled.jsonl"}));
    let wrong_kind = run("realize", &d.join("bad.json"), None);
    assert_eq!(wrong_kind.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&wrong_kind.stderr).unwrap();
    assert_eq!(err["error"], "config");

    write(d, "dup.jsonl", "{\"truncation\":2,\"generators\":[\"a\"]}\n{\"word\":[\"a\"],\"coeff\":\"1\"}\n{\"word\":[\"a\"],\"coeff\":\"2\"}\n");
    write_json(d, "dup.json", &json!({"series": "dup.jsonl"}));
    let dup = run("rank", &d.join("dup.json"), None);
    assert_eq!(dup.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&dup.stderr).unwrap();
    assert_eq!(err["error"], "format");
    assert!(err["message"].as_str().unwrap().contains("line 3"), "{err}");

    let usage = Command::new(env!("CARGO_BIN_EXE_seriesreal")).arg("rank").output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
}

#[test]
fn horizon_too_long_is_an_input_error() {
    let ws = workspace();
    let d = ws.path();
    write_json(d, "long.json", &json!({"series": "count.jsonl", "max_len": 3}));
    let o = run("realize", &d.join("long.json"), None);
    assert_eq!(o.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "realize");
}
