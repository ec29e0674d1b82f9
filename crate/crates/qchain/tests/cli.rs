//! End-to-end tests of the `qchain` binary: exit-code contract, JSON output
//! shapes, and the guard rails.

use std::process::{Command, Output};

fn qchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qchain"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_passes_with_exit_zero() {
    let out = qchain(&["verify", "--suite", "slater", "--order", "40", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let reports: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json reports");
    let arr = reports.as_array().expect("array of reports");
    assert_eq!(arr.len(), 2);
    for r in arr {
        assert_eq!(r["pass"], serde_json::json!(true));
        assert!(r["wall_ms"].is_number());
    }
}

#[test]
fn verify_exit_codes_for_usage_errors() {
    let out = qchain(&["verify", "--suite", "theorem1", "--n", "6..2"]);
    assert_eq!(out.status.code(), Some(2), "inverted range is a usage error");
    let out = qchain(&["verify", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2), "unknown suite is a usage error");
}

#[test]
fn series_text_and_csv() {
    let out = qchain(&[
        "series", "--target", "multisum", "--n", "2", "--order", "8", "--format", "text",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for line in ["q^0        1", "q^4        2", "q^8        5"] {
        assert!(text.contains(line), "missing {line:?} in:\n{text}");
    }
    let out = qchain(&[
        "series", "--target", "slater", "--order", "5", "--format", "csv",
    ]);
    let text = stdout(&out);
    assert!(text.starts_with("exponent,coefficient"));
    assert!(text.contains("5,2"));
}

#[test]
fn series_json_round_trips() {
    let out = qchain(&[
        "series", "--target", "theta", "--n", "2", "--order", "10", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let s: qchain::TruncSeries = serde_json::from_str(&stdout(&out)).expect("series json");
    assert_eq!(
        s.coeff_q(8).unwrap(),
        qchain::Coeff::from_integer(5.into())
    );
}

#[test]
fn series_j_symbol_target() {
    let out = qchain(&[
        "series", "--target", "j", "--symbol", "Jbar(0,2)", "--order", "6", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let s: qchain::TruncSeries = serde_json::from_str(&stdout(&out)).expect("series json");
    assert_eq!(s.coeff_q(0).unwrap(), qchain::Coeff::from_integer(2.into()));
    // missing --symbol is a usage error
    let out = qchain(&["series", "--target", "j", "--order", "6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_single_cell() {
    let out = qchain(&["eval", "--n", "2", "--q", "1/2", "--digits", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json result");
    let v = r["value"].as_f64().unwrap();
    assert!((v - 0.59546).abs() < 1e-5, "got {v}");
    assert!(r["err_est"].as_f64().unwrap() < 1e-6);
}

#[test]
fn eval_q_to_zero_limit() {
    let out = qchain(&["eval", "--n", "2", "--q", "1/1000", "--digits", "5", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("1.00000"), "got {}", stdout(&out));
}

#[test]
fn eval_rejects_bad_rationals() {
    for q in ["5/3", "0/2", "2", "-1/2"] {
        let out = qchain(&["eval", "--n", "2", "--q", q]);
        assert_eq!(out.status.code(), Some(2), "q = {q} must be a usage error");
    }
}

#[test]
fn bench_refuses_multisum_at_n_100() {
    let out = qchain(&["bench", "--n", "100", "--order", "10", "--repeats", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json report");
    assert!(r["multisum_refused"].as_str().unwrap().contains("infeasible"));
    assert_eq!(r["theta_terms"], serde_json::json!(10000));
    assert!(r["multisum_ms"].is_null());
}

#[test]
fn bench_small_reports_identical_series() {
    let out = qchain(&["bench", "--n", "2", "--order", "20", "--repeats", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json report");
    assert_eq!(r["series_identical"], serde_json::json!(true));
    assert_eq!(r["theta_terms"], serde_json::json!(4));
    assert!(r["multisum_work"].as_u64().unwrap() > 0);
}

#[test]
fn verify_workers_env_respected() {
    let out = Command::new(env!("CARGO_BIN_EXE_qchain"))
        .args(["verify", "--suite", "slater", "--order", "30", "--format", "csv"])
        .env("QCHAIN_WORKERS", "1")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("id,order,pass,wall_ms"));
}

#[test]
fn verify_config_file_defaults() {
    let dir = std::env::temp_dir().join("qchain_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, r#"{ "order": 30, "workers": 1 }"#).unwrap();
    let out = qchain(&[
        "verify", "--suite", "slater", "--config", cfg.to_str().unwrap(), "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let reports: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(reports[0]["order"], serde_json::json!(30), "config default applies");
    // explicit flag wins over the config value
    let out = qchain(&[
        "verify", "--suite", "slater", "--config", cfg.to_str().unwrap(),
        "--order", "25", "--format", "json",
    ]);
    let reports: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(reports[0]["order"], serde_json::json!(25), "flag wins on conflict");
}
