use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kreisslab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn report(out: &Path, command: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out.join(format!("{command}.json"))).unwrap()).unwrap()
}

#[test]
fn verify_appendix_full_range() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify-appendix", "--n-max", "10000"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("verify-appendix.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,sup_a,v1_a,lemA1_min_slack,lemA1_k,lemA1_pass,lemA2_pass,review"));
    assert_eq!(lines.count(), 9999);
    let r = report(dir.path(), "verify-appendix");
    assert_eq!(r["schema"], "kreisslab/1");
    assert!(r["result"]["max_sup_a"].as_f64().unwrap() <= 32.0);
    assert!(r["result"]["max_v1_a"].as_f64().unwrap() <= 978.0);
    assert!(!dir.path().join("verify-appendix.witness.json").exists());
}

#[test]
fn kreiss_of_identity_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["kreiss", "--op", "identity", "--dim", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(dir.path(), "kreiss");
    let k = r["result"]["k_lower"].as_f64().unwrap();
    assert!((k - 1.0).abs() < 1e-6, "{k}");
    assert_eq!(r["config"]["operator"]["dim"], 3);
    assert_eq!(r["tool_version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn growth_of_jordan_block_is_linear() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["growth", "--op", "jordan", "--re", "1", "--dim", "2", "--p", "inf", "--n-max", "4096", "--fit", "poly"],
    );
    assert_eq!(o.status.code(), Some(0));
    let r = report(dir.path(), "growth");
    let alpha = r["result"]["fits"][0]["alpha"].as_f64().unwrap();
    assert!((alpha - 1.0).abs() < 0.01, "{alpha}");
    let csv = std::fs::read_to_string(dir.path().join("growth.csv")).unwrap();
    assert!(csv.starts_with("n,norm_lower,norm_upper,log_lower,log_upper\n"));
}

#[test]
fn falsified_invariant_exits_1_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["cesaro", "--op", "jordan", "--re", "0.5", "--dim", "3", "--n-max", "50", "--ks-ref", "0.01"]);
    assert_eq!(o.status.code(), Some(1));
    let w: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("cesaro.witness.json")).unwrap()).unwrap();
    assert!(w.is_object() || w.is_array());
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["kreiss", "--op", "no-such-operator"],
        &["kreiss", "--no-such-flag"],
        &["decomp-scan", "--trials", "10"],
        &["growth", "--p", "0.5"],
        &["kreiss", "--op", "weighted-shift", "--dim", "3", "--weights", "1"],
    ];
    for args in cases {
        let o = run(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("lab.toml");
    std::fs::write(&cfg, "seed = 3\n[operator]\nop = \"jordan\"\nre = 0.5\ndim = 3\n[cesaro]\nn_max = 40\nks_ref = 10.0\n").unwrap();
    let c = cfg.to_str().unwrap();

    let o = run(dir.path(), &["--config", c, "cesaro"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path(), "cesaro");
    assert_eq!(r["config"]["cesaro"]["n_max"], 40);
    assert_eq!(r["config"]["operator"]["op"], "jordan");

    let o = run(dir.path(), &["--config", c, "cesaro", "--n-max", "25", "--dim", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(dir.path(), "cesaro");
    assert_eq!(r["config"]["cesaro"]["n_max"], 25);
    assert_eq!(r["config"]["operator"]["dim"], 2);
    assert_eq!(r["config"]["cesaro"]["ks_ref"], 10.0);
}

#[test]
fn unknown_config_keys_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for text in ["bogus = 1\n", "[cesaro]\nnmax = 3\n", "[operator]\nop = \"identity\"\ncolour = 1\n"] {
        let cfg = dir.path().join("bad.toml");
        std::fs::write(&cfg, text).unwrap();
        let o = run(dir.path(), &["--config", cfg.to_str().unwrap(), "cesaro", "--ks-ref", "2"]);
        assert_eq!(o.status.code(), Some(2), "{text}");
    }
}

#[test]
fn reports_are_byte_identical_across_runs_and_threads() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["decomp-scan", "--trials", "200", "--max-support", "6", "--seed", "9"];
    assert_eq!(run(a.path(), &args).status.code(), Some(0));
    let mut more = args.to_vec();
    more.extend(["--threads", "2"]);
    assert_eq!(run(b.path(), &more).status.code(), Some(0));
    for f in ["decomp-scan.json", "decomp-scan.extremal.poly", "decomp-scan.extremal.partition"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn plot_renders_growth_csv() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["growth", "--op", "jordan", "--re", "1", "--p", "1", "--n-max", "64"]).status.code(), Some(0));
    let csv = dir.path().join("growth.csv");
    let svg = dir.path().join("g.svg");
    let o = run(dir.path(), &["plot", "--input", csv.to_str().unwrap(), "--output", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::read_to_string(svg).unwrap().starts_with("<svg"));
}

#[test]
fn gallery_lists_every_family() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["gallery-list"]).status.code(), Some(0));
    let r = report(dir.path(), "gallery-list");
    let ops = r["result"]["operators"].as_array().unwrap();
    assert!(ops.len() >= 8);
    assert!(ops.iter().all(|o| o["spectral_radius"].is_number()));
}
