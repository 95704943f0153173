use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use freeconv::freeprob::random_cumulants;
use freeconv::series::random_series;
use freeconv::TruncSeries;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_freeconv"));
    c.env_remove("FREECONV_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap().trim().to_string()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("valid JSON")
}

fn write_series(name: &str, s: &TruncSeries) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("freeconv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, s.to_json().to_string()).unwrap();
    p
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn enumerate_counts_and_formats() {
    let o = run(&["enumerate", "--kind", "trees", "--n", "3", "--format", "count"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "5");
    for kind in ["ncp", "pt", "rst", "lst", "ndpf"] {
        let o = run(&["enumerate", "--kind", kind, "--n", "4"]);
        assert_eq!(json(&o).as_array().unwrap().len(), 14, "{kind}");
    }
    let o = run(&["enumerate", "--kind", "ncp", "--n", "2", "--format", "ascii"]);
    assert!(stdout(&o).contains('|'));
}

#[test]
fn map_examples_and_round_trip() {
    let o = run(&["map", "--name", "phi", "--input", "((|,|),|)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[[1],[2]]");
    let p = stdout(&o);
    let back = run(&["map", "--name", "phi_inv", "--input", &p]);
    assert_eq!(json(&back), Value::String("((|,|),|)".into()));
    let o = run(&["map", "--from", "Y", "--to", "NCP1", "--input", "(|,(|,|))"]);
    assert_eq!(stdout(&o), "[[1,2]]");
    let o = run(&["map", "--name", "nope", "--input", "|"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn rmap_and_kreweras() {
    let o = run(&["rmap", "--input", "((|,|),|)"]);
    let r = json(&o);
    let phi = run(&["map", "--name", "phi", "--input", r.as_str().unwrap()]);
    assert_eq!(stdout(&phi), "[[1,3],[2],[4]]");
    let o = run(&["kreweras", "--input", "[[1,2],[3,6,8],[4],[5],[7]]"]);
    assert_eq!(stdout(&o), "[[1],[2,8],[3,4,5],[6,7]]");
    let o = run(&["kreweras", "--input", "[[1,3],[2,4]]"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("crossing"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["enumerate", "--kind", "bogus", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "transforms", "--order", "1"]).status.code(), Some(2));
    assert_eq!(run(&["stransform", "--f", "/nonexistent/f.json"]).status.code(), Some(2));
}

#[test]
fn series_commands_round_trip() {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let k = random_cumulants(&mut r, 2, 3);
    let kp = write_series("k.json", &k);
    let o = run(&["moments", "--cumulants", path(&kp)]);
    assert_eq!(o.status.code(), Some(0));
    let m = TruncSeries::from_json(&json(&o)).unwrap();
    let mp = write_series("m.json", &m);
    let o = run(&["cumulants", "--moments", path(&mp)]);
    assert_eq!(TruncSeries::from_json(&json(&o)).unwrap(), k);
    for cmd in ["stransform", "utransform", "sprime"] {
        let o = run(&[cmd, "--f", path(&kp)]);
        assert_eq!(o.status.code(), Some(0), "{cmd}");
        TruncSeries::from_json(&json(&o)).unwrap();
    }
    let g = random_series(&mut r, 2, 3, 2);
    let gp = write_series("g.json", &g);
    assert_eq!(run(&["stransform", "--f", path(&gp)]).status.code(), Some(3));
    for variant in ["box", "line", "red", "redred"] {
        let o = run(&["convolve", "--variant", variant, "--f", path(&gp), "--g", path(&gp), "--order", "2"]);
        assert_eq!(o.status.code(), Some(0), "{variant}");
        TruncSeries::from_json(&json(&o)).unwrap();
    }
    assert_eq!(run(&["convolve", "--variant", "odd", "--f", path(&gp), "--g", path(&gp)]).status.code(), Some(3));
}

#[test]
fn product_with_check() {
    let mut r = ChaCha8Rng::seed_from_u64(9);
    let ka = write_series("ka.json", &random_cumulants(&mut r, 2, 3));
    let kb = write_series("kb.json", &random_cumulants(&mut r, 2, 3));
    let o = run(&["product", "--ka", path(&ka), "--kb", path(&kb), "--order", "3", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["check"]["status"], "pass");
    let kab = TruncSeries::from_json(&v["kab"]).unwrap();
    assert_eq!(kab.order(), 3);
    let plain = run(&["product", "--ka", path(&ka), "--kb", path(&kb), "--order", "3"]);
    assert_eq!(TruncSeries::from_json(&json(&plain)).unwrap(), kab);
}

#[test]
fn verify_is_deterministic_and_reads_seed_from_env() {
    let strip = |o: &Output| {
        let mut v = json(o);
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let args = ["verify", "--suite", "transforms", "--order", "3", "--dim", "2", "--trials", "2", "--seed", "11"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(strip(&a), strip(&b));
    let o = bin().args(["verify", "--suite", "operad", "--trials", "2"]).env("FREECONV_SEED", "77").output().unwrap();
    assert_eq!(json(&o)["seed"], 77);
    let o = bin()
        .args(["verify", "--suite", "operad", "--trials", "2", "--seed", "3"])
        .env("FREECONV_SEED", "77")
        .output()
        .unwrap();
    assert_eq!(json(&o)["seed"], 3);
}

#[test]
fn verify_all_full_run() {
    let o = run(&["verify", "--suite", "all", "--order", "4", "--dim", "2", "--trials", "10", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&o);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn reverse_search_hook_runs() {
    let o = run(&["search-reverse", "--order", "3", "--dim", "2", "--trials", "3", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["found"].is_array());
}
