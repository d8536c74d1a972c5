use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use ssp_core::published::published_set;

fn ssp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}\n{}",
            String::from_utf8_lossy(&o.stdout),
            String::from_utf8_lossy(&o.stderr)
        )
    })
}

fn curve_file(dir: &Path, name: &str, sets: &[&str]) -> String {
    let mut curves = Vec::new();
    for s in sets {
        let set = published_set(s).unwrap();
        let case = set.quadric_case();
        for c in &set.cubics {
            curves.push(json!({ "case": case, "p": set.q, "cubic": c.cubic }));
        }
    }
    let path = dir.join(name);
    std::fs::write(&path, json!({ "curves": curves }).to_string()).unwrap();
    path.to_string_lossy().into_owned()
}

fn cubics(report: &Value) -> Vec<String> {
    report["curves"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["cubic"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn small_characteristic_is_a_config_error() {
    let o = ssp(&["enumerate", "--case", "n1", "--q", "3"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("p >= 5"));
    assert_eq!(code(&ssp(&["enumerate", "--case", "n1", "--q", "9"])), 2);
    assert_eq!(
        code(&ssp(&["enumerate", "--case", "n1", "--q", "11", "--split", "nope"])),
        2
    );
    assert_eq!(
        code(&ssp(&["enumerate", "--case", "n1", "--q", "11", "--split", "i", "--slice", "zz=1"])),
        2
    );
}

#[test]
fn full_oracle_over_f11_is_refused() {
    let o = ssp(&["oracle", "--case", "n1", "--q", "11"]);
    assert_eq!(code(&o), 3);
    let o = ssp(&["enumerate", "--case", "n1", "--q", "11", "--split", "i", "--backend", "brute"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn budget_overrides_come_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_ssp"))
        .args(["oracle", "--case", "dege", "--q", "5", "--form", "2"])
        .env("SSP_ORACLE_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn second_degenerate_form_matches_the_oracle() {
    let h = ssp(&["enumerate", "--case", "dege", "--q", "5", "--form", "2", "--workers", "2"]);
    assert_eq!(code(&h), 0, "{}", String::from_utf8_lossy(&h.stderr));
    let b = ssp(&["oracle", "--case", "dege", "--q", "5", "--form", "2"]);
    assert_eq!(code(&b), 0);
    let (h, b) = (stdout_json(&h), stdout_json(&b));
    assert!(!cubics(&h).is_empty());
    assert_eq!(cubics(&h), cubics(&b));
    for key in ["zeta", "preset_version", "code_version"] {
        assert!(!h["meta"][key].is_null(), "{key}");
    }
}

#[test]
fn slice_run_logs_roots_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.jsonl");
    let args = [
        "enumerate", "--case", "n1", "--q", "11", "--split", "iii", "--slice",
        "b2=1,a2=1,a3=0,a5=2",
    ];
    let a = ssp(&args);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert!(String::from_utf8_lossy(&a.stderr).contains("roots before smoothness"));
    let mut with_ck: Vec<&str> = args.to_vec();
    let ck_s = ck.to_string_lossy().into_owned();
    with_ck.extend(["--checkpoint", &ck_s]);
    let b = ssp(&with_ck);
    let c = ssp(&with_ck);
    assert!(String::from_utf8_lossy(&c.stderr).contains("resumed 11"));
    let strip = |o: &Output| {
        let mut v = stdout_json(o);
        let stats = v["stats"].as_object_mut().unwrap();
        stats.retain(|k, _| !k.starts_with("seconds") && k != "resumed");
        v
    };
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(strip(&a), strip(&c));
}

#[test]
fn published_curves_verify() {
    let dir = tempfile::tempdir().unwrap();
    let f = curve_file(dir.path(), "f11.json", &["n1-q11", "n2-q11", "dege-q11"]);
    let o = ssp(&["verify", &f]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = stdout_json(&o);
    assert_eq!(r["failures"], 0);
    assert_eq!(r["records"].as_array().unwrap().len(), 30);
    for rec in r["records"].as_array().unwrap() {
        assert_eq!(rec["superspecial"], true);
        assert_eq!(rec["smooth"], true);
        assert_eq!(rec["congruence"], true);
    }
}

#[test]
fn maximal_example_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let f = curve_file(dir.path(), "alc.json", &["alc-n1-q11"]);
    let o = ssp(&["verify", &f]);
    let r = stdout_json(&o);
    let p3 = &r["records"][2];
    assert_eq!(p3["count_fp2"], 210);
    assert_eq!(p3["maximal"], true);
}

#[test]
fn corrupted_records_are_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let set = published_set("n1-q11").unwrap();
    let good = &set.cubics[0].cubic;
    let curves = json!([
        { "case": { "tag": "n1", "eps": 0 }, "p": 11, "cubic": good },
        { "case": { "tag": "n1", "eps": 0 }, "p": 11, "cubic": format!("{good} + y^3") },
        { "case": { "tag": "n1", "eps": 0 }, "p": 11, "cubic": "x^3 +" },
        { "case": "n1", "p": 11 },
        { "case": { "tag": "n1", "eps": 0 }, "p": 3, "cubic": good },
    ]);
    let path = dir.path().join("bad.json");
    std::fs::write(&path, curves.to_string()).unwrap();
    let o = ssp(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&o), 4);
    let r = stdout_json(&o);
    let oks: Vec<bool> = r["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["ok"].as_bool().unwrap())
        .collect();
    assert_eq!(oks, [true, false, false, false, false]);
    assert!(r["records"][2]["error"].is_string());
    assert!(r["records"][3]["error"].is_string());
}

#[test]
fn classify_singleton_and_published_sets() {
    let dir = tempfile::tempdir().unwrap();
    let set = published_set("dege-q11").unwrap();
    let one = json!([{ "case": set.quadric_case(), "p": 11, "cubic": set.cubics[0].cubic }]);
    let path = dir.path().join("one.json");
    std::fs::write(&path, one.to_string()).unwrap();
    let o = ssp(&["classify", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["classes"].as_array().unwrap().len(), 1);

    let f = curve_file(dir.path(), "dege.json", &["dege-q11"]);
    let o = ssp(&["classify", &f]);
    let r = stdout_json(&o);
    assert_eq!(r["classes"].as_array().unwrap().len(), 17);
    let o = ssp(&["classify", "--field", "closure", &f]);
    assert_eq!(stdout_json(&o)["classes"].as_array().unwrap().len(), 6);
}

#[test]
fn closure_classification_transports_the_nonsplit_form() {
    let dir = tempfile::tempdir().unwrap();
    let n1 = curve_file(dir.path(), "n1.json", &["n1-q11"]);
    let n2 = curve_file(dir.path(), "n2.json", &["n2-q11"]);
    let o = ssp(&["classify", "--field", "closure", &n1, &n2]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = stdout_json(&o);
    assert_eq!(r["classes"].as_array().unwrap().len(), 3);
    assert_eq!(r["meta"]["q"], 121);
    let members = r["members"].as_array().unwrap();
    assert_eq!(members.len(), 13);
    assert!(members[8]["source"].is_string());
    assert!(members[0]["source"].is_null());

    // over F_11 the two quadrics cannot be mixed
    let o = ssp(&["classify", &n1, &n2]);
    assert_eq!(code(&o), 2);
}
