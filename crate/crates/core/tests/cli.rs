use std::process::{Command, Output};

fn lattika(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lattika")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_reports_verdict_and_witness() {
    let o = lattika(&["check", &fixture("N5"), "--prop", "modular"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("false, witness (r,p,q)"));

    let o = lattika(&["check", &fixture("M3"), "--prop", "type1(all)", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["holds"], true);

    let o = lattika(&["check", &fixture("M3"), "--prop", "in(pow(simple,2)) and not uniform"]);
    assert_eq!(stdout(&o), "true\n");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(lattika(&["check", &fixture("M3"), "--prop", "nonsense("]).status.code(), Some(2));
    assert_eq!(lattika(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(lattika(&["verify", "--enumerate", "3", "--checks", "R0"]).status.code(), Some(2));
    let o = lattika(&["enumerate", "12"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("12"));
}

#[test]
fn size_cap_can_be_lowered_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_lattika"))
        .args(["enumerate", "6"])
        .env("LATTIKA_MAX_N", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classes_of_the_three_chain() {
    let o = lattika(&["classes", &fixture("C3")]);
    assert_eq!(stdout(&o), "E = {m,1}\nC = {0,1}\nD = {0,1}\nP(0) = {1}\nP(m) = {0}\nP(1) = {0}\nudim = 1\nflen = 2\n");
}

#[test]
fn enumerate_writes_corpus_that_verify_reads_back() {
    let dir = std::env::temp_dir().join(format!("lattika-cli-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let o = lattika(&["enumerate", "6", "--filter", "modular", "--out", dir.to_str().unwrap()]);
    assert_eq!(stdout(&o), "8\n");
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 8);

    let o = lattika(&["verify", "--corpus", dir.to_str().unwrap(), "--checks", "R1,R2,R8", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for c in v["checks"].as_array().unwrap() {
        assert_eq!(c["scope_count"], 8);
        assert_eq!(c["violations"], serde_json::json!([]));
    }

    std::fs::write(dir.join("broken.json"), "{").unwrap();
    let dir_arg = dir.to_str().unwrap();
    assert_eq!(lattika(&["verify", "--corpus", dir_arg, "--checks", "R1"]).status.code(), Some(2));
    assert_eq!(lattika(&["verify", "--corpus", dir_arg, "--checks", "R1", "--lenient"]).status.code(), Some(0));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn fixtures_directory_passes_r35() {
    let dir = format!("{}/fixtures", env!("CARGO_MANIFEST_DIR"));
    assert_eq!(lattika(&["verify", "--corpus", &dir, "--checks", "R35"]).status.code(), Some(0));
}

#[test]
fn mine_prints_witness_json() {
    let o = lattika(&["mine", "--hyp", "not modular", "--neg", "not dsubc", "--max-n", "6", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"], "witness");
    assert_eq!(v["n"], 5);
    let o = lattika(&["mine", "--hyp", "simple", "--neg", "not extending", "--max-n", "3"]);
    assert!(stdout(&o).starts_with("exhausted"));
}

#[test]
fn help_documents_the_grammar() {
    let o = lattika(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("type1(X)"));
}
