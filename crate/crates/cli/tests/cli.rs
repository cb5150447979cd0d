use std::process::{Command, Output};

use serde_json::Value;

fn biprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biprod")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON report")
}

fn library_text() -> String {
    std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/examples.json")).unwrap()
}

#[test]
fn group_report_orders_and_orbits() {
    let o = biprod(&["group-report", "--input", r#"{"moduli":[3,9]}"#]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["order"], 27);

    let o = biprod(&["group-report", "--input", r#"{"moduli":[3,9],"sigma":{"main_example":"p3-z3-z9"}}"#]);
    let r = json(&o);
    assert_eq!(r["orbit_histogram"], serde_json::json!({"1": 9, "3": 6}));
    assert_eq!(r["fixed_subgroup"]["order"], 9);
    assert_eq!(r["cosets"].as_array().unwrap().len(), 3);
}

#[test]
fn enumerate_examples() {
    let z9 = r#"{"moduli":[9],"sigma":[[2]]}"#;
    let r = json(&biprod(&["enumerate", "--input", z9, "--target", "gamma"]));
    assert_eq!(r["order"], 6);
    assert_eq!(r["chain"]["aut_sigma"], 6);
    assert_eq!(r["witnesses"].as_array().unwrap().len(), 6);
    let r = json(&biprod(&["enumerate", "--input", z9, "--target", "sym-minus"]));
    assert_eq!(r["order"], 12);

    let p2 = r#"{"moduli":[2,4],"sigma":{"main_example":"p2-z2-z4"}}"#;
    let r = json(&biprod(&["enumerate", "--input", p2, "--strategy", "brute"]));
    assert!(r["order"].as_u64().unwrap() > r["chain"]["aut_sigma"].as_u64().unwrap());
}

#[test]
fn tsv_has_one_row_per_instance() {
    let list = r#"[{"moduli":[9],"sigma":[[2]]},{"moduli":[2,4],"sigma":[[1,2],[0,3]]}]"#;
    let o = biprod(&["enumerate", "--input", list, "--format", "tsv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].ends_with("6\t6\t12\tAut=Gamma<Sym"), "{}", rows[1]);
    assert!(rows[2].ends_with("4\t8\t8\tAut<Gamma=Sym"), "{}", rows[2]);
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        vec!["enumerate", "--input", r#"{"moduli":[3,3],"sigma":[[2,0],[0,2]]}"#, "--target", "sym-plus"],
        vec!["verify", "--theorem", "factorization-laws"],
        vec!["verify", "--theorem", "main-examples", "--format", "tsv"],
    ] {
        let a = biprod(&args);
        let b = biprod(&args);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(code(&biprod(&["group-report", "--input", r#"{"moduli":[3,9"#])), 2);
    assert_eq!(code(&biprod(&["group-report", "--input", r#"{"moduli":[3],"colour":1}"#])), 2);
    assert_eq!(code(&biprod(&["group-report", "--input", "/no/such/file.json"])), 2);
    assert_eq!(code(&biprod(&["group-report"])), 2);
    assert_eq!(code(&biprod(&["enumerate", "--input", r#"{"moduli":[3]}"#, "--brute-cap", "0"])), 2);
    assert_eq!(code(&biprod(&["enumerate", "--input", r#"{"moduli":[4],"sigma":[[2]]}"#])), 2);
    assert_eq!(code(&biprod(&["verify", "--theorem", "nope"])), 2);
    let o = biprod(&["group-report", "--input", "{oops"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed JSON"));
}

#[test]
fn brute_cap_exit_three() {
    let z9 = r#"{"moduli":[9],"sigma":[[2]]}"#;
    assert_eq!(code(&biprod(&["enumerate", "--input", z9, "--strategy", "brute"])), 3);
    let o = biprod(&["enumerate", "--input", z9, "--strategy", "brute", "--allow-nine", "--target", "sym-minus"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["order"], 12);
    assert_eq!(code(&biprod(&["verify", "--theorem", "involution"])), 3);
    assert_eq!(code(&biprod(&["verify", "--theorem", "involution", "--allow-nine"])), 0);
}

#[test]
fn verify_suites_pass() {
    for t in [
        "two-ffs",
        "sigma-nofix",
        "reduction",
        "main-examples",
        "group-main",
        "sym-equality",
        "hopf-axioms",
        "factorization-laws",
        "kernel-nu",
    ] {
        let o = biprod(&["verify", "--theorem", t]);
        assert_eq!(code(&o), 0, "{t}: {}", String::from_utf8_lossy(&o.stdout));
        assert_eq!(json(&o)["passed"], true);
    }
}

#[test]
fn phi_not_reports_the_witness() {
    let o = biprod(&["verify", "--theorem", "phi-not"]);
    assert_eq!(code(&o), 0);
    let d = &json(&o)["suites"][0]["checks"][0]["details"];
    assert_eq!(d["fl_coalgebra"], false);
    assert_eq!(d["hopf_endo_fixing_pi"]["coalgebra"], true);
    assert!(d["tau"].is_array());
}

#[test]
fn failing_check_exits_one() {
    let mut lib: Value = serde_json::from_str(&library_text()).unwrap();
    // Without the twisted witness nothing certifies Γ ≠ Sym⁻.
    lib["group_main"][0]["cases"].as_array_mut().unwrap().pop();
    let o = biprod(&["verify", "--theorem", "group-main", "--input", &lib.to_string()]);
    assert_eq!(code(&o), 1);
    let r = json(&o);
    assert_eq!(r["passed"], false);
    assert_eq!(r["suites"][0]["checks"][0]["details"]["has_sym_not_gamma"], false);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("biprod-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let o = biprod(&["group-report", "--input", r#"{"moduli":[6]}"#, "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["order"], 6);
    assert_eq!(r["config"]["command"], "group-report");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn input_from_file() {
    let dir = std::env::temp_dir().join(format!("biprod-in-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("lib.json");
    std::fs::write(&path, library_text()).unwrap();
    let o = biprod(&["verify", "--theorem", "hopf-axioms", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    std::fs::remove_dir_all(&dir).unwrap();
}
