use std::fs;
use std::process::{Command, Output};

fn bolops(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bolops")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = bolops(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn odd_plane_has_two_degree_one_cases() {
    let v = json(&["classify", "--sdim", "0", "2", "--degree", "1", "--algebra", "pgl", "--format", "json"]);
    let cases = v["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 2);
    let weights: Vec<&str> = cases.iter().map(|c| c["weight_v"].as_str().unwrap()).collect();
    assert!(weights.contains(&"(0, l2)"));
    assert!(weights.contains(&"(l1, 1)"));
    assert_eq!(v["input"]["algebra"], "pgl");
    assert_eq!(cases[0]["constraints"][0]["kind"], "equality");
}

#[test]
fn no_vect_operators_of_degree_three_on_one_one() {
    let v = json(&["classify", "--sdim", "1", "1", "--degree", "3", "--algebra", "vect", "--format", "json"]);
    assert!(v["cases"].as_array().unwrap().is_empty());
}

#[test]
fn four_odd_coordinates_set_the_continuum_flag() {
    let v = json(&["classify", "--sdim", "0", "4", "--degree", "1", "--algebra", "pgl", "--format", "json"]);
    assert_eq!(v["continuum"]["flag"], true);
    assert_eq!(v["continuum"]["codimension"], 1);
}

#[test]
fn json_is_byte_stable() {
    let args = ["classify", "--sdim", "0", "3", "--degree", "2", "--format", "json", "--samples", "4", "--seed", "9"];
    let a = bolops(&args);
    let b = bolops(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn markdown_and_patterns() {
    let o = bolops(&["classify", "--sdim", "1", "1", "--degree", "4", "--patterns"]);
    let s = stdout(&o);
    assert!(s.contains("wht = (l1, n - 2*l1)"), "{s}");
    assert!(s.contains("wht(v) = (3, -3) → wht(f) = (0, -4)"), "{s}");
}

#[test]
fn oracle_dimensions() {
    for (args, dim) in [
        (["--sdim", "0", "3", "--degree", "1", "--weight", "0,0,-5", "--algebra", "vect"], 1),
        (["--sdim", "0", "3", "--degree", "3", "--weight", "1,1,1", "--algebra", "pgl"], 1),
        (["--sdim", "2", "0", "--degree", "1", "--weight", "2,3", "--algebra", "pgl"], 0),
    ] {
        let mut full = vec!["oracle"];
        full.extend(args);
        let o = bolops(&full);
        assert!(o.status.success());
        assert!(stdout(&o).contains(&format!("dimension: {dim}\n")), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn verma_flag_changes_boundary_answers() {
    let o = bolops(&["oracle", "--sdim", "0", "2", "--degree", "1", "--weight", "1,1", "--verma"]);
    assert!(stdout(&o).contains("dimension: 1"));
    let o = bolops(&["oracle", "--sdim", "0", "2", "--degree", "1", "--weight", "1,1"]);
    assert!(stdout(&o).contains("dimension: 0"));
}

#[test]
fn bad_inputs_exit_one() {
    assert_eq!(bolops(&["oracle", "--sdim", "0", "2", "--degree", "1", "--weight", "1,x"]).status.code(), Some(1));
    assert_eq!(bolops(&["oracle", "--sdim", "0", "2", "--degree", "1", "--weight", "1"]).status.code(), Some(1));
    assert_eq!(bolops(&["classify", "--sdim", "0", "0", "--degree", "1"]).status.code(), Some(1));
    assert_eq!(bolops(&["classify", "--sdim", "0", "2", "--degree", "1", "--algebra", "sl"]).status.code(), Some(1));
    assert_eq!(bolops(&["classify", "--sdim", "0", "2"]).status.code(), Some(1));
}

#[test]
fn shallow_depth_exits_three() {
    let o = bolops(&["classify", "--sdim", "0", "2", "--degree", "1", "--depth", "0"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn selftest_quick_and_full() {
    let o = bolops(&["selftest", "--quick"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("golden"));
    let o = bolops(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn corrupted_golden_table_exits_four_with_diff() {
    let dir = std::env::temp_dir().join(format!("bolops-golden-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let src = concat!(env!("CARGO_MANIFEST_DIR"), "/golden/o02_deg2_pgl.json");
    let text = fs::read_to_string(src).unwrap().replace("(1, 1)", "(1, 2)");
    fs::write(dir.join("o02_deg2_pgl.json"), text).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_bolops")).arg("selftest").env("BOLOPS_GOLDEN_DIR", &dir).output().unwrap();
    fs::remove_dir_all(&dir).unwrap();
    assert_eq!(o.status.code(), Some(4));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("- d_xi1*d_xi2: (1, 2) -> (0, 0)"), "{err}");
    assert!(err.contains("+ d_xi1*d_xi2: (1, 1) -> (0, 0)"), "{err}");
}
