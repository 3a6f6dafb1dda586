use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symjoin"))
        .args(args)
        .output()
        .expect("the symjoin binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("symjoin-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn skeleton_and_facet_writers() {
    let o = run(&["complex", "from-facets", "--m", "4", "--facets", "1 2 3; 3 4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, serde_json::json!({"m": 4, "facets": [[1, 2, 3], [3, 4]]}));

    let o = run(&["complex", "skeleton", "--m", "3", "--k", "1", "--r", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["complexes"].as_array().unwrap().len(), 2);
    assert_eq!(v["complexes"][0]["facets"], serde_json::json!([[1], [2], [3]]));
}

#[test]
fn dual_of_rp2_is_rp2() {
    let path = scratch("rp2.json");
    let o = run(&["complex", "rp2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let dual = run(&["complex", "dual", "--input", path.to_str().unwrap()]);
    assert_eq!(
        stdout(&dual),
        std::fs::read_to_string(&path).unwrap()
    );
}

#[test]
fn unavoidability_certificates() {
    let path = scratch("avoidable.json");
    run(&["complex", "skeleton", "--m", "6", "--k", "2", "--r", "2", "--out", path.to_str().unwrap()]);
    for method in ["auto", "brute", "deficiency"] {
        let o = run(&["check", "unavoidable", "--input", path.to_str().unwrap(), "--method", method]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["verdict"], false);
        let blocks = v["witness"]["partition"].as_array().unwrap();
        assert!(blocks.iter().all(|b| b.as_array().unwrap().len() == 3));
    }
    let o = run(&["check", "balanced", "--input", path.to_str().unwrap(), "--k", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["balanced"], true);
}

#[test]
fn morse_dot_has_two_matched_arcs_and_two_criticals() {
    let dot = scratch("tiny.dot");
    let o = run(&["morse", "--fixture", "tiny-m2r2", "--emit-dot", dot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches("color=red").count(), 2);
    assert_eq!(text.matches("fillcolor=gold").count(), 2);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["connectivity"], "-1-connected");
    assert_eq!(v["matched_pairs"], 2);
}

#[test]
fn homology_of_rp2_and_matrix_dump() {
    let dir = scratch("rp2-matrices");
    let o = run(&[
        "homology",
        "--fixture",
        "rp2",
        "--max-dim",
        "2",
        "--dump-matrices",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["torsion"][1], serde_json::json!(["2"]));
    assert_eq!(v["betti"], serde_json::json!([0, 0, 0]));
    let d2 = std::fs::read_to_string(dir.join("d2.txt")).unwrap();
    assert!(d2.starts_with("# 15 10\n"));
    assert_eq!(d2.lines().count(), 1 + 30);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["repro", "nope"]).status.code(), Some(2));
    assert_eq!(
        run(&["morse", "--input", "/nonexistent/family.json"]).status.code(),
        Some(3)
    );
    let junk = scratch("junk.json");
    std::fs::write(&junk, "{\"hello\": 1}").unwrap();
    assert_eq!(
        run(&["homology", "--input", junk.to_str().unwrap()]).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["morse", "--fixture", "rp2-triple", "--max-cells", "1000"]).status.code(),
        Some(4)
    );
    // an avoidable family leaves small critical cells
    let path = scratch("avoidable-morse.json");
    run(&["complex", "skeleton", "--m", "6", "--k", "2", "--r", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(
        run(&["morse", "--input", path.to_str().unwrap()]).status.code(),
        Some(5)
    );
    // the two-point join is disconnected
    let o = run(&["homology", "--fixture", "tiny-m2r2", "--c", "0"]);
    assert_eq!(o.status.code(), Some(5));
    let o = run(&["homology", "--fixture", "tiny-m2r2", "--c", "-1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for args in [
        vec!["morse", "--fixture", "bier-m4", "--pairs"],
        vec!["homology", "--fixture", "bier-m4", "--kind", "deleted"],
        vec!["repro", "bier-3-1", "--seed", "7", "--samples", "2"],
        vec!["repro", "tiny-m2r2"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn bier_m4_deleted_join_is_a_two_sphere() {
    let o = run(&["homology", "--fixture", "bier-m4", "--kind", "deleted"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["betti"], serde_json::json!([0, 0, 1]));
}

#[test]
fn join_round_trips_through_files() {
    let fam = scratch("bier-family.json");
    let join = scratch("bier-join.json");
    let (k, dual) = symjoin::fixtures::bier_pair_m4();
    let file = symjoin::Family::new(vec![k, dual]).unwrap().to_file();
    std::fs::write(&fam, serde_json::to_string(&file).unwrap()).unwrap();
    let o = run(&[
        "join",
        "symmetric",
        "--input",
        fam.to_str().unwrap(),
        "--out",
        join.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let from_join = run(&["morse", "--input", join.to_str().unwrap()]);
    let from_family = run(&["morse", "--input", fam.to_str().unwrap()]);
    assert_eq!(from_join.status.code(), Some(0));
    assert_eq!(from_join.stdout, from_family.stdout);
}
