use std::path::PathBuf;
use std::process::{Command, Output};

use galorb::chartab::{permute_columns, serialize_table};
use galorb::fixtures;
use galorb::matgroup::{FiniteField, MatrixFile, MatrixOverFq};
use serde_json::Value;

fn fixture(kind: &str, name: &str) -> PathBuf {
    let ext = if kind == "groups" { "gens" } else { "json" };
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(kind).join(format!("{name}.{ext}"))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn galorb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_galorb")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = galorb(&all);
    assert!(out.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    galorb(args).status.code().unwrap()
}

#[test]
fn analyze_perm_small_groups() {
    for (name, rank, f) in [("A5", 1, 2), ("C5", 1, 4), ("S3", 0, 1), ("Q8", 0, 1), ("PSL2_7", 0, 2)] {
        let v = json(&["analyze-perm", fixture("groups", name).to_str().unwrap()]);
        assert_eq!((v["rank"].as_u64().unwrap(), v["f"].as_u64().unwrap()), (rank, f), "{name}");
        assert_eq!(v["is_cut"].as_bool().unwrap(), rank == 0);
    }
    let v = json(&["analyze-perm", "--alternating", "25"]);
    assert_eq!(v["rank"], 1);
}

#[test]
fn analyze_table_reports_and_crosschecks() {
    let v = json(&["analyze-table", fixture("tables", "A5").to_str().unwrap()]);
    assert_eq!((v["rank_eq1"].as_u64(), v["f_table"].as_u64()), (Some(1), Some(2)));
    assert!(v.get("crosscheck").is_none());
    let v = json(&["analyze-table", fixture("tables", "C3").to_str().unwrap()]);
    assert_eq!((v["rank_eq1"].as_u64(), v["f_table"].as_u64()), (Some(0), Some(2)));
    let v = json(&[
        "analyze-table",
        fixture("tables", "PSL2_7").to_str().unwrap(),
        "--group",
        fixture("groups", "PSL2_7").to_str().unwrap(),
    ]);
    assert_eq!(v["crosscheck"]["passed"], true);
}

#[test]
fn corrupted_table_is_rejected() {
    let bad = r#"{"name": "bad", "order": 3, "class_sizes": [1, 1, 1], "class_orders": [1, 3, 3],
        "irr": [[1, 1, 1], [1, {"n": 3, "coeffs": {"1": 1}}, {"n": 3, "coeffs": {"1": 1}}],
                [1, {"n": 3, "coeffs": {"2": 1}}, {"n": 3, "coeffs": {"1": 1}}]]}"#;
    let out = galorb(&["analyze-table", scratch("bad_c3.json", bad).to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("orthogonality"));
}

#[test]
fn permuted_columns_fail_the_crosscheck() {
    let table = permute_columns(&fixtures::table("A5"), &[0, 2, 1, 3, 4]);
    let path = scratch("a5_permuted.json", &serialize_table(&table));
    let out = galorb(&["analyze-table", path.to_str().unwrap(), "--group", fixture("groups", "A5").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAILED"));
}

#[test]
fn an_rank_values() {
    let v = json(&["an-rank", "5..13"]);
    let ranks: Vec<u64> = v.as_array().unwrap().iter().map(|r| r["frobenius_rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, [1, 1, 0, 0, 0, 1, 1, 0, 1]);
    assert_eq!(json(&["an-rank", "25"])[0]["frobenius_rank"], 1);
    let v = json(&["an-rank", "26"]);
    assert!(v[0]["frobenius_rank"].as_u64().unwrap() > 1);
    assert!(v[0]["prop8"]["bound"].as_u64().unwrap() <= v[0]["frobenius_rank"].as_u64().unwrap());
}

#[test]
fn screen_sets_and_certificates() {
    let v = json(&["screen", "PSp"]);
    let got: Vec<(u64, u64)> = serde_json::from_value(v[0]["exceptions"].clone()).unwrap();
    assert_eq!(got, [(4, 3), (4, 4), (4, 5), (6, 2), (6, 3), (8, 2), (10, 2), (12, 2)]);
    let v = json(&["screen", "all"]);
    assert_eq!(v.as_array().unwrap().len(), 7);
    assert!(v.as_array().unwrap().iter().all(|r| r["certificate"]["certified"] == true));
    assert_eq!(code(&["screen", "PSp", "--box", "10x64"]), 3);
    assert_eq!(code(&["screen", "PSX"]), 2);
    assert_eq!(code(&["screen", "PSL", "--box", "40"]), 2);
}

#[test]
fn torus_records_are_screened() {
    let records = concat!(
        r#"{"group": "E8", "torus_order": [1, 1, 0, -1, -1, -1, 0, 1, 1], "index_bound": 30}"#,
        "\n",
        r#"{"group": "G2", "torus_order": 3, "index_bound": 6}"#,
        "\n"
    );
    let path = scratch("tori.jsonl", records);
    let v = json(&["screen", "--torus", path.to_str().unwrap(), "--q", "2"]);
    assert_eq!(v[0]["group"], "E8");
    assert_eq!(v[0]["excluded"], true);
    assert_eq!(v[1]["excluded"], false);
}

#[test]
fn charpoly_modes() {
    let v = json(&["charpoly", "singer", "4", "2"]);
    assert_eq!((v["order"].as_u64(), v["count"].as_u64(), v["unit_orbits"].as_u64()), (Some(15), Some(2), Some(2)));
    let v = json(&["charpoly", "singer", "2", "3"]);
    assert_eq!((v["order"].as_u64(), v["count"].as_u64()), (Some(8), Some(2)));
    let v = json(&["charpoly", "bound", "--count", "16", "--center", "3"]);
    assert_eq!(v["bound"]["bound"], 5);
    assert_eq!(v["bound"]["f_gt_4"], true);
    assert_eq!(code(&["charpoly", "bound", "--count", "16", "--center", "0"]), 2);
}

fn gl23_file() -> PathBuf {
    let f = std::sync::Arc::new(FiniteField::new(3).unwrap());
    let gens = [
        MatrixOverFq::new(f.clone(), 2, vec![2, 0, 0, 1]).unwrap(),
        MatrixOverFq::new(f, 2, vec![2, 1, 2, 0]).unwrap(),
    ];
    scratch("gl23.json", &serde_json::to_string(&MatrixFile::from_matrices(&gens).unwrap()).unwrap())
}

#[test]
fn charpoly_search() {
    let path = gl23_file();
    let v = json(&["charpoly", "search", path.to_str().unwrap(), "--target", "8", "--seed", "3"]);
    assert_eq!(v["found"], true);
    assert_eq!(v["count"], 2);
    assert_eq!(code(&["charpoly", "search", path.to_str().unwrap(), "--target", "5", "--attempts", "50"]), 3);
}

#[test]
fn guards_and_bad_input() {
    let a9 = fixture("groups", "A9");
    assert_eq!(code(&["analyze-perm", a9.to_str().unwrap(), "--max-order", "1000"]), 4);
    assert_eq!(code(&["an-rank", "399..401"]), 4);
    assert_eq!(code(&["an-rank", "9..5"]), 2);
    assert_eq!(code(&["analyze-perm", "/nonexistent/file.gens"]), 2);
    let bad = scratch("bad.gens", "degree 4\n(1,2,5)\n");
    assert_eq!(code(&["analyze-perm", bad.to_str().unwrap()]), 2);
    assert_eq!(code(&["charpoly", "singer", "40", "64"]), 4);
    assert_eq!(code(&["charpoly", "singer", "2", "6"]), 2);
}

#[test]
fn out_flag_writes_the_report() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("a5_report.txt");
    let _ = std::fs::remove_file(&path);
    let out = galorb(&["analyze-perm", fixture("groups", "A5").to_str().unwrap(), "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("rank     1"));
}
