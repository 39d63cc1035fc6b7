use std::path::PathBuf;

use krnn_cli::{exit, run};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn krnn(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("krnn").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn solve_square_k1() {
    let (code, out, _) = krnn(&["solve", &fixture("square4.tsp"), "--k", "1"]);
    assert_eq!(code, exit::OK);
    assert!(out.lines().next().unwrap().starts_with("config {"));
    assert!(out.contains("\ncost 4000\n"), "{out}");
    assert!(out.contains("candidates 4\n"));
}

#[test]
fn solve_rejects_large_k() {
    let (code, _, err) = krnn(&["solve", &fixture("square4.tsp"), "--k", "99"]);
    assert_eq!(code, exit::LIMIT);
    assert!(err.contains("k"), "{err}");
}

#[test]
fn prefix_guard_is_a_limit_refusal() {
    let (code, _, err) = krnn(&[
        "solve",
        &fixture("square4.tsp"),
        "--k",
        "3",
        "--prefix-limit",
        "5",
    ]);
    assert_eq!(code, exit::LIMIT);
    assert!(err.contains("--prefix-limit"));
}

#[test]
fn usage_and_parse_errors() {
    assert_eq!(krnn(&["solve"]).0, exit::USAGE);
    assert_eq!(krnn(&["frobnicate"]).0, exit::USAGE);
    assert_eq!(
        krnn(&["solve", &fixture("square4.tsp"), "--mode", "loop"]).0,
        exit::USAGE
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tsp");
    std::fs::write(&bad, "NAME: bad\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 x 1\nEOF\n").unwrap();
    let (code, _, err) = krnn(&["solve", bad.to_str().unwrap()]);
    assert_eq!(code, exit::PARSE);
    assert!(err.starts_with("error:"));
    assert_eq!(
        krnn(&["parse", dir.path().join("missing.tsp").to_str().unwrap()]).0,
        exit::PARSE
    );
}

#[test]
fn tree_stages_on_square() {
    let (code, out, _) = krnn(&["tree", &fixture("square4.tsp"), "--stage", "mst"]);
    assert_eq!(code, exit::OK);
    assert_eq!(out.lines().filter(|l| l.starts_with("edge ")).count(), 3);
    assert!(out.contains("weight 3000\n"));
    let (code, out, _) = krnn(&["tree", &fixture("square4.tsp"), "--stage", "tree4"]);
    assert_eq!(code, exit::OK);
    assert!(out.contains("ratio 1.000000"));
    let (code, out, _) = krnn(&["tree", &fixture("square4.tsp"), "--stage", "tour-trees"]);
    assert_eq!(code, exit::OK);
    assert_eq!(out.lines().filter(|l| l.starts_with("tree ")).count(), 4);
    assert!(out.contains("weight_sum 12000 (n-1)*tour_cost 12000 identity holds"));
}

#[test]
fn parse_prints_header() {
    let (code, out, _) = krnn(&["parse", &fixture("square4.tsp")]);
    assert_eq!(code, exit::OK);
    assert!(out.contains("dimension 4\n"));
    assert!(out.contains("edge_weight_type Euc2d"));
}

#[test]
fn verify_writes_versioned_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.json");
    let (code, out, _) = krnn(&[
        "verify",
        "theorem3",
        "--trials",
        "20",
        "--n",
        "30",
        "--seed",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, exit::OK);
    assert!(out.contains("theorem3 ["));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["verdicts"][0]["claim_id"], "theorem3");
    assert_eq!(doc["verdicts"][0]["violations"], 0);
}

#[test]
fn verify_named_square_theorem2() {
    let (code, out, _) = krnn(&[
        "verify",
        "theorem2",
        "--instance",
        &fixture("square4.tsp"),
        "--format",
        "json",
    ]);
    assert_eq!(code, exit::OK);
    let json = out.split_once('\n').unwrap().1;
    let doc: serde_json::Value = serde_json::from_str(json).unwrap();
    let v = &doc["verdicts"][0];
    assert_eq!(v["violations"], 1);
    assert_eq!(v["non_strict_violations"], 0);
}

#[test]
fn verify_lemma2_rejects_arbitrary_kind() {
    let (code, _, err) = krnn(&["verify", "lemma2", "--kind", "arbitrary", "--trials", "3"]);
    assert_eq!(code, exit::USAGE);
    assert!(err.contains("metric"));
}

#[test]
fn bench_subset_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("b.csv");
    let (code, _, _) = krnn(&[
        "bench",
        "--only",
        "gr17,gr21",
        "--format",
        "csv",
        "--out",
        out_path.to_str().unwrap(),
        "--data-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, exit::OK);
    let csv = std::fs::read_to_string(out_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "name,n,optimum,k,result,excess,paper_result,paper_excess,delta,time,status"
    );
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("gr17,17,2085,1,"));
    assert!(lines.iter().skip(1).all(|l| l.ends_with(",unavailable")));
    assert_eq!(krnn(&["bench", "--only", "nosuch"]).0, exit::USAGE);
}
