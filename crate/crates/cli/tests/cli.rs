use std::path::PathBuf;
use std::process::{Command, Output};

fn mcgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = mcgraph(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn lesmis() -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "data", "lesmis.txt"]
        .iter()
        .collect();
    p.to_str().unwrap().to_string()
}

fn field(csv: &str, column: &str) -> String {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    row[header.iter().position(|h| *h == column).unwrap()].to_string()
}

#[test]
fn les_miserables_stats() {
    let out = stdout(&["stats", "--input", &lesmis()]);
    assert_eq!(field(&out, "nodes"), "77");
    assert_eq!(field(&out, "edges"), "254");
    assert_eq!(field(&out, "triangles"), "467");
    assert_eq!(field(&out, "max_degree"), "36");
    assert_eq!(field(&out, "degree_pcc"), "1");
}

#[test]
fn ring_of_cliques_counts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ring.txt");
    let p = path.to_str().unwrap();
    stdout(&["gen-synthetic", "ring-of-cliques", "--cliques", "10", "--size", "10", "--out", p]);
    let out = stdout(&["stats", "--input", p]);
    assert_eq!(field(&out, "edges"), "460");
    assert_eq!(field(&out, "triangles"), "1200");
    assert_eq!(field(&out, "triangle_pcc"), "");
    let cl = stdout(&["cliques", "--input", p]);
    assert!(cl.ends_with("# count=20 max_size=10\n"), "{cl}");
}

#[test]
fn stats_against_a_reference() {
    let dir = tempfile::tempdir().unwrap();
    let sub = dir.path().join("sub.txt");
    std::fs::write(&sub, "0 1\n1 2\n0 2\n2 3\n").unwrap();
    let full = dir.path().join("full.txt");
    std::fs::write(&full, "0 1\n1 2\n0 2\n2 3\n1 3\n").unwrap();
    let out = stdout(&["stats", "--input", sub.to_str().unwrap(), "--reference", full.to_str().unwrap()]);
    assert_eq!(field(&out, "normalized_triangles_vs_input"), "0.5");
}

#[test]
fn remap_writes_an_id_map() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("names.txt");
    std::fs::write(&input, "alice bob\nbob carol\ncarol alice\n").unwrap();
    let map = dir.path().join("ids.txt");
    let out = stdout(&[
        "stats",
        "--input",
        input.to_str().unwrap(),
        "--remap",
        "--id-map-out",
        map.to_str().unwrap(),
    ]);
    assert_eq!(field(&out, "triangles"), "1");
    let ids = std::fs::read_to_string(&map).unwrap();
    assert_eq!(ids, "alice 0\nbob 1\ncarol 2\n");
    // without --remap the labels are a parse error
    let bad = mcgraph(&["stats", "--input", input.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn sweep_is_reproducible_and_thread_independent() {
    let args = ["sweep", "--input", &lesmis(), "--kind", "ei", "--grid", "4", "--seed", "21"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let mut one = args.to_vec();
    one.extend(["--threads", "1"]);
    assert_eq!(a, stdout(&one));
    assert_eq!(a.lines().count(), 5);
    let golden = include_str!("golden/sweep_header.csv");
    assert_eq!(a.lines().next().unwrap(), golden.trim_end());
}

#[test]
fn sweep_config_file_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    std::fs::write(
        &cfg,
        format!("# sweep\ninput = {}\nkind = fd\ngrid = 3\nsamples = 4\nseed = 2\n", lesmis()),
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = stdout(&["sweep", "--config", c]);
    assert_eq!(from_file.lines().count(), 4);
    let flags = stdout(&["sweep", "--input", &lesmis(), "--kind", "fd", "--grid", "3", "--samples", "4", "--seed", "2"]);
    assert_eq!(from_file, flags);
    let overridden = stdout(&["sweep", "--config", c, "--grid", "2"]);
    assert_eq!(overridden.lines().count(), 3);
}

#[test]
fn sample_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s");
    stdout(&[
        "sample", "--input", &lesmis(), "--p", "1", "--kind", "ni", "--count", "2", "--seed", "0",
        "--out-dir", out.to_str().unwrap(),
    ]);
    let original = stdout(&["stats", "--input", &lesmis()]);
    let s0 = out.join("sample_0000.txt");
    let copy = stdout(&["stats", "--input", s0.to_str().unwrap()]);
    assert_eq!(original, copy);
    assert!(out.join("sample_0001.txt").exists());
}

#[test]
fn overlap_of_reference_model() {
    let out = stdout(&["overlap", "--model", "gnp", "--n", "40", "--p", "0.5", "--pairs", "300", "--seed", "1"]);
    let ov: f64 = field(&out, "overlap").parse().unwrap();
    assert!((ov - 0.5).abs() < 0.02, "{ov}");
    assert_eq!(field(&out, "pairs"), "300");
}

#[test]
fn verify_bounds_reports_failure_for_wrong_level() {
    let out = stdout(&[
        "verify-bounds", "--model", "complete-or-empty", "--n", "20", "--p", "0.3", "--kind", "ei",
        "--samples", "400", "--seed", "1",
    ]);
    assert_eq!(field(&out, "pass"), "false");
    let out = stdout(&[
        "verify-bounds", "--model", "complete-or-empty", "--n", "20", "--p", "0.3", "--kind", "fd",
        "--samples", "400", "--seed", "1",
    ]);
    assert_eq!(field(&out, "pass"), "true");
}

#[test]
fn fit_summary() {
    let dir = tempfile::tempdir().unwrap();
    let logits = dir.path().join("l.txt");
    let out = stdout(&["fit", "--input", &lesmis(), "--p", "0.25", "--kind", "ei", "--out", logits.to_str().unwrap()]);
    assert!(out.starts_with("converged,iterations,final_error\ntrue,"), "{out}");
    let text = std::fs::read_to_string(logits).unwrap();
    assert_eq!(text.lines().count(), 77);
}

#[test]
fn errors_are_single_lines() {
    for (args, code) in [
        (vec!["frobnicate"], 2),
        (vec!["stats"], 2),
        (vec!["stats", "--input", "/nonexistent/graph.txt"], 1),
        (vec!["fit", "--input", "/nonexistent", "--p", "0.5", "--kind", "xx"], 2),
        (vec!["overlap", "--model", "gnp", "--n", "10", "--p", "1.5"], 1),
    ] {
        let out = mcgraph(&args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("error: "), "{err}");
    }
}
