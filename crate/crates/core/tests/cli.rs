use std::path::Path;
use std::process::{Command, Output};

fn panther(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_panther")).args(args).output().expect("spawn panther")
}

fn write_graph(dir: &Path) -> String {
    let path = dir.join("g.txt");
    let out = panther(&["synth", "pa", "--n", "120", "--m", "3", "--seed", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path.to_str().unwrap().to_owned()
}

#[test]
fn topk_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path());
    let args = ["topk", "--graph", g.as_str(), "--query", "7", "--k", "10", "--seed", "42"];
    let first = panther(&args);
    let second = panther(&args);
    assert!(first.status.success());
    assert!(!first.stdout.is_empty());
    assert_eq!(first.stdout, second.stdout);

    let text = String::from_utf8(first.stdout).unwrap();
    for (i, line) in text.lines().enumerate() {
        let f: Vec<&str> = line.split('\t').collect();
        assert_eq!(f.len(), 4, "{line}");
        assert_eq!(f[0], "7");
        assert_eq!(f[1], (i + 1).to_string());
    }
}

#[test]
fn stored_paths_reproduce_one_shot_results() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path());
    let paths = dir.path().join("p.bin");
    let paths = paths.to_str().unwrap();
    let sample = panther(&["sample", "--graph", &g, "--paths-file", paths, "--seed", "5"]);
    assert!(sample.status.success(), "{}", String::from_utf8_lossy(&sample.stderr));

    let one_shot = panther(&["topk", "--graph", &g, "--query", "3", "--k", "8", "--seed", "5"]);
    let stored = panther(&["topk", "--graph", &g, "--query", "3", "--k", "8", "--seed", "5", "--paths-file", paths]);
    assert!(stored.status.success());
    assert_eq!(one_shot.stdout, stored.stdout);

    let pp = ["topk-pp", "--graph", &g, "--query", "3", "--k", "8", "--seed", "5"];
    let pp_one = panther(&pp);
    let mut with_file = pp.to_vec();
    with_file.extend_from_slice(&["--paths-file", paths]);
    let pp_stored = panther(&with_file);
    assert!(pp_one.status.success());
    assert_eq!(pp_one.stdout, pp_stored.stdout);
}

#[test]
fn missing_graph_is_a_usage_error() {
    let out = panther(&["topk", "--query", "1", "--k", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--graph"), "{err}");
    assert!(err.to_lowercase().contains("usage"), "{err}");
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = panther(&["topk", "--graph", "x", "--query", "1", "--k", "3", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn data_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path());
    let unknown = panther(&["topk", "--graph", &g, "--query", "no-such-vertex", "--k", "3"]);
    assert_eq!(unknown.status.code(), Some(2));
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "a b\nc d -1\n").unwrap();
    let out = panther(&["topk", "--graph", bad.to_str().unwrap(), "--weighted", "--query", "a", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains('2'));
}

#[test]
fn oracle_prints_triangle_values() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("k3.txt");
    std::fs::write(&g, "a b\nb c\na c\n").unwrap();
    let out = panther(&["oracle", "--graph", g.to_str().unwrap(), "--T", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let values: Vec<&str> = text.lines().filter_map(|l| l.split('\t').nth(2)).collect();
    assert_eq!(values.len(), 6);
    assert_eq!(values.iter().filter(|v| **v == "0.666666667").count(), 3);
    assert_eq!(values.iter().filter(|v| **v == "0.833333333").count(), 3);
}
