use std::path::Path;
use std::process::{Command, Output};

fn selab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("selab runs")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Comment line first, then the header, then the data rows.
fn data_rows(text: &str) -> Vec<&str> {
    text.lines().skip(2).collect()
}

#[test]
fn tower_gap_writes_one_row_per_level_and_epsilon() {
    let dir = tempfile::tempdir().unwrap();
    let out = selab(&["tower-gap", "--p", "3", "--depth", "2", "--eps", "0.1,0.25"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = read(&dir.path().join("tower_gap.csv"));
    let comment = text.lines().next().unwrap();
    assert!(comment.starts_with(&format!("# selab {} tower-gap", env!("CARGO_PKG_VERSION"))));
    assert!(comment.contains("seed=1") && comment.contains("eps=0.1,0.25"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 4);
    for row in rows {
        let f: Vec<&str> = row.split(',').collect();
        let upper: f64 = f[5].parse().unwrap();
        let log2_order: f64 = f[6].parse().unwrap();
        assert!(upper <= log2_order + 1e-9, "{row}");
    }
    assert!(dir.path().join("tower_gap_transversal.csv").exists());
}

#[test]
fn config_file_is_merged_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(&config, "seed = 9\nps = [3]\ntrials = 4\n").unwrap();
    let out = selab(
        &["growth", "--config", config.to_str().unwrap(), "--trials", "3"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = read(&dir.path().join("growth.csv"));
    assert!(text.lines().next().unwrap().contains("seed=9 ps=3 trials=3"));
    assert_eq!(data_rows(&text).len(), 3);
}

#[test]
fn entropy_reads_a_metric_file() {
    let dir = tempfile::tempdir().unwrap();
    let metric = dir.path().join("rho.csv");
    std::fs::write(&metric, "atom,0,1,2,3\n0,0,1,1,1\n1,1,0,1,1\n2,1,1,0,1\n3,1,1,1,0\n").unwrap();
    let out = selab(&["entropy", "--metric", metric.to_str().unwrap(), "--eps", "0.25,0.5"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = read(&dir.path().join("entropy.csv"));
    // four atoms of mass 1/4 at mutual distance 1; the exceptional set must
    // weigh strictly less than ε, so at ε = 1/2 it holds a single atom
    assert_eq!(
        data_rows(&text),
        vec!["0.25,4,4,2,2,true", "0.5,3,3,1.584962500721156,1.584962500721156,true"]
    );
    assert!(read(&dir.path().join("entropy_decomposition.csv")).contains("epsilon,atom,cell"));
}

#[test]
fn verify_lemmas_passes_on_a_small_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = selab(&["verify-lemmas", "--trials", "10", "--seed", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = read(&dir.path().join("verify_lemmas.csv"));
    assert_eq!(data_rows(&text).len(), 7);
    assert!(data_rows(&text).iter().all(|r| r.split(',').nth(3) == Some("pass")));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| selab(args, dir.path()).status.code();
    assert_eq!(code(&["growth", "--eps", "1.5"]), Some(1));
    assert_eq!(code(&["growth", "--trials", "0"]), Some(1));
    assert_eq!(code(&["no-such-command"]), Some(1));
    assert_eq!(code(&["entropy"]), Some(1));
    assert_eq!(code(&["tower-gap", "--depth", "2", "--cap-atoms", "100"]), Some(2));
    assert_eq!(code(&["claim52", "--q", "11", "--cap-atoms", "1000"]), Some(2));
}

#[test]
fn coloring_and_average_outputs() {
    let dir = tempfile::tempdir().unwrap();
    for group in ["z", "z2", "sl2:3"] {
        let out = selab(&["coloring", "--group", group, "--trials", "5"], dir.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let text = read(&dir.path().join("coloring.csv"));
        for row in data_rows(&text) {
            assert!(row.ends_with("true,true"), "{group}: {row}");
        }
    }
    let out = selab(&["average", "--group", "cyclic:4", "--horizon", "4", "--eps", "0.25"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(data_rows(&read(&dir.path().join("average.csv"))).len(), 4);
}
