use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use faultlattice::bridge::IdentifiedSubgraph;

fn bin(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_faultlattice"))
        .args(args)
        .current_dir(dir)
        .env_remove("FAULTLATTICE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn generate_writes_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["generate", "--L", "30", "--p", "0.592746", "--seed", "7", "--out", "g.txt"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("occupied fraction"));
    let text = fs::read_to_string(dir.path().join("g.txt")).unwrap();
    assert_eq!(text.lines().next(), Some("30 0.592746 7"));
    assert_eq!(text.lines().count(), 31);
}

#[test]
fn generate_full_grid_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["generate", "--L", "5", "--p", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().skip(1).all(|l| l == "11111"));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(bin(&["generate", "--L", "5", "--p", "1.5"], dir.path()).status.code(), Some(1));
    assert_eq!(bin(&["generate", "--p", "0.5"], dir.path()).status.code(), Some(1));
    assert_eq!(bin(&["sweep", "nothing"], dir.path()).status.code(), Some(1));
    assert_eq!(bin(&["sweep", "crossing", "--p", "2"], dir.path()).status.code(), Some(1));
    assert_eq!(bin(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn concentrate_full_grid_dumps_every_stage() {
    let dir = tempfile::tempdir().unwrap();
    bin(&["generate", "--L", "9", "--p", "1", "--out", "full.txt"], dir.path());
    let o = bin(&["concentrate", "full.txt", "--seed", "2", "--out-dir", "stages"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in [
        "a_lattice.json",
        "b_paths.json",
        "c_bridges.json",
        "d_corrected.json",
        "e_subgraph.json",
        "f_hexagonal.json",
        "measurements.json",
        "manifest.json",
    ] {
        assert!(dir.path().join("stages").join(f).exists(), "{f}");
    }
    let hex: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("stages/f_hexagonal.json")).unwrap()).unwrap();
    assert_eq!(hex["rows"], 3);
}

#[test]
fn concentrate_uses_environment_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    bin(&["generate", "--L", "9", "--p", "1", "--out", "full.txt"], dir.path());
    let o = Command::new(env!("CARGO_BIN_EXE_faultlattice"))
        .args(["concentrate", "full.txt"])
        .current_dir(dir.path())
        .env("FAULTLATTICE_OUT_DIR", "from_env")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("from_env/manifest.json").exists());
}

#[test]
fn subcritical_and_malformed_inputs() {
    let dir = tempfile::tempdir().unwrap();
    bin(&["generate", "--L", "30", "--p", "0.3", "--seed", "1", "--out", "sub.txt"], dir.path());
    let o = bin(&["concentrate", "sub.txt", "--out-dir", "o"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    fs::write(dir.path().join("bad.txt"), "3 0.5 1\n101\n11\n").unwrap();
    assert_eq!(bin(&["concentrate", "bad.txt"], dir.path()).status.code(), Some(1));
    assert_eq!(bin(&["concentrate", "missing.txt"], dir.path()).status.code(), Some(1));
}

#[test]
fn verify_pass_fail_and_refusal() {
    let dir = tempfile::tempdir().unwrap();
    bin(&["generate", "--L", "10", "--p", "0.85", "--seed", "3", "--out", "g.txt"], dir.path());
    let o = bin(&["verify", "g.txt", "--seed", "5"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "PASS");

    bin(&["generate", "--L", "9", "--p", "1", "--out", "full.txt"], dir.path());
    bin(&["concentrate", "full.txt", "--out-dir", "s"], dir.path());
    let mut sub: IdentifiedSubgraph =
        serde_json::from_str(&fs::read_to_string(dir.path().join("s/e_subgraph.json")).unwrap()).unwrap();
    let g = sub.graph();
    let (a, b) = sub
        .vertices
        .iter()
        .flat_map(|&a| sub.vertices.iter().map(move |&b| (a, b)))
        .find(|&(a, b)| a < b && !g.has_edge(a, b))
        .unwrap();
    sub.edges.push((a, b));
    fs::write(dir.path().join("rogue.json"), serde_json::to_string(&sub).unwrap()).unwrap();
    let o = bin(&["verify", "full.txt", "--subgraph", "rogue.json"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("FAIL"));

    bin(&["generate", "--L", "100", "--p", "1", "--out", "big.txt"], dir.path());
    let o = bin(&["verify", "big.txt"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("size limit"));
}

#[test]
fn overhead_sweep_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sweep", "overhead", "--L", "24", "--p", "0.55:0.05:1.0", "--trials", "10", "--seed", "4"];
    for out in ["one", "two"] {
        let mut a = args.to_vec();
        a.extend(["--out-dir", out, "--jobs", if out == "one" { "1" } else { "2" }]);
        assert_eq!(bin(&a, dir.path()).status.code(), Some(0));
    }
    let one = fs::read_to_string(dir.path().join("one/overhead.csv")).unwrap();
    let two = fs::read_to_string(dir.path().join("two/overhead.csv")).unwrap();
    assert_eq!(one, two);
    assert_eq!(
        fs::read(dir.path().join("one/manifest.json")).unwrap(),
        fs::read(dir.path().join("two/manifest.json")).unwrap()
    );
    assert!(one.starts_with("# master_seed=4\nL,p,mean_mL_over_L,stderr,trials,achieved_pipeline_count\n"));
    assert!(one.lines().last().unwrap().starts_with("24,1,1,0,10,"));
}

#[test]
fn every_sweep_kind_runs() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, file) in [
        ("crossing", "crossing.csv"),
        ("threshold", "threshold.csv"),
        ("components", "components.csv"),
        ("runtime", "runtime.csv"),
        ("ewd", "ewd.csv"),
    ] {
        let o = bin(&["sweep", kind, "--L", "12,16", "--trials", "5", "--out-dir", kind], dir.path());
        assert_eq!(o.status.code(), Some(0), "{kind}: {}", String::from_utf8_lossy(&o.stderr));
        let csv = fs::read_to_string(dir.path().join(kind).join(file)).unwrap();
        assert!(csv.starts_with("# master_seed=0\n"), "{kind}");
    }
}
