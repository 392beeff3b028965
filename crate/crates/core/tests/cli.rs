use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn treeprep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treeprep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("treeprep-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const DIAMOND: &str = "c diamond\np dag 4 4\n1 2\n1 3\n2 4\n3 4\n";
const C5: &str = "p tw 5 5\n1 2\n2 3\n3 4\n4 5\n5 1\n";

#[test]
fn moralize_marries_parents() {
    let dir = scratch("moralize");
    let dag = dir.join("d.dag");
    fs::write(&dag, DIAMOND).unwrap();
    let o = treeprep(&["moralize", dag.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "p tw 4 5\n1 2\n1 3\n2 3\n2 4\n3 4\n");
}

#[test]
fn triangulate_writes_all_outputs() {
    let dir = scratch("triangulate");
    let dag = dir.join("d.dag");
    fs::write(&dag, DIAMOND).unwrap();
    let prefix = dir.join("out");
    let o = treeprep(&["triangulate", dag.to_str().unwrap(), "--out", prefix.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stats: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(stats["width"], 2);
    assert_eq!(stats["optimal"], true);
    assert_eq!(stats["moralized_edges"], 5);

    let read = |ext: &str| fs::read_to_string(dir.join(format!("out{ext}"))).unwrap();
    assert_eq!(read(".ord").lines().count(), 4);
    assert!(read(".fill").is_empty());
    let jt = read(".jt");
    assert_eq!(jt.lines().filter(|l| l.starts_with("node ")).count(), 2);
    assert_eq!(jt.lines().filter(|l| l.starts_with("edge ")).count(), 1);
    let saved: serde_json::Value = serde_json::from_str(&read(".stats.json")).unwrap();
    assert_eq!(saved["width"], 2);
}

#[test]
fn every_solver_is_accepted() {
    let dir = scratch("solvers");
    let g = dir.join("c5.gr");
    fs::write(&g, C5).unwrap();
    for solver in ["exact", "mcs", "lexp", "lexm", "best"] {
        let o = treeprep(&["triangulate", g.to_str().unwrap(), "--rules", "NONE", "--solver", solver, "--start", "3"]);
        assert!(o.status.success(), "{solver}");
        let stats: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
        assert_eq!(stats["width"], 2, "{solver}");
    }
}

#[test]
fn report_and_sweep_are_deterministic() {
    let dir = scratch("report");
    let g = dir.join("c5.gr");
    fs::write(&g, C5).unwrap();
    let a = treeprep(&["report", g.to_str().unwrap()]);
    let b = treeprep(&["report", g.to_str().unwrap()]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("PR2"));
    let s = treeprep(&["sweep", g.to_str().unwrap(), "--solver", "lexm", "--rules", "NONE"]);
    assert!(s.status.success());
    assert!(stdout(&s).contains("lexm"));
}

#[test]
fn exit_codes() {
    let dir = scratch("exit");
    let bad = dir.join("bad.gr");
    fs::write(&bad, "p tw 3 1\n1 4\n").unwrap();
    let o = treeprep(&["exact", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let cyc = dir.join("cyc.dag");
    fs::write(&cyc, "p dag 3 3\n1 2\n2 3\n3 1\n").unwrap();
    assert_eq!(treeprep(&["moralize", cyc.to_str().unwrap()]).status.code(), Some(1));

    let g = dir.join("c5.gr");
    fs::write(&g, C5).unwrap();
    let strict = treeprep(&["triangulate", g.to_str().unwrap(), "--rules", "NONE", "--budget", "1", "--strict"]);
    assert_eq!(strict.status.code(), Some(2));
    let lenient = treeprep(&["triangulate", g.to_str().unwrap(), "--rules", "NONE", "--budget", "1"]);
    assert_eq!(lenient.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&lenient.stderr).contains("warning"));
}

#[test]
fn exact_prints_width_and_witness() {
    let dir = scratch("exact");
    let g = dir.join("c5.gr");
    fs::write(&g, C5).unwrap();
    let o = treeprep(&["exact", g.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("treewidth 2"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn preprocess_empties_a_cycle() {
    let dir = scratch("preprocess");
    let g = dir.join("c5.gr");
    fs::write(&g, C5).unwrap();
    let o = treeprep(&["preprocess", g.to_str().unwrap(), "--rules", "PR2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("p tw 0 0"));
    let o = treeprep(&["preprocess", g.to_str().unwrap(), "--rules", "PR1"]);
    assert!(stdout(&o).contains("p tw 5 5"));
}
