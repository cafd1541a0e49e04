use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mdskit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdskit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn report(o: &Output) -> serde_json::Value {
    let text = stdout(o);
    serde_json::from_str(text.lines().last().expect("a report line")).expect("report is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn path7(dir: &Path) -> String {
    let p = dir.join("path7.gr");
    let o = mdskit(&["gen", "path", "7", "--out", p.to_str().unwrap()]);
    assert!(o.status.success());
    p.to_str().unwrap().to_string()
}

#[test]
fn solve_examples() {
    let dir = tempfile::tempdir().unwrap();
    let g = path7(dir.path());
    for algo in ["brute", "partition", "exact", "treewidth"] {
        let o = mdskit(&["solve", "--algo", algo, &g]);
        assert_eq!(o.status.code(), Some(0), "{algo}");
        let r = report(&o);
        assert_eq!(r["size"], 3, "{algo}");
        assert_eq!(r["valid"], true);
        assert!(stdout(&o).starts_with("s mds 3\n"));
    }
    let o = mdskit(&["solve", "--algo", "fpt", "--k", "2", &g]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(report(&o)["size"], "none");
    let o = mdskit(&["solve", "--algo", "fpt", "--k", "3", &g]);
    assert_eq!(o.status.code(), Some(0));
    assert!(mdskit(&["solve", "--algo", "fpt", &g]).status.code() == Some(2));

    let td = write(dir.path(), "p7.td", "s td 6 2 7\nb 1 1 2\nb 2 2 3\nb 3 3 4\nb 4 4 5\nb 5 5 6\nb 6 6 7\n1 2\n2 3\n3 4\n4 5\n5 6\n");
    let o = mdskit(&["solve", "--algo", "treewidth", "--td", &td, &g]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["size"], 3);
    assert_eq!(report(&o)["stats"]["width"], 1);
}

#[test]
fn solve_writes_a_checkable_solution() {
    let dir = tempfile::tempdir().unwrap();
    let g = path7(dir.path());
    let sol = dir.path().join("p7.sol");
    let o = mdskit(&["solve", "--algo", "exact", "--faithful", "--out", sol.to_str().unwrap(), &g]);
    assert!(o.status.success());
    assert_eq!(mdskit(&["validate", &g, sol.to_str().unwrap()]).status.code(), Some(0));
    let pretty = mdskit(&["solve", "--pretty", &g]);
    assert!(stdout(&pretty).contains("exact"));
}

#[test]
fn malformed_input_names_line_and_token() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.gr", "p mds 3 2\n1 2\n2 q\n");
    let o = mdskit(&["solve", &bad]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3") && err.contains("`q`"), "{err}");
    assert_eq!(mdskit(&["solve", "/nonexistent/x.gr"]).status.code(), Some(2));
}

#[test]
fn validate_examples() {
    let dir = tempfile::tempdir().unwrap();
    let k2 = write(dir.path(), "k2.gr", "p mds 2 1\n1 2\n");
    let p3 = write(dir.path(), "p3.gr", "p mds 3 2\n1 2\n2 3\n");
    let edge = write(dir.path(), "edge.sol", "s mds 1\ne 1 2\n");
    let far = write(dir.path(), "far.sol", "s mds 1\nv 9\n");
    assert_eq!(mdskit(&["validate", &k2, &edge]).status.code(), Some(0));
    let o = mdskit(&["validate", &p3, &edge]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("vertex 3 undominated"));
    assert_eq!(mdskit(&["validate", &p3, &far]).status.code(), Some(2));
}

#[test]
fn gen_is_deterministic() {
    let a = mdskit(&["gen", "random", "10", "0.3", "--seed", "7"]);
    let b = mdskit(&["gen", "random", "10", "0.3", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = mdskit(&["gen", "random", "10", "0.3", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
    let p = mdskit(&["gen", "path", "7"]);
    assert!(stdout(&p).contains("p mds 7 6\n"));
    assert_eq!(mdskit(&["gen", "path", "0"]).status.code(), Some(2));
    assert!(mdskit(&["gen", "tree", "9", "--seed", "3"]).status.success());
    assert!(mdskit(&["gen", "cycle", "3"]).status.success());
}

#[test]
fn gen_seth_writes_graph_decomposition_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let csp = write(dir.path(), "tiny.csp", "c one variable\np csp5 1 1 1\nx 1\na 2\na 4\n");
    let o = mdskit(&["gen", "seth", &csp, "--pendant", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let side: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("tiny.json")).unwrap()).unwrap();
    assert_eq!(side["k"], 1562);
    assert_eq!(side["F"], 15);
    assert_eq!(side["C"], 4);
    assert_eq!(side["faithful"], false);
    let gr = fs::read_to_string(dir.path().join("tiny.gr")).unwrap();
    assert!(gr.contains("non-faithful"));
    assert!(fs::read_to_string(dir.path().join("tiny.td")).unwrap().starts_with("s td "));

    let bad = write(dir.path(), "bad.csp", "p csp5 1 1 1\nx 1\na 7\n");
    assert_eq!(mdskit(&["gen", "seth", &bad]).status.code(), Some(2));
}

#[test]
fn bench_over_small_corpus() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [("a.gr", "p mds 3 2\n1 2\n2 3\n"), ("b.gr", "p mds 4 4\n1 2\n2 3\n3 4\n4 1\n"), ("c.gr", "p mds 2 0\n")] {
        write(dir.path(), name, text);
    }
    let o = mdskit(&["bench", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let rows: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r["agree"] == true));

    let empty = tempfile::tempdir().unwrap();
    let o = mdskit(&["bench", empty.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());

    write(dir.path(), "broken.gr", "p mds 2 1\n1 5\n");
    assert_eq!(mdskit(&["bench", dir.path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(mdskit(&["bench", "/nonexistent"]).status.code(), Some(2));
}

#[test]
fn reduce_eds_and_thread_cap() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = write(dir.path(), "p3.gr", "p mds 3 2\n1 2\n2 3\n");
    let o = mdskit(&["reduce-eds", &p3]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("p mds 9 10\n"));
    let o = Command::new(env!("CARGO_BIN_EXE_mdskit")).env("MDSKIT_THREADS", "1").args(["solve", &p3]).output().unwrap();
    assert!(o.status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_mdskit")).env("MDSKIT_THREADS", "zero").args(["solve", &p3]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_agrees_on_all_labeled_graphs_up_to_five_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let mut count = 0;
    for n in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e).collect();
            let mut text = format!("p mds {n} {}\n", edges.len());
            for (u, v) in edges {
                text.push_str(&format!("{} {}\n", u + 1, v + 1));
            }
            write(dir.path(), &format!("g{n}_{mask}.gr"), &text);
            count += 1;
        }
    }
    let o = mdskit(&["bench", dir.path().to_str().unwrap(), "--algos", "partition,exact,fpt,treewidth"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 4 * count);
}
