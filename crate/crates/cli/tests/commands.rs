use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rfx_core::fixtures::orchid;
use rfx_core::{Instance, RandomForest};
use tempfile::TempDir;

fn rfx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rfx"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn orchid_model(dir: &TempDir) -> PathBuf {
    let p = dir.path().join("orchid.json");
    let o = rfx(&["fixture-gen", "--orchid", "-o", s(&p)]);
    assert!(o.status.success(), "{}", stderr(&o));
    p
}

fn load(p: &Path) -> RandomForest {
    rfx_cli::model::load_forest(p).unwrap()
}

#[test]
fn classify_running_example() {
    let dir = TempDir::new().unwrap();
    let model = orchid_model(&dir);
    let xs = write(&dir, "xs.csv", "x1,x2,x3,x4\n1,1,1,1\n0,1,0,0\n");
    let o = rfx(&["classify", "-m", s(&model), "-i", s(&xs)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1\n0\n");

    let empty = write(&dir, "empty.csv", "");
    let o = rfx(&["classify", "-m", s(&model), "-i", s(&empty)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "");

    let bad = write(&dir, "bad.csv", "1,1,1,1\n0,1,x,0\n");
    let o = rfx(&["classify", "-m", s(&model), "-i", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("row 2, column 3"), "{}", stderr(&o));
}

#[test]
fn explain_examples() {
    let dir = TempDir::new().unwrap();
    let model = orchid_model(&dir);
    let o = rfx(&["explain", "-m", s(&model), "--kind", "direct", "--instance", "1111"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("reason: x1 ∧ x2 ∧ x3 ∧ x4"), "{}", stdout(&o));

    let o = rfx(&[
        "explain",
        "-m",
        s(&model),
        "--kind",
        "minimal-majoritary",
        "--instance",
        "0100",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["size"], 2);
    assert_eq!(v["prediction"], 0);
    assert_eq!(v["optimal"], true);

    let o = rfx(&[
        "explain",
        "-m",
        s(&model),
        "--kind",
        "comprehensible",
        "--intelligible",
        "x1,x4",
        "--notion",
        "majority",
        "--instance",
        "1111",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("no comprehensible reason"));
}

#[test]
fn explain_flag_errors() {
    let dir = TempDir::new().unwrap();
    let model = orchid_model(&dir);
    let o = rfx(&[
        "explain",
        "-m",
        s(&model),
        "--kind",
        "majoritary",
        "--delta",
        "0.5",
        "--instance",
        "1111",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--delta"));
    let o = rfx(&[
        "explain",
        "-m",
        s(&model),
        "--kind",
        "delta-probable",
        "--delta",
        "0.5",
        "--instance",
        "1111",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("single-tree"));
}

#[test]
fn explain_every_row_and_export() {
    let dir = TempDir::new().unwrap();
    let model = orchid_model(&dir);
    let xs = write(&dir, "xs.csv", "1,1,1,1\n0,1,0,0\n");
    let o = rfx(&[
        "explain",
        "-m",
        s(&model),
        "--kind",
        "inclusion-preferred",
        "--strata",
        "x4;x2,x3;x1",
        "--instances",
        s(&xs),
        "--json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 2);

    let wcnf = dir.path().join("p.wcnf");
    let o = rfx(&[
        "explain",
        "-m",
        s(&model),
        "--kind",
        "minimal-weight",
        "--weights",
        "5,1,1,1",
        "--instance",
        "1111",
        "--export-wcnf",
        s(&wcnf),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("cost: 3"));
    let problem = rfx_core::sat::dimacs::parse_wcnf(&std::fs::read_to_string(&wcnf).unwrap()).unwrap();
    assert_eq!(problem.soft().len(), 4);
}

#[test]
fn zero_timeout_exit_code() {
    let dir = TempDir::new().unwrap();
    let model = orchid_model(&dir);
    let o = rfx(&[
        "explain",
        "-m",
        s(&model),
        "--kind",
        "minimal-majoritary",
        "--timeout",
        "0",
        "--instance",
        "1111",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    match o.status.code() {
        Some(3) => {
            assert_eq!(v["optimal"], false);
            assert_eq!(v["size"], 4);
        }
        Some(0) => assert_eq!(v["size"], 3),
        other => panic!("exit {other:?}"),
    }
}

#[test]
fn convert_and_negate() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "f.cnf", "p cnf 3 2\n1 2 0\n-1 3 0\n");
    let out = dir.path().join("cnf.json");
    let o = rfx(&["convert", "--from", "cnf", s(&cnf), "-o", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let f = load(&out);
    assert_eq!(f.tree_count(), 3);
    for code in 0..8 {
        let x = Instance::from_index(code, 3);
        let b = x.bits();
        assert_eq!(f.eval(&x).unwrap(), (b[0] || b[1]) && (!b[0] || b[2]));
    }

    let dnf = write(&dir, "f.dnf", "p dnf 3 1\n1 -3 0\n");
    let out = dir.path().join("dnf.json");
    assert!(rfx(&["convert", "--from", "dnf", s(&dnf), "-o", s(&out)])
        .status
        .success());
    let g = load(&out);
    for code in 0..8 {
        let x = Instance::from_index(code, 3);
        assert_eq!(g.eval(&x).unwrap(), x.bits()[0] && !x.bits()[2]);
    }

    let model = orchid_model(&dir);
    let neg = dir.path().join("neg.json");
    let neg2 = dir.path().join("neg2.json");
    assert!(rfx(&["negate", s(&model), "-o", s(&neg)]).status.success());
    assert!(rfx(&["negate", s(&neg), "-o", s(&neg2)]).status.success());
    let (a, b, c) = (orchid::forest(), load(&neg), load(&neg2));
    for code in 0..16 {
        let x = Instance::from_index(code, 4);
        assert_eq!(b.eval(&x).unwrap(), !a.eval(&x).unwrap());
        assert_eq!(c.eval(&x).unwrap(), a.eval(&x).unwrap());
    }

    let broken = write(&dir, "broken.cnf", "p cnf 2 1\n1 5 0\n");
    let o = rfx(&["convert", "--from", "cnf", s(&broken)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn parity_fixture() {
    let dir = TempDir::new().unwrap();
    let model = dir.path().join("parity.json");
    assert!(rfx(&["fixture-gen", "--parity", "2", "--copies", "1", "-o", s(&model)])
        .status
        .success());
    let f = load(&model);
    assert_eq!(f.tree_count(), 3);
    let xs = write(&dir, "xs.csv", "0,0\n0,1\n1,0\n1,1\n");
    assert_eq!(
        stdout(&rfx(&["classify", "-m", s(&model), "-i", s(&xs)])),
        "1\n1\n1\n1\n"
    );
    for bits in ["00", "01", "10", "11"] {
        let o = rfx(&[
            "explain",
            "-m",
            s(&model),
            "--kind",
            "majoritary",
            "--instance",
            bits,
            "--json",
        ]);
        let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
        assert_eq!(v["size"], 2);
        let o = rfx(&[
            "explain",
            "-m",
            s(&model),
            "--kind",
            "sufficient",
            "--instance",
            bits,
            "--json",
        ]);
        let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
        assert_eq!(v["size"], 0);
        assert_eq!(v["reason"], "⊤");
    }
}

#[test]
fn stats_table_and_trajectory() {
    let dir = TempDir::new().unwrap();
    let model = orchid_model(&dir);
    let xs = write(&dir, "xs.csv", "1,1,1,1\n");
    let out = dir.path().join("stats.csv");
    let o = rfx(&[
        "stats",
        "-m",
        s(&model),
        "-i",
        s(&xs),
        "--kinds",
        "direct,sufficient,majoritary,minimal-majoritary",
        "--out",
        s(&out),
        "--jobs",
        "2",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).take(4).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0][1..3], ["direct", "4"]);
    assert!(rows[1][2] == "2" || rows[1][2] == "3");
    assert_eq!(rows[2][1..3], ["majoritary", "3"]);
    assert_eq!(rows[3][1..3], ["minimal-majoritary", "3"]);
    assert!(text.contains("# summary"));
    let traj = std::fs::read_to_string(dir.path().join("stats.csv.trajectory.csv")).unwrap();
    assert!(traj.starts_with("instance,kind,step,elapsed_ms,size,cost"));
    assert!(traj.lines().count() >= 2);

    let o = rfx(&["stats", "-m", s(&model), "-i", s(&xs), "--kinds", ""]);
    assert_eq!(o.status.code(), Some(1));

    let o = rfx(&[
        "stats",
        "-m",
        s(&model),
        "-i",
        s(&xs),
        "--kinds",
        "minimal-majoritary",
        "--timeout",
        "0",
    ]);
    assert!(o.status.success());
    let row: Vec<String> = stdout(&o)
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(String::from)
        .collect();
    if row[6] == "fallback" {
        assert_eq!(row[4], "false");
        assert_eq!(row[2], "4");
    }
}

#[test]
fn model_files_round_trip() {
    let dir = TempDir::new().unwrap();
    let model = dir.path().join("r.json");
    assert!(rfx(&[
        "fixture-gen",
        "--random",
        "10",
        "--trees",
        "7",
        "--depth",
        "5",
        "-o",
        s(&model)
    ])
    .status
    .success());
    let text = std::fs::read_to_string(&model).unwrap();
    let parsed = rfx_cli::model::ModelFile::parse(&text).unwrap();
    assert_eq!(parsed.to_json(), text);
    let again = rfx_cli::model::ModelFile::from_forest(&parsed.to_forest().unwrap());
    assert_eq!(again, parsed);
}
