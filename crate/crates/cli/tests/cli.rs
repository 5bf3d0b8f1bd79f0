use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shadow-recon"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(format!("{name}.graph"))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn rips_on_a_hexagon() {
    let dir = tempfile::tempdir().unwrap();
    let cloud = dir.path().join("hex.csv");
    let mut text = String::from("# dim=2\n");
    for k in 0..6 {
        let a = std::f64::consts::TAU * k as f64 / 6.0;
        text.push_str(&format!("{},{}\n", a.cos(), a.sin()));
    }
    fs::write(&cloud, text).unwrap();
    let o = run(&["rips", "--cloud", s(&cloud), "--beta", "1.1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let edges = out
        .lines()
        .filter(|l| l.starts_with("s ") && l.split_whitespace().count() == 3)
        .count();
    let triangles = out
        .lines()
        .filter(|l| l.starts_with("s ") && l.split_whitespace().count() == 4)
        .count();
    assert_eq!((edges, triangles), (6, 0));
}

#[test]
fn betti_of_a_hollow_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let complex = dir.path().join("k.txt");
    fs::write(
        &complex,
        "# vertices=3\ns 0\ns 1\ns 2\ns 0 1\ns 1 2\ns 0 2\n",
    )
    .unwrap();
    let o = run(&["betti", "--complex", s(&complex)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "1 1");
}

#[test]
fn geometric_params_report_both_plans() {
    let o = run(&[
        "params",
        "--graph",
        s(&fixture("star5")),
        "--mode",
        "geometric",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    for key in ["beta=", "eps=", "xi=", "homotopy."] {
        assert!(
            out.lines().any(|l| l.starts_with(key)),
            "missing {key} in\n{out}"
        );
    }
}

#[test]
fn malformed_graph_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("bad.graph");
    fs::write(&g, "v a 0 0\nv b 1 zero\n").unwrap();
    let o = run(&["params", "--graph", s(&g)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
}

fn pipeline_args<'a>(graph: &'a str, out: &'a str) -> Vec<&'a str> {
    vec![
        "pipeline",
        "--graph",
        graph,
        "--mode",
        "geometric",
        "--beta",
        "0.12",
        "--eps",
        "0.1",
        "--xi",
        "0.24",
        "--h",
        "0.01",
        "--noise",
        "0.002",
        "--seed",
        "5",
        "--euclidean",
        "false",
        "--out",
        out,
    ]
}

#[test]
fn pipeline_artifacts_match_chained_stages() {
    let dir = tempfile::tempdir().unwrap();
    let graph = fixture("cycle");
    let out = dir.path().join("run");
    let o = run(&pipeline_args(s(&graph), s(&out)));
    assert!(
        o.status.code().is_some_and(|c| c == 0 || c == 4),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );

    let cloud = dir.path().join("cloud.csv");
    let complex = dir.path().join("complex.txt");
    let shadow = dir.path().join("shadow.txt");
    let steps: [&[&str]; 3] = [
        &[
            "sample",
            "--graph",
            s(&graph),
            "--h",
            "0.01",
            "--noise",
            "0.002",
            "--seed",
            "5",
            "--out",
            s(&cloud),
        ],
        &[
            "rips",
            "--cloud",
            s(&cloud),
            "--beta",
            "0.12",
            "--eps",
            "0.1",
            "--out",
            s(&complex),
        ],
        &[
            "shadow",
            "--complex",
            s(&complex),
            "--cloud",
            s(&cloud),
            "--out",
            s(&shadow),
        ],
    ];
    for step in steps {
        let o = run(step);
        assert!(
            o.status.success(),
            "{step:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    for name in ["cloud.csv", "complex.txt", "shadow.txt"] {
        let a = fs::read_to_string(out.join(name)).unwrap();
        let b = fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(a == b, "{name} differs");
    }
}

#[test]
fn pipeline_runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let graph = fixture("cycle");
    let mut reports = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("run{k}"));
        let mut args = pipeline_args(s(&graph), s(&out));
        args.push("--render");
        let o = run(&args);
        assert!(o.status.code().is_some_and(|c| c == 0 || c == 4));
        reports.push((
            stdout(&o),
            fs::read_to_string(out.join("report.txt")).unwrap(),
            fs::read_to_string(out.join("shadow.svg")).unwrap(),
        ));
    }
    assert!(reports[0] == reports[1]);
}
