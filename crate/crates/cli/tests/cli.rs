use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qroute(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qroute"))
        .args(args)
        .env_remove("QROUTE_DATA_DIR")
        .output()
        .expect("binary runs")
}

fn bench(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../benchmarks")
        .join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const QFT4_GOLDEN: &str =
    "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[4];\nt q[1];\ncx q[0],q[2];\ncx q[0],q[3];\n";
const ARCH4: &str = "name = \"ring4\"\nnum_qubits = 4\nedges = [[0, 1], [0, 2], [1, 3], [2, 3]]\n";

#[test]
fn route_writes_outputs_and_report_parses() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.qasm");
    let report = dir.path().join("r.out");
    let sched = dir.path().join("s.txt");
    let o = qroute(&[
        "route",
        "--arch",
        "grid-6x6",
        "--in",
        s(&bench("qft_4.qasm")),
        "--router",
        "comet",
        "--seed",
        "42",
        "--out",
        s(&out),
        "--report",
        s(&report),
        "--schedule",
        s(&sched),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(fs::read_to_string(&out)
        .unwrap()
        .starts_with("OPENQASM 2.0;"));
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["benchmark"], "qft_4");
    assert_eq!(r["router"], "comet");
    assert!(r.get("wall_clock_ms").is_none());
    let listing = fs::read_to_string(&sched).unwrap();
    assert!(listing.lines().all(|l| l.starts_with("t=")));
}

#[test]
fn baseline_router_and_timing() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let o = qroute(&[
        "route",
        "--arch",
        "grid-6x6",
        "--in",
        s(&bench("qft_4.qasm")),
        "--router",
        "baseline",
        "--timing",
        "--report",
        s(&report),
    ]);
    assert!(o.status.success());
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["router"], "baseline");
    assert!(r["wall_clock_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn decompose_swaps_removes_swaps() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.qasm");
    let arch = dir.path().join("ring4.toml");
    fs::write(&input, QFT4_GOLDEN).unwrap();
    fs::write(&arch, ARCH4).unwrap();
    let plain = qroute(&[
        "route",
        "--arch-file",
        s(&arch),
        "--in",
        s(&input),
        "--initial",
        "identity",
    ]);
    assert!(stdout(&plain).contains("swap q[1],q[3]; // inserted"));
    let o = qroute(&[
        "route",
        "--arch-file",
        s(&arch),
        "--in",
        s(&input),
        "--initial",
        "identity",
        "--decompose-swaps",
    ]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("swap"));
}

#[test]
fn golden_schedule_listing() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.qasm");
    let arch = dir.path().join("ring4.toml");
    let sched = dir.path().join("s.txt");
    fs::write(&input, QFT4_GOLDEN).unwrap();
    fs::write(&arch, ARCH4).unwrap();
    let o = qroute(&[
        "route",
        "--arch-file",
        s(&arch),
        "--in",
        s(&input),
        "--initial",
        "identity",
        "--schedule",
        s(&sched),
        "--out",
        s(&dir.path().join("m.qasm")),
    ]);
    assert!(o.status.success());
    assert_eq!(
        fs::read_to_string(&sched).unwrap(),
        "t=0 t q[1]\nt=0 cx q[0],q[2]\nt=1 swap q[1],q[3] inserted\nt=7 cx q[0],q[1]\n"
    );
}

#[test]
fn verify_accepts_routed_and_rejects_corrupted() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.qasm");
    let src = bench("toffoli_3.qasm");
    let o = qroute(&[
        "route",
        "--arch",
        "grid-6x6",
        "--in",
        s(&src),
        "--seed",
        "1",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success());
    let ok = qroute(&[
        "verify",
        "--arch",
        "grid-6x6",
        "--original",
        s(&src),
        "--routed",
        s(&out),
    ]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));

    // drop one T gate
    let text = fs::read_to_string(&out).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    let idx = lines.iter().position(|l| l.starts_with("t ")).unwrap();
    lines.remove(idx);
    let bad = dir.path().join("bad.qasm");
    fs::write(&bad, lines.join("\n") + "\n").unwrap();
    let v = qroute(&[
        "verify",
        "--arch",
        "grid-6x6",
        "--original",
        s(&src),
        "--routed",
        s(&bad),
    ]);
    assert_eq!(v.status.code(), Some(1));
    assert!(stdout(&v).contains("FAIL"));
}

#[test]
fn verify_large_circuit_is_permutation_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.qasm");
    let src = bench("qaoa_16.qasm");
    let o = qroute(&[
        "route",
        "--arch",
        "grid-6x6",
        "--in",
        s(&src),
        "--rt-restarts",
        "2",
        "--rt-rounds",
        "1",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success());
    let v = qroute(&[
        "verify",
        "--arch",
        "grid-6x6",
        "--original",
        s(&src),
        "--routed",
        s(&out),
    ]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains("statevector: skipped"));
}

#[test]
fn arch_commands() {
    let show = qroute(&["arch", "show", "grid-6x6"]);
    assert!(show.status.success());
    let text = stdout(&show);
    assert!(text.contains("36 qubits, 60 edges"));
    assert!(text.contains("grid: 6 x 6"));
    assert!(text.contains("swap=6"));
    assert!(text.contains("diameter 10"));
    let list = qroute(&["arch", "list"]);
    assert!(stdout(&list).lines().count() >= 4);
    assert_eq!(qroute(&["arch", "show", "nope"]).status.code(), Some(3));
}

#[test]
fn data_dir_overrides_bundled() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("architectures")).unwrap();
    fs::write(
        dir.path().join("architectures/grid-6x6.toml"),
        "name = \"grid-6x6\"\nnum_qubits = 2\nedges = [[0, 1]]\n",
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qroute"))
        .args(["arch", "show", "grid-6x6"])
        .env("QROUTE_DATA_DIR", dir.path())
        .output()
        .unwrap();
    assert!(stdout(&o).contains("2 qubits, 1 edges"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.qasm");
    fs::write(&bad, "OPENQASM 2.0;\nqreg q[2];\nfoo q[0];\n").unwrap();
    assert_eq!(
        qroute(&["route", "--arch", "grid-6x6", "--in", s(&bad)])
            .status
            .code(),
        Some(2)
    );
    let src = bench("qft_4.qasm");
    assert_eq!(
        qroute(&["route", "--arch", "grid-0x0", "--in", s(&src)])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        qroute(&["route", "--arch", "line-3", "--in", s(&src)])
            .status
            .code(),
        Some(4)
    );
    let bad_arch = dir.path().join("a.toml");
    fs::write(
        &bad_arch,
        "name = \"x\"\nnum_qubits = 3\nedges = [[0, 1]]\n",
    )
    .unwrap();
    assert_eq!(
        qroute(&["route", "--arch-file", s(&bad_arch), "--in", s(&src)])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        qroute(&[
            "route",
            "--arch",
            "grid-6x6",
            "--durations",
            "nonsense",
            "--in",
            s(&src)
        ])
        .status
        .code(),
        Some(3)
    );
}

#[test]
fn durations_preset_changes_depth() {
    let src = bench("ghz_8.qasm");
    let d = |preset: &str| {
        let o = qroute(&["depth", "--in", s(&src), "--durations", preset]);
        stdout(&o).trim().parse::<u64>().unwrap()
    };
    assert_eq!(d("default"), 16);
    assert_eq!(d("uniform"), 9);
}

#[test]
fn compare_empty_dir_and_single_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = qroute(&["compare", "--dir", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no rows"));

    fs::write(
        dir.path().join("chain.qasm"),
        "OPENQASM 2.0;\nqreg q[3];\nh q[0];\ncx q[0],q[1];\ncx q[1],q[2];\n",
    )
    .unwrap();
    let report = dir.path().join("c.json");
    let o = qroute(&[
        "compare",
        "--dir",
        s(dir.path()),
        "--arch",
        "line-3",
        "--report",
        s(&report),
    ]);
    assert!(o.status.success());
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["rows"].as_array().unwrap().len(), 1);
    assert_eq!(r["rows"][0]["ratio"], 1.0);
}

#[test]
fn compare_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["qft_4.qasm", "toffoli_3.qasm", "ghz_8.qasm"] {
        fs::copy(bench(name), dir.path().join(name)).unwrap();
    }
    let run = |file: &str| {
        let report = dir.path().join(file);
        let o = qroute(&[
            "compare",
            "--dir",
            s(dir.path()),
            "--seed",
            "7",
            "--report",
            s(&report),
        ]);
        assert!(o.status.success());
        fs::read(report).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}
