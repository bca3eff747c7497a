use std::process::Command;

use koszulhh::cli::{run, Outcome};
use koszulhh::format::{read_csv, CochainFile, DgAlgebraFile, GridReport};
use koszulhh::massey::DgAlgebra;
use koszulhh::ConnectedSumAlgebra;

fn koszulhh(args: &[&str]) -> Outcome {
    run(std::iter::once("koszulhh").chain(args.iter().copied()))
}

fn json(out: &Outcome) -> serde_json::Value {
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn grid_json_and_csv_agree() {
    let args = [
        "hh-grid", "--v-dim", "1", "--atoms", "2", "--k-max", "4", "--s-min", "-2", "--s-max", "0",
    ];
    let j = koszulhh(&args);
    let report: GridReport = serde_json::from_str(&j.stdout).unwrap();
    assert_eq!(report.results.len(), 5 * 3);
    assert_eq!(report.manifest.command, "hh-grid");
    assert!(report.manifest.wall_time_ms.is_none());

    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let c = koszulhh(&csv_args);
    assert!(c
        .stdout
        .starts_with("k,s,cochains,cocycles,coboundaries,hh\n"));
    assert_eq!(read_csv(c.stdout.as_bytes()).unwrap(), report.results);
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["hh-grid", "--atoms", "3", "--k-max", "5", "--s-min", "-3"][..],
        &["massey", "--samples", "40", "--seed", "9"][..],
        &[
            "kadeishvili",
            "--v-dim",
            "1",
            "--atoms",
            "2",
            "--k-max",
            "5",
        ][..],
    ] {
        let a = koszulhh(args);
        assert_eq!(a.code, 0, "{}", a.stderr);
        assert_eq!(a, koszulhh(args));
    }
}

#[test]
fn exceptional_column_only_for_three_atoms() {
    let report: GridReport = serde_json::from_value(json(&koszulhh(&[
        "hh-grid", "--atoms", "3", "--k-max", "6", "--s-min", "-3", "--s-max", "0",
    ])))
    .unwrap();
    for r in &report.results {
        if r.k >= 2 && r.k as i64 + r.s != 1 {
            assert_eq!(r.hh, 0, "{r:?}");
        }
    }
}

#[test]
fn dual_algebra_grid_vanishes_above_the_diagonal() {
    let report: GridReport = serde_json::from_value(json(&koszulhh(&[
        "hh-grid", "--v-dim", "2", "--k-max", "5", "--s-min", "-3", "--s-max", "2",
    ])))
    .unwrap();
    assert!(report
        .results
        .iter()
        .filter(|r| r.k as i64 + r.s >= 2)
        .all(|r| r.hh == 0));
}

#[test]
fn empty_grid() {
    let report: GridReport =
        serde_json::from_value(json(&koszulhh(&["hh-grid", "--k-max", "-1"]))).unwrap();
    assert!(report.results.is_empty());
}

#[test]
fn kadeishvili_passes() {
    for (m, n, k) in [("0", "3", "6"), ("2", "0", "6"), ("1", "2", "5")] {
        let v = json(&koszulhh(&[
            "kadeishvili",
            "--v-dim",
            m,
            "--atoms",
            n,
            "--k-max",
            k,
        ]));
        assert_eq!(v["manifest"]["summary"]["passed"], true);
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(koszulhh(&["hh-grid", "--bogus"]).code, 2);
    assert_eq!(koszulhh(&["nonsense"]).code, 2);
    assert_eq!(
        koszulhh(&["hh-grid", "--k-max", "2", "--subring", "1;x"]).code,
        2
    );
    assert_eq!(koszulhh(&["kadeishvili", "--k-max", "2"]).code, 2);
    let help = koszulhh(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("hh-grid"));
}

#[test]
fn cap_exceeded_exits_3() {
    let out = koszulhh(&["hh-grid", "--atoms", "3", "--k-max", "6", "--cap", "50"]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("k = 6"), "{}", out.stderr);
}

#[test]
fn cap_from_environment() {
    let bin = env!("CARGO_BIN_EXE_koszulhh");
    let status = |cap: &str| {
        Command::new(bin)
            .args(["hh-grid", "--atoms", "3", "--k-max", "4"])
            .env("KOSZULHH_CAP", cap)
            .output()
            .unwrap()
    };
    assert_eq!(status("10").status.code(), Some(3));
    let ok = status("1000");
    assert_eq!(ok.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["manifest"]["parameters"]["cap"], "1000");
}

#[test]
fn solve_stable_orbit_fixture() {
    let v = json(&koszulhh(&[
        "solve-coboundary",
        "--atoms",
        "3",
        "--k",
        "3",
        "--s",
        "-1",
        "--value",
        "x1,x2,x1=100",
    ]));
    let g: CochainFile = serde_json::from_value(v["result"]["g"].clone()).unwrap();
    assert_eq!(g.k, 2);
    assert_eq!(g.values.len(), 1);
    assert_eq!(g.values["x2,x1"], "100");
    assert_eq!(v["result"]["check"]["differentialEqualsInput"], true);
}

#[test]
fn solve_zero_and_non_cocycle() {
    let v = json(&koszulhh(&[
        "solve-coboundary",
        "--atoms",
        "3",
        "--k",
        "3",
        "--s",
        "-1",
    ]));
    assert_eq!(v["result"]["g"]["values"], serde_json::json!({}));

    let bad = koszulhh(&[
        "solve-coboundary",
        "--atoms",
        "3",
        "--k",
        "2",
        "--s",
        "0",
        "--value",
        "x1,x2=100",
    ]);
    assert_eq!(bad.code, 2);
    assert!(bad.stderr.contains("not a cocycle"), "{}", bad.stderr);
}

#[test]
fn solve_and_extend_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("f.json");
    std::fs::write(
        &input,
        r#"{"algebra": {"vDim": 0, "atoms": 3}, "k": 3, "s": -1, "values": {"x1,x2,x1": "100"}}"#,
    )
    .unwrap();
    let out = dir.path().join("g.json");
    let o = koszulhh(&[
        "solve-coboundary",
        "--input",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["g"]["values"]["x2,x1"], "100");

    // The zero cocycle over the prime subring of F2^3 extends to zero.
    let zero = dir.path().join("z.json");
    std::fs::write(
        &zero,
        r#"{"algebra": {"vDim": 1, "atoms": 3, "subringBlocks": [[1, 2, 3]]}, "k": 2, "s": -1, "values": {}}"#,
    )
    .unwrap();
    let v = json(&koszulhh(&[
        "extend",
        "--input",
        zero.to_str().unwrap(),
        "--x",
        "110",
    ]));
    assert_eq!(v["result"]["check"]["cocycle"], true);
    assert_eq!(v["result"]["check"]["restrictsToInput"], true);
    assert_eq!(v["result"]["lift"]["values"], serde_json::json!({}));
    assert_eq!(
        v["result"]["lift"]["algebra"]["subringBlocks"],
        serde_json::json!([[1, 2], [3]])
    );
}

#[test]
fn massey_commands() {
    let v = json(&koszulhh(&[
        "massey",
        "--samples",
        "200",
        "--max-n",
        "5",
        "--seed",
        "1",
    ]));
    assert_eq!(v["manifest"]["summary"]["passed"], true);
    assert_eq!(v["manifest"]["seed"], 1);

    let zero = json(&koszulhh(&[
        "massey",
        "--classes",
        "1:00100,1:00000,1:00100",
    ]));
    assert_eq!(zero["product"]["zero"], true);

    let rejected = koszulhh(&["massey", "--classes", "1:00100,1:00100"]);
    assert_eq!(rejected.code, 2);
}

#[test]
fn massey_from_algebra_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    let h = DgAlgebra::from_connected_sum(&ConnectedSumAlgebra::new(1, 2), 4);
    std::fs::write(
        &path,
        serde_json::to_string(&DgAlgebraFile::from_algebra(&h)).unwrap(),
    )
    .unwrap();
    let v = json(&koszulhh(&[
        "massey",
        "--algebra",
        path.to_str().unwrap(),
        "--samples",
        "30",
    ]));
    assert_eq!(v["manifest"]["summary"]["passed"], true);

    std::fs::write(
        &path,
        r#"{"topDegree": 1, "dims": [1], "differential": [[]], "multiplication": {}}"#,
    )
    .unwrap();
    assert_eq!(
        koszulhh(&["massey", "--algebra", path.to_str().unwrap()]).code,
        2
    );
}

#[test]
fn koszul_and_bar_commands() {
    let v = json(&koszulhh(&[
        "koszul",
        "--v-dim",
        "1",
        "--atoms",
        "2",
        "--max-internal-degree",
        "5",
    ]));
    assert_eq!(v["manifest"]["summary"]["passed"], true);
    let v = json(&koszulhh(&[
        "bar",
        "--v-dim",
        "1",
        "--atoms",
        "1",
        "--k",
        "2",
        "--s",
        "-1",
        "--max-internal-degree",
        "5",
    ]));
    assert_eq!(v["manifest"]["summary"]["agree"], true);
}

#[test]
fn timing_is_opt_in() {
    let v = json(&koszulhh(&["hh-grid", "--k-max", "1", "--timing"]));
    assert!(v["manifest"]["wallTimeMs"].is_u64());
}
