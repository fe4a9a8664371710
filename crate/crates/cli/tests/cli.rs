//! End-to-end runs of the `bellscope` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bellscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellscope"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn seeded_runs_are_byte_identical() {
    let runs: &[&[&str]] = &[
        &[
            "--seed",
            "7",
            "page",
            "--m",
            "2",
            "--n",
            "4",
            "--samples",
            "200",
        ],
        &["--seed", "7", "mps", "--sites", "6", "--bond-dims", "1,2,4"],
        &[
            "--seed",
            "7",
            "thermal-mi",
            "--sites",
            "4",
            "--betas",
            "0.1,1",
        ],
        &[
            "--seed", "7", "gibbs-mi", "--sites", "6", "--betas", "0.5,2",
        ],
        &[
            "--seed", "7", "area-law", "--model", "random", "--sites", "6",
        ],
        &["scan", "--family", "murcia", "--n-max", "8", "--jobs", "3"],
    ];
    for args in runs {
        let a = bellscope(args);
        let b = bellscope(args);
        assert_eq!(
            a.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&a.stderr)
        );
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stderr, b.stderr, "{args:?}");
    }
}

#[test]
fn different_seeds_differ() {
    let a = bellscope(&[
        "--seed",
        "1",
        "page",
        "--m",
        "2",
        "--n",
        "4",
        "--samples",
        "200",
    ]);
    let b = bellscope(&[
        "--seed",
        "2",
        "page",
        "--m",
        "2",
        "--n",
        "4",
        "--samples",
        "200",
    ]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn scan_rows_sorted_whatever_the_job_count() {
    let serial = bellscope(&[
        "scan", "--family", "dicke", "--n-min", "4", "--n-max", "12", "--n-step", "2",
    ]);
    let parallel = bellscope(&[
        "scan", "--family", "dicke", "--n-min", "4", "--n-max", "12", "--n-step", "2", "--jobs",
        "4",
    ]);
    assert_eq!(serial.stdout, parallel.stdout);
    let ns: Vec<usize> = stdout(&serial)
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ns, vec![4, 6, 8, 10, 12]);
}

#[test]
fn chsh_prints_classical_bounds() {
    let o = bellscope(&["chsh"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("quantity,value\n"));
    assert!(text.contains("classical_probability_form,3\n"));
    assert!(text.contains("classical_correlator_form,2\n"));
}

#[test]
fn rioja_example() {
    let o = bellscope(&[
        "rioja", "--x", "1", "--y", "1", "--sigma", "-1", "--mu", "0", "--n", "12", "--verify",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(row.ends_with(",24,24,true"), "{row}");
}

#[test]
fn validation_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["nonsense"],
        &["chsh", "--bogus"],
        &["lmg", "--n", "0"],
        &["lmg", "--n", "4", "--lambda", "nan"],
        &["lmg", "--n", "4x"],
        &[
            "rioja", "--x", "1", "--y", "1", "--sigma", "1", "--mu", "1", "--n", "4",
        ],
        &["mps", "--sites", "40"],
        &["page", "--m", "3", "--n", "2"],
    ];
    for args in cases {
        let o = bellscope(args);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn unreadable_input_is_a_usage_error() {
    let o = bellscope(&["ppt", "--input", "/nonexistent/state.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_one() {
    let o = bellscope(&["chsh", "--out", "/nonexistent/dir/chsh.csv"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    assert_eq!(bellscope(&["--help"]).status.code(), Some(0));
}

#[test]
fn out_writes_table_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("murcia.csv");
    let o = bellscope(&["murcia", "--n", "6", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("quantity,value\n"));
    let sidecar: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("murcia.csv.config.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(sidecar["command"], "murcia");
    assert_eq!(sidecar["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(sidecar["params"]["n"], 6);
}

#[test]
fn json_format() {
    let o = bellscope(&["--format", "json", "dicke", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["n"], 4);
}

#[test]
fn failed_run_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bad.csv");
    let o = bellscope(&["lmg", "--n", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!Path::new(&out).exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn state_fixture_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bell.json");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    fs::write(
        &input,
        format!(r#"{{"dims":[2,2],"re":[{h},0,0,{h}],"im":[0,0,0,0]}}"#),
    )
    .unwrap();
    let o = bellscope(&["ppt", "--input", input.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    assert!(text.contains("entanglement_bits,1\n"), "{text}");
}
