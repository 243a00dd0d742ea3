use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ergodic_core::cyclegen::{gen_cycle, random_data};
use ergodic_core::dynamics::is_transitive_mod;
use ergodic_core::io::{self, Coefficients, Ring};
use ergodic_core::vanderput::{check_ergodic_vdp, to_vdp};
use ergodic_core::FunctionTable;
use serde_json::Value;
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ergodic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn lines(out: &Output) -> Vec<String> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(String::from)
        .collect()
}

fn write(dir: &TempDir, name: &str, contents: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn example_is_certified_ergodic() {
    let coeffs = data("basic_ergodic.json");
    let out = run(&[
        "verify",
        "--ring",
        "f2t",
        "--basis",
        "carlitz",
        "--check",
        "ergodic",
        "--coeffs",
        coeffs.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["verdict"], "holds");
    assert_eq!(report["levels"].as_array().unwrap().len(), 12);
}

#[test]
fn identity_is_not_transitive() {
    let table = data("identity_k3.json");
    let out = run(&["verify", "--exhaustive", "--table", table.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["verdict"], "fails");
    assert_eq!(report["bijective"], serde_json::json!([true, true, true]));
    assert_eq!(
        report["transitive"],
        serde_json::json!([false, false, false])
    );
}

#[test]
fn keystream_of_example() {
    let coeffs = data("basic_ergodic.json");
    let c = coeffs.to_str().unwrap();
    let out = run(&[
        "keystream",
        "--coeffs",
        c,
        "--x0",
        "0x0",
        "--prec",
        "2",
        "--steps",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out), ["0x0", "0x1", "0x2", "0x3", "0x0"]);
}

#[test]
fn keystream_period_is_full() {
    let coeffs = data("basic_ergodic.json");
    let c = coeffs.to_str().unwrap();
    for k in 1..=10u32 {
        let steps = (1usize << k) + 1;
        let x0 = format!("{:#x}", 5 & ((1u64 << k) - 1));
        let out = run(&[
            "keystream",
            "--coeffs",
            c,
            "--x0",
            &x0,
            "--prec",
            &k.to_string(),
            "--steps",
            &steps.to_string(),
        ]);
        let orbit = lines(&out);
        let first = orbit
            .iter()
            .skip(1)
            .position(|x| *x == orbit[0])
            .map(|p| p + 1);
        assert_eq!(first, Some(1 << k), "k = {k}");
        let mut distinct = orbit[..1 << k].to_vec();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), 1 << k);
    }
}

#[test]
fn keystream_bit_stream() {
    let coeffs = data("basic_ergodic.json");
    let c = coeffs.to_str().unwrap();
    let full = lines(&run(&[
        "keystream",
        "--coeffs",
        c,
        "--x0",
        "0x0",
        "--prec",
        "4",
        "--steps",
        "16",
    ]));
    let bits = lines(&run(&[
        "keystream",
        "--coeffs",
        c,
        "--x0",
        "0x0",
        "--prec",
        "4",
        "--steps",
        "16",
        "--bit",
        "3",
    ]));
    for (x, b) in full.iter().zip(&bits) {
        let v = u64::from_str_radix(x.trim_start_matches("0x"), 16).unwrap();
        assert_eq!(b, &((v >> 3) & 1).to_string());
    }
}

#[test]
fn usage_and_data_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let garbage = write(&dir, "garbage.json", "{ not json");
    let extra = write(
        &dir,
        "extra.json",
        r#"{"ring":"F2T","precision":1,"table":["0x0","0x1"],"x":1}"#,
    );
    let example = data("basic_ergodic.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["verify"],
        vec!["frobnicate"],
        vec![
            "verify",
            "--exhaustive",
            "--table",
            "/definitely/missing.json",
        ],
        vec!["verify", "--exhaustive", "--table", &garbage],
        vec!["verify", "--exhaustive", "--table", &extra],
        vec![
            "eval",
            "--coeffs",
            example.to_str().unwrap(),
            "--x",
            "zz",
            "--prec",
            "3",
        ],
        vec![
            "eval",
            "--coeffs",
            example.to_str().unwrap(),
            "--x",
            "0x8",
            "--prec",
            "3",
        ],
        vec![
            "eval",
            "--coeffs",
            example.to_str().unwrap(),
            "--x",
            "0x1",
            "--prec",
            "13",
        ],
        vec![
            "verify",
            "--ring",
            "z2",
            "--basis",
            "carlitz",
            "--check",
            "ergodic",
            "--coeffs",
            example.to_str().unwrap(),
        ],
        vec!["gen-cycle", "--n", "2"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn quiet_prints_nothing() {
    let table = data("identity_k3.json");
    let out = run(&[
        "--quiet",
        "verify",
        "--exhaustive",
        "--table",
        table.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

/// Tables from the cycle generator, some with one entry changed.
fn sample_tables() -> Vec<FunctionTable> {
    let mut out = Vec::new();
    for seed in 0..12u64 {
        let n = (seed % 4) as u32 + 1;
        let t = gen_cycle(&random_data(seed, n).unwrap()).unwrap().table;
        if seed % 3 == 0 {
            let mut e = t.into_entries();
            let i = (seed as usize * 7) % e.len();
            e[i] ^= 1 << (seed % (n as u64 + 1));
            out.push(FunctionTable::new(n + 1, e).unwrap());
        } else {
            out.push(t);
        }
    }
    out
}

#[test]
fn verdicts_match_library() {
    let dir = TempDir::new().unwrap();
    for (i, t) in sample_tables().iter().enumerate() {
        let c = to_vdp(t);
        let file = write(
            &dir,
            &format!("c{i}.json"),
            &io::coefficients_to_json(&Coefficients::Vdp(c.clone())),
        );
        let out = run(&[
            "verify", "--ring", "f2t", "--basis", "vdp", "--check", "ergodic", "--coeffs", &file,
        ]);
        let expected = check_ergodic_vdp(&c).map(|v| v.holds()).unwrap_or(false);
        assert_eq!(
            out.status.code(),
            Some(if expected { 0 } else { 1 }),
            "table {i}"
        );

        let tf = write(
            &dir,
            &format!("t{i}.json"),
            &io::table_to_json(Ring::F2T, t),
        );
        let out = run(&["verify", "--exhaustive", "--table", &tf]);
        let report = json(&out);
        let transitive: Vec<Option<bool>> =
            serde_json::from_value(report["transitive"].clone()).unwrap();
        assert_eq!(transitive, is_transitive_mod(t).as_options());
    }
}

#[test]
fn expand_convert_and_eval_agree() {
    let dir = TempDir::new().unwrap();
    for (i, t) in sample_tables().iter().enumerate() {
        let tf = write(
            &dir,
            &format!("t{i}.json"),
            &io::table_to_json(Ring::F2T, t),
        );
        let vdp = run(&["expand", "--basis", "vdp", "--table", &tf]);
        let carlitz = run(&["expand", "--basis", "carlitz", "--table", &tf]);
        assert_eq!(vdp.status.code(), Some(0));
        let cf = write(
            &dir,
            &format!("a{i}.json"),
            std::str::from_utf8(&carlitz.stdout).unwrap(),
        );
        let converted = run(&[
            "convert", "--from", "carlitz", "--to", "vdp", "--coeffs", &cf,
        ]);
        assert_eq!(json(&converted), json(&vdp));

        let k = t.precision();
        for x in 0..1u64 << k {
            let out = run(&[
                "eval",
                "--coeffs",
                &cf,
                "--x",
                &format!("{x:#x}"),
                "--prec",
                &k.to_string(),
            ]);
            let v = json(&out)["value"].as_str().unwrap().to_owned();
            assert_eq!(v, format!("{:#x}", t.get(x)), "table {i}, x = {x}");
        }
    }
}

#[test]
fn gen_cycle_matches_library() {
    let out = run(&["gen-cycle", "--n", "3", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let g = gen_cycle(&random_data(42, 3).unwrap()).unwrap();
    let table: Vec<String> = serde_json::from_value(report["table"].clone()).unwrap();
    let expected: Vec<String> = g
        .table
        .entries()
        .iter()
        .map(|v| format!("{v:#x}"))
        .collect();
    assert_eq!(table, expected);

    let dir = TempDir::new().unwrap();
    let d = random_data(7, 2).unwrap();
    let file = write(&dir, "d.json", &io::cycle_data_to_json(&d));
    let out = run(&["gen-cycle", "--n", "2", "--data", &file]);
    let seq: Vec<String> = serde_json::from_value(json(&out)["sequence"].clone()).unwrap();
    let expected: Vec<String> = gen_cycle(&d)
        .unwrap()
        .sequence
        .iter()
        .map(|v| format!("{v:#x}"))
        .collect();
    assert_eq!(seq, expected);
}
