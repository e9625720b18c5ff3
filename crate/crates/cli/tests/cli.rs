use std::path::Path;
use std::process::{Command, Output};

fn mcsort(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcsort"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn gen_then_sim_the_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let o = mcsort(
        &["gen", "two-sort", "--bits", "4", "--out", "ts4.json"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("gates: 55"));
    assert!(dir.path().join("ts4.json").exists());

    let o = mcsort(
        &["sim", "--netlist", "ts4.json", "--g", "0M10", "--h", "0010"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "max=0M10 min=0010");

    let o = mcsort(
        &[
            "sim",
            "--netlist",
            "ts4.json",
            "--assign",
            "g=1M10",
            "--assign",
            "h=1100",
            "--json",
        ],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["outputs"]["max"], "1M10");
    assert_eq!(v["outputs"]["min"], "1100");
}

#[test]
fn stats_and_export() {
    let dir = tempfile::tempdir().unwrap();
    mcsort(
        &["gen", "two-sort", "--bits", "2", "--out", "ts2.json"],
        dir.path(),
    );

    let o = mcsort(&["stats", "--netlist", "ts2.json", "--json"], dir.path());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["metrics"]["total"], 13);

    let o = mcsort(
        &["export", "--netlist", "ts2.json", "--format", "hdl"],
        dir.path(),
    );
    assert!(o.status.success());
    let text = stdout(&o);
    let cells = ["AND2_X1 ", "OR2_X1 ", "INV_X1 "]
        .iter()
        .map(|c| text.matches(c).count())
        .sum::<usize>();
    assert_eq!(cells, 13);
    assert!(text.starts_with("module two_sort_2 ("));
    assert!(text.trim_end().ends_with("endmodule"));

    let o = mcsort(
        &[
            "export",
            "--netlist",
            "ts2.json",
            "--format",
            "json",
            "--out",
            "copy.json",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    assert_eq!(
        std::fs::read_to_string(dir.path().join("copy.json")).unwrap(),
        std::fs::read_to_string(dir.path().join("ts2.json")).unwrap()
    );
}

#[test]
fn network_generation_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (args, gates) in [
        (vec!["--channels", "4", "--bits", "2"], 65),
        (vec!["--channels", "7", "--bits", "4"], 880),
        (
            vec!["--channels", "10", "--variant", "depth", "--bits", "16"],
            12617,
        ),
    ] {
        let mut full = vec!["gen", "n-sort", "--out", "net.json", "--json"];
        full.extend(args);
        let o = mcsort(&full, dir.path());
        assert!(o.status.success(), "{}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["metrics"]["total"], gates);
    }
}

#[test]
fn schedule_file_drives_generation_and_verification() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("s3.json"),
        r#"{"channels":3,"layers":[[[0,1]],[[1,2]],[[0,1]]]}"#,
    )
    .unwrap();
    let o = mcsort(
        &[
            "gen",
            "n-sort",
            "--schedule",
            "s3.json",
            "--bits",
            "3",
            "--out",
            "n.json",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains(&format!("gates: {}", 3 * 34)));

    let o = mcsort(
        &["verify", "network", "--schedule", "s3.json", "--bits", "3"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // Missing the last comparator: not a sorting network.
    std::fs::write(
        dir.path().join("bad.json"),
        r#"{"channels":3,"layers":[[[0,1]],[[1,2]]]}"#,
    )
    .unwrap();
    let o = mcsort(
        &["verify", "network", "--schedule", "bad.json", "--bits", "2"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = mcsort(
        &["verify", "two-sort", "--bits", "8", "--exhaustive"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("261121 cases"));

    let o = mcsort(
        &[
            "verify",
            "two-sort",
            "--bits",
            "12",
            "--samples",
            "2000",
            "--seed",
            "5",
            "--json",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["mode"]["seed"], 5);
    assert_eq!(v["cases_run"], 2000);

    // A netlist with one AND gate turned into OR must fail.
    mcsort(
        &["gen", "two-sort", "--bits", "3", "--out", "ts3.json"],
        dir.path(),
    );
    let text = std::fs::read_to_string(dir.path().join("ts3.json")).unwrap();
    let mutated = text.replacen("\"AND\"", "\"OR\"", 1);
    assert_ne!(text, mutated);
    std::fs::write(dir.path().join("m.json"), mutated).unwrap();
    let o = mcsort(
        &[
            "verify",
            "two-sort",
            "--bits",
            "3",
            "--netlist",
            "m.json",
            "--json",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["failure_count"].as_u64().unwrap() >= 1);
    assert!(v["failures"][0]["inputs"].is_array());

    let o = mcsort(&["verify", "properties"], dir.path());
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_and_format_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        mcsort(&["gen", "two-sort", "--bogus"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(mcsort(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(
        mcsort(&["gen", "two-sort", "--bits", "0"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        mcsort(
            &["verify", "two-sort", "--bits", "9", "--exhaustive"],
            dir.path()
        )
        .status
        .code(),
        Some(2)
    );

    std::fs::write(
        dir.path().join("xor.json"),
        r#"{"name":"x","inputs":["a","b"],"gates":[{"id":"g","kind":"XOR","in":["a","b"]}],"outputs":{"y":"g"}}"#,
    )
    .unwrap();
    let o = mcsort(&["stats", "--netlist", "xor.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1"));

    mcsort(
        &["gen", "two-sort", "--bits", "2", "--out", "ts2.json"],
        dir.path(),
    );
    let o = mcsort(
        &["sim", "--netlist", "ts2.json", "--g", "0X", "--h", "01"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    let o = mcsort(
        &["sim", "--netlist", "ts2.json", "--assign", "g=01"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("h_1"));
    assert_eq!(mcsort(&["--help"], dir.path()).status.code(), Some(0));
}
