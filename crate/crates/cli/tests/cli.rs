use std::io::Write;
use std::process::{Command, Output};

use sgzeta::dirichlet::divisor_sum;
use sgzeta::BuiltinGroup;
use sgzeta_cli::{parse_csv, GroupFile, TableOutput};

fn sgzeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgzeta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_group_file(file: &GroupFile) -> tempfile::NamedTempFile {
    let mut tmp = tempfile::NamedTempFile::new().unwrap();
    tmp.write_all(serde_json::to_string(file).unwrap().as_bytes())
        .unwrap();
    tmp
}

#[test]
fn groups_lists_eight_builtins() {
    let out = sgzeta(&["groups"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let names: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with("Family"))
        .map(|l| l.split_whitespace().next().unwrap())
        .collect();
    assert_eq!(names, ["P-1", "P2", "P21", "C2", "Pm", "Pc", "Cm", "Cc"]);
    assert!(text.contains("Family:inversion:m"));
    assert!(text.contains("Family:twisted:m"));
}

#[test]
fn table_csv_and_json() {
    let out = sgzeta(&["table", "--group", "C2", "--max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(parse_csv(&stdout(&out)).unwrap(), vec![1, 7, 13, 43]);

    let out = sgzeta(&[
        "table", "--group", "P-1", "--normal", "--max", "2", "--format", "json",
    ]);
    let table: TableOutput = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(table.counts, vec![1, 15]);
    assert_eq!(table.group, "P-1");
    assert!(table.normal);

    let out = sgzeta(&["table", "--group", "Pm", "--normal", "--max", "40"]);
    let counts = parse_csv(&stdout(&out)).unwrap();
    for n in (1..=40).step_by(2) {
        assert_eq!(counts[n - 1], divisor_sum(n as u64) as i64, "n = {n}");
    }
}

#[test]
fn table_modes_agree() {
    let mut tables = Vec::new();
    for mode in ["formula", "series", "enumerate"] {
        let out = sgzeta(&[
            "table", "--group", "Cc", "--max", "24", "--normal", "--mode", mode,
        ]);
        assert_eq!(out.status.code(), Some(0));
        tables.push(stdout(&out));
    }
    assert_eq!(tables[0], tables[1]);
    assert_eq!(tables[1], tables[2]);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "table",
        "--group",
        "P21",
        "--max",
        "30",
        "--mode",
        "enumerate",
        "--format",
        "json",
    ];
    assert_eq!(sgzeta(&args).stdout, sgzeta(&args).stdout);
    assert_eq!(
        sgzeta(&["verify", "--max", "12"]).stdout,
        sgzeta(&["verify", "--max", "12"]).stdout
    );
}

#[test]
fn enumerate_above_limit_warns() {
    let out = sgzeta(&[
        "table",
        "--group",
        "Cc",
        "--max",
        "201",
        "--mode",
        "enumerate",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn closed_form_rendering() {
    let out = sgzeta(&["closed-form", "--group", "C2"]);
    assert_eq!(stdout(&out), "(1 + 8*2^(-2s)) * Z(s)Z(s-1)Z(s-2)\n");
    let out = sgzeta(&["closed-form", "--group", "P21"]);
    assert_eq!(stdout(&out), "Z(s)Z(s-1)Z(s-2)\n");
    let out = sgzeta(&["closed-form", "--group", "Cc", "--normal"]);
    assert_eq!(
        stdout(&out),
        "(1 - 2^(-s)) * Z(s)Z(s-1) + (2^(-s) - 2^(-2s) + 4*2^(-3s)) * Z(s)Z(s)Z(s-1)\n"
    );
    let out = sgzeta(&["closed-form", "--group", "Family:twisted:4"]);
    assert_eq!(stdout(&out), "(1 + 16*2^(-2s)) * Z(s)Z(s-1)Z(s-2)Z(s-3)\n");
    let out = sgzeta(&["closed-form", "--group", "Family:twisted:4", "--normal"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let out = sgzeta(&["verify", "--group", "all", "--max", "24"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 8);
    let out = sgzeta(&["verify", "--group", "Family:twisted:2", "--max", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let out = sgzeta(&["verify", "--group", "Pc", "--max", "24", "--normal"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["table", "--group", "P6", "--max", "3"],
        vec!["table", "--max", "3"],
        vec!["table", "--group", "C2", "--max", "0"],
        vec!["verify", "--group", "Family:twisted:1"],
        vec!["verify", "--max", "0"],
        vec!["bogus"],
        vec!["table", "--group", "C2", "--max", "4", "--mode", "guess"],
    ] {
        let out = sgzeta(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn corrupted_group_file_fails_verification() {
    let mut file = GroupFile::from_spec(&BuiltinGroup::Pm.spec());
    file.square_word = vec![1, 0, 0];
    let tmp = write_group_file(&file);
    let path = tmp.path().to_str().unwrap();
    let out = sgzeta(&["--group-file", path, "verify", "--max", "48"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("first at n = 2"));

    // the intact file passes
    let tmp = write_group_file(&GroupFile::from_spec(&BuiltinGroup::Pm.spec()));
    let out = sgzeta(&[
        "--group-file",
        tmp.path().to_str().unwrap(),
        "verify",
        "--max",
        "24",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn invalid_group_files_are_rejected() {
    let mut file = GroupFile::from_spec(&BuiltinGroup::C2.spec());
    file.action[1][1] = 1;
    let tmp = write_group_file(&file);
    let out = sgzeta(&["--group-file", tmp.path().to_str().unwrap(), "verify"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("involution"));

    let out = sgzeta(&[
        "--group-file",
        "/nonexistent/group.json",
        "table",
        "--max",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn custom_group_file_supports_enumeration_only() {
    let file = GroupFile {
        name: "screw2d".into(),
        rank: 2,
        action: vec![vec![1, 0], vec![0, -1]],
        square_word: vec![1, 0],
    };
    let tmp = write_group_file(&file);
    let path = tmp.path().to_str().unwrap();
    let out = sgzeta(&[
        "--group-file",
        path,
        "table",
        "--max",
        "6",
        "--mode",
        "enumerate",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(parse_csv(&stdout(&out)).unwrap().len(), 6);
    let out = sgzeta(&["--group-file", path, "table", "--max", "6"]);
    assert_eq!(out.status.code(), Some(2));
    let out = sgzeta(&["--group-file", path, "verify"]);
    assert_eq!(out.status.code(), Some(2));
}
