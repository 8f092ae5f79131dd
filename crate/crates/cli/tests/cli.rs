use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn fixture(name: &str) -> String {
    fixtures().join(name).to_str().unwrap().to_string()
}

fn mtree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtree"))
        .args(args)
        .output()
        .expect("mtree runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn four_point_on_tripod_holds() {
    let out = mtree(&[
        "check",
        "four-point",
        "--tree",
        &fixture("tripod.json"),
        "--sample",
        "1000",
        "--seed",
        "7",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("holds"));
}

#[test]
fn unit_square_fails_four_point() {
    let out = mtree(&["check", "four-point", "--metric", &fixture("square.json")]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("witness"));
}

#[test]
fn four_cycle_has_negative_type_one() {
    let out = mtree(&[
        "check",
        "negtype",
        "--metric",
        &fixture("c4.json"),
        "--p",
        "1",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn four_cycle_violates_type2() {
    let out = mtree(&["check", "type2", "--metric", &fixture("c4.json"), "--json"]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "violation");
    assert_eq!(v["result"]["worst"]["lhs"], 16.0);
    assert_eq!(v["result"]["worst"]["rhs"], 8.0);

    let out = mtree(&[
        "check",
        "type2",
        "--metric",
        &fixture("c4.json"),
        "--map",
        "0,1,3,2",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("lhs 16 rhs 8"));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"vertices\": [\"a\"], \"edges\": [").unwrap();
    let out = mtree(&[
        "dist",
        "--tree",
        bad.to_str().unwrap(),
        "--points",
        "v:a,v:a",
    ]);
    assert_eq!(code(&out), 2);

    let out = mtree(&[
        "dist",
        "--tree",
        &fixture("tripod.json"),
        "--points",
        "v:o,v:nope",
    ]);
    assert_eq!(code(&out), 2);

    let out = mtree(&["dist", "--tree", &fixture("tripod.json")]);
    assert_eq!(code(&out), 2);

    let out = mtree(&[
        "suite",
        "paper-acceptance",
        "--fixtures",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn distances_and_medians() {
    let tripod = fixture("tripod.json");
    let out = mtree(&["dist", "--tree", &tripod, "--points", "v:1,e:o-2@0.25"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().last(), Some("1.25"));

    let out = mtree(&[
        "median",
        "--tree",
        &tripod,
        "--points",
        "v:1,v:2,v:3",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["median"], "v:o");
}

#[test]
fn points_can_come_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("pts.txt");
    fs::write(&list, "v:1\nv:2\n").unwrap();
    let arg = format!("@{}", list.display());
    let out = mtree(&[
        "center",
        "--tree",
        &fixture("tripod.json"),
        "--points",
        &arg,
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["radius"], 1.0);
    assert_eq!(v["result"]["center"], "v:o");
}

#[test]
fn embed_writes_text_report() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("emb.txt");
    let out = mtree(&[
        "embed",
        "--tree",
        &fixture("tripod.json"),
        "--kind",
        "linf",
        "--points",
        "v:1,v:2",
        "--out",
        out_file.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(out_file).unwrap();
    assert!(text.starts_with("norm linf"), "{text}");
    assert_eq!(text.lines().count(), 4, "{text}");
}

#[test]
fn embeddings_verify_as_isometries() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("random.json");
    let out = mtree(&[
        "gen",
        "random",
        "--n",
        "15",
        "--seed",
        "9",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let tree = path.to_str().unwrap();
    for kind in ["l1", "linf"] {
        let out = mtree(&["verify-isometry", "--tree", tree, "--kind", kind]);
        assert_eq!(code(&out), 0, "{kind}: {}", stdout(&out));
    }
    let out = mtree(&[
        "verify-isometry",
        "--tree",
        tree,
        "--kind",
        "l1",
        "--root",
        "e:v01-v00@0.05",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let out = mtree(&["verify-isometry", "--kind", "cube", "--n", "3"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn covering_commands() {
    let tripod = fixture("tripod.json");
    let out = mtree(&["cover", "--tree", &tripod, "--eps", "0.5", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["count"], 3);

    let out = mtree(&[
        "profile",
        "--tree",
        &tripod,
        "--points",
        "v:1,v:2,v:3",
        "--eps-grid",
        "0.4,0.5,1.0",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let counts: Vec<u64> = v["result"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["n_cover"].as_u64().unwrap())
        .collect();
    assert_eq!(counts, [3, 3, 1]);

    let out = mtree(&[
        "hullcover",
        "--tree",
        &tripod,
        "--points",
        "v:1,v:2,v:3",
        "--eps1",
        "0.3",
        "--eps2",
        "0.2",
    ]);
    assert_eq!(code(&out), 0);

    let out = mtree(&[
        "noncompact",
        "--tree",
        &tripod,
        "--points",
        "v:1,v:2,v:3,v:o",
        "--kmax",
        "4",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn gen_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spider.json");
    let out = mtree(&[
        "gen",
        "spider",
        "--legs",
        "1,1,1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let out = mtree(&[
        "dist",
        "--tree",
        path.to_str().unwrap(),
        "--points",
        "v:1,v:2",
    ]);
    assert_eq!(stdout(&out).lines().last(), Some("2"));

    let a = mtree(&["gen", "random", "--n", "12", "--seed", "5"]);
    let b = mtree(&["gen", "random", "--n", "12", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let c = mtree(&["gen", "random", "--n", "12", "--seed", "6"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn suite_is_deterministic_and_passes() {
    let a = mtree(&["suite", "paper-acceptance", "--seed", "42"]);
    let b = mtree(&["suite", "paper-acceptance", "--seed", "42"]);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        stdout(&a)
            .lines()
            .filter(|l| l.starts_with("[PASS]"))
            .count(),
        14
    );
}

#[test]
fn suite_fails_on_square_labelled_as_tree() {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(fixtures()).unwrap() {
        let entry = entry.unwrap();
        fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    fs::copy(
        fixtures().join("square.json"),
        dir.path().join("tree_square.json"),
    )
    .unwrap();
    let out = mtree(&[
        "suite",
        "paper-acceptance",
        "--fixtures",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    let line = text.lines().find(|l| l.contains(" 01 ")).unwrap();
    assert!(
        line.starts_with("[FAIL]") && line.contains("tree_square"),
        "{line}"
    );
}

#[test]
fn every_subcommand_has_help() {
    for cmd in [
        vec!["dist"],
        vec!["barycenter"],
        vec!["embed"],
        vec!["widths"],
        vec!["check", "type2"],
        vec!["gen", "random"],
        vec!["suite", "paper-acceptance"],
    ] {
        let mut args = cmd.clone();
        args.push("--help");
        let out = mtree(&args);
        assert_eq!(code(&out), 0, "{cmd:?}");
        assert!(stdout(&out).contains("Usage: mtree"), "{cmd:?}");
    }
}
