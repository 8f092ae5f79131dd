use std::fs;
use std::path::Path;

use metric_tree::suite::{run_criterion, Fixtures};

fn bundled_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures"))
}

#[test]
fn fixture_dir_matches_bundled() {
    let loaded = Fixtures::load(bundled_dir()).unwrap();
    let bundled = Fixtures::bundled();
    assert_eq!(loaded.c4, bundled.c4);
    assert_eq!(loaded.square, bundled.square);
    assert_eq!(loaded.tree_metrics, bundled.tree_metrics);
    assert_eq!(loaded.tripod.to_spec(), bundled.tripod.to_spec());
}

#[test]
fn empty_fixture_dir_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    assert!(Fixtures::load(dir.path()).is_err());
}

#[test]
fn square_labelled_as_tree_fails_four_point() {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(bundled_dir()).unwrap() {
        let entry = entry.unwrap();
        fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    fs::copy(
        bundled_dir().join("square.json"),
        dir.path().join("tree_square.json"),
    )
    .unwrap();
    let fx = Fixtures::load(dir.path()).unwrap();
    let r = run_criterion(1, &fx, 42).unwrap();
    assert!(!r.passed);
    assert!(r.detail.contains("tree_square"), "{}", r.detail);
}
