//! The checked-in fixture store: every record must reload, match its
//! recomputed flags and satisfy its predicate.

use std::path::{Path, PathBuf};

use tricover::lab::{FixturePredicate, InstanceRecord};

fn records(dir: &Path, out: &mut Vec<PathBuf>) {
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            records(&path, out);
        } else if path.extension().is_some_and(|e| e == "json") {
            out.push(path);
        }
    }
}

#[test]
fn stored_fixtures_verify() {
    let store = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let mut paths = Vec::new();
    records(&store, &mut paths);
    let mut predicates = Vec::new();
    for path in &paths {
        let record = InstanceRecord::load(path).unwrap();
        record.verify().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(record.path_in(&store), *path);
        predicates.push(record.predicate.parse::<FixturePredicate>().unwrap());
    }
    predicates.sort();
    assert_eq!(
        predicates,
        [
            FixturePredicate::MinimalNotSparse,
            FixturePredicate::SparseMinimalMu4,
            FixturePredicate::ShellableNotAmple,
            FixturePredicate::Minimum
        ]
    );
}
