//! The matroid files under `corpus/matroids` mirror the in-code corpus.
//! Run with `MATROID_FORGE_WRITE_CORPUS=1` to regenerate them.

use std::fs;
use std::path::PathBuf;

use matroid_forge::corpus;
use matroid_forge::format::{emit_matroid_file, parse_matroid_file, MatroidDescription};

fn matroid_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join("matroids")
}

#[test]
fn matroid_files_match_corpus() {
    let dir = matroid_dir();
    let write = std::env::var_os("MATROID_FORGE_WRITE_CORPUS").is_some();
    if write {
        fs::create_dir_all(&dir).unwrap();
    }
    let entries = corpus::corpus();
    for e in &entries {
        let text = emit_matroid_file(&e.name, &MatroidDescription::Finite(e.spec.clone()));
        let path = dir.join(format!("{}.txt", e.name));
        if write {
            fs::write(&path, &text).unwrap();
        }
        let on_disk = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        assert_eq!(on_disk, text, "{} is stale", path.display());
        let parsed = parse_matroid_file(&on_disk).unwrap();
        assert_eq!(parsed.description, MatroidDescription::Finite(e.spec.clone()));
    }
    let count = fs::read_dir(&dir).unwrap().count();
    assert_eq!(count, entries.len(), "stray files in {}", dir.display());
}
