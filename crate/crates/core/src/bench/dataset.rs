use std::fs;
use std::path::{Path, PathBuf};

use glob::Pattern;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DatasetEntry {
    /// File stem, e.g. `mdb002`.
    pub id: String,
    pub path: PathBuf,
}

fn is_pgm(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("pgm"))
}

/// Lists `.pgm` files in `dir` (not recursive), sorted by id.
///
/// `filter` is a shell glob tested against both the file name and the stem,
/// so `mdb0*` and `mdb0*.pgm` behave the same.
pub fn scan_dataset(dir: &Path, filter: Option<&str>) -> Result<Vec<DatasetEntry>> {
    let pattern = filter
        .map(|f| Pattern::new(f).map_err(|e| Error::Config(format!("bad filter `{f}`: {e}"))))
        .transpose()?;
    if !dir.is_dir() {
        return Err(Error::Dataset(format!(
            "input directory {} does not exist",
            dir.display()
        )));
    }
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        if !path.is_file() || !is_pgm(&path) {
            continue;
        }
        let (Some(name), Some(stem)) = (
            path.file_name().and_then(|n| n.to_str()),
            path.file_stem().and_then(|n| n.to_str()),
        ) else {
            continue;
        };
        if let Some(p) = &pattern {
            if !p.matches(name) && !p.matches(stem) {
                continue;
            }
        }
        out.push(DatasetEntry {
            id: stem.to_string(),
            path,
        });
    }
    if out.is_empty() {
        return Err(Error::Dataset(format!(
            "no PGM files matched in {}",
            dir.display()
        )));
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn touch(dir: &Path, name: &str) {
        fs::write(dir.join(name), b"P2 1 1 255 0").unwrap();
    }

    #[test]
    fn lexicographic_and_pgm_only() {
        let tmp = tempfile::tempdir().unwrap();
        touch(tmp.path(), "mdb002.pgm");
        touch(tmp.path(), "mdb001.pgm");
        touch(tmp.path(), "notes.txt");
        fs::create_dir(tmp.path().join("sub.pgm")).unwrap();
        let ids: Vec<String> = scan_dataset(tmp.path(), None)
            .unwrap()
            .into_iter()
            .map(|e| e.id)
            .collect();
        assert_eq!(ids, ["mdb001", "mdb002"]);
    }

    #[test]
    fn glob_filter() {
        let tmp = tempfile::tempdir().unwrap();
        touch(tmp.path(), "mdb002.pgm");
        touch(tmp.path(), "mdb171.pgm");
        for f in ["mdb0*", "mdb0*.pgm"] {
            let ids: Vec<String> = scan_dataset(tmp.path(), Some(f))
                .unwrap()
                .into_iter()
                .map(|e| e.id)
                .collect();
            assert_eq!(ids, ["mdb002"]);
        }
        assert!(matches!(
            scan_dataset(tmp.path(), Some("zzz*")),
            Err(Error::Dataset(_))
        ));
        assert!(matches!(
            scan_dataset(tmp.path(), Some("[")),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn missing_directory() {
        assert!(matches!(
            scan_dataset(Path::new("/definitely/not/here"), None),
            Err(Error::Dataset(_))
        ));
    }
}
