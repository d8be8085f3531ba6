//! Run artifacts: rendered in memory, then written to a staging directory
//! and moved into place, so an interrupted run leaves no partial tables.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub const MANIFEST: &str = "manifest.txt";

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunArtifacts {
    pub scenario: String,
    pub config: String,
    /// `(file name, contents)` in emission order.
    pub files: Vec<(String, String)>,
    pub notes: Vec<String>,
}

impl RunArtifacts {
    pub fn new(scenario: &str, config: String) -> Self {
        Self { scenario: scenario.into(), config, files: Vec::new(), notes: Vec::new() }
    }

    /// Adds a file and returns its hash (for plot provenance).
    pub fn add(&mut self, name: &str, contents: String) -> String {
        let hash = sha256_hex(contents.as_bytes());
        self.files.push((name.into(), contents));
        hash
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn file(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_str())
    }

    pub fn manifest(&self) -> String {
        let mut m = format!("# weaktrace {}\nscenario = {}\n\n[config]\n", env!("CARGO_PKG_VERSION"), self.scenario);
        m.push_str(&self.config);
        m.push_str("\n[files]\n");
        for (name, contents) in &self.files {
            m.push_str(&format!("{}  {}\n", sha256_hex(contents.as_bytes()), name));
        }
        if !self.notes.is_empty() {
            m.push_str("\n[notes]\n");
            for n in &self.notes {
                m.push_str(&format!("- {n}\n"));
            }
        }
        m
    }

    /// Writes `<root>/<scenario>/` atomically (staging directory + rename).
    /// An existing scenario directory is replaced only if it holds a manifest.
    pub fn write(&self, root: &Path) -> std::io::Result<PathBuf> {
        fs::create_dir_all(root)?;
        let target = root.join(&self.scenario);
        if target.exists() && !target.join(MANIFEST).is_file() {
            return Err(std::io::Error::new(
                std::io::ErrorKind::AlreadyExists,
                format!("{} exists and is not a weaktrace output directory", target.display()),
            ));
        }
        let staging = tempfile::Builder::new().prefix(".staging-").tempdir_in(root)?;
        for (name, contents) in &self.files {
            fs::write(staging.path().join(name), contents)?;
        }
        fs::write(staging.path().join(MANIFEST), self.manifest())?;
        if target.exists() {
            fs::remove_dir_all(&target)?;
        }
        fs::rename(staging.path(), &target)?;
        Ok(target)
    }
}

/// Checks every `[files]` entry of a written manifest against the disk.
/// Returns the names that are missing or whose hash differs.
pub fn verify(dir: &Path) -> std::io::Result<Vec<String>> {
    let manifest = fs::read_to_string(dir.join(MANIFEST))?;
    let mut bad = Vec::new();
    let mut in_files = false;
    for line in manifest.lines() {
        if line.starts_with('[') {
            in_files = line == "[files]";
            continue;
        }
        if !in_files || line.is_empty() {
            continue;
        }
        let Some((hash, name)) = line.split_once("  ") else { continue };
        match fs::read(dir.join(name)) {
            Ok(bytes) if sha256_hex(&bytes) == hash => {}
            _ => bad.push(name.to_string()),
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn write_replace_and_verify() {
        let root = tempfile::tempdir().unwrap();
        let mut run = RunArtifacts::new("demo", "eps = 0.001\n".into());
        run.add("a.csv", "x\n1\n".into());
        run.note("hello");
        let dir = run.write(root.path()).unwrap();
        assert!(verify(&dir).unwrap().is_empty());
        let manifest = fs::read_to_string(dir.join(MANIFEST)).unwrap();
        assert!(manifest.contains("  a.csv\n") && manifest.contains("- hello"));

        run.files[0].1 = "x\n2\n".into();
        run.write(root.path()).unwrap();
        assert_eq!(fs::read_to_string(dir.join("a.csv")).unwrap(), "x\n2\n");
        fs::write(dir.join("a.csv"), "tampered").unwrap();
        assert_eq!(verify(&dir).unwrap(), vec!["a.csv".to_string()]);
        // only the scenario directory remains, no staging leftovers
        assert_eq!(fs::read_dir(root.path()).unwrap().count(), 1);
    }

    #[test]
    fn refuses_foreign_directory() {
        let root = tempfile::tempdir().unwrap();
        fs::create_dir(root.path().join("demo")).unwrap();
        let run = RunArtifacts::new("demo", String::new());
        assert!(run.write(root.path()).is_err());
    }
}
