//! Artifact directories. A run writes into a hidden staging directory that is
//! moved into place only after the whole pipeline succeeded.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "LRSPREAD_OUT";

pub fn default_out_dir(subcommand: &str) -> PathBuf {
    let root = std::env::var_os(OUT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("runs"));
    root.join(subcommand)
}

pub struct Staging {
    target: PathBuf,
    dir: PathBuf,
    done: bool,
}

impl Staging {
    pub fn new(target: &Path) -> anyhow::Result<Self> {
        let parent = match target.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        let name = target
            .file_name()
            .with_context(|| format!("output path {} has no final component", target.display()))?;
        let dir = parent.join(format!(".{}.partial-{}", name.to_string_lossy(), std::process::id()));
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Staging { target: target.to_path_buf(), dir, done: false })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    /// Writes `manifest.json` and moves every staged file into the target directory.
    pub fn commit<M: Serialize>(mut self, manifest: &M) -> anyhow::Result<Vec<String>> {
        let mut names: Vec<String> = fs::read_dir(&self.dir)?
            .map(|e| e.map(|e| e.file_name().to_string_lossy().into_owned()))
            .collect::<Result<_, _>>()?;
        names.push("manifest.json".into());
        names.sort();
        let mut value = serde_json::to_value(manifest)?;
        value["artifacts"] = serde_json::to_value(&names)?;
        let mut text = serde_json::to_string_pretty(&value)?;
        text.push('\n');
        fs::write(self.dir.join("manifest.json"), text)?;

        fs::create_dir_all(&self.target).with_context(|| format!("creating {}", self.target.display()))?;
        for name in &names {
            fs::rename(self.dir.join(name), self.target.join(name))
                .with_context(|| format!("moving {name} into {}", self.target.display()))?;
        }
        fs::remove_dir(&self.dir).ok();
        self.done = true;
        Ok(names)
    }
}

impl Drop for Staging {
    fn drop(&mut self) {
        if !self.done {
            fs::remove_dir_all(&self.dir).ok();
        }
    }
}
