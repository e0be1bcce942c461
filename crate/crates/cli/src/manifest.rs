use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub versions: String,
    pub outputs: Vec<String>,
    pub wall_time: f64,
}

/// Collects output files for one command and writes them plus the manifest.
pub struct Outputs {
    dir: PathBuf,
    files: Vec<String>,
}

impl Outputs {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self { dir: dir.to_path_buf(), files: Vec::new() })
    }

    pub fn write(&mut self, name: &str, body: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        self.files.push(path.display().to_string());
        Ok(path)
    }

    pub fn write_bytes(&mut self, name: &str, body: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        self.files.push(path.display().to_string());
        Ok(path)
    }

    pub fn finish(self, command: &str, parameters: Value, wall_time: f64) -> Result<()> {
        let parameters = match parameters {
            Value::Object(m) => m.into_iter().collect(),
            other => BTreeMap::from([("value".to_string(), other)]),
        };
        let m = RunManifest {
            command: command.into(),
            parameters,
            versions: format!("critkdv {}", env!("CARGO_PKG_VERSION")),
            outputs: self.files,
            wall_time,
        };
        let path = self.dir.join(format!("{command}.manifest.json"));
        fs::write(&path, serde_json::to_string_pretty(&m)? + "\n")
            .with_context(|| format!("writing {}", path.display()))
    }
}
