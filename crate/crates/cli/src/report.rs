//! Report envelope and output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use mldeg_core::model::{parse_system, ParsedSystem, RandomSeed};
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

/// Seed used when neither the flag nor the document provides one.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedSource {
    Flag,
    Document,
    Default,
}

/// A parsed input file together with its digest.
pub struct Input {
    pub path: PathBuf,
    pub sha256: String,
    pub parsed: ParsedSystem,
}

impl Input {
    pub fn read(path: &Path) -> Result<Input, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let sha256 = format!("{:x}", Sha256::digest(&bytes));
        let text = String::from_utf8(bytes).map_err(|_| CliError::Io(format!("{}: not UTF-8", path.display())))?;
        let parsed = parse_system(&text)?;
        Ok(Input {
            path: path.to_path_buf(),
            sha256,
            parsed,
        })
    }

    pub fn describe(&self) -> Value {
        json!({
            "path": self.path.display().to_string(),
            "sha256": self.sha256,
            "n": self.parsed.system.n(),
            "k": self.parsed.system.k(),
        })
    }
}

/// `--seed` beats a seed stored in the document, which beats the default.
pub fn resolve_seed(flag: Option<u64>, document: Option<RandomSeed>) -> (RandomSeed, SeedSource) {
    match (flag, document) {
        (Some(s), _) => (RandomSeed(s), SeedSource::Flag),
        (None, Some(s)) => (s, SeedSource::Document),
        (None, None) => (RandomSeed(DEFAULT_SEED), SeedSource::Default),
    }
}

/// Builds the common envelope: command, input, seed and optional config,
/// followed by the command's own fields.
pub struct Report {
    fields: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, input: Option<&Input>, seed: RandomSeed, source: SeedSource) -> Report {
        let mut fields = Map::new();
        fields.insert("command".into(), json!(command));
        if let Some(input) = input {
            fields.insert("input".into(), input.describe());
        }
        fields.insert("seed".into(), json!(seed.0));
        fields.insert("seed_source".into(), json!(source));
        Report { fields }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) -> &mut Report {
        let v = serde_json::to_value(value).expect("report fields serialize");
        self.fields.insert(key.to_string(), v);
        self
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.fields).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}
