//! Writing reports, with an optional timestamp.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::commands::CliError;

#[derive(Serialize)]
struct Stamped<'a, T: Serialize> {
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_at: Option<String>,
    #[serde(flatten)]
    report: &'a T,
}

pub fn timestamp(suppress: bool) -> Option<String> {
    (!suppress).then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true))
}

pub struct OutDir {
    dir: PathBuf,
    stamp: Option<String>,
}

impl OutDir {
    pub fn create(dir: &Path, no_timestamp: bool) -> Result<Self, CliError> {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::user(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            stamp: timestamp(no_timestamp),
        })
    }

    pub fn json<T: Serialize>(&self, name: &str, report: &T) -> Result<PathBuf, CliError> {
        let stamped = Stamped {
            generated_at: self.stamp.clone(),
            report,
        };
        let mut text = serde_json::to_string_pretty(&stamped).map_err(CliError::internal)?;
        text.push('\n');
        self.text(name, &text)
    }

    /// Plain text with an optional leading `# generated ...` line.
    pub fn stamped_text(&self, name: &str, body: &str) -> Result<PathBuf, CliError> {
        match &self.stamp {
            Some(t) => self.text(name, &format!("# generated {t}\n{body}")),
            None => self.text(name, body),
        }
    }

    pub fn text(&self, name: &str, body: &str) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        fs::write(&path, body)
            .map_err(|e| CliError::internal(format!("writing {}: {e}", path.display())))?;
        Ok(path)
    }
}
