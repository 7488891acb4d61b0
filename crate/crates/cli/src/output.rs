//! Diff-stable artifact writers: comma-separated values with a header row,
//! "." decimals, fixed column orders, and a `# manifest:` comment row on
//! top. No wall-clock state ever reaches an artifact.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

/// Write an artifact: manifest row, optional extra `#` comment rows, the
/// header row, then data rows.
pub fn write_artifact(
    path: &Path,
    manifest_hash: &str,
    extra_comments: &[String],
    header: &str,
    rows: &[String],
) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut text = format!("# manifest: {manifest_hash}\n");
    for c in extra_comments {
        text.push_str(&format!("# {c}\n"));
    }
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Embedded manifest hash of an artifact written by [`write_artifact`].
pub fn read_artifact_hash(path: &Path) -> Result<String> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let first = text.lines().next().unwrap_or("");
    first
        .strip_prefix("# manifest: ")
        .map(|h| h.trim().to_string())
        .ok_or_else(|| anyhow::anyhow!("{}: missing manifest header row", path.display()))
}

/// Data rows of an artifact (comments and header skipped).
pub fn read_artifact_rows(path: &Path) -> Result<Vec<Vec<String>>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|f| f.to_string()).collect())
        .collect())
}

/// Fixed-precision float field.
pub fn num(v: f64) -> String {
    format!("{v:.6}")
}

/// Optional float field; empty when undefined.
pub fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}
