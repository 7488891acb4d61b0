//! Run manifest: binds every artifact in an output directory to the exact
//! inputs and tagger version that produced it.
//!
//! Each artifact file carries a `# manifest: <hash>` header row, where the
//! hash covers the tagger version plus the content hashes of the inputs
//! that artifact was derived from. `report` recomputes the expected hash
//! per artifact from the manifest's current input set and refuses to run
//! over stale files.
//!
//! The recorded timestamp follows the reproducible-builds convention:
//! `SOURCE_DATE_EPOCH` when set, zero otherwise, so re-runs on unchanged
//! inputs are byte-identical.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MANIFEST_FILE: &str = "run_manifest.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub tagger_version: String,
    /// Logical input name (records, stage1, pool, labels) -> content sha256.
    pub inputs: BTreeMap<String, String>,
    /// Flag values of the most recent invocation per subcommand.
    pub flags: BTreeMap<String, BTreeMap<String, String>>,
    pub out_dir: String,
    pub created_unix: u64,
}

impl Manifest {
    pub fn load_or_new(out_dir: &Path, tagger_version: &str) -> Result<Self> {
        let path = out_dir.join(MANIFEST_FILE);
        if path.exists() {
            let text = fs::read_to_string(&path)
                .with_context(|| format!("reading {}", path.display()))?;
            let mut m: Manifest = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            m.tagger_version = tagger_version.to_string();
            return Ok(m);
        }
        Ok(Self {
            tagger_version: tagger_version.to_string(),
            inputs: BTreeMap::new(),
            flags: BTreeMap::new(),
            out_dir: out_dir
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| ".".to_string()),
            created_unix: source_date_epoch(),
        })
    }

    pub fn record_input(&mut self, name: &str, sha: String) {
        self.inputs.insert(name.to_string(), sha);
    }

    pub fn record_input_file(&mut self, name: &str, path: &Path) -> Result<String> {
        let sha = sha256_file(path)?;
        self.record_input(name, sha.clone());
        Ok(sha)
    }

    pub fn record_flags(&mut self, subcommand: &str, flags: &[(&str, String)]) {
        self.flags.insert(
            subcommand.to_string(),
            flags.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        );
    }

    /// Provenance hash for an artifact derived from the named inputs.
    pub fn artifact_hash(&self, input_names: &[&str]) -> String {
        let mut hasher = Sha256::new();
        hasher.update(b"tagger=");
        hasher.update(self.tagger_version.as_bytes());
        for name in input_names {
            hasher.update(b";");
            hasher.update(name.as_bytes());
            hasher.update(b"=");
            if let Some(sha) = self.inputs.get(*name) {
                hasher.update(sha.as_bytes());
            }
        }
        let digest = hasher.finalize();
        hex(&digest[..8])
    }

    pub fn save(&self, out_dir: &Path) -> Result<()> {
        let path = out_dir.join(MANIFEST_FILE);
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

fn source_date_epoch() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(0)
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(sha256_hex(&bytes))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Which logical inputs each artifact is derived from; `report` uses this
/// to recompute expected header hashes.
pub fn artifact_inputs(file_name: &str) -> &'static [&'static str] {
    match file_name {
        "rollup.csv" | "tagged_steps.csv" | "task_skills.csv" | "mixedlm.txt" | "hv_ci.csv" => {
            &["records"]
        }
        "fidelity_per_cond.csv" | "delegation_fidelity_by_cell.csv" | "ceiling_per_agent.csv" => {
            &["records", "stage1"]
        }
        "vendor_self_pref.csv" => &["records", "pool"],
        "emergent_audit.csv" => &["labels"],
        "validation_report.txt" => &["records", "pool"],
        "stage1_ids.txt" | "stage2_ids.txt" => &["records"],
        _ => &[],
    }
}
