pub mod ingest;
pub mod metrics;
pub mod profile;
pub mod report;
pub mod simulate;
pub mod split;
pub mod stats;
pub mod tag;

use std::fs::File;
use std::path::Path;

use anyhow::{Context, Result};
use decision_bench_core::record::{parse_records_gz, PoolRegistry, TaskRecord};
use decision_bench_core::tagger::{Tagger, TaggerConfig};

pub fn load_records(path: &Path) -> Result<Vec<TaskRecord>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    parse_records_gz(file).with_context(|| format!("parsing {}", path.display()))
}

pub fn load_tagger(config_path: Option<&Path>) -> Result<Tagger> {
    let cfg = match config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<TaggerConfig>(&text)
                .with_context(|| format!("parsing {}", path.display()))?
        }
        None => TaggerConfig::default(),
    };
    Ok(Tagger::new(cfg)?)
}

pub fn load_pool(path: Option<&Path>) -> Result<PoolRegistry> {
    match path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let registry: PoolRegistry = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            Ok(PoolRegistry::new(registry.entries)?)
        }
        None => Ok(PoolRegistry::reference()),
    }
}
