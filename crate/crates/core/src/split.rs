//! Deterministic stratified Stage-1/Stage-2 splitter.
//!
//! Within each stratum the task ids are sorted lexicographically, permuted
//! with a ChaCha8 generator seeded directly from `SplitSpec::seed`, and the
//! first `ceil(fraction * n)` ids go to Stage 1. The split is a pure
//! function of the id *set* and the spec: input order never matters.

use std::collections::{BTreeMap, BTreeSet};

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use crate::error::{Error, Result};
use crate::rng;

/// Profiling-split request: fraction of each stratum sent to Stage 1.
#[derive(Debug, Clone)]
pub struct SplitSpec {
    pub fraction: f64,
    pub seed: u64,
    /// Total mapping task id -> stratum label.
    pub stratum_of: BTreeMap<String, String>,
}

impl SplitSpec {
    pub const DEFAULT_FRACTION: f64 = 0.2;
    pub const DEFAULT_SEED: u64 = 10;

    pub fn new(stratum_of: BTreeMap<String, String>) -> Self {
        Self {
            fraction: Self::DEFAULT_FRACTION,
            seed: Self::DEFAULT_SEED,
            stratum_of,
        }
    }
}

/// Number of Stage-1 slots for a stratum of size `n`: `ceil(fraction * n)`,
/// with a relative epsilon so an integral product computed a hair high in
/// floating point does not round up an extra slot.
fn stage1_count(fraction: f64, n: usize) -> usize {
    let t = fraction * n as f64;
    let k = (t - t.abs() * 1e-12).ceil() as usize;
    k.min(n)
}

/// Split `task_ids` into (stage1, stage2). Every id must have a stratum.
pub fn stratified_split(
    task_ids: &[String],
    spec: &SplitSpec,
) -> Result<(BTreeSet<String>, BTreeSet<String>)> {
    if !(0.0 < spec.fraction && spec.fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "split fraction must be in (0, 1), got {}",
            spec.fraction
        )));
    }
    let mut by_stratum: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for id in task_ids {
        let stratum = spec
            .stratum_of
            .get(id)
            .ok_or_else(|| Error::InvalidInput(format!("task id {id:?} has no stratum")))?;
        by_stratum.entry(stratum).or_default().insert(id);
    }

    let mut stage1 = BTreeSet::new();
    let mut stage2 = BTreeSet::new();
    for (_stratum, ids) in by_stratum {
        // BTreeSet iteration is the lexicographic sort.
        let mut ordered: Vec<&str> = ids.into_iter().collect();
        let mut prng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng::shuffle(&mut prng, &mut ordered);
        let k = stage1_count(spec.fraction, ordered.len());
        for (i, id) in ordered.into_iter().enumerate() {
            if i < k {
                stage1.insert(id.to_string());
            } else {
                stage2.insert(id.to_string());
            }
        }
    }
    Ok((stage1, stage2))
}
