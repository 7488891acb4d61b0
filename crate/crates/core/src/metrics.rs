//! Per-cell metric suite: quality/cost/latency rollups, delegation
//! fidelity@k, vendor self-preference, the counterfactual-delegation
//! ceiling, Pareto frontiers, and 2D hypervolume.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::{rank_peers, PoolStats};
use crate::record::{
    count_call_model, CellKey, Delegation, PoolRegistry, TaskRecord,
};
use crate::tagger::{SkillId, Tagger};

/// Aggregates for one (agent, benchmark, condition) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub agent: String,
    pub benchmark: crate::record::Benchmark,
    pub condition: crate::record::Condition,
    pub mean_q: f64,
    pub mean_cost: f64,
    pub mean_latency_s: f64,
    pub p90_latency_s: f64,
    /// Mean `call_model` invocations per task.
    pub delegation_rate: f64,
    pub n_tasks: usize,
}

/// Nearest-rank p90: smallest value with at least 90% of the sample at or
/// below it.
fn p90(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    let rank = ((0.9 * values.len() as f64).ceil() as usize).clamp(1, values.len());
    values[rank - 1]
}

/// One summary per populated cell, in cell-key order.
pub fn rollup(records: &[TaskRecord]) -> Vec<CellSummary> {
    let mut cells: BTreeMap<CellKey, Vec<&TaskRecord>> = BTreeMap::new();
    for r in records {
        cells.entry(CellKey::of(r)).or_default().push(r);
    }
    cells
        .into_iter()
        .map(|(key, rs)| {
            let n = rs.len() as f64;
            let mut latencies: Vec<f64> = rs.iter().map(|r| r.latency_s).collect();
            CellSummary {
                agent: key.agent,
                benchmark: key.benchmark,
                condition: key.condition,
                mean_q: rs.iter().map(|r| r.quality).sum::<f64>() / n,
                mean_cost: rs.iter().map(|r| r.cost_usd).sum::<f64>() / n,
                mean_latency_s: rs.iter().map(|r| r.latency_s).sum::<f64>() / n,
                p90_latency_s: p90(&mut latencies),
                delegation_rate: rs.iter().map(|r| count_call_model(r) as f64).sum::<f64>() / n,
                n_tasks: rs.len(),
            }
        })
        .collect()
}

/// Routing-fidelity outcome. `n_ranked` is the denominator: delegations
/// whose pre-call prefix had a dominant skill and a non-empty peer ranking.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityResult {
    pub k: usize,
    pub hits: usize,
    pub n_ranked: usize,
    pub n_delegations: usize,
    pub share: f64,
}

/// Share of delegations whose chosen peer ranks in the top-k by Stage-1
/// pass rate on the pre-call dominant skill. Unrankable delegations (no
/// dominant skill, or no exercising peer) leave the denominator; an empty
/// denominator is reported as absent.
pub fn fidelity_at_k(
    delegations: &[Delegation],
    records: &[TaskRecord],
    pool_stats: &PoolStats,
    k: usize,
    tagger: &Tagger,
) -> Option<FidelityResult> {
    if delegations.is_empty() || k == 0 {
        return None;
    }
    let index: BTreeMap<(CellKey, &str), &TaskRecord> = records
        .iter()
        .map(|r| ((CellKey::of(r), r.task_id.as_str()), r))
        .collect();
    let mut hits = 0usize;
    let mut n_ranked = 0usize;
    for d in delegations {
        let Some(record) = index.get(&(d.cell.clone(), d.task_id.as_str())) else {
            continue;
        };
        let Some(skill) = tagger.dominant_skill_before(record, d.step_index) else {
            continue;
        };
        let ranking = rank_peers(skill, pool_stats, &d.cell.agent);
        if ranking.is_empty() {
            continue;
        }
        n_ranked += 1;
        let top = &ranking[..k.min(ranking.len())];
        if top.iter().any(|peer| peer == &d.peer) {
            hits += 1;
        }
    }
    if n_ranked == 0 {
        return None;
    }
    Some(FidelityResult {
        k,
        hits,
        n_ranked,
        n_delegations: delegations.len(),
        share: hits as f64 / n_ranked as f64,
    })
}

/// Same-vendor delegation behavior for one orchestrator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfPreference {
    pub orchestrator: String,
    pub vendor: Option<String>,
    pub n: usize,
    pub same_vendor: usize,
    pub observed_share: f64,
    /// Pool-composition chance rate (k-1)/(N-1); absent when the
    /// orchestrator is not a pool member.
    pub chance: Option<f64>,
    /// observed / chance; undefined for singleton-vendor orchestrators.
    pub ratio: Option<f64>,
}

/// Per-orchestrator observed same-vendor share against the
/// pool-composition chance rate.
pub fn self_preference(
    delegations: &[Delegation],
    registry: &PoolRegistry,
) -> Vec<SelfPreference> {
    let mut by_orch: BTreeMap<&str, Vec<&Delegation>> = BTreeMap::new();
    for d in delegations {
        by_orch.entry(d.cell.agent.as_str()).or_default().push(d);
    }
    by_orch
        .into_iter()
        .map(|(orch, ds)| {
            let vendor = registry.vendor_of(orch).map(|v| v.to_string());
            let same_vendor = match &vendor {
                Some(v) => ds
                    .iter()
                    .filter(|d| registry.vendor_of(&d.peer) == Some(v.as_str()))
                    .count(),
                None => 0,
            };
            let n = ds.len();
            let observed_share = same_vendor as f64 / n as f64;
            let chance = vendor.as_ref().map(|v| {
                (registry.vendor_count(v) as f64 - 1.0) / (registry.len() as f64 - 1.0)
            });
            let ratio = match chance {
                Some(c) if c > 0.0 => Some(observed_share / c),
                _ => None,
            };
            SelfPreference {
                orchestrator: orch.to_string(),
                vendor,
                n,
                same_vendor,
                observed_share,
                chance,
                ratio,
            }
        })
        .collect()
}

/// Realization rate for the counterfactual ceiling: the delegated-to peer
/// answers at `r` times its Stage-1 pass rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CeilingConfig {
    pub realization_rate: f64,
}

impl Default for CeilingConfig {
    fn default() -> Self {
        Self { realization_rate: 1.0 }
    }
}

/// Per-cell ceiling outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CeilingRow {
    pub agent: String,
    pub benchmark: crate::record::Benchmark,
    pub realization_rate: f64,
    pub n_tasks: usize,
    pub actual: f64,
    pub ceiling: f64,
    pub gap: f64,
}

/// Counterfactual-delegation ceiling over blind cells: each task's
/// most-optimistic outcome is `max(q, r * p_best)` where `p_best` is the
/// top-ranked peer's pass rate on the task's dominant skill; tasks with no
/// dominant skill or no ranked peer contribute their own quality.
pub fn counterfactual_ceiling(
    blind_records: &[TaskRecord],
    pool_stats: &PoolStats,
    cfg: CeilingConfig,
    tagger: &Tagger,
) -> Result<Vec<CeilingRow>> {
    if !(cfg.realization_rate > 0.0 && cfg.realization_rate <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "realization rate must be in (0, 1], got {}",
            cfg.realization_rate
        )));
    }
    let mut cells: BTreeMap<(String, crate::record::Benchmark), Vec<&TaskRecord>> =
        BTreeMap::new();
    for r in blind_records {
        cells.entry((r.agent.clone(), r.benchmark)).or_default().push(r);
    }
    Ok(cells
        .into_iter()
        .map(|((agent, benchmark), rs)| {
            let n = rs.len() as f64;
            let actual = rs.iter().map(|r| r.quality).sum::<f64>() / n;
            let ceiling = rs
                .iter()
                .map(|r| {
                    let p_best = tagger
                        .dominant_skill_of_record(r)
                        .and_then(|skill| {
                            rank_peers(skill, pool_stats, &r.agent)
                                .first()
                                .map(|peer| pool_stats[&(peer.clone(), skill)].pass_rate)
                        });
                    match p_best {
                        Some(p) => r.quality.max(cfg.realization_rate * p),
                        None => r.quality,
                    }
                })
                .sum::<f64>()
                / n;
            CeilingRow {
                agent,
                benchmark,
                realization_rate: cfg.realization_rate,
                n_tasks: rs.len(),
                actual,
                ceiling,
                gap: ceiling - actual,
            }
        })
        .collect())
}

/// A candidate point for frontier / hypervolume work: quality (higher is
/// better), cost (lower is better), optional latency (lower is better).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontierPoint {
    pub q: f64,
    pub cost: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latency: Option<f64>,
}

impl FrontierPoint {
    pub fn new(q: f64, cost: f64) -> Self {
        Self { q, cost, latency: None }
    }

    pub fn with_latency(q: f64, cost: f64, latency: f64) -> Self {
        Self { q, cost, latency: Some(latency) }
    }

    /// True iff `other` dominates `self`: at least as good on every axis,
    /// strictly better on one.
    fn dominated_by(&self, other: &FrontierPoint) -> bool {
        let ge_q = other.q >= self.q;
        let le_cost = other.cost <= self.cost;
        let (le_lat, strict_lat) = match (self.latency, other.latency) {
            (Some(a), Some(b)) => (b <= a, b < a),
            _ => (true, false),
        };
        let strict = other.q > self.q || other.cost < self.cost || strict_lat;
        ge_q && le_cost && le_lat && strict
    }
}

/// Indices of the non-dominated subset, sorted by quality descending
/// (ties by cost ascending, then input order). All points must agree on
/// whether the latency axis is present.
pub fn pareto_frontier(points: &[FrontierPoint]) -> Result<Vec<usize>> {
    if points.is_empty() {
        return Err(Error::InvalidInput("pareto_frontier needs at least one point".into()));
    }
    let with_latency = points[0].latency.is_some();
    if points.iter().any(|p| p.latency.is_some() != with_latency) {
        return Err(Error::InvalidInput(
            "all frontier points must agree on the latency axis".into(),
        ));
    }
    let mut frontier: Vec<usize> = (0..points.len())
        .filter(|&i| !points.iter().any(|other| points[i].dominated_by(other)))
        .collect();
    frontier.sort_by(|&a, &b| {
        points[b]
            .q
            .total_cmp(&points[a].q)
            .then_with(|| points[a].cost.total_cmp(&points[b].cost))
            .then_with(|| a.cmp(&b))
    });
    Ok(frontier)
}

/// Cost-reference construction for hypervolume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HvConfig {
    pub cost_ref_multiplier: f64,
}

impl Default for HvConfig {
    fn default() -> Self {
        Self { cost_ref_multiplier: 1.05 }
    }
}

impl HvConfig {
    /// Reference cost: multiplier times the maximum observed mean cost.
    pub fn cost_ref(&self, max_observed_mean_cost: f64) -> f64 {
        self.cost_ref_multiplier * max_observed_mean_cost
    }
}

/// 2D Pareto hypervolume in (quality, -cost) space: the area of the union
/// over points of rectangles `[0, q_i] x [cost_i, cost_ref]`. Points
/// costlier than the reference contribute nothing.
pub fn hypervolume_2d(points: &[(f64, f64)], cost_ref: f64) -> f64 {
    let mut eligible: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|(_, cost)| *cost <= cost_ref)
        .collect();
    if eligible.is_empty() {
        return 0.0;
    }
    eligible.sort_by(|a, b| a.1.total_cmp(&b.1));

    let mut area = 0.0;
    let mut best_q: f64 = 0.0;
    let mut i = 0;
    while i < eligible.len() {
        let cost = eligible[i].1;
        // Absorb every point at this exact cost before opening the segment.
        while i < eligible.len() && eligible[i].1 == cost {
            best_q = best_q.max(eligible[i].0);
            i += 1;
        }
        let next_cost = if i < eligible.len() { eligible[i].1 } else { cost_ref };
        area += (next_cost.min(cost_ref) - cost) * best_q;
    }
    area
}

/// Per-skill quality lift of an aware condition over blind, on tasks
/// paired by (agent, benchmark, task id) and bucketed by their
/// blind-condition dominant skill.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SkillLiftReport {
    /// skill -> (mean aware q - mean blind q, paired task count).
    pub lifts: BTreeMap<SkillId, (f64, usize)>,
    pub paired: usize,
    pub blind_only: usize,
    pub aware_only: usize,
    /// Paired tasks whose blind trajectory had no dominant skill.
    pub unbucketed: usize,
}

pub fn per_skill_lift(
    blind_records: &[TaskRecord],
    aware_records: &[TaskRecord],
    tagger: &Tagger,
) -> SkillLiftReport {
    type Key<'a> = (&'a str, crate::record::Benchmark, &'a str);
    let blind: BTreeMap<Key, &TaskRecord> = blind_records
        .iter()
        .map(|r| ((r.agent.as_str(), r.benchmark, r.task_id.as_str()), r))
        .collect();
    let aware: BTreeMap<Key, &TaskRecord> = aware_records
        .iter()
        .map(|r| ((r.agent.as_str(), r.benchmark, r.task_id.as_str()), r))
        .collect();

    let mut report = SkillLiftReport::default();
    let mut sums: BTreeMap<SkillId, (f64, f64, usize)> = BTreeMap::new();
    for (key, b) in &blind {
        let Some(a) = aware.get(key) else {
            report.blind_only += 1;
            continue;
        };
        report.paired += 1;
        match tagger.dominant_skill_of_record(b) {
            Some(skill) => {
                let e = sums.entry(skill).or_insert((0.0, 0.0, 0));
                e.0 += b.quality;
                e.1 += a.quality;
                e.2 += 1;
            }
            None => report.unbucketed += 1,
        }
    }
    report.aware_only = aware.keys().filter(|k| !blind.contains_key(*k)).count();
    report.lifts = sums
        .into_iter()
        .map(|(skill, (bq, aq, n))| (skill, ((aq - bq) / n as f64, n)))
        .collect();
    report
}
