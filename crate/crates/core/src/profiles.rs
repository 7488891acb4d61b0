//! Per-(model, skill) Stage-1 statistics and C2 profile-card rendering.
//!
//! A Stage-1 task contributes to the skill the tagger finds dominant over
//! its full trajectory; a task passes when its quality reaches 0.5 (so
//! fractional pass^k scores count as passes at or above one half). Cards
//! render byte-stably: fixed frontmatter key order, fixed number formats,
//! fixed section order.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::{Benchmark, Role, TaskRecord};
use crate::tagger::{SkillId, Tagger};

/// Pass threshold on task quality.
pub const PASS_THRESHOLD: f64 = 0.5;

/// Aggregate Stage-1 statistics for one (model, skill) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkillStats {
    pub model: String,
    pub skill: SkillId,
    pub n_tasks: usize,
    pub passes: usize,
    pub pass_rate: f64,
    pub mean_steps: f64,
    pub mean_output_tokens: f64,
    pub mean_latency_s: f64,
    pub cost_per_task: f64,
    /// Undefined (None) iff the model never passed a task of this skill.
    pub cost_per_success: Option<f64>,
    /// (rank, of) among models exercising the skill; ties share the
    /// smaller rank.
    pub percentile_rank: Option<(usize, usize)>,
}

/// Pool-wide Stage-1 statistics, keyed by (model, skill).
pub type PoolStats = BTreeMap<(String, SkillId), SkillStats>;

/// Compute pool statistics from Stage-1 records (single condition).
/// Percentile ranks are filled in a second pass over the whole pool.
pub fn compute_skill_stats(stage1: &[TaskRecord], tagger: &Tagger) -> PoolStats {
    #[derive(Default)]
    struct Acc {
        n: usize,
        passes: usize,
        steps: usize,
        output_tokens: u64,
        latency: f64,
        cost: f64,
    }
    let mut acc: BTreeMap<(String, SkillId), Acc> = BTreeMap::new();
    for record in stage1 {
        let Some(skill) = tagger.dominant_skill_of_record(record) else {
            continue;
        };
        let a = acc.entry((record.agent.clone(), skill)).or_default();
        a.n += 1;
        if record.quality >= PASS_THRESHOLD {
            a.passes += 1;
        }
        a.steps += record.steps.iter().filter(|s| s.role == Role::Assistant).count();
        a.output_tokens += record
            .steps
            .iter()
            .filter_map(|s| s.completion_tokens)
            .sum::<u64>();
        a.latency += record.latency_s;
        a.cost += record.cost_usd;
    }

    let mut stats: PoolStats = acc
        .into_iter()
        .map(|((model, skill), a)| {
            let n = a.n as f64;
            let s = SkillStats {
                model: model.clone(),
                skill,
                n_tasks: a.n,
                passes: a.passes,
                pass_rate: a.passes as f64 / n,
                mean_steps: a.steps as f64 / n,
                mean_output_tokens: a.output_tokens as f64 / n,
                mean_latency_s: a.latency / n,
                cost_per_task: a.cost / n,
                cost_per_success: (a.passes > 0).then(|| a.cost / a.passes as f64),
                percentile_rank: None,
            };
            ((model, skill), s)
        })
        .collect();

    let keys: Vec<(String, SkillId)> = stats.keys().cloned().collect();
    for (model, skill) in keys {
        let rank = percentile_rank(&model, skill, &stats);
        stats.get_mut(&(model, skill)).unwrap().percentile_rank = rank;
    }
    stats
}

/// Rank of `model` on `skill` by descending pass rate among exercising
/// models. Ties share the smaller rank; `of` is the exerciser count.
pub fn percentile_rank(model: &str, skill: SkillId, pool_stats: &PoolStats) -> Option<(usize, usize)> {
    let own = pool_stats.get(&(model.to_string(), skill))?;
    if own.n_tasks == 0 {
        return None;
    }
    let exercisers: Vec<&SkillStats> = pool_stats
        .values()
        .filter(|s| s.skill == skill && s.n_tasks > 0)
        .collect();
    let higher = exercisers.iter().filter(|s| s.pass_rate > own.pass_rate).count();
    Some((higher + 1, exercisers.len()))
}

/// Candidate peers ranked for a skill: descending pass rate, ties broken by
/// lower cost-per-success then name order; `exclude` (the orchestrator)
/// never appears.
pub fn rank_peers(skill: SkillId, pool_stats: &PoolStats, exclude: &str) -> Vec<String> {
    let mut peers: Vec<&SkillStats> = pool_stats
        .values()
        .filter(|s| s.skill == skill && s.n_tasks > 0 && s.model != exclude)
        .collect();
    peers.sort_by(|a, b| {
        b.pass_rate
            .total_cmp(&a.pass_rate)
            .then_with(|| {
                let ca = a.cost_per_success.unwrap_or(f64::INFINITY);
                let cb = b.cost_per_success.unwrap_or(f64::INFINITY);
                ca.total_cmp(&cb)
            })
            .then_with(|| a.model.cmp(&b.model))
    });
    peers.into_iter().map(|s| s.model.clone()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CardVariant {
    C1Human,
    C2Static,
    C3LlmJudge,
}

impl CardVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            CardVariant::C1Human => "c1_human",
            CardVariant::C2Static => "c2_static",
            CardVariant::C3LlmJudge => "c3_llm_judge",
        }
    }

    pub fn from_str_name(name: &str) -> Option<Self> {
        match name {
            "c1_human" => Some(CardVariant::C1Human),
            "c2_static" => Some(CardVariant::C2Static),
            "c3_llm_judge" => Some(CardVariant::C3LlmJudge),
            _ => None,
        }
    }
}

/// Frontmatter bound to every card, keys in fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct CardFrontmatter {
    pub model: String,
    pub variant: CardVariant,
    pub tagger: String,
    pub n_tasks: usize,
    pub benchmarks: Vec<String>,
}

/// A model's derived skill profile, C2 (static-metric) variant.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCard {
    pub frontmatter: CardFrontmatter,
    pub strengths: Vec<SkillStats>,
    pub weaknesses: Vec<SkillStats>,
    pub all_skills: Vec<SkillStats>,
    pub unexercised: Vec<SkillId>,
}

/// Per-model Stage-1 coverage used for card frontmatter.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ModelStageMeta {
    pub n_tasks: usize,
    pub benchmarks: BTreeSet<Benchmark>,
}

/// Count Stage-1 tasks and benchmarks per model.
pub fn stage1_meta(stage1: &[TaskRecord]) -> BTreeMap<String, ModelStageMeta> {
    let mut out: BTreeMap<String, ModelStageMeta> = BTreeMap::new();
    for r in stage1 {
        let m = out.entry(r.agent.clone()).or_default();
        m.n_tasks += 1;
        m.benchmarks.insert(r.benchmark);
    }
    out
}

fn strength_order(a: &SkillStats, b: &SkillStats) -> std::cmp::Ordering {
    b.pass_rate
        .total_cmp(&a.pass_rate)
        .then_with(|| {
            a.cost_per_success
                .unwrap_or(f64::INFINITY)
                .total_cmp(&b.cost_per_success.unwrap_or(f64::INFINITY))
        })
        .then_with(|| a.skill.cmp(&b.skill))
}

fn weakness_order(a: &SkillStats, b: &SkillStats) -> std::cmp::Ordering {
    a.pass_rate
        .total_cmp(&b.pass_rate)
        .then_with(|| {
            a.cost_per_success
                .unwrap_or(f64::INFINITY)
                .total_cmp(&b.cost_per_success.unwrap_or(f64::INFINITY))
        })
        .then_with(|| a.skill.cmp(&b.skill))
}

/// Build the C2 card for one model from pool statistics. Errors when the
/// model has no Stage-1 tasks or exercised no skill.
pub fn build_c2_card(
    model: &str,
    pool_stats: &PoolStats,
    meta: &ModelStageMeta,
    tagger_version: &str,
) -> Result<ProfileCard> {
    if meta.n_tasks == 0 {
        return Err(Error::EmptyProfile(model.to_string()));
    }
    let mut exercised: Vec<SkillStats> = SkillId::ALL
        .iter()
        .filter_map(|s| pool_stats.get(&(model.to_string(), *s)).cloned())
        .collect();
    if exercised.is_empty() {
        return Err(Error::EmptyProfile(model.to_string()));
    }
    exercised.sort_by(|a, b| a.skill.cmp(&b.skill));

    let mut strengths = exercised.clone();
    strengths.sort_by(strength_order);
    strengths.truncate(3);
    let mut weaknesses = exercised.clone();
    weaknesses.sort_by(weakness_order);
    weaknesses.truncate(3);

    let unexercised: Vec<SkillId> = SkillId::ALL
        .iter()
        .copied()
        .filter(|s| !exercised.iter().any(|e| e.skill == *s))
        .collect();

    let mut benchmarks: Vec<String> = meta
        .benchmarks
        .iter()
        .map(|b| b.frontmatter_name().to_string())
        .collect();
    benchmarks.sort();

    Ok(ProfileCard {
        frontmatter: CardFrontmatter {
            model: model.to_string(),
            variant: CardVariant::C2Static,
            tagger: tagger_version.to_string(),
            n_tasks: meta.n_tasks,
            benchmarks,
        },
        strengths,
        weaknesses,
        all_skills: exercised,
        unexercised,
    })
}

fn pct(rate: f64) -> String {
    format!("{:.0}%", rate * 100.0)
}

fn usd(v: f64) -> String {
    format!("{v:.3}")
}

fn skill_entry(s: &SkillStats) -> String {
    let mut parts = Vec::new();
    if let Some((rank, of)) = s.percentile_rank {
        parts.push(format!("rank {rank}/{of}"));
    }
    parts.push(format!("{}/{}={}", s.passes, s.n_tasks, pct(s.pass_rate)));
    if let Some(cps) = s.cost_per_success {
        parts.push(format!("${}/success", usd(cps)));
    }
    format!("{} ({})", s.skill.card_name(), parts.join(", "))
}

/// Render a card to its byte-stable text form.
pub fn render_card(card: &ProfileCard) -> String {
    let fm = &card.frontmatter;
    let mut out = String::new();
    out.push_str("---\n");
    out.push_str(&format!(
        "model: {}; variant: {}; tagger: {};\n",
        fm.model,
        fm.variant.as_str(),
        fm.tagger
    ));
    out.push_str(&format!(
        "n_tasks: {}; benchmarks: [{}]\n",
        fm.n_tasks,
        fm.benchmarks.join(", ")
    ));
    out.push_str("---\n");
    out.push_str(&format!(
        "**{} -- derived skill profile (C2).** Computed from {} Stage-1 tasks across {} benchmark{} by rule tagger {}; no LLM judgment.\n",
        fm.model,
        fm.n_tasks,
        fm.benchmarks.len(),
        if fm.benchmarks.len() == 1 { "" } else { "s" },
        fm.tagger
    ));
    out.push('\n');
    out.push_str("**Strengths.** ");
    out.push_str(
        &card.strengths.iter().map(skill_entry).collect::<Vec<_>>().join("; "),
    );
    out.push_str(".\n\n**Weaknesses.** ");
    out.push_str(
        &card.weaknesses.iter().map(skill_entry).collect::<Vec<_>>().join("; "),
    );
    out.push_str(".\n");
    if !card.unexercised.is_empty() {
        out.push('\n');
        out.push_str("**Skills not exercised in Stage 1:** ");
        out.push_str(
            &card
                .unexercised
                .iter()
                .map(|s| s.as_str())
                .collect::<Vec<_>>()
                .join(", "),
        );
        out.push_str(".\n");
    }
    out.push('\n');
    out.push_str("**All measured skills.**\n\n");
    out.push_str("| Skill | pass | n | avg steps | avg out-tok | $/task |\n");
    out.push_str("|---|---|---|---|---|---|\n");
    for s in &card.all_skills {
        out.push_str(&format!(
            "| {} | {} | {} | {:.1} | {:.0} | {} |\n",
            s.skill.card_name(),
            pct(s.pass_rate),
            s.n_tasks,
            s.mean_steps,
            s.mean_output_tokens,
            usd(s.cost_per_task)
        ));
    }
    out
}

/// Parse the frontmatter block back out of a rendered card.
pub fn parse_frontmatter(text: &str) -> Result<CardFrontmatter> {
    let mut lines = text.lines();
    if lines.next() != Some("---") {
        return Err(Error::InvalidInput("card does not start with ---".into()));
    }
    let mut fields: BTreeMap<String, String> = BTreeMap::new();
    for line in lines {
        if line == "---" {
            break;
        }
        for piece in line.split(';') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let (key, value) = piece
                .split_once(':')
                .ok_or_else(|| Error::InvalidInput(format!("bad frontmatter field {piece:?}")))?;
            fields.insert(key.trim().to_string(), value.trim().to_string());
        }
    }
    let get = |key: &str| {
        fields
            .get(key)
            .cloned()
            .ok_or_else(|| Error::InvalidInput(format!("frontmatter missing {key:?}")))
    };
    let variant_raw = get("variant")?;
    let variant = CardVariant::from_str_name(&variant_raw)
        .ok_or_else(|| Error::InvalidInput(format!("unknown card variant {variant_raw:?}")))?;
    let n_tasks: usize = get("n_tasks")?
        .parse()
        .map_err(|e| Error::InvalidInput(format!("bad n_tasks: {e}")))?;
    let benchmarks_raw = get("benchmarks")?;
    let benchmarks = benchmarks_raw
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    Ok(CardFrontmatter {
        model: get("model")?,
        variant,
        tagger: get("tagger")?,
        n_tasks,
        benchmarks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::{Condition, StepEvent, ToolCall};

    fn stats(
        model: &str,
        skill: SkillId,
        passes: usize,
        n: usize,
        cost_total: f64,
        mean_steps: f64,
        mean_out: f64,
        rank: Option<(usize, usize)>,
    ) -> SkillStats {
        SkillStats {
            model: model.to_string(),
            skill,
            n_tasks: n,
            passes,
            pass_rate: passes as f64 / n as f64,
            mean_steps,
            mean_output_tokens: mean_out,
            mean_latency_s: 10.0,
            cost_per_task: cost_total / n as f64,
            cost_per_success: (passes > 0).then(|| cost_total / passes as f64),
            percentile_rank: rank,
        }
    }

    /// The documented opus card: six exercised skills, one unexercised.
    fn opus_fixture() -> (PoolStats, ModelStageMeta) {
        use SkillId::*;
        let m = "claude-opus-4.7";
        let mut pool = PoolStats::new();
        for s in [
            stats(m, DomainPolicyCompliance, 9, 11, 0.62, 1.2, 256.0, Some((2, 10))),
            stats(m, NumericalComputation, 27, 34, 0.163 * 27.0, 2.5, 301.0, Some((3, 11))),
            stats(m, ToolSchemaAdherence, 41, 52, 0.171 * 41.0, 4.1, 388.0, Some((5, 11))),
            stats(m, LongInputHandling, 12, 22, 1.962 * 12.0, 3.2, 512.0, Some((2, 8))),
            stats(m, InformationRetrieval, 35, 46, 0.142 * 46.0, 3.7, 453.0, Some((4, 11))),
            stats(m, MultiTurnStateTracking, 57, 73, 0.258 * 73.0, 8.3, 504.0, Some((5, 11))),
        ] {
            pool.insert((m.to_string(), s.skill), s);
        }
        let meta = ModelStageMeta {
            n_tasks: 105,
            benchmarks: [Benchmark::Bfcl, Benchmark::Gaia, Benchmark::TauBench]
                .into_iter()
                .collect(),
        };
        (pool, meta)
    }

    #[test]
    fn opus_card_strengths_and_weaknesses_order() {
        use SkillId::*;
        let (pool, meta) = opus_fixture();
        let card = build_c2_card("claude-opus-4.7", &pool, &meta, "v2.0-2026-05-01").unwrap();
        assert_eq!(
            card.strengths.iter().map(|s| s.skill).collect::<Vec<_>>(),
            vec![DomainPolicyCompliance, NumericalComputation, ToolSchemaAdherence]
        );
        assert_eq!(
            card.weaknesses.iter().map(|s| s.skill).collect::<Vec<_>>(),
            vec![LongInputHandling, InformationRetrieval, MultiTurnStateTracking]
        );
        assert_eq!(card.unexercised, vec![MultiStepReasoning]);
        // Six skills exercised: strengths and weaknesses must not overlap.
        for s in &card.strengths {
            assert!(!card.weaknesses.iter().any(|w| w.skill == s.skill));
        }
    }

    #[test]
    fn opus_card_renders_documented_strings() {
        let (pool, meta) = opus_fixture();
        let card = build_c2_card("claude-opus-4.7", &pool, &meta, "v2.0-2026-05-01").unwrap();
        let text = render_card(&card);
        assert!(text.contains("9/11=82%"), "card was:\n{text}");
        assert!(text.contains("12/22=55%"), "card was:\n{text}");
        assert!(text.contains("$0.069/success"), "card was:\n{text}");
        assert!(text.contains("$1.962/success"), "card was:\n{text}");
        assert!(text.contains("model: claude-opus-4.7; variant: c2_static; tagger: v2.0-2026-05-01;"));
        assert!(text.contains("n_tasks: 105; benchmarks: [bfcl, gaia, tau-bench]"));
        assert!(text.contains("**Skills not exercised in Stage 1:** multi_step_reasoning."));
        assert!(text.contains("| information-retrieval | 76% | 46 | 3.7 | 453 | 0.142 |"));
        assert!(text.contains("| multi-turn-state-tracking | 78% | 73 | 8.3 | 504 | 0.258 |"));
        // Determinism: same card, same bytes.
        assert_eq!(text, render_card(&card));
    }

    #[test]
    fn frontmatter_round_trips() {
        let (pool, meta) = opus_fixture();
        let card = build_c2_card("claude-opus-4.7", &pool, &meta, "v2.0-2026-05-01").unwrap();
        let text = render_card(&card);
        let fm = parse_frontmatter(&text).unwrap();
        assert_eq!(fm, card.frontmatter);
    }

    #[test]
    fn zero_stage1_tasks_is_an_error() {
        let (pool, _) = opus_fixture();
        let empty = ModelStageMeta::default();
        assert!(matches!(
            build_c2_card("claude-opus-4.7", &pool, &empty, "v"),
            Err(Error::EmptyProfile(_))
        ));
        // Tasks present but no exercised skill is equally unbuildable.
        let meta = ModelStageMeta { n_tasks: 4, benchmarks: Default::default() };
        assert!(build_c2_card("unknown-model", &pool, &meta, "v").is_err());
    }

    #[test]
    fn three_skill_model_overlaps_strengths_and_weaknesses() {
        use SkillId::*;
        let m = "small-model";
        let mut pool = PoolStats::new();
        for s in [
            stats(m, ToolSchemaAdherence, 3, 4, 0.4, 1.0, 100.0, None),
            stats(m, InformationRetrieval, 2, 4, 0.4, 1.0, 100.0, None),
            stats(m, NumericalComputation, 1, 4, 0.4, 1.0, 100.0, None),
        ] {
            pool.insert((m.to_string(), s.skill), s);
        }
        let meta = ModelStageMeta { n_tasks: 12, benchmarks: [Benchmark::Gaia].into_iter().collect() };
        let card = build_c2_card(m, &pool, &meta, "v").unwrap();
        assert_eq!(card.strengths.len(), 3);
        assert_eq!(card.weaknesses.len(), 3);
        let s_set: BTreeSet<SkillId> = card.strengths.iter().map(|s| s.skill).collect();
        let w_set: BTreeSet<SkillId> = card.weaknesses.iter().map(|s| s.skill).collect();
        assert_eq!(s_set, w_set);
    }

    #[test]
    fn percentile_rank_tie_rule() {
        use SkillId::ToolSchemaAdherence as Tsa;
        let mut pool = PoolStats::new();
        for (m, p, n) in [("a", 4, 5), ("b", 8, 10), ("c", 1, 2)] {
            pool.insert((m.to_string(), Tsa), stats(m, Tsa, p, n, 1.0, 1.0, 1.0, None));
        }
        // a and b tie at 0.8 -> both rank 1; c at 0.5 -> rank 3.
        assert_eq!(percentile_rank("a", Tsa, &pool), Some((1, 3)));
        assert_eq!(percentile_rank("b", Tsa, &pool), Some((1, 3)));
        assert_eq!(percentile_rank("c", Tsa, &pool), Some((3, 3)));
        assert_eq!(percentile_rank("d", Tsa, &pool), None);
    }

    #[test]
    fn rank_peers_orders_and_excludes() {
        use SkillId::InformationRetrieval as Ir;
        let mut pool = PoolStats::new();
        for (m, p, n, cost) in [("a", 9, 10, 0.5), ("b", 7, 10, 1.0), ("c", 5, 10, 1.0)] {
            pool.insert((m.to_string(), Ir), stats(m, Ir, p, n, cost, 1.0, 1.0, None));
        }
        assert_eq!(rank_peers(Ir, &pool, "z"), vec!["a", "b", "c"]);
        assert_eq!(rank_peers(Ir, &pool, "a"), vec!["b", "c"]);
        // Tie at 0.8 broken by cheaper cost-per-success.
        let mut pool = PoolStats::new();
        for (m, cost_total) in [("pricy", 0.10 * 8.0), ("cheap", 0.05 * 8.0)] {
            pool.insert((m.to_string(), Ir), stats(m, Ir, 8, 10, cost_total, 1.0, 1.0, None));
        }
        assert_eq!(rank_peers(Ir, &pool, ""), vec!["cheap", "pricy"]);
        assert!(rank_peers(SkillId::LongInputHandling, &pool, "").is_empty());
    }

    fn mk_record(agent: &str, task: &str, q: f64, skill_tool: &str) -> TaskRecord {
        TaskRecord {
            task_id: task.to_string(),
            benchmark: Benchmark::Gaia,
            shard: None,
            agent: agent.to_string(),
            condition: Condition::Blind,
            quality: q,
            cost_usd: 0.1,
            latency_s: 2.0,
            steps: vec![StepEvent {
                index: 0,
                role: Role::Assistant,
                text: String::new(),
                tool_calls: vec![ToolCall {
                    name: skill_tool.to_string(),
                    args_text: "{}".to_string(),
                }],
                prompt_tokens: Some(100),
                completion_tokens: Some(40),
                finish_reason: "tool_calls".to_string(),
                extra: Default::default(),
            }],
            extra: Default::default(),
        }
    }

    #[test]
    fn compute_skill_stats_hand_arithmetic() {
        let tagger = Tagger::default();
        // One numerical task, q = 1.
        let rs = vec![mk_record("m", "t1", 1.0, "calculator")];
        let stats = compute_skill_stats(&rs, &tagger);
        let s = &stats[&("m".to_string(), SkillId::NumericalComputation)];
        assert_eq!(s.n_tasks, 1);
        assert_eq!(s.pass_rate, 1.0);
        assert_eq!(s.percentile_rank, Some((1, 1)));

        // Two tasks, q in {0, 1}: pass rate one half, cost per success =
        // total cost over the single pass.
        let rs = vec![
            mk_record("m", "t1", 1.0, "calculator"),
            mk_record("m", "t2", 0.0, "calculator"),
        ];
        let stats = compute_skill_stats(&rs, &tagger);
        let s = &stats[&("m".to_string(), SkillId::NumericalComputation)];
        assert_eq!(s.pass_rate, 0.5);
        assert_eq!(s.passes, 1);
        assert!((s.cost_per_success.unwrap() - 0.2).abs() < 1e-12);
        assert!((s.cost_per_task - 0.1).abs() < 1e-12);
    }

    #[test]
    fn zero_pass_skill_has_undefined_cost_per_success() {
        let tagger = Tagger::default();
        let rs = vec![mk_record("m", "t1", 0.0, "web_search")];
        let stats = compute_skill_stats(&rs, &tagger);
        let s = &stats[&("m".to_string(), SkillId::InformationRetrieval)];
        assert_eq!(s.passes, 0);
        assert_eq!(s.cost_per_success, None);
    }

    #[test]
    fn empty_input_gives_empty_map() {
        assert!(compute_skill_stats(&[], &Tagger::default()).is_empty());
    }

    #[test]
    fn attributed_task_counts_partition_stage1() {
        let tagger = Tagger::default();
        let rs = vec![
            mk_record("m", "t1", 1.0, "calculator"),
            mk_record("m", "t2", 1.0, "web_search"),
            mk_record("m", "t3", 0.0, "web_search"),
        ];
        let stats = compute_skill_stats(&rs, &tagger);
        let total: usize = stats
            .iter()
            .filter(|((m, _), _)| m == "m")
            .map(|(_, s)| s.n_tasks)
            .sum();
        assert_eq!(total, 3);
    }
}
