//! Frozen rule-based step tagger: 7-skill taxonomy, version-pinned.
//!
//! Rules are priority-ordered and split into a tool-call branch and a
//! non-tool branch; every step receives exactly one tag. Steps whose only
//! tool calls are the delegation-infrastructure tools carry a private
//! infra marker and never contribute to graded skill statistics. The tag
//! derives from trace-only signal (tool name, prompt-token count, regex
//! match on assistant text) so the whole layer is reproducible from record
//! files alone.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::{Benchmark, Role, StepEvent, TaskRecord, INFRA_TOOLS};

/// The seven graded skills, in fixed taxonomy order. The derived `Ord` is
/// the tie-break order for modal-skill reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkillId {
    ToolSchemaAdherence,
    MultiTurnStateTracking,
    DomainPolicyCompliance,
    InformationRetrieval,
    MultiStepReasoning,
    NumericalComputation,
    LongInputHandling,
}

impl SkillId {
    pub const ALL: [SkillId; 7] = [
        SkillId::ToolSchemaAdherence,
        SkillId::MultiTurnStateTracking,
        SkillId::DomainPolicyCompliance,
        SkillId::InformationRetrieval,
        SkillId::MultiStepReasoning,
        SkillId::NumericalComputation,
        SkillId::LongInputHandling,
    ];

    /// Wire name (snake_case), as used in CSV artifacts and configs.
    pub fn as_str(self) -> &'static str {
        match self {
            SkillId::ToolSchemaAdherence => "tool_schema_adherence",
            SkillId::MultiTurnStateTracking => "multi_turn_state_tracking",
            SkillId::DomainPolicyCompliance => "domain_policy_compliance",
            SkillId::InformationRetrieval => "information_retrieval",
            SkillId::MultiStepReasoning => "multi_step_reasoning",
            SkillId::NumericalComputation => "numerical_computation",
            SkillId::LongInputHandling => "long_input_handling",
        }
    }

    /// Hyphenated display name used in profile-card bodies.
    pub fn card_name(self) -> &'static str {
        match self {
            SkillId::ToolSchemaAdherence => "tool-schema-adherence",
            SkillId::MultiTurnStateTracking => "multi-turn-state-tracking",
            SkillId::DomainPolicyCompliance => "domain-policy-compliance",
            SkillId::InformationRetrieval => "information-retrieval",
            SkillId::MultiStepReasoning => "multi-step-reasoning",
            SkillId::NumericalComputation => "numerical-computation",
            SkillId::LongInputHandling => "long-input-handling",
        }
    }

    pub fn from_str_name(name: &str) -> Option<SkillId> {
        SkillId::ALL.iter().copied().find(|s| s.as_str() == name)
    }
}

impl std::fmt::Display for SkillId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of tagging one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepTag {
    Skill(SkillId),
    /// All tool calls in the step were delegation infrastructure.
    InfraDelegation,
    /// No rule fired.
    Untagged,
}

impl StepTag {
    pub fn skill(self) -> Option<SkillId> {
        match self {
            StepTag::Skill(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StepTag::Skill(s) => s.as_str(),
            StepTag::InfraDelegation => "_infra_delegation",
            StepTag::Untagged => "none",
        }
    }
}

/// Tagger configuration, serializable so the exact rule set ships with
/// every release. The version string is echoed into every profile card and
/// tagged-output file header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaggerConfig {
    pub version: String,
    pub numerical_tool_names: Vec<String>,
    pub retrieval_tool_substrings: Vec<String>,
    pub policy_patterns: Vec<String>,
    /// One expression per numeric-token class, tried in order at each
    /// position: ISO date, clock time, currency amount, digit run.
    pub numeric_token_patterns: Vec<String>,
    pub long_input_threshold: u64,
    pub numeric_token_min: usize,
    pub chars_per_token_fallback: usize,
}

impl Default for TaggerConfig {
    fn default() -> Self {
        Self {
            version: "v2.0-2026-05-01".to_string(),
            numerical_tool_names: [
                "calculator",
                "evaluate_expression",
                "eval_python",
                "python_eval",
                "math_eval",
                "compute",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
            retrieval_tool_substrings: [
                "web_search",
                "search",
                "fetch_url",
                "browse",
                "find_user_id",
                "find_user",
                "lookup",
                "get_user_details",
                "get_order",
                "list_orders",
                "get_product",
                "list_products",
                "get_reservation",
                "list_reservation",
                "search_direct_flight",
                "search_onestop_flight",
                "parse_pdf",
                "extract_table",
                "ocr",
                "read_document",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
            policy_patterns: [
                r"\bagainst\s+(?:our\s+|the\s+)?policy\b",
                r"\bnot\s+permitted\b",
                r"\bI\s+cannot\b.{0,40}\bpolicy\b",
                r"\btransfer.{0,20}human\s+agent",
                r"\boutside\s+(?:my|our)\s+scope\b",
                r"\bplease\s+confirm\b",
                r"\bI\s+(?:will\s+)?need\s+(?:your\s+)?confirmation\b",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
            numeric_token_patterns: [
                r"\d{4}-\d{2}-\d{2}",
                r"\d{1,2}:\d{2}(?::\d{2})?",
                r"[$€£]\s?\d+(?:,\d{3})*(?:\.\d+)?",
                r"\d+(?:,\d{3})*(?:\.\d+)?",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
            long_input_threshold: 15_000,
            numeric_token_min: 3,
            chars_per_token_fallback: 4,
        }
    }
}

/// Per-step context the rules consume.
#[derive(Debug, Clone, Copy)]
pub struct StepContext {
    pub benchmark: Benchmark,
    /// Graded (non-infra) tool calls issued earlier in the same task.
    pub prior_tool_calls: usize,
}

/// Compiled form of a [`TaggerConfig`]; build once, tag many.
#[derive(Debug, Clone)]
pub struct Tagger {
    cfg: TaggerConfig,
    numeric_re: regex::Regex,
    policy_res: Vec<regex::Regex>,
}

impl Default for Tagger {
    fn default() -> Self {
        Tagger::new(TaggerConfig::default()).expect("built-in tagger config compiles")
    }
}

impl Tagger {
    pub fn new(cfg: TaggerConfig) -> Result<Self> {
        if cfg.version.is_empty() {
            return Err(Error::InvalidConfig("tagger version must be non-empty".into()));
        }
        if cfg.long_input_threshold == 0 {
            return Err(Error::InvalidConfig("long_input_threshold must be > 0".into()));
        }
        let numeric_re = regex::Regex::new(&cfg.numeric_token_patterns.join("|"))
            .map_err(|e| Error::InvalidConfig(format!("numeric token patterns: {e}")))?;
        let policy_res = cfg
            .policy_patterns
            .iter()
            .map(|p| {
                regex::RegexBuilder::new(p)
                    .case_insensitive(true)
                    .build()
                    .map_err(|e| Error::InvalidConfig(format!("policy pattern {p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { cfg, numeric_re, policy_res })
    }

    pub fn config(&self) -> &TaggerConfig {
        &self.cfg
    }

    pub fn version(&self) -> &str {
        &self.cfg.version
    }

    /// Count maximal numeric tokens in serialized tool arguments: ISO
    /// dates, clock times, currency-prefixed amounts, and digit runs each
    /// count once.
    pub fn count_numeric_tokens(&self, args_text: &str) -> usize {
        self.numeric_re.find_iter(args_text).count()
    }

    /// True iff any refusal / confirmation pattern matches
    /// (case-insensitive).
    pub fn match_policy_phrase(&self, text: &str) -> bool {
        self.policy_res.iter().any(|re| re.is_match(text))
    }

    fn is_infra_call(name: &str) -> bool {
        INFRA_TOOLS.contains(&name)
    }

    fn token_count(&self, step: &StepEvent) -> u64 {
        step.prompt_tokens.unwrap_or_else(|| {
            (step.text.chars().count() / self.cfg.chars_per_token_fallback.max(1)) as u64
        })
    }

    /// Tag one step. Non-assistant steps are never tagged with a skill.
    pub fn tag_step(&self, step: &StepEvent, ctx: StepContext) -> StepTag {
        if step.role != Role::Assistant {
            return StepTag::Untagged;
        }

        if !step.tool_calls.is_empty() {
            // Rule 1: infra-only steps never reach the graded rules.
            if step.tool_calls.iter().all(|c| Self::is_infra_call(&c.name)) {
                return StepTag::InfraDelegation;
            }
            // Rule 2: numerical tool name, or >= numeric_token_min numeric
            // tokens in any call's arguments.
            for call in &step.tool_calls {
                if self.cfg.numerical_tool_names.iter().any(|n| n == &call.name)
                    || self.count_numeric_tokens(&call.args_text) >= self.cfg.numeric_token_min
                {
                    return StepTag::Skill(SkillId::NumericalComputation);
                }
            }
            // Rule 3: retrieval-set tool names, matched by containment.
            for call in &step.tool_calls {
                if self
                    .cfg
                    .retrieval_tool_substrings
                    .iter()
                    .any(|sub| call.name.contains(sub.as_str()))
                {
                    return StepTag::Skill(SkillId::InformationRetrieval);
                }
            }
            // Rule 4: every other tool call is schema exercise.
            return StepTag::Skill(SkillId::ToolSchemaAdherence);
        }

        // Rule 5: tau_bench refusal / confirmation phrasing.
        if ctx.benchmark == Benchmark::TauBench && self.match_policy_phrase(&step.text) {
            return StepTag::Skill(SkillId::DomainPolicyCompliance);
        }
        // Rule 6: long prompt context.
        if self.token_count(step) >= self.cfg.long_input_threshold {
            return StepTag::Skill(SkillId::LongInputHandling);
        }
        // Rule 7: GAIA reasoning turns after >= 2 graded tool calls; GAIA
        // steps below that threshold stay untagged.
        if ctx.benchmark == Benchmark::Gaia {
            return if ctx.prior_tool_calls >= 2 {
                StepTag::Skill(SkillId::MultiStepReasoning)
            } else {
                StepTag::Untagged
            };
        }
        // Rule 8: non-tool turns on the multi-turn suites.
        if matches!(ctx.benchmark, Benchmark::TauBench | Benchmark::Bfcl) {
            return StepTag::Skill(SkillId::MultiTurnStateTracking);
        }
        StepTag::Untagged
    }

    /// Tag an ordered step sequence, threading the graded tool-call count.
    pub fn tag_steps(&self, benchmark: Benchmark, steps: &[StepEvent]) -> Vec<StepTag> {
        let mut prior = 0usize;
        let mut tags = Vec::with_capacity(steps.len());
        for step in steps {
            tags.push(self.tag_step(step, StepContext { benchmark, prior_tool_calls: prior }));
            prior += step
                .tool_calls
                .iter()
                .filter(|c| !Self::is_infra_call(&c.name))
                .count();
        }
        tags
    }

    pub fn tag_record(&self, record: &TaskRecord) -> Vec<StepTag> {
        self.tag_steps(record.benchmark, &record.steps)
    }

    /// Dominant skill over a full record's trajectory.
    pub fn dominant_skill_of_record(&self, record: &TaskRecord) -> Option<SkillId> {
        dominant_skill(&self.tag_record(record))
    }

    /// Dominant skill over the prefix of steps with `index < before_index`
    /// (the pre-call trajectory of a delegation).
    pub fn dominant_skill_before(
        &self,
        record: &TaskRecord,
        before_index: usize,
    ) -> Option<SkillId> {
        let tags = self.tag_record(record);
        let prefix: Vec<StepTag> = record
            .steps
            .iter()
            .zip(&tags)
            .filter(|(s, _)| s.index < before_index)
            .map(|(_, t)| *t)
            .collect();
        dominant_skill(&prefix)
    }
}

/// Modal skill among graded tags; ties break to the earlier taxonomy entry.
/// `None` when no graded tag exists.
pub fn dominant_skill(tags: &[StepTag]) -> Option<SkillId> {
    let mut counts = [0usize; 7];
    for tag in tags {
        if let StepTag::Skill(s) = tag {
            counts[*s as usize] += 1;
        }
    }
    let mut best: Option<(SkillId, usize)> = None;
    for skill in SkillId::ALL {
        let c = counts[skill as usize];
        if c > 0 && best.map_or(true, |(_, bc)| c > bc) {
            best = Some((skill, c));
        }
    }
    best.map(|(s, _)| s)
}
