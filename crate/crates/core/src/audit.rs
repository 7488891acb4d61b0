//! Emergent-taxonomy audit: cluster free-form skill labels and measure how
//! much of them the frozen seven-skill vocabulary covers.
//!
//! Labels are lowercased, whitespace-tokenized, single-link clustered on
//! token-level Jaccard similarity, and independently mapped to a `SkillId`
//! through an ordered keyword-rule table. Coverage is the fraction of
//! labels that map.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tagger::SkillId;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    pub jaccard_threshold: f64,
    pub max_label_words: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self { jaccard_threshold: 0.45, max_label_words: 5 }
    }
}

/// One keyword rule: a label containing `keyword` maps to `skill`. Rules
/// are tried in order; first match wins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeywordRule {
    pub keyword: String,
    pub skill: SkillId,
}

/// Hand-validated default mapping from free-form label fragments to the
/// frozen vocabulary.
pub fn default_keyword_rules() -> Vec<KeywordRule> {
    fn rule(keyword: &str, skill: SkillId) -> KeywordRule {
        KeywordRule { keyword: keyword.to_string(), skill }
    }
    vec![
        rule("retriev", SkillId::InformationRetrieval),
        rule("search", SkillId::InformationRetrieval),
        rule("lookup", SkillId::InformationRetrieval),
        rule("browse", SkillId::InformationRetrieval),
        rule("fetch", SkillId::InformationRetrieval),
        rule("calculat", SkillId::NumericalComputation),
        rule("arithmetic", SkillId::NumericalComputation),
        rule("numeric", SkillId::NumericalComputation),
        rule("math", SkillId::NumericalComputation),
        rule("count", SkillId::NumericalComputation),
        rule("policy", SkillId::DomainPolicyCompliance),
        rule("refus", SkillId::DomainPolicyCompliance),
        rule("compliance", SkillId::DomainPolicyCompliance),
        rule("confirm", SkillId::DomainPolicyCompliance),
        rule("schema", SkillId::ToolSchemaAdherence),
        rule("tool call", SkillId::ToolSchemaAdherence),
        rule("function", SkillId::ToolSchemaAdherence),
        rule("api", SkillId::ToolSchemaAdherence),
        rule("argument", SkillId::ToolSchemaAdherence),
        rule("state", SkillId::MultiTurnStateTracking),
        rule("dialogue", SkillId::MultiTurnStateTracking),
        rule("conversation", SkillId::MultiTurnStateTracking),
        rule("turn", SkillId::MultiTurnStateTracking),
        rule("long", SkillId::LongInputHandling),
        rule("context", SkillId::LongInputHandling),
        rule("document", SkillId::LongInputHandling),
        rule("reason", SkillId::MultiStepReasoning),
        rule("plan", SkillId::MultiStepReasoning),
        rule("decompos", SkillId::MultiStepReasoning),
        rule("step", SkillId::MultiStepReasoning),
    ]
}

/// Audit outcome: clusters as index lists (ordered by smallest member),
/// the per-label skill mapping, and the mapped fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditOutcome {
    pub clusters: Vec<Vec<usize>>,
    pub mapped: Vec<Option<SkillId>>,
    pub coverage: f64,
}

fn tokens(label: &str, max_words: usize) -> Vec<String> {
    label
        .to_lowercase()
        .split_whitespace()
        .take(max_words)
        .map(|t| t.to_string())
        .collect()
}

/// Token-level Jaccard similarity of two token lists (as sets).
pub fn jaccard(a: &[String], b: &[String]) -> f64 {
    use std::collections::BTreeSet;
    let sa: BTreeSet<&str> = a.iter().map(|s| s.as_str()).collect();
    let sb: BTreeSet<&str> = b.iter().map(|s| s.as_str()).collect();
    if sa.is_empty() && sb.is_empty() {
        return 1.0;
    }
    let inter = sa.intersection(&sb).count();
    let union = sa.union(&sb).count();
    inter as f64 / union as f64
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }
    fn find(&mut self, i: usize) -> usize {
        if self.0[i] != i {
            let root = self.find(self.0[i]);
            self.0[i] = root;
        }
        self.0[i]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Keep the smaller index as root so cluster order is stable.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Single-link agglomerative clustering: two labels link iff their token
/// Jaccard similarity reaches the threshold; clusters are the connected
/// components of the link graph.
pub fn audit_cluster(
    labels: &[String],
    cfg: &AuditConfig,
    rules: &[KeywordRule],
) -> Result<AuditOutcome> {
    if !(cfg.jaccard_threshold > 0.0 && cfg.jaccard_threshold < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "jaccard threshold must be in (0, 1), got {}",
            cfg.jaccard_threshold
        )));
    }
    let token_sets: Vec<Vec<String>> =
        labels.iter().map(|l| tokens(l, cfg.max_label_words)).collect();

    let mut uf = UnionFind::new(labels.len());
    for i in 0..labels.len() {
        for j in (i + 1)..labels.len() {
            if jaccard(&token_sets[i], &token_sets[j]) >= cfg.jaccard_threshold {
                uf.union(i, j);
            }
        }
    }
    let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..labels.len() {
        let root = uf.find(i);
        by_root.entry(root).or_default().push(i);
    }
    let clusters: Vec<Vec<usize>> = by_root.into_values().collect();

    let mapped: Vec<Option<SkillId>> = labels
        .iter()
        .map(|label| {
            let lower = label.to_lowercase();
            rules.iter().find(|r| lower.contains(&r.keyword)).map(|r| r.skill)
        })
        .collect();
    let coverage = if labels.is_empty() {
        0.0
    } else {
        mapped.iter().filter(|m| m.is_some()).count() as f64 / labels.len() as f64
    };

    Ok(AuditOutcome { clusters, mapped, coverage })
}
