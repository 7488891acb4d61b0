//! Record schema, identity keys, pool registry, and stream parsing.
//!
//! One [`TaskRecord`] is one scored task trajectory: identity cell
//! (agent, benchmark, condition), end-task quality in `[0, 1]`, cost,
//! latency, and the ordered step events the tagger consumes. Records travel
//! as gzip-compressed JSON lines, one object per line, snake_case fields.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Task suite a record was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Benchmark {
    Gaia,
    TauBench,
    Bfcl,
}

impl Benchmark {
    pub const ALL: [Benchmark; 3] = [Benchmark::Gaia, Benchmark::TauBench, Benchmark::Bfcl];

    /// Wire name used in records and CSV artifacts.
    pub fn as_str(self) -> &'static str {
        match self {
            Benchmark::Gaia => "gaia",
            Benchmark::TauBench => "tau_bench",
            Benchmark::Bfcl => "bfcl",
        }
    }

    /// Display name used in profile-card frontmatter.
    pub fn frontmatter_name(self) -> &'static str {
        match self {
            Benchmark::Gaia => "gaia",
            Benchmark::TauBench => "tau-bench",
            Benchmark::Bfcl => "bfcl",
        }
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Peer-information condition a cell ran under. `Blind` is the designated
/// baseline for every delta metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Blind,
    AwareC1,
    AwareC2,
    AwareC3,
    AwareToolOnly,
}

impl Condition {
    pub const ALL: [Condition; 5] = [
        Condition::Blind,
        Condition::AwareC1,
        Condition::AwareC2,
        Condition::AwareC3,
        Condition::AwareToolOnly,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Condition::Blind => "blind",
            Condition::AwareC1 => "aware_c1",
            Condition::AwareC2 => "aware_c2",
            Condition::AwareC3 => "aware_c3",
            Condition::AwareToolOnly => "aware_tool_only",
        }
    }

    pub fn is_baseline(self) -> bool {
        matches!(self, Condition::Blind)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Loose capability tier of a pool member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Frontier,
    StrongMid,
    Small,
}

/// One entry of the peer-model pool.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolEntry {
    pub model_name: String,
    pub vendor: String,
    pub tier: Tier,
}

/// The fixed set of candidate models a delegation may target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolRegistry {
    pub entries: Vec<PoolEntry>,
}

impl PoolRegistry {
    pub fn new(entries: Vec<PoolEntry>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "pool registry needs at least 2 entries, got {}",
                entries.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for e in &entries {
            if !seen.insert(e.model_name.as_str()) {
                return Err(Error::InvalidConfig(format!(
                    "duplicate model name {:?} in pool registry",
                    e.model_name
                )));
            }
        }
        Ok(Self { entries })
    }

    /// The reference 11-model pool: seven vendor families, three tiers.
    pub fn reference() -> Self {
        fn entry(model: &str, vendor: &str, tier: Tier) -> PoolEntry {
            PoolEntry { model_name: model.to_string(), vendor: vendor.to_string(), tier }
        }
        Self {
            entries: vec![
                entry("claude-opus-4.7", "anthropic", Tier::Frontier),
                entry("claude-sonnet-4.6", "anthropic", Tier::StrongMid),
                entry("gpt-5.5", "openai", Tier::Frontier),
                entry("gpt-5.4", "openai", Tier::StrongMid),
                entry("gemini-3.1-pro", "google", Tier::Frontier),
                entry("gemini-3-flash", "google", Tier::StrongMid),
                entry("deepseek-v4-pro", "deepseek", Tier::StrongMid),
                entry("deepseek-v4-flash", "deepseek", Tier::Small),
                entry("kimi-k2.6", "moonshot", Tier::Small),
                entry("qwen3.6-plus", "alibaba", Tier::Small),
                entry("minimax-m2.5", "minimax", Tier::Small),
            ],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, model: &str) -> bool {
        self.entries.iter().any(|e| e.model_name == model)
    }

    pub fn vendor_of(&self, model: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|e| e.model_name == model)
            .map(|e| e.vendor.as_str())
    }

    /// Number of pool members sharing `vendor`.
    pub fn vendor_count(&self, vendor: &str) -> usize {
        self.entries.iter().filter(|e| e.vendor == vendor).count()
    }
}

/// One tool invocation inside a step; arguments kept as serialized text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolCall {
    pub name: String,
    pub args_text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Assistant,
    User,
    ToolResult,
}

/// One turn of a trajectory; the tagger's unit of work.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepEvent {
    pub index: usize,
    pub role: Role,
    #[serde(default)]
    pub text: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tool_calls: Vec<ToolCall>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prompt_tokens: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub completion_tokens: Option<u64>,
    #[serde(default)]
    pub finish_reason: String,
    /// Unknown fields carried through parse/emit untouched.
    #[serde(flatten, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, serde_json::Value>,
}

/// One scored task trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskRecord {
    pub task_id: String,
    pub benchmark: Benchmark,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shard: Option<String>,
    pub agent: String,
    pub condition: Condition,
    pub quality: f64,
    pub cost_usd: f64,
    pub latency_s: f64,
    #[serde(default)]
    pub steps: Vec<StepEvent>,
    #[serde(flatten, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, serde_json::Value>,
}

/// Identity of one (agent, benchmark, condition) evaluation cell.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellKey {
    pub agent: String,
    pub benchmark: Benchmark,
    pub condition: Condition,
}

impl CellKey {
    pub fn of(record: &TaskRecord) -> Self {
        Self {
            agent: record.agent.clone(),
            benchmark: record.benchmark,
            condition: record.condition,
        }
    }
}

impl fmt::Display for CellKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.agent, self.benchmark, self.condition)
    }
}

impl TaskRecord {
    /// Full dataset key: cell plus task id.
    pub fn key(&self) -> (CellKey, String) {
        (CellKey::of(self), self.task_id.clone())
    }

    pub fn key_string(&self) -> String {
        format!("{}/{}/{}/{}", self.agent, self.benchmark, self.condition, self.task_id)
    }
}

/// The delegation tool name every orchestrator shares.
pub const CALL_MODEL_TOOL: &str = "call_model";
/// The on-demand profile channel.
pub const READ_PROFILE_TOOL: &str = "read_profile";
/// Infrastructure tools excluded from graded skill statistics.
pub const INFRA_TOOLS: [&str; 2] = [CALL_MODEL_TOOL, READ_PROFILE_TOOL];
/// Hard cap on peer calls per task.
pub const DELEGATION_CAP: usize = 10;

/// One observed `call_model` invocation, extracted from a record's steps.
#[derive(Debug, Clone, PartialEq)]
pub struct Delegation {
    pub cell: CellKey,
    pub task_id: String,
    pub step_index: usize,
    pub peer: String,
    pub subtask: String,
    pub budget_usd: f64,
}

#[derive(Deserialize)]
struct CallModelArgs {
    #[serde(alias = "name")]
    model: String,
    #[serde(default)]
    subtask: String,
    #[serde(default)]
    budget_usd: f64,
}

/// Extract well-formed delegations from a record, in step order. Steps whose
/// `call_model` arguments fail to parse are skipped here and reported by
/// [`validate_record`].
pub fn extract_delegations(record: &TaskRecord) -> Vec<Delegation> {
    let mut out = Vec::new();
    for step in &record.steps {
        for call in &step.tool_calls {
            if call.name != CALL_MODEL_TOOL {
                continue;
            }
            if let Ok(args) = serde_json::from_str::<CallModelArgs>(&call.args_text) {
                out.push(Delegation {
                    cell: CellKey::of(record),
                    task_id: record.task_id.clone(),
                    step_index: step.index,
                    peer: args.model,
                    subtask: args.subtask,
                    budget_usd: args.budget_usd,
                });
            }
        }
    }
    out
}

/// Count of `call_model` invocations in a record, well-formed or not.
pub fn count_call_model(record: &TaskRecord) -> usize {
    record
        .steps
        .iter()
        .flat_map(|s| &s.tool_calls)
        .filter(|c| c.name == CALL_MODEL_TOOL)
        .count()
}

/// Canonical task id: tau_bench ids carry their shard prefix so
/// `airline:task-0` stays distinct from `retail:task-0`; other suites pass
/// through unchanged.
pub fn canonical_task_id(
    benchmark: Benchmark,
    shard: Option<&str>,
    raw_id: &str,
) -> Result<String> {
    match benchmark {
        Benchmark::TauBench => match shard {
            Some(s) => {
                let prefix = format!("{s}:");
                if raw_id.starts_with(&prefix) {
                    Ok(raw_id.to_string())
                } else {
                    Ok(format!("{s}:{raw_id}"))
                }
            }
            None => Err(Error::MissingShard { raw_id: raw_id.to_string() }),
        },
        _ => Ok(raw_id.to_string()),
    }
}

/// One invariant violation found in a record. Violations are data, not
/// failures: validation never errors.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub cell: CellKey,
    pub task_id: String,
    pub message: String,
}

impl Violation {
    /// Report line format: `<cell>\t<task_id>\t<message>`.
    pub fn report_line(&self) -> String {
        format!("{}\t{}\t{}", self.cell, self.task_id, self.message)
    }
}

/// Check every per-record invariant plus delegation membership against the
/// pool. Empty output means the record is clean.
pub fn validate_record(record: &TaskRecord, pool: &PoolRegistry) -> Vec<Violation> {
    let cell = CellKey::of(record);
    let mut out = Vec::new();
    let mut push = |message: String| {
        out.push(Violation { cell: cell.clone(), task_id: record.task_id.clone(), message })
    };

    if !(0.0..=1.0).contains(&record.quality) {
        push(format!("quality {} outside [0, 1]", record.quality));
    }
    if record.cost_usd < 0.0 {
        push(format!("negative cost_usd {}", record.cost_usd));
    }
    if record.latency_s < 0.0 {
        push(format!("negative latency_s {}", record.latency_s));
    }
    if record.benchmark == Benchmark::TauBench && record.shard.is_none() {
        push("tau_bench record missing shard".to_string());
    }

    let mut prev_index: Option<usize> = None;
    for step in &record.steps {
        if let Some(prev) = prev_index {
            if step.index <= prev {
                push(format!("step index {} not strictly increasing after {}", step.index, prev));
            }
        }
        prev_index = Some(step.index);
        if step.role != Role::Assistant && !step.tool_calls.is_empty() {
            push(format!("step {} has role {:?} but carries tool calls", step.index, step.role));
        }
        for call in &step.tool_calls {
            if call.name.is_empty() {
                push(format!("step {} has a tool call with an empty name", step.index));
            }
            if call.name == CALL_MODEL_TOOL
                && serde_json::from_str::<CallModelArgs>(&call.args_text).is_err()
            {
                push(format!("step {} has malformed call_model arguments", step.index));
            }
        }
    }

    let n_delegations = count_call_model(record);
    if n_delegations > DELEGATION_CAP {
        push(format!("delegation cap exceeded: {n_delegations} call_model invocations (cap {DELEGATION_CAP})"));
    }
    for d in extract_delegations(record) {
        if d.peer == record.agent {
            push(format!("step {}: self-delegation to {:?}", d.step_index, d.peer));
        } else if !pool.contains(&d.peer) {
            push(format!("step {}: unknown peer {:?}", d.step_index, d.peer));
        }
        if d.budget_usd < 0.0 {
            push(format!("step {}: negative delegation budget {}", d.step_index, d.budget_usd));
        }
    }

    out
}

/// Validate a whole dataset: per-record invariants plus key uniqueness.
pub fn validate_dataset(records: &[TaskRecord], pool: &PoolRegistry) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen: BTreeMap<(CellKey, String), usize> = BTreeMap::new();
    for (i, record) in records.iter().enumerate() {
        out.extend(validate_record(record, pool));
        if let Some(first) = seen.insert(record.key(), i) {
            out.push(Violation {
                cell: CellKey::of(record),
                task_id: record.task_id.clone(),
                message: format!("duplicate (cell, task_id) key, first seen at record {first}"),
            });
        }
    }
    out
}

/// Parse a plain JSON-lines stream of task records, preserving stream order.
///
/// Errors name the offending 1-based line number; duplicate
/// (agent, benchmark, condition, task_id) keys are rejected outright.
pub fn parse_records(reader: impl BufRead) -> Result<Vec<TaskRecord>> {
    let mut records = Vec::new();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: TaskRecord = serde_json::from_str(&line).map_err(|e| Error::MalformedLine {
            line: line_no,
            message: e.to_string(),
        })?;
        let key = record.key_string();
        if let Some(first_line) = seen.insert(key.clone(), line_no) {
            return Err(Error::DuplicateKey { key, first_line });
        }
        records.push(record);
    }
    Ok(records)
}

/// Parse a gzip-compressed JSON-lines stream.
pub fn parse_records_gz(reader: impl Read) -> Result<Vec<TaskRecord>> {
    let decoder = flate2::read::MultiGzDecoder::new(reader);
    parse_records(BufReader::new(decoder))
}

/// Canonical single-line serialization of one record.
pub fn emit_record_line(record: &TaskRecord) -> String {
    serde_json::to_string(record).expect("record serialization is infallible")
}

/// Emit records as plain JSON lines.
pub fn emit_records(records: &[TaskRecord], mut writer: impl Write) -> Result<()> {
    for r in records {
        writer.write_all(emit_record_line(r).as_bytes())?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// Emit records as gzip-compressed JSON lines. Header mtime is pinned to
/// zero so identical inputs give identical bytes.
pub fn emit_records_gz(records: &[TaskRecord], writer: impl Write) -> Result<()> {
    let mut encoder = flate2::GzBuilder::new()
        .mtime(0)
        .write(writer, flate2::Compression::new(6));
    emit_records(records, &mut encoder)?;
    encoder.finish()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(index: usize, role: Role, text: &str, calls: Vec<ToolCall>) -> StepEvent {
        StepEvent {
            index,
            role,
            text: text.to_string(),
            tool_calls: calls,
            prompt_tokens: None,
            completion_tokens: None,
            finish_reason: String::new(),
            extra: BTreeMap::new(),
        }
    }

    fn call(name: &str, args: &str) -> ToolCall {
        ToolCall { name: name.to_string(), args_text: args.to_string() }
    }

    fn record(task_id: &str) -> TaskRecord {
        TaskRecord {
            task_id: task_id.to_string(),
            benchmark: Benchmark::Gaia,
            shard: None,
            agent: "gpt-5.5".to_string(),
            condition: Condition::Blind,
            quality: 0.5,
            cost_usd: 0.1,
            latency_s: 3.0,
            steps: vec![
                step(0, Role::User, "Task.", vec![]),
                step(1, Role::Assistant, "", vec![call("web_search", "{\"query\":\"x\"}")]),
                step(2, Role::Assistant, "Answer.", vec![]),
            ],
            extra: BTreeMap::new(),
        }
    }

    #[test]
    fn canonical_id_prefixes_tau_bench_shards() {
        assert_eq!(
            canonical_task_id(Benchmark::TauBench, Some("airline"), "task-0").unwrap(),
            "airline:task-0"
        );
        assert_eq!(
            canonical_task_id(Benchmark::Gaia, None, "e1fc63a2").unwrap(),
            "e1fc63a2"
        );
        let retail = canonical_task_id(Benchmark::TauBench, Some("retail"), "task-0").unwrap();
        assert_eq!(retail, "retail:task-0");
        assert_ne!(retail, "airline:task-0");
        assert!(matches!(
            canonical_task_id(Benchmark::TauBench, None, "task-0"),
            Err(Error::MissingShard { .. })
        ));
        // Already-canonical ids pass through.
        assert_eq!(
            canonical_task_id(Benchmark::TauBench, Some("airline"), "airline:task-0").unwrap(),
            "airline:task-0"
        );
    }

    #[test]
    fn parse_empty_stream_gives_empty_list() {
        assert!(parse_records(std::io::Cursor::new("")).unwrap().is_empty());
    }

    #[test]
    fn parse_round_trips_through_emitter() {
        let r = record("t-1");
        let mut buf = Vec::new();
        emit_records(std::slice::from_ref(&r), &mut buf).unwrap();
        let parsed = parse_records(std::io::Cursor::new(buf.clone())).unwrap();
        assert_eq!(parsed.len(), 1);
        assert_eq!(parsed[0], r);
        assert_eq!(parsed[0].quality, 0.5);
        assert_eq!(parsed[0].steps.len(), 3);
        // Byte-level identity of the canonical line.
        let mut buf2 = Vec::new();
        emit_records(&parsed, &mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn gz_round_trip_is_byte_stable() {
        let rs = vec![record("t-1"), record("t-2")];
        let mut a = Vec::new();
        let mut b = Vec::new();
        emit_records_gz(&rs, &mut a).unwrap();
        emit_records_gz(&rs, &mut b).unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_records_gz(std::io::Cursor::new(a)).unwrap(), rs);
    }

    #[test]
    fn duplicate_key_names_the_duplicate() {
        let r = record("t-1");
        let mut buf = Vec::new();
        emit_records(&[r.clone(), r], &mut buf).unwrap();
        match parse_records(std::io::Cursor::new(buf)) {
            Err(Error::DuplicateKey { key, first_line }) => {
                assert!(key.contains("t-1"), "key was {key}");
                assert_eq!(first_line, 1);
            }
            other => panic!("expected duplicate-key error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_line_names_the_line_number() {
        let input = format!("{}\nnot json\n", emit_record_line(&record("t-1")));
        match parse_records(std::io::Cursor::new(input)) {
            Err(Error::MalformedLine { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected malformed-line error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_fields_are_preserved_opaquely() {
        let line = "{\"task_id\":\"t\",\"benchmark\":\"gaia\",\"agent\":\"gpt-5.5\",\
                    \"condition\":\"blind\",\"quality\":1.0,\"cost_usd\":0.0,\"latency_s\":0.0,\
                    \"steps\":[],\"run_zip\":\"a.zip\"}";
        let parsed = parse_records(std::io::Cursor::new(line)).unwrap();
        assert_eq!(parsed[0].extra["run_zip"], serde_json::json!("a.zip"));
        assert!(emit_record_line(&parsed[0]).contains("run_zip"));
    }

    #[test]
    fn clean_record_validates_empty() {
        let pool = PoolRegistry::reference();
        assert!(validate_record(&record("t-1"), &pool).is_empty());
    }

    #[test]
    fn delegation_cap_violation_at_eleven_calls() {
        let pool = PoolRegistry::reference();
        let mut r = record("t-1");
        r.steps = (0..11)
            .map(|i| {
                step(
                    i,
                    Role::Assistant,
                    "",
                    vec![call(
                        CALL_MODEL_TOOL,
                        "{\"model\":\"claude-opus-4.7\",\"subtask\":\"s\",\"budget_usd\":0.1}",
                    )],
                )
            })
            .collect();
        let violations = validate_record(&r, &pool);
        assert!(
            violations.iter().any(|v| v.message.contains("delegation cap exceeded")),
            "got {violations:?}"
        );
        // Ten calls is within the cap.
        r.steps.truncate(10);
        assert!(validate_record(&r, &pool).is_empty());
    }

    #[test]
    fn unknown_peer_and_self_delegation_flagged() {
        let pool = PoolRegistry::reference();
        let mut r = record("t-1");
        r.steps.push(step(
            3,
            Role::Assistant,
            "",
            vec![call(CALL_MODEL_TOOL, "{\"model\":\"mystery-model\",\"subtask\":\"s\"}")],
        ));
        let violations = validate_record(&r, &pool);
        assert!(violations.iter().any(|v| v.message.contains("unknown peer")));

        let mut r2 = record("t-2");
        r2.steps.push(step(
            3,
            Role::Assistant,
            "",
            vec![call(CALL_MODEL_TOOL, "{\"model\":\"gpt-5.5\",\"subtask\":\"s\"}")],
        ));
        let violations = validate_record(&r2, &pool);
        assert!(violations.iter().any(|v| v.message.contains("self-delegation")));
    }

    #[test]
    fn non_assistant_tool_calls_and_bad_indices_flagged() {
        let pool = PoolRegistry::reference();
        let mut r = record("t-1");
        r.steps = vec![
            step(0, Role::ToolResult, "result", vec![call("x", "{}")]),
            step(0, Role::Assistant, "again index zero", vec![]),
        ];
        let violations = validate_record(&r, &pool);
        assert!(violations.iter().any(|v| v.message.contains("carries tool calls")));
        assert!(violations.iter().any(|v| v.message.contains("strictly increasing")));
    }

    #[test]
    fn dataset_duplicate_reported_as_violation() {
        let pool = PoolRegistry::reference();
        let rs = vec![record("t-1"), record("t-1")];
        let violations = validate_dataset(&rs, &pool);
        assert!(violations.iter().any(|v| v.message.contains("duplicate (cell, task_id)")));
    }

    #[test]
    fn violation_report_line_is_tab_separated() {
        let v = Violation {
            cell: CellKey {
                agent: "gpt-5.5".into(),
                benchmark: Benchmark::Gaia,
                condition: Condition::Blind,
            },
            task_id: "t-9".into(),
            message: "unknown peer".into(),
        };
        assert_eq!(v.report_line(), "gpt-5.5/gaia/blind\tt-9\tunknown peer");
    }

    #[test]
    fn reference_pool_shape() {
        let pool = PoolRegistry::reference();
        assert_eq!(pool.len(), 11);
        let vendors: std::collections::BTreeSet<_> =
            pool.entries.iter().map(|e| e.vendor.as_str()).collect();
        assert_eq!(vendors.len(), 7);
        assert_eq!(pool.vendor_count("openai"), 2);
        assert_eq!(pool.vendor_of("kimi-k2.6"), Some("moonshot"));
    }
}
