//! Offline substrate for studying emergent delegation in agentic
//! trajectories: record schema and parsing, the frozen rule-based step
//! tagger, Stage-1 skill profiles and C2 cards, the per-cell metric suite,
//! statistical inference, and a synthetic simulator with known ground
//! truth so every stage is checkable against brute-force oracles.

pub mod audit;
pub mod error;
pub mod metrics;
pub mod profiles;
pub mod record;
pub mod rng;
pub mod simulator;
pub mod split;
pub mod stats;
pub mod tagger;

pub use error::{Error, Result};
pub use record::{
    Benchmark, CellKey, Condition, Delegation, PoolEntry, PoolRegistry, Role, StepEvent,
    TaskRecord, Tier, ToolCall,
};
pub use tagger::{SkillId, StepTag, Tagger, TaggerConfig};
