//! Temporal-constraint cooperative-scheduling engine and benchmark factory.
//!
//! The library solves two-participant, three-task scheduling problems
//! optimally by exhaustive search, procedurally generates verified benchmark
//! instances with template dialogues and structured metadata, symbolically
//! verifies concretized instances against their prototypes, and scores model
//! answers.

pub mod client;
pub mod dialogue;
pub mod eval;
pub mod generate;
pub mod metadata;
pub mod model;
pub mod oracle;
pub mod record;
pub mod schedule;
pub mod solver;
pub mod time;
pub mod verify;
pub mod zones;

pub use eval::{extract_answer, score, EvalReport, Extracted, Prediction};
pub use generate::{generate_prototype, random_baseline, GenerationConfig, Prototype};
pub use metadata::{instance_of, metadata_of, InstanceMetadata};
pub use model::{build_instance, Answer, DependencyType, ProblemInstance};
pub use oracle::brute_force_oracle;
pub use record::InstanceRecord;
pub use schedule::{validate_schedule, Schedule, Violation, ViolationKind};
pub use solver::{solve_optimal, SolveError, SolveOutcome};
pub use time::{Category, ClockWindow, DayDate, Instant, Weekday, ZoneOffset};
pub use verify::{hard_check, recheck_answer, CheckReport};
pub use zones::ZoneTable;
