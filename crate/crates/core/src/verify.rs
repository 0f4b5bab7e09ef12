//! Symbolic consistency checking between a prototype's metadata and a
//! (possibly externally concretized) candidate's metadata, plus answer
//! re-derivation.
//!
//! The hard check maps both sides into generic-label space through their own
//! name maps and then demands exact equality of every constraint field:
//! renamings pass, any numeric drift fails with a diff naming the field.

use serde::Serialize;
use serde_json::Value;

use crate::metadata::{instance_of, InstanceMetadata, MetadataError};
use crate::model::Answer;
use crate::record::InstanceRecord;
use crate::solver::solve_optimal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldDiff {
    pub path: String,
    pub prototype: String,
    pub candidate: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "issue", rename_all = "snake_case")]
pub enum NameMapIssue {
    /// A concrete name appears in the metadata but not in the name map.
    MissingMapping {
        side: &'static str,
        kind: &'static str,
        name: String,
    },
    /// Two concrete names map to the same generic label.
    DuplicateTarget {
        side: &'static str,
        kind: &'static str,
        target: String,
    },
    /// A generic label expected from the prototype is never mapped to.
    MissingTarget {
        side: &'static str,
        kind: &'static str,
        target: String,
    },
    /// A mapping points at a label the prototype does not use.
    UnknownTarget {
        side: &'static str,
        kind: &'static str,
        name: String,
        target: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub diffs: Vec<FieldDiff>,
    pub name_map_issues: Vec<NameMapIssue>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn mapped<'a>(map: &'a std::collections::BTreeMap<String, String>, name: &'a str) -> &'a str {
    map.get(name).map(String::as_str).unwrap_or(name)
}

/// Project the metadata into generic-label space via its own name maps. The
/// name maps themselves are excluded; order-insensitive collections are
/// sorted so key order never produces spurious diffs.
fn canonical_value(meta: &InstanceMetadata) -> Value {
    let mut tasks = serde_json::Map::new();
    for t in &meta.tasks {
        tasks.insert(
            mapped(&meta.task_name_map, &t.name).to_string(),
            serde_json::json!({ "duration": t.duration, "unit": t.unit }),
        );
    }

    let mut agents: Vec<String> = meta
        .agents
        .iter()
        .map(|a| mapped(&meta.agent_name_map, a).to_string())
        .collect();
    agents.sort();

    let mut dependencies: Vec<[String; 2]> = meta
        .dependencies
        .iter()
        .map(|[p, s]| {
            [
                mapped(&meta.task_name_map, p).to_string(),
                mapped(&meta.task_name_map, s).to_string(),
            ]
        })
        .collect();
    dependencies.sort();

    let remap_keys = |value: Value| -> Value {
        match value {
            Value::Object(map) => Value::Object(
                map.into_iter()
                    .map(|(k, v)| (mapped(&meta.agent_name_map, &k).to_string(), v))
                    .collect(),
            ),
            other => other,
        }
    };

    let mut root = serde_json::Map::new();
    root.insert("category".into(), serde_json::to_value(meta.category).unwrap());
    root.insert("project_start".into(), Value::String(meta.project_start.clone()));
    root.insert("tasks".into(), Value::Object(tasks));
    root.insert("agents".into(), serde_json::to_value(agents).unwrap());
    root.insert(
        "dependencies".into(),
        serde_json::to_value(dependencies).unwrap(),
    );
    root.insert(
        "dependency_graph".into(),
        Value::String(meta.dependency_graph.clone()),
    );
    root.insert(
        "agent_constraints".into(),
        remap_keys(serde_json::to_value(&meta.agent_constraints).unwrap()),
    );
    if let Some(gmt) = &meta.agent_constraints_gmt {
        root.insert(
            "agent_constraints_gmt".into(),
            remap_keys(serde_json::to_value(gmt).unwrap()),
        );
    }
    if let Some(dates) = &meta.agent_unavailable_dates {
        root.insert(
            "agent_unavailable_dates".into(),
            remap_keys(serde_json::to_value(dates).unwrap()),
        );
    }
    Value::Object(root)
}

fn render_leaf(v: Option<&Value>) -> String {
    match v {
        None => "<absent>".to_string(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

fn join_path(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn diff_values(prefix: &str, proto: &Value, cand: &Value, out: &mut Vec<FieldDiff>) {
    match (proto, cand) {
        (Value::Object(p), Value::Object(c)) => {
            let keys: std::collections::BTreeSet<&String> = p.keys().chain(c.keys()).collect();
            for key in keys {
                match (p.get(key.as_str()), c.get(key.as_str())) {
                    (Some(pv), Some(cv)) => diff_values(&join_path(prefix, key), pv, cv, out),
                    (pv, cv) => out.push(FieldDiff {
                        path: join_path(prefix, key),
                        prototype: render_leaf(pv),
                        candidate: render_leaf(cv),
                    }),
                }
            }
        }
        (Value::Array(p), Value::Array(c)) => {
            if p.len() != c.len() {
                out.push(FieldDiff {
                    path: format!("{prefix}.length"),
                    prototype: p.len().to_string(),
                    candidate: c.len().to_string(),
                });
            }
            for (i, (pv, cv)) in p.iter().zip(c.iter()).enumerate() {
                diff_values(&format!("{prefix}[{i}]"), pv, cv, out);
            }
        }
        (p, c) if p == c => {}
        (p, c) => out.push(FieldDiff {
            path: prefix.to_string(),
            prototype: render_leaf(Some(p)),
            candidate: render_leaf(Some(c)),
        }),
    }
}

fn audit_side(
    side: &'static str,
    meta: &InstanceMetadata,
    expected_tasks: &[String],
    expected_agents: &[String],
    out: &mut Vec<NameMapIssue>,
) {
    audit_map(
        side,
        "task",
        meta.tasks.iter().map(|t| t.name.as_str()),
        &meta.task_name_map,
        expected_tasks,
        out,
    );
    audit_map(
        side,
        "agent",
        meta.agents.iter().map(String::as_str),
        &meta.agent_name_map,
        expected_agents,
        out,
    );
}

fn audit_map<'a>(
    side: &'static str,
    kind: &'static str,
    used_names: impl Iterator<Item = &'a str>,
    map: &std::collections::BTreeMap<String, String>,
    expected: &[String],
    out: &mut Vec<NameMapIssue>,
) {
    for name in used_names {
        if !map.contains_key(name) {
            out.push(NameMapIssue::MissingMapping {
                side,
                kind,
                name: name.to_string(),
            });
        }
    }
    for (name, target) in map {
        if !expected.contains(target) {
            out.push(NameMapIssue::UnknownTarget {
                side,
                kind,
                name: name.clone(),
                target: target.clone(),
            });
        }
    }
    for target in expected {
        let n = map.values().filter(|t| *t == target).count();
        if n == 0 {
            out.push(NameMapIssue::MissingTarget {
                side,
                kind,
                target: target.clone(),
            });
        } else if n > 1 {
            out.push(NameMapIssue::DuplicateTarget {
                side,
                kind,
                target: target.clone(),
            });
        }
    }
}

/// Symbolic verification that a candidate's metadata preserves the
/// prototype's constraints exactly, modulo the declared renamings.
pub fn hard_check(prototype: &InstanceMetadata, candidate: &InstanceMetadata) -> CheckReport {
    // The prototype's own map targets define the generic vocabulary both
    // sides must cover bijectively.
    let mut expected_tasks: Vec<String> = prototype.task_name_map.values().cloned().collect();
    expected_tasks.sort();
    expected_tasks.dedup();
    let mut expected_agents: Vec<String> = prototype.agent_name_map.values().cloned().collect();
    expected_agents.sort();
    expected_agents.dedup();

    let mut name_map_issues = Vec::new();
    audit_side(
        "prototype",
        prototype,
        &expected_tasks,
        &expected_agents,
        &mut name_map_issues,
    );
    audit_side(
        "candidate",
        candidate,
        &expected_tasks,
        &expected_agents,
        &mut name_map_issues,
    );

    let mut diffs = Vec::new();
    diff_values(
        "",
        &canonical_value(prototype),
        &canonical_value(candidate),
        &mut diffs,
    );

    CheckReport {
        verdict: if diffs.is_empty() && name_map_issues.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        diffs,
        name_map_issues,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecheckOutcome {
    Pass,
    Mismatch {
        expected: Option<String>,
        stored: String,
        reason: Option<String>,
    },
}

impl RecheckOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, RecheckOutcome::Pass)
    }
}

/// Re-derive the answer from a record's metadata and compare it to the
/// stored one. An infeasible instance surfaces as a mismatch with a reason.
pub fn recheck_answer(record: &InstanceRecord) -> Result<RecheckOutcome, MetadataError> {
    let instance = instance_of(&record.metadata)?;
    match solve_optimal(&instance) {
        Ok(outcome) => {
            let expected = outcome.answer.to_string();
            let stored_matches = Answer::parse(record.category, &record.answer)
                .map(|stored| stored == outcome.answer)
                .unwrap_or(false);
            if stored_matches {
                Ok(RecheckOutcome::Pass)
            } else {
                Ok(RecheckOutcome::Mismatch {
                    expected: Some(expected),
                    stored: record.answer.clone(),
                    reason: None,
                })
            }
        }
        Err(e) => Ok(RecheckOutcome::Mismatch {
            expected: None,
            stored: record.answer.clone(),
            reason: Some(e.to_string()),
        }),
    }
}
