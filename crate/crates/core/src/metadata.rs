//! Canonical JSON metadata for an instance's temporal constraints.
//!
//! The schema mirrors the structured metadata attached to each benchmark
//! row: `tasks`, `agents`, `dependencies`, `dependency_graph`, plus
//! `agent_constraints` / `agent_constraints_gmt` for short instances or
//! `agent_unavailable_dates` for long ones, and the name maps that tie
//! concrete task/agent names back to the generic prototype labels.
//!
//! `agent_constraints` is authoritative; `agent_constraints_gmt` is the
//! derived GMT view of each working window and meal break on the project
//! day, split at GMT midnight where a window straddles it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    build_instance, generic_agent_label, generic_task_label, Availability, BreakAfter,
    BuildError, DependencyType, DurationUnit, InstanceDraft, ParticipantDraft, ProblemInstance,
    TaskDraft, WorkingDayRule,
};
use crate::time::{
    format_clock, parse_clock, Category, ClockWindow, DayDate, GmtInterval, Instant, TimeError,
    MINUTES_PER_DAY,
};

#[derive(Debug, Error)]
pub enum MetadataError {
    #[error("{0}")]
    Time(#[from] TimeError),
    #[error("{0}")]
    Build(#[from] BuildError),
    #[error("agent `{agent}` is missing required field `{field}` for a {category} instance")]
    MissingField {
        agent: String,
        field: &'static str,
        category: Category,
    },
    #[error("unknown dependency graph notation `{0}`")]
    BadDependencyGraph(String),
    #[error("dependency graph `{notation}` does not match any known topology")]
    UnknownTopology { notation: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskMeta {
    pub name: String,
    pub duration: u32,
    pub unit: DurationUnit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BreakAfterMeta {
    pub max_consecutive: u32,
    pub rest: u32,
}

/// Per-agent constraint block. Clock fields are set for short instances,
/// `working_days` for long ones; breaks apply to both.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct AgentConstraintsMeta {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timezone: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub offset_hours: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub working_hours: Option<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub meal_break: Option<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub working_days: Option<WorkingDayRule>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub break_between: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub break_after: Option<BreakAfterMeta>,
    /// Short category: GMT instant pairs subtracted from availability.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub unavailable_gmt: Vec<[String; 2]>,
}

/// Derived GMT view of a short-instance agent's recurring windows on the
/// project day; clock pairs use `24:00` for the end-of-day boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct AgentGmtMeta {
    pub working_hours: Vec<[String; 2]>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub meal_break: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceMetadata {
    pub category: Category,
    /// `YYYY-MM-DD HH:MM GMT` (short) or `YYYY-MM-DD` (long).
    pub project_start: String,
    pub tasks: Vec<TaskMeta>,
    pub agents: Vec<String>,
    pub dependencies: Vec<[String; 2]>,
    /// Arrow notation over generic labels, e.g. `A->B,A->C`.
    pub dependency_graph: String,
    pub agent_constraints: BTreeMap<String, AgentConstraintsMeta>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub agent_constraints_gmt: Option<BTreeMap<String, AgentGmtMeta>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub agent_unavailable_dates: Option<BTreeMap<String, Vec<String>>>,
    /// Concrete task name -> generic label (`Task A`...).
    pub task_name_map: BTreeMap<String, String>,
    /// Concrete agent name -> generic label (`Agent1`...).
    pub agent_name_map: BTreeMap<String, String>,
}

fn window_strings(w: ClockWindow) -> [String; 2] {
    [
        format_clock(w.start_minute(), true),
        format_clock(w.end_minute(), true),
    ]
}

fn parse_window(pair: &[String; 2]) -> Result<ClockWindow, TimeError> {
    ClockWindow::new(parse_clock(&pair[0])?, parse_clock(&pair[1])?)
}

/// Maximal same-valued runs of `predicate` over the 24h from `start`,
/// split at GMT midnights, as padded clock pairs.
fn gmt_segments(start: Instant, predicate: impl Fn(Instant) -> bool) -> Vec<[String; 2]> {
    let mut segments = Vec::new();
    let mut run_start: Option<i64> = None;
    for i in 0..=MINUTES_PER_DAY {
        let t = start.add_minutes(i);
        let on = i < MINUTES_PER_DAY && predicate(t);
        match (run_start, on) {
            (None, true) => run_start = Some(i),
            (Some(s), false) => {
                let interval = GmtInterval::new(start.add_minutes(s), t);
                for (_, a, b) in interval.split_by_gmt_day() {
                    segments.push([format_clock(a, true), format_clock(b, true)]);
                }
                run_start = None;
            }
            _ => {}
        }
    }
    segments
}

/// Serialize an instance's scheduling-relevant constraints; the round trip
/// through [`instance_of`] is lossless.
pub fn metadata_of(instance: &ProblemInstance) -> InstanceMetadata {
    let category = instance.category;
    let project_start = match category {
        Category::Short => instance.project_start.to_string(),
        Category::Long => instance.start_date().to_string(),
    };
    let tasks: Vec<TaskMeta> = instance
        .tasks
        .iter()
        .map(|t| TaskMeta {
            name: t.name.clone(),
            duration: t.duration,
            unit: DurationUnit::for_category(category),
        })
        .collect();
    let agents: Vec<String> = instance.participants.iter().map(|p| p.name.clone()).collect();
    let dependencies = instance
        .dependencies
        .edges
        .iter()
        .map(|&(p, s)| {
            [
                instance.tasks[p].name.clone(),
                instance.tasks[s].name.clone(),
            ]
        })
        .collect();

    let mut agent_constraints = BTreeMap::new();
    let mut agent_gmt = BTreeMap::new();
    let mut agent_dates = BTreeMap::new();
    for p in &instance.participants {
        let mut meta = AgentConstraintsMeta {
            break_between: p.break_between,
            break_after: p.break_after.map(|b| BreakAfterMeta {
                max_consecutive: b.max_consecutive,
                rest: b.rest,
            }),
            ..AgentConstraintsMeta::default()
        };
        match &p.availability {
            Availability::Clock {
                zone_label,
                offset,
                window,
                meal,
            } => {
                meta.timezone = Some(zone_label.clone());
                meta.offset_hours = Some(offset.hours());
                meta.working_hours = Some(window_strings(*window));
                meta.meal_break = meal.map(window_strings);
                meta.unavailable_gmt = p
                    .unavailable_gmt
                    .iter()
                    .map(|iv| [iv.start.to_string(), iv.end.to_string()])
                    .collect();

                let offset = *offset;
                let window = *window;
                let meal = *meal;
                agent_gmt.insert(
                    p.name.clone(),
                    AgentGmtMeta {
                        working_hours: gmt_segments(instance.project_start, |t| {
                            let local = (t.minutes() + offset.minutes_east())
                                .rem_euclid(MINUTES_PER_DAY)
                                as u16;
                            window.contains_minute(local)
                        }),
                        meal_break: gmt_segments(instance.project_start, |t| {
                            let local = (t.minutes() + offset.minutes_east())
                                .rem_euclid(MINUTES_PER_DAY)
                                as u16;
                            meal.map_or(false, |m| m.contains_minute(local))
                        }),
                    },
                );
            }
            Availability::Calendar { rule } => {
                meta.working_days = Some(*rule);
                agent_dates.insert(
                    p.name.clone(),
                    p.unavailable_dates.iter().map(|d| d.to_string()).collect(),
                );
            }
        }
        agent_constraints.insert(p.name.clone(), meta);
    }

    InstanceMetadata {
        category,
        project_start,
        tasks,
        agents: agents.clone(),
        dependencies,
        dependency_graph: instance.dependencies.topology.arrow_notation(),
        agent_constraints,
        agent_constraints_gmt: match category {
            Category::Short => Some(agent_gmt),
            Category::Long => None,
        },
        agent_unavailable_dates: match category {
            Category::Short => None,
            Category::Long => Some(agent_dates),
        },
        task_name_map: instance
            .tasks
            .iter()
            .enumerate()
            .map(|(i, t)| (t.name.clone(), generic_task_label(i)))
            .collect(),
        agent_name_map: agents
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), generic_agent_label(i)))
            .collect(),
    }
}

/// Topology whose canonical arrow notation matches `notation`.
pub fn topology_from_notation(notation: &str) -> Option<DependencyType> {
    DependencyType::ALL
        .into_iter()
        .find(|t| t.arrow_notation() == notation)
}

/// Rebuild and validate the instance a metadata object describes.
pub fn instance_of(meta: &InstanceMetadata) -> Result<ProblemInstance, MetadataError> {
    let category = meta.category;
    let project_start = match category {
        Category::Short => meta.project_start.parse::<Instant>()?,
        Category::Long => meta.project_start.parse::<DayDate>()?.midnight(),
    };

    let topology = topology_from_notation(&meta.dependency_graph).ok_or_else(|| {
        MetadataError::UnknownTopology {
            notation: meta.dependency_graph.clone(),
        }
    })?;

    let tasks = meta
        .tasks
        .iter()
        .map(|t| TaskDraft {
            name: t.name.clone(),
            duration: t.duration,
            unit: t.unit,
        })
        .collect();

    let mut participants = Vec::new();
    for agent in &meta.agents {
        let c = meta.agent_constraints.get(agent).ok_or_else(|| {
            MetadataError::MissingField {
                agent: agent.clone(),
                field: "agent_constraints",
                category,
            }
        })?;
        let missing = |field: &'static str| MetadataError::MissingField {
            agent: agent.clone(),
            field,
            category,
        };
        let availability = match category {
            Category::Short => {
                let label = c.timezone.clone().ok_or_else(|| missing("timezone"))?;
                let offset = crate::time::ZoneOffset::new(
                    c.offset_hours.ok_or_else(|| missing("offset_hours"))?,
                )?;
                let window =
                    parse_window(c.working_hours.as_ref().ok_or_else(|| missing("working_hours"))?)?;
                let meal = c.meal_break.as_ref().map(parse_window).transpose()?;
                Availability::Clock {
                    zone_label: label,
                    offset,
                    window,
                    meal,
                }
            }
            Category::Long => Availability::Calendar {
                rule: c.working_days.ok_or_else(|| missing("working_days"))?,
            },
        };
        let unavailable_gmt = c
            .unavailable_gmt
            .iter()
            .map(|pair| {
                Ok(GmtInterval::new(
                    pair[0].parse::<Instant>()?,
                    pair[1].parse::<Instant>()?,
                ))
            })
            .collect::<Result<Vec<_>, TimeError>>()?;
        let unavailable_dates = meta
            .agent_unavailable_dates
            .as_ref()
            .and_then(|m| m.get(agent))
            .map(|dates| {
                dates
                    .iter()
                    .map(|d| d.parse::<DayDate>())
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?
            .unwrap_or_default();
        participants.push(ParticipantDraft {
            name: agent.clone(),
            availability,
            break_between: c.break_between,
            break_after: c.break_after.map(|b| BreakAfter {
                max_consecutive: b.max_consecutive,
                rest: b.rest,
            }),
            unavailable_gmt,
            unavailable_dates,
        });
    }

    let dependencies = meta
        .dependencies
        .iter()
        .map(|[p, s]| (p.clone(), s.clone()))
        .collect();

    Ok(build_instance(InstanceDraft {
        category,
        project_start,
        tasks,
        participants,
        topology,
        dependencies,
    })?)
}

/// Canonical single-line JSON; struct fields keep declaration order and maps
/// are sorted, so equal metadata always prints byte-identically.
pub fn canonical_json(meta: &InstanceMetadata) -> String {
    serde_json::to_string(meta).expect("metadata serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time::ZoneOffset;

    fn sample_short() -> ProblemInstance {
        build_instance(InstanceDraft {
            category: Category::Short,
            project_start: Instant::from_ymd_hm(2014, 12, 17, 0, 0).unwrap(),
            tasks: vec![
                TaskDraft { name: "Task A".into(), duration: 2, unit: DurationUnit::Hours },
                TaskDraft { name: "Task B".into(), duration: 1, unit: DurationUnit::Hours },
                TaskDraft { name: "Task C".into(), duration: 1, unit: DurationUnit::Hours },
            ],
            participants: vec![
                ParticipantDraft::clock(
                    "Agent1",
                    "AEST",
                    ZoneOffset::new(10).unwrap(),
                    ClockWindow::from_hours(11, 19).unwrap(),
                    Some(ClockWindow::from_hours(15, 16).unwrap()),
                )
                .with_break_between(3),
                ParticipantDraft::clock(
                    "Agent2",
                    "EST",
                    ZoneOffset::new(-5).unwrap(),
                    ClockWindow::from_hours(9, 17).unwrap(),
                    Some(ClockWindow::from_hours(13, 15).unwrap()),
                )
                .with_break_between(3),
            ],
            topology: DependencyType::Fork,
            dependencies: vec![],
        })
        .unwrap()
    }

    fn sample_long() -> ProblemInstance {
        build_instance(InstanceDraft {
            category: Category::Long,
            project_start: Instant::from_ymd_hm(2021, 9, 11, 0, 0).unwrap(),
            tasks: vec![
                TaskDraft { name: "Task A".into(), duration: 1, unit: DurationUnit::Days },
                TaskDraft { name: "Task B".into(), duration: 1, unit: DurationUnit::Days },
                TaskDraft { name: "Task C".into(), duration: 2, unit: DurationUnit::Days },
            ],
            participants: vec![
                ParticipantDraft::calendar("Agent1", WorkingDayRule::AnyDay)
                    .with_break_after(2, 1),
                ParticipantDraft::calendar("Agent2", WorkingDayRule::WeekdaysOnly)
                    .with_break_between(1)
                    .with_unavailable_date(DayDate::from_ymd(2021, 9, 13).unwrap()),
            ],
            topology: DependencyType::Fork,
            dependencies: vec![],
        })
        .unwrap()
    }

    #[test]
    fn short_metadata_has_expected_fields() {
        let meta = metadata_of(&sample_short());
        assert_eq!(
            meta.dependencies,
            vec![
                ["Task A".to_string(), "Task B".to_string()],
                ["Task A".to_string(), "Task C".to_string()],
            ]
        );
        assert_eq!(meta.dependency_graph, "A->B,A->C");
        let gmt = meta.agent_constraints_gmt.as_ref().unwrap();
        // 11:00-19:00 AEST is 01:00-09:00 GMT.
        assert_eq!(
            gmt["Agent1"].working_hours,
            vec![["01:00".to_string(), "09:00".to_string()]]
        );
        assert_eq!(
            gmt["Agent1"].meal_break,
            vec![["05:00".to_string(), "06:00".to_string()]]
        );
    }

    #[test]
    fn long_metadata_lists_unavailable_dates() {
        let meta = metadata_of(&sample_long());
        let dates = meta.agent_unavailable_dates.as_ref().unwrap();
        assert_eq!(dates["Agent2"], vec!["2021-09-13".to_string()]);
        assert!(meta.agent_constraints_gmt.is_none());
    }

    #[test]
    fn metadata_round_trip_is_identity() {
        for instance in [sample_short(), sample_long()] {
            let meta = metadata_of(&instance);
            let rebuilt = instance_of(&meta).unwrap();
            assert_eq!(rebuilt, instance);
            assert_eq!(metadata_of(&rebuilt), meta);
        }
    }

    #[test]
    fn canonical_json_is_stable() {
        let meta = metadata_of(&sample_short());
        let parsed: InstanceMetadata =
            serde_json::from_str(&canonical_json(&meta)).unwrap();
        assert_eq!(canonical_json(&parsed), canonical_json(&meta));
    }

    #[test]
    fn gmt_view_splits_windows_straddling_midnight() {
        let mut instance = sample_short();
        if let Availability::Clock { window, offset, meal, .. } =
            &mut instance.participants[0].availability
        {
            *window = ClockWindow::from_hours(8, 16).unwrap();
            *offset = ZoneOffset::new(10).unwrap();
            *meal = None;
        }
        instance.participants[0].break_between = None;
        let meta = metadata_of(&instance);
        let gmt = meta.agent_constraints_gmt.as_ref().unwrap();
        // 08:00-16:00 AEST covers 22:00-24:00 and 00:00-06:00 GMT on the
        // project day.
        assert_eq!(
            gmt["Agent1"].working_hours,
            vec![
                ["00:00".to_string(), "06:00".to_string()],
                ["22:00".to_string(), "24:00".to_string()],
            ]
        );
    }
}
