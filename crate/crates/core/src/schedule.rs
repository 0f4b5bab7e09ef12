//! Candidate schedules and feasibility checking.
//!
//! `validate_schedule` is the single arbiter of feasibility: the optimizing
//! solver and the brute-force oracle both defer to it, and it reports every
//! violated constraint rather than stopping at the first.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Answer, Availability, ProblemInstance};
use crate::time::{DayDate, Instant, MINUTES_PER_DAY, MINUTES_PER_HOUR};

/// Occupied slots of one task: a contiguous hour block (short) or the ordered
/// working dates (long, pausable).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TaskSlots {
    Hours { start: Instant },
    Days { days: Vec<DayDate> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleEntry {
    pub task: usize,
    pub participant: usize,
    pub slots: TaskSlots,
}

/// One entry per task; completion is the latest end over all entries.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schedule {
    pub entries: Vec<ScheduleEntry>,
}

impl Schedule {
    pub fn completion(&self, instance: &ProblemInstance) -> Option<Answer> {
        match instance.category {
            crate::time::Category::Short => self
                .entries
                .iter()
                .map(|e| entry_end_instant(instance, e))
                .max()
                .map(Answer::Time),
            crate::time::Category::Long => self
                .entries
                .iter()
                .filter_map(|e| match &e.slots {
                    TaskSlots::Days { days } => days.last().copied(),
                    TaskSlots::Hours { .. } => None,
                })
                .max()
                .map(Answer::Date),
        }
    }
}

fn entry_end_instant(instance: &ProblemInstance, entry: &ScheduleEntry) -> Instant {
    match &entry.slots {
        TaskSlots::Hours { start } => {
            start.add_hours(instance.tasks[entry.task].duration as i64)
        }
        TaskSlots::Days { days } => days
            .last()
            .map(|d| d.add_days(1).midnight())
            .unwrap_or(instance.project_start),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    ProjectStart,
    Dependency,
    Availability,
    MealBreakOverlap,
    BreakBetween,
    BreakAfter,
    Unavailability,
    Horizon,
    Overlap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub task: Option<String>,
    pub participant: Option<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("unknown task index {0}")]
    UnknownTask(usize),
    #[error("unknown participant index {0}")]
    UnknownParticipant(usize),
    #[error("task `{0}` appears more than once")]
    DuplicateEntry(String),
    #[error("task `{0}` has no schedule entry")]
    MissingEntry(String),
    #[error("task `{0}`: slot kind does not match the instance category")]
    SlotKindMismatch(String),
    #[error("task `{task}`: {got} scheduled days for a {expected}-day duration")]
    DayCountMismatch {
        task: String,
        got: usize,
        expected: u32,
    },
    #[error("task `{0}`: scheduled days must be strictly increasing")]
    DaysNotIncreasing(String),
}

struct EntryView<'a> {
    entry: &'a ScheduleEntry,
    /// Start/end instants; for long entries the span covers first..last day.
    start: Instant,
    end: Instant,
    first_day: DayDate,
    last_day: DayDate,
}

/// Check a candidate schedule against every constraint of the instance.
/// Returns the full violation list (empty means feasible) or a reference
/// error when the schedule does not structurally match the instance.
pub fn validate_schedule(
    instance: &ProblemInstance,
    schedule: &Schedule,
) -> Result<Vec<Violation>, ScheduleError> {
    let views = structural_check(instance, schedule)?;
    let mut violations = Vec::new();

    check_project_start(instance, &views, &mut violations);
    check_dependencies(instance, &views, &mut violations);
    check_availability(instance, &views, &mut violations);
    check_participant_conflicts(instance, &views, &mut violations);
    check_horizon(instance, &views, &mut violations);

    Ok(violations)
}

/// Fast feasibility probe used by the search loops; identical semantics to
/// `validate_schedule(..).map(|v| v.is_empty())`.
pub fn is_feasible(instance: &ProblemInstance, schedule: &Schedule) -> bool {
    matches!(validate_schedule(instance, schedule), Ok(v) if v.is_empty())
}

fn structural_check<'a>(
    instance: &ProblemInstance,
    schedule: &'a Schedule,
) -> Result<Vec<EntryView<'a>>, ScheduleError> {
    let mut seen = vec![false; instance.tasks.len()];
    let mut views = Vec::with_capacity(schedule.entries.len());
    for entry in &schedule.entries {
        let task = instance
            .tasks
            .get(entry.task)
            .ok_or(ScheduleError::UnknownTask(entry.task))?;
        if entry.participant >= instance.participants.len() {
            return Err(ScheduleError::UnknownParticipant(entry.participant));
        }
        if seen[entry.task] {
            return Err(ScheduleError::DuplicateEntry(task.name.clone()));
        }
        seen[entry.task] = true;

        let view = match (&entry.slots, instance.category) {
            (TaskSlots::Hours { start }, crate::time::Category::Short) => {
                let end = start.add_hours(task.duration as i64);
                EntryView {
                    entry,
                    start: *start,
                    end,
                    first_day: start.date(),
                    last_day: end.date(),
                }
            }
            (TaskSlots::Days { days }, crate::time::Category::Long) => {
                if days.len() != task.duration as usize {
                    return Err(ScheduleError::DayCountMismatch {
                        task: task.name.clone(),
                        got: days.len(),
                        expected: task.duration,
                    });
                }
                if days.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(ScheduleError::DaysNotIncreasing(task.name.clone()));
                }
                let first = days[0];
                let last = *days.last().expect("duration >= 1");
                EntryView {
                    entry,
                    start: first.midnight(),
                    end: last.add_days(1).midnight(),
                    first_day: first,
                    last_day: last,
                }
            }
            _ => return Err(ScheduleError::SlotKindMismatch(task.name.clone())),
        };
        views.push(view);
    }
    for (i, seen) in seen.iter().enumerate() {
        if !seen {
            return Err(ScheduleError::MissingEntry(instance.tasks[i].name.clone()));
        }
    }
    Ok(views)
}

fn task_name(instance: &ProblemInstance, view: &EntryView) -> String {
    instance.tasks[view.entry.task].name.clone()
}

fn participant_name(instance: &ProblemInstance, view: &EntryView) -> String {
    instance.participants[view.entry.participant].name.clone()
}

fn check_project_start(
    instance: &ProblemInstance,
    views: &[EntryView],
    out: &mut Vec<Violation>,
) {
    for v in views {
        if v.start < instance.project_start {
            out.push(Violation {
                kind: ViolationKind::ProjectStart,
                task: Some(task_name(instance, v)),
                participant: Some(participant_name(instance, v)),
                detail: format!(
                    "starts at {} before project start {}",
                    v.start, instance.project_start
                ),
            });
        }
    }
}

fn check_dependencies(
    instance: &ProblemInstance,
    views: &[EntryView],
    out: &mut Vec<Violation>,
) {
    for &(pred, succ) in &instance.dependencies.edges {
        let p = views.iter().find(|v| v.entry.task == pred).expect("structural");
        let s = views.iter().find(|v| v.entry.task == succ).expect("structural");
        // Finish-before-start: the successor may begin the slot after the
        // predecessor's last day (long) or the minute the predecessor ends
        // (short).
        let ok = match instance.category {
            crate::time::Category::Short => s.start >= p.end,
            crate::time::Category::Long => s.first_day > p.last_day,
        };
        if !ok {
            out.push(Violation {
                kind: ViolationKind::Dependency,
                task: Some(instance.tasks[succ].name.clone()),
                participant: None,
                detail: format!(
                    "`{}` must finish before `{}` starts",
                    instance.tasks[pred].name, instance.tasks[succ].name
                ),
            });
        }
    }
}

fn check_availability(
    instance: &ProblemInstance,
    views: &[EntryView],
    out: &mut Vec<Violation>,
) {
    for v in views {
        let participant = &instance.participants[v.entry.participant];
        match (&participant.availability, &v.entry.slots) {
            (
                Availability::Clock {
                    offset,
                    window,
                    meal,
                    ..
                },
                TaskSlots::Hours { start },
            ) => {
                let len = (v.end.minutes() - start.minutes()).min(MINUTES_PER_DAY) as u16;
                let local = (start.minutes() + offset.minutes_east())
                    .rem_euclid(MINUTES_PER_DAY) as u16;
                if !window.contains_range(local, len) {
                    out.push(Violation {
                        kind: ViolationKind::Availability,
                        task: Some(task_name(instance, v)),
                        participant: Some(participant.name.clone()),
                        detail: format!(
                            "{}..{} lies outside the working window",
                            v.start, v.end
                        ),
                    });
                }
                if let Some(meal) = meal {
                    if meal.overlaps_range(local, len) {
                        out.push(Violation {
                            kind: ViolationKind::MealBreakOverlap,
                            task: Some(task_name(instance, v)),
                            participant: Some(participant.name.clone()),
                            detail: format!("{}..{} overlaps the meal break", v.start, v.end),
                        });
                    }
                }
                let busy = crate::time::GmtInterval::new(v.start, v.end);
                if participant
                    .unavailable_gmt
                    .iter()
                    .any(|iv| iv.overlaps(busy))
                {
                    out.push(Violation {
                        kind: ViolationKind::Unavailability,
                        task: Some(task_name(instance, v)),
                        participant: Some(participant.name.clone()),
                        detail: format!(
                            "{}..{} overlaps a declared unavailable interval",
                            v.start, v.end
                        ),
                    });
                }
            }
            (Availability::Calendar { rule }, TaskSlots::Days { days }) => {
                for day in days {
                    if !rule.allows(day.weekday()) {
                        out.push(Violation {
                            kind: ViolationKind::Availability,
                            task: Some(task_name(instance, v)),
                            participant: Some(participant.name.clone()),
                            detail: format!("{day} ({}) is not a working day", day.weekday()),
                        });
                    }
                    if participant.unavailable_dates.contains(day) {
                        out.push(Violation {
                            kind: ViolationKind::Unavailability,
                            task: Some(task_name(instance, v)),
                            participant: Some(participant.name.clone()),
                            detail: format!("{day} is a declared unavailable date"),
                        });
                    }
                }
            }
            // Structural checks guarantee matching kinds.
            _ => unreachable!("slot kind checked structurally"),
        }
    }
}

fn check_participant_conflicts(
    instance: &ProblemInstance,
    views: &[EntryView],
    out: &mut Vec<Violation>,
) {
    for (pi, participant) in instance.participants.iter().enumerate() {
        let mut own: Vec<&EntryView> = views
            .iter()
            .filter(|v| v.entry.participant == pi)
            .collect();
        own.sort_by_key(|v| (v.start, v.entry.task));

        // One task at a time: occupied intervals (short) or first..last day
        // spans (long) of the same participant must not intersect, so a
        // participant never interleaves two tasks.
        for pair in own.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if b.start < a.end {
                out.push(Violation {
                    kind: ViolationKind::Overlap,
                    task: Some(task_name(instance, b)),
                    participant: Some(participant.name.clone()),
                    detail: format!(
                        "`{}` and `{}` both occupy {}",
                        task_name(instance, a),
                        task_name(instance, b),
                        participant.name
                    ),
                });
            }
        }

        if let Some(min_break) = participant.break_between {
            for pair in own.windows(2) {
                let (a, b) = (pair[0], pair[1]);
                let ok = match instance.category {
                    crate::time::Category::Short => {
                        b.start.minutes() - a.end.minutes()
                            >= min_break as i64 * MINUTES_PER_HOUR
                    }
                    crate::time::Category::Long => {
                        a.last_day.days_until(b.first_day) - 1 >= min_break as i64
                    }
                };
                if !ok {
                    out.push(Violation {
                        kind: ViolationKind::BreakBetween,
                        task: Some(task_name(instance, b)),
                        participant: Some(participant.name.clone()),
                        detail: format!(
                            "idle time between `{}` and `{}` is below the declared minimum of {} {}(s)",
                            task_name(instance, a),
                            task_name(instance, b),
                            min_break,
                            instance.category.slot_label(),
                        ),
                    });
                }
            }
        }

        if let Some(ba) = participant.break_after {
            check_break_after(instance, participant.name.as_str(), &own, ba, out);
        }
    }
}

/// Runs of consecutive worked slots may not exceed `max_consecutive`, and any
/// maximal run must be followed by at least `rest` idle slots before the
/// participant works again. Worked slots merge across task boundaries.
fn check_break_after(
    instance: &ProblemInstance,
    participant: &str,
    own: &[&EntryView],
    ba: crate::model::BreakAfter,
    out: &mut Vec<Violation>,
) {
    // Collect worked runs as [start, end) in minutes (short) or day numbers
    // (long), merging adjacent or overlapping pieces.
    let mut pieces: Vec<(i64, i64)> = Vec::new();
    for v in own {
        match &v.entry.slots {
            TaskSlots::Hours { .. } => {
                pieces.push((v.start.minutes(), v.end.minutes()));
            }
            TaskSlots::Days { days } => {
                for d in days {
                    pieces.push((d.day_number(), d.day_number() + 1));
                }
            }
        }
    }
    pieces.sort_unstable();
    let mut runs: Vec<(i64, i64)> = Vec::new();
    for (s, e) in pieces {
        match runs.last_mut() {
            Some(last) if s <= last.1 => last.1 = last.1.max(e),
            _ => runs.push((s, e)),
        }
    }

    let slot = match instance.category {
        crate::time::Category::Short => MINUTES_PER_HOUR,
        crate::time::Category::Long => 1,
    };
    let unit = instance.category.slot_label();
    for (i, &(s, e)) in runs.iter().enumerate() {
        let len = (e - s) / slot;
        if len > ba.max_consecutive as i64 {
            out.push(Violation {
                kind: ViolationKind::BreakAfter,
                task: None,
                participant: Some(participant.to_string()),
                detail: format!(
                    "{len} consecutive worked {unit}(s) exceed the limit of {}",
                    ba.max_consecutive
                ),
            });
        }
        if let Some(&(next_start, _)) = runs.get(i + 1) {
            let gap = (next_start - e) / slot;
            if gap < ba.rest as i64 {
                out.push(Violation {
                    kind: ViolationKind::BreakAfter,
                    task: None,
                    participant: Some(participant.to_string()),
                    detail: format!(
                        "only {gap} {unit}(s) of rest after a worked run; {} required",
                        ba.rest
                    ),
                });
            }
        }
    }
}

fn check_horizon(instance: &ProblemInstance, views: &[EntryView], out: &mut Vec<Violation>) {
    let horizon_end = instance.horizon_end();
    for v in views {
        if v.end > horizon_end {
            out.push(Violation {
                kind: ViolationKind::Horizon,
                task: Some(task_name(instance, v)),
                participant: None,
                detail: format!(
                    "ends at {} after the horizon {}",
                    v.end, horizon_end
                ),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        build_instance, DependencyType, DurationUnit, InstanceDraft, ParticipantDraft, TaskDraft,
    };
    use crate::time::{Category, ClockWindow, ZoneOffset};

    fn two_agent_short() -> ProblemInstance {
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

    fn hour_entry(task: usize, participant: usize, y: i64, mo: u32, d: u32, h: u16) -> ScheduleEntry {
        ScheduleEntry {
            task,
            participant,
            slots: TaskSlots::Hours {
                start: Instant::from_ymd_hm(y, mo, d, h, 0).unwrap(),
            },
        }
    }

    #[test]
    fn witness_schedule_is_feasible() {
        let instance = two_agent_short();
        let schedule = Schedule {
            entries: vec![
                hour_entry(0, 0, 2014, 12, 17, 1),
                hour_entry(1, 0, 2014, 12, 17, 6),
                hour_entry(2, 1, 2014, 12, 17, 14),
            ],
        };
        let violations = validate_schedule(&instance, &schedule).unwrap();
        assert!(violations.is_empty(), "{violations:?}");
        assert_eq!(
            schedule.completion(&instance).unwrap().to_string(),
            "2014-12-17 15:00 GMT"
        );
    }

    #[test]
    fn early_start_reports_project_start_violation() {
        let instance = two_agent_short();
        let schedule = Schedule {
            entries: vec![
                hour_entry(0, 0, 2014, 12, 16, 22),
                hour_entry(1, 0, 2014, 12, 17, 6),
                hour_entry(2, 1, 2014, 12, 17, 14),
            ],
        };
        let violations = validate_schedule(&instance, &schedule).unwrap();
        assert!(violations
            .iter()
            .any(|v| v.kind == ViolationKind::ProjectStart));
    }

    #[test]
    fn meal_break_overlap_is_reported_distinctly() {
        let instance = two_agent_short();
        // Agent1's meal is 15:00-16:00 AEST = 05:00-06:00 GMT.
        let schedule = Schedule {
            entries: vec![
                hour_entry(0, 0, 2014, 12, 17, 4),
                hour_entry(1, 1, 2014, 12, 17, 14),
                hour_entry(2, 1, 2014, 12, 17, 18),
            ],
        };
        let violations = validate_schedule(&instance, &schedule).unwrap();
        assert!(violations
            .iter()
            .any(|v| v.kind == ViolationKind::MealBreakOverlap));
        // 18:00 GMT is inside Agent2's meal (13:00-15:00 EST).
        assert_eq!(
            violations
                .iter()
                .filter(|v| v.kind == ViolationKind::MealBreakOverlap)
                .count(),
            2
        );
    }

    #[test]
    fn break_between_violation_detected() {
        let instance = two_agent_short();
        // Agent1 finishes Task A at 03:00 GMT; restarting at 05:00 leaves a
        // 2h gap against the declared 3h minimum (and hits the meal hour).
        let schedule = Schedule {
            entries: vec![
                hour_entry(0, 0, 2014, 12, 17, 1),
                hour_entry(1, 0, 2014, 12, 17, 4),
                hour_entry(2, 1, 2014, 12, 17, 14),
            ],
        };
        let violations = validate_schedule(&instance, &schedule).unwrap();
        assert!(violations
            .iter()
            .any(|v| v.kind == ViolationKind::BreakBetween));
    }

    #[test]
    fn missing_entry_is_a_reference_error() {
        let instance = two_agent_short();
        let schedule = Schedule {
            entries: vec![hour_entry(0, 0, 2014, 12, 17, 1)],
        };
        assert_eq!(
            validate_schedule(&instance, &schedule).unwrap_err(),
            ScheduleError::MissingEntry("Task B".into())
        );
    }

    #[test]
    fn unknown_participant_is_a_reference_error() {
        let instance = two_agent_short();
        let schedule = Schedule {
            entries: vec![
                hour_entry(0, 5, 2014, 12, 17, 1),
                hour_entry(1, 0, 2014, 12, 17, 6),
                hour_entry(2, 1, 2014, 12, 17, 14),
            ],
        };
        assert_eq!(
            validate_schedule(&instance, &schedule).unwrap_err(),
            ScheduleError::UnknownParticipant(5)
        );
    }
}
