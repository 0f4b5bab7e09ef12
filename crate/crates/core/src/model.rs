//! The problem vocabulary: tasks, participants, the constraint pool, the
//! three dependency topologies, and the validated problem instance.
//!
//! Every instance pairs exactly [`EXPECTED_TASKS`] tasks with
//! [`EXPECTED_PARTICIPANTS`] participants; the scheduler itself works on
//! lists, so these caps live in one place.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::time::{
    Category, ClockWindow, DayDate, GmtInterval, Instant, Weekday, ZoneOffset, MINUTES_PER_DAY,
};
use crate::zones::ZoneTable;

pub const EXPECTED_TASKS: usize = 3;
pub const EXPECTED_PARTICIPANTS: usize = 2;

/// Generic labels of the canonical prototype vocabulary, by position.
pub fn generic_task_label(index: usize) -> String {
    format!("Task {}", (b'A' + index as u8) as char)
}

pub fn generic_agent_label(index: usize) -> String {
    format!("Agent{}", index + 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("task count: expected {EXPECTED_TASKS} tasks, got {0}")]
    TaskCount(usize),
    #[error("participant count: expected {EXPECTED_PARTICIPANTS} participants, got {0}")]
    ParticipantCount(usize),
    #[error("unit mismatch: task `{task}` declares {unit} but the instance is {category}")]
    UnitMismatch {
        task: String,
        unit: DurationUnit,
        category: Category,
    },
    #[error("task `{0}`: duration must be >= 1")]
    ZeroDuration(String),
    #[error("duplicate task name `{0}`")]
    DuplicateTask(String),
    #[error("duplicate participant name `{0}`")]
    DuplicateParticipant(String),
    #[error("unknown task id `{0}` referenced by a dependency")]
    UnknownTask(String),
    #[error("dependency edges {edges:?} do not match the declared {topology} topology")]
    TopologyMismatch {
        topology: DependencyType,
        edges: Vec<(String, String)>,
    },
    #[error("participant `{participant}`: {kind} availability does not fit a {category} instance")]
    AvailabilityKindMismatch {
        participant: String,
        kind: &'static str,
        category: Category,
    },
    #[error("participant `{participant}`: meal break lies outside the working window")]
    MealOutsideWindow { participant: String },
    #[error("participant `{participant}`: {field} must be >= 1")]
    NonPositiveBreak {
        participant: String,
        field: &'static str,
    },
    #[error("participant `{participant}`: unavailable {what} lies outside the project horizon")]
    UnavailabilityOutsideHorizon {
        participant: String,
        what: String,
    },
    #[error(
        "participant `{participant}`: zone label `{label}` is {table} in the zone table, \
         but the instance declares {declared}"
    )]
    ZoneLabelMismatch {
        participant: String,
        label: String,
        table: i32,
        declared: i32,
    },
    #[error("project start `{start}` must be {requirement} for a {category} instance")]
    StartMisaligned {
        category: Category,
        start: String,
        requirement: &'static str,
    },
    #[error("{0}")]
    Time(#[from] crate::time::TimeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DurationUnit {
    Hours,
    Days,
}

impl DurationUnit {
    pub fn for_category(category: Category) -> DurationUnit {
        match category {
            Category::Short => DurationUnit::Hours,
            Category::Long => DurationUnit::Days,
        }
    }
}

impl fmt::Display for DurationUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DurationUnit::Hours => "hours",
            DurationUnit::Days => "days",
        })
    }
}

/// A task with a whole-slot duration (hours for short, days for long).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Task {
    pub name: String,
    pub duration: u32,
}

/// Finish-before-start orderings over three tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DependencyType {
    /// A -> B, A -> C
    Fork,
    /// A -> B, B -> C
    Chain,
    /// A -> C, B -> C
    Join,
}

impl DependencyType {
    pub const ALL: [DependencyType; 3] =
        [DependencyType::Fork, DependencyType::Chain, DependencyType::Join];

    /// Edges as (predecessor, successor) index pairs over the task list.
    pub fn edges(self) -> [(usize, usize); 2] {
        match self {
            DependencyType::Fork => [(0, 1), (0, 2)],
            DependencyType::Chain => [(0, 1), (1, 2)],
            DependencyType::Join => [(0, 2), (1, 2)],
        }
    }

    /// Arrow notation over generic labels, e.g. `A->B,A->C`.
    pub fn arrow_notation(self) -> String {
        self.edges()
            .iter()
            .map(|&(p, s)| {
                format!(
                    "{}->{}",
                    (b'A' + p as u8) as char,
                    (b'A' + s as u8) as char
                )
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for DependencyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DependencyType::Fork => "fork",
            DependencyType::Chain => "chain",
            DependencyType::Join => "join",
        })
    }
}

impl FromStr for DependencyType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fork" => Ok(DependencyType::Fork),
            "chain" => Ok(DependencyType::Chain),
            "join" => Ok(DependencyType::Join),
            other => Err(format!("unknown dependency type `{other}`")),
        }
    }
}

/// The dependency edge set together with its topology tag; the two are kept
/// consistent by construction and re-checked on build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyGraph {
    pub topology: DependencyType,
    /// (predecessor, successor) indices into the task list.
    pub edges: Vec<(usize, usize)>,
}

impl DependencyGraph {
    pub fn of(topology: DependencyType) -> DependencyGraph {
        DependencyGraph {
            topology,
            edges: topology.edges().to_vec(),
        }
    }

    pub fn predecessors_of(&self, task: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .filter(move |&&(_, s)| s == task)
            .map(|&(p, _)| p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WorkingDayRule {
    /// Works any calendar day.
    #[serde(rename = "any")]
    AnyDay,
    /// Works Monday through Friday only.
    #[serde(rename = "weekdays")]
    WeekdaysOnly,
}

impl WorkingDayRule {
    pub fn allows(self, weekday: Weekday) -> bool {
        match self {
            WorkingDayRule::AnyDay => true,
            WorkingDayRule::WeekdaysOnly => !weekday.is_weekend(),
        }
    }
}

/// Cap on consecutive worked slots, with the mandatory rest that follows a
/// run before the participant works again.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BreakAfter {
    pub max_consecutive: u32,
    pub rest: u32,
}

/// Recurring availability; clock-based for short instances, calendar-based
/// for long ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Availability {
    Clock {
        zone_label: String,
        offset: ZoneOffset,
        window: ClockWindow,
        meal: Option<ClockWindow>,
    },
    Calendar { rule: WorkingDayRule },
}

impl Availability {
    fn kind(&self) -> &'static str {
        match self {
            Availability::Clock { .. } => "clock",
            Availability::Calendar { .. } => "calendar",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Participant {
    pub name: String,
    pub availability: Availability,
    /// Minimum idle wall-clock slots between two tasks this participant
    /// performs (hours for short, days for long). Absent means unconstrained.
    pub break_between: Option<u32>,
    pub break_after: Option<BreakAfter>,
    /// Short category: GMT intervals subtracted from general availability.
    pub unavailable_gmt: Vec<GmtInterval>,
    /// Long category: dates subtracted from general availability.
    pub unavailable_dates: Vec<DayDate>,
}

impl Participant {
    /// Whether the GMT minute is inside the working window, outside the meal
    /// break and outside every specific unavailability. Only meaningful for
    /// clock availability.
    pub fn is_working_minute(&self, t: Instant) -> bool {
        match &self.availability {
            Availability::Clock {
                offset,
                window,
                meal,
                ..
            } => {
                let local = (t.minutes() + offset.minutes_east()).rem_euclid(MINUTES_PER_DAY) as u16;
                window.contains_minute(local)
                    && !meal.map_or(false, |m| m.contains_minute(local))
                    && !self.unavailable_gmt.iter().any(|iv| iv.contains(t))
            }
            Availability::Calendar { .. } => false,
        }
    }

    /// Whether the date is allowed by the working-day rule and not marked
    /// unavailable. Only meaningful for calendar availability.
    pub fn is_working_date(&self, date: DayDate) -> bool {
        match &self.availability {
            Availability::Calendar { rule } => {
                rule.allows(date.weekday()) && !self.unavailable_dates.contains(&date)
            }
            Availability::Clock { .. } => false,
        }
    }
}

/// A fully validated scheduling problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemInstance {
    pub category: Category,
    pub project_start: Instant,
    pub tasks: Vec<Task>,
    pub participants: Vec<Participant>,
    pub dependencies: DependencyGraph,
}

impl ProblemInstance {
    pub fn horizon_slots(&self) -> u32 {
        self.category.horizon_slots()
    }

    pub fn horizon_end(&self) -> Instant {
        match self.category {
            Category::Short => self.project_start.add_hours(24),
            Category::Long => self.project_start.add_minutes(7 * MINUTES_PER_DAY),
        }
    }

    pub fn start_date(&self) -> DayDate {
        self.project_start.date()
    }

    pub fn last_allowed_date(&self) -> DayDate {
        self.start_date().add_days(6)
    }

    pub fn task_index(&self, name: &str) -> Option<usize> {
        self.tasks.iter().position(|t| t.name == name)
    }

    pub fn participant_index(&self, name: &str) -> Option<usize> {
        self.participants.iter().position(|p| p.name == name)
    }

    /// Task processing order respecting dependencies; ties broken by
    /// declaration order so results are deterministic.
    pub fn topological_order(&self) -> Vec<usize> {
        let n = self.tasks.len();
        let mut indegree = vec![0usize; n];
        for &(_, s) in &self.dependencies.edges {
            indegree[s] += 1;
        }
        let mut order = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        while order.len() < n {
            let next = (0..n)
                .find(|&i| !placed[i] && indegree[i] == 0)
                .expect("dependency graph is acyclic by construction");
            placed[next] = true;
            order.push(next);
            for &(p, s) in &self.dependencies.edges {
                if p == next {
                    indegree[s] -= 1;
                }
            }
        }
        order
    }
}

/// Raw task fields prior to validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskDraft {
    pub name: String,
    pub duration: u32,
    pub unit: DurationUnit,
}

/// Raw participant fields prior to validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParticipantDraft {
    pub name: String,
    pub availability: Availability,
    pub break_between: Option<u32>,
    pub break_after: Option<BreakAfter>,
    pub unavailable_gmt: Vec<GmtInterval>,
    pub unavailable_dates: Vec<DayDate>,
}

impl ParticipantDraft {
    pub fn clock(
        name: &str,
        zone_label: &str,
        offset: ZoneOffset,
        window: ClockWindow,
        meal: Option<ClockWindow>,
    ) -> ParticipantDraft {
        ParticipantDraft {
            name: name.to_string(),
            availability: Availability::Clock {
                zone_label: zone_label.to_string(),
                offset,
                window,
                meal,
            },
            break_between: None,
            break_after: None,
            unavailable_gmt: Vec::new(),
            unavailable_dates: Vec::new(),
        }
    }

    pub fn calendar(name: &str, rule: WorkingDayRule) -> ParticipantDraft {
        ParticipantDraft {
            name: name.to_string(),
            availability: Availability::Calendar { rule },
            break_between: None,
            break_after: None,
            unavailable_gmt: Vec::new(),
            unavailable_dates: Vec::new(),
        }
    }

    pub fn with_break_between(mut self, slots: u32) -> ParticipantDraft {
        self.break_between = Some(slots);
        self
    }

    pub fn with_break_after(mut self, max_consecutive: u32, rest: u32) -> ParticipantDraft {
        self.break_after = Some(BreakAfter {
            max_consecutive,
            rest,
        });
        self
    }

    pub fn with_unavailable_date(mut self, date: DayDate) -> ParticipantDraft {
        self.unavailable_dates.push(date);
        self
    }

    pub fn with_unavailable_gmt(mut self, interval: GmtInterval) -> ParticipantDraft {
        self.unavailable_gmt.push(interval);
        self
    }
}

/// Raw instance fields prior to validation; `build_instance` is the only way
/// to obtain a [`ProblemInstance`] without bypassing validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceDraft {
    pub category: Category,
    pub project_start: Instant,
    pub tasks: Vec<TaskDraft>,
    pub participants: Vec<ParticipantDraft>,
    pub topology: DependencyType,
    /// Dependency edges by task name; when empty they default to the
    /// topology's canonical edges over the declared task order.
    pub dependencies: Vec<(String, String)>,
}

/// Validate raw fields into a [`ProblemInstance`], resolving every
/// cross-reference and naming the offending field on failure.
pub fn build_instance(draft: InstanceDraft) -> Result<ProblemInstance, BuildError> {
    build_instance_with(draft, &ZoneTable::default())
}

pub fn build_instance_with(
    draft: InstanceDraft,
    zones: &ZoneTable,
) -> Result<ProblemInstance, BuildError> {
    if draft.tasks.len() != EXPECTED_TASKS {
        return Err(BuildError::TaskCount(draft.tasks.len()));
    }
    if draft.participants.len() != EXPECTED_PARTICIPANTS {
        return Err(BuildError::ParticipantCount(draft.participants.len()));
    }

    match draft.category {
        Category::Short => {
            if !draft.project_start.is_hour_aligned() {
                return Err(BuildError::StartMisaligned {
                    category: draft.category,
                    start: draft.project_start.to_string(),
                    requirement: "hour aligned",
                });
            }
        }
        Category::Long => {
            if draft.project_start.minute_of_day() != 0 {
                return Err(BuildError::StartMisaligned {
                    category: draft.category,
                    start: draft.project_start.to_string(),
                    requirement: "midnight GMT",
                });
            }
        }
    }

    let expected_unit = DurationUnit::for_category(draft.category);
    let mut tasks = Vec::with_capacity(draft.tasks.len());
    for t in &draft.tasks {
        if t.unit != expected_unit {
            return Err(BuildError::UnitMismatch {
                task: t.name.clone(),
                unit: t.unit,
                category: draft.category,
            });
        }
        if t.duration == 0 {
            return Err(BuildError::ZeroDuration(t.name.clone()));
        }
        if tasks.iter().any(|k: &Task| k.name == t.name) {
            return Err(BuildError::DuplicateTask(t.name.clone()));
        }
        tasks.push(Task {
            name: t.name.clone(),
            duration: t.duration,
        });
    }

    // Resolve named edges; default to the topology's canonical edges.
    let edges: Vec<(usize, usize)> = if draft.dependencies.is_empty() {
        draft.topology.edges().to_vec()
    } else {
        let mut resolved = Vec::with_capacity(draft.dependencies.len());
        for (pred, succ) in &draft.dependencies {
            let p = tasks
                .iter()
                .position(|t| &t.name == pred)
                .ok_or_else(|| BuildError::UnknownTask(pred.clone()))?;
            let s = tasks
                .iter()
                .position(|t| &t.name == succ)
                .ok_or_else(|| BuildError::UnknownTask(succ.clone()))?;
            resolved.push((p, s));
        }
        resolved
    };
    let mut sorted = edges.clone();
    sorted.sort_unstable();
    if sorted != draft.topology.edges().to_vec() {
        return Err(BuildError::TopologyMismatch {
            topology: draft.topology,
            edges: edges
                .iter()
                .map(|&(p, s)| (tasks[p].name.clone(), tasks[s].name.clone()))
                .collect(),
        });
    }

    let project_start = draft.project_start;
    let horizon_end = match draft.category {
        Category::Short => project_start.add_hours(24),
        Category::Long => project_start.add_minutes(7 * MINUTES_PER_DAY),
    };

    let mut participants = Vec::with_capacity(draft.participants.len());
    for p in &draft.participants {
        if participants.iter().any(|q: &Participant| q.name == p.name) {
            return Err(BuildError::DuplicateParticipant(p.name.clone()));
        }
        let kind_ok = matches!(
            (&p.availability, draft.category),
            (Availability::Clock { .. }, Category::Short)
                | (Availability::Calendar { .. }, Category::Long)
        );
        if !kind_ok {
            return Err(BuildError::AvailabilityKindMismatch {
                participant: p.name.clone(),
                kind: p.availability.kind(),
                category: draft.category,
            });
        }
        if let Availability::Clock {
            zone_label,
            offset,
            window,
            meal,
        } = &p.availability
        {
            if let Some(table_offset) = zones.offset_of(zone_label) {
                if table_offset != *offset {
                    return Err(BuildError::ZoneLabelMismatch {
                        participant: p.name.clone(),
                        label: zone_label.clone(),
                        table: table_offset.hours(),
                        declared: offset.hours(),
                    });
                }
            }
            if let Some(meal) = meal {
                let inside = window
                    .contains_range(meal.start_minute(), meal.duration_minutes() as u16);
                if !inside {
                    return Err(BuildError::MealOutsideWindow {
                        participant: p.name.clone(),
                    });
                }
            }
        }
        if p.break_between == Some(0) {
            return Err(BuildError::NonPositiveBreak {
                participant: p.name.clone(),
                field: "break_between",
            });
        }
        if let Some(ba) = &p.break_after {
            if ba.max_consecutive == 0 {
                return Err(BuildError::NonPositiveBreak {
                    participant: p.name.clone(),
                    field: "break_after.max_consecutive",
                });
            }
            if ba.rest == 0 {
                return Err(BuildError::NonPositiveBreak {
                    participant: p.name.clone(),
                    field: "break_after.rest",
                });
            }
        }
        for iv in &p.unavailable_gmt {
            if iv.end <= iv.start
                || iv.end <= project_start
                || iv.start >= horizon_end
            {
                return Err(BuildError::UnavailabilityOutsideHorizon {
                    participant: p.name.clone(),
                    what: format!("interval {}..{}", iv.start, iv.end),
                });
            }
        }
        for d in &p.unavailable_dates {
            let start = project_start.date();
            if *d < start || *d > start.add_days(6) {
                return Err(BuildError::UnavailabilityOutsideHorizon {
                    participant: p.name.clone(),
                    what: format!("date {d}"),
                });
            }
        }
        participants.push(Participant {
            name: p.name.clone(),
            availability: p.availability.clone(),
            break_between: p.break_between,
            break_after: p.break_after,
            unavailable_gmt: p.unavailable_gmt.clone(),
            unavailable_dates: p.unavailable_dates.clone(),
        });
    }

    Ok(ProblemInstance {
        category: draft.category,
        project_start,
        tasks,
        participants,
        dependencies: DependencyGraph {
            topology: draft.topology,
            edges,
        },
    })
}

/// The verified ground-truth answer: a GMT completion instant (short) or a
/// completion date (long).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Answer {
    Time(Instant),
    Date(DayDate),
}

impl Answer {
    pub fn parse(category: Category, s: &str) -> Result<Answer, crate::time::TimeError> {
        match category {
            Category::Short => Ok(Answer::Time(s.parse()?)),
            Category::Long => Ok(Answer::Date(s.parse()?)),
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Time(t) => t.fmt(f),
            Answer::Date(d) => d.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clock_draft(category: Category) -> InstanceDraft {
        let window = ClockWindow::from_hours(9, 17).unwrap();
        InstanceDraft {
            category,
            project_start: Instant::from_ymd_hm(2014, 12, 17, 0, 0).unwrap(),
            tasks: (0..3)
                .map(|i| TaskDraft {
                    name: generic_task_label(i),
                    duration: 1,
                    unit: DurationUnit::Hours,
                })
                .collect(),
            participants: vec![
                ParticipantDraft::clock("Agent1", "UTC", ZoneOffset::UTC, window, None),
                ParticipantDraft::clock("Agent2", "UTC", ZoneOffset::UTC, window, None),
            ],
            topology: DependencyType::Fork,
            dependencies: Vec::new(),
        }
    }

    #[test]
    fn valid_draft_builds() {
        let instance = build_instance(clock_draft(Category::Short)).unwrap();
        assert_eq!(instance.tasks.len(), 3);
        assert_eq!(instance.dependencies.edges, vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn four_tasks_rejected() {
        let mut draft = clock_draft(Category::Short);
        draft.tasks.push(TaskDraft {
            name: "Task D".into(),
            duration: 1,
            unit: DurationUnit::Hours,
        });
        assert_eq!(build_instance(draft).unwrap_err(), BuildError::TaskCount(4));
    }

    #[test]
    fn day_durations_rejected_in_short_instances() {
        let mut draft = clock_draft(Category::Short);
        draft.tasks[1].unit = DurationUnit::Days;
        assert!(matches!(
            build_instance(draft).unwrap_err(),
            BuildError::UnitMismatch { task, .. } if task == "Task B"
        ));
    }

    #[test]
    fn meal_outside_window_rejected() {
        let mut draft = clock_draft(Category::Short);
        if let Availability::Clock { meal, .. } = &mut draft.participants[0].availability {
            *meal = Some(ClockWindow::from_hours(18, 19).unwrap());
        }
        assert!(matches!(
            build_instance(draft).unwrap_err(),
            BuildError::MealOutsideWindow { .. }
        ));
    }

    #[test]
    fn zone_label_conflicting_with_table_rejected() {
        let mut draft = clock_draft(Category::Short);
        if let Availability::Clock { zone_label, offset, .. } =
            &mut draft.participants[0].availability
        {
            *zone_label = "AEST".into();
            *offset = ZoneOffset::new(9).unwrap();
        }
        assert!(matches!(
            build_instance(draft).unwrap_err(),
            BuildError::ZoneLabelMismatch { table: 10, declared: 9, .. }
        ));
    }

    #[test]
    fn named_edges_must_match_topology() {
        let mut draft = clock_draft(Category::Short);
        draft.dependencies = vec![
            ("Task A".into(), "Task B".into()),
            ("Task B".into(), "Task C".into()),
        ];
        assert!(matches!(
            build_instance(draft).unwrap_err(),
            BuildError::TopologyMismatch { .. }
        ));
    }

    #[test]
    fn unknown_dependency_task_rejected() {
        let mut draft = clock_draft(Category::Short);
        draft.dependencies = vec![
            ("Task A".into(), "Task B".into()),
            ("Task A".into(), "Task Z".into()),
        ];
        assert_eq!(
            build_instance(draft).unwrap_err(),
            BuildError::UnknownTask("Task Z".into())
        );
    }

    #[test]
    fn topological_order_is_stable() {
        let instance = build_instance(clock_draft(Category::Short)).unwrap();
        assert_eq!(instance.topological_order(), vec![0, 1, 2]);
        let mut join = clock_draft(Category::Short);
        join.topology = DependencyType::Join;
        let instance = build_instance(join).unwrap();
        assert_eq!(instance.topological_order(), vec![0, 1, 2]);
    }

    #[test]
    fn arrow_notation_matches_topology() {
        assert_eq!(DependencyType::Fork.arrow_notation(), "A->B,A->C");
        assert_eq!(DependencyType::Chain.arrow_notation(), "A->B,B->C");
        assert_eq!(DependencyType::Join.arrow_notation(), "A->C,B->C");
    }
}
