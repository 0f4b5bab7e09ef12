//! Independent re-derivation of the optimal completion for testing the
//! solver: enumerate every assignment of tasks to participants crossed with
//! every start slot, validate each complete schedule, and take the minimum
//! completion. No pruning, no shared search logic.
//!
//! For long instances the enumeration goes further than start slots: each
//! task tries every strictly-increasing day set of its duration, so the
//! oracle also covers layouts the solver's next-eligible-day rule would
//! never produce.

use crate::model::{Answer, ProblemInstance};
use crate::schedule::{is_feasible, Schedule, ScheduleEntry, TaskSlots};
use crate::solver::SolveError;
use crate::time::{Category, DayDate, Instant, MINUTES_PER_HOUR};

pub fn brute_force_oracle(instance: &ProblemInstance) -> Result<Answer, SolveError> {
    match instance.category {
        Category::Short => oracle_short(instance),
        Category::Long => oracle_long(instance),
    }
}

fn oracle_short(instance: &ProblemInstance) -> Result<Answer, SolveError> {
    let n_tasks = instance.tasks.len();
    let n_participants = instance.participants.len();
    let horizon = instance.horizon_slots() as usize;

    // Every (participant, start hour) option per task, including hopeless
    // ones; validation is the only filter.
    let options: Vec<(usize, u32)> = (0..n_participants)
        .flat_map(|p| (0..horizon as u32).map(move |h| (p, h)))
        .collect();

    let mut schedule = Schedule {
        entries: (0..n_tasks)
            .map(|task| ScheduleEntry {
                task,
                participant: 0,
                slots: TaskSlots::Hours {
                    start: instance.project_start,
                },
            })
            .collect(),
    };

    let mut picks = vec![0usize; n_tasks];
    let mut best: Option<i64> = None;
    loop {
        for (task, &pick) in picks.iter().enumerate() {
            let (participant, h) = options[pick];
            schedule.entries[task].participant = participant;
            schedule.entries[task].slots = TaskSlots::Hours {
                start: instance.project_start.add_hours(h as i64),
            };
        }
        if is_feasible(instance, &schedule) {
            let end = schedule
                .entries
                .iter()
                .map(|e| match &e.slots {
                    TaskSlots::Hours { start } => {
                        start.minutes()
                            + instance.tasks[e.task].duration as i64 * MINUTES_PER_HOUR
                    }
                    TaskSlots::Days { .. } => unreachable!(),
                })
                .max()
                .expect("entries non-empty");
            best = Some(best.map_or(end, |b: i64| b.min(end)));
        }
        if !advance(&mut picks, options.len()) {
            break;
        }
    }

    best.map(|m| Answer::Time(Instant::from_minutes(m)))
        .ok_or(SolveError::Infeasible)
}

fn oracle_long(instance: &ProblemInstance) -> Result<Answer, SolveError> {
    let n_tasks = instance.tasks.len();
    let n_participants = instance.participants.len();
    let horizon = instance.horizon_slots();
    let start_date = instance.start_date();

    // Every (participant, day set) option per task: day sets are the
    // bitmasks over the 7-day grid with exactly `duration` bits.
    let options: Vec<Vec<(usize, Vec<DayDate>)>> = instance
        .tasks
        .iter()
        .map(|t| {
            let mut opts = Vec::new();
            for participant in 0..n_participants {
                for mask in 0u32..(1 << horizon) {
                    if mask.count_ones() != t.duration {
                        continue;
                    }
                    let days: Vec<DayDate> = (0..horizon)
                        .filter(|d| mask & (1 << d) != 0)
                        .map(|d| start_date.add_days(d as i64))
                        .collect();
                    opts.push((participant, days));
                }
            }
            opts
        })
        .collect();

    let mut schedule = Schedule {
        entries: (0..n_tasks)
            .map(|task| ScheduleEntry {
                task,
                participant: 0,
                slots: TaskSlots::Days { days: Vec::new() },
            })
            .collect(),
    };

    let mut picks = vec![0usize; n_tasks];
    let mut best: Option<i64> = None;
    'outer: loop {
        for (task, &pick) in picks.iter().enumerate() {
            let (participant, days) = &options[task][pick];
            schedule.entries[task].participant = *participant;
            schedule.entries[task].slots = TaskSlots::Days { days: days.clone() };
        }
        if is_feasible(instance, &schedule) {
            let end = schedule
                .entries
                .iter()
                .map(|e| match &e.slots {
                    TaskSlots::Days { days } => days.last().unwrap().day_number(),
                    TaskSlots::Hours { .. } => unreachable!(),
                })
                .max()
                .expect("entries non-empty");
            best = Some(best.map_or(end, |b: i64| b.min(end)));
        }
        // Mixed-radix increment over per-task option counts.
        for i in 0..n_tasks {
            picks[i] += 1;
            if picks[i] < options[i].len() {
                continue 'outer;
            }
            picks[i] = 0;
        }
        break;
    }

    best.map(|m| Answer::Date(DayDate::from_day_number(m)))
        .ok_or(SolveError::Infeasible)
}

fn advance(picks: &mut [usize], base: usize) -> bool {
    for p in picks.iter_mut() {
        *p += 1;
        if *p < base {
            return true;
        }
        *p = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        build_instance, DependencyType, DurationUnit, InstanceDraft, ParticipantDraft, TaskDraft,
    };
    use crate::solver::solve_optimal;
    use crate::time::{ClockWindow, ZoneOffset};

    #[test]
    fn oracle_reports_infeasible_when_tasks_cannot_fit() {
        let window = ClockWindow::from_hours(9, 11).unwrap();
        let instance = build_instance(InstanceDraft {
            category: Category::Short,
            project_start: Instant::from_ymd_hm(2020, 6, 1, 0, 0).unwrap(),
            tasks: vec![
                TaskDraft { name: "Task A".into(), duration: 3, unit: DurationUnit::Hours },
                TaskDraft { name: "Task B".into(), duration: 1, unit: DurationUnit::Hours },
                TaskDraft { name: "Task C".into(), duration: 1, unit: DurationUnit::Hours },
            ],
            participants: vec![
                ParticipantDraft::clock("Agent1", "UTC", ZoneOffset::UTC, window, None),
                ParticipantDraft::clock("Agent2", "UTC", ZoneOffset::UTC, window, None),
            ],
            topology: DependencyType::Fork,
            dependencies: vec![],
        })
        .unwrap();
        assert_eq!(
            brute_force_oracle(&instance).unwrap_err(),
            SolveError::Infeasible
        );
    }

    #[test]
    fn oracle_agrees_with_solver_on_a_small_case() {
        let window = ClockWindow::from_hours(9, 17).unwrap();
        let instance = build_instance(InstanceDraft {
            category: Category::Short,
            project_start: Instant::from_ymd_hm(2020, 6, 1, 0, 0).unwrap(),
            tasks: vec![
                TaskDraft { name: "Task A".into(), duration: 2, unit: DurationUnit::Hours },
                TaskDraft { name: "Task B".into(), duration: 2, unit: DurationUnit::Hours },
                TaskDraft { name: "Task C".into(), duration: 1, unit: DurationUnit::Hours },
            ],
            participants: vec![
                ParticipantDraft::clock("Agent1", "UTC", ZoneOffset::UTC, window, None)
                    .with_break_between(1),
                ParticipantDraft::clock(
                    "Agent2",
                    "CET",
                    ZoneOffset::new(1).unwrap(),
                    window,
                    Some(ClockWindow::from_hours(12, 13).unwrap()),
                ),
            ],
            topology: DependencyType::Chain,
            dependencies: vec![],
        })
        .unwrap();
        let solved = solve_optimal(&instance).unwrap();
        assert_eq!(brute_force_oracle(&instance).unwrap(), solved.answer);
    }
}
