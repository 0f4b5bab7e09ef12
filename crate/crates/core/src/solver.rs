//! Exhaustive computation of the earliest project completion.
//!
//! The search walks tasks in dependency order and enumerates (participant,
//! start slot) choices per task over the 24-hour or 7-day grid, bounding
//! branches against the best completion found so far. Long tasks are
//! pausable: from a chosen start day they occupy the assignee's next
//! eligible working days. Every surviving leaf is confirmed by
//! `validate_schedule`, which stays the single source of feasibility truth.

use thiserror::Error;

use crate::model::{Answer, Availability, ProblemInstance};
use crate::schedule::{is_feasible, Schedule, ScheduleEntry, TaskSlots};
use crate::time::{Category, DayDate, Instant, MINUTES_PER_HOUR};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("infeasible: no schedule completes within the horizon")]
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub answer: Answer,
    pub witness: Schedule,
}

/// Minimum completion over all feasible schedules at the grid granularity,
/// with a deterministic witness. Among optimal schedules the witness is the
/// lexicographically smallest by (start, participant index) in declared task
/// order.
pub fn solve_optimal(instance: &ProblemInstance) -> Result<SolveOutcome, SolveError> {
    match instance.category {
        Category::Short => solve_short(instance),
        Category::Long => solve_long(instance),
    }
}

/// Tie-break key: (start, participant) per task in declared order.
fn schedule_key(schedule: &Schedule) -> Vec<(i64, usize)> {
    let mut by_task: Vec<(usize, i64, usize)> = schedule
        .entries
        .iter()
        .map(|e| {
            let start = match &e.slots {
                TaskSlots::Hours { start } => start.minutes(),
                TaskSlots::Days { days } => days[0].day_number(),
            };
            (e.task, start, e.participant)
        })
        .collect();
    by_task.sort_unstable();
    by_task.into_iter().map(|(_, s, p)| (s, p)).collect()
}

struct Best {
    end: i64,
    key: Vec<(i64, usize)>,
    witness: Schedule,
}

fn consider(best: &mut Option<Best>, end: i64, schedule: &Schedule) {
    let better = match best {
        None => true,
        Some(b) => end < b.end || (end == b.end && schedule_key(schedule) < b.key),
    };
    if better {
        *best = Some(Best {
            end,
            key: schedule_key(schedule),
            witness: schedule.clone(),
        });
    }
}

// ---------------------------------------------------------------------------
// Short category: contiguous hour blocks on the 24-slot grid.
// ---------------------------------------------------------------------------

/// Whether grid hour `h` is fully workable for the participant.
fn hour_available(instance: &ProblemInstance, participant: usize, h: u32) -> bool {
    let p = &instance.participants[participant];
    let start = instance.project_start.add_hours(h as i64);
    match &p.availability {
        Availability::Clock {
            offset,
            window,
            meal,
            ..
        } => {
            let local = (start.minutes() + offset.minutes_east())
                .rem_euclid(crate::time::MINUTES_PER_DAY) as u16;
            window.contains_range(local, MINUTES_PER_HOUR as u16)
                && !meal.map_or(false, |m| m.overlaps_range(local, MINUTES_PER_HOUR as u16))
                && !p.unavailable_gmt.iter().any(|iv| {
                    iv.overlaps(crate::time::GmtInterval::new(start, start.add_hours(1)))
                })
        }
        Availability::Calendar { .. } => false,
    }
}

fn solve_short(instance: &ProblemInstance) -> Result<SolveOutcome, SolveError> {
    let horizon = instance.horizon_slots();
    let n_participants = instance.participants.len();

    let hour_masks: Vec<Vec<bool>> = (0..n_participants)
        .map(|p| (0..horizon).map(|h| hour_available(instance, p, h)).collect())
        .collect();

    // Start hours where a block of the task's length fits the availability.
    let fits: Vec<Vec<Vec<u32>>> = (0..n_participants)
        .map(|p| {
            instance
                .tasks
                .iter()
                .map(|t| {
                    (0..horizon.saturating_sub(t.duration - 1))
                        .filter(|&h| {
                            (h..h + t.duration)
                                .all(|i| i < horizon && hour_masks[p][i as usize])
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let order = instance.topological_order();
    let mut chosen: Vec<Option<(usize, u32)>> = vec![None; instance.tasks.len()];
    let mut best: Option<Best> = None;

    fn recurse(
        instance: &ProblemInstance,
        order: &[usize],
        depth: usize,
        fits: &[Vec<Vec<u32>>],
        chosen: &mut Vec<Option<(usize, u32)>>,
        partial_end: u32,
        best: &mut Option<Best>,
    ) {
        if depth == order.len() {
            let schedule = Schedule {
                entries: chosen
                    .iter()
                    .enumerate()
                    .map(|(task, c)| {
                        let (participant, h) = c.expect("all tasks placed");
                        ScheduleEntry {
                            task,
                            participant,
                            slots: TaskSlots::Hours {
                                start: instance.project_start.add_hours(h as i64),
                            },
                        }
                    })
                    .collect(),
            };
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
                    .expect("non-empty schedule");
                consider(best, end, &schedule);
            }
            return;
        }

        let task = order[depth];
        let duration = instance.tasks[task].duration;
        // Finish-before-start lower bound from already placed predecessors.
        let min_start = instance
            .dependencies
            .predecessors_of(task)
            .filter_map(|p| chosen[p].map(|(_, h)| h + instance.tasks[p].duration))
            .max()
            .unwrap_or(0);

        for participant in 0..instance.participants.len() {
            for &h in &fits[participant][task] {
                if h < min_start {
                    continue;
                }
                let end = (h + duration).max(partial_end);
                if let Some(b) = &best {
                    let end_minutes =
                        instance.project_start.minutes() + end as i64 * MINUTES_PER_HOUR;
                    if end_minutes > b.end {
                        continue;
                    }
                }
                chosen[task] = Some((participant, h));
                recurse(instance, order, depth + 1, fits, chosen, end, best);
                chosen[task] = None;
            }
        }
    }

    recurse(instance, &order, 0, &fits, &mut chosen, 0, &mut best);

    best.map(|b| SolveOutcome {
        answer: Answer::Time(Instant::from_minutes(b.end)),
        witness: b.witness,
    })
    .ok_or(SolveError::Infeasible)
}

// ---------------------------------------------------------------------------
// Long category: pausable tasks over the 7-day grid.
// ---------------------------------------------------------------------------

/// Per-participant eligibility state while laying out working days.
#[derive(Clone, Copy, Default)]
struct DayState {
    last_worked: Option<i64>,
    run_len: u32,
}

impl DayState {
    fn can_work(
        &self,
        day: i64,
        allowed: impl Fn(i64) -> bool,
        break_after: Option<crate::model::BreakAfter>,
    ) -> bool {
        if !allowed(day) {
            return false;
        }
        let Some(ba) = break_after else {
            return true;
        };
        match self.last_worked {
            Some(last) if day == last + 1 => self.run_len + 1 <= ba.max_consecutive,
            Some(last) => day - last - 1 >= ba.rest as i64,
            None => true,
        }
    }

    fn work(&mut self, day: i64) {
        self.run_len = match self.last_worked {
            Some(last) if day == last + 1 => self.run_len + 1,
            _ => 1,
        };
        self.last_worked = Some(day);
    }
}

fn solve_long(instance: &ProblemInstance) -> Result<SolveOutcome, SolveError> {
    let n_tasks = instance.tasks.len();
    let n_participants = instance.participants.len();
    let horizon = instance.horizon_slots() as i64;
    let start_date = instance.start_date();

    let allowed: Vec<Vec<bool>> = instance
        .participants
        .iter()
        .map(|p| {
            (0..horizon)
                .map(|d| p.is_working_date(start_date.add_days(d)))
                .collect()
        })
        .collect();

    let mut assignment = vec![0usize; n_tasks];
    let mut starts = vec![0i64; n_tasks];
    let mut best: Option<Best> = None;

    enumerate_vectors(n_tasks, n_participants, &mut assignment, &mut |assignment| {
        enumerate_day_starts(n_tasks, horizon, &mut starts, &mut |starts| {
            if let Some(schedule) =
                materialize_long(instance, &allowed, assignment, starts, horizon)
            {
                if is_feasible(instance, &schedule) {
                    let end = schedule
                        .entries
                        .iter()
                        .map(|e| match &e.slots {
                            TaskSlots::Days { days } => days.last().unwrap().day_number(),
                            TaskSlots::Hours { .. } => unreachable!(),
                        })
                        .max()
                        .expect("non-empty schedule");
                    consider(&mut best, end, &schedule);
                }
            }
        });
    });

    best.map(|b| SolveOutcome {
        answer: Answer::Date(DayDate::from_day_number(b.end)),
        witness: b.witness,
    })
    .ok_or(SolveError::Infeasible)
}

fn enumerate_vectors(
    len: usize,
    base: usize,
    buf: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    fn go(i: usize, len: usize, base: usize, buf: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if i == len {
            visit(buf);
            return;
        }
        for v in 0..base {
            buf[i] = v;
            go(i + 1, len, base, buf, visit);
        }
    }
    go(0, len, base, buf, visit);
}

fn enumerate_day_starts(
    len: usize,
    horizon: i64,
    buf: &mut Vec<i64>,
    visit: &mut impl FnMut(&[i64]),
) {
    fn go(i: usize, len: usize, horizon: i64, buf: &mut Vec<i64>, visit: &mut impl FnMut(&[i64])) {
        if i == len {
            visit(buf);
            return;
        }
        for v in 0..horizon {
            buf[i] = v;
            go(i + 1, len, horizon, buf, visit);
        }
    }
    go(0, len, horizon, buf, visit);
}

/// Lay out each task's working days: the first day is exactly its chosen
/// start; later days are the assignee's next eligible days. Participants
/// process their tasks in start order, carrying run state across tasks and
/// the idle days between them. Returns None when the layout cannot realize
/// the chosen starts within the horizon.
fn materialize_long(
    instance: &ProblemInstance,
    allowed: &[Vec<bool>],
    assignment: &[usize],
    starts: &[i64],
    horizon: i64,
) -> Option<Schedule> {
    let start_date = instance.start_date();
    let mut day_lists: Vec<Vec<DayDate>> = vec![Vec::new(); instance.tasks.len()];

    for participant in 0..instance.participants.len() {
        let mut own: Vec<usize> = (0..instance.tasks.len())
            .filter(|&t| assignment[t] == participant)
            .collect();
        own.sort_by_key(|&t| (starts[t], t));
        if own.windows(2).any(|w| starts[w[0]] == starts[w[1]]) {
            return None;
        }

        let break_after = instance.participants[participant].break_after;
        let mut state = DayState::default();
        let mut prev_task_last: Option<i64> = None;

        for &t in &own {
            let first = starts[t];
            // Tasks of one participant may not interleave.
            if prev_task_last.is_some_and(|last| first <= last) {
                return None;
            }
            let can = |d: i64| d >= 0 && d < horizon && allowed[participant][d as usize];
            if !state.can_work(first, can, break_after) {
                return None;
            }
            state.work(first);
            day_lists[t].push(start_date.add_days(first));

            let mut day = first;
            while day_lists[t].len() < instance.tasks[t].duration as usize {
                day += 1;
                if day >= horizon {
                    return None;
                }
                if state.can_work(day, can, break_after) {
                    state.work(day);
                    day_lists[t].push(start_date.add_days(day));
                }
            }
            prev_task_last = day_lists[t].last().map(|d| start_date.days_until(*d));
        }
    }

    Some(Schedule {
        entries: (0..instance.tasks.len())
            .map(|task| ScheduleEntry {
                task,
                participant: assignment[task],
                slots: TaskSlots::Days {
                    days: std::mem::take(&mut day_lists[task]),
                },
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        build_instance, DependencyType, DurationUnit, InstanceDraft, ParticipantDraft, TaskDraft,
        WorkingDayRule,
    };
    use crate::time::{Category, ClockWindow, ZoneOffset};

    #[test]
    fn single_task_always_available_finishes_after_its_duration() {
        // Scheduler works on lists; the 3-task/2-participant cap is enforced
        // at build time, not here.
        let instance = ProblemInstance {
            category: Category::Short,
            project_start: Instant::from_ymd_hm(2020, 6, 1, 0, 0).unwrap(),
            tasks: vec![crate::model::Task {
                name: "Task A".into(),
                duration: 1,
            }],
            participants: vec![crate::model::Participant {
                name: "Agent1".into(),
                availability: Availability::Clock {
                    zone_label: "UTC".into(),
                    offset: ZoneOffset::UTC,
                    window: ClockWindow::new(0, 1440).unwrap(),
                    meal: None,
                },
                break_between: None,
                break_after: None,
                unavailable_gmt: vec![],
                unavailable_dates: vec![],
            }],
            dependencies: crate::model::DependencyGraph {
                topology: DependencyType::Fork,
                edges: vec![],
            },
        };
        let outcome = solve_optimal(&instance).unwrap();
        assert_eq!(
            outcome.answer,
            Answer::Time(instance.project_start.add_hours(1))
        );
    }

    #[test]
    fn infeasible_when_no_window_fits_a_task() {
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
        assert_eq!(solve_optimal(&instance).unwrap_err(), SolveError::Infeasible);
    }

    #[test]
    fn long_solver_pauses_tasks_around_mandated_rest() {
        let instance = build_instance(InstanceDraft {
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
        .unwrap();
        let outcome = solve_optimal(&instance).unwrap();
        assert_eq!(
            outcome.answer,
            Answer::Date(DayDate::from_ymd(2021, 9, 14).unwrap())
        );
        // Task C pauses over the rest day: Sun 12th and Tue 14th.
        let entry = outcome
            .witness
            .entries
            .iter()
            .find(|e| e.task == 2)
            .unwrap();
        assert_eq!(
            entry.slots,
            TaskSlots::Days {
                days: vec![
                    DayDate::from_ymd(2021, 9, 12).unwrap(),
                    DayDate::from_ymd(2021, 9, 14).unwrap(),
                ]
            }
        );
    }

    #[test]
    fn witness_is_deterministic() {
        let instance = long_fixture();
        let a = solve_optimal(&instance).unwrap();
        let b = solve_optimal(&instance).unwrap();
        assert_eq!(a, b);
    }

    fn long_fixture() -> ProblemInstance {
        build_instance(InstanceDraft {
            category: Category::Long,
            project_start: Instant::from_ymd_hm(2021, 9, 11, 0, 0).unwrap(),
            tasks: vec![
                TaskDraft { name: "Task A".into(), duration: 2, unit: DurationUnit::Days },
                TaskDraft { name: "Task B".into(), duration: 1, unit: DurationUnit::Days },
                TaskDraft { name: "Task C".into(), duration: 2, unit: DurationUnit::Days },
            ],
            participants: vec![
                ParticipantDraft::calendar("Agent1", WorkingDayRule::AnyDay)
                    .with_break_after(3, 1),
                ParticipantDraft::calendar("Agent2", WorkingDayRule::WeekdaysOnly),
            ],
            topology: DependencyType::Chain,
            dependencies: vec![],
        })
        .unwrap()
    }
}
