//! Golden fixtures shared by the integration suites.

use tcplan::model::{
    build_instance, DependencyType, DurationUnit, InstanceDraft, ParticipantDraft,
    ProblemInstance, TaskDraft, WorkingDayRule,
};
use tcplan::time::{Category, ClockWindow, DayDate, Instant, ZoneOffset};

fn task(name: &str, duration: u32, unit: DurationUnit) -> TaskDraft {
    TaskDraft {
        name: name.to_string(),
        duration,
        unit,
    }
}

/// Two agents, three tasks, fork dependencies; AEST vs EST with meal breaks
/// and 3-hour breaks between tasks. Optimal completion 2014-12-17 15:00 GMT.
pub fn s1() -> ProblemInstance {
    build_instance(InstanceDraft {
        category: Category::Short,
        project_start: Instant::from_ymd_hm(2014, 12, 17, 0, 0).unwrap(),
        tasks: vec![
            task("Task A", 2, DurationUnit::Hours),
            task("Task B", 1, DurationUnit::Hours),
            task("Task C", 1, DurationUnit::Hours),
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

pub fn s1_answer() -> Instant {
    Instant::from_ymd_hm(2014, 12, 17, 15, 0).unwrap()
}

/// CET vs UTC with one-hour breaks between tasks; 1h/2h/3h fork. Optimal
/// completion is 14:00 GMT on the project day.
pub fn s2() -> ProblemInstance {
    build_instance(InstanceDraft {
        category: Category::Short,
        project_start: Instant::from_ymd_hm(2014, 5, 20, 0, 0).unwrap(),
        tasks: vec![
            task("Brainstorm Key Data Points for Report", 1, DurationUnit::Hours),
            task("Draft Report Template Layout", 2, DurationUnit::Hours),
            task("Develop Submission Guidelines", 3, DurationUnit::Hours),
        ],
        participants: vec![
            ParticipantDraft::clock(
                "Sarah",
                "CET",
                ZoneOffset::new(1).unwrap(),
                ClockWindow::from_hours(10, 18).unwrap(),
                Some(ClockWindow::from_hours(15, 16).unwrap()),
            )
            .with_break_between(1),
            ParticipantDraft::clock(
                "Mark",
                "UTC",
                ZoneOffset::UTC,
                ClockWindow::from_hours(8, 16).unwrap(),
                Some(ClockWindow::from_hours(11, 12).unwrap()),
            )
            .with_break_between(1),
        ],
        topology: DependencyType::Fork,
        dependencies: vec![
            (
                "Brainstorm Key Data Points for Report".to_string(),
                "Draft Report Template Layout".to_string(),
            ),
            (
                "Brainstorm Key Data Points for Report".to_string(),
                "Develop Submission Guidelines".to_string(),
            ),
        ],
    })
    .unwrap()
}

pub fn s2_answer() -> Instant {
    Instant::from_ymd_hm(2014, 5, 20, 14, 0).unwrap()
}

/// Saturday kickoff; 1d/1d/2d fork. One agent works any day but needs a
/// one-day rest after two consecutive worked days; the other works weekdays
/// only, needs a one-day break between tasks and is out on Monday the 13th.
/// Optimal completion date: 2021-09-14.
pub fn l1() -> ProblemInstance {
    build_instance(InstanceDraft {
        category: Category::Long,
        project_start: Instant::from_ymd_hm(2021, 9, 11, 0, 0).unwrap(),
        tasks: vec![
            task("Define Load & Damping", 1, DurationUnit::Days),
            task("Sketch Piston-Cylinder Assembly", 1, DurationUnit::Days),
            task("Specify Spring & Damping Fluid", 2, DurationUnit::Days),
        ],
        participants: vec![
            ParticipantDraft::calendar("Liam", WorkingDayRule::AnyDay).with_break_after(2, 1),
            ParticipantDraft::calendar("Olivia", WorkingDayRule::WeekdaysOnly)
                .with_break_between(1)
                .with_unavailable_date(DayDate::from_ymd(2021, 9, 13).unwrap()),
        ],
        topology: DependencyType::Fork,
        dependencies: vec![
            (
                "Define Load & Damping".to_string(),
                "Sketch Piston-Cylinder Assembly".to_string(),
            ),
            (
                "Define Load & Damping".to_string(),
                "Specify Spring & Damping Fluid".to_string(),
            ),
        ],
    })
    .unwrap()
}

pub fn l1_answer() -> DayDate {
    DayDate::from_ymd(2021, 9, 14).unwrap()
}
