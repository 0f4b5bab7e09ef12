//! Template dialogues: rendering an instance into the fixed two-speaker
//! script and parsing such a script back into the same constraints.
//!
//! The grammar is deliberately rigid — one utterance per constraint in a
//! fixed order — so that render -> parse -> render is a fixed point and
//! every scheduling-relevant number survives the round trip.

use std::sync::OnceLock;

use regex::Regex;
use thiserror::Error;

use crate::model::{
    Availability, BreakAfter, DependencyType, DurationUnit, InstanceDraft, ParticipantDraft,
    ProblemInstance, TaskDraft,
};
use crate::time::{
    format_clock, parse_clock, Category, ClockWindow, DayDate, GmtInterval, Instant, TimeError,
    ZoneOffset,
};

#[derive(Debug, Error)]
pub enum DialogueParseError {
    #[error("line {0}: expected `Speaker: text`")]
    NotAnUtterance(usize),
    #[error("missing the {0} line")]
    MissingSection(&'static str),
    #[error("line {line}: cannot parse {what}: `{text}`")]
    BadSentence {
        line: usize,
        what: &'static str,
        text: String,
    },
    #[error("dependency edges do not match any known topology")]
    UnknownTopology,
    #[error("{0}")]
    Time(#[from] TimeError),
}

fn re(cell: &'static OnceLock<Regex>, pattern: &'static str) -> &'static Regex {
    cell.get_or_init(|| Regex::new(pattern).expect("static regex"))
}

macro_rules! static_re {
    ($name:ident, $pattern:expr) => {
        fn $name() -> &'static Regex {
            static CELL: OnceLock<Regex> = OnceLock::new();
            re(&CELL, $pattern)
        }
    };
}

static_re!(re_utterance, r"^([^:]+): (.+)$");
static_re!(re_scenario, r"^Let's get the (.+) project underway\.$");
static_re!(re_start_short, r"^The project will start at (.+)\.$");
static_re!(re_start_long, r"^The project will start on (\d{4}-\d{2}-\d{2}) \(([A-Za-z]+)\)\.$");
static_re!(re_tasks, r"^As discussed before, the whole project consists of several tasks: (.+)\.$");
static_re!(re_durations, r"^Task durations are: (.+)\.$");
static_re!(re_duration_item, r"^(.+) takes (\d+) (hour|day)\(s\)$");
static_re!(re_dependency, r"^(.+) must begin only after (.+) is completed$");
static_re!(
    re_working_hours,
    r"^My working hours are (\d{1,2}:\d{2})[\u{2013}-](\d{1,2}:\d{2}) in ([A-Za-z]+) \(GMT([+-]\d{1,2})\)$"
);
static_re!(re_meal, r"^I take a meal break from (\d{1,2}:\d{2}) to (\d{1,2}:\d{2})$");
static_re!(
    re_break_between,
    r"^I need a break of at least (\d+) (?:hour|day)\(s\) between any two tasks I perform$"
);
static_re!(
    re_break_after,
    r"^I can work up to (\d+) consecutive (?:hour|day)\(s\), then must rest at least (\d+) (?:hour|day)\(s\) before working again$"
);
static_re!(re_any_day, r"^I can work on any day$");
static_re!(re_weekdays, r"^I work only on weekdays$");
static_re!(
    re_unavailable_short,
    r"^I am unavailable from (\d{1,2}:\d{2}) to (\d{1,2}:\d{2}) GMT$"
);
static_re!(
    re_unavailable_short_full,
    r"^I am unavailable from (\d{4}-\d{2}-\d{2} \d{2}:\d{2} GMT) to (\d{4}-\d{2}-\d{2} \d{2}:\d{2} GMT)$"
);
static_re!(re_unavailable_long, r"^I will be unavailable on (.+)$");
static_re!(re_date, r"\d{4}-\d{2}-\d{2}");

pub const DECOMPOSITION_QUESTION: &str =
    "How is the project decomposed? I remember we discussed this before.";
pub const QUESTION_SHORT: &str =
    "What is the earliest time (in GMT) by which the whole project can be completed?";
pub const QUESTION_LONG: &str =
    "What is the earliest date by which the whole project can be completed?";

pub fn render_question(category: Category) -> String {
    match category {
        Category::Short => QUESTION_SHORT.to_string(),
        Category::Long => QUESTION_LONG.to_string(),
    }
}

fn clock_range(w: ClockWindow) -> String {
    format!(
        "{}\u{2013}{}",
        format_clock(w.start_minute(), false),
        format_clock(w.end_minute(), false)
    )
}

fn join_names(names: &[String]) -> String {
    match names {
        [] => String::new(),
        [only] => only.clone(),
        [init @ .., last] => format!("{} and {}", init.join(", "), last),
    }
}

fn availability_sentences(instance: &ProblemInstance, participant: usize) -> String {
    let p = &instance.participants[participant];
    let unit = instance.category.slot_label();
    let mut sentences = Vec::new();
    match &p.availability {
        Availability::Clock {
            zone_label,
            offset,
            window,
            meal,
        } => {
            sentences.push(format!(
                "My working hours are {} in {} ({}).",
                clock_range(*window),
                zone_label,
                offset.gmt_label()
            ));
            if let Some(meal) = meal {
                sentences.push(format!(
                    "I take a meal break from {} to {}.",
                    format_clock(meal.start_minute(), false),
                    format_clock(meal.end_minute(), false)
                ));
            }
        }
        Availability::Calendar { rule } => {
            sentences.push(match rule {
                crate::model::WorkingDayRule::AnyDay => "I can work on any day.".to_string(),
                crate::model::WorkingDayRule::WeekdaysOnly => {
                    "I work only on weekdays.".to_string()
                }
            });
        }
    }
    if let Some(bb) = p.break_between {
        sentences.push(format!(
            "I need a break of at least {bb} {unit}(s) between any two tasks I perform."
        ));
    }
    if let Some(BreakAfter {
        max_consecutive,
        rest,
    }) = p.break_after
    {
        sentences.push(format!(
            "I can work up to {max_consecutive} consecutive {unit}(s), then must rest at least {rest} {unit}(s) before working again."
        ));
    }
    for iv in &p.unavailable_gmt {
        // Intervals inside the project-start day read as plain GMT clocks.
        let day = instance.start_date();
        if iv.start.date() == day && iv.end.minutes() <= day.add_days(1).midnight().minutes() {
            let end_minute = iv.end.minutes() - day.midnight().minutes();
            sentences.push(format!(
                "I am unavailable from {} to {} GMT.",
                format_clock(iv.start.minute_of_day(), false),
                format_clock(end_minute as u16, false)
            ));
        } else {
            sentences.push(format!(
                "I am unavailable from {} to {} GMT.",
                iv.start,
                iv.end
            ));
        }
    }
    if !p.unavailable_dates.is_empty() {
        let dates: Vec<String> = p.unavailable_dates.iter().map(|d| d.to_string()).collect();
        sentences.push(format!("I will be unavailable on {}.", join_names(&dates)));
    }
    sentences.join(" ")
}

/// Render the fixed template dialogue: start announcement, decomposition
/// question and answer, durations, dependencies, then one availability line
/// per participant. Every constraint is mentioned exactly once.
pub fn render_dialogue(instance: &ProblemInstance, scenario: Option<&str>) -> String {
    let asker = &instance.participants[0].name;
    let announcer = &instance.participants[1].name;
    let task_names: Vec<String> = instance.tasks.iter().map(|t| t.name.clone()).collect();
    let unit = instance.category.slot_label();

    let mut lines = Vec::new();
    if let Some(name) = scenario {
        lines.push(format!("{announcer}: Let's get the {name} project underway."));
    }
    match instance.category {
        Category::Short => lines.push(format!(
            "{announcer}: The project will start at {}.",
            instance.project_start
        )),
        Category::Long => lines.push(format!(
            "{announcer}: The project will start on {} ({}).",
            instance.start_date(),
            instance.start_date().weekday()
        )),
    }
    lines.push(format!("{asker}: {DECOMPOSITION_QUESTION}"));
    lines.push(format!(
        "{announcer}: As discussed before, the whole project consists of several tasks: {}.",
        task_names.join(", ")
    ));
    lines.push(format!(
        "{asker}: Task durations are: {}.",
        instance
            .tasks
            .iter()
            .map(|t| format!("{} takes {} {unit}(s)", t.name, t.duration))
            .collect::<Vec<_>>()
            .join(", ")
    ));
    lines.push(format!(
        "{announcer}: {}",
        instance
            .dependencies
            .edges
            .iter()
            .map(|&(p, s)| {
                format!(
                    "{} must begin only after {} is completed.",
                    instance.tasks[s].name, instance.tasks[p].name
                )
            })
            .collect::<Vec<_>>()
            .join(" ")
    ));
    for i in 0..instance.participants.len() {
        lines.push(format!(
            "{}: {}",
            instance.participants[i].name,
            availability_sentences(instance, i)
        ));
    }
    lines.join("\n")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedDialogue {
    pub scenario: Option<String>,
    pub draft: InstanceDraft,
}

struct SpeakerConstraints {
    name: String,
    draft: ParticipantDraft,
}

/// Parse a template dialogue back into raw instance fields. The inverse of
/// [`render_dialogue`] on everything scheduling-relevant.
pub fn parse_dialogue(text: &str) -> Result<ParsedDialogue, DialogueParseError> {
    let mut utterances = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let caps = re_utterance()
            .captures(line)
            .ok_or(DialogueParseError::NotAnUtterance(i + 1))?;
        utterances.push((i + 1, caps[1].to_string(), caps[2].to_string()));
    }

    let mut cursor = 0usize;
    let mut scenario = None;
    if let Some((_, _, text)) = utterances.first() {
        if let Some(caps) = re_scenario().captures(text) {
            scenario = Some(caps[1].to_string());
            cursor = 1;
        }
    }

    // Project start announcement decides the category.
    let (line, _, start_text) = utterances
        .get(cursor)
        .ok_or(DialogueParseError::MissingSection("project start"))?;
    let (category, project_start) = if let Some(caps) = re_start_short().captures(start_text) {
        let instant: Instant = caps[1].parse()?;
        (Category::Short, instant)
    } else if let Some(caps) = re_start_long().captures(start_text) {
        let date: DayDate = caps[1].parse()?;
        (Category::Long, date.midnight())
    } else {
        return Err(DialogueParseError::BadSentence {
            line: *line,
            what: "project start",
            text: start_text.clone(),
        });
    };
    cursor += 1;

    // Decomposition question, then the task list.
    let (_, asker, _) = utterances
        .get(cursor)
        .ok_or(DialogueParseError::MissingSection("decomposition question"))?;
    let asker = asker.clone();
    cursor += 1;
    let (line, _, tasks_text) = utterances
        .get(cursor)
        .ok_or(DialogueParseError::MissingSection("task decomposition"))?;
    let task_names: Vec<String> = re_tasks()
        .captures(tasks_text)
        .ok_or(DialogueParseError::BadSentence {
            line: *line,
            what: "task decomposition",
            text: tasks_text.clone(),
        })?[1]
        .split(", ")
        .map(str::to_string)
        .collect();
    cursor += 1;

    // Durations.
    let (line, _, durations_text) = utterances
        .get(cursor)
        .ok_or(DialogueParseError::MissingSection("task durations"))?;
    let items = re_durations()
        .captures(durations_text)
        .ok_or(DialogueParseError::BadSentence {
            line: *line,
            what: "task durations",
            text: durations_text.clone(),
        })?[1]
        .to_string();
    let mut tasks = Vec::new();
    for item in items.split(", ") {
        let caps = re_duration_item()
            .captures(item)
            .ok_or(DialogueParseError::BadSentence {
                line: *line,
                what: "task duration",
                text: item.to_string(),
            })?;
        tasks.push(TaskDraft {
            name: caps[1].to_string(),
            duration: caps[2].parse().unwrap_or(0),
            unit: if &caps[3] == "hour" {
                DurationUnit::Hours
            } else {
                DurationUnit::Days
            },
        });
    }
    cursor += 1;

    // Dependencies.
    let (line, _, deps_text) = utterances
        .get(cursor)
        .ok_or(DialogueParseError::MissingSection("dependencies"))?;
    let mut edges = Vec::new();
    for sentence in deps_text.trim_end_matches('.').split(". ") {
        let caps = re_dependency()
            .captures(sentence)
            .ok_or(DialogueParseError::BadSentence {
                line: *line,
                what: "dependency",
                text: sentence.to_string(),
            })?;
        // "B must begin only after A is completed" is the edge A -> B.
        edges.push((caps[2].to_string(), caps[1].to_string()));
    }
    cursor += 1;

    // One constraints line per participant.
    let mut speakers: Vec<SpeakerConstraints> = Vec::new();
    for (line, speaker, text) in &utterances[cursor..] {
        let draft = parse_constraints(*line, speaker, text, category, project_start)?;
        speakers.push(SpeakerConstraints {
            name: speaker.clone(),
            draft,
        });
    }
    if speakers.is_empty() {
        return Err(DialogueParseError::MissingSection("participant constraints"));
    }
    // The asker spoke first in the template; keep participant order stable.
    speakers.sort_by_key(|s| if s.name == asker { 0 } else { 1 });

    let topology = infer_topology(&task_names, &edges)?;
    Ok(ParsedDialogue {
        scenario,
        draft: InstanceDraft {
            category,
            project_start,
            tasks,
            participants: speakers.into_iter().map(|s| s.draft).collect(),
            topology,
            dependencies: edges,
        },
    })
}

fn infer_topology(
    task_names: &[String],
    edges: &[(String, String)],
) -> Result<DependencyType, DialogueParseError> {
    let index_of = |name: &str| task_names.iter().position(|t| t == name);
    let mut indexed: Vec<(usize, usize)> = Vec::new();
    for (p, s) in edges {
        match (index_of(p), index_of(s)) {
            (Some(p), Some(s)) => indexed.push((p, s)),
            _ => return Err(DialogueParseError::UnknownTopology),
        }
    }
    indexed.sort_unstable();
    DependencyType::ALL
        .into_iter()
        .find(|t| t.edges().to_vec() == indexed)
        .ok_or(DialogueParseError::UnknownTopology)
}

fn parse_constraints(
    line: usize,
    speaker: &str,
    text: &str,
    category: Category,
    project_start: Instant,
) -> Result<ParticipantDraft, DialogueParseError> {
    let mut zone: Option<(String, ZoneOffset)> = None;
    let mut window: Option<ClockWindow> = None;
    let mut meal: Option<ClockWindow> = None;
    let mut rule: Option<crate::model::WorkingDayRule> = None;
    let mut break_between = None;
    let mut break_after = None;
    let mut unavailable_gmt = Vec::new();
    let mut unavailable_dates = Vec::new();

    for sentence in text.trim_end_matches('.').split(". ") {
        let sentence = sentence.trim_end_matches('.');
        if let Some(caps) = re_working_hours().captures(sentence) {
            window = Some(ClockWindow::new(
                parse_clock(&caps[1])?,
                parse_clock(&caps[2])?,
            )?);
            let offset: i32 =
                caps[4]
                    .parse()
                    .map_err(|_| DialogueParseError::BadSentence {
                        line,
                        what: "zone offset",
                        text: sentence.to_string(),
                    })?;
            zone = Some((caps[3].to_string(), ZoneOffset::new(offset)?));
        } else if let Some(caps) = re_meal().captures(sentence) {
            meal = Some(ClockWindow::new(
                parse_clock(&caps[1])?,
                parse_clock(&caps[2])?,
            )?);
        } else if re_any_day().is_match(sentence) {
            rule = Some(crate::model::WorkingDayRule::AnyDay);
        } else if re_weekdays().is_match(sentence) {
            rule = Some(crate::model::WorkingDayRule::WeekdaysOnly);
        } else if let Some(caps) = re_break_between().captures(sentence) {
            break_between = Some(caps[1].parse().unwrap_or(0));
        } else if let Some(caps) = re_break_after().captures(sentence) {
            break_after = Some(BreakAfter {
                max_consecutive: caps[1].parse().unwrap_or(0),
                rest: caps[2].parse().unwrap_or(0),
            });
        } else if let Some(caps) = re_unavailable_short().captures(sentence) {
            let day = project_start.date();
            let start = Instant::from_date_minute(day, parse_clock(&caps[1])?);
            let end_minute = parse_clock(&caps[2])?;
            let end = day.midnight().add_minutes(end_minute as i64);
            unavailable_gmt.push(GmtInterval::new(start, end));
        } else if let Some(caps) = re_unavailable_short_full().captures(sentence) {
            unavailable_gmt.push(GmtInterval::new(caps[1].parse()?, caps[2].parse()?));
        } else if let Some(caps) = re_unavailable_long().captures(sentence) {
            for m in re_date().find_iter(&caps[1]) {
                unavailable_dates.push(m.as_str().parse::<DayDate>()?);
            }
        } else {
            return Err(DialogueParseError::BadSentence {
                line,
                what: "constraint",
                text: sentence.to_string(),
            });
        }
    }

    let availability = match category {
        Category::Short => {
            let (zone_label, offset) = zone.ok_or(DialogueParseError::BadSentence {
                line,
                what: "working hours",
                text: text.to_string(),
            })?;
            Availability::Clock {
                zone_label,
                offset,
                window: window.ok_or(DialogueParseError::BadSentence {
                    line,
                    what: "working hours",
                    text: text.to_string(),
                })?,
                meal,
            }
        }
        Category::Long => Availability::Calendar {
            rule: rule.ok_or(DialogueParseError::BadSentence {
                line,
                what: "working-day rule",
                text: text.to_string(),
            })?,
        },
    };

    Ok(ParticipantDraft {
        name: speaker.to_string(),
        availability,
        break_between,
        break_after,
        unavailable_gmt,
        unavailable_dates,
    })
}
