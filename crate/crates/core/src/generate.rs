//! Seeded procedural generation of verified benchmark prototypes.
//!
//! Each index derives its own RNG stream from (seed, index), so generation
//! is deterministic per record and embarrassingly parallel across indices.
//! Drafts that admit no feasible schedule are resampled from the same
//! stream, bounded by `max_retries`.

use std::ops::RangeInclusive;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dialogue::{render_dialogue, render_question};
use crate::metadata::{metadata_of, InstanceMetadata};
use crate::model::{
    build_instance, generic_agent_label, generic_task_label, Answer, BuildError, DependencyType,
    DurationUnit, InstanceDraft, ParticipantDraft, ProblemInstance, TaskDraft, WorkingDayRule,
};
use crate::record::InstanceRecord;
use crate::solver::solve_optimal;
use crate::time::{Category, ClockWindow, DayDate, GmtInterval, Instant};
use crate::zones::ZoneTable;

/// Domain labels attached round-robin to generated records.
pub const DOMAINS: [&str; 10] = [
    "Computer Science",
    "Business Administration",
    "Mechanical Engineering",
    "Biology",
    "Economics",
    "Psychology",
    "Political Science",
    "Electrical Engineering",
    "Communications/Media Studies",
    "Nursing/Health Sciences",
];

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("invalid generation config: {0}")]
    Config(String),
    #[error(
        "generation exhausted after {retries} retries for index {index}; the config is over-tight"
    )]
    Exhausted { index: usize, retries: u32 },
    #[error("sampled draft failed validation: {0}")]
    Build(#[from] BuildError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DependencyMix {
    /// Round-robin fork/chain/join by index: exact thirds for counts
    /// divisible by three.
    Even,
    Only(DependencyType),
}

#[derive(Debug, Clone)]
pub struct GenerationConfig {
    pub category: Category,
    pub count: usize,
    pub seed: u64,
    pub mix: DependencyMix,
    /// Task durations in slots (hours or days).
    pub durations: RangeInclusive<u32>,
    /// Break-between minimum, in slots.
    pub break_between: RangeInclusive<u32>,
    /// Break-after cap on consecutive worked slots.
    pub break_after_max: RangeInclusive<u32>,
    /// Break-after mandatory rest, in slots.
    pub break_after_rest: RangeInclusive<u32>,
    /// Short: local working-window start hour and length in hours.
    pub window_start_hour: RangeInclusive<u16>,
    pub window_len_hours: RangeInclusive<u16>,
    /// Short: meal-break length in hours.
    pub meal_len_hours: RangeInclusive<u16>,
    pub zone_labels: Vec<String>,
    /// Project start date range, inclusive.
    pub start_dates: (DayDate, DayDate),
    /// Constraint-pool toggles.
    pub p_meal: f64,
    pub p_break_between: f64,
    pub p_break_after: f64,
    pub p_unavailable: f64,
    /// Long: probability a participant works weekdays only.
    pub p_weekdays_only: f64,
    /// Long: how many unavailable dates to sample when toggled on.
    pub unavailable_dates: RangeInclusive<u32>,
    /// Optional scenario name woven into the dialogue opener.
    pub scenario: Option<String>,
    pub max_retries: u32,
}

impl GenerationConfig {
    pub fn short(count: usize, seed: u64) -> GenerationConfig {
        GenerationConfig {
            category: Category::Short,
            count,
            seed,
            mix: DependencyMix::Even,
            durations: 1..=3,
            break_between: 1..=3,
            break_after_max: 2..=4,
            break_after_rest: 1..=1,
            window_start_hour: 7..=11,
            window_len_hours: 8..=8,
            meal_len_hours: 1..=2,
            zone_labels: ["AEST", "NZST", "CET", "EST", "PST", "UTC", "GMT"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            start_dates: (
                DayDate::from_ymd(2014, 1, 1).expect("valid"),
                DayDate::from_ymd(2024, 12, 31).expect("valid"),
            ),
            p_meal: 1.0,
            p_break_between: 0.5,
            p_break_after: 0.5,
            p_unavailable: 0.0,
            p_weekdays_only: 0.0,
            unavailable_dates: 1..=1,
            scenario: None,
            max_retries: 1000,
        }
    }

    pub fn long(count: usize, seed: u64) -> GenerationConfig {
        GenerationConfig {
            category: Category::Long,
            count,
            seed,
            mix: DependencyMix::Even,
            durations: 1..=3,
            break_between: 1..=2,
            break_after_max: 2..=3,
            break_after_rest: 1..=1,
            window_start_hour: 7..=11,
            window_len_hours: 8..=8,
            meal_len_hours: 1..=2,
            zone_labels: Vec::new(),
            start_dates: (
                DayDate::from_ymd(2014, 1, 1).expect("valid"),
                DayDate::from_ymd(2024, 12, 31).expect("valid"),
            ),
            p_meal: 0.0,
            p_break_between: 0.5,
            p_break_after: 0.5,
            p_unavailable: 0.5,
            p_weekdays_only: 0.5,
            unavailable_dates: 1..=2,
            scenario: None,
            max_retries: 1000,
        }
    }

    pub fn for_category(category: Category, count: usize, seed: u64) -> GenerationConfig {
        match category {
            Category::Short => GenerationConfig::short(count, seed),
            Category::Long => GenerationConfig::long(count, seed),
        }
    }

    pub fn validate(&self) -> Result<(), GenerateError> {
        let err = |msg: String| Err(GenerateError::Config(msg));
        if self.count == 0 {
            return err("count must be positive".into());
        }
        if self.mix == DependencyMix::Even && self.count % 3 != 0 {
            return err(format!(
                "count {} is not divisible by 3 for an even dependency mix",
                self.count
            ));
        }
        let horizon = self.category.horizon_slots();
        if *self.durations.start() == 0 || self.durations.is_empty() {
            return err("durations must start at 1".into());
        }
        if *self.durations.end() > horizon {
            return err(format!(
                "max duration {} exceeds the {}-slot horizon",
                self.durations.end(),
                horizon
            ));
        }
        if 3 * self.durations.start() > horizon {
            return err("even the smallest draft cannot fit the horizon".into());
        }
        if *self.break_after_max.start() == 0 || *self.break_after_rest.start() == 0 {
            return err("break-after parameters must be >= 1".into());
        }
        if *self.break_between.start() == 0 {
            return err("break-between must be >= 1".into());
        }
        for p in [
            self.p_meal,
            self.p_break_between,
            self.p_break_after,
            self.p_unavailable,
            self.p_weekdays_only,
        ] {
            if !(0.0..=1.0).contains(&p) {
                return err(format!("probability {p} outside [0, 1]"));
            }
        }
        if self.start_dates.0 > self.start_dates.1 {
            return err("empty project-start date range".into());
        }
        if self.category == Category::Short {
            if self.zone_labels.is_empty() {
                return err("short generation needs at least one zone label".into());
            }
            let table = ZoneTable::default();
            for label in &self.zone_labels {
                if table.offset_of(label).is_none() {
                    return err(format!("zone label `{label}` is not in the zone table"));
                }
            }
            if self.window_len_hours.is_empty() || self.meal_len_hours.is_empty() {
                return err("empty window or meal ranges".into());
            }
            let min_window = *self.window_len_hours.start();
            let max_meal = *self.meal_len_hours.end();
            if min_window < max_meal + 2 {
                return err(format!(
                    "window length {min_window}h cannot contain a {max_meal}h meal with work around it"
                ));
            }
            if *self.window_len_hours.end() > 24 || *self.window_start_hour.end() >= 24 {
                return err("window ranges exceed the day".into());
            }
        }
        Ok(())
    }

    fn dependency_type_for(&self, index: usize) -> DependencyType {
        match self.mix {
            DependencyMix::Even => DependencyType::ALL[index % 3],
            DependencyMix::Only(ty) => ty,
        }
    }
}

/// A template-rendered, pre-concretization instance with verified answer.
#[derive(Debug, Clone, PartialEq)]
pub struct Prototype {
    pub instance: ProblemInstance,
    pub dependency_type: DependencyType,
    pub domain: String,
    pub dialogue: String,
    pub question: String,
    pub metadata: InstanceMetadata,
    pub answer: Answer,
}

fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn sample_range_u32(rng: &mut ChaCha8Rng, range: &RangeInclusive<u32>) -> u32 {
    rng.gen_range(range.clone())
}

fn sample_date(rng: &mut ChaCha8Rng, range: (DayDate, DayDate)) -> DayDate {
    let span = range.0.days_until(range.1);
    range.0.add_days(rng.gen_range(0..=span))
}

fn sample_short_participant(
    cfg: &GenerationConfig,
    rng: &mut ChaCha8Rng,
    name: String,
    project_start: Instant,
    zones: &ZoneTable,
) -> ParticipantDraft {
    let label = cfg.zone_labels[rng.gen_range(0..cfg.zone_labels.len())].clone();
    let offset = zones.offset_of(&label).expect("validated label");
    let start_hour = rng.gen_range(cfg.window_start_hour.clone());
    let len = rng.gen_range(cfg.window_len_hours.clone());
    let window = ClockWindow::from_hours(start_hour, start_hour + len).expect("sane ranges");

    let meal = if rng.gen_bool(cfg.p_meal) {
        let meal_len = rng.gen_range(cfg.meal_len_hours.clone());
        // Keep at least one working hour on each side of the meal.
        let meal_start = rng.gen_range(start_hour + 1..=start_hour + len - meal_len - 1);
        Some(ClockWindow::from_hours(meal_start, meal_start + meal_len).expect("inside window"))
    } else {
        None
    };

    let mut draft = ParticipantDraft {
        name,
        availability: crate::model::Availability::Clock {
            zone_label: label,
            offset,
            window,
            meal,
        },
        break_between: None,
        break_after: None,
        unavailable_gmt: Vec::new(),
        unavailable_dates: Vec::new(),
    };
    if rng.gen_bool(cfg.p_break_between) {
        draft.break_between = Some(sample_range_u32(rng, &cfg.break_between));
    }
    if rng.gen_bool(cfg.p_break_after) {
        draft.break_after = Some(crate::model::BreakAfter {
            max_consecutive: sample_range_u32(rng, &cfg.break_after_max),
            rest: sample_range_u32(rng, &cfg.break_after_rest),
        });
    }
    if rng.gen_bool(cfg.p_unavailable) {
        let len = rng.gen_range(1..=2i64);
        let start_h = rng.gen_range(0..(24 - len));
        draft.unavailable_gmt.push(GmtInterval::new(
            project_start.add_hours(start_h),
            project_start.add_hours(start_h + len),
        ));
    }
    draft
}

fn sample_long_participant(
    cfg: &GenerationConfig,
    rng: &mut ChaCha8Rng,
    name: String,
    start_date: DayDate,
) -> ParticipantDraft {
    let rule = if rng.gen_bool(cfg.p_weekdays_only) {
        WorkingDayRule::WeekdaysOnly
    } else {
        WorkingDayRule::AnyDay
    };
    let mut draft = ParticipantDraft::calendar(&name, rule);
    if rng.gen_bool(cfg.p_break_between) {
        draft.break_between = Some(sample_range_u32(rng, &cfg.break_between));
    }
    if rng.gen_bool(cfg.p_break_after) {
        draft.break_after = Some(crate::model::BreakAfter {
            max_consecutive: sample_range_u32(rng, &cfg.break_after_max),
            rest: sample_range_u32(rng, &cfg.break_after_rest),
        });
    }
    if rng.gen_bool(cfg.p_unavailable) {
        let how_many = sample_range_u32(rng, &cfg.unavailable_dates);
        let mut offsets: Vec<i64> = (0..7).collect();
        offsets.shuffle(rng);
        let mut days: Vec<DayDate> = offsets
            .into_iter()
            .take(how_many as usize)
            .map(|o| start_date.add_days(o))
            .collect();
        days.sort();
        draft.unavailable_dates = days;
    }
    draft
}

fn sample_draft(
    cfg: &GenerationConfig,
    rng: &mut ChaCha8Rng,
    topology: DependencyType,
    zones: &ZoneTable,
) -> InstanceDraft {
    let start_date = sample_date(rng, cfg.start_dates);
    let project_start = start_date.midnight();
    let unit = DurationUnit::for_category(cfg.category);
    let tasks = (0..crate::model::EXPECTED_TASKS)
        .map(|i| TaskDraft {
            name: generic_task_label(i),
            duration: sample_range_u32(rng, &cfg.durations),
            unit,
        })
        .collect();
    let participants = (0..crate::model::EXPECTED_PARTICIPANTS)
        .map(|i| {
            let name = generic_agent_label(i);
            match cfg.category {
                Category::Short => {
                    sample_short_participant(cfg, rng, name, project_start, zones)
                }
                Category::Long => sample_long_participant(cfg, rng, name, start_date),
            }
        })
        .collect();
    InstanceDraft {
        category: cfg.category,
        project_start,
        tasks,
        participants,
        topology,
        dependencies: Vec::new(),
    }
}

/// Generate the prototype at `index`: deterministic for (seed, index),
/// resampling until the instance admits a feasible schedule.
pub fn generate_prototype(
    cfg: &GenerationConfig,
    index: usize,
) -> Result<Prototype, GenerateError> {
    cfg.validate()?;
    let zones = ZoneTable::default();
    let topology = cfg.dependency_type_for(index);
    let mut rng = rng_for(cfg.seed, index);

    for _ in 0..cfg.max_retries {
        let draft = sample_draft(cfg, &mut rng, topology, &zones);
        let instance = build_instance(draft)?;
        let Ok(outcome) = solve_optimal(&instance) else {
            continue;
        };
        let dialogue = render_dialogue(&instance, cfg.scenario.as_deref());
        let question = render_question(cfg.category);
        let metadata = metadata_of(&instance);
        return Ok(Prototype {
            instance,
            dependency_type: topology,
            domain: DOMAINS[index % DOMAINS.len()].to_string(),
            dialogue,
            question,
            metadata,
            answer: outcome.answer,
        });
    }
    Err(GenerateError::Exhausted {
        index,
        retries: cfg.max_retries,
    })
}

/// Serialize a prototype as the benchmark row for `index`.
pub fn record_for(cfg: &GenerationConfig, index: usize, proto: &Prototype) -> InstanceRecord {
    InstanceRecord {
        id: format!("{}-{:04}", cfg.category, index),
        category: cfg.category,
        domain: proto.domain.clone(),
        dependency_type: proto.dependency_type,
        seed: cfg.seed,
        dialogue: proto.dialogue.clone(),
        question: proto.question.clone(),
        metadata: proto.metadata.clone(),
        answer: proto.answer.to_string(),
    }
}

/// Generate the whole batch in index order.
pub fn generate_batch(cfg: &GenerationConfig) -> Result<Vec<InstanceRecord>, GenerateError> {
    cfg.validate()?;
    (0..cfg.count)
        .map(|i| generate_prototype(cfg, i).map(|p| record_for(cfg, i, &p)))
        .collect()
}

/// The candidate answers a uniform guesser picks from: one of the 24 hours
/// after the project start, or one of the 7 horizon dates.
pub fn candidate_answers(record: &InstanceRecord) -> Result<Vec<Answer>, crate::time::TimeError> {
    match record.category {
        Category::Short => {
            let start: Instant = record.metadata.project_start.parse()?;
            Ok((1..=24).map(|h| Answer::Time(start.add_hours(h))).collect())
        }
        Category::Long => {
            let start: DayDate = record.metadata.project_start.parse()?;
            Ok((0..7).map(|d| Answer::Date(start.add_days(d))).collect())
        }
    }
}

/// Monte-Carlo accuracy (percent) of guessing uniformly from `candidates`
/// against a fixed gold answer.
pub fn uniform_guess_accuracy(
    candidates: &[Answer],
    gold: &Answer,
    trials: u32,
    rng: &mut impl Rng,
) -> f64 {
    assert!(trials >= 1, "trials must be >= 1");
    assert!(!candidates.is_empty(), "candidate pool must be non-empty");
    let hits = (0..trials)
        .filter(|_| &candidates[rng.gen_range(0..candidates.len())] == gold)
        .count();
    100.0 * hits as f64 / trials as f64
}

/// Expected accuracy of the uniform-guessing baseline over a record batch.
pub fn random_baseline(
    records: &[InstanceRecord],
    trials: u32,
    seed: u64,
) -> Result<f64, crate::time::TimeError> {
    assert!(trials >= 1, "trials must be >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for t in 0..trials {
        let record = &records[(t as usize) % records.len()];
        let candidates = candidate_answers(record)?;
        let gold = Answer::parse(record.category, &record.answer)?;
        if candidates[rng.gen_range(0..candidates.len())] == gold {
            hits += 1;
        }
    }
    Ok(100.0 * hits as f64 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force_oracle;

    #[test]
    fn generation_is_deterministic_per_index() {
        let cfg = GenerationConfig::short(3, 7);
        let a = generate_prototype(&cfg, 0).unwrap();
        let b = generate_prototype(&cfg, 0).unwrap();
        assert_eq!(a, b);
        let ra = serde_json::to_string(&record_for(&cfg, 0, &a)).unwrap();
        let rb = serde_json::to_string(&record_for(&cfg, 0, &b)).unwrap();
        assert_eq!(ra, rb);
    }

    #[test]
    fn distinct_indices_differ() {
        let cfg = GenerationConfig::long(6, 11);
        let a = generate_prototype(&cfg, 0).unwrap();
        let b = generate_prototype(&cfg, 3).unwrap();
        // Same dependency type (0 and 3 are both fork), different draws.
        assert_eq!(a.dependency_type, b.dependency_type);
        assert_ne!(a, b);
    }

    #[test]
    fn even_mix_assigns_exact_thirds() {
        let cfg = GenerationConfig::short(6, 3);
        let types: Vec<DependencyType> = (0..6)
            .map(|i| generate_prototype(&cfg, i).unwrap().dependency_type)
            .collect();
        let count = |ty| types.iter().filter(|&&t| t == ty).count();
        assert_eq!(count(DependencyType::Fork), 2);
        assert_eq!(count(DependencyType::Chain), 2);
        assert_eq!(count(DependencyType::Join), 2);
    }

    #[test]
    fn uneven_count_rejected_for_even_mix() {
        let cfg = GenerationConfig::short(4, 3);
        assert!(matches!(
            generate_prototype(&cfg, 0),
            Err(GenerateError::Config(_))
        ));
    }

    #[test]
    fn generated_answers_survive_the_oracle() {
        for cfg in [GenerationConfig::short(6, 41), GenerationConfig::long(6, 42)] {
            for i in 0..cfg.count {
                let proto = generate_prototype(&cfg, i).unwrap();
                assert_eq!(
                    brute_force_oracle(&proto.instance).unwrap(),
                    proto.answer,
                    "index {i}"
                );
            }
        }
    }

    #[test]
    fn degenerate_candidate_pool_always_hits() {
        let gold = Answer::Date(DayDate::from_ymd(2021, 9, 14).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let acc = uniform_guess_accuracy(&[gold], &gold, 100, &mut rng);
        assert_eq!(acc, 100.0);
    }

    #[test]
    fn short_baseline_is_near_one_in_twentyfour() {
        let records = generate_batch(&GenerationConfig::short(3, 5)).unwrap();
        let acc = random_baseline(&records, 20_000, 0).unwrap();
        assert!((acc - 100.0 / 24.0).abs() < 1.0, "got {acc}");
    }
}
