//! Property suites: zone arithmetic, weekday oracle, renderer/metadata
//! round trips, solver monotonicity and determinism, scoring consistency.

use proptest::prelude::*;
use tcplan::dialogue::{parse_dialogue, render_dialogue};
use tcplan::eval::{score, Prediction};
use tcplan::generate::{generate_batch, generate_prototype, record_for, GenerationConfig};
use tcplan::metadata::{canonical_json, instance_of, metadata_of};
use tcplan::model::{build_instance, Availability, DependencyType, WorkingDayRule};
use tcplan::solver::solve_optimal;
use tcplan::time::{Category, ClockWindow, DayDate, Weekday, ZoneOffset};
use tcplan::Answer;

fn arb_window() -> impl Strategy<Value = ClockWindow> {
    (0u16..1440, 1u16..1440)
        .prop_map(|(start, span)| {
            let end = (start + span) % 1440;
            ClockWindow::new(start, end).expect("start != end")
        })
}

fn arb_offset() -> impl Strategy<Value = ZoneOffset> {
    (-12i32..=14).prop_map(|h| ZoneOffset::new(h).unwrap())
}

fn arb_day() -> impl Strategy<Value = DayDate> {
    (0i64..40000).prop_map(DayDate::from_day_number)
}

proptest! {
    /// Converting a local window to GMT and back with the same offset is the
    /// identity, and duration is preserved for every offset.
    #[test]
    fn zone_round_trip_and_duration(w in arb_window(), z in arb_offset(), day in arb_day()) {
        let gmt = w.to_gmt(z, day);
        prop_assert_eq!(gmt.duration_minutes(), w.duration_minutes());
        let (back, local_day) = gmt.to_local(z);
        prop_assert_eq!(back, w);
        prop_assert_eq!(local_day, day);
    }
}

// Sakamoto's congruence, an independent route to the weekday.
fn sakamoto(y: i64, m: u32, d: u32) -> u32 {
    const T: [i64; 12] = [0, 3, 2, 5, 0, 3, 5, 1, 4, 6, 2, 4];
    let y = if m < 3 { y - 1 } else { y };
    ((y + y / 4 - y / 100 + y / 400 + T[(m - 1) as usize] + d as i64).rem_euclid(7)) as u32
}

fn weekday_index_sunday_first(w: Weekday) -> u32 {
    match w {
        Weekday::Sunday => 0,
        Weekday::Monday => 1,
        Weekday::Tuesday => 2,
        Weekday::Wednesday => 3,
        Weekday::Thursday => 4,
        Weekday::Friday => 5,
        Weekday::Saturday => 6,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn weekday_matches_independent_oracle(days in 0i64..60000) {
        let date = DayDate::from_day_number(days);
        let (y, m, d) = date.ymd();
        prop_assert_eq!(weekday_index_sunday_first(date.weekday()), sakamoto(y, m, d));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    /// Every generated instance survives metadata and dialogue round trips.
    #[test]
    fn generated_instances_round_trip(seed in 0u64..10_000, category in prop_oneof![Just(Category::Short), Just(Category::Long)]) {
        let cfg = GenerationConfig::for_category(category, 3, seed);
        let proto = generate_prototype(&cfg, 0).unwrap();

        let meta = metadata_of(&proto.instance);
        prop_assert_eq!(&instance_of(&meta).unwrap(), &proto.instance);

        let parsed = parse_dialogue(&proto.dialogue).unwrap();
        let rebuilt = build_instance(parsed.draft).unwrap();
        prop_assert_eq!(&rebuilt, &proto.instance);
        prop_assert_eq!(render_dialogue(&rebuilt, None), proto.dialogue);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    /// Same (seed, index) twice gives byte-identical records.
    #[test]
    fn generation_is_deterministic(seed in 0u64..10_000) {
        for category in [Category::Short, Category::Long] {
            let cfg = GenerationConfig::for_category(category, 3, seed);
            let a = record_for(&cfg, 1, &generate_prototype(&cfg, 1).unwrap());
            let b = record_for(&cfg, 1, &generate_prototype(&cfg, 1).unwrap());
            prop_assert_eq!(
                serde_json::to_string(&a).unwrap(),
                serde_json::to_string(&b).unwrap()
            );
        }
    }
}

fn completion_slot(answer: &Answer) -> i64 {
    match answer {
        Answer::Time(t) => t.minutes(),
        Answer::Date(d) => d.day_number(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    /// Relaxing a constraint never pushes the optimum later.
    #[test]
    fn relaxation_is_monotone(
        seed in 0u64..10_000,
        category in prop_oneof![Just(Category::Short), Just(Category::Long)],
        which in 0usize..4,
    ) {
        let cfg = GenerationConfig::for_category(category, 3, seed);
        let proto = generate_prototype(&cfg, 0).unwrap();
        let before = completion_slot(&proto.answer);

        let mut relaxed = proto.instance.clone();
        let p = &mut relaxed.participants[seed as usize % 2];
        match which {
            0 => p.break_between = None,
            1 => p.break_after = None,
            2 => {
                p.unavailable_gmt.clear();
                p.unavailable_dates.clear();
            }
            _ => match &mut p.availability {
                Availability::Clock { window, .. } => {
                    // Widen by an hour on each side, capped at the full day.
                    let start = window.start_minute().saturating_sub(60);
                    let end = (window.end_minute() + 60).min(1440);
                    if let Ok(w) = ClockWindow::new(start, end) {
                        *window = w;
                    }
                }
                Availability::Calendar { rule } => *rule = WorkingDayRule::AnyDay,
            },
        }
        let after = solve_optimal(&relaxed).expect("relaxed instance stays feasible");
        prop_assert!(
            completion_slot(&after.answer) <= before,
            "relaxation {which} moved the optimum from {} to {}",
            proto.answer,
            after.answer
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    /// Re-expressing an availability as a different (offset, window) pair
    /// with the same GMT image leaves the optimum unchanged.
    #[test]
    fn zone_invariance(seed in 0u64..10_000, delta in -3i32..=3) {
        let cfg = GenerationConfig::short(3, seed);
        let proto = generate_prototype(&cfg, 0).unwrap();
        let mut shifted = proto.instance.clone();
        if let Availability::Clock { zone_label, offset, window, meal } =
            &mut shifted.participants[0].availability
        {
            let new_offset = offset.hours() + delta;
            prop_assume!((-12..=14).contains(&new_offset));
            let shift = |w: ClockWindow| {
                let s = (w.start_minute() as i32 + delta * 60).rem_euclid(1440) as u16;
                let e = (w.end_minute() as i32 + delta * 60).rem_euclid(1440) as u16;
                ClockWindow::new(s, if e == 0 { 1440 } else { e }).unwrap()
            };
            *window = shift(*window);
            *meal = meal.map(shift);
            *offset = ZoneOffset::new(new_offset).unwrap();
            *zone_label = "LOCAL".to_string();
        }
        let outcome = solve_optimal(&shifted).expect("same GMT availability");
        prop_assert_eq!(outcome.answer, proto.answer);
    }
}

#[test]
fn topology_tags_stay_consistent_with_edges() {
    for ty in DependencyType::ALL {
        let graph = tcplan::model::DependencyGraph::of(ty);
        assert_eq!(graph.topology, ty);
        let mut sorted = graph.edges.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, ty.edges().to_vec());
    }
}

#[test]
fn scoring_is_order_independent_and_partitions_sum() {
    let mut records = generate_batch(&GenerationConfig::short(6, 5)).unwrap();
    records.extend(generate_batch(&GenerationConfig::long(6, 6)).unwrap());

    // Half right, half deliberately wrong, one unparseable.
    let predictions: Vec<Prediction> = records
        .iter()
        .enumerate()
        .map(|(i, r)| Prediction {
            id: r.id.clone(),
            text: match i % 3 {
                0 => format!("The final answer is {}.", r.answer),
                1 => "I give up.".to_string(),
                _ => match Answer::parse(r.category, &r.answer).unwrap() {
                    Answer::Time(t) => format!("The final answer is {}.", t.add_hours(1)),
                    Answer::Date(d) => format!("The final answer is {}.", d.add_days(1)),
                },
            },
            prompt_tokens: None,
            output_tokens: Some(100 + i as u64),
        })
        .collect();

    let report = score(&records, &predictions, "synthetic").unwrap();
    let total = report.overall.total;
    let sum_of = |m: &std::collections::BTreeMap<String, tcplan::eval::Accuracy>| {
        m.values().map(|a| a.total).sum::<u64>()
    };
    assert_eq!(sum_of(&report.by_category), total);
    assert_eq!(sum_of(&report.by_dependency_type), total);
    assert_eq!(sum_of(&report.by_domain), total);
    assert_eq!(report.overall.correct, 4);
    assert_eq!(report.unparseable, 4);

    let mut shuffled = predictions.clone();
    shuffled.reverse();
    shuffled.swap(0, 5);
    let report2 = score(&records, &shuffled, "synthetic").unwrap();
    assert_eq!(report, report2);
}

#[test]
fn thousand_record_batch_has_no_collisions() {
    let cfg = GenerationConfig::short(999, 99);
    let records = generate_batch(&cfg).unwrap();
    let mut seen = std::collections::BTreeSet::new();
    for r in &records {
        assert!(seen.insert(canonical_json(&r.metadata)), "collision at {}", r.id);
    }
}
