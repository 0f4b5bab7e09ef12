//! Scoring model outputs against gold answers: answer extraction from
//! free-form completions, format normalization, exact-match accuracy, and
//! the breakdown reports (category, dependency type, domain, time zone,
//! output length).
//!
//! The extraction rule is a documented convention: first an explicit
//! `\boxed{...}` marker, then a final-answer phrase, then the last
//! well-formed time or date token in the text. Times labelled GMT/UTC are
//! interchangeable; times carrying any other known zone label are not
//! treated as answers in GMT and are skipped.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::Answer;
use crate::record::InstanceRecord;
use crate::time::{Category, DayDate};
use crate::zones::ZoneTable;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("duplicate prediction id `{0}`")]
    DuplicatePrediction(String),
    #[error("prediction id `{0}` does not exist in the gold set")]
    UnknownInstance(String),
    #[error("gold record `{id}` carries an unparseable answer `{answer}`")]
    BadGoldAnswer { id: String, answer: String },
    #[error("no predictions to score")]
    Empty,
}

/// One model output for one instance, with token counts when the provider
/// log carries them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub id: String,
    pub text: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prompt_tokens: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub output_tokens: Option<u64>,
}

/// A normalized answer recovered from free text. Missing parts (a bare
/// `15:00 GMT` has no date, `Sept 14` no year) match any gold value for
/// that part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extracted {
    Time {
        date: Option<DayDate>,
        minute_of_day: u16,
    },
    Date {
        year: Option<i64>,
        month: u32,
        day: u32,
    },
    Unparseable,
}

impl Extracted {
    pub fn matches(&self, gold: &Answer) -> bool {
        match (self, gold) {
            (
                Extracted::Time {
                    date,
                    minute_of_day,
                },
                Answer::Time(g),
            ) => {
                *minute_of_day == g.minute_of_day()
                    && date.map_or(true, |d| d == g.date())
            }
            (Extracted::Date { year, month, day }, Answer::Date(g)) => {
                *month == g.month()
                    && *day == g.day()
                    && year.map_or(true, |y| y == g.year())
            }
            _ => false,
        }
    }
}

fn re(cell: &'static OnceLock<Regex>, pattern: &'static str) -> &'static Regex {
    cell.get_or_init(|| Regex::new(pattern).expect("static regex"))
}

fn re_boxed() -> &'static Regex {
    static CELL: OnceLock<Regex> = OnceLock::new();
    re(&CELL, r"\\boxed\{([^{}]*)\}")
}

fn re_final_marker() -> &'static Regex {
    static CELL: OnceLock<Regex> = OnceLock::new();
    re(&CELL, r"(?i)final answer|final conclusion|answer is")
}

fn re_time_token() -> &'static Regex {
    static CELL: OnceLock<Regex> = OnceLock::new();
    // Alternatives ordered so the most specific wins at a shared start:
    // full instant, then 12-hour clock, then 24-hour clock with an optional
    // trailing zone word.
    re(
        &CELL,
        r"(?x)
        (?P<iso_date>\d{4}-\d{2}-\d{2})\s+(?P<iso_h>\d{1,2}):(?P<iso_m>\d{2})(?:\s*(?P<iso_label>[A-Za-z]{2,5}))?
        | (?P<ampm_h>\d{1,2})(?::(?P<ampm_m>\d{2}))?\s*(?P<ampm>[AaPp])\.?[Mm]\.?\b
        | (?P<h>\d{1,2}):(?P<m>\d{2})(?:\s*(?P<label>[A-Za-z]{2,5})\b)?
        ",
    )
}

fn re_date_token() -> &'static Regex {
    static CELL: OnceLock<Regex> = OnceLock::new();
    re(
        &CELL,
        r"(?xi)
        (?P<iso_y>\d{4})-(?P<iso_mo>\d{1,2})-(?P<iso_d>\d{1,2})
        | (?P<name>Jan|Feb|Mar|Apr|May|Jun|Jul|Aug|Sep|Oct|Nov|Dec)[a-z]*\.?\s+(?P<name_d>\d{1,2})(?:st|nd|rd|th)?(?:,?\s+(?P<name_y>\d{4}))?
        | (?P<mo>\d{1,2})-(?P<d>\d{1,2})
        ",
    )
}

fn month_from_name(name: &str) -> u32 {
    match name.to_ascii_lowercase().as_str() {
        "jan" => 1,
        "feb" => 2,
        "mar" => 3,
        "apr" => 4,
        "may" => 5,
        "jun" => 6,
        "jul" => 7,
        "aug" => 8,
        "sep" => 9,
        "oct" => 10,
        "nov" => 11,
        "dec" => 12,
        _ => 0,
    }
}

/// GMT and UTC are interchangeable labels at offset zero; any other known
/// zone label disqualifies the token as a GMT answer. Unknown words after a
/// time are ignored.
fn classify_label(label: &str, zones: &ZoneTable) -> Option<bool> {
    let upper = label.to_ascii_uppercase();
    match zones.offset_of(&upper) {
        Some(z) => Some(z.hours() == 0),
        None => None,
    }
}

fn parse_time_token(caps: &regex::Captures, zones: &ZoneTable) -> Option<Extracted> {
    if let Some(date) = caps.name("iso_date") {
        let date: DayDate = date.as_str().parse().ok()?;
        let h: u16 = caps["iso_h"].parse().ok()?;
        let m: u16 = caps["iso_m"].parse().ok()?;
        if h >= 24 || m >= 60 {
            return None;
        }
        if let Some(label) = caps.name("iso_label") {
            match classify_label(label.as_str(), zones) {
                Some(true) | None => {}
                Some(false) => return None,
            }
        }
        return Some(Extracted::Time {
            date: Some(date),
            minute_of_day: h * 60 + m,
        });
    }
    if let Some(ampm) = caps.name("ampm") {
        let h: u16 = caps["ampm_h"].parse().ok()?;
        let m: u16 = caps
            .name("ampm_m")
            .map_or(Some(0), |m| m.as_str().parse().ok())?;
        if !(1..=12).contains(&h) || m >= 60 {
            return None;
        }
        let is_pm = ampm.as_str().eq_ignore_ascii_case("p");
        let h24 = match (h, is_pm) {
            (12, false) => 0,
            (12, true) => 12,
            (h, false) => h,
            (h, true) => h + 12,
        };
        return Some(Extracted::Time {
            date: None,
            minute_of_day: h24 * 60 + m,
        });
    }
    let h: u16 = caps["h"].parse().ok()?;
    let m: u16 = caps["m"].parse().ok()?;
    if h >= 24 || m >= 60 {
        return None;
    }
    if let Some(label) = caps.name("label") {
        match classify_label(label.as_str(), zones) {
            Some(true) | None => {}
            Some(false) => return None,
        }
    }
    Some(Extracted::Time {
        date: None,
        minute_of_day: h * 60 + m,
    })
}

fn parse_date_token(caps: &regex::Captures) -> Option<Extracted> {
    if caps.name("iso_y").is_some() {
        let y: i64 = caps["iso_y"].parse().ok()?;
        let mo: u32 = caps["iso_mo"].parse().ok()?;
        let d: u32 = caps["iso_d"].parse().ok()?;
        DayDate::from_ymd(y, mo, d).ok()?;
        return Some(Extracted::Date {
            year: Some(y),
            month: mo,
            day: d,
        });
    }
    if let Some(name) = caps.name("name") {
        let month = month_from_name(name.as_str());
        let day: u32 = caps["name_d"].parse().ok()?;
        if month == 0 || day == 0 || day > 31 {
            return None;
        }
        let year = caps
            .name("name_y")
            .and_then(|y| y.as_str().parse::<i64>().ok());
        if let Some(y) = year {
            DayDate::from_ymd(y, month, day).ok()?;
        }
        return Some(Extracted::Date {
            year,
            month,
            day,
        });
    }
    let mo: u32 = caps["mo"].parse().ok()?;
    let d: u32 = caps["d"].parse().ok()?;
    if !(1..=12).contains(&mo) || !(1..=31).contains(&d) {
        return None;
    }
    Some(Extracted::Date {
        year: None,
        month: mo,
        day: d,
    })
}

fn first_token(text: &str, category: Category, zones: &ZoneTable) -> Option<Extracted> {
    scan_tokens(text, category, zones).into_iter().next()
}

fn last_token(text: &str, category: Category, zones: &ZoneTable) -> Option<Extracted> {
    scan_tokens(text, category, zones).into_iter().last()
}

fn scan_tokens(text: &str, category: Category, zones: &ZoneTable) -> Vec<Extracted> {
    match category {
        Category::Short => re_time_token()
            .captures_iter(text)
            .filter_map(|caps| parse_time_token(&caps, zones))
            .collect(),
        Category::Long => re_date_token()
            .captures_iter(text)
            .filter_map(|caps| parse_date_token(&caps))
            .collect(),
    }
}

/// Deterministic extraction: last `\boxed{...}`, else the text after the
/// last final-answer phrase, else the last well-formed token anywhere.
pub fn extract_answer(text: &str, category: Category) -> Extracted {
    let zones = ZoneTable::default();
    if let Some(caps) = re_boxed().captures_iter(text).last() {
        if let Some(tok) = first_token(&caps[1], category, &zones) {
            return tok;
        }
    }
    if let Some(m) = re_final_marker().find_iter(text).last() {
        if let Some(tok) = first_token(&text[m.end()..], category, &zones) {
            return tok;
        }
    }
    last_token(text, category, &zones).unwrap_or(Extracted::Unparseable)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct Accuracy {
    pub correct: u64,
    pub total: u64,
    pub accuracy: f64,
}

impl Accuracy {
    fn add(&mut self, correct: bool) {
        self.total += 1;
        if correct {
            self.correct += 1;
        }
        self.accuracy = 100.0 * self.correct as f64 / self.total as f64;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct ZoneErrorRate {
    pub errors: u64,
    pub referenced: u64,
    pub error_rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LengthSummary {
    pub count: u64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct OutputLength {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub correct: Option<LengthSummary>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub incorrect: Option<LengthSummary>,
}

/// Accuracy aggregates keyed by category, dependency type, domain and time
/// zone; counts across any partition sum to the total.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub mode: String,
    pub runs: u32,
    pub overall: Accuracy,
    pub by_category: BTreeMap<String, Accuracy>,
    pub by_dependency_type: BTreeMap<String, Accuracy>,
    pub by_domain: BTreeMap<String, Accuracy>,
    pub zone_error_rates: BTreeMap<String, ZoneErrorRate>,
    pub unparseable: u64,
    pub output_length: OutputLength,
}

struct Tally {
    overall: Accuracy,
    by_category: BTreeMap<String, Accuracy>,
    by_dependency_type: BTreeMap<String, Accuracy>,
    by_domain: BTreeMap<String, Accuracy>,
    zone_errors: BTreeMap<String, (u64, u64)>,
    unparseable: u64,
    correct_lengths: Vec<u64>,
    incorrect_lengths: Vec<u64>,
}

impl Tally {
    fn new() -> Tally {
        Tally {
            overall: Accuracy::default(),
            by_category: BTreeMap::new(),
            by_dependency_type: BTreeMap::new(),
            by_domain: BTreeMap::new(),
            zone_errors: BTreeMap::new(),
            unparseable: 0,
            correct_lengths: Vec::new(),
            incorrect_lengths: Vec::new(),
        }
    }
}

fn quantile(sorted: &[u64], q: f64) -> f64 {
    // Linear interpolation between closest ranks.
    let n = sorted.len();
    if n == 1 {
        return sorted[0] as f64;
    }
    let pos = q * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] as f64 * (1.0 - frac) + sorted[hi] as f64 * frac
}

fn summarize_lengths(mut lengths: Vec<u64>) -> Option<LengthSummary> {
    if lengths.is_empty() {
        return None;
    }
    lengths.sort_unstable();
    Some(LengthSummary {
        count: lengths.len() as u64,
        median: quantile(&lengths, 0.5),
        q1: quantile(&lengths, 0.25),
        q3: quantile(&lengths, 0.75),
    })
}

/// Distinct zone labels an instance mentions.
fn referenced_zones(record: &InstanceRecord) -> Vec<String> {
    let mut zones: Vec<String> = record
        .metadata
        .agent_constraints
        .values()
        .filter_map(|c| c.timezone.clone())
        .collect();
    zones.sort();
    zones.dedup();
    zones
}

fn tally_run(
    golds: &BTreeMap<&str, &InstanceRecord>,
    predictions: &[Prediction],
    tally: &mut Tally,
) -> Result<(), EvalError> {
    let mut seen = std::collections::BTreeSet::new();
    for pred in predictions {
        if !seen.insert(pred.id.as_str()) {
            return Err(EvalError::DuplicatePrediction(pred.id.clone()));
        }
        let record = golds
            .get(pred.id.as_str())
            .ok_or_else(|| EvalError::UnknownInstance(pred.id.clone()))?;
        let gold =
            Answer::parse(record.category, &record.answer).map_err(|_| EvalError::BadGoldAnswer {
                id: record.id.clone(),
                answer: record.answer.clone(),
            })?;
        let extracted = extract_answer(&pred.text, record.category);
        if extracted == Extracted::Unparseable {
            tally.unparseable += 1;
        }
        let correct = extracted.matches(&gold);

        tally.overall.add(correct);
        tally
            .by_category
            .entry(record.category.to_string())
            .or_default()
            .add(correct);
        tally
            .by_dependency_type
            .entry(record.dependency_type.to_string())
            .or_default()
            .add(correct);
        tally
            .by_domain
            .entry(record.domain.clone())
            .or_default()
            .add(correct);
        for zone in referenced_zones(record) {
            let entry = tally.zone_errors.entry(zone).or_insert((0, 0));
            entry.1 += 1;
            if !correct {
                entry.0 += 1;
            }
        }
        if let Some(tokens) = pred.output_tokens {
            if correct {
                tally.correct_lengths.push(tokens);
            } else {
                tally.incorrect_lengths.push(tokens);
            }
        }
    }
    Ok(())
}

/// Score several independent runs over the same gold set and aggregate; a
/// single run is the common case. Accuracy over merged runs equals the
/// average of per-run accuracies when every run covers the same instances.
pub fn score_runs(
    golds: &[InstanceRecord],
    runs: &[Vec<Prediction>],
    mode: &str,
) -> Result<EvalReport, EvalError> {
    if runs.is_empty() || runs.iter().all(|r| r.is_empty()) {
        return Err(EvalError::Empty);
    }
    let index: BTreeMap<&str, &InstanceRecord> =
        golds.iter().map(|r| (r.id.as_str(), r)).collect();
    let mut tally = Tally::new();
    for run in runs {
        tally_run(&index, run, &mut tally)?;
    }
    Ok(EvalReport {
        mode: mode.to_string(),
        runs: runs.len() as u32,
        overall: tally.overall,
        by_category: tally.by_category,
        by_dependency_type: tally.by_dependency_type,
        by_domain: tally.by_domain,
        zone_error_rates: tally
            .zone_errors
            .into_iter()
            .map(|(zone, (errors, referenced))| {
                (
                    zone,
                    ZoneErrorRate {
                        errors,
                        referenced,
                        error_rate: 100.0 * errors as f64 / referenced as f64,
                    },
                )
            })
            .collect(),
        unparseable: tally.unparseable,
        output_length: OutputLength {
            correct: summarize_lengths(tally.correct_lengths),
            incorrect: summarize_lengths(tally.incorrect_lengths),
        },
    })
}

/// Exact-match scoring of one prediction set against the gold records.
pub fn score(
    golds: &[InstanceRecord],
    predictions: &[Prediction],
    mode: &str,
) -> Result<EvalReport, EvalError> {
    score_runs(golds, &[predictions.to_vec()], mode)
}

/// Human-readable table mirroring the Short/Long/Overall layout.
pub fn render_report_markdown(report: &EvalReport) -> String {
    let acc = |key: &str| {
        report
            .by_category
            .get(key)
            .map_or("-".to_string(), |a| format!("{:.2}", a.accuracy))
    };
    let mut out = String::new();
    out.push_str("| Models & Methods | Short | Long | Overall |\n");
    out.push_str("|---|---|---|---|\n");
    out.push_str(&format!(
        "| {} | {} | {} | {:.2} |\n",
        report.mode,
        acc("short"),
        acc("long"),
        report.overall.accuracy
    ));
    out.push_str("\n**By dependency type**\n\n");
    out.push_str("| Dependency | Accuracy | Correct/Total |\n|---|---|---|\n");
    for (k, a) in &report.by_dependency_type {
        out.push_str(&format!(
            "| {k} | {:.2} | {}/{} |\n",
            a.accuracy, a.correct, a.total
        ));
    }
    out.push_str("\n**By domain**\n\n");
    out.push_str("| Domain | Accuracy | Correct/Total |\n|---|---|---|\n");
    for (k, a) in &report.by_domain {
        out.push_str(&format!(
            "| {k} | {:.2} | {}/{} |\n",
            a.accuracy, a.correct, a.total
        ));
    }
    if !report.zone_error_rates.is_empty() {
        out.push_str("\n**Error rates across time zones**\n\n");
        out.push_str("| Zone | Error rate | Errors/Referenced |\n|---|---|---|\n");
        for (k, z) in &report.zone_error_rates {
            out.push_str(&format!(
                "| {k} | {:.2} | {}/{} |\n",
                z.error_rate, z.errors, z.referenced
            ));
        }
    }
    out.push_str(&format!(
        "\nUnparseable outputs: {} (scored incorrect)\n",
        report.unparseable
    ));
    if let Some(s) = &report.output_length.correct {
        out.push_str(&format!(
            "Output tokens (correct): median {:.1}, q1 {:.1}, q3 {:.1}, n={}\n",
            s.median, s.q1, s.q3, s.count
        ));
    }
    if let Some(s) = &report.output_length.incorrect {
        out.push_str(&format!(
            "Output tokens (incorrect): median {:.1}, q1 {:.1}, q3 {:.1}, n={}\n",
            s.median, s.q1, s.q3, s.count
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn time(h: u16, m: u16) -> Extracted {
        Extracted::Time {
            date: None,
            minute_of_day: h * 60 + m,
        }
    }

    #[test]
    fn final_answer_phrases_extract() {
        assert_eq!(
            extract_answer("The final answer is 2014-04-08.", Category::Long),
            Extracted::Date {
                year: Some(2014),
                month: 4,
                day: 8
            }
        );
        assert_eq!(
            extract_answer(
                "... the earliest date that the entire project can be completed is: 2014-07-27",
                Category::Long
            ),
            Extracted::Date {
                year: Some(2014),
                month: 7,
                day: 27
            }
        );
    }

    #[test]
    fn boxed_marker_takes_priority() {
        assert_eq!(
            extract_answer(
                "Some chatter mentioning 09:00 first. \\boxed{15:00 GMT}",
                Category::Short
            ),
            time(15, 0)
        );
        // A boxed answer wins over a later stray token.
        assert_eq!(
            extract_answer("\\boxed{15:00 GMT} trailing 08:00 noise", Category::Short),
            time(15, 0)
        );
    }

    #[test]
    fn last_token_fallback_and_labels() {
        assert_eq!(
            extract_answer("It could be 13:00 GMT, no wait, 14:00 UTC.", Category::Short),
            time(14, 0)
        );
        // A non-zero zone label disqualifies the token.
        assert_eq!(
            extract_answer("Sarah starts at 10:00 CET and finishes 14:00 GMT", Category::Short),
            time(14, 0)
        );
        assert_eq!(
            extract_answer("Done by 3:00 PM.", Category::Short),
            time(15, 0)
        );
        assert_eq!(
            extract_answer(
                "Completion: 2014-12-17 15:00 GMT by both agents",
                Category::Short
            ),
            Extracted::Time {
                date: Some(DayDate::from_ymd(2014, 12, 17).unwrap()),
                minute_of_day: 900
            }
        );
    }

    #[test]
    fn month_name_and_numeric_dates_normalize_together() {
        let gold = Answer::Date(DayDate::from_ymd(2021, 9, 14).unwrap());
        for text in ["Sept 14", "September 14", "Sep. 14", "09-14", "2021-09-14"] {
            let extracted = extract_answer(text, Category::Long);
            assert!(extracted.matches(&gold), "{text} -> {extracted:?}");
        }
        assert!(!extract_answer("Sept 15", Category::Long).matches(&gold));
        assert!(!extract_answer("2020-09-14", Category::Long).matches(&gold));
    }

    #[test]
    fn unparseable_text_is_flagged() {
        assert_eq!(
            extract_answer("I cannot determine the schedule.", Category::Short),
            Extracted::Unparseable
        );
        assert_eq!(
            extract_answer("", Category::Long),
            Extracted::Unparseable
        );
    }

    #[test]
    fn quantiles_interpolate() {
        assert_eq!(quantile(&[1, 2, 3, 4], 0.5), 2.5);
        assert_eq!(quantile(&[1, 2, 3], 0.5), 2.0);
        assert_eq!(quantile(&[10], 0.25), 10.0);
    }
}
