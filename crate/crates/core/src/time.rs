//! GMT-anchored calendar and clock arithmetic.
//!
//! All scheduling math runs on integer minutes in GMT. Zone offsets are fixed
//! whole hours supplied by the instance; there are no daylight-saving rules
//! anywhere in the engine, no leap seconds, and no sub-minute precision.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub const MINUTES_PER_HOUR: i64 = 60;
pub const MINUTES_PER_DAY: i64 = 1440;
/// Short problems span one day at hour granularity.
pub const SHORT_HORIZON_HOURS: u32 = 24;
/// Long problems span one week at day granularity.
pub const LONG_HORIZON_DAYS: u32 = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TimeError {
    #[error("invalid date `{0}` (expected YYYY-MM-DD)")]
    InvalidDate(String),
    #[error("invalid instant `{0}` (expected YYYY-MM-DD HH:MM GMT)")]
    InvalidInstant(String),
    #[error("invalid clock time `{0}` (expected HH:MM in 00:00..=24:00)")]
    InvalidClock(String),
    #[error("degenerate clock window: start equals end ({0})")]
    DegenerateWindow(String),
    #[error("zone offset {0} outside -12..=+14 hours")]
    OffsetOutOfRange(i32),
    #[error("horizon {got} does not match the {category} category (expected {expected})")]
    HorizonMismatch {
        category: Category,
        got: u32,
        expected: u32,
    },
    #[error("{0} instants must be aligned to {1}")]
    Misaligned(Category, &'static str),
}

/// Problem category: one-day problems at hour granularity with time zones,
/// or one-week problems at day granularity with weekday calendars.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Short,
    Long,
}

impl Category {
    pub fn horizon_slots(self) -> u32 {
        match self {
            Category::Short => SHORT_HORIZON_HOURS,
            Category::Long => LONG_HORIZON_DAYS,
        }
    }

    pub fn slot_label(self) -> &'static str {
        match self {
            Category::Short => "hour",
            Category::Long => "day",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Short => "short",
            Category::Long => "long",
        })
    }
}

impl FromStr for Category {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "short" => Ok(Category::Short),
            "long" => Ok(Category::Long),
            other => Err(format!("unknown category `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Weekday {
    Monday,
    Tuesday,
    Wednesday,
    Thursday,
    Friday,
    Saturday,
    Sunday,
}

impl Weekday {
    pub fn name(self) -> &'static str {
        match self {
            Weekday::Monday => "Monday",
            Weekday::Tuesday => "Tuesday",
            Weekday::Wednesday => "Wednesday",
            Weekday::Thursday => "Thursday",
            Weekday::Friday => "Friday",
            Weekday::Saturday => "Saturday",
            Weekday::Sunday => "Sunday",
        }
    }

    pub fn is_weekend(self) -> bool {
        matches!(self, Weekday::Saturday | Weekday::Sunday)
    }

    fn from_index(i: i64) -> Weekday {
        match i {
            0 => Weekday::Monday,
            1 => Weekday::Tuesday,
            2 => Weekday::Wednesday,
            3 => Weekday::Thursday,
            4 => Weekday::Friday,
            5 => Weekday::Saturday,
            _ => Weekday::Sunday,
        }
    }
}

impl fmt::Display for Weekday {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A proleptic-Gregorian calendar date, stored as days since 1970-01-01.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DayDate(i64);

// Civil-date conversions use the classic era/year-of-era decomposition; both
// directions are exact over the full i32 year range.
fn days_from_civil(y: i64, m: u32, d: u32) -> i64 {
    let y = if m <= 2 { y - 1 } else { y };
    let era = if y >= 0 { y } else { y - 399 } / 400;
    let yoe = y - era * 400;
    let mp = if m > 2 { m - 3 } else { m + 9 } as i64;
    let doy = (153 * mp + 2) / 5 + d as i64 - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    era * 146097 + doe - 719468
}

fn civil_from_days(z: i64) -> (i64, u32, u32) {
    let z = z + 719468;
    let era = if z >= 0 { z } else { z - 146096 } / 146097;
    let doe = z - era * 146097;
    let yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let m = if mp < 10 { mp + 3 } else { mp - 9 } as u32;
    (if m <= 2 { y + 1 } else { y }, m, d)
}

fn is_leap(y: i64) -> bool {
    y % 4 == 0 && (y % 100 != 0 || y % 400 == 0)
}

fn days_in_month(y: i64, m: u32) -> u32 {
    match m {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 => {
            if is_leap(y) {
                29
            } else {
                28
            }
        }
        _ => 0,
    }
}

impl DayDate {
    pub fn from_ymd(year: i64, month: u32, day: u32) -> Result<DayDate, TimeError> {
        if month < 1 || month > 12 || day < 1 || day > days_in_month(year, month) {
            return Err(TimeError::InvalidDate(format!(
                "{year:04}-{month:02}-{day:02}"
            )));
        }
        Ok(DayDate(days_from_civil(year, month, day)))
    }

    pub fn from_day_number(days_since_epoch: i64) -> DayDate {
        DayDate(days_since_epoch)
    }

    pub fn day_number(self) -> i64 {
        self.0
    }

    pub fn ymd(self) -> (i64, u32, u32) {
        civil_from_days(self.0)
    }

    pub fn year(self) -> i64 {
        self.ymd().0
    }

    pub fn month(self) -> u32 {
        self.ymd().1
    }

    pub fn day(self) -> u32 {
        self.ymd().2
    }

    /// Gregorian weekday (1970-01-01 was a Thursday).
    pub fn weekday(self) -> Weekday {
        Weekday::from_index((self.0 + 3).rem_euclid(7))
    }

    pub fn add_days(self, days: i64) -> DayDate {
        DayDate(self.0 + days)
    }

    pub fn days_until(self, other: DayDate) -> i64 {
        other.0 - self.0
    }

    pub fn midnight(self) -> Instant {
        Instant(self.0 * MINUTES_PER_DAY)
    }
}

impl fmt::Display for DayDate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (y, m, d) = self.ymd();
        write!(f, "{y:04}-{m:02}-{d:02}")
    }
}

impl FromStr for DayDate {
    type Err = TimeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TimeError::InvalidDate(s.to_string());
        let mut parts = s.splitn(3, '-');
        let y: i64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let m: u32 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let d: u32 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        DayDate::from_ymd(y, m, d)
    }
}

impl Serialize for DayDate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DayDate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A GMT point in time, stored as minutes since 1970-01-01 00:00 GMT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Instant(i64);

impl Instant {
    pub fn from_minutes(minutes_since_epoch: i64) -> Instant {
        Instant(minutes_since_epoch)
    }

    pub fn from_date_minute(date: DayDate, minute_of_day: u16) -> Instant {
        Instant(date.day_number() * MINUTES_PER_DAY + minute_of_day as i64)
    }

    pub fn from_ymd_hm(y: i64, mo: u32, d: u32, h: u16, mi: u16) -> Result<Instant, TimeError> {
        let date = DayDate::from_ymd(y, mo, d)?;
        if h >= 24 || mi >= 60 {
            return Err(TimeError::InvalidInstant(format!(
                "{y:04}-{mo:02}-{d:02} {h:02}:{mi:02} GMT"
            )));
        }
        Ok(Instant::from_date_minute(date, h * 60 + mi))
    }

    pub fn minutes(self) -> i64 {
        self.0
    }

    pub fn date(self) -> DayDate {
        DayDate(self.0.div_euclid(MINUTES_PER_DAY))
    }

    pub fn minute_of_day(self) -> u16 {
        self.0.rem_euclid(MINUTES_PER_DAY) as u16
    }

    pub fn weekday(self) -> Weekday {
        self.date().weekday()
    }

    pub fn add_minutes(self, minutes: i64) -> Instant {
        Instant(self.0 + minutes)
    }

    pub fn add_hours(self, hours: i64) -> Instant {
        Instant(self.0 + hours * MINUTES_PER_HOUR)
    }

    pub fn is_hour_aligned(self) -> bool {
        self.0.rem_euclid(MINUTES_PER_HOUR) == 0
    }
}

impl fmt::Display for Instant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.minute_of_day();
        write!(f, "{} {:02}:{:02} GMT", self.date(), m / 60, m % 60)
    }
}

impl FromStr for Instant {
    type Err = TimeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TimeError::InvalidInstant(s.to_string());
        let mut parts = s.split_whitespace();
        let date: DayDate = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let clock = parts.next().ok_or_else(bad)?;
        let label = parts.next().ok_or_else(bad)?;
        if parts.next().is_some() || !matches!(label, "GMT" | "UTC") {
            return Err(bad());
        }
        let minute = parse_clock(clock).map_err(|_| bad())?;
        if minute >= MINUTES_PER_DAY as u16 {
            return Err(bad());
        }
        Ok(Instant::from_date_minute(date, minute))
    }
}

impl Serialize for Instant {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Instant {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Fixed whole-hour offset east of GMT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ZoneOffset(i8);

impl ZoneOffset {
    pub const UTC: ZoneOffset = ZoneOffset(0);

    pub fn new(hours_east_of_gmt: i32) -> Result<ZoneOffset, TimeError> {
        if !(-12..=14).contains(&hours_east_of_gmt) {
            return Err(TimeError::OffsetOutOfRange(hours_east_of_gmt));
        }
        Ok(ZoneOffset(hours_east_of_gmt as i8))
    }

    pub fn hours(self) -> i32 {
        self.0 as i32
    }

    pub fn minutes_east(self) -> i64 {
        self.0 as i64 * MINUTES_PER_HOUR
    }

    /// Renders like `GMT+10` / `GMT-5` / `GMT+0`.
    pub fn gmt_label(self) -> String {
        format!("GMT{:+}", self.0)
    }
}

/// Parse `HH:MM` into a minute of day. `24:00` is accepted as the end-of-day
/// boundary.
pub fn parse_clock(s: &str) -> Result<u16, TimeError> {
    let bad = || TimeError::InvalidClock(s.to_string());
    let (h, m) = s.split_once(':').ok_or_else(bad)?;
    if m.len() != 2 {
        return Err(bad());
    }
    let h: u16 = h.parse().map_err(|_| bad())?;
    let m: u16 = m.parse().map_err(|_| bad())?;
    let minute = h * 60 + m;
    if m >= 60 || minute > MINUTES_PER_DAY as u16 {
        return Err(bad());
    }
    Ok(minute)
}

/// Format a minute of day as `HH:MM` (zero padded) or `H:MM`.
pub fn format_clock(minute_of_day: u16, pad: bool) -> String {
    let (h, m) = (minute_of_day / 60, minute_of_day % 60);
    if pad {
        format!("{h:02}:{m:02}")
    } else {
        format!("{h}:{m:02}")
    }
}

/// A recurring local clock interval `[start, end)` in minutes of day.
///
/// `start > end` means the window crosses local midnight; after conversion to
/// GMT a window may likewise straddle a GMT calendar-day boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClockWindow {
    start: u16,
    end: u16,
}

impl ClockWindow {
    pub fn new(start_minute_of_day: u16, end_minute_of_day: u16) -> Result<ClockWindow, TimeError> {
        let max = MINUTES_PER_DAY as u16;
        if start_minute_of_day > max || end_minute_of_day > max {
            return Err(TimeError::InvalidClock(format!(
                "{}-{}",
                start_minute_of_day, end_minute_of_day
            )));
        }
        if start_minute_of_day == 0 && end_minute_of_day == max {
            return Ok(ClockWindow { start: 0, end: max });
        }
        // 24:00 and 00:00 denote the same boundary on a daily-recurring
        // window; canonicalize so that only a midnight-ending window keeps
        // end == 1440.
        let start = start_minute_of_day % max;
        let end_norm = end_minute_of_day % max;
        if start == end_norm {
            return Err(TimeError::DegenerateWindow(format!(
                "{}-{}",
                format_clock(start_minute_of_day, true),
                format_clock(end_minute_of_day, true)
            )));
        }
        let end = if end_norm == 0 { max } else { end_norm };
        Ok(ClockWindow { start, end })
    }

    pub fn from_hours(start_hour: u16, end_hour: u16) -> Result<ClockWindow, TimeError> {
        ClockWindow::new(start_hour * 60, end_hour * 60)
    }

    pub fn start_minute(self) -> u16 {
        self.start
    }

    pub fn end_minute(self) -> u16 {
        self.end
    }

    pub fn wraps_midnight(self) -> bool {
        self.start > self.end
    }

    pub fn duration_minutes(self) -> i64 {
        if self.start < self.end {
            (self.end - self.start) as i64
        } else {
            MINUTES_PER_DAY - self.start as i64 + self.end as i64
        }
    }

    pub fn contains_minute(self, minute_of_day: u16) -> bool {
        let m = minute_of_day % MINUTES_PER_DAY as u16;
        if self.wraps_midnight() {
            m >= self.start || m < self.end
        } else {
            m >= self.start && m < self.end
        }
    }

    /// Whether the local range `[from, from+len)` (minutes of day, possibly
    /// crossing local midnight) lies entirely inside the window.
    pub fn contains_range(self, from: u16, len: u16) -> bool {
        split_day_range(from, len)
            .into_iter()
            .flatten()
            .all(|(a, b)| self.contains_linear(a, b))
    }

    /// Whether the local range `[from, from+len)` intersects the window.
    pub fn overlaps_range(self, from: u16, len: u16) -> bool {
        split_day_range(from, len)
            .into_iter()
            .flatten()
            .any(|(a, b)| self.overlaps_linear(a, b))
    }

    fn contains_linear(self, a: u16, b: u16) -> bool {
        if self.wraps_midnight() {
            a >= self.start || b <= self.end
        } else {
            a >= self.start && b <= self.end
        }
    }

    fn overlaps_linear(self, a: u16, b: u16) -> bool {
        if self.wraps_midnight() {
            a < self.end || b > self.start
        } else {
            a < self.end && b > self.start
        }
    }

    /// Map the window occurrence anchored on `local_day` to its GMT interval.
    /// Duration is preserved exactly; the result may straddle a GMT midnight.
    pub fn to_gmt(self, zone: ZoneOffset, local_day: DayDate) -> GmtInterval {
        let start = local_day.day_number() * MINUTES_PER_DAY + self.start as i64
            - zone.minutes_east();
        GmtInterval {
            start: Instant(start),
            end: Instant(start + self.duration_minutes()),
        }
    }
}

/// Split `[from, from+len)` on the day circle into at most two linear pieces
/// that do not cross the 24:00 boundary.
fn split_day_range(from: u16, len: u16) -> [Option<(u16, u16)>; 2] {
    let day = MINUTES_PER_DAY as u16;
    let from = from % day;
    let end = from as i64 + len as i64;
    if end <= day as i64 {
        [Some((from, end as u16)), None]
    } else {
        [Some((from, day)), Some((0, (end - day as i64) as u16))]
    }
}

/// An absolute GMT interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GmtInterval {
    pub start: Instant,
    pub end: Instant,
}

impl GmtInterval {
    pub fn new(start: Instant, end: Instant) -> GmtInterval {
        GmtInterval { start, end }
    }

    pub fn duration_minutes(self) -> i64 {
        self.end.minutes() - self.start.minutes()
    }

    pub fn contains(self, t: Instant) -> bool {
        t >= self.start && t < self.end
    }

    pub fn overlaps(self, other: GmtInterval) -> bool {
        self.start < other.end && other.start < self.end
    }

    /// Break the interval into per-GMT-day pieces `(day, start_minute,
    /// end_minute)`; a window that crosses GMT midnight yields two pieces on
    /// adjacent days.
    pub fn split_by_gmt_day(self) -> Vec<(DayDate, u16, u16)> {
        let mut pieces = Vec::new();
        let mut cursor = self.start.minutes();
        while cursor < self.end.minutes() {
            let day = cursor.div_euclid(MINUTES_PER_DAY);
            let day_end = (day + 1) * MINUTES_PER_DAY;
            let piece_end = day_end.min(self.end.minutes());
            pieces.push((
                DayDate::from_day_number(day),
                (cursor - day * MINUTES_PER_DAY) as u16,
                (piece_end - day * MINUTES_PER_DAY) as u16,
            ));
            cursor = piece_end;
        }
        pieces
    }

    /// Inverse of [`ClockWindow::to_gmt`]: recover the local window and its
    /// anchoring local day under the given offset. A 24-hour interval
    /// canonicalizes to the 00:00-24:00 window.
    pub fn to_local(self, zone: ZoneOffset) -> (ClockWindow, DayDate) {
        let local_start = self.start.minutes() + zone.minutes_east();
        let day = DayDate::from_day_number(local_start.div_euclid(MINUTES_PER_DAY));
        if self.duration_minutes() >= MINUTES_PER_DAY {
            let full = ClockWindow {
                start: 0,
                end: MINUTES_PER_DAY as u16,
            };
            return (full, day);
        }
        let start = local_start.rem_euclid(MINUTES_PER_DAY) as u16;
        let end_raw = start as i64 + self.duration_minutes();
        let end = if end_raw == MINUTES_PER_DAY {
            MINUTES_PER_DAY as u16
        } else {
            end_raw.rem_euclid(MINUTES_PER_DAY) as u16
        };
        (ClockWindow { start, end }, day)
    }
}

/// One cell of the scheduling grid: an hour (short) or a day (long).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub index: u32,
    pub start: Instant,
    pub end: Instant,
}

/// Lay out the scheduling grid for a project: 24 hour slots or 7 day slots,
/// GMT-anchored and ascending. `horizon_slots` must match the category.
pub fn slot_grid(
    category: Category,
    project_start: Instant,
    horizon_slots: u32,
) -> Result<Vec<Slot>, TimeError> {
    let expected = category.horizon_slots();
    if horizon_slots != expected {
        return Err(TimeError::HorizonMismatch {
            category,
            got: horizon_slots,
            expected,
        });
    }
    let slot_minutes = match category {
        Category::Short => {
            if !project_start.is_hour_aligned() {
                return Err(TimeError::Misaligned(category, "whole hours"));
            }
            MINUTES_PER_HOUR
        }
        Category::Long => {
            if project_start.minute_of_day() != 0 {
                return Err(TimeError::Misaligned(category, "midnight GMT"));
            }
            MINUTES_PER_DAY
        }
    };
    Ok((0..horizon_slots)
        .map(|i| Slot {
            index: i,
            start: project_start.add_minutes(i as i64 * slot_minutes),
            end: project_start.add_minutes((i as i64 + 1) * slot_minutes),
        })
        .collect())
}
