//! Fixed label-to-offset table for the time zones instances mention.
//!
//! Labels are plain names for fixed offsets; `CET` is always UTC+1 and `EST`
//! always UTC-5 here, with no daylight-saving interpretation. The built-in
//! table can be extended from a JSON config file of the form
//! `{"AEST": 10, "NZST": 12}`.

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::time::{TimeError, ZoneOffset};

pub const BUILTIN_ZONES: &[(&str, i32)] = &[
    ("AEST", 10),
    ("NZST", 12),
    ("CET", 1),
    ("EST", -5),
    ("PST", -8),
    ("UTC", 0),
    ("GMT", 0),
];

#[derive(Debug, Error)]
pub enum ZoneTableError {
    #[error("failed reading zone table {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("failed parsing zone table {path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error("zone `{label}`: {source}")]
    BadOffset { label: String, source: TimeError },
}

#[derive(Debug, Clone)]
pub struct ZoneTable {
    labels: BTreeMap<String, ZoneOffset>,
}

impl Default for ZoneTable {
    fn default() -> Self {
        let labels = BUILTIN_ZONES
            .iter()
            .map(|&(label, hours)| {
                (
                    label.to_string(),
                    ZoneOffset::new(hours).expect("builtin offsets are valid"),
                )
            })
            .collect();
        ZoneTable { labels }
    }
}

impl ZoneTable {
    /// Built-in table extended (or overridden) by entries from a JSON file.
    pub fn from_path(path: &Path) -> Result<ZoneTable, ZoneTableError> {
        let text = std::fs::read_to_string(path).map_err(|source| ZoneTableError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let raw: BTreeMap<String, i32> =
            serde_json::from_str(&text).map_err(|source| ZoneTableError::Parse {
                path: path.display().to_string(),
                source,
            })?;
        let mut table = ZoneTable::default();
        for (label, hours) in raw {
            let offset = ZoneOffset::new(hours)
                .map_err(|source| ZoneTableError::BadOffset {
                    label: label.clone(),
                    source,
                })?;
            table.labels.insert(label, offset);
        }
        Ok(table)
    }

    pub fn offset_of(&self, label: &str) -> Option<ZoneOffset> {
        self.labels.get(label).copied()
    }

    pub fn labels(&self) -> impl Iterator<Item = (&str, ZoneOffset)> {
        self.labels.iter().map(|(l, o)| (l.as_str(), *o))
    }

    /// Labels whose offset is zero are interchangeable in answers (GMT/UTC).
    pub fn is_offset_zero_label(&self, label: &str) -> bool {
        self.offset_of(label).is_some_and(|z| z.hours() == 0)
    }
}
