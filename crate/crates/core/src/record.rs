//! Benchmark rows and JSONL IO.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metadata::InstanceMetadata;
use crate::model::DependencyType;
use crate::time::Category;

/// One serialized benchmark instance: the dialogue, the question, the
/// structured metadata and the verified answer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub id: String,
    pub category: Category,
    pub domain: String,
    pub dependency_type: DependencyType,
    pub seed: u64,
    pub dialogue: String,
    pub question: String,
    pub metadata: InstanceMetadata,
    pub answer: String,
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("failed reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: invalid record: {source}")]
    Parse {
        path: String,
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("duplicate record id `{id}` at {path}:{line}")]
    DuplicateId {
        path: String,
        line: usize,
        id: String,
    },
}

/// Read a JSONL file of records, skipping blank lines and rejecting
/// duplicate ids.
pub fn read_records(path: &Path) -> Result<Vec<InstanceRecord>, RecordError> {
    let file = std::fs::File::open(path).map_err(|source| RecordError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut records: Vec<InstanceRecord> = Vec::new();
    for (i, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|source| RecordError::Io {
            path: path.display().to_string(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: InstanceRecord =
            serde_json::from_str(&line).map_err(|source| RecordError::Parse {
                path: path.display().to_string(),
                line: i + 1,
                source,
            })?;
        if records.iter().any(|r| r.id == record.id) {
            return Err(RecordError::DuplicateId {
                path: path.display().to_string(),
                line: i + 1,
                id: record.id,
            });
        }
        records.push(record);
    }
    Ok(records)
}

pub fn write_records(path: &Path, records: &[InstanceRecord]) -> Result<(), RecordError> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path).map_err(|source| {
        RecordError::Io {
            path: path.display().to_string(),
            source,
        }
    })?);
    for record in records {
        serde_json::to_writer(&mut out, record).map_err(|source| RecordError::Parse {
            path: path.display().to_string(),
            line: 0,
            source,
        })?;
        out.write_all(b"\n").map_err(|source| RecordError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    out.flush().map_err(|source| RecordError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_json_round_trips() {
        let json = r#"{
            "id": "short-0000",
            "category": "short",
            "domain": "Computer Science",
            "dependency_type": "fork",
            "seed": 7,
            "dialogue": "Agent2: The project will start at 2014-12-17 00:00 GMT.",
            "question": "What is the earliest time (in GMT) by which the whole project can be completed?",
            "metadata": {
                "category": "short",
                "project_start": "2014-12-17 00:00 GMT",
                "tasks": [{"name": "Task A", "duration": 2, "unit": "hours"}],
                "agents": ["Agent1"],
                "dependencies": [],
                "dependency_graph": "A->B,A->C",
                "agent_constraints": {},
                "task_name_map": {"Task A": "Task A"},
                "agent_name_map": {"Agent1": "Agent1"}
            },
            "answer": "2014-12-17 15:00 GMT"
        }"#;
        let record: InstanceRecord = serde_json::from_str(json).unwrap();
        let round = serde_json::to_string(&record).unwrap();
        let again: InstanceRecord = serde_json::from_str(&round).unwrap();
        assert_eq!(record, again);
    }
}
