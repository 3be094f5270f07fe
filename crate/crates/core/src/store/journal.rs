//! Append-only JSON Lines journal of anonymized screening outcomes.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use uuid::Uuid;

use crate::scoring::{Channel, Level, ScreeningResult, ITEM_COUNT};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum StoreError {
    /// The journal could not be read or written; the operation may be retried.
    #[error("journal I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("result rejected: {0}")]
    Rejected(String),
}

impl StoreError {
    pub fn is_retriable(&self) -> bool {
        matches!(self, StoreError::Io(_))
    }
}

/// One persisted screening. Holds scores only: no utterances, names,
/// session ids or network addresses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredRecord {
    pub schema_version: u32,
    pub record_id: Uuid,
    pub created_at: DateTime<Utc>,
    pub channel: Channel,
    pub item_scores: [Level; ITEM_COUNT],
    pub total: u8,
    pub positive: bool,
    pub locale: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedOutcome {
    Declined,
    Aborted,
}

/// Counter event for an interview that ended without scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionClosed {
    pub schema_version: u32,
    pub created_at: DateTime<Utc>,
    pub channel: Channel,
    pub outcome: ClosedOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JournalEntry {
    ScreeningResult(StoredRecord),
    SessionClosed(SessionClosed),
}

/// Everything readable from a journal file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct JournalContents {
    pub records: Vec<StoredRecord>,
    pub declined: u64,
    pub aborted: u64,
    /// Lines that did not parse, typically a write torn by a crash.
    pub skipped_lines: usize,
}

pub fn read_journal(path: impl AsRef<Path>) -> Result<JournalContents, StoreError> {
    let path = path.as_ref();
    if !path.exists() {
        return Ok(JournalContents::default());
    }
    read_entries(File::open(path)?)
}

fn read_entries(reader: impl Read) -> Result<JournalContents, StoreError> {
    let mut contents = JournalContents::default();
    for line in BufReader::new(reader).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<JournalEntry>(&line) {
            Ok(JournalEntry::ScreeningResult(r)) => contents.records.push(r),
            Ok(JournalEntry::SessionClosed(e)) => match e.outcome {
                ClosedOutcome::Declined => contents.declined += 1,
                ClosedOutcome::Aborted => contents.aborted += 1,
            },
            Err(_) => contents.skipped_lines += 1,
        }
    }
    Ok(contents)
}

struct Inner {
    file: File,
    records: Vec<StoredRecord>,
    by_id: HashMap<Uuid, usize>,
    by_session: HashMap<Uuid, Uuid>,
    declined: u64,
    aborted: u64,
}

/// Single-writer handle on a journal file. Appends are serialized through
/// an internal lock; earlier lines are never rewritten.
pub struct Journal {
    path: PathBuf,
    locale: String,
    inner: Mutex<Inner>,
}

impl std::fmt::Debug for Journal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Journal").field("path", &self.path).finish()
    }
}

impl Journal {
    /// Opens or creates a journal. Records are tagged with `locale`.
    pub fn open(
        path: impl Into<PathBuf>,
        locale: impl Into<String>,
    ) -> Result<Journal, StoreError> {
        let path = path.into();
        let mut file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(&path)?;
        let contents = read_entries(&file)?;

        // Terminate a torn final line so the next append starts cleanly.
        let len = file.metadata()?.len();
        if len > 0 {
            let mut last = [0u8; 1];
            file.seek(SeekFrom::Start(len - 1))?;
            file.read_exact(&mut last)?;
            if last[0] != b'\n' {
                file.write_all(b"\n")?;
                file.sync_data()?;
            }
        }

        let by_id = contents
            .records
            .iter()
            .enumerate()
            .map(|(i, r)| (r.record_id, i))
            .collect();
        Ok(Journal {
            path,
            locale: locale.into(),
            inner: Mutex::new(Inner {
                file,
                records: contents.records,
                by_id,
                by_session: HashMap::new(),
                declined: contents.declined,
                aborted: contents.aborted,
            }),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn append(file: &mut File, entry: &JournalEntry) -> Result<(), StoreError> {
        let mut line = serde_json::to_string(entry).map_err(std::io::Error::from)?;
        line.push('\n');
        file.write_all(line.as_bytes())?;
        file.sync_data()?;
        Ok(())
    }

    /// Appends an anonymized record for `result` and returns its id.
    /// Persisting the same session again returns the id of the first write.
    pub fn persist_result(&self, result: &ScreeningResult) -> Result<Uuid, StoreError> {
        if result.transcript.is_some() {
            return Err(StoreError::Rejected(
                "result carries transcript text; anonymize it first".into(),
            ));
        }
        result.validate().map_err(StoreError::Rejected)?;

        let mut inner = self.inner.lock().expect("journal lock poisoned");
        if let Some(id) = inner.by_session.get(&result.session_id) {
            return Ok(*id);
        }
        let record = StoredRecord {
            schema_version: SCHEMA_VERSION,
            record_id: Uuid::new_v4(),
            created_at: result.completed_at,
            channel: result.channel,
            item_scores: result.item_scores,
            total: result.total,
            positive: result.positive,
            locale: self.locale.clone(),
        };
        Self::append(
            &mut inner.file,
            &JournalEntry::ScreeningResult(record.clone()),
        )?;
        let id = record.record_id;
        let index = inner.records.len();
        inner.records.push(record);
        inner.by_id.insert(id, index);
        inner.by_session.insert(result.session_id, id);
        Ok(id)
    }

    /// Counts an interview that ended without scores.
    pub fn record_closed(
        &self,
        outcome: ClosedOutcome,
        channel: Channel,
        at: DateTime<Utc>,
    ) -> Result<(), StoreError> {
        let mut inner = self.inner.lock().expect("journal lock poisoned");
        let event = SessionClosed {
            schema_version: SCHEMA_VERSION,
            created_at: at,
            channel,
            outcome,
        };
        Self::append(&mut inner.file, &JournalEntry::SessionClosed(event))?;
        match outcome {
            ClosedOutcome::Declined => inner.declined += 1,
            ClosedOutcome::Aborted => inner.aborted += 1,
        }
        Ok(())
    }

    pub fn get(&self, record_id: Uuid) -> Option<StoredRecord> {
        let inner = self.inner.lock().expect("journal lock poisoned");
        inner
            .by_id
            .get(&record_id)
            .map(|&i| inner.records[i].clone())
    }

    pub fn records(&self) -> Vec<StoredRecord> {
        self.inner
            .lock()
            .expect("journal lock poisoned")
            .records
            .clone()
    }

    pub fn closed_counts(&self) -> (u64, u64) {
        let inner = self.inner.lock().expect("journal lock poisoned");
        (inner.declined, inner.aborted)
    }
}
