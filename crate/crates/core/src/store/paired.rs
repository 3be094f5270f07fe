//! CSV import and export of paired form/agent datasets.

use std::io::Read;
use std::path::Path;

use thiserror::Error;

use crate::psychometrics::PairedRecord;
use crate::scoring::ITEM_COUNT;

pub const PAIRED_HEADER: [&str; 22] = [
    "subject_id",
    "i1",
    "i2",
    "i3",
    "i4",
    "i5",
    "i6",
    "i7",
    "i8",
    "i9",
    "phq9",
    "pi1",
    "pi2",
    "pi3",
    "pi4",
    "pi5",
    "pi6",
    "pi7",
    "pi8",
    "pi9",
    "pphq9",
    "days_between",
];

#[derive(Debug, Error)]
pub enum PairedCsvError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("header must be `{expected}`, found `{found}`")]
    Header { expected: String, found: String },
    #[error("line {line}: {message}")]
    Row { line: u64, message: String },
}

impl PairedCsvError {
    /// The file line a row-level error refers to, when known.
    pub fn line(&self) -> Option<u64> {
        match self {
            PairedCsvError::Row { line, .. } => Some(*line),
            _ => None,
        }
    }
}

fn parse_cell<T: std::str::FromStr>(
    record: &csv::StringRecord,
    column: usize,
    line: u64,
) -> Result<T, PairedCsvError> {
    let raw = &record[column];
    if raw.is_empty() || !raw.bytes().all(|b| b.is_ascii_digit()) {
        return Err(PairedCsvError::Row {
            line,
            message: format!(
                "column {} is not a non-negative integer: {raw:?}",
                PAIRED_HEADER[column]
            ),
        });
    }
    raw.parse().map_err(|_| PairedCsvError::Row {
        line,
        message: format!("column {} is out of range: {raw:?}", PAIRED_HEADER[column]),
    })
}

pub fn import_paired(reader: impl Read) -> Result<Vec<PairedRecord>, PairedCsvError> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut rows = csv.records();
    let expected = PAIRED_HEADER.join(",");
    let header = match rows.next() {
        Some(h) => h?,
        None => {
            return Err(PairedCsvError::Header {
                expected,
                found: String::new(),
            })
        }
    };
    let found: Vec<&str> = header.iter().collect();
    if found != PAIRED_HEADER {
        return Err(PairedCsvError::Header {
            expected,
            found: found.join(","),
        });
    }

    let mut records = Vec::new();
    for row in rows {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row.len() != PAIRED_HEADER.len() {
            return Err(PairedCsvError::Row {
                line,
                message: format!(
                    "expected {} fields, found {}",
                    PAIRED_HEADER.len(),
                    row.len()
                ),
            });
        }
        let mut form_items = [0u8; ITEM_COUNT];
        let mut agent_items = [0u8; ITEM_COUNT];
        for i in 0..ITEM_COUNT {
            form_items[i] = parse_cell(&row, 1 + i, line)?;
            agent_items[i] = parse_cell(&row, 11 + i, line)?;
        }
        let record = PairedRecord {
            subject_id: row[0].to_owned(),
            form_items,
            form_total: parse_cell(&row, 10, line)?,
            agent_items,
            agent_total: parse_cell(&row, 20, line)?,
            days_between: parse_cell(&row, 21, line)?,
        };
        record
            .validate()
            .map_err(|message| PairedCsvError::Row { line, message })?;
        records.push(record);
    }
    Ok(records)
}

pub fn import_paired_path(path: impl AsRef<Path>) -> Result<Vec<PairedRecord>, PairedCsvError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| PairedCsvError::Io {
        path: path.display().to_string(),
        source,
    })?;
    import_paired(file)
}

/// Writes records in the canonical layout: fixed header, LF line endings,
/// plain integers. Importing a canonical file and exporting it again
/// reproduces it byte for byte.
pub fn export_paired(records: &[PairedRecord]) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(PAIRED_HEADER).expect("in-memory write");
    for r in records {
        let mut fields = Vec::with_capacity(PAIRED_HEADER.len());
        fields.push(r.subject_id.clone());
        fields.extend(r.form_items.iter().map(u8::to_string));
        fields.push(r.form_total.to_string());
        fields.extend(r.agent_items.iter().map(u8::to_string));
        fields.push(r.agent_total.to_string());
        fields.push(r.days_between.to_string());
        writer.write_record(&fields).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}
