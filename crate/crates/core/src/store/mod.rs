//! Persistence: the anonymized results journal and paired-dataset CSV files.

mod journal;
mod paired;

pub use journal::{
    read_journal, ClosedOutcome, Journal, JournalContents, JournalEntry, SessionClosed, StoreError,
    StoredRecord, SCHEMA_VERSION,
};
pub use paired::{export_paired, import_paired, import_paired_path, PairedCsvError, PAIRED_HEADER};
