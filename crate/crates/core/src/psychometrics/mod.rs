//! Validation statistics comparing the conversational interview against the
//! self-report questionnaire.

mod agreement;
mod anova;
mod classification;
mod correlation;
mod error;
mod error_stats;
mod histogram;
mod reliability;
mod report;
pub mod special;

pub use agreement::{cohen_kappa, kappa_band, KappaBand};
pub use anova::{oneway_anova, Anova};
pub use classification::{
    binary_metrics, roc_auc, BinaryMetrics, ConfusionMatrix, Fraction, RocCurve, RocPoint,
};
pub use correlation::{pearson, point_biserial};
pub use error::StatError;
pub use error_stats::{mae_stats, MaeStats};
pub use histogram::{score_histogram, SCORE_BINS};
pub use reliability::cronbach_alpha;
pub use report::{
    build_report, AgreementRow, BandLabel, ItemRow, Metric, PairedRecord, ReportError, RocPointOut,
    ValidationReport,
};
