use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use thiserror::Error;

use super::{
    binary_metrics, cohen_kappa, cronbach_alpha, kappa_band, mae_stats, oneway_anova, pearson,
    point_biserial, roc_auc, score_histogram, ConfusionMatrix, Fraction, KappaBand, StatError,
};
use crate::scoring::{CUTOFF, ITEM_COUNT};

/// One subject measured by both instruments: the self-report form and the
/// conversational agent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairedRecord {
    pub subject_id: String,
    pub form_items: [u8; ITEM_COUNT],
    pub form_total: u8,
    pub agent_items: [u8; ITEM_COUNT],
    pub agent_total: u8,
    pub days_between: u32,
}

impl PairedRecord {
    /// Builds a record with totals derived from the items.
    pub fn new(
        subject_id: impl Into<String>,
        form_items: [u8; ITEM_COUNT],
        agent_items: [u8; ITEM_COUNT],
        days_between: u32,
    ) -> PairedRecord {
        PairedRecord {
            subject_id: subject_id.into(),
            form_total: form_items.iter().sum(),
            form_items,
            agent_total: agent_items.iter().sum(),
            agent_items,
            days_between,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.subject_id.is_empty() {
            return Err("subject_id is empty".into());
        }
        for (name, items, total) in [
            ("form", &self.form_items, self.form_total),
            ("agent", &self.agent_items, self.agent_total),
        ] {
            if let Some((i, v)) = items.iter().enumerate().find(|(_, &v)| v > 3) {
                return Err(format!("{name} item {} is {v}, expected 0..=3", i + 1));
            }
            let sum: u8 = items.iter().sum();
            if sum != total {
                return Err(format!(
                    "{name} total {total} does not equal item sum {sum}"
                ));
            }
        }
        Ok(())
    }

    pub fn form_positive(&self) -> bool {
        self.form_total >= CUTOFF
    }

    pub fn agent_positive(&self) -> bool {
        self.agent_total >= CUTOFF
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReportError {
    #[error("a report needs at least 2 records, got {0}")]
    TooFewRecords(usize),
    #[error("record {index} ({subject_id}): {reason}")]
    InvalidRecord {
        index: usize,
        subject_id: String,
        reason: String,
    },
}

/// A statistic that is either a finite value or absent with a reason.
/// Serializes as a number with six decimals, or `{"absent": "<reason>"}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric(pub Result<f64, StatError>);

impl Metric {
    pub fn value(&self) -> Option<f64> {
        self.0.ok()
    }
}

impl From<Result<f64, StatError>> for Metric {
    fn from(r: Result<f64, StatError>) -> Metric {
        Metric(r.and_then(|v| {
            if v.is_finite() {
                Ok(v)
            } else {
                Err(StatError::OutOfRange)
            }
        }))
    }
}

impl From<Option<Fraction>> for Metric {
    fn from(f: Option<Fraction>) -> Metric {
        Metric(f.map(Fraction::value).ok_or(StatError::ZeroDenominator))
    }
}

pub(crate) fn fixed6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_owned()
    } else {
        s
    }
}

fn serialize_absent<S: Serializer>(err: StatError, serializer: S) -> Result<S::Ok, S::Error> {
    let mut map = serializer.serialize_map(Some(1))?;
    map.serialize_entry("absent", err.code())?;
    map.end()
}

fn serialize_fixed6<S: Serializer>(v: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    RawValue::from_string(fixed6(*v))
        .map_err(serde::ser::Error::custom)?
        .serialize(serializer)
}

impl Serialize for Metric {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Ok(v) => serialize_fixed6(&v, serializer),
            Err(e) => serialize_absent(e, serializer),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandLabel(pub Result<KappaBand, StatError>);

impl Serialize for BandLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Ok(band) => serializer.serialize_str(band.label()),
            Err(e) => serialize_absent(e, serializer),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementRow {
    pub pcc: Metric,
    pub kappa: Metric,
    pub acc: Metric,
    pub mae: Metric,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ItemRow {
    pub item: u8,
    pub pcc: Metric,
    pub kappa: Metric,
    pub acc: Metric,
    pub mae: Metric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RocPointOut {
    #[serde(serialize_with = "serialize_fixed6")]
    pub threshold: f64,
    #[serde(serialize_with = "serialize_fixed6")]
    pub fpr: f64,
    #[serde(serialize_with = "serialize_fixed6")]
    pub tpr: f64,
}

/// Agreement, reliability and screening accuracy of the agent against the
/// self-report form. Field order is the serialized order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub n: usize,
    pub per_item: Vec<ItemRow>,
    pub total_row: AgreementRow,
    pub point_biserial_class: Metric,
    pub kappa_class: Metric,
    pub kappa_band: BandLabel,
    pub cronbach_alpha_agent: Metric,
    pub cronbach_alpha_form: Metric,
    pub confusion: ConfusionMatrix,
    pub sensitivity: Metric,
    pub specificity: Metric,
    pub accuracy: Metric,
    pub f1: Metric,
    pub roc_points: Vec<RocPointOut>,
    pub auc: Metric,
    pub anova_f: Metric,
    pub anova_p: Metric,
    pub mae_total: Metric,
    pub mae_sd: Metric,
    pub mae_days_pearson: Metric,
    pub histogram_agent: Vec<u32>,
    pub histogram_form: Vec<u32>,
    pub prevalence_agent: Metric,
    pub prevalence_form: Metric,
}

fn exact_agreement(a: &[u8], b: &[u8]) -> Result<f64, StatError> {
    if a.is_empty() {
        return Err(StatError::TooFewObservations);
    }
    let same = a.iter().zip(b).filter(|(x, y)| x == y).count();
    Ok(same as f64 / a.len() as f64)
}

fn agreement(form: &[u8], agent: &[u8]) -> (Metric, Metric, Metric, Metric) {
    let f: Vec<f64> = form.iter().map(|&v| f64::from(v)).collect();
    let a: Vec<f64> = agent.iter().map(|&v| f64::from(v)).collect();
    (
        pearson(&f, &a).into(),
        cohen_kappa(form, agent).into(),
        exact_agreement(form, agent).into(),
        mae_stats(&f, &a).map(|s| s.mae).into(),
    )
}

fn proportion(flags: &[bool]) -> Metric {
    Metric(Ok(
        flags.iter().filter(|&&b| b).count() as f64 / flags.len() as f64
    ))
}

/// Assembles the full validation report. The form is the reference
/// standard: its cutoff class is the ground truth for confusion and ROC.
pub fn build_report(records: &[PairedRecord]) -> Result<ValidationReport, ReportError> {
    if records.len() < 2 {
        return Err(ReportError::TooFewRecords(records.len()));
    }
    for (index, r) in records.iter().enumerate() {
        r.validate().map_err(|reason| ReportError::InvalidRecord {
            index,
            subject_id: r.subject_id.clone(),
            reason,
        })?;
    }
    let n = records.len();

    let per_item = (0..ITEM_COUNT)
        .map(|i| {
            let form: Vec<u8> = records.iter().map(|r| r.form_items[i]).collect();
            let agent: Vec<u8> = records.iter().map(|r| r.agent_items[i]).collect();
            let (pcc, kappa, acc, mae) = agreement(&form, &agent);
            ItemRow {
                item: (i + 1) as u8,
                pcc,
                kappa,
                acc,
                mae,
            }
        })
        .collect();

    let form_totals: Vec<u8> = records.iter().map(|r| r.form_total).collect();
    let agent_totals: Vec<u8> = records.iter().map(|r| r.agent_total).collect();
    let form_f: Vec<f64> = form_totals.iter().map(|&v| f64::from(v)).collect();
    let agent_f: Vec<f64> = agent_totals.iter().map(|&v| f64::from(v)).collect();
    let (pcc, kappa, acc, mae) = agreement(&form_totals, &agent_totals);
    let total_row = AgreementRow {
        pcc,
        kappa,
        acc,
        mae,
    };

    let truth: Vec<bool> = records.iter().map(PairedRecord::form_positive).collect();
    let predicted: Vec<bool> = records.iter().map(PairedRecord::agent_positive).collect();
    let predicted_coded: Vec<f64> = predicted
        .iter()
        .map(|&p| if p { 1.0 } else { 0.0 })
        .collect();
    let kappa_class = cohen_kappa(&truth, &predicted);

    let form_matrix: Vec<Vec<f64>> = records
        .iter()
        .map(|r| r.form_items.iter().map(|&v| f64::from(v)).collect())
        .collect();
    let agent_matrix: Vec<Vec<f64>> = records
        .iter()
        .map(|r| r.agent_items.iter().map(|&v| f64::from(v)).collect())
        .collect();

    let confusion =
        ConfusionMatrix::from_predictions(&truth, &predicted).expect("equal-length series");
    let metrics = binary_metrics(&confusion);
    let roc = roc_auc(&agent_totals, &truth);
    let anova = oneway_anova(&[agent_f.as_slice(), form_f.as_slice()]);
    let mae = mae_stats(&agent_f, &form_f);
    let abs_diff: Vec<f64> = agent_f
        .iter()
        .zip(&form_f)
        .map(|(a, f)| (a - f).abs())
        .collect();
    let days: Vec<f64> = records.iter().map(|r| f64::from(r.days_between)).collect();

    Ok(ValidationReport {
        n,
        per_item,
        total_row,
        point_biserial_class: point_biserial(&truth, &predicted_coded).into(),
        kappa_class: kappa_class.into(),
        kappa_band: BandLabel(kappa_class.and_then(kappa_band)),
        cronbach_alpha_agent: cronbach_alpha(&agent_matrix).into(),
        cronbach_alpha_form: cronbach_alpha(&form_matrix).into(),
        confusion,
        sensitivity: metrics.sensitivity.into(),
        specificity: metrics.specificity.into(),
        accuracy: metrics.accuracy.into(),
        f1: metrics.f1.into(),
        roc_points: roc
            .as_ref()
            .map(|c| {
                c.points
                    .iter()
                    .map(|p| RocPointOut {
                        threshold: p.threshold,
                        fpr: p.fpr,
                        tpr: p.tpr,
                    })
                    .collect()
            })
            .unwrap_or_default(),
        auc: roc.map(|c| c.auc).into(),
        anova_f: anova.map(|a| a.f).into(),
        anova_p: anova.map(|a| a.p).into(),
        mae_total: mae.map(|m| m.mae).into(),
        mae_sd: mae.map(|m| m.sd).into(),
        mae_days_pearson: pearson(&abs_diff, &days).into(),
        histogram_agent: score_histogram(&agent_totals)
            .expect("validated totals")
            .to_vec(),
        histogram_form: score_histogram(&form_totals)
            .expect("validated totals")
            .to_vec(),
        prevalence_agent: proportion(&predicted),
        prevalence_form: proportion(&truth),
    })
}

impl ValidationReport {
    /// Pretty JSON with a trailing newline; byte-stable for a given input.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// The per-item agreement grid, one row per statistic and one column
    /// per item plus the total.
    pub fn table2_csv(&self) -> String {
        let mut out = String::from("statistic");
        for i in 1..=ITEM_COUNT {
            out.push_str(&format!(",item{i}"));
        }
        out.push_str(",total\n");
        let cell = |m: &Metric| m.value().map(fixed6).unwrap_or_else(|| "NA".to_owned());
        type Pick = fn(&ItemRow) -> &Metric;
        let rows: [(&str, Pick, &Metric); 4] = [
            ("pcc", |r| &r.pcc, &self.total_row.pcc),
            ("kappa", |r| &r.kappa, &self.total_row.kappa),
            ("acc", |r| &r.acc, &self.total_row.acc),
            ("mae", |r| &r.mae, &self.total_row.mae),
        ];
        for (name, pick, total) in rows {
            out.push_str(name);
            for row in &self.per_item {
                out.push(',');
                out.push_str(&cell(pick(row)));
            }
            out.push(',');
            out.push_str(&cell(total));
            out.push('\n');
        }
        out
    }
}
