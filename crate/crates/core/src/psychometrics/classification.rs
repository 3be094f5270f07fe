use serde::Serialize;

use super::StatError;
use crate::scoring::MAX_TOTAL;

/// Exact non-negative ratio of two counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fraction {
    pub numerator: u64,
    pub denominator: u64,
}

impl Fraction {
    fn new(numerator: u64, denominator: u64) -> Option<Fraction> {
        (denominator > 0).then_some(Fraction {
            numerator,
            denominator,
        })
    }

    pub fn value(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// Rounds half away from zero to `places` decimals using integer
    /// arithmetic on the exact ratio.
    pub fn round_to(self, places: u32) -> f64 {
        let scale = 10u128.pow(places);
        let num = u128::from(self.numerator) * scale;
        let den = u128::from(self.denominator);
        let rounded = (2 * num + den) / (2 * den);
        rounded as f64 / scale as f64
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionMatrix {
    pub fn new(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        ConfusionMatrix { tp, fp, fn_, tn }
    }

    pub fn from_predictions(truth: &[bool], predicted: &[bool]) -> Result<Self, StatError> {
        if truth.len() != predicted.len() {
            return Err(StatError::LengthMismatch);
        }
        let mut cm = ConfusionMatrix::default();
        for (&t, &p) in truth.iter().zip(predicted) {
            match (t, p) {
                (true, true) => cm.tp += 1,
                (false, true) => cm.fp += 1,
                (true, false) => cm.fn_ += 1,
                (false, false) => cm.tn += 1,
            }
        }
        Ok(cm)
    }

    pub fn n(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

/// Screening metrics as exact ratios; a metric whose denominator is zero is
/// `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BinaryMetrics {
    pub sensitivity: Option<Fraction>,
    pub specificity: Option<Fraction>,
    pub precision: Option<Fraction>,
    pub accuracy: Option<Fraction>,
    pub f1: Option<Fraction>,
    pub prevalence_predicted: Option<Fraction>,
    pub prevalence_truth: Option<Fraction>,
}

pub fn binary_metrics(cm: &ConfusionMatrix) -> BinaryMetrics {
    let ConfusionMatrix { tp, fp, fn_, tn } = *cm;
    let n = cm.n();
    BinaryMetrics {
        sensitivity: Fraction::new(tp, tp + fn_),
        specificity: Fraction::new(tn, tn + fp),
        precision: Fraction::new(tp, tp + fp),
        accuracy: Fraction::new(tp + tn, n),
        f1: Fraction::new(2 * tp, 2 * tp + fp + fn_),
        prevalence_predicted: Fraction::new(tp + fp, n),
        prevalence_truth: Fraction::new(tp + fn_, n),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RocPoint {
    /// Scores strictly above this value are called positive.
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
    pub auc: f64,
}

/// ROC curve over integer PHQ-9 totals with thresholds placed between
/// integers (27.5, 26.5, ..., -0.5), so points run from (0, 0) to (1, 1).
/// The trapezoidal area equals the Mann-Whitney probability with ties
/// counted as one half.
pub fn roc_auc(scores: &[u8], truth: &[bool]) -> Result<RocCurve, StatError> {
    if scores.len() != truth.len() {
        return Err(StatError::LengthMismatch);
    }
    if scores.iter().any(|&s| s > MAX_TOTAL) {
        return Err(StatError::OutOfRange);
    }
    let positives = truth.iter().filter(|&&t| t).count() as u64;
    let negatives = truth.len() as u64 - positives;
    if positives == 0 || negatives == 0 {
        return Err(StatError::SingleClass);
    }

    let bins = usize::from(MAX_TOTAL) + 1;
    let mut pos_at = vec![0u64; bins];
    let mut neg_at = vec![0u64; bins];
    for (&s, &t) in scores.iter().zip(truth) {
        if t {
            pos_at[usize::from(s)] += 1;
        } else {
            neg_at[usize::from(s)] += 1;
        }
    }

    let mut points = Vec::with_capacity(bins + 1);
    points.push(RocPoint {
        threshold: f64::from(MAX_TOTAL) + 0.5,
        fpr: 0.0,
        tpr: 0.0,
    });
    let (mut tp, mut fp) = (0u64, 0u64);
    // Twice the area, in units of 1 / (P * N).
    let mut doubled_area: u128 = 0;
    for score in (0..bins).rev() {
        let (prev_tp, prev_fp) = (tp, fp);
        tp += pos_at[score];
        fp += neg_at[score];
        doubled_area += u128::from(fp - prev_fp) * u128::from(tp + prev_tp);
        points.push(RocPoint {
            threshold: score as f64 - 0.5,
            fpr: fp as f64 / negatives as f64,
            tpr: tp as f64 / positives as f64,
        });
    }
    let auc = doubled_area as f64 / (2.0 * positives as f64 * negatives as f64);
    Ok(RocCurve { points, auc })
}
