use std::collections::BTreeMap;

use serde::Serialize;

use super::StatError;

/// Unweighted Cohen's kappa over the union of observed categories.
///
/// When both raters use a single, identical category (`p_e = p_o = 1`) the
/// result is 1.
pub fn cohen_kappa<T: Ord>(a: &[T], b: &[T]) -> Result<f64, StatError> {
    if a.len() != b.len() {
        return Err(StatError::LengthMismatch);
    }
    if a.is_empty() {
        return Err(StatError::TooFewObservations);
    }
    let n = a.len() as f64;
    let mut marginals: BTreeMap<&T, (usize, usize)> = BTreeMap::new();
    let mut agree = 0usize;
    for (x, y) in a.iter().zip(b) {
        marginals.entry(x).or_default().0 += 1;
        marginals.entry(y).or_default().1 += 1;
        if x == y {
            agree += 1;
        }
    }
    let p_o = agree as f64 / n;
    let p_e: f64 = marginals
        .values()
        .map(|&(ca, cb)| (ca as f64 / n) * (cb as f64 / n))
        .sum();
    if (1.0 - p_e).abs() < f64::EPSILON {
        // A single shared category means perfect agreement.
        return Ok(1.0);
    }
    Ok(((p_o - p_e) / (1.0 - p_e)).clamp(-1.0, 1.0))
}

/// Landis-Koch reading of a kappa value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaBand {
    Poor,
    Slight,
    Fair,
    Moderate,
    Substantial,
    AlmostPerfect,
}

impl KappaBand {
    pub fn label(self) -> &'static str {
        match self {
            KappaBand::Poor => "poor",
            KappaBand::Slight => "slight",
            KappaBand::Fair => "fair",
            KappaBand::Moderate => "moderate",
            KappaBand::Substantial => "substantial",
            KappaBand::AlmostPerfect => "almost perfect",
        }
    }
}

/// Band edges are inclusive at the top: 0.20 is slight, 0.80 substantial.
pub fn kappa_band(kappa: f64) -> Result<KappaBand, StatError> {
    if !(-1.0..=1.0).contains(&kappa) {
        return Err(StatError::OutOfRange);
    }
    Ok(match kappa {
        k if k < 0.0 => KappaBand::Poor,
        k if k <= 0.20 => KappaBand::Slight,
        k if k <= 0.40 => KappaBand::Fair,
        k if k <= 0.60 => KappaBand::Moderate,
        k if k <= 0.80 => KappaBand::Substantial,
        _ => KappaBand::AlmostPerfect,
    })
}
