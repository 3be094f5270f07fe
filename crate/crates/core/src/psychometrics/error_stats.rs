use serde::Serialize;

use super::StatError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaeStats {
    pub mae: f64,
    /// Sample standard deviation of the absolute differences; 0 for a single
    /// pair.
    pub sd: f64,
}

pub fn mae_stats(x: &[f64], y: &[f64]) -> Result<MaeStats, StatError> {
    if x.len() != y.len() {
        return Err(StatError::LengthMismatch);
    }
    if x.is_empty() {
        return Err(StatError::TooFewObservations);
    }
    let diffs: Vec<f64> = x.iter().zip(y).map(|(a, b)| (a - b).abs()).collect();
    let n = diffs.len() as f64;
    let mae = diffs.iter().sum::<f64>() / n;
    let sd = if diffs.len() < 2 {
        0.0
    } else {
        (diffs.iter().map(|d| (d - mae) * (d - mae)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    Ok(MaeStats { mae, sd })
}
