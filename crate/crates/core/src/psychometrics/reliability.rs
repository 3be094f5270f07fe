use super::correlation::mean;
use super::StatError;

fn sample_variance(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() as f64 - 1.0)
}

/// Cronbach's alpha for a subjects-by-items matrix (one row per subject).
pub fn cronbach_alpha<R: AsRef<[f64]>>(rows: &[R]) -> Result<f64, StatError> {
    let n = rows.len();
    if n < 2 {
        return Err(StatError::TooFewObservations);
    }
    let k = rows[0].as_ref().len();
    if k < 2 {
        return Err(StatError::TooFewObservations);
    }
    if rows.iter().any(|r| r.as_ref().len() != k) {
        return Err(StatError::LengthMismatch);
    }
    let item_variance_sum: f64 = (0..k)
        .map(|j| {
            let column: Vec<f64> = rows.iter().map(|r| r.as_ref()[j]).collect();
            sample_variance(&column)
        })
        .sum();
    let totals: Vec<f64> = rows.iter().map(|r| r.as_ref().iter().sum()).collect();
    let total_variance = sample_variance(&totals);
    if total_variance == 0.0 {
        return Err(StatError::ZeroVariance);
    }
    let k = k as f64;
    Ok(k / (k - 1.0) * (1.0 - item_variance_sum / total_variance))
}
