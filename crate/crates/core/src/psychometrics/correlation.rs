use super::StatError;

pub(crate) fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Pearson product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, StatError> {
    if x.len() != y.len() {
        return Err(StatError::LengthMismatch);
    }
    if x.len() < 2 {
        return Err(StatError::TooFewObservations);
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatError::ZeroVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Point-biserial correlation between a dichotomy and a continuous series:
/// `(M1 - M0) / s_n * sqrt(n1 n0 / n^2)` with `s_n` the population standard
/// deviation of `y`.
pub fn point_biserial(b: &[bool], y: &[f64]) -> Result<f64, StatError> {
    if b.len() != y.len() {
        return Err(StatError::LengthMismatch);
    }
    if y.len() < 2 {
        return Err(StatError::TooFewObservations);
    }
    let n = y.len() as f64;
    let (mut sum1, mut n1, mut sum0, mut n0) = (0.0, 0usize, 0.0, 0usize);
    for (&flag, &v) in b.iter().zip(y) {
        if flag {
            sum1 += v;
            n1 += 1;
        } else {
            sum0 += v;
            n0 += 1;
        }
    }
    if n1 == 0 || n0 == 0 {
        return Err(StatError::SingleClass);
    }
    let m = mean(y);
    let var_n = y.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n;
    if var_n == 0.0 {
        return Err(StatError::ZeroVariance);
    }
    let (m1, m0) = (sum1 / n1 as f64, sum0 / n0 as f64);
    let r = (m1 - m0) / var_n.sqrt() * ((n1 as f64 * n0 as f64) / (n * n)).sqrt();
    Ok(r.clamp(-1.0, 1.0))
}
