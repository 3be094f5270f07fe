use serde::Serialize;

use super::correlation::mean;
use super::special::f_upper_tail;
use super::StatError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Anova {
    pub f: f64,
    pub p: f64,
    pub df_between: u64,
    pub df_within: u64,
}

/// One-way analysis of variance across independent groups.
pub fn oneway_anova<G: AsRef<[f64]>>(groups: &[G]) -> Result<Anova, StatError> {
    let k = groups.len();
    if k < 2 || groups.iter().any(|g| g.as_ref().len() < 2) {
        return Err(StatError::DegenerateGroups);
    }
    let total_n: usize = groups.iter().map(|g| g.as_ref().len()).sum();
    let grand = groups.iter().flat_map(|g| g.as_ref().iter()).sum::<f64>() / total_n as f64;

    let (mut ss_between, mut ss_within) = (0.0, 0.0);
    for group in groups {
        let g = group.as_ref();
        let m = mean(g);
        ss_between += g.len() as f64 * (m - grand) * (m - grand);
        ss_within += g.iter().map(|v| (v - m) * (v - m)).sum::<f64>();
    }
    if ss_within == 0.0 {
        return Err(StatError::ZeroVariance);
    }
    let df_between = (k - 1) as u64;
    let df_within = (total_n - k) as u64;
    let f = (ss_between / df_between as f64) / (ss_within / df_within as f64);
    let p = f_upper_tail(f, df_between as f64, df_within as f64);
    Ok(Anova {
        f,
        p,
        df_between,
        df_within,
    })
}
