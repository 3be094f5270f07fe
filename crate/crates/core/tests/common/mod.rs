//! Brute-force reference implementations shared by the integration tests
//! and the acceptance harness. They use textbook raw-sum formulas and
//! pairwise counting, independent of the library code.
#![allow(dead_code)]

use std::collections::BTreeMap;

pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let (sx, sy) = (x.iter().sum::<f64>(), y.iter().sum::<f64>());
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let syy: f64 = y.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let num = n * sxy - sx * sy;
    let den = ((n * sxx - sx * sx) * (n * syy - sy * sy)).sqrt();
    (den > 0.0).then(|| num / den)
}

pub fn point_biserial(b: &[bool], y: &[f64]) -> Option<f64> {
    let ones: Vec<f64> = b
        .iter()
        .zip(y)
        .filter(|(f, _)| **f)
        .map(|(_, v)| *v)
        .collect();
    let zeros: Vec<f64> = b
        .iter()
        .zip(y)
        .filter(|(f, _)| !**f)
        .map(|(_, v)| *v)
        .collect();
    if ones.is_empty() || zeros.is_empty() {
        return None;
    }
    let n = y.len() as f64;
    let m1 = ones.iter().sum::<f64>() / ones.len() as f64;
    let m0 = zeros.iter().sum::<f64>() / zeros.len() as f64;
    let sd =
        (y.iter().map(|v| v * v).sum::<f64>() / n - (y.iter().sum::<f64>() / n).powi(2)).sqrt();
    (sd > 1e-12).then(|| (m1 - m0) / sd * (ones.len() as f64 * zeros.len() as f64 / (n * n)).sqrt())
}

pub fn cohen_kappa<T: Ord + Clone>(a: &[T], b: &[T]) -> Option<f64> {
    let n = a.len() as f64;
    let mut table: BTreeMap<(T, T), f64> = BTreeMap::new();
    let mut row: BTreeMap<T, f64> = BTreeMap::new();
    let mut col: BTreeMap<T, f64> = BTreeMap::new();
    for (x, y) in a.iter().zip(b) {
        *table.entry((x.clone(), y.clone())).or_default() += 1.0;
        *row.entry(x.clone()).or_default() += 1.0;
        *col.entry(y.clone()).or_default() += 1.0;
    }
    let po: f64 = table
        .iter()
        .filter(|((x, y), _)| x == y)
        .map(|(_, c)| c)
        .sum::<f64>()
        / n;
    let pe: f64 = row
        .iter()
        .map(|(k, r)| r * col.get(k).copied().unwrap_or(0.0))
        .sum::<f64>()
        / (n * n);
    if (1.0 - pe).abs() < 1e-15 {
        return (po == 1.0).then_some(1.0);
    }
    Some((po - pe) / (1.0 - pe))
}

fn raw_variance(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    (x.iter().map(|v| v * v).sum::<f64>() - x.iter().sum::<f64>().powi(2) / n) / (n - 1.0)
}

pub fn cronbach_alpha(rows: &[Vec<f64>]) -> Option<f64> {
    let k = rows[0].len() as f64;
    let items: f64 = (0..rows[0].len())
        .map(|j| raw_variance(&rows.iter().map(|r| r[j]).collect::<Vec<_>>()))
        .sum();
    let total = raw_variance(&rows.iter().map(|r| r.iter().sum()).collect::<Vec<_>>());
    (total > 1e-12).then(|| k / (k - 1.0) * (1.0 - items / total))
}

pub fn mae_sd(x: &[f64], y: &[f64]) -> (f64, f64) {
    let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| (a - b).abs()).collect();
    let mae = d.iter().sum::<f64>() / d.len() as f64;
    let sd = if d.len() < 2 {
        0.0
    } else {
        raw_variance(&d).max(0.0).sqrt()
    };
    (mae, sd)
}

/// P(score of a random positive > score of a random negative), ties halved.
pub fn mann_whitney(scores: &[u8], truth: &[bool]) -> Option<f64> {
    let (mut wins, mut pairs) = (0.0, 0.0);
    for (i, &ti) in truth.iter().enumerate() {
        for (j, &tj) in truth.iter().enumerate() {
            if ti && !tj {
                pairs += 1.0;
                if scores[i] > scores[j] {
                    wins += 1.0;
                } else if scores[i] == scores[j] {
                    wins += 0.5;
                }
            }
        }
    }
    (pairs > 0.0).then(|| wins / pairs)
}

/// F statistic from total and within sums of squares.
pub fn anova_f(groups: &[Vec<f64>]) -> Option<(f64, f64, f64)> {
    let all: Vec<f64> = groups.iter().flatten().copied().collect();
    let n = all.len() as f64;
    let k = groups.len() as f64;
    let ss_total = all.iter().map(|v| v * v).sum::<f64>() - all.iter().sum::<f64>().powi(2) / n;
    let ss_within: f64 = groups
        .iter()
        .map(|g| {
            g.iter().map(|v| v * v).sum::<f64>() - g.iter().sum::<f64>().powi(2) / g.len() as f64
        })
        .sum();
    if ss_within <= 1e-12 {
        return None;
    }
    let ss_between = ss_total - ss_within;
    Some((
        (ss_between / (k - 1.0)) / (ss_within / (n - k)),
        k - 1.0,
        n - k,
    ))
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        // The first levels are always split: a coarse estimate can agree with
        // its refinement by accident on symmetric integrands.
        if depth == 0 || (depth < 52 && delta.abs() <= 15.0 * tol) {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 60)
}

/// Upper F tail by numerical integration of the beta kernel. With
/// `t = sin^2(u)` the kernel `t^(a-1) (1-t)^(b-1) dt` becomes
/// `2 sin^(2a-1)(u) cos^(2b-1)(u) du`, bounded for half-integer `a, b >= 1/2`.
pub fn f_upper_tail_quadrature(f: f64, d1: f64, d2: f64) -> f64 {
    let (a, b) = (d2 / 2.0, d1 / 2.0);
    let x = d2 / (d2 + d1 * f);
    let kernel = move |u: f64| 2.0 * u.sin().powf(2.0 * a - 1.0) * u.cos().powf(2.0 * b - 1.0);
    let upper = x.sqrt().asin();
    let part = adaptive_simpson(&kernel, 0.0, upper, 1e-14);
    let whole = adaptive_simpson(&kernel, 0.0, std::f64::consts::FRAC_PI_2, 1e-14);
    part / whole
}
