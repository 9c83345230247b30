use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ranks starting at 1, with tied values sharing the mean of their ranks.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman rank correlation with average ranks for ties.
///
/// `Ok(None)` when either input is constant.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<Option<f64>> {
    if xs.len() != ys.len() {
        return Err(Error::validation(format!(
            "spearman needs equal lengths, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::validation("spearman needs at least two observations"));
    }
    Ok(pearson(&average_ranks(xs), &average_ranks(ys)))
}

/// Mean of `(1 + gs) / (1 + other)` over all pairs.
pub fn mean_ratio(pairs: &[(u64, u64)]) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::validation("mean ratio of an empty list"));
    }
    let sum: f64 = pairs.iter().map(|&(g, o)| (1.0 + g as f64) / (1.0 + o as f64)).sum();
    Ok(sum / pairs.len() as f64)
}

/// Summary of `ln(1 + x)` citation counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountSummary {
    pub n: usize,
    pub median: f64,
    pub mean: f64,
    /// Half-width of the normal-approximation 95% CI for the mean.
    pub ci_half_width: f64,
}

/// Counts are taken as reals so fractional inputs (e.g. averaged counts) work
/// too; they must be non-negative.
pub fn log_summary(counts: &[f64]) -> Result<CountSummary> {
    if counts.is_empty() {
        return Err(Error::validation("log summary needs at least one count"));
    }
    if let Some(bad) = counts.iter().find(|c| !(**c >= 0.0)) {
        return Err(Error::validation(format!("log summary needs non-negative counts, got {bad}")));
    }
    let mut logs: Vec<f64> = counts.iter().map(|&c| c.ln_1p()).collect();
    logs.sort_by(f64::total_cmp);
    let n = logs.len();
    let median = if n % 2 == 1 {
        logs[n / 2]
    } else {
        (logs[n / 2 - 1] + logs[n / 2]) / 2.0
    };
    let mean = logs.iter().sum::<f64>() / n as f64;
    let ci_half_width = if n > 1 {
        let var = logs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        1.96 * var.sqrt() / (n as f64).sqrt()
    } else {
        0.0
    };
    Ok(CountSummary {
        n,
        median,
        mean,
        ci_half_width,
    })
}
