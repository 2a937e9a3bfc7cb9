//! Local mean-plus-k-sigma peak detection over a time series.

use chrono::NaiveDate;

use super::TimeSeries;

/// A detected peak with the local statistics that flagged it.
#[derive(Debug, Clone, PartialEq)]
pub struct Peak {
    pub date: NaiveDate,
    pub value: f64,
    pub local_mean: f64,
    pub local_std: f64,
}

/// Flags every point whose value exceeds its neighborhood mean by more
/// than `k` local standard deviations.
///
/// The neighborhood holds up to `window / 2` points on each side, excludes
/// the point itself, truncates at the series ends, and must contain at
/// least 3 points. Sigma is the sample (n-1) standard deviation. The rule
/// is invariant under positive affine maps of the values.
pub fn detect_peaks(series: &TimeSeries, window: usize, k: f64) -> Vec<Peak> {
    let points = series.points();
    let half = window / 2;
    let mut peaks = Vec::new();
    for (i, &(date, value)) in points.iter().enumerate() {
        let lo = i.saturating_sub(half);
        let hi = (i + half + 1).min(points.len());
        let neighborhood: Vec<f64> = points[lo..hi]
            .iter()
            .enumerate()
            .filter(|&(j, _)| lo + j != i)
            .map(|(_, &(_, v))| v)
            .collect();
        if neighborhood.len() < 3 {
            continue;
        }
        let n = neighborhood.len() as f64;
        let mean = neighborhood.iter().sum::<f64>() / n;
        let var = neighborhood.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let std = var.sqrt();
        if value > mean + k * std {
            peaks.push(Peak {
                date,
                value,
                local_mean: mean,
                local_std: std,
            });
        }
    }
    peaks
}
