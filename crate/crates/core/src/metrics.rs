//! Merge-log analytics. Every function here is a pure function of its input
//! and returns plot-ready rows.

use serde::{Deserialize, Serialize};

use crate::dendrogram::Dendrogram;
use crate::error::MetricsError;
use crate::modularity::{Partition, ScaledQ};

/// One merge as recorded during a run. Sizes use the run's size measure;
/// member counts are always recorded as well.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MergeRecord {
    pub step: u32,
    pub lo: u32,
    pub hi: u32,
    pub size_lo: u64,
    pub size_hi: u64,
    pub members_lo: u64,
    pub members_hi: u64,
    pub ratio: f64,
    pub dq_scaled: i64,
    pub q_scaled_after: i64,
    pub elapsed_ns: u64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MergeLog {
    records: Vec<MergeRecord>,
}

impl MergeLog {
    pub fn new(records: Vec<MergeRecord>) -> Self {
        MergeLog { records }
    }

    pub fn records(&self) -> &[MergeRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn total_elapsed_ns(&self) -> u64 {
        self.records.iter().map(|r| r.elapsed_ns).sum()
    }

    fn nonempty(&self) -> Result<&[MergeRecord], MetricsError> {
        if self.records.is_empty() {
            Err(MetricsError::EmptyLog)
        } else {
            Ok(&self.records)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioRow {
    pub step: u32,
    pub ratio: f64,
}

pub fn ratio_series(log: &MergeLog) -> Result<Vec<RatioRow>, MetricsError> {
    Ok(log
        .nonempty()?
        .iter()
        .map(|r| RatioRow {
            step: r.step,
            ratio: r.ratio,
        })
        .collect())
}

/// Median consolidation ratio over the first `fraction` of the merges.
pub fn median_ratio(log: &MergeLog, fraction: f64) -> Result<f64, MetricsError> {
    let records = log.nonempty()?;
    let take = ((records.len() as f64 * fraction).ceil() as usize).clamp(1, records.len());
    let mut ratios: Vec<f64> = records[..take].iter().map(|r| r.ratio).collect();
    ratios.sort_by(f64::total_cmp);
    let mid = ratios.len() / 2;
    Ok(if ratios.len() % 2 == 1 {
        ratios[mid]
    } else {
        (ratios[mid - 1] + ratios[mid]) / 2.0
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BucketRow {
    pub bucket: usize,
    pub merges: usize,
    pub elapsed_ns: u64,
    pub seconds: f64,
}

/// Time spent on each run of `bucket` consecutive merges; the last bucket
/// may be partial.
pub fn time_buckets(log: &MergeLog, bucket: usize) -> Result<Vec<BucketRow>, MetricsError> {
    if bucket == 0 {
        return Err(MetricsError::Degenerate(
            "bucket size must be positive".into(),
        ));
    }
    Ok(log
        .nonempty()?
        .chunks(bucket)
        .enumerate()
        .map(|(idx, chunk)| {
            let ns: u64 = chunk.iter().map(|r| r.elapsed_ns).sum();
            BucketRow {
                bucket: idx,
                merges: chunk.len(),
                elapsed_ns: ns,
                seconds: ns as f64 * 1e-9,
            }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProgressRow {
    pub step: u32,
    /// Cumulative seconds, or the fraction of total time when normalised.
    pub elapsed: f64,
    pub q: f64,
    pub q_scaled: i64,
}

/// Modularity after each merge against cumulative time.
pub fn q_progress(
    log: &MergeLog,
    m: usize,
    normalize: bool,
) -> Result<Vec<ProgressRow>, MetricsError> {
    let records = log.nonempty()?;
    if m == 0 {
        return Err(MetricsError::Degenerate(
            "edge count must be positive".into(),
        ));
    }
    let total = log.total_elapsed_ns();
    let steps = records.len();
    let mut cumulative = 0u64;
    Ok(records
        .iter()
        .enumerate()
        .map(|(idx, r)| {
            cumulative += r.elapsed_ns;
            let elapsed = match (normalize, total) {
                // a clock too coarse to see the run: fall back to step fraction
                (true, 0) => (idx + 1) as f64 / steps as f64,
                (true, _) => cumulative as f64 / total as f64,
                (false, _) => cumulative as f64 * 1e-9,
            };
            ProgressRow {
                step: r.step,
                elapsed,
                q: ScaledQ(r.q_scaled_after).to_f64(m),
                q_scaled: r.q_scaled_after,
            }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HistogramRow {
    /// Inclusive lower bound of the bin.
    pub size_from: u64,
    /// Exclusive upper bound of the bin.
    pub size_to: u64,
    pub communities: usize,
}

/// Community counts per logarithmic size bin `[base^k, base^(k+1))`.
/// Empty bins are omitted.
pub fn size_histogram(p: &Partition, base: u64) -> Result<Vec<HistogramRow>, MetricsError> {
    if base < 2 {
        return Err(MetricsError::Degenerate(
            "histogram base must be at least 2".into(),
        ));
    }
    let mut bins: Vec<HistogramRow> = Vec::new();
    let mut sizes: Vec<u64> = p
        .community_sizes()
        .into_iter()
        .map(|(_, s)| s as u64)
        .collect();
    sizes.sort_unstable();
    for s in sizes {
        let mut lo = 1u64;
        while lo.saturating_mul(base) <= s {
            lo *= base;
        }
        match bins.last_mut() {
            Some(row) if row.size_from == lo => row.communities += 1,
            _ => bins.push(HistogramRow {
                size_from: lo,
                size_to: lo.saturating_mul(base),
                communities: 1,
            }),
        }
    }
    Ok(bins)
}

pub fn dendrogram_height(d: &Dendrogram) -> u32 {
    d.height()
}

/// Power law `T(n) = coefficient · n^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub coefficient: f64,
    pub points: usize,
}

/// Least-squares fit of `ln T = exponent · ln n + ln coefficient`.
pub fn scaling_fit(points: &[(f64, f64)]) -> Result<PowerLawFit, MetricsError> {
    if points.len() < 3 {
        return Err(MetricsError::Degenerate(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(bad) = points
        .iter()
        .find(|(n, t)| !(n.is_finite() && t.is_finite() && *n > 0.0 && *t > 0.0))
    {
        return Err(MetricsError::Degenerate(format!(
            "point {bad:?} is not positive and finite"
        )));
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|(n, _)| n.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, t)| t.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx <= f64::EPSILON * k {
        return Err(MetricsError::Degenerate("all points share one size".into()));
    }
    let exponent = sxy / sxx;
    Ok(PowerLawFit {
        exponent,
        coefficient: (my - exponent * mx).exp(),
        points: points.len(),
    })
}
