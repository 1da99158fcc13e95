use greedymod::{Heuristic, RunResult, ScaledQ, StopPolicy};
use serde::{Deserialize, Serialize};

use crate::source::Provenance;

/// Contents of `summary.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub heuristic: Heuristic,
    pub stop: StopPolicy,
    pub n: usize,
    pub m: usize,
    pub merges: usize,
    /// Communities in the best-Q partition.
    pub communities: usize,
    /// `4m²`, the denominator of every scaled value below.
    pub q_denominator: i64,
    pub q_initial: f64,
    pub q_initial_scaled: i64,
    pub peak_q: f64,
    pub peak_q_scaled: i64,
    pub peak_step: usize,
    pub final_q: f64,
    pub final_q_scaled: i64,
    pub dendrogram_height: u32,
    pub elapsed_seconds: f64,
    #[serde(flatten)]
    pub provenance: Provenance,
}

impl Summary {
    pub fn new(res: &RunResult, provenance: Provenance) -> Self {
        Summary {
            heuristic: res.heuristic,
            stop: res.stop,
            n: res.n,
            m: res.m,
            merges: res.merges(),
            communities: res.best_partition.community_count(),
            q_denominator: ScaledQ::denominator(res.m),
            q_initial: res.q_initial.to_f64(res.m),
            q_initial_scaled: res.q_initial.0,
            peak_q: res.peak_q.to_f64(res.m),
            peak_q_scaled: res.peak_q.0,
            peak_step: res.peak_step,
            final_q: res.final_q.to_f64(res.m),
            final_q_scaled: res.final_q.0,
            dendrogram_height: res.dendrogram.height(),
            elapsed_seconds: res.elapsed.as_secs_f64(),
            provenance,
        }
    }
}

/// One line of `compare` output.
#[derive(Clone, Debug, Serialize)]
pub struct CompareRow {
    pub heuristic: Heuristic,
    pub n: usize,
    pub m: usize,
    pub merges: usize,
    pub communities: usize,
    pub peak_q: f64,
    pub peak_q_scaled: i64,
    pub peak_step: usize,
    pub final_q: f64,
    pub dendrogram_height: u32,
    pub elapsed_seconds: f64,
}

impl From<&Summary> for CompareRow {
    fn from(s: &Summary) -> Self {
        CompareRow {
            heuristic: s.heuristic,
            n: s.n,
            m: s.m,
            merges: s.merges,
            communities: s.communities,
            peak_q: s.peak_q,
            peak_q_scaled: s.peak_q_scaled,
            peak_step: s.peak_step,
            final_q: s.final_q,
            dendrogram_height: s.dendrogram_height,
            elapsed_seconds: s.elapsed_seconds,
        }
    }
}
