//! Pair scoring: plain gain, or gain weighted by the consolidation ratio of
//! the two communities.
//!
//! Scores are exact rationals `dq · num / den` and are compared by sign and
//! cross-multiplication, never through floating point.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::modularity::ScaledQ;

/// How community size is measured for the consolidation ratio.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SizeMeasure {
    /// Number of neighbouring communities (length of the pair list).
    Links,
    /// Number of member nodes.
    Members,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Heuristic {
    /// Unweighted gain in both selection stages.
    Plain,
    /// Gain times link-count ratio in both stages.
    He,
    /// Unweighted gain when a community nominates its best pair, link-count
    /// ratio when choosing among nominees.
    HePrime,
    /// Gain times member-count ratio in both stages.
    Hn,
}

impl Heuristic {
    pub const ALL: [Heuristic; 4] = [
        Heuristic::Plain,
        Heuristic::He,
        Heuristic::HePrime,
        Heuristic::Hn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Heuristic::Plain => "plain",
            Heuristic::He => "he",
            Heuristic::HePrime => "he-prime",
            Heuristic::Hn => "hn",
        }
    }

    /// Size measure used for scoring, and for logging. Plain runs log link
    /// counts.
    pub fn size_measure(self) -> SizeMeasure {
        match self {
            Heuristic::Hn => SizeMeasure::Members,
            _ => SizeMeasure::Links,
        }
    }

    pub fn weights_stage1(self) -> bool {
        matches!(self, Heuristic::He | Heuristic::Hn)
    }

    pub fn weights_stage2(self) -> bool {
        !matches!(self, Heuristic::Plain)
    }

    /// Score a community uses to pick its own best pair.
    pub fn stage1_score(self, dq: ScaledQ, size_a: u64, size_b: u64) -> Score {
        if self.weights_stage1() {
            Score::weighted(dq, size_a, size_b)
        } else {
            Score::plain(dq)
        }
    }

    /// Score used to pick the global winner among nominated pairs.
    pub fn stage2_score(self, dq: ScaledQ, size_a: u64, size_b: u64) -> Score {
        if self.weights_stage2() {
            Score::weighted(dq, size_a, size_b)
        } else {
            Score::plain(dq)
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownHeuristic(pub String);

impl fmt::Display for UnknownHeuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown heuristic {:?} (expected plain, he, he-prime, hn or ne)",
            self.0
        )
    }
}

impl std::error::Error for UnknownHeuristic {}

impl FromStr for Heuristic {
    type Err = UnknownHeuristic;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "plain" | "cnm" => Ok(Heuristic::Plain),
            "he" => Ok(Heuristic::He),
            "he-prime" | "he_prime" | "he'" => Ok(Heuristic::HePrime),
            "hn" | "ne" => Ok(Heuristic::Hn),
            _ => Err(UnknownHeuristic(s.to_owned())),
        }
    }
}

/// Consolidation ratio `min(a, b) / max(a, b)` kept as a fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// Consolidation ratio of two community sizes. Sizes must be positive.
pub fn ratio(size_i: u64, size_j: u64) -> Ratio {
    assert!(size_i > 0 && size_j > 0, "community sizes must be positive");
    Ratio {
        num: size_i.min(size_j),
        den: size_i.max(size_j),
    }
}

/// Exact score `dq · ratio`.
#[derive(Clone, Copy, Debug)]
pub struct Score {
    pub dq: ScaledQ,
    pub ratio: Ratio,
}

impl Score {
    pub fn plain(dq: ScaledQ) -> Self {
        Score {
            dq,
            ratio: Ratio::ONE,
        }
    }

    pub fn weighted(dq: ScaledQ, size_a: u64, size_b: u64) -> Self {
        Score {
            dq,
            ratio: ratio(size_a, size_b),
        }
    }

    pub fn to_f64(self) -> f64 {
        self.dq.0 as f64 * self.ratio.to_f64()
    }
}

/// Total order on scores: sign first, then magnitudes by cross-multiplication.
pub fn compare(a: &Score, b: &Score) -> Ordering {
    let sa = a.dq.0.signum();
    let sb = b.dq.0.signum();
    if sa != sb {
        return sa.cmp(&sb);
    }
    if sa == 0 {
        return Ordering::Equal;
    }
    // |dq| ≤ 2^62 and sizes < 2^32, so each side stays below 2^126.
    let lhs = a.dq.0.unsigned_abs() as u128 * a.ratio.num as u128 * b.ratio.den as u128;
    let rhs = b.dq.0.unsigned_abs() as u128 * b.ratio.num as u128 * a.ratio.den as u128;
    if sa > 0 {
        lhs.cmp(&rhs)
    } else {
        rhs.cmp(&lhs)
    }
}

impl PartialEq for Score {
    fn eq(&self, other: &Self) -> bool {
        compare(self, other) == Ordering::Equal
    }
}

impl Eq for Score {}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(self, other)
    }
}
