//! Exact modularity arithmetic.
//!
//! Every quantity is kept as an integer multiple of `1 / 4m²`: for a
//! community with `L` internal edges and degree sum `D` the contribution to
//! `Q · 4m²` is `4m·L − D²`. No floating point is involved until a value is
//! rendered for people.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::ModularityError;
use crate::graph::Graph;

/// Largest edge count accepted by the exact routines.
///
/// With `m ≤ 2^30` every scaled value is bounded by `4m² ≤ 2^62` and fits an
/// `i64`, and products of such a value with two community sizes below `2^32`
/// fit the `u128` used when comparing ratio-weighted scores.
pub const MAX_EDGES: usize = 1 << 30;

/// Modularity (or a modularity change) multiplied by `4m²`.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct ScaledQ(pub i64);

impl ScaledQ {
    pub const ZERO: ScaledQ = ScaledQ(0);

    /// `4m²`, the denominator of every scaled value on a graph with `m` edges.
    pub fn denominator(m: usize) -> i64 {
        4 * (m as i64) * (m as i64)
    }

    /// Decimal value for display only.
    pub fn to_f64(self, m: usize) -> f64 {
        self.0 as f64 / Self::denominator(m) as f64
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }
}

impl fmt::Display for ScaledQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Add for ScaledQ {
    type Output = ScaledQ;
    fn add(self, rhs: ScaledQ) -> ScaledQ {
        ScaledQ(self.0 + rhs.0)
    }
}

impl AddAssign for ScaledQ {
    fn add_assign(&mut self, rhs: ScaledQ) {
        self.0 += rhs.0;
    }
}

impl Sub for ScaledQ {
    type Output = ScaledQ;
    fn sub(self, rhs: ScaledQ) -> ScaledQ {
        ScaledQ(self.0 - rhs.0)
    }
}

impl Neg for ScaledQ {
    type Output = ScaledQ;
    fn neg(self) -> ScaledQ {
        ScaledQ(-self.0)
    }
}

/// Assignment of every node to a community label. Label values carry no
/// meaning beyond equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<u32>,
}

impl Partition {
    pub fn from_labels(labels: Vec<u32>) -> Self {
        Partition { labels }
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            labels: (0..n as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, v: u32) -> u32 {
        self.labels[v as usize]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Member count per label, ordered by label.
    pub fn community_sizes(&self) -> Vec<(u32, usize)> {
        let mut sizes: HashMap<u32, usize> = HashMap::new();
        for &l in &self.labels {
            *sizes.entry(l).or_default() += 1;
        }
        let mut out: Vec<_> = sizes.into_iter().collect();
        out.sort_unstable();
        out
    }

    pub fn community_count(&self) -> usize {
        self.community_sizes().len()
    }
}

pub fn check_edge_bound(m: usize) -> Result<(), ModularityError> {
    if m > MAX_EDGES {
        Err(ModularityError::TooManyEdges { m, max: MAX_EDGES })
    } else {
        Ok(())
    }
}

/// `Q · 4m²` of `p` computed from scratch: `Σ_c (4m·L_c − D_c²)`.
pub fn q_scaled_scratch(g: &Graph, p: &Partition) -> Result<ScaledQ, ModularityError> {
    let n = g.node_count();
    if p.len() != n {
        return Err(ModularityError::PartitionSize {
            labelled: p.len(),
            nodes: n,
        });
    }
    let m = g.edge_count();
    check_edge_bound(m)?;

    // label -> (internal edges, degree sum)
    let mut tally: HashMap<u32, (i64, i64)> = HashMap::new();
    for v in 0..n as u32 {
        let entry = tally.entry(p.label(v)).or_default();
        entry.1 += g.degree(v) as i64;
    }
    for (u, v) in g.edges() {
        if p.label(u) == p.label(v) {
            tally.get_mut(&p.label(u)).unwrap().0 += 1;
        }
    }
    let four_m = 4 * m as i64;
    Ok(ScaledQ(
        tally.values().map(|&(l, d)| four_m * l - d * d).sum(),
    ))
}

/// Gain from merging adjacent singletons `{u}` and `{v}`: `4m − 2·k_u·k_v`.
pub fn dq_scaled_init(k_u: u64, k_v: u64, m: u64) -> ScaledQ {
    ScaledQ(4 * m as i64 - 2 * (k_u * k_v) as i64)
}

/// Gain from merging communities joined by `links` edges with degree sums
/// `d_i` and `d_j`: `2(2m·L − D_i·D_j)`.
pub fn dq_scaled_pair(links: u64, d_i: u64, d_j: u64, m: u64) -> ScaledQ {
    ScaledQ(2 * (2 * m as i64 * links as i64 - (d_i * d_j) as i64))
}

/// How a neighbour `k` of a merging pair `(i, j)` was connected before the
/// merge, together with its existing pair gains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NeighborLink {
    Common { dq_ik: ScaledQ, dq_jk: ScaledQ },
    OnlyI { dq_ik: ScaledQ },
    OnlyJ { dq_jk: ScaledQ },
}

/// Gain of the pair `(i ∪ j, k)` derived from the pre-merge pair gains.
/// `d_i`, `d_j`, `d_k` are the degree sums before the merge.
pub fn dq_update_after_merge(link: NeighborLink, d_i: u64, d_j: u64, d_k: u64) -> ScaledQ {
    match link {
        NeighborLink::Common { dq_ik, dq_jk } => dq_ik + dq_jk,
        NeighborLink::OnlyI { dq_ik } => dq_ik - ScaledQ(2 * (d_j * d_k) as i64),
        NeighborLink::OnlyJ { dq_jk } => dq_jk - ScaledQ(2 * (d_i * d_k) as i64),
    }
}
