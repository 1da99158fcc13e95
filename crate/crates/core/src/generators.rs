//! Seeded synthetic graphs: Barabási–Albert preferential attachment for the
//! scale-free regime and uniform random graphs as a control.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::GenError;
use crate::graph::{Graph, NodeId, MAX_NODES};

/// Generator identity recorded next to generated graphs.
pub const PRNG: &str = "ChaCha8Rng (rand_chacha 0.9) via SeedableRng::seed_from_u64";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum GenSpec {
    Ba {
        n: usize,
        m_attach: usize,
        seed: u64,
    },
    Er {
        n: usize,
        m: usize,
        seed: u64,
    },
}

impl GenSpec {
    pub fn seed(&self) -> u64 {
        match *self {
            GenSpec::Ba { seed, .. } | GenSpec::Er { seed, .. } => seed,
        }
    }

    pub fn generate(&self) -> Result<Graph, GenError> {
        match *self {
            GenSpec::Ba { n, m_attach, seed } => generate_ba(n, m_attach, seed),
            GenSpec::Er { n, m, seed } => generate_er(n, m, seed),
        }
    }
}

/// Sidecar metadata for a generated graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenMetadata {
    pub spec: GenSpec,
    pub prng: String,
    pub nodes: usize,
    pub edges: usize,
}

impl GenMetadata {
    pub fn new(spec: GenSpec, g: &Graph) -> Self {
        GenMetadata {
            spec,
            prng: PRNG.to_owned(),
            nodes: g.node_count(),
            edges: g.edge_count(),
        }
    }
}

/// Preferential attachment grown from a clique on `m_attach + 1` nodes.
///
/// Each new node picks `m_attach` distinct targets by drawing uniformly from
/// the list of all edge endpoints (so proportionally to degree) and
/// rejecting repeats.
pub fn generate_ba(n: usize, m_attach: usize, seed: u64) -> Result<Graph, GenError> {
    if m_attach < 1 || n <= m_attach {
        return Err(GenError::InvalidSpec(format!(
            "ba needs n > m_attach >= 1 (n={n}, m_attach={m_attach})"
        )));
    }
    if n > MAX_NODES {
        return Err(GenError::InvalidSpec(format!("n={n} is too large")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let core = m_attach + 1;
    let edge_total = core * m_attach / 2 + (n - core) * m_attach;
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(edge_total);
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * edge_total);
    for u in 0..core as NodeId {
        for v in u + 1..core as NodeId {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    let mut targets: Vec<NodeId> = Vec::with_capacity(m_attach);
    for v in core as NodeId..n as NodeId {
        targets.clear();
        while targets.len() < m_attach {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, v));
            endpoints.extend([t, v]);
        }
    }
    Graph::from_edges(n, edges).map_err(|e| GenError::InvalidSpec(e.to_string()))
}

/// `m` distinct edges drawn uniformly from all `n(n-1)/2` node pairs.
pub fn generate_er(n: usize, m: usize, seed: u64) -> Result<Graph, GenError> {
    if !(2..=MAX_NODES).contains(&n) {
        return Err(GenError::InvalidSpec(format!("er needs 2 <= n, got n={n}")));
    }
    let possible = n as u64 * (n as u64 - 1) / 2;
    if m == 0 || m as u64 > possible {
        return Err(GenError::InvalidSpec(format!(
            "er needs 1 <= m <= {possible} for n={n}, got m={m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = index::sample(&mut rng, possible as usize, m);
    let edges = picks.into_iter().map(|t| unrank_pair(t as u64));
    Graph::from_edges(n, edges).map_err(|e| GenError::InvalidSpec(e.to_string()))
}

/// Maps `t` to the `t`-th pair `(u, v)`, `u < v`, ordered by `v` then `u`.
fn unrank_pair(t: u64) -> (NodeId, NodeId) {
    let mut v = ((1.0 + (1.0 + 8.0 * t as f64).sqrt()) / 2.0) as u64;
    while v * (v - 1) / 2 > t {
        v -= 1;
    }
    while (v + 1) * v / 2 <= t {
        v += 1;
    }
    let u = t - v * (v - 1) / 2;
    (u as NodeId, v as NodeId)
}
