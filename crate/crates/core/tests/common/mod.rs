//! Shared test helpers: graph suites and a direct, slow reference
//! implementation of the two-stage greedy selection.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeMap;

use greedymod::{
    generate_ba, generate_er, q_scaled_scratch, Graph, Heuristic, Partition, ScaledQ, SizeMeasure,
    StopPolicy,
};

/// Mixed ER and BA graphs, `count` of them, with at most `max_n` nodes.
pub fn graph_suite(count: usize, max_n: usize, salt: u64) -> Vec<(String, Graph)> {
    let mut out = Vec::with_capacity(count);
    for idx in 0..count {
        let seed = salt * 1000 + idx as u64;
        let n = 6 + (idx * 37 + salt as usize * 11) % (max_n - 5);
        if idx % 2 == 0 {
            let attach = 1 + idx % 3;
            let n = n.max(attach + 1);
            out.push((
                format!("ba(n={n}, m={attach}, seed={seed})"),
                generate_ba(n, attach, seed).unwrap(),
            ));
        } else {
            let max_m = n * (n - 1) / 2;
            let m = (n + idx * 7 % (2 * n)).clamp(1, max_m);
            out.push((
                format!("er(n={n}, m={m}, seed={seed})"),
                generate_er(n, m, seed).unwrap(),
            ));
        }
    }
    out
}

/// `dq · num / den` with `num ≤ den`, compared exactly.
#[derive(Clone, Copy, Debug)]
pub struct RefScore {
    pub dq: i64,
    pub num: u64,
    pub den: u64,
}

impl RefScore {
    pub fn new(h: Heuristic, stage: u8, dq: i64, a: u64, b: u64) -> Self {
        let weighted = match stage {
            1 => matches!(h, Heuristic::He | Heuristic::Hn),
            _ => !matches!(h, Heuristic::Plain),
        };
        if weighted {
            RefScore {
                dq,
                num: a.min(b),
                den: a.max(b),
            }
        } else {
            RefScore { dq, num: 1, den: 1 }
        }
    }

    pub fn cmp(&self, other: &RefScore) -> Ordering {
        let l = self.dq as i128 * self.num as i128 * other.den as i128;
        let r = other.dq as i128 * other.num as i128 * self.den as i128;
        l.cmp(&r)
    }
}

/// Greedy agglomeration written as directly as possible: every gain is a
/// difference of two from-scratch modularities.
pub struct Reference<'g> {
    pub g: &'g Graph,
    pub h: Heuristic,
    /// community id of every node
    pub labels: Vec<u32>,
    pub next_id: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RefMerge {
    pub lo: u32,
    pub hi: u32,
    pub new: u32,
    pub dq: i64,
}

impl<'g> Reference<'g> {
    pub fn new(g: &'g Graph, h: Heuristic) -> Self {
        Reference {
            g,
            h,
            labels: (0..g.node_count() as u32).collect(),
            next_id: g.node_count() as u32,
        }
    }

    pub fn q(&self) -> ScaledQ {
        q_scaled_scratch(self.g, &Partition::from_labels(self.labels.clone())).unwrap()
    }

    /// Edge counts between adjacent communities, keyed `(lo, hi)`.
    pub fn links(&self) -> BTreeMap<(u32, u32), u64> {
        let mut out = BTreeMap::new();
        for (u, v) in self.g.edges() {
            let (a, b) = (self.labels[u as usize], self.labels[v as usize]);
            if a != b {
                *out.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        out
    }

    pub fn dq(&self, a: u32, b: u32) -> i64 {
        let joined: Vec<u32> = self
            .labels
            .iter()
            .map(|&l| if l == b { a } else { l })
            .collect();
        let after = q_scaled_scratch(self.g, &Partition::from_labels(joined)).unwrap();
        after.0 - self.q().0
    }

    pub fn size(&self, c: u32, links: &BTreeMap<(u32, u32), u64>) -> u64 {
        match self.h.size_measure() {
            SizeMeasure::Members => self.labels.iter().filter(|&&l| l == c).count() as u64,
            SizeMeasure::Links => links.keys().filter(|(a, b)| *a == c || *b == c).count() as u64,
        }
    }

    /// Every live pair with its gain.
    pub fn pair_gains(&self) -> BTreeMap<(u32, u32), i64> {
        self.links()
            .keys()
            .map(|&(a, b)| ((a, b), self.dq(a, b)))
            .collect()
    }

    /// Best pair of each community under the first-stage score, ties to the
    /// smaller neighbour.
    pub fn nominees(&self) -> BTreeMap<u32, (u32, i64)> {
        let links = self.links();
        let gains = self.pair_gains();
        let mut sizes = BTreeMap::new();
        for &(a, b) in links.keys() {
            for c in [a, b] {
                sizes.entry(c).or_insert_with(|| self.size(c, &links));
            }
        }
        let mut best: BTreeMap<u32, (u32, i64, RefScore)> = BTreeMap::new();
        for (&(a, b), &dq) in &gains {
            for (own, other) in [(a, b), (b, a)] {
                let s = RefScore::new(self.h, 1, dq, sizes[&own], sizes[&other]);
                let better = match best.get(&own) {
                    None => true,
                    Some(&(cur, _, cs)) => match s.cmp(&cs) {
                        Ordering::Greater => true,
                        Ordering::Equal => other < cur,
                        Ordering::Less => false,
                    },
                };
                if better {
                    best.insert(own, (other, dq, s));
                }
            }
        }
        best.into_iter()
            .map(|(c, (o, dq, _))| (c, (o, dq)))
            .collect()
    }

    /// Highest second-stage score among the nominated pairs, ties to the
    /// smaller `(lo, hi)`.
    pub fn select(&self) -> Option<RefMerge> {
        let links = self.links();
        let mut best: Option<(RefScore, u32, u32, i64)> = None;
        for (c, (o, dq)) in self.nominees() {
            let (lo, hi) = (c.min(o), c.max(o));
            let s = RefScore::new(self.h, 2, dq, self.size(c, &links), self.size(o, &links));
            let better = match &best {
                None => true,
                Some((bs, blo, bhi, _)) => match s.cmp(bs) {
                    Ordering::Greater => true,
                    Ordering::Equal => (lo, hi) < (*blo, *bhi),
                    Ordering::Less => false,
                },
            };
            if better {
                best = Some((s, lo, hi, dq));
            }
        }
        best.map(|(_, lo, hi, dq)| RefMerge {
            lo,
            hi,
            new: self.next_id,
            dq,
        })
    }

    pub fn apply(&mut self, m: RefMerge) {
        for l in &mut self.labels {
            if *l == m.lo || *l == m.hi {
                *l = m.new;
            }
        }
        self.next_id += 1;
    }

    /// All merges under `stop`.
    pub fn run(mut self, stop: StopPolicy) -> Vec<RefMerge> {
        let mut out = Vec::new();
        while let Some(m) = self.select() {
            if stop == StopPolicy::NegativeDq && m.dq < 0 {
                break;
            }
            self.apply(m);
            out.push(m);
        }
        out
    }
}

/// Path of a file under `tests/data`.
pub fn data_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("data")
        .join(name)
}
