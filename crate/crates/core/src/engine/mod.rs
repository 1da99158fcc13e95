//! Agglomerative greedy modularity engine.
//!
//! Every live community keeps its candidate pairs in a vector sorted by
//! neighbour id, plus a copy of its best pair under the heuristic's first
//! stage score. A nomination heap holds one entry per community with pairs,
//! keyed by the second stage score of that best pair. Merging two
//! communities is a linear merge of their pair lists; neighbours replace
//! their entries for the two old ids by a single entry for the new id, which
//! is always the largest id so far and therefore goes at the end of the list.

mod heap;

use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::dendrogram::{Dendrogram, Merge};
use crate::error::EngineError;
use crate::graph::Graph;
use crate::heuristics::{ratio, Heuristic, Score, SizeMeasure};
use crate::metrics::{MergeLog, MergeRecord};
use crate::modularity::{
    check_edge_bound, dq_scaled_init, dq_scaled_pair, dq_update_after_merge, NeighborLink,
    Partition, ScaledQ,
};

pub use heap::HeapKey;
use heap::NominationHeap;

pub type CommunityId = u32;

/// One side of a candidate pair as stored in a community's list. The pair
/// itself never changes after creation: merges create fresh ids. Inside the
/// engine an entry with `links == 0` is a removed pair awaiting compaction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairEntry {
    pub neighbor: CommunityId,
    pub links: u32,
    pub dq: ScaledQ,
}

/// Candidate merge of two live communities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CommunityPair {
    pub lo: CommunityId,
    pub hi: CommunityId,
    pub dq: ScaledQ,
    pub links: u32,
}

#[derive(Clone, Debug)]
struct Community {
    members: u64,
    degree_sum: u64,
    pairs: Vec<PairEntry>,
    // removed entries still sitting in `pairs`
    tombstones: u32,
    best: Option<PairEntry>,
    alive: bool,
}

impl Community {
    fn live_pairs(&self) -> impl Iterator<Item = &PairEntry> {
        self.pairs.iter().filter(|e| e.links != 0)
    }

    fn live_len(&self) -> usize {
        self.pairs.len() - self.tombstones as usize
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopPolicy {
    /// Stop before the first selected pair whose gain is negative.
    #[default]
    NegativeDq,
    /// Merge until no pairs remain.
    Complete,
}

impl StopPolicy {
    pub fn name(self) -> &'static str {
        match self {
            StopPolicy::NegativeDq => "negative-dq",
            StopPolicy::Complete => "complete",
        }
    }
}

impl FromStr for StopPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "negative-dq" => Ok(StopPolicy::NegativeDq),
            "complete" => Ok(StopPolicy::Complete),
            other => Err(format!(
                "unknown stop policy {other:?} (expected negative-dq or complete)"
            )),
        }
    }
}

/// What a single merge did, with sizes measured just before it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MergeOutcome {
    pub step: u32,
    pub new_id: CommunityId,
    pub pair: CommunityPair,
    pub size_lo: u64,
    pub size_hi: u64,
    pub members_lo: u64,
    pub members_hi: u64,
    pub q_after: ScaledQ,
}

/// Key of a pair inside one community's list: score, then smaller neighbour.
fn outranks(a: (Score, CommunityId), b: (Score, CommunityId)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Marks the entries for `i` and `j` (either may be absent) as removed and
/// appends `last`, whose neighbour id exceeds every id in the list. The list
/// is compacted once removed entries outnumber live ones.
fn remove_two_push(c: &mut Community, i: CommunityId, j: CommunityId, last: PairEntry) {
    for gone in [i, j] {
        if let Ok(at) = c.pairs.binary_search_by_key(&gone, |e| e.neighbor) {
            c.pairs[at].links = 0;
            c.tombstones += 1;
        }
    }
    if 2 * c.tombstones as usize > c.pairs.len() {
        c.pairs.retain(|e| e.links != 0);
        c.tombstones = 0;
    }
    c.pairs.push(last);
}

/// Full clustering state.
#[derive(Clone, Debug)]
pub struct Engine {
    heuristic: Heuristic,
    m: u64,
    n: usize,
    communities: Vec<Community>,
    // size under the heuristic's measure, kept apart for cache density
    sizes: Vec<u32>,
    heap: NominationHeap,
    q: ScaledQ,
    q_initial: ScaledQ,
    dendrogram: Dendrogram,
}

impl Engine {
    /// Singleton communities with one pair per edge.
    pub fn new(g: &Graph, heuristic: Heuristic) -> Result<Self, EngineError> {
        let m = g.edge_count();
        check_edge_bound(m)?;
        let n = g.node_count();
        let m = m as u64;
        let mut communities = Vec::with_capacity(2 * n);
        let mut q = ScaledQ::ZERO;
        for v in 0..n as u32 {
            let k = g.degree(v) as u64;
            q += ScaledQ(-((k * k) as i64));
            let pairs = g
                .neighbors(v)
                .iter()
                .map(|&w| PairEntry {
                    neighbor: w,
                    links: 1,
                    dq: dq_scaled_init(k, g.degree(w) as u64, m),
                })
                .collect();
            communities.push(Community {
                members: 1,
                degree_sum: k,
                pairs,
                tombstones: 0,
                best: None,
                alive: true,
            });
        }
        let sizes = communities
            .iter()
            .map(|c| match heuristic.size_measure() {
                SizeMeasure::Links => c.pairs.len() as u32,
                SizeMeasure::Members => 1,
            })
            .collect();
        let mut engine = Engine {
            heuristic,
            m,
            n,
            communities,
            sizes,
            heap: NominationHeap::with_capacity(2 * n),
            q,
            q_initial: q,
            dendrogram: Dendrogram::new(n),
        };
        for id in 0..n as CommunityId {
            let best = engine.scan_best(id);
            engine.communities[id as usize].best = best;
            engine.renominate(id);
        }
        Ok(engine)
    }

    pub fn heuristic(&self) -> Heuristic {
        self.heuristic
    }

    pub fn edge_count(&self) -> u64 {
        self.m
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn q_scaled(&self) -> ScaledQ {
        self.q
    }

    pub fn q_initial(&self) -> ScaledQ {
        self.q_initial
    }

    pub fn step(&self) -> usize {
        self.dendrogram.len()
    }

    pub fn dendrogram(&self) -> &Dendrogram {
        &self.dendrogram
    }

    pub fn into_dendrogram(self) -> Dendrogram {
        self.dendrogram
    }

    /// Ids ever allocated, live or not.
    pub fn id_bound(&self) -> usize {
        self.communities.len()
    }

    pub fn is_alive(&self, id: CommunityId) -> bool {
        self.communities.get(id as usize).is_some_and(|c| c.alive)
    }

    pub fn live_ids(&self) -> impl Iterator<Item = CommunityId> + '_ {
        self.communities
            .iter()
            .enumerate()
            .filter(|(_, c)| c.alive)
            .map(|(i, _)| i as CommunityId)
    }

    /// Live pairs of `id`, sorted by neighbour.
    pub fn pairs(&self, id: CommunityId) -> Vec<PairEntry> {
        self.communities[id as usize]
            .live_pairs()
            .copied()
            .collect()
    }

    pub fn best(&self, id: CommunityId) -> Option<PairEntry> {
        self.communities[id as usize].best
    }

    pub fn members(&self, id: CommunityId) -> u64 {
        self.communities[id as usize].members
    }

    pub fn degree_sum(&self, id: CommunityId) -> u64 {
        self.communities[id as usize].degree_sum
    }

    /// Community size under the heuristic's size measure.
    #[inline]
    pub fn size(&self, id: CommunityId) -> u64 {
        self.sizes[id as usize] as u64
    }

    /// Heap entry of `id`, if it has one.
    pub fn nomination(&self, id: CommunityId) -> Option<HeapKey> {
        self.heap.key(id).copied()
    }

    pub fn nomination_count(&self) -> usize {
        self.heap.len()
    }

    /// Current partition, nodes labelled by live community id.
    pub fn partition(&self) -> Partition {
        self.dendrogram.final_partition()
    }

    /// First stage score of `entry` inside `owner`'s list.
    pub fn stage1_score(&self, owner: CommunityId, entry: &PairEntry) -> Score {
        if self.heuristic.weights_stage1() {
            Score::weighted(entry.dq, self.size(owner), self.size(entry.neighbor))
        } else {
            Score::plain(entry.dq)
        }
    }

    /// Second stage score of the pair `owner`–`entry.neighbor`.
    pub fn stage2_score(&self, owner: CommunityId, entry: &PairEntry) -> Score {
        if self.heuristic.weights_stage2() {
            Score::weighted(entry.dq, self.size(owner), self.size(entry.neighbor))
        } else {
            Score::plain(entry.dq)
        }
    }

    fn scan_best(&self, owner: CommunityId) -> Option<PairEntry> {
        let mut best: Option<(Score, PairEntry)> = None;
        for e in self.communities[owner as usize].live_pairs() {
            let s = self.stage1_score(owner, e);
            // ascending neighbour order: a strict comparison keeps the smaller id on ties
            if best.as_ref().is_none_or(|(bs, _)| s > *bs) {
                best = Some((s, *e));
            }
        }
        best.map(|(_, e)| e)
    }

    fn renominate(&mut self, id: CommunityId) {
        match self.communities[id as usize].best {
            Some(e) => {
                let key = HeapKey {
                    score: self.stage2_score(id, &e),
                    lo: id.min(e.neighbor),
                    hi: id.max(e.neighbor),
                };
                self.heap.set(id, key);
            }
            None => self.heap.remove(id),
        }
    }

    /// Restores `owner`'s best-pair link after the pair to `entry.neighbor`
    /// changed.
    ///
    /// `old_key` is the pair's key before the change (`None` for a pair that
    /// did not exist) and `was_best` says whether it was the best pair. Only
    /// the case where the best pair got worse needs a full scan.
    fn update_max_link(
        &mut self,
        owner: CommunityId,
        entry: PairEntry,
        old_key: Option<(Score, CommunityId)>,
        was_best: bool,
    ) {
        let new_key = (self.stage1_score(owner, &entry), entry.neighbor);
        if was_best {
            let kept = old_key.is_some_and(|old| !outranks(old, new_key));
            self.communities[owner as usize].best = if kept {
                Some(entry)
            } else {
                self.scan_best(owner)
            };
            return;
        }
        if old_key.is_some_and(|old| !outranks(new_key, old)) {
            return;
        }
        let replace = match self.communities[owner as usize].best {
            None => true,
            Some(cur) => outranks(new_key, (self.stage1_score(owner, &cur), cur.neighbor)),
        };
        if replace {
            self.communities[owner as usize].best = Some(entry);
        }
    }

    /// The pair with the highest second stage score among the nominations.
    pub fn select_global_pair(&self) -> Option<CommunityPair> {
        let (owner, key) = self.heap.peek()?;
        let e = self.communities[owner as usize].best?;
        Some(CommunityPair {
            lo: key.lo,
            hi: key.hi,
            dq: e.dq,
            links: e.links,
        })
    }

    fn lookup(&self, a: CommunityId, b: CommunityId) -> Option<PairEntry> {
        let list = &self.communities.get(a as usize)?.pairs;
        list.binary_search_by_key(&b, |e| e.neighbor)
            .ok()
            .map(|at| list[at])
            .filter(|e| e.links != 0)
    }

    /// Merges a live pair into a new community and returns what happened.
    pub fn merge_pair(&mut self, pair: CommunityPair) -> Result<MergeOutcome, EngineError> {
        let (i, j) = (pair.lo, pair.hi);
        for id in [i, j] {
            if !self.is_alive(id) {
                return Err(EngineError::StalePair {
                    lo: i,
                    hi: j,
                    dead: id,
                });
            }
        }
        let stored = self
            .lookup(i, j)
            .filter(|e| i < j && e.dq == pair.dq)
            .ok_or(EngineError::MissingPair { lo: i, hi: j })?;

        let c = self.communities.len() as CommunityId;
        let (size_lo, size_hi) = (self.size(i), self.size(j));
        let (members_i, members_j) = (self.members(i), self.members(j));
        let (d_i, d_j) = (self.degree_sum(i), self.degree_sum(j));

        // linear merge of the two sorted lists
        let mut merged: Vec<PairEntry> = Vec::new();
        let mut common: Vec<bool> = Vec::new();
        {
            let a = &self.communities[i as usize].pairs;
            let b = &self.communities[j as usize].pairs;
            merged.reserve(a.len() + b.len());
            common.reserve(a.len() + b.len());
            let (mut x, mut y) = (0, 0);
            loop {
                while x < a.len() && a[x].links == 0 {
                    x += 1;
                }
                while y < b.len() && b[y].links == 0 {
                    y += 1;
                }
                if x == a.len() && y == b.len() {
                    break;
                }
                let take_a = y == b.len() || (x < a.len() && a[x].neighbor < b[y].neighbor);
                let take_b = x == a.len() || (y < b.len() && b[y].neighbor < a[x].neighbor);
                let (k, link, links) = if take_a {
                    let e = a[x];
                    x += 1;
                    if e.neighbor == j {
                        continue;
                    }
                    (e.neighbor, NeighborLink::OnlyI { dq_ik: e.dq }, e.links)
                } else if take_b {
                    let e = b[y];
                    y += 1;
                    if e.neighbor == i {
                        continue;
                    }
                    (e.neighbor, NeighborLink::OnlyJ { dq_jk: e.dq }, e.links)
                } else {
                    let (ea, eb) = (a[x], b[y]);
                    x += 1;
                    y += 1;
                    (
                        ea.neighbor,
                        NeighborLink::Common {
                            dq_ik: ea.dq,
                            dq_jk: eb.dq,
                        },
                        ea.links + eb.links,
                    )
                };
                let d_k = self.communities[k as usize].degree_sum;
                merged.push(PairEntry {
                    neighbor: k,
                    links,
                    dq: dq_update_after_merge(link, d_i, d_j, d_k),
                });
                common.push(matches!(link, NeighborLink::Common { .. }));
            }
        }

        let links_sized = self.heuristic.size_measure() == SizeMeasure::Links;
        self.sizes.push(if links_sized {
            merged.len() as u32
        } else {
            (members_i + members_j) as u32
        });
        self.communities.push(Community {
            members: members_i + members_j,
            degree_sum: d_i + d_j,
            pairs: merged,
            tombstones: 0,
            best: None,
            alive: true,
        });
        self.communities[i as usize].alive = false;
        self.communities[j as usize].alive = false;
        self.heap.remove(i);
        self.heap.remove(j);
        self.q += stored.dq;

        for (idx, &is_common) in common.iter().enumerate() {
            let entry = self.communities[c as usize].pairs[idx];
            let k = entry.neighbor;
            let mirrored = PairEntry {
                neighbor: c,
                ..entry
            };
            let shrinks = is_common && links_sized;
            let old_size_k = self.size(k);
            let old_best = self.communities[k as usize].best;
            let old_key = old_best.map(|b| (self.stage1_score(k, &b), b.neighbor));

            let ck = &mut self.communities[k as usize];
            remove_two_push(ck, i, j, mirrored);
            if links_sized {
                self.sizes[k as usize] = ck.live_len() as u32;
            }

            if shrinks && self.heuristic.weights_stage1() {
                self.communities[k as usize].best = self.scan_best(k);
            } else {
                let was_best = old_best.is_some_and(|b| b.neighbor == i || b.neighbor == j);
                if was_best {
                    self.update_max_link(k, mirrored, old_key, true);
                } else {
                    self.update_max_link(k, mirrored, None, false);
                }
            }
            self.renominate(k);

            if shrinks && self.heuristic.weights_stage2() {
                self.propagate_size_change(k, c, old_size_k);
            }
        }

        let best = self.scan_best(c);
        self.communities[c as usize].best = best;
        self.renominate(c);
        for id in [i, j] {
            let dead = &mut self.communities[id as usize];
            dead.pairs = Vec::new();
            dead.tombstones = 0;
            dead.best = None;
        }

        let step = self.dendrogram.len() as u32 + 1;
        self.dendrogram.push(Merge {
            step,
            left: i,
            right: j,
            new: c,
            dq: stored.dq,
            q_after: self.q,
        });
        Ok(MergeOutcome {
            step,
            new_id: c,
            pair: CommunityPair {
                lo: i,
                hi: j,
                dq: stored.dq,
                links: stored.links,
            },
            size_lo,
            size_hi,
            members_lo: members_i,
            members_hi: members_j,
            q_after: self.q,
        })
    }

    /// `k`'s link count just dropped from `old_size`, which changes the
    /// score of every pair touching `k` in its neighbours' lists.
    fn propagate_size_change(&mut self, k: CommunityId, skip: CommunityId, old_size: u64) {
        let weights1 = self.heuristic.weights_stage1();
        let mut at = 0;
        while at < self.communities[k as usize].pairs.len() {
            let e = self.communities[k as usize].pairs[at];
            at += 1;
            let x = e.neighbor;
            if x == skip || e.links == 0 {
                continue;
            }
            let seen_from_x = PairEntry { neighbor: k, ..e };
            let best_before = self.communities[x as usize].best;
            if weights1 {
                let old_score = Score {
                    dq: e.dq,
                    ratio: ratio(self.size(x), old_size),
                };
                let was_best = best_before.is_some_and(|b| b.neighbor == k);
                self.update_max_link(x, seen_from_x, Some((old_score, k)), was_best);
            }
            let best_after = self.communities[x as usize].best;
            if best_after != best_before || best_after.is_some_and(|b| b.neighbor == k) {
                self.renominate(x);
            }
        }
    }

    /// Full structural check: sorted symmetric pair lists with consistent
    /// gains, best-pair links equal to a full scan, and heap entries equal to
    /// the nominated pairs' keys.
    pub fn audit(&self) -> Result<(), EngineError> {
        let fail = |msg: String| Err(EngineError::Invariant(msg));
        let mut nominated = 0;
        for (id, c) in self.communities.iter().enumerate() {
            let id = id as CommunityId;
            if !c.alive {
                if !c.pairs.is_empty() || self.heap.key(id).is_some() {
                    return fail(format!("dead community {id} still holds pairs"));
                }
                continue;
            }
            for w in c.pairs.windows(2) {
                if w[0].neighbor >= w[1].neighbor {
                    return fail(format!("pairs of {id} not strictly sorted"));
                }
            }
            let removed = c.pairs.iter().filter(|e| e.links == 0).count();
            if removed != c.tombstones as usize {
                return fail(format!("tombstone count of {id} is off"));
            }
            if self.heuristic.size_measure() == SizeMeasure::Links
                && self.size(id) != c.live_len() as u64
            {
                return fail(format!("cached size of {id} is off"));
            }
            for e in c.live_pairs() {
                if e.neighbor == id {
                    return fail(format!("community {id} paired with itself"));
                }
                if !self.is_alive(e.neighbor) {
                    return fail(format!("{id} pairs with dead {}", e.neighbor));
                }
                match self.lookup(e.neighbor, id) {
                    Some(back) if back.dq == e.dq && back.links == e.links => {}
                    _ => return fail(format!("pair ({id}, {}) not symmetric", e.neighbor)),
                }
                let expect = dq_scaled_pair(
                    e.links as u64,
                    c.degree_sum,
                    self.degree_sum(e.neighbor),
                    self.m,
                );
                if expect != e.dq {
                    return fail(format!("pair ({id}, {}) has stale gain", e.neighbor));
                }
            }
            let scanned = self.scan_best(id);
            if scanned != c.best {
                return fail(format!(
                    "best link of {id} is {:?}, full scan gives {:?}",
                    c.best, scanned
                ));
            }
            let key = self.heap.key(id).copied();
            match c.best {
                Some(b) => {
                    nominated += 1;
                    let expect = HeapKey {
                        score: self.stage2_score(id, &b),
                        lo: id.min(b.neighbor),
                        hi: id.max(b.neighbor),
                    };
                    if key != Some(expect) {
                        return fail(format!("heap key of {id} is stale"));
                    }
                }
                None if key.is_some() => {
                    return fail(format!("pairless community {id} is nominated"))
                }
                None => {}
            }
        }
        if nominated != self.heap.len() {
            return fail("heap holds entries for unknown communities".into());
        }
        Ok(())
    }
}

/// Everything a full run produces.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub heuristic: Heuristic,
    pub stop: StopPolicy,
    pub n: usize,
    pub m: usize,
    pub q_initial: ScaledQ,
    pub dendrogram: Dendrogram,
    pub log: MergeLog,
    pub final_partition: Partition,
    pub final_q: ScaledQ,
    pub best_partition: Partition,
    pub peak_q: ScaledQ,
    pub peak_step: usize,
    pub elapsed: Duration,
}

impl RunResult {
    pub fn merges(&self) -> usize {
        self.dendrogram.len()
    }
}

/// Greedy loop: select, check the stop policy, merge, log.
pub fn run(g: &Graph, heuristic: Heuristic, stop: StopPolicy) -> Result<RunResult, EngineError> {
    run_observed(g, heuristic, stop, |_, _| Ok(()))
}

/// [`run`] with a callback after every merge. An error from the callback
/// aborts the run.
pub fn run_observed<F>(
    g: &Graph,
    heuristic: Heuristic,
    stop: StopPolicy,
    mut observe: F,
) -> Result<RunResult, EngineError>
where
    F: FnMut(&Engine, &MergeOutcome) -> Result<(), EngineError>,
{
    let started = Instant::now();
    let mut engine = Engine::new(g, heuristic)?;
    let mut records = Vec::new();
    loop {
        let tick = Instant::now();
        let Some(pair) = engine.select_global_pair() else {
            break;
        };
        if stop == StopPolicy::NegativeDq && pair.dq.is_negative() {
            break;
        }
        let out = engine.merge_pair(pair)?;
        let elapsed_ns = tick.elapsed().as_nanos() as u64;
        records.push(MergeRecord {
            step: out.step,
            lo: out.pair.lo,
            hi: out.pair.hi,
            size_lo: out.size_lo,
            size_hi: out.size_hi,
            members_lo: out.members_lo,
            members_hi: out.members_hi,
            ratio: ratio(out.size_lo, out.size_hi).to_f64(),
            dq_scaled: out.pair.dq.0,
            q_scaled_after: out.q_after.0,
            elapsed_ns,
        });
        observe(&engine, &out)?;
    }
    let elapsed = started.elapsed();
    let q_initial = engine.q_initial();
    let final_q = engine.q_scaled();
    let dendrogram = engine.into_dendrogram();
    let (peak_step, peak_q) = dendrogram.peak(q_initial);
    Ok(RunResult {
        heuristic,
        stop,
        n: g.node_count(),
        m: g.edge_count(),
        q_initial,
        final_partition: dendrogram.final_partition(),
        best_partition: dendrogram.partition_after(peak_step),
        final_q,
        peak_q,
        peak_step,
        log: MergeLog::new(records),
        dendrogram,
        elapsed,
    })
}
