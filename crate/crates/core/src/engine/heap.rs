//! Indexed binary max-heap holding one nomination per community.

use std::cmp::Ordering;

use crate::heuristics::Score;

const ABSENT: u32 = u32::MAX;

/// Priority of a nominated pair. Higher score wins; equal scores prefer the
/// lexicographically smaller `(lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeapKey {
    pub score: Score,
    pub lo: u32,
    pub hi: u32,
}

impl Ord for HeapKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.score
            .cmp(&other.score)
            .then_with(|| (other.lo, other.hi).cmp(&(self.lo, self.hi)))
    }
}

impl PartialOrd for HeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, Default)]
pub(crate) struct NominationHeap {
    slots: Vec<u32>,
    keys: Vec<Option<HeapKey>>,
    pos: Vec<u32>,
}

impl NominationHeap {
    pub fn with_capacity(ids: usize) -> Self {
        NominationHeap {
            slots: Vec::with_capacity(ids / 2 + 1),
            keys: Vec::with_capacity(ids),
            pos: Vec::with_capacity(ids),
        }
    }

    fn ensure(&mut self, id: u32) {
        let need = id as usize + 1;
        if self.pos.len() < need {
            self.pos.resize(need, ABSENT);
            self.keys.resize(need, None);
        }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn key(&self, id: u32) -> Option<&HeapKey> {
        self.keys.get(id as usize).and_then(Option::as_ref)
    }

    pub fn peek(&self) -> Option<(u32, HeapKey)> {
        let &id = self.slots.first()?;
        Some((id, self.keys[id as usize].unwrap()))
    }

    /// Inserts `id` or re-keys it in place.
    pub fn set(&mut self, id: u32, key: HeapKey) {
        self.ensure(id);
        let old = self.keys[id as usize].replace(key);
        let at = self.pos[id as usize];
        if at == ABSENT {
            self.slots.push(id);
            let at = self.slots.len() - 1;
            self.pos[id as usize] = at as u32;
            self.sift_up(at);
        } else {
            match old.map(|o| key.cmp(&o)) {
                Some(Ordering::Greater) => self.sift_up(at as usize),
                Some(Ordering::Less) => self.sift_down(at as usize),
                _ => {}
            }
        }
    }

    pub fn remove(&mut self, id: u32) {
        if id as usize >= self.pos.len() {
            return;
        }
        let at = self.pos[id as usize];
        if at == ABSENT {
            return;
        }
        let at = at as usize;
        let last = self.slots.len() - 1;
        self.slots.swap(at, last);
        self.slots.pop();
        self.pos[id as usize] = ABSENT;
        self.keys[id as usize] = None;
        if at < self.slots.len() {
            let moved = self.slots[at];
            self.pos[moved as usize] = at as u32;
            self.sift_up(at);
            self.sift_down(self.pos[moved as usize] as usize);
        }
    }

    fn greater(&self, a: usize, b: usize) -> bool {
        let ka = self.keys[self.slots[a] as usize].as_ref().unwrap();
        let kb = self.keys[self.slots[b] as usize].as_ref().unwrap();
        ka > kb
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.slots.swap(a, b);
        self.pos[self.slots[a] as usize] = a as u32;
        self.pos[self.slots[b] as usize] = b as u32;
    }

    fn sift_up(&mut self, mut at: usize) {
        while at > 0 {
            let parent = (at - 1) / 2;
            if !self.greater(at, parent) {
                break;
            }
            self.swap(at, parent);
            at = parent;
        }
    }

    fn sift_down(&mut self, mut at: usize) {
        let len = self.slots.len();
        loop {
            let left = 2 * at + 1;
            if left >= len {
                break;
            }
            let right = left + 1;
            let child = if right < len && self.greater(right, left) {
                right
            } else {
                left
            };
            if !self.greater(child, at) {
                break;
            }
            self.swap(at, child);
            at = child;
        }
    }

    #[cfg(test)]
    fn check(&self) {
        for at in 1..self.slots.len() {
            assert!(!self.greater(at, (at - 1) / 2), "heap order broken at {at}");
        }
        for (at, &id) in self.slots.iter().enumerate() {
            assert_eq!(self.pos[id as usize] as usize, at);
        }
    }
}
