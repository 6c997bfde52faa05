//! Successor/predecessor structure over a fixed universe `[0, n)`.
//!
//! A complete binary tree is laid over the universe (padded to a power of
//! two) and every node records the minimum, maximum and size of the stored
//! set restricted to its span. Nodes use heap numbering: the root is `1`,
//! leaf `i` is `cap + i`, `anc(v, j) = v >> j`, and the children of `v` are
//! `2v` and `2v + 1`.
//!
//! Queries walk the leaf-to-root path once, so insert, delete, successor,
//! predecessor and select all cost `O(log n)` metered units.

use crate::error::{check_pos, Result};
use crate::meter::WorkMeter;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct RankedSet {
    len: usize,
    cap: usize,
    height: u32,
    min: Vec<u32>,
    max: Vec<u32>,
    count: Vec<u32>,
    meter: WorkMeter,
}

impl RankedSet {
    pub fn new(len: usize, meter: WorkMeter) -> Self {
        let cap = len.max(1).next_power_of_two();
        Self {
            len,
            cap,
            height: cap.trailing_zeros(),
            min: vec![NONE; 2 * cap],
            max: vec![NONE; 2 * cap],
            count: vec![0; 2 * cap],
            meter,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.count[1] == 0
    }

    /// Number of stored elements.
    pub fn size(&self) -> usize {
        self.meter.tick();
        self.count[1] as usize
    }

    pub fn meter(&self) -> &WorkMeter {
        &self.meter
    }

    pub fn contains(&self, i: usize) -> bool {
        self.meter.tick();
        i < self.len && self.count[self.cap + i] == 1
    }

    pub fn min(&self) -> Option<usize> {
        self.meter.tick();
        opt(self.min[1])
    }

    pub fn max(&self) -> Option<usize> {
        self.meter.tick();
        opt(self.max[1])
    }

    pub fn insert(&mut self, i: usize) -> Result<()> {
        check_pos(i, self.len)?;
        let leaf = self.cap + i;
        self.meter.tick();
        if self.count[leaf] == 1 {
            return Ok(());
        }
        let i = i as u32;
        for k in 0..=self.height {
            let v = leaf >> k;
            if self.min[v] == NONE || self.min[v] > i {
                self.min[v] = i;
            }
            if self.max[v] == NONE || self.max[v] < i {
                self.max[v] = i;
            }
            self.count[v] += 1;
            // anc, two compares, three writes
            self.meter.charge(6);
        }
        Ok(())
    }

    pub fn delete(&mut self, i: usize) -> Result<()> {
        check_pos(i, self.len)?;
        let leaf = self.cap + i;
        self.meter.tick();
        if self.count[leaf] == 0 {
            return Ok(());
        }
        // computed once, before the per-ancestor rewrites
        let s = self.succ(i)?.map_or(NONE, |x| x as u32);
        let p = self.pred(i)?.map_or(NONE, |x| x as u32);
        let i = i as u32;
        for k in 0..=self.height {
            let v = leaf >> k;
            let (old_min, old_max) = (self.min[v], self.max[v]);
            self.min[v] = if old_min != i {
                old_min
            } else if old_max == i {
                NONE
            } else {
                s
            };
            self.max[v] = if old_max != i {
                old_max
            } else if old_min == i {
                NONE
            } else {
                p
            };
            self.count[v] -= 1;
            self.meter.charge(6);
        }
        Ok(())
    }

    /// Smallest element strictly greater than `i`.
    pub fn succ(&self, i: usize) -> Result<Option<usize>> {
        check_pos(i, self.len)?;
        let iu = i as u32;
        self.meter.charge(2);
        if self.max[1] == NONE || self.max[1] <= iu {
            return Ok(None);
        }
        let leaf = self.cap + i;
        let mut found = None;
        // every level is inspected; exactly one satisfies the condition
        for k in 1..=self.height {
            let v = leaf >> k;
            let c = leaf >> (k - 1);
            if above(self.max[v], iu) && !above(self.max[c], iu) {
                found = Some(self.min[2 * v + 1]);
            }
            self.meter.charge(4);
        }
        self.meter.tick();
        Ok(found.and_then(opt))
    }

    /// Largest element strictly smaller than `i`.
    pub fn pred(&self, i: usize) -> Result<Option<usize>> {
        check_pos(i, self.len)?;
        let iu = i as u32;
        self.meter.charge(2);
        if self.min[1] == NONE || self.min[1] >= iu {
            return Ok(None);
        }
        let leaf = self.cap + i;
        let mut found = None;
        for k in 1..=self.height {
            let v = leaf >> k;
            let c = leaf >> (k - 1);
            if below(self.min[v], iu) && !below(self.min[c], iu) {
                found = Some(self.max[2 * v]);
            }
            self.meter.charge(4);
        }
        self.meter.tick();
        Ok(found.and_then(opt))
    }

    /// `i` itself when present, else its successor.
    pub fn next_at_or_after(&self, i: usize) -> Result<Option<usize>> {
        if self.contains(i) {
            Ok(Some(i))
        } else {
            self.succ(i)
        }
    }

    /// `i` itself when present, else its predecessor.
    pub fn prev_at_or_before(&self, i: usize) -> Result<Option<usize>> {
        if self.contains(i) {
            Ok(Some(i))
        } else {
            self.pred(i)
        }
    }

    /// The `k`-th smallest element, 1-based.
    pub fn select(&self, k: usize) -> Option<usize> {
        self.meter.charge(2);
        if k == 0 || k > self.count[1] as usize {
            return None;
        }
        let mut k = k as u32;
        let mut v = 1;
        while v < self.cap {
            let left = 2 * v;
            if self.count[left] >= k {
                v = left;
            } else {
                k -= self.count[left];
                v = left + 1;
            }
            self.meter.charge(3);
        }
        Some(v - self.cap)
    }

    /// Unmetered in-order listing, for tests and diagnostics.
    pub fn elements(&self) -> Vec<usize> {
        (0..self.len)
            .filter(|&i| self.count[self.cap + i] == 1)
            .collect()
    }

    /// Unmetered full traversal of the node invariants.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for v in (1..2 * self.cap).rev() {
            let (mn, mx, c) = (self.min[v], self.max[v], self.count[v]);
            if (mn == NONE) != (mx == NONE) || (mn == NONE) != (c == 0) {
                return Err(format!("node {v}: inconsistent emptiness"));
            }
            if v >= self.cap {
                let i = (v - self.cap) as u32;
                if c > 1 || (c == 1 && (mn != i || mx != i)) {
                    return Err(format!("leaf {i}: bad record"));
                }
                if c == 1 && v - self.cap >= self.len {
                    return Err(format!("padded leaf {i} occupied"));
                }
                continue;
            }
            let (l, r) = (2 * v, 2 * v + 1);
            if c != self.count[l] + self.count[r] {
                return Err(format!("node {v}: count mismatch"));
            }
            let want_min = [self.min[l], self.min[r]].into_iter().filter(|&x| x != NONE).min();
            let want_max = [self.max[l], self.max[r]].into_iter().filter(|&x| x != NONE).max();
            if want_min.unwrap_or(NONE) != mn || want_max.unwrap_or(NONE) != mx {
                return Err(format!("node {v}: min/max mismatch"));
            }
        }
        Ok(())
    }
}

fn opt(x: u32) -> Option<usize> {
    (x != NONE).then_some(x as usize)
}

// An empty max behaves as minus infinity, an empty min as plus infinity.
fn above(max: u32, i: u32) -> bool {
    max != NONE && max > i
}

fn below(min: u32, i: u32) -> bool {
    min != NONE && min < i
}
