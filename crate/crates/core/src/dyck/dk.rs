//! Membership in the Dyck language with several bracket types.
//!
//! Every tree node keeps the positions of its type-unaware reduced string:
//! unmatched closers `μˡ` and unmatched openers `μʳ`, each as a ranked set.
//! A node is *well-typed* (`M = 1`) when every pair matched inside its span
//! has equal types; across the two children that is a comparison of `μʳ`
//! of the left child, read backwards with brackets exchanged, against `μˡ`
//! of the right child, kept by a string-equality instance per node.
//!
//! Only insertions are handled directly. The word is stored doubled: user
//! position `p` owns slots `2p` (openers) and `2p + 1` (closers). Deleting a
//! bracket inserts its partner into the other slot, where the two cancel
//! and no longer show up in any ancestor; then both slots are cleared.

use crate::dyck::balance::BalancePair;
use crate::error::{Error, Result};
use crate::meter::WorkMeter;
use crate::ranked_set::RankedSet;
use crate::string_eq::{Adapter, Side, StringEq};
use crate::word::{Change, DynamicWord, Symbol};

#[derive(Debug, Clone)]
struct Node {
    lo: usize,
    mu_l: RankedSet,
    mu_r: RankedSet,
    well_typed: bool,
    eq: Option<StringEq>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    InsertL(usize),
    RemoveL(usize),
    InsertR(usize),
    RemoveR(usize),
}

#[derive(Debug, Clone)]
pub struct DkEngine {
    types: usize,
    cap: usize,
    height: usize,
    slots: Vec<Option<Symbol>>,
    nodes: Vec<Node>,
    word: DynamicWord,
    meter: WorkMeter,
}

pub fn is_opening(s: Symbol) -> bool {
    s.0.is_multiple_of(2)
}

impl DkEngine {
    pub fn new(n: usize, types: usize, meter: WorkMeter) -> Self {
        let cap = (2 * n).max(1).next_power_of_two();
        let height = cap.trailing_zeros() as usize;
        let mut nodes = Vec::with_capacity(2 * cap);
        for v in 0..2 * cap {
            let depth = if v == 0 { 0 } else { v.ilog2() as usize };
            let span = if v == 0 { 0 } else { cap >> depth };
            let lo = if v == 0 { 0 } else { (v - (1 << depth)) * span };
            let eq = (v > 0 && span > 1)
                .then(|| StringEq::with_adapter(span / 2, span / 2, Adapter::BRACKETS, meter.clone()));
            nodes.push(Node {
                lo,
                mu_l: RankedSet::new(span, meter.clone()),
                mu_r: RankedSet::new(span, meter.clone()),
                well_typed: true,
                eq,
            });
        }
        Self {
            types,
            cap,
            height,
            slots: vec![None; cap],
            nodes,
            word: DynamicWord::new(n),
            meter,
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn types(&self) -> usize {
        self.types
    }

    pub fn word(&self) -> &DynamicWord {
        &self.word
    }

    /// Sizes of the root's unmatched closers and openers.
    pub fn root_pair(&self) -> BalancePair {
        let root = &self.nodes[1];
        BalancePair::new(root.mu_l.elements().len() as u32, root.mu_r.elements().len() as u32)
    }

    pub fn member(&self) -> bool {
        self.meter.charge(3);
        let root = &self.nodes[1];
        root.well_typed && root.mu_l.is_empty() && root.mu_r.is_empty()
    }

    pub fn apply(&mut self, change: &Change) -> Result<()> {
        if let Change::Set { symbol, .. } = change {
            if symbol.0 as usize >= 2 * self.types {
                return Err(Error::UnknownSymbol(format!("#{}", symbol.0)));
            }
        }
        let old = self.word.apply(change)?;
        let p = change.pos();
        match (change, old) {
            (Change::Set { symbol, .. }, _) => {
                let slot = 2 * p + usize::from(!is_opening(*symbol));
                self.insert(slot, *symbol);
            }
            (Change::Reset { .. }, Some(s)) => {
                let own = 2 * p + usize::from(!is_opening(s));
                let partner = own ^ 1;
                self.insert(partner, Symbol(s.0 ^ 1));
                self.clear_pair(p);
            }
            (Change::Reset { .. }, None) => unreachable!("reset of an empty cell is rejected"),
        }
        Ok(())
    }

    pub fn set(&mut self, pos: usize, symbol: Symbol) -> Result<()> {
        self.apply(&Change::Set { pos, symbol })
    }

    pub fn reset(&mut self, pos: usize) -> Result<()> {
        self.apply(&Change::Reset { pos })
    }

    // absolute-position views of a node's sets

    fn size_of(set: &RankedSet) -> usize {
        set.size()
    }

    fn min_of(&self, v: usize, right: bool) -> Option<usize> {
        let n = &self.nodes[v];
        let s = if right { &n.mu_r } else { &n.mu_l };
        s.min().map(|x| x + n.lo)
    }

    fn max_of(&self, v: usize, right: bool) -> Option<usize> {
        let n = &self.nodes[v];
        let s = if right { &n.mu_r } else { &n.mu_l };
        s.max().map(|x| x + n.lo)
    }

    fn select_of(&self, v: usize, right: bool, k: usize) -> Option<usize> {
        let n = &self.nodes[v];
        let s = if right { &n.mu_r } else { &n.mu_l };
        s.select(k).map(|x| x + n.lo)
    }

    /// Position in `v`'s right part just left of `p`.
    fn pred_r(&self, v: usize, p: usize) -> Option<usize> {
        let n = &self.nodes[v];
        n.mu_r.pred(p - n.lo).expect("p inside span").map(|x| x + n.lo)
    }

    /// Position in `v`'s left part just right of `p`.
    fn succ_l(&self, v: usize, p: usize) -> Option<usize> {
        let n = &self.nodes[v];
        n.mu_l.succ(p - n.lo).expect("p inside span").map(|x| x + n.lo)
    }

    /// Case-2 witness at `x` for a closer inserted at `p`: `x` right-heavy
    /// and `p` strictly between its first crossing opener and that
    /// opener's partner. Returns the partner.
    fn close_witness(&self, x: usize, p: usize) -> Option<usize> {
        let (y1, y2) = (2 * x, 2 * x + 1);
        let a = Self::size_of(&self.nodes[y1].mu_r);
        let b = Self::size_of(&self.nodes[y2].mu_l);
        self.meter.charge(3);
        if a == 0 || a > b {
            return None;
        }
        let pm = self.min_of(y1, true)?;
        let pm2 = self.select_of(y2, false, a)?;
        (pm < p && p < pm2).then_some(pm2)
    }

    /// Mirror of [`Self::close_witness`] for an inserted opener.
    fn open_witness(&self, x: usize, p: usize) -> Option<usize> {
        let (y1, y2) = (2 * x, 2 * x + 1);
        let a = Self::size_of(&self.nodes[y1].mu_r);
        let b = Self::size_of(&self.nodes[y2].mu_l);
        self.meter.charge(3);
        if b == 0 || b > a {
            return None;
        }
        let qm = self.max_of(y2, false)?;
        let qm2 = self.select_of(y1, true, a - b + 1)?;
        (qm2 < p && p < qm).then_some(qm2)
    }

    fn insert(&mut self, p: usize, s: Symbol) {
        let open = is_opening(s);
        let leaf = self.cap + p;
        let h = self.height;
        // every decision reads the state before the change
        let witness: Vec<Option<usize>> = (0..=h)
            .map(|k| {
                if k == 0 {
                    None
                } else if open {
                    self.open_witness(leaf >> k, p)
                } else {
                    self.close_witness(leaf >> k, p)
                }
            })
            .collect();
        let mut ops = Vec::with_capacity(h + 1);
        ops.push(if open { Op::InsertR(p) } else { Op::InsertL(p) });
        for k in 1..=h {
            let x = leaf >> k;
            self.meter.charge(2);
            let op = if open {
                match self.max_of(x, false) {
                    Some(pl) if p < pl => Op::RemoveL(self.succ_l(x, p).expect("a closer lies right of p")),
                    _ => Op::InsertR(self.witness_below(&witness, k).unwrap_or(p)),
                }
            } else {
                match self.min_of(x, true) {
                    Some(pr) if p > pr => Op::RemoveR(self.pred_r(x, p).expect("an opener lies left of p")),
                    _ => Op::InsertL(self.witness_below(&witness, k).unwrap_or(p)),
                }
            };
            ops.push(op);
        }

        self.slots[p] = Some(s);
        for (k, &op) in ops.iter().enumerate() {
            let c = leaf >> k;
            self.apply_op(c, op);
        }
        self.refresh_bits(leaf);
    }

    /// The witness at level `k` itself, else the nearest one below it.
    fn witness_below(&self, witness: &[Option<usize>], k: usize) -> Option<usize> {
        let mut found = None;
        for j in (1..=k).rev() {
            self.meter.tick();
            if let Some(w) = witness[j] {
                found = Some(w);
                break;
            }
        }
        if cfg!(debug_assertions) {
            if let Some(w) = found {
                let first = (1..=k).rev().find(|&j| witness[j].is_some()).unwrap();
                debug_assert!(
                    first == k || witness[1..first].iter().all(|x| x.is_none()) || witness[first] == Some(w),
                    "several qualifying nodes below level {k}"
                );
            }
        }
        found
    }

    fn apply_op(&mut self, c: usize, op: Op) {
        let lo = self.nodes[c].lo;
        let node = &mut self.nodes[c];
        let res = match op {
            Op::InsertL(q) => node.mu_l.insert(q - lo),
            Op::RemoveL(q) => node.mu_l.delete(q - lo),
            Op::InsertR(q) => node.mu_r.insert(q - lo),
            Op::RemoveR(q) => node.mu_r.delete(q - lo),
        };
        res.expect("positions stay inside the node");
        if c == 1 {
            return;
        }
        // the parent compares μʳ of its left child with μˡ of its right child
        let x = c / 2;
        let left_child = c == 2 * x;
        let (side, q, insert) = match (op, left_child) {
            (Op::InsertR(q), true) => (Side::U, q, true),
            (Op::RemoveR(q), true) => (Side::U, q, false),
            (Op::InsertL(q), false) => (Side::V, q, true),
            (Op::RemoveL(q), false) => (Side::V, q, false),
            _ => return,
        };
        let sym = self.slots[q].expect("reduced-string positions are occupied");
        let eq = self.nodes[x].eq.as_mut().expect("inner node");
        let res = if insert { eq.set(side, q - lo, sym) } else { eq.reset(side, q - lo) };
        res.expect("string-equality mirrors the child sets");
    }

    fn refresh_bits(&mut self, leaf: usize) {
        for k in 1..=self.height {
            let x = leaf >> k;
            let eq = self.nodes[x].eq.as_ref().expect("inner node").equals();
            self.meter.charge(3);
            self.nodes[x].well_typed = self.nodes[2 * x].well_typed && self.nodes[2 * x + 1].well_typed && eq;
        }
    }

    /// Removes the cancelled pair in slots `2p`, `2p + 1`: only the two
    /// leaves and their parent's comparison see it.
    fn clear_pair(&mut self, p: usize) {
        let (o, c) = (2 * p, 2 * p + 1);
        let (lo_leaf, hi_leaf) = (self.cap + o, self.cap + c);
        self.nodes[lo_leaf].mu_r.delete(0).expect("leaf");
        self.nodes[hi_leaf].mu_l.delete(0).expect("leaf");
        let x = lo_leaf / 2;
        let eq = self.nodes[x].eq.as_mut().expect("inner node");
        eq.reset(Side::U, 0).expect("opener was compared");
        eq.reset(Side::V, 0).expect("closer was compared");
        self.slots[o] = None;
        self.slots[c] = None;
        self.refresh_bits(lo_leaf);
    }

    /// Unmetered recomputation of every node's reduced string and type bit.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for v in 1..2 * self.cap {
            let node = &self.nodes[v];
            let span = self.cap >> v.ilog2();
            let mut stack: Vec<usize> = Vec::new();
            let mut closers = Vec::new();
            let mut typed = true;
            for q in node.lo..node.lo + span {
                match self.slots[q] {
                    Some(s) if is_opening(s) => stack.push(q),
                    Some(s) => match stack.pop() {
                        Some(o) => typed &= self.slots[o] == Some(Symbol(s.0 ^ 1)),
                        None => closers.push(q - node.lo),
                    },
                    None => {}
                }
            }
            let openers: Vec<usize> = stack.iter().map(|q| q - node.lo).collect();
            if node.mu_l.elements() != closers || node.mu_r.elements() != openers {
                return Err(format!("node {v}: reduced string is stale"));
            }
            if node.well_typed != typed {
                return Err(format!("node {v}: type bit {} but expected {typed}", node.well_typed));
            }
            if let Some(eq) = &node.eq {
                eq.check_invariants().map_err(|e| format!("node {v}: {e}"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(t: u32, open: bool) -> Symbol {
        Symbol(2 * t + u32::from(!open))
    }

    #[test]
    fn nested_types() {
        let mut d = DkEngine::new(4, 2, WorkMeter::new());
        d.set(0, sym(0, true)).unwrap();
        d.set(1, sym(1, true)).unwrap();
        d.set(2, sym(1, false)).unwrap();
        d.set(3, sym(0, false)).unwrap();
        assert!(d.member());
        d.check_invariants().unwrap();
        d.reset(1).unwrap();
        d.check_invariants().unwrap();
        assert!(!d.member());
        d.reset(2).unwrap();
        assert!(d.member());
        d.check_invariants().unwrap();
    }

    #[test]
    fn mismatched_types() {
        let mut d = DkEngine::new(2, 2, WorkMeter::new());
        d.set(0, sym(0, true)).unwrap();
        d.set(1, sym(1, false)).unwrap();
        assert_eq!(d.root_pair(), BalancePair::EMPTY);
        assert!(!d.member());
        d.check_invariants().unwrap();
    }

    fn typed_member(cells: &[Option<Symbol>]) -> bool {
        let mut stack = Vec::new();
        for s in cells.iter().flatten() {
            if is_opening(*s) {
                stack.push(*s);
            } else if stack.pop() != Some(Symbol(s.0 ^ 1)) {
                return false;
            }
        }
        stack.is_empty()
    }

    #[test]
    fn random_changes_match_stack() {
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;
        for (seed, n, types) in [(1u64, 7usize, 2usize), (2, 16, 3), (3, 33, 2), (4, 64, 1)] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut d = DkEngine::new(n, types, WorkMeter::new());
            for step in 0..1500 {
                let p = rng.gen_range(0..n);
                if d.word().cells()[p].is_some() {
                    d.reset(p).unwrap();
                } else {
                    d.set(p, Symbol(rng.gen_range(0..2 * types as u32))).unwrap();
                }
                assert_eq!(d.member(), typed_member(d.word().cells()), "seed {seed} step {step}");
                if step % 97 == 0 {
                    d.check_invariants().unwrap();
                }
            }
            d.check_invariants().unwrap();
        }
    }

    #[test]
    fn unknown_symbol_rejected() {
        let mut d = DkEngine::new(2, 1, WorkMeter::new());
        assert!(d.set(0, Symbol(2)).is_err());
        assert!(d.reset(0).is_err());
    }
}
