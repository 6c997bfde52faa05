//! Membership in the one-type Dyck language. Every node of a complete
//! binary tree over the positions stores the balance pair of its span; a
//! change updates all ancestors at once, each one locating the nearest
//! inducing node between itself and the leaf.

use crate::dyck::balance::{BalancePair, ChangeKind, Effect};
use crate::error::{Error, Result};
use crate::meter::WorkMeter;
use crate::word::{Change, DynamicWord, Symbol};

pub const OPEN: Symbol = Symbol(0);
pub const CLOSE: Symbol = Symbol(1);

#[derive(Debug, Clone)]
pub struct D1Engine {
    cap: usize,
    height: usize,
    pairs: Vec<BalancePair>,
    word: DynamicWord,
    meter: WorkMeter,
}

impl D1Engine {
    pub fn new(n: usize, meter: WorkMeter) -> Self {
        let cap = n.max(1).next_power_of_two();
        Self {
            cap,
            height: cap.trailing_zeros() as usize,
            pairs: vec![BalancePair::EMPTY; 2 * cap],
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

    pub fn word(&self) -> &DynamicWord {
        &self.word
    }

    pub fn root(&self) -> BalancePair {
        self.pairs[1]
    }

    pub fn member(&self) -> bool {
        self.meter.charge(2);
        self.pairs[1].is_balanced()
    }

    pub fn apply(&mut self, change: &Change) -> Result<()> {
        if let Change::Set { symbol, .. } = change {
            if *symbol != OPEN && *symbol != CLOSE {
                return Err(Error::UnknownSymbol(format!("#{}", symbol.0)));
            }
        }
        let old = self.word.apply(change)?;
        let kind = match (change, old) {
            (Change::Set { symbol, .. }, _) if *symbol == CLOSE => ChangeKind::InsertClose,
            (Change::Set { .. }, _) => ChangeKind::InsertOpen,
            (Change::Reset { .. }, Some(s)) if s == CLOSE => ChangeKind::DeleteClose,
            (Change::Reset { .. }, _) => ChangeKind::DeleteOpen,
        };
        self.update(change.pos(), kind);
        Ok(())
    }

    pub fn set(&mut self, pos: usize, symbol: Symbol) -> Result<()> {
        self.apply(&Change::Set { pos, symbol })
    }

    pub fn reset(&mut self, pos: usize) -> Result<()> {
        self.apply(&Change::Reset { pos })
    }

    fn update(&mut self, p: usize, kind: ChangeKind) {
        let table = kind.table();
        let leaf = self.cap + p;
        let h = self.height;
        // inducing flags against the old pairs, one per ancestor
        let mut ind: Vec<Option<Effect>> = vec![None; h + 1];
        for (i, slot) in ind.iter_mut().enumerate().skip(1) {
            let x = leaf >> i;
            let c = leaf >> (i - 1);
            *slot = table.induced(c == 2 * x, self.pairs[2 * x].r, self.pairs[2 * x + 1].l);
            self.meter.charge(6);
        }
        let mut fresh = Vec::with_capacity(h + 1);
        for k in 0..=h {
            let x = leaf >> k;
            let mut effect = table.leaf;
            if k > 0 {
                // the unique inducing i ≤ k with no inducing j in (i, k]
                for i in 1..=k {
                    self.meter.tick();
                    let Some(e) = ind[i] else { continue };
                    let mut top = true;
                    for flag in &ind[i + 1..=k] {
                        self.meter.tick();
                        top &= flag.is_none();
                    }
                    if top {
                        effect = e;
                    }
                }
            }
            self.meter.charge(3);
            fresh.push(self.pairs[x].apply(effect));
        }
        for (k, v) in fresh.into_iter().enumerate() {
            self.pairs[leaf >> k] = v;
            self.meter.tick();
        }
    }

    /// Unmetered check that every node holds the fold of its span.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for v in (1..2 * self.cap).rev() {
            let want = if v >= self.cap {
                match self.word.cells().get(v - self.cap).copied().flatten() {
                    Some(s) if s == OPEN => BalancePair::OPEN,
                    Some(_) => BalancePair::CLOSE,
                    None => BalancePair::EMPTY,
                }
            } else {
                self.pairs[2 * v].compose(self.pairs[2 * v + 1])
            };
            if self.pairs[v] != want {
                return Err(format!("node {v}: {:?}, expected {want:?}", self.pairs[v]));
            }
        }
        Ok(())
    }
}
