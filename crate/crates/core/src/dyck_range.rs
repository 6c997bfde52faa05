//! Range membership for Dyck languages on the special-interval hierarchy.
//!
//! The hierarchy stores balance pairs instead of monoid elements, so a
//! change costs what it costs there. `range1` folds the query chain; the
//! typed query additionally locates every opener's partner by descending
//! through the stored intervals and compares types.

use crate::dyck::balance::{BalanceCombine, BalancePair};
use crate::dyck::dk::is_opening;
use crate::error::{check_pos, Error, Result};
use crate::hierarchy::{HierarchyParams, HierarchyStore};
use crate::meter::WorkMeter;
use crate::word::{Change, DynamicWord, Letter, Symbol};

#[derive(Debug, Clone)]
pub struct DyckRange {
    types: usize,
    store: HierarchyStore<BalanceCombine>,
    word: DynamicWord,
    meter: WorkMeter,
}

fn pair_of(letter: Letter) -> BalancePair {
    match letter {
        None => BalancePair::EMPTY,
        Some(s) if is_opening(s) => BalancePair::OPEN,
        Some(_) => BalancePair::CLOSE,
    }
}

impl DyckRange {
    pub fn new(n: usize, types: usize, epsilon: f64, meter: WorkMeter) -> Self {
        Self::with_params(HierarchyParams::new(n, epsilon), types, meter)
    }

    pub fn with_params(params: HierarchyParams, types: usize, meter: WorkMeter) -> Self {
        Self {
            types,
            store: HierarchyStore::new(params, BalanceCombine, meter.clone()),
            word: DynamicWord::new(params.n),
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

    pub fn store(&self) -> &HierarchyStore<BalanceCombine> {
        &self.store
    }

    pub fn apply(&mut self, change: &Change) -> Result<()> {
        if let Change::Set { symbol, .. } = change {
            if symbol.0 as usize >= 2 * self.types {
                return Err(Error::UnknownSymbol(format!("#{}", symbol.0)));
            }
        }
        self.word.apply(change)?;
        let p = change.pos();
        self.store.set(p, pair_of(self.word.cells()[p]))
    }

    pub fn set(&mut self, pos: usize, symbol: Symbol) -> Result<()> {
        self.apply(&Change::Set { pos, symbol })
    }

    pub fn reset(&mut self, pos: usize) -> Result<()> {
        self.apply(&Change::Reset { pos })
    }

    /// Balance pair of `word[p, q]`.
    pub fn balance(&self, p: usize, q: usize) -> Result<BalancePair> {
        self.store.range(p, q)
    }

    /// Whether `word[p, q]` is balanced, ignoring bracket types.
    pub fn range1(&self, p: usize, q: usize) -> Result<bool> {
        Ok(self.balance(p, q)?.is_balanced())
    }

    /// Position of the bracket closing the opener at `i` inside `word[p, q]`.
    pub fn find_match(&self, i: usize, p: usize, q: usize) -> Result<Option<usize>> {
        check_pos(q, self.len())?;
        if i < p || i > q {
            return Err(Error::OutOfRange { pos: i, len: q + 1 });
        }
        match self.word.cells()[i] {
            Some(s) if is_opening(s) => {}
            _ => return Err(Error::NotAnOpening { pos: i }),
        }
        if i == q {
            return Ok(None);
        }
        // openers still waiting for a partner, the one at `i` deepest
        let mut pending = 1u32;
        for f in self.store.chain(i + 1, q)? {
            let v = self.store.lookup(f.level, f.start, f.end);
            self.meter.tick();
            if v.l >= pending {
                return Ok(Some(self.descend(f.level, f.start, f.end, pending)));
            }
            pending = pending - v.l + v.r;
        }
        Ok(None)
    }

    /// Finds, inside the stored level-`k` interval `[s, e)` that absorbs
    /// `pending` openers, the closer consuming the last of them.
    fn descend(&self, mut k: usize, mut s: usize, mut e: usize, mut pending: u32) -> usize {
        let t = self.store.params().t;
        loop {
            let step = self.store.params().pow(k);
            let mut c = s;
            let mut found = None;
            while c < e {
                let v = if k == 0 {
                    self.meter.tick();
                    self.store.values()[c]
                } else {
                    self.store.lookup(k - 1, c, c + step)
                };
                self.meter.tick();
                if v.l >= pending {
                    found = Some(c);
                    break;
                }
                pending = pending - v.l + v.r;
                c += step;
            }
            let c = found.expect("the interval absorbs the pending openers");
            debug_assert!((e - s) / step <= t);
            if k == 0 {
                return c;
            }
            k -= 1;
            s = c;
            e = c + step;
        }
    }

    /// Whether `word[p, q]` belongs to the typed Dyck language.
    pub fn rangek(&self, p: usize, q: usize) -> Result<bool> {
        if !self.range1(p, q)? {
            return Ok(false);
        }
        for i in p..=q {
            self.meter.tick();
            let Some(s) = self.word.cells()[i] else { continue };
            if !is_opening(s) {
                continue;
            }
            let j = self.find_match(i, p, q)?.expect("balanced ranges match every opener");
            if self.word.cells()[j] != Some(Symbol(s.0 ^ 1)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn check_consistency(&self) -> std::result::Result<(), String> {
        self.store.check_consistency()
    }
}
