//! Dynamic string equality: two words of the same domain size, compared
//! after dropping empty cells.
//!
//! Each side keeps the rank of every occupied position (its index among the
//! occupied positions) and the inverse map. A change shifts the ranks above
//! it, which is `O(n)` work, and the number of rank-aligned mismatches is
//! recounted.

use crate::error::{check_pos, Error, Result};
use crate::meter::WorkMeter;
use crate::ranked_set::RankedSet;
use crate::word::{Letter, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    U,
    V,
}

/// How the `u` side is read before comparing with `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Adapter {
    /// Read `u` from its last occupied position backwards.
    pub reversed: bool,
    /// Exchange each bracket with its partner (`2t ↔ 2t+1`).
    pub flip: bool,
    /// Compare only the shorter prefix; surplus symbols are ignored.
    pub truncate: bool,
}

impl Adapter {
    /// The boundary comparison used by the typed Dyck engine.
    pub const BRACKETS: Adapter = Adapter {
        reversed: true,
        flip: true,
        truncate: true,
    };
}

#[derive(Debug, Clone)]
struct RankMap {
    cells: Vec<Letter>,
    occupied: RankedSet,
    /// 1-based rank of each occupied position, 0 elsewhere.
    rank: Vec<u32>,
    /// `inv[m]` is the position of rank `m`; slot 0 unused.
    inv: Vec<u32>,
    count: usize,
}

impl RankMap {
    fn new(n: usize, meter: WorkMeter) -> Self {
        Self {
            cells: vec![None; n],
            occupied: RankedSet::new(n, meter),
            rank: vec![0; n],
            inv: vec![0; n + 1],
            count: 0,
        }
    }

    fn insert(&mut self, p: usize, s: Symbol, meter: &WorkMeter) -> Result<()> {
        let r = match self.occupied.pred(p)? {
            Some(q) => self.rank[q] as usize + 1,
            None => 1,
        };
        for m in (r..=self.count).rev() {
            let q = self.inv[m];
            self.inv[m + 1] = q;
            self.rank[q as usize] += 1;
            meter.charge(3);
        }
        self.inv[r] = p as u32;
        self.rank[p] = r as u32;
        self.cells[p] = Some(s);
        self.count += 1;
        meter.charge(3);
        self.occupied.insert(p)
    }

    fn remove(&mut self, p: usize, meter: &WorkMeter) -> Result<()> {
        let r = self.rank[p] as usize;
        for m in r..self.count {
            let q = self.inv[m + 1];
            self.inv[m] = q;
            self.rank[q as usize] -= 1;
            meter.charge(3);
        }
        self.rank[p] = 0;
        self.cells[p] = None;
        self.count -= 1;
        meter.charge(3);
        self.occupied.delete(p)
    }

    fn at_rank(&self, m: usize) -> Symbol {
        self.cells[self.inv[m] as usize].expect("ranked positions are occupied")
    }

    fn word(&self) -> Vec<Symbol> {
        self.cells.iter().flatten().copied().collect()
    }
}

#[derive(Debug, Clone)]
pub struct StringEq {
    u: RankMap,
    v: RankMap,
    adapter: Adapter,
    mismatches: usize,
    meter: WorkMeter,
}

impl StringEq {
    pub fn new(n: usize, meter: WorkMeter) -> Self {
        Self::with_adapter(n, n, Adapter::default(), meter)
    }

    /// Sides may have different domain sizes.
    pub fn with_adapter(len_u: usize, len_v: usize, adapter: Adapter, meter: WorkMeter) -> Self {
        Self {
            u: RankMap::new(len_u, meter.clone()),
            v: RankMap::new(len_v, meter.clone()),
            adapter,
            mismatches: 0,
            meter,
        }
    }

    pub fn adapter(&self) -> Adapter {
        self.adapter
    }

    fn side(&mut self, side: Side) -> &mut RankMap {
        match side {
            Side::U => &mut self.u,
            Side::V => &mut self.v,
        }
    }

    pub fn get(&self, side: Side, pos: usize) -> Result<Letter> {
        let map = match side {
            Side::U => &self.u,
            Side::V => &self.v,
        };
        check_pos(pos, map.cells.len())?;
        Ok(map.cells[pos])
    }

    pub fn set(&mut self, side: Side, pos: usize, symbol: Symbol) -> Result<()> {
        if self.get(side, pos)?.is_some() {
            return Err(Error::IllegalChange {
                pos,
                reason: "cell is already occupied",
            });
        }
        let meter = self.meter.clone();
        self.side(side).insert(pos, symbol, &meter)?;
        self.recount();
        Ok(())
    }

    pub fn reset(&mut self, side: Side, pos: usize) -> Result<()> {
        if self.get(side, pos)?.is_none() {
            return Err(Error::IllegalChange {
                pos,
                reason: "cell is already empty",
            });
        }
        let meter = self.meter.clone();
        self.side(side).remove(pos, &meter)?;
        self.recount();
        Ok(())
    }

    /// Symbol of `u` aligned with rank `m` of `v`, after the adapter.
    fn u_aligned(&self, m: usize) -> Symbol {
        let r = if self.adapter.reversed { self.u.count - m + 1 } else { m };
        let s = self.u.at_rank(r);
        if self.adapter.flip {
            Symbol(s.0 ^ 1)
        } else {
            s
        }
    }

    fn recount(&mut self) {
        let len = self.u.count.min(self.v.count);
        let mut bad = 0;
        for m in 1..=len {
            if self.u_aligned(m) != self.v.at_rank(m) {
                bad += 1;
            }
            self.meter.charge(4);
        }
        self.mismatches = bad;
    }

    pub fn equals(&self) -> bool {
        self.meter.charge(2);
        self.mismatches == 0 && (self.adapter.truncate || self.u.count == self.v.count)
    }

    pub fn count(&self, side: Side) -> usize {
        match side {
            Side::U => self.u.count,
            Side::V => self.v.count,
        }
    }

    pub fn word(&self, side: Side) -> Vec<Symbol> {
        match side {
            Side::U => self.u.word(),
            Side::V => self.v.word(),
        }
    }

    /// Unmetered check of the rank bijections and the mismatch counter.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for (name, map) in [("u", &self.u), ("v", &self.v)] {
            let occ: Vec<usize> = (0..map.cells.len()).filter(|&i| map.cells[i].is_some()).collect();
            if occ.len() != map.count {
                return Err(format!("{name}: count {} but {} occupied", map.count, occ.len()));
            }
            for (k, &p) in occ.iter().enumerate() {
                if map.rank[p] as usize != k + 1 || map.inv[k + 1] as usize != p {
                    return Err(format!("{name}: rank maps broken at {p}"));
                }
            }
        }
        let len = self.u.count.min(self.v.count);
        let want = (1..=len).filter(|&m| self.u_aligned(m) != self.v.at_rank(m)).count();
        if want != self.mismatches {
            return Err(format!("mismatch counter {} but {want}", self.mismatches));
        }
        Ok(())
    }
}

/// `⟨_{s₁[0]} … ⟨_{s₁[n−1]} ⟩_{s₂[n−1]} … ⟩_{s₂[0]}` over the bracket
/// alphabet where letter `a` opens as `2a` and closes as `2a + 1`. The
/// result is balanced exactly when `s₁ = s₂`.
pub fn reduce_to_dyck(s1: &[Symbol], s2: &[Symbol], k: usize) -> Result<Vec<Symbol>> {
    if s1.len() != s2.len() {
        return Err(Error::LengthMismatch {
            left: s1.len(),
            right: s2.len(),
        });
    }
    if let Some(bad) = s1.iter().chain(s2).find(|s| s.0 as usize >= k) {
        return Err(Error::UnknownSymbol(format!("#{}", bad.0)));
    }
    Ok(s1
        .iter()
        .map(|s| Symbol(2 * s.0))
        .chain(s2.iter().rev().map(|s| Symbol(2 * s.0 + 1)))
        .collect())
}
