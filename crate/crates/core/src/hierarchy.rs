//! Range products over a `t`-adic block hierarchy.
//!
//! Positions are written in base `t`. A level-`k` interval `[s, e)` has both
//! endpoints divisible by `t^k` and lies inside one `t^(k+1)`-block; the store
//! keeps the product of every such interval. A point update rewrites the
//! `O(t²)` intervals containing the point on each of the `h` levels, and any
//! range is the product of at most `2(h−1)+1` stored intervals.

use std::fmt::Debug;

use crate::algebra::{Element, FiniteMonoid};
use crate::error::{check_pos, Result};
use crate::meter::WorkMeter;

/// An associative operation with a neutral element.
pub trait Combine {
    type Value: Copy + Eq + Debug;

    fn identity(&self) -> Self::Value;
    fn combine(&self, a: Self::Value, b: Self::Value) -> Self::Value;
}

#[derive(Debug, Clone)]
pub struct MonoidCombine(pub FiniteMonoid);

impl Combine for MonoidCombine {
    type Value = Element;

    fn identity(&self) -> Element {
        Element::IDENTITY
    }

    fn combine(&self, a: Element, b: Element) -> Element {
        self.0.mul(a, b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HierarchyParams {
    /// Domain size requested by the caller.
    pub n: usize,
    pub t: usize,
    pub h: usize,
    /// `t^h`, the padded domain.
    pub padded: usize,
}

impl HierarchyParams {
    /// `t = ⌈n^(ε/2)⌉` (at least 2) and the least `h` with `t^h ≥ n`.
    pub fn new(n: usize, epsilon: f64) -> Self {
        let lambda = epsilon / 2.0;
        let t = ((n.max(1) as f64).powf(lambda) - 1e-9).ceil() as usize;
        Self::with_t(n, t)
    }

    pub fn with_t(n: usize, t: usize) -> Self {
        let t = t.max(2);
        let mut h = 1;
        let mut padded = t;
        while padded < n {
            padded *= t;
            h += 1;
        }
        Self { n, t, h, padded }
    }

    pub fn pow(&self, k: usize) -> usize {
        self.t.pow(k as u32)
    }

    /// Number of trailing zero digits of `j` in base `t`; `0` has height `h − 1`.
    pub fn height(&self, j: usize) -> usize {
        if j == 0 {
            return self.h - 1;
        }
        let mut k = 0;
        let mut x = j;
        while x.is_multiple_of(self.t) && k < self.h - 1 {
            x /= self.t;
            k += 1;
        }
        k
    }

    /// Largest position of height at least `k` that is `≤ j`; `j` itself at level 0.
    pub fn t_pred(&self, j: usize, k: usize) -> usize {
        let p = self.pow(k);
        j - j % p
    }

    /// Next position of height at least `k` after `j`; `j` itself at level 0.
    pub fn t_succ(&self, j: usize, k: usize) -> usize {
        if k == 0 {
            return j;
        }
        let p = self.pow(k);
        (j / p + 1) * p
    }
}

/// One stored factor of a range decomposition: `[start, end)` at `level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factor {
    pub level: usize,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone)]
pub struct HierarchyStore<C: Combine> {
    params: HierarchyParams,
    op: C,
    raw: Vec<C::Value>,
    /// `levels[k][block * tri + slot]`.
    levels: Vec<Vec<C::Value>>,
    tri: usize,
    meter: WorkMeter,
}

impl<C: Combine> HierarchyStore<C> {
    pub fn new(params: HierarchyParams, op: C, meter: WorkMeter) -> Self {
        let t = params.t;
        let tri = t * (t + 1) / 2;
        let id = op.identity();
        let levels = (0..params.h)
            .map(|k| vec![id; params.padded / params.pow(k + 1) * tri])
            .collect();
        Self {
            raw: vec![id; params.padded],
            params,
            op,
            levels,
            tri,
            meter,
        }
    }

    /// Builds the store over an initial sequence (not metered).
    pub fn from_values(params: HierarchyParams, op: C, values: &[C::Value], meter: WorkMeter) -> Self {
        let mut s = Self::new(params, op, meter);
        s.raw[..values.len()].copy_from_slice(values);
        let t = params.t;
        for k in 0..params.h {
            let step = params.pow(k);
            let blocks = params.padded / params.pow(k + 1);
            for blk in 0..blocks {
                let base = blk * step * t;
                for a in 0..t {
                    let mut acc = s.op.identity();
                    for b in a + 1..=t {
                        let child = base + (b - 1) * step;
                        let piece = if k == 0 {
                            s.raw[child]
                        } else {
                            s.levels[k - 1][(child / step) * s.tri + s.slot(0, t)]
                        };
                        acc = s.op.combine(acc, piece);
                        let idx = blk * s.tri + s.slot(a, b);
                        s.levels[k][idx] = acc;
                    }
                }
            }
        }
        s
    }

    pub fn params(&self) -> &HierarchyParams {
        &self.params
    }

    pub fn op(&self) -> &C {
        &self.op
    }

    pub fn len(&self) -> usize {
        self.params.n
    }

    pub fn is_empty(&self) -> bool {
        self.params.n == 0
    }

    pub fn meter(&self) -> &WorkMeter {
        &self.meter
    }

    pub fn get(&self, i: usize) -> Result<C::Value> {
        check_pos(i, self.params.n)?;
        Ok(self.raw[i])
    }

    pub fn values(&self) -> &[C::Value] {
        &self.raw[..self.params.n]
    }

    #[inline]
    fn slot(&self, a: usize, b: usize) -> usize {
        let t = self.params.t;
        a * t - a * a.saturating_sub(1) / 2 + (b - a - 1)
    }

    /// Stored product of the level-`k` interval `[s, e)`; identity when empty.
    pub fn lookup(&self, k: usize, s: usize, e: usize) -> C::Value {
        self.meter.charge(2);
        if s >= e {
            return self.op.identity();
        }
        let step = self.params.pow(k);
        let span = step * self.params.t;
        let block = s / span;
        let base = block * span;
        debug_assert!(e <= base + span && s.is_multiple_of(step) && e.is_multiple_of(step));
        let (a, b) = ((s - base) / step, (e - base) / step);
        self.meter.tick();
        self.levels[k][block * self.tri + self.slot(a, b)]
    }

    fn store(&mut self, k: usize, block: usize, a: usize, b: usize, v: C::Value) {
        let idx = block * self.tri + self.slot(a, b);
        self.levels[k][idx] = v;
        self.meter.tick();
    }

    fn mul(&self, a: C::Value, b: C::Value) -> C::Value {
        self.meter.tick();
        self.op.combine(a, b)
    }

    /// Replaces cell `i` and recomputes, level by level, every stored
    /// interval containing it.
    pub fn set(&mut self, i: usize, v: C::Value) -> Result<()> {
        check_pos(i, self.params.n)?;
        self.raw[i] = v;
        self.meter.tick();
        let t = self.params.t;
        for k in 0..self.params.h {
            let step = self.params.pow(k);
            let span = step * t;
            let block = i / span;
            let base = block * span;
            let d = (i - base) / step;
            let mid = if k == 0 {
                self.meter.tick();
                self.raw[i]
            } else {
                let cs = self.params.t_pred(i, k);
                self.lookup(k - 1, cs, cs + step)
            };
            for a in 0..=d {
                let left = self.lookup(k, base + a * step, base + d * step);
                let lm = self.mul(left, mid);
                for b in d + 1..=t {
                    let right = self.lookup(k, base + (d + 1) * step, base + b * step);
                    let val = self.mul(lm, right);
                    self.store(k, block, a, b, val);
                }
            }
        }
        Ok(())
    }

    /// The ordered stored intervals whose product is the inclusive range `[l, r]`.
    pub fn chain(&self, l: usize, r: usize) -> Result<Vec<Factor>> {
        check_pos(r, self.params.n)?;
        let mut out = Vec::with_capacity(2 * self.params.h);
        if l > r {
            return Ok(out);
        }
        let p = &self.params;
        let end = r + 1;
        let mut k = p.h - 1;
        for j in 0..p.h {
            self.meter.charge(2);
            if p.t_succ(l, j + 1) > p.t_pred(end, j + 1) {
                k = j;
                break;
            }
        }
        let mut push = |level, start, end| {
            if start < end {
                out.push(Factor { level, start, end });
            }
        };
        for j in 0..k {
            push(j, p.t_succ(l, j), p.t_succ(l, j + 1));
        }
        push(k, p.t_succ(l, k), p.t_pred(end, k));
        for j in (0..k).rev() {
            push(j, p.t_pred(end, j + 1), p.t_pred(end, j));
        }
        Ok(out)
    }

    /// Product of the inclusive range `[l, r]`; identity when `l > r`.
    pub fn range(&self, l: usize, r: usize) -> Result<C::Value> {
        let mut acc = self.op.identity();
        for f in self.chain(l, r)? {
            let v = self.lookup(f.level, f.start, f.end);
            acc = self.mul(acc, v);
        }
        Ok(acc)
    }

    /// Unmetered check that every stored interval equals the fold of its cells.
    pub fn check_consistency(&self) -> std::result::Result<(), String> {
        let p = &self.params;
        let t = p.t;
        for k in 0..p.h {
            let step = p.pow(k);
            for block in 0..p.padded / p.pow(k + 1) {
                let base = block * step * t;
                for a in 0..t {
                    for b in a + 1..=t {
                        let (s, e) = (base + a * step, base + b * step);
                        let want = self.raw[s..e]
                            .iter()
                            .fold(self.op.identity(), |acc, &x| self.op.combine(acc, x));
                        let got = self.levels[k][block * self.tri + self.slot(a, b)];
                        if got != want {
                            return Err(format!("level {k} [{s},{e}): stored {got:?}, fold {want:?}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Range products for an arbitrary finite monoid.
#[derive(Debug, Clone)]
pub struct HierarchyRangeEval {
    store: HierarchyStore<MonoidCombine>,
}

impl HierarchyRangeEval {
    pub fn new(monoid: FiniteMonoid, n: usize, epsilon: f64, meter: WorkMeter) -> Self {
        Self::with_params(monoid, HierarchyParams::new(n, epsilon), meter)
    }

    pub fn with_params(monoid: FiniteMonoid, params: HierarchyParams, meter: WorkMeter) -> Self {
        Self {
            store: HierarchyStore::new(params, MonoidCombine(monoid), meter),
        }
    }

    pub fn from_elements(monoid: FiniteMonoid, params: HierarchyParams, elements: &[Element], meter: WorkMeter) -> Self {
        Self {
            store: HierarchyStore::from_values(params, MonoidCombine(monoid), elements, meter),
        }
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        &self.store.op().0
    }

    pub fn store(&self) -> &HierarchyStore<MonoidCombine> {
        &self.store
    }

    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.store.is_empty()
    }

    pub fn get(&self, i: usize) -> Result<Element> {
        self.store.get(i)
    }

    pub fn set(&mut self, i: usize, m: Element) -> Result<()> {
        if m.index() >= self.monoid().size() {
            return Err(crate::Error::InvalidMonoid(format!("element {} out of range", m.0)));
        }
        self.store.set(i, m)
    }

    pub fn range(&self, l: usize, r: usize) -> Result<Element> {
        self.store.range(l, r)
    }
}
