//! Range products for group-free monoids in `O(log n)` work per operation,
//! by recursion over the four-case decomposition of the monoid.
//!
//! * trivial monoid: nothing to store;
//! * `M − {1} = {σ,…,σ^k}`: sum the exponents of the first `k` non-identity
//!   cells of the range;
//! * left-zero: the first non-identity cell of the range decides;
//! * `M = V ∪ T`: the sequence is cut into blocks of `T−{1}` elements and
//!   blocks of the rest. Three sub-evaluators hold `t` (the `T−{1}` cells),
//!   `v` (the others) and `u`, which stores at the last cell of every
//!   `T−{1}`-block (a *switching position*) the product since the previous
//!   switching position. Because `T−{1}` is a left ideal those products lie
//!   in `T`.

use crate::algebra::{kr_decompose, Element, FiniteMonoid, KrDecomposition, Submonoid};
use crate::error::{check_pos, Error, Result};
use crate::meter::WorkMeter;
use crate::ranked_set::RankedSet;

#[derive(Debug, Clone)]
pub struct StarFreeEval {
    monoid: FiniteMonoid,
    n: usize,
    cells: Vec<Element>,
    meter: WorkMeter,
    node: Node,
}

#[derive(Debug, Clone)]
enum Node {
    Trivial,
    Cyclic {
        generator: Element,
        k: usize,
        /// exponent of each element as a power of the generator
        exponent: Vec<usize>,
        /// `powers[s] = σ^s` for `s ≤ k`
        powers: Vec<Element>,
        nonid: RankedSet,
    },
    LeftZero {
        nonid: RankedSet,
    },
    Split(Box<Split>),
}

#[derive(Debug, Clone)]
struct Split {
    t_sub: Submonoid,
    v_sub: Submonoid,
    /// membership in `T − {1}`, indexed by element
    in_t: Vec<bool>,
    t: StarFreeEval,
    v: StarFreeEval,
    u: StarFreeEval,
    switches: RankedSet,
}

impl StarFreeEval {
    /// An all-identity sequence of length `n`.
    pub fn new(monoid: FiniteMonoid, n: usize, meter: WorkMeter) -> Result<Self> {
        let dec = kr_decompose(&monoid)?;
        Ok(Self::with_decomposition(monoid, &dec, n, meter))
    }

    pub fn with_decomposition(monoid: FiniteMonoid, dec: &KrDecomposition, n: usize, meter: WorkMeter) -> Self {
        let node = match dec {
            KrDecomposition::Trivial => Node::Trivial,
            KrDecomposition::Cyclic { generator, threshold } => {
                let k = *threshold;
                let powers: Vec<Element> = (0..=k).map(|s| monoid.pow(*generator, s)).collect();
                let mut exponent = vec![0; monoid.size()];
                for s in (1..=k).rev() {
                    exponent[powers[s].index()] = s;
                }
                Node::Cyclic {
                    generator: *generator,
                    k,
                    exponent,
                    powers,
                    nonid: RankedSet::new(n, meter.clone()),
                }
            }
            KrDecomposition::LeftZero => Node::LeftZero {
                nonid: RankedSet::new(n, meter.clone()),
            },
            KrDecomposition::Split { t, v } => {
                let mut in_t = vec![false; monoid.size()];
                for &x in t.sub.embedding.iter().skip(1) {
                    in_t[x.index()] = true;
                }
                let sub = |p: &crate::algebra::KrPart| {
                    StarFreeEval::with_decomposition(p.sub.monoid.clone(), &p.decomposition, n, meter.clone())
                };
                Node::Split(Box::new(Split {
                    t: sub(t),
                    u: sub(t),
                    v: sub(v),
                    t_sub: t.sub.clone(),
                    v_sub: v.sub.clone(),
                    in_t,
                    switches: RankedSet::new(n, meter.clone()),
                }))
            }
        };
        Self {
            monoid,
            n,
            cells: vec![Element::IDENTITY; n],
            meter,
            node,
        }
    }

    /// Builds an evaluator and loads `elements` into it with ordinary sets.
    pub fn from_elements(monoid: FiniteMonoid, elements: &[Element], meter: WorkMeter) -> Result<Self> {
        let mut ev = Self::new(monoid, elements.len(), meter)?;
        for (i, &x) in elements.iter().enumerate() {
            if !x.is_identity() {
                ev.set(i, x)?;
            }
        }
        Ok(ev)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }

    pub fn meter(&self) -> &WorkMeter {
        &self.meter
    }

    /// `A`, `B`, `C` or `D`.
    pub fn case_tag(&self) -> char {
        match self.node {
            Node::Trivial => 'A',
            Node::Cyclic { .. } => 'B',
            Node::LeftZero { .. } => 'C',
            Node::Split(_) => 'D',
        }
    }

    pub fn get(&self, i: usize) -> Result<Element> {
        check_pos(i, self.n)?;
        Ok(self.cells[i])
    }

    pub fn set(&mut self, i: usize, x: Element) -> Result<()> {
        check_pos(i, self.n)?;
        if x.index() >= self.monoid.size() {
            return Err(Error::InvalidMonoid(format!("element {} out of range", x.0)));
        }
        let old = self.cells[i];
        self.cells[i] = x;
        self.meter.charge(2);
        match &mut self.node {
            Node::Trivial => {}
            Node::Cyclic { nonid, .. } | Node::LeftZero { nonid } => {
                if old.is_identity() != x.is_identity() {
                    if x.is_identity() {
                        nonid.delete(i)?;
                    } else {
                        nonid.insert(i)?;
                    }
                }
            }
            Node::Split(s) => s.set(&self.monoid, &self.cells, i, x)?,
        }
        Ok(())
    }

    /// Product of the inclusive range `[l, r]`; identity when `l > r`.
    pub fn range(&self, l: usize, r: usize) -> Result<Element> {
        if l > r {
            return Ok(Element::IDENTITY);
        }
        check_pos(r, self.n)?;
        match &self.node {
            Node::Trivial => Ok(Element::IDENTITY),
            Node::Cyclic { k, exponent, powers, nonid, .. } => {
                let mut s = 0;
                let mut steps = 0;
                let mut p = nonid.next_at_or_after(l)?;
                while let Some(q) = p.filter(|&q| q <= r) {
                    if steps == *k {
                        break;
                    }
                    self.meter.charge(3);
                    s += exponent[self.cells[q].index()];
                    steps += 1;
                    p = nonid.succ(q)?;
                }
                self.meter.tick();
                Ok(powers[s.min(*k)])
            }
            Node::LeftZero { nonid } => {
                self.meter.charge(2);
                Ok(match nonid.next_at_or_after(l)? {
                    Some(q) if q <= r => self.cells[q],
                    _ => Element::IDENTITY,
                })
            }
            Node::Split(s) => s.range(&self.monoid, &self.meter, l, r),
        }
    }

    /// Switching positions of a split node.
    pub fn switching_positions(&self) -> Option<Vec<usize>> {
        match &self.node {
            Node::Split(s) => Some(s.switches.elements()),
            _ => None,
        }
    }

    /// The stored `u` sequence of a split node, in this monoid's indices.
    pub fn u_values(&self) -> Option<Vec<Element>> {
        match &self.node {
            Node::Split(s) => Some(s.u.cells.iter().map(|&x| s.t_sub.embed(x)).collect()),
            _ => None,
        }
    }

    /// The `(T, V, t, v, u)` sub-evaluators of a split node, for inspection.
    pub fn split_parts(&self) -> Option<SplitView<'_>> {
        match &self.node {
            Node::Split(s) => Some(SplitView {
                t_embedding: &s.t_sub.embedding,
                v_embedding: &s.v_sub.embedding,
                t: &s.t,
                v: &s.v,
                u: &s.u,
            }),
            _ => None,
        }
    }

    /// Generator and threshold of a cyclic node.
    pub fn cyclic_parameters(&self) -> Option<(Element, usize)> {
        match &self.node {
            Node::Cyclic { generator, k, .. } => Some((*generator, *k)),
            _ => None,
        }
    }

    /// Unmetered recomputation of every stored sequence from its definition.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let m = &self.monoid;
        match &self.node {
            Node::Trivial => {}
            Node::Cyclic { nonid, .. } | Node::LeftZero { nonid } => {
                let want: Vec<usize> = (0..self.n).filter(|&i| !self.cells[i].is_identity()).collect();
                if nonid.elements() != want {
                    return Err("non-identity position set is stale".into());
                }
                nonid.check_invariants()?;
            }
            Node::Split(s) => {
                let in_t = |x: Element| s.in_t[x.index()];
                for i in 0..self.n {
                    let x = self.cells[i];
                    let want_t = if in_t(x) { x } else { Element::IDENTITY };
                    let want_v = if in_t(x) { Element::IDENTITY } else { x };
                    if s.t_sub.embed(s.t.cells[i]) != want_t || s.v_sub.embed(s.v.cells[i]) != want_v {
                        return Err(format!("t/v stale at {i}"));
                    }
                }
                let want_k: Vec<usize> = (0..self.n)
                    .filter(|&i| in_t(self.cells[i]) && (i + 1 == self.n || !in_t(self.cells[i + 1])))
                    .collect();
                if s.switches.elements() != want_k {
                    return Err(format!("switching positions {:?}, expected {want_k:?}", s.switches.elements()));
                }
                let mut start = 0;
                for i in 0..self.n {
                    let want = if want_k.contains(&i) {
                        let p = m.fold(self.cells[start..=i].iter().copied());
                        start = i + 1;
                        p
                    } else {
                        Element::IDENTITY
                    };
                    if s.t_sub.embed(s.u.cells[i]) != want {
                        return Err(format!("u stale at {i}"));
                    }
                }
                s.t.check_invariants()?;
                s.v.check_invariants()?;
                s.u.check_invariants()?;
            }
        }
        Ok(())
    }
}

pub struct SplitView<'a> {
    pub t_embedding: &'a [Element],
    pub v_embedding: &'a [Element],
    pub t: &'a StarFreeEval,
    pub v: &'a StarFreeEval,
    pub u: &'a StarFreeEval,
}

impl Split {
    fn is_t(&self, x: Element) -> bool {
        self.in_t[x.index()]
    }

    fn switch_at(&self, cells: &[Element], i: usize) -> bool {
        self.is_t(cells[i]) && (i + 1 == cells.len() || !self.is_t(cells[i + 1]))
    }

    /// `v(a..=b) · t(a..=b)` in the parent monoid.
    fn vt(&self, m: &FiniteMonoid, meter: &WorkMeter, a: usize, b: usize) -> Result<Element> {
        let v = self.v_sub.embed(self.v.range(a, b)?);
        let t = self.t_sub.embed(self.t.range(a, b)?);
        meter.charge(3);
        Ok(m.mul(v, t))
    }

    fn range(&self, m: &FiniteMonoid, meter: &WorkMeter, l: usize, r: usize) -> Result<Element> {
        meter.charge(2);
        let k1 = self.switches.next_at_or_after(l)?;
        match k1 {
            Some(k1) if k1 < r => {
                let kq = self.switches.pred(r)?.expect("k1 < r is a smaller switch");
                let head = self.vt(m, meter, l, k1)?;
                let mid = self.t_sub.embed(self.u.range(k1 + 1, kq)?);
                let tail = self.vt(m, meter, kq + 1, r)?;
                meter.charge(2);
                Ok(m.mul(m.mul(head, mid), tail))
            }
            _ => self.vt(m, meter, l, r),
        }
    }

    /// `cells` already holds the new value at `p`.
    fn set(&mut self, m: &FiniteMonoid, cells: &[Element], p: usize, x: Element) -> Result<()> {
        let meter = self.switches.meter().clone();
        let (tx, vx) = if self.is_t(x) {
            (x, Element::IDENTITY)
        } else {
            (Element::IDENTITY, x)
        };
        self.t.set(p, self.t_sub.restrict(tx).expect("T−{1} element lies in T"))?;
        self.v.set(p, self.v_sub.restrict(vx).expect("element outside T−{1} lies in V"))?;

        let lo = p.saturating_sub(1);
        for q in lo..=p {
            meter.charge(4);
            let want = self.switch_at(cells, q);
            if want != self.switches.contains(q) {
                if want {
                    self.switches.insert(q)?;
                } else {
                    self.switches.delete(q)?;
                }
            }
        }
        for q in lo..=p {
            if self.switches.contains(q) {
                self.refresh_u(m, &meter, q)?;
            } else if !self.u.cells[q].is_identity() {
                self.u.set(q, Element::IDENTITY)?;
            }
        }
        if let Some(k) = self.switches.succ(p)? {
            self.refresh_u(m, &meter, k)?;
        }
        Ok(())
    }

    /// Recomputes `u` at switching position `q` from `t` and `v`.
    fn refresh_u(&mut self, m: &FiniteMonoid, meter: &WorkMeter, q: usize) -> Result<()> {
        let start = self.switches.pred(q)?.map_or(0, |j| j + 1);
        let prod = self.vt(m, meter, start, q)?;
        let ux = self.t_sub.restrict(prod).expect("block products lie in T");
        self.u.set(q, ux)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::example_monoid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn parse(m: &FiniteMonoid, s: &str) -> Vec<Element> {
        s.chars()
            .map(|c| match c {
                'Q' => m.element("A2").unwrap(),
                c => m.element(&c.to_string()).unwrap(),
            })
            .collect()
    }

    #[test]
    fn example_sequence_query() {
        let m = example_monoid();
        let seq = parse(&m, "AA1AABBA11A1AABAA1B11A1B1A1A11BB");
        let ev = StarFreeEval::from_elements(m.clone(), &seq, WorkMeter::new()).unwrap();
        ev.check_invariants().unwrap();
        assert_eq!(ev.case_tag(), 'D');
        assert_eq!(ev.switching_positions().unwrap(), [6, 14, 18, 23, 31]);
        assert_eq!(ev.range(1, 26).unwrap(), m.element("E").unwrap());
        let u = ev.u_values().unwrap();
        let names: Vec<String> = [6, 14, 18, 23].iter().map(|&i| m.name(u[i])).collect();
        assert_eq!(names, ["E", "E", "E", "D"]);
    }

    #[test]
    fn single_cells() {
        let m = example_monoid();
        let seq = parse(&m, "AQBDE1AAB1");
        let ev = StarFreeEval::from_elements(m, &seq, WorkMeter::new()).unwrap();
        for (i, &x) in seq.iter().enumerate() {
            assert_eq!(ev.range(i, i).unwrap(), x);
        }
    }

    #[test]
    fn random_ops_match_fold() {
        let m = example_monoid();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 40;
        let mut ev = StarFreeEval::new(m.clone(), n, WorkMeter::new()).unwrap();
        let mut cells = vec![Element::IDENTITY; n];
        for step in 0..2000 {
            let i = rng.gen_range(0..n);
            let x = Element(rng.gen_range(0..6));
            ev.set(i, x).unwrap();
            cells[i] = x;
            let l = rng.gen_range(0..n);
            let r = rng.gen_range(l..n);
            assert_eq!(ev.range(l, r).unwrap(), m.fold(cells[l..=r].iter().copied()), "step {step}");
            if step % 50 == 0 {
                ev.check_invariants().unwrap();
            }
        }
    }

    #[test]
    fn group_is_rejected() {
        assert_eq!(
            StarFreeEval::new(FiniteMonoid::cyclic_group(2), 4, WorkMeter::new()).unwrap_err(),
            Error::NotGroupFree
        );
        let t = StarFreeEval::new(FiniteMonoid::trivial(), 4, WorkMeter::new()).unwrap();
        assert_eq!(t.case_tag(), 'A');
        assert_eq!(t.range(0, 3).unwrap(), Element::IDENTITY);
    }
}
