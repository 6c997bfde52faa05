use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Index of a monoid element. Element `0` is always the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Element(pub u32);

impl Element {
    pub const IDENTITY: Element = Element(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

/// A finite monoid given by its multiplication table. `x * y` means the
/// effect of `x`'s string followed by `y`'s string.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteMonoid {
    size: usize,
    table: Vec<u32>,
    names: Option<Vec<String>>,
}

impl FiniteMonoid {
    /// Validates closure, identity and associativity (exhaustively).
    pub fn from_table(table: Vec<Vec<u32>>, names: Option<Vec<String>>) -> Result<Self> {
        let size = table.len();
        if size == 0 {
            return Err(Error::InvalidMonoid("empty table".into()));
        }
        if let Some(ns) = &names {
            if ns.len() != size {
                return Err(Error::InvalidMonoid(format!(
                    "{} names for {size} elements",
                    ns.len()
                )));
            }
        }
        let mut flat = Vec::with_capacity(size * size);
        for (i, row) in table.iter().enumerate() {
            if row.len() != size {
                return Err(Error::InvalidMonoid(format!("row {i} has {} entries", row.len())));
            }
            for &x in row {
                if x as usize >= size {
                    return Err(Error::InvalidMonoid(format!("entry {x} out of range in row {i}")));
                }
                flat.push(x);
            }
        }
        let m = Self {
            size,
            table: flat,
            names,
        };
        m.validate()?;
        Ok(m)
    }

    /// Trusted constructor for tables produced by closure computations.
    pub(crate) fn from_flat(size: usize, table: Vec<u32>, names: Option<Vec<String>>) -> Self {
        debug_assert_eq!(table.len(), size * size);
        Self { size, table, names }
    }

    fn validate(&self) -> Result<()> {
        for x in self.elements() {
            if self.mul(Element::IDENTITY, x) != x || self.mul(x, Element::IDENTITY) != x {
                return Err(Error::InvalidMonoid(format!(
                    "element 0 is not an identity for {}",
                    self.name(x)
                )));
            }
        }
        for a in self.elements() {
            for b in self.elements() {
                let ab = self.mul(a, b);
                for c in self.elements() {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::InvalidMonoid(format!(
                            "not associative at ({}, {}, {})",
                            self.name(a),
                            self.name(b),
                            self.name(c)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Cyclic group of order `k` (not group-free for `k > 1`).
    pub fn cyclic_group(k: usize) -> Self {
        let table = (0..k)
            .flat_map(|a| (0..k).map(move |b| ((a + b) % k) as u32))
            .collect();
        Self::from_flat(k, table, None)
    }

    pub fn trivial() -> Self {
        Self::from_flat(1, vec![0], Some(vec!["1".into()]))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.size as u32).map(Element)
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        Element(self.table[a.index() * self.size + b.index()])
    }

    /// Checked multiplication.
    pub fn multiply(&self, a: Element, b: Element) -> Result<Element> {
        for x in [a, b] {
            if x.index() >= self.size {
                return Err(Error::OutOfRange {
                    pos: x.index(),
                    len: self.size,
                });
            }
        }
        Ok(self.mul(a, b))
    }

    pub fn fold(&self, xs: impl IntoIterator<Item = Element>) -> Element {
        xs.into_iter().fold(Element::IDENTITY, |acc, x| self.mul(acc, x))
    }

    pub fn pow(&self, x: Element, k: usize) -> Element {
        (0..k).fold(Element::IDENTITY, |acc, _| self.mul(acc, x))
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn set_names(&mut self, names: Vec<String>) {
        assert_eq!(names.len(), self.size);
        self.names = Some(names);
    }

    pub fn name(&self, x: Element) -> String {
        match &self.names {
            Some(ns) => ns[x.index()].clone(),
            None => x.0.to_string(),
        }
    }

    pub fn element(&self, name: &str) -> Result<Element> {
        if let Some(ns) = &self.names {
            if let Some(i) = ns.iter().position(|n| n == name) {
                return Ok(Element(i as u32));
            }
        }
        match name.parse::<u32>() {
            Ok(i) if (i as usize) < self.size => Ok(Element(i)),
            _ => Err(Error::UnknownSymbol(name.to_string())),
        }
    }

    /// True iff every element satisfies `x^k = x^(k+1)` for some `k <= size`.
    pub fn is_group_free(&self) -> bool {
        self.elements().all(|x| self.aperiodic_index(x).is_some())
    }

    /// Smallest `k >= 1` with `x^k = x^(k+1)`, if any.
    pub fn aperiodic_index(&self, x: Element) -> Option<usize> {
        let mut p = x;
        for k in 1..=self.size {
            let next = self.mul(p, x);
            if next == p {
                return Some(k);
            }
            p = next;
        }
        None
    }

    /// Whether `set` (which must contain the identity) is closed under
    /// multiplication.
    pub fn is_submonoid(&self, set: &[Element]) -> bool {
        let mut member = vec![false; self.size];
        for &x in set {
            member[x.index()] = true;
        }
        member[0] && set.iter().all(|&a| set.iter().all(|&b| member[self.mul(a, b).index()]))
    }

    /// Submonoid generated by `gens` (always includes the identity).
    pub fn closure(&self, gens: &[Element]) -> Vec<Element> {
        let mut member = vec![false; self.size];
        member[0] = true;
        let mut out = vec![Element::IDENTITY];
        let mut frontier: Vec<Element> = Vec::new();
        for &g in gens {
            if !member[g.index()] {
                member[g.index()] = true;
                out.push(g);
                frontier.push(g);
            }
        }
        while let Some(x) = frontier.pop() {
            for i in 0..out.len() {
                let y = out[i];
                for z in [self.mul(x, y), self.mul(y, x)] {
                    if !member[z.index()] {
                        member[z.index()] = true;
                        out.push(z);
                        frontier.push(z);
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Re-indexes a submonoid: the identity becomes element 0, the rest
    /// follow in ascending parent order.
    pub fn submonoid(&self, members: &[Element]) -> Result<Submonoid> {
        let mut members: Vec<Element> = members.to_vec();
        members.sort();
        members.dedup();
        if !self.is_submonoid(&members) {
            return Err(Error::InvalidMonoid("subset is not a submonoid".into()));
        }
        let mut to_sub = vec![None; self.size];
        for (i, &x) in members.iter().enumerate() {
            to_sub[x.index()] = Some(Element(i as u32));
        }
        let k = members.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &members {
            for &b in &members {
                table.push(to_sub[self.mul(a, b).index()].expect("closed").0);
            }
        }
        let names = self
            .names
            .as_ref()
            .map(|ns| members.iter().map(|x| ns[x.index()].clone()).collect());
        Ok(Submonoid {
            monoid: FiniteMonoid::from_flat(k, table, names),
            embedding: members,
            to_sub,
        })
    }

    /// Searches for an isomorphism `self -> other` fixing the identity.
    pub fn isomorphism_to(&self, other: &FiniteMonoid) -> Option<Vec<Element>> {
        if self.size != other.size {
            return None;
        }
        let mut map = vec![None; self.size];
        let mut used = vec![false; self.size];
        map[0] = Some(Element::IDENTITY);
        used[0] = true;
        self.extend_iso(other, 1, &mut map, &mut used)
            .then(|| map.into_iter().map(|x| x.unwrap()).collect())
    }

    fn extend_iso(
        &self,
        other: &FiniteMonoid,
        next: usize,
        map: &mut Vec<Option<Element>>,
        used: &mut Vec<bool>,
    ) -> bool {
        if next == self.size {
            return self.elements().all(|a| {
                self.elements().all(|b| {
                    map[self.mul(a, b).index()]
                        == Some(other.mul(map[a.index()].unwrap(), map[b.index()].unwrap()))
                })
            });
        }
        for cand in 1..self.size {
            if used[cand] {
                continue;
            }
            map[next] = Some(Element(cand as u32));
            used[cand] = true;
            // prune on products among already-mapped elements
            let consistent = (0..=next).all(|a| {
                (0..=next).all(|b| {
                    let ab = self.mul(Element(a as u32), Element(b as u32));
                    match map[ab.index()] {
                        Some(img) if ab.index() <= next => {
                            img == other.mul(map[a].unwrap(), map[b].unwrap())
                        }
                        _ => true,
                    }
                })
            });
            if consistent && self.extend_iso(other, next + 1, map, used) {
                return true;
            }
            used[cand] = false;
            map[next] = None;
        }
        false
    }

    /// Text form: `size`, then `size` rows of indices, then an optional
    /// `names ...` line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.size);
        for a in 0..self.size {
            let row: Vec<String> = self.table[a * self.size..(a + 1) * self.size]
                .iter()
                .map(|x| x.to_string())
                .collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        if let Some(ns) = &self.names {
            s.push_str("names ");
            s.push_str(&ns.join(" "));
            s.push('\n');
        }
        s
    }
}

impl FromStr for FiniteMonoid {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let parse_err = |line, message: String| Error::Parse { line, message };
        let (ln, first) = lines.next().ok_or_else(|| parse_err(1, "missing size".into()))?;
        let size: usize = first
            .parse()
            .map_err(|_| parse_err(ln, format!("bad size `{first}`")))?;
        let mut table = Vec::with_capacity(size);
        for _ in 0..size {
            let (ln, row) = lines
                .next()
                .ok_or_else(|| parse_err(ln, "missing table row".into()))?;
            let row: Vec<u32> = row
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| parse_err(ln, format!("bad entry `{t}`"))))
                .collect::<Result<_>>()?;
            table.push(row);
        }
        let names = match lines.next() {
            None => None,
            Some((ln, l)) => {
                let mut toks = l.split_whitespace();
                if toks.next() != Some("names") {
                    return Err(parse_err(ln, "expected `names` line".into()));
                }
                Some(toks.map(str::to_string).collect())
            }
        };
        FiniteMonoid::from_table(table, names)
    }
}

impl fmt::Debug for FiniteMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteMonoid(size={})", self.size)
    }
}

/// A submonoid re-indexed as a monoid in its own right.
#[derive(Debug, Clone)]
pub struct Submonoid {
    pub monoid: FiniteMonoid,
    /// Sub index -> parent element.
    pub embedding: Vec<Element>,
    /// Parent element -> sub index.
    pub to_sub: Vec<Option<Element>>,
}

impl Submonoid {
    pub fn embed(&self, x: Element) -> Element {
        self.embedding[x.index()]
    }

    pub fn restrict(&self, x: Element) -> Option<Element> {
        self.to_sub[x.index()]
    }
}

/// The six-element monoid of the words with at least two `a`s before the
/// first `b`: `1, A, A2, B, D, E`.
pub fn example_monoid() -> FiniteMonoid {
    const T: [[u32; 6]; 6] = [
        [0, 1, 2, 3, 4, 5],
        [1, 2, 2, 4, 5, 5],
        [2, 2, 2, 5, 5, 5],
        [3, 3, 3, 3, 3, 3],
        [4, 4, 4, 4, 4, 4],
        [5, 5, 5, 5, 5, 5],
    ];
    FiniteMonoid::from_table(
        T.iter().map(|r| r.to_vec()).collect(),
        Some(["1", "A", "A2", "B", "D", "E"].map(String::from).to_vec()),
    )
    .expect("valid table")
}
