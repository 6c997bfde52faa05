//! The four-way case split for finite group-free monoids: trivial, a single
//! aperiodic generator, left-zero (`x * y = x` off the identity), or a
//! union `M = V ∪ T` of proper submonoids where `T - {1}` is a left ideal.

use std::collections::BTreeSet;

use crate::algebra::monoid::{Element, FiniteMonoid, Submonoid};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub enum KrDecomposition {
    /// `M = {1}`.
    Trivial,
    /// `M - {1} = {σ, σ², …, σ^k}` with `σ^k = σ^(k+1)`.
    Cyclic { generator: Element, threshold: usize },
    /// `x * y = x` for all non-identity `x, y`.
    LeftZero,
    /// `M = V ∪ T`, both proper, `T - {1}` a left ideal.
    Split { t: Box<KrPart>, v: Box<KrPart> },
}

#[derive(Debug, Clone)]
pub struct KrPart {
    pub sub: Submonoid,
    pub decomposition: KrDecomposition,
}

impl KrDecomposition {
    /// Case letter: `A`, `B`, `C` or `D`.
    pub fn tag(&self) -> char {
        match self {
            KrDecomposition::Trivial => 'A',
            KrDecomposition::Cyclic { .. } => 'B',
            KrDecomposition::LeftZero => 'C',
            KrDecomposition::Split { .. } => 'D',
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            KrDecomposition::Split { t, v } => {
                1 + t.decomposition.depth().max(v.decomposition.depth())
            }
            _ => 0,
        }
    }

    /// Re-validates the case invariants at every node of the recursion.
    pub fn check(&self, m: &FiniteMonoid) -> std::result::Result<(), String> {
        let non_id: Vec<Element> = m.elements().skip(1).collect();
        match self {
            KrDecomposition::Trivial => {
                if m.size() != 1 {
                    return Err(format!("case A on monoid of size {}", m.size()));
                }
            }
            KrDecomposition::Cyclic { generator, threshold } => {
                let powers: BTreeSet<Element> =
                    (1..=*threshold).map(|k| m.pow(*generator, k)).collect();
                let rest: BTreeSet<Element> = non_id.iter().copied().collect();
                if powers != rest {
                    return Err("case B powers do not cover M - {1}".into());
                }
                if m.pow(*generator, *threshold) != m.pow(*generator, threshold + 1) {
                    return Err("case B threshold is not stable".into());
                }
            }
            KrDecomposition::LeftZero => {
                for &x in &non_id {
                    for &y in &non_id {
                        if m.mul(x, y) != x {
                            return Err("case C violated".into());
                        }
                    }
                }
            }
            KrDecomposition::Split { t, v } => {
                let (ts, vs) = (&t.sub.embedding, &v.sub.embedding);
                if ts.len() >= m.size() || vs.len() >= m.size() {
                    return Err("case D parts must be proper".into());
                }
                if !m.is_submonoid(ts) || !m.is_submonoid(vs) {
                    return Err("case D parts must be submonoids".into());
                }
                let covered: BTreeSet<Element> = ts.iter().chain(vs).copied().collect();
                if covered.len() != m.size() {
                    return Err("case D parts do not cover M".into());
                }
                for x in m.elements() {
                    for &y in ts.iter().filter(|y| !y.is_identity()) {
                        let xy = m.mul(x, y);
                        if xy.is_identity() || !ts.contains(&xy) {
                            return Err("case D: T - {1} is not a left ideal".into());
                        }
                    }
                }
                t.decomposition.check(&t.sub.monoid)?;
                v.decomposition.check(&v.sub.monoid)?;
            }
        }
        Ok(())
    }
}

pub fn kr_decompose(m: &FiniteMonoid) -> Result<KrDecomposition> {
    if !m.is_group_free() {
        return Err(Error::NotGroupFree);
    }
    decompose(m)
}

fn decompose(m: &FiniteMonoid) -> Result<KrDecomposition> {
    if m.size() == 1 {
        return Ok(KrDecomposition::Trivial);
    }
    if let Some((generator, threshold)) = find_cyclic(m) {
        return Ok(KrDecomposition::Cyclic { generator, threshold });
    }
    let non_id: Vec<Element> = m.elements().skip(1).collect();
    if non_id.iter().all(|&x| non_id.iter().all(|&y| m.mul(x, y) == x)) {
        return Ok(KrDecomposition::LeftZero);
    }
    for ideal in left_ideals(m) {
        let t_members: Vec<Element> = std::iter::once(Element::IDENTITY).chain(ideal.iter().copied()).collect();
        if t_members.len() == m.size() {
            continue;
        }
        let complement: Vec<Element> = m.elements().filter(|x| !ideal.contains(x)).collect();
        let v_members = m.closure(&complement);
        if v_members.len() == m.size() {
            continue;
        }
        let t = m.submonoid(&t_members)?;
        let v = m.submonoid(&v_members)?;
        let t_dec = decompose(&t.monoid)?;
        let v_dec = decompose(&v.monoid)?;
        return Ok(KrDecomposition::Split {
            t: Box::new(KrPart { sub: t, decomposition: t_dec }),
            v: Box::new(KrPart { sub: v, decomposition: v_dec }),
        });
    }
    Err(Error::DecompositionNotFound { size: m.size() })
}

fn find_cyclic(m: &FiniteMonoid) -> Option<(Element, usize)> {
    for sigma in m.elements().skip(1) {
        let mut powers = vec![sigma];
        loop {
            let p = *powers.last().unwrap();
            let next = m.mul(p, sigma);
            if next == p {
                break;
            }
            if powers.contains(&next) || next.is_identity() {
                return None;
            }
            powers.push(next);
        }
        if powers.len() == m.size() - 1 {
            return Some((sigma, powers.len()));
        }
    }
    None
}

/// All non-empty left ideals avoiding the identity, ordered by size and
/// then lexicographically. Every candidate `T - {1}` of case D is one.
fn left_ideals(m: &FiniteMonoid) -> Vec<Vec<Element>> {
    let principal: Vec<BTreeSet<Element>> = m
        .elements()
        .skip(1)
        .map(|x| m.elements().map(|y| m.mul(y, x)).collect())
        .collect();
    let mut all: BTreeSet<Vec<Element>> = BTreeSet::new();
    let mut frontier: Vec<BTreeSet<Element>> = Vec::new();
    for p in &principal {
        if all.insert(p.iter().copied().collect()) {
            frontier.push(p.clone());
        }
    }
    while let Some(cur) = frontier.pop() {
        for p in &principal {
            if p.is_subset(&cur) {
                continue;
            }
            let u: BTreeSet<Element> = cur.union(p).copied().collect();
            if all.insert(u.iter().copied().collect()) {
                frontier.push(u);
            }
        }
    }
    let mut out: Vec<Vec<Element>> = all.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::monoid::example_monoid;

    fn names(part: &KrPart) -> Vec<String> {
        part.sub.embedding.iter().map(|&x| example_monoid().name(x)).collect()
    }

    #[test]
    fn example_splits_into_left_zero_and_cyclic() {
        let m = example_monoid();
        let d = kr_decompose(&m).unwrap();
        d.check(&m).unwrap();
        let KrDecomposition::Split { t, v } = &d else {
            panic!("expected case D, got {}", d.tag());
        };
        assert_eq!(names(t), ["1", "B", "D", "E"]);
        assert_eq!(names(v), ["1", "A", "A2"]);
        assert_eq!(t.decomposition.tag(), 'C');
        let KrDecomposition::Cyclic { generator, threshold } = v.decomposition else {
            panic!("V should be cyclic");
        };
        assert_eq!(v.sub.monoid.name(generator), "A");
        assert_eq!(threshold, 2);
    }

    #[test]
    fn trivial_and_group() {
        assert_eq!(kr_decompose(&FiniteMonoid::trivial()).unwrap().tag(), 'A');
        assert_eq!(
            kr_decompose(&FiniteMonoid::cyclic_group(2)).unwrap_err(),
            Error::NotGroupFree
        );
    }

    #[test]
    fn idempotent_pair_is_case_b() {
        // {1, s} with s*s = s
        let m = FiniteMonoid::from_table(vec![vec![0, 1], vec![1, 1]], None).unwrap();
        let d = kr_decompose(&m).unwrap();
        assert_eq!(d.tag(), 'B');
        d.check(&m).unwrap();
    }
}
