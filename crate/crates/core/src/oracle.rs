//! Brute-force reference answers recomputed from plain snapshots.
//!
//! Nothing here touches a work meter; these are test overhead, not
//! measured work.

use crate::algebra::{Dfa, Element, FiniteMonoid};
use crate::dyck::balance::BalancePair;
use crate::word::{Letter, Symbol};

fn letters_in(letters: &[Letter], l: usize, r: usize) -> Vec<Symbol> {
    if l > r || letters.is_empty() {
        return Vec::new();
    }
    letters[l..=r.min(letters.len() - 1)].iter().flatten().copied().collect()
}

/// Runs the automaton over the non-empty cells of `[l, r]`; `l > r` asks
/// about the empty word.
pub fn dfa_range(dfa: &Dfa, letters: &[Letter], l: usize, r: usize) -> bool {
    dfa.accepts(&letters_in(letters, l, r))
}

/// Left fold of `elements[l..=r]`; identity when `l > r`.
pub fn monoid_fold(monoid: &FiniteMonoid, elements: &[Element], l: usize, r: usize) -> Element {
    if l > r {
        return Element::IDENTITY;
    }
    elements[l..=r].iter().fold(Element::IDENTITY, |acc, &x| monoid.mul(acc, x))
}

/// Stack-based reading of a bracket word (opener `2t`, closer `2t + 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyckReport {
    pub member: bool,
    /// Unmatched closers and openers of the type-unaware reduction.
    pub unmatched: BalancePair,
    /// For each index of the input, the index of its partner under
    /// type-unaware matching.
    pub partner: Vec<Option<usize>>,
}

pub fn dyck(word: &[Symbol], typed: bool) -> DyckReport {
    let mut stack: Vec<usize> = Vec::new();
    let mut partner = vec![None; word.len()];
    let mut closers = 0u32;
    let mut types_ok = true;
    for (i, s) in word.iter().enumerate() {
        if s.0 % 2 == 0 {
            stack.push(i);
        } else if let Some(o) = stack.pop() {
            partner[o] = Some(i);
            partner[i] = Some(o);
            types_ok &= word[o].0 / 2 == s.0 / 2;
        } else {
            closers += 1;
        }
    }
    let unmatched = BalancePair::new(closers, stack.len() as u32);
    DyckReport {
        member: unmatched.is_balanced() && (!typed || types_ok),
        unmatched,
        partner,
    }
}

/// Dyck membership of the non-empty cells of `[l, r]`.
pub fn dyck_range(letters: &[Letter], l: usize, r: usize, typed: bool) -> bool {
    dyck(&letters_in(letters, l, r), typed).member
}

/// Cell index of the partner of the opener at cell `i`, matching only
/// inside `[l, r]`.
pub fn dyck_match(letters: &[Letter], i: usize, l: usize, r: usize) -> Option<usize> {
    let cells: Vec<usize> = (l..=r).filter(|&j| letters[j].is_some()).collect();
    let word: Vec<Symbol> = cells.iter().map(|&j| letters[j].unwrap()).collect();
    let k = cells.iter().position(|&j| j == i)?;
    dyck(&word, false).partner[k].filter(|&m| m > k).map(|m| cells[m])
}

/// Smallest member strictly greater than `i`.
pub fn nextink_succ(members: &[bool], i: usize) -> Option<usize> {
    (i + 1..members.len()).find(|&j| members[j])
}

/// Largest member strictly less than `i`.
pub fn nextink_pred(members: &[bool], i: usize) -> Option<usize> {
    (0..i.min(members.len())).rev().find(|&j| members[j])
}

/// Equality of the represented words, gaps dropped.
pub fn equals(u: &[Letter], v: &[Letter]) -> bool {
    u.iter().flatten().eq(v.iter().flatten())
}
