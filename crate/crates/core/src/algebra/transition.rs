use std::collections::HashMap;

use crate::algebra::dfa::Dfa;
use crate::algebra::monoid::{Element, FiniteMonoid};
use crate::error::{Error, Result};
use crate::word::Symbol;

pub const DEFAULT_MONOID_CAP: usize = 10_000;

/// Letter-to-element map; the empty cell maps to the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LetterMorphism {
    images: Vec<Element>,
}

impl LetterMorphism {
    pub fn new(images: Vec<Element>) -> Self {
        Self { images }
    }

    pub fn image(&self, letter: Option<Symbol>) -> Element {
        letter.map_or(Element::IDENTITY, |s| self.images[s.0 as usize])
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }
}

/// The monoid of state transformations induced by the words of an automaton.
#[derive(Debug, Clone)]
pub struct TransitionMonoid {
    pub monoid: FiniteMonoid,
    pub morphism: LetterMorphism,
    /// `transformations[e][q]` is the state reached from `q` by any word of `e`.
    pub transformations: Vec<Vec<u32>>,
    /// Whether words of element `e` lead from the start state into an accepting state.
    pub accepting: Vec<bool>,
}

/// Breadth-first closure of the letter transformations under composition.
/// Element 0 is the identity; other elements are named by their shortest
/// (then lexicographically first) representative word.
pub fn transition_monoid(dfa: &Dfa, cap: usize) -> Result<TransitionMonoid> {
    let q = dfa.states();
    let identity: Vec<u32> = (0..q as u32).collect();
    let mut index: HashMap<Vec<u32>, u32> = HashMap::from([(identity.clone(), 0)]);
    let mut funcs = vec![identity];
    let mut names = vec!["1".to_string()];
    let mut i = 0;
    while i < funcs.len() {
        for a in dfa.alphabet().symbols() {
            let g: Vec<u32> = funcs[i].iter().map(|&s| dfa.step(s, a)).collect();
            if !index.contains_key(&g) {
                if funcs.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                index.insert(g.clone(), funcs.len() as u32);
                let base = if i == 0 { String::new() } else { names[i].clone() };
                names.push(base + dfa.alphabet().name(a));
                funcs.push(g);
            }
        }
        i += 1;
    }
    let size = funcs.len();
    let mut table = Vec::with_capacity(size * size);
    for x in &funcs {
        for y in &funcs {
            let h: Vec<u32> = x.iter().map(|&s| y[s as usize]).collect();
            table.push(index[&h]);
        }
    }
    let images = dfa
        .alphabet()
        .symbols()
        .map(|a| {
            let g: Vec<u32> = (0..q as u32).map(|s| dfa.step(s, a)).collect();
            Element(index[&g])
        })
        .collect();
    let accepting = funcs
        .iter()
        .map(|f| dfa.is_accepting(f[dfa.start() as usize]))
        .collect();
    Ok(TransitionMonoid {
        monoid: FiniteMonoid::from_flat(size, table, Some(names)),
        morphism: LetterMorphism::new(images),
        transformations: funcs,
        accepting,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::monoid::example_monoid;
    use crate::algebra::regex::compile;
    use crate::word::Alphabet;

    #[test]
    fn literal_example_regex_has_an_extra_zero() {
        // a third `a` before the first `b` is fatal here, so `aaa` is a zero
        let tm = transition_monoid(&compile("c*ac*ac*b(a+b+c)*").unwrap(), DEFAULT_MONOID_CAP).unwrap();
        assert_eq!(tm.monoid.size(), 7);
        assert!(tm.monoid.isomorphism_to(&example_monoid()).is_none());
    }

    #[test]
    fn at_least_two_as_before_first_b_gives_example_monoid() {
        let tm = transition_monoid(&compile("c*ac*a(a+c)*b(a+b+c)*").unwrap(), DEFAULT_MONOID_CAP).unwrap();
        assert_eq!(tm.monoid.size(), 6);
        assert!(tm.monoid.isomorphism_to(&example_monoid()).is_some());
        // c acts as the identity
        let c = tm.morphism.image(Some(Symbol(2)));
        assert_eq!(c, Element::IDENTITY);
    }

    #[test]
    fn one_state_dfa_is_trivial() {
        let d = Dfa::new(Alphabet::new(["a", "b"]), vec![vec![0, 0]], 0, vec![true]).unwrap();
        let tm = transition_monoid(&d, DEFAULT_MONOID_CAP).unwrap();
        assert_eq!(tm.monoid.size(), 1);
    }

    #[test]
    fn even_as_contains_a_group() {
        let tm = transition_monoid(&compile("(aa)*").unwrap(), DEFAULT_MONOID_CAP).unwrap();
        let a = tm.morphism.image(Some(Symbol(0)));
        assert_ne!(a, Element::IDENTITY);
        assert_eq!(tm.monoid.mul(a, a), Element::IDENTITY);
        assert!(!tm.monoid.is_group_free());
    }

    #[test]
    fn cap_is_enforced() {
        let d = compile("c*ac*ac*b(a+b+c)*").unwrap();
        assert_eq!(transition_monoid(&d, 3).unwrap_err(), Error::CapExceeded { cap: 3 });
    }
}
