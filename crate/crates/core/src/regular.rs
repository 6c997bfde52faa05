//! Membership and range membership for regular languages, on top of either
//! range evaluator.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{regex, transition_monoid, Dfa, Element, TransitionMonoid, DEFAULT_MONOID_CAP};
use crate::error::{Error, Result};
use crate::hierarchy::HierarchyRangeEval;
use crate::meter::WorkMeter;
use crate::starfree::StarFreeEval;
use crate::word::{Alphabet, Change, DynamicWord, Letter, Symbol, WordListener};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EngineKind {
    /// Star-free when the syntactic monoid is group-free, hierarchy otherwise.
    #[default]
    Auto,
    Hierarchy,
    StarFree,
}

impl FromStr for EngineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(EngineKind::Auto),
            "hierarchy" => Ok(EngineKind::Hierarchy),
            "starfree" => Ok(EngineKind::StarFree),
            other => Err(Error::UnknownSymbol(other.to_string())),
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineKind::Auto => "auto",
            EngineKind::Hierarchy => "hierarchy",
            EngineKind::StarFree => "starfree",
        })
    }
}

#[derive(Debug, Clone)]
enum Inner {
    Hierarchy(HierarchyRangeEval),
    StarFree(StarFreeEval),
}

#[derive(Debug, Clone)]
pub struct RegularEngine {
    dfa: Dfa,
    tm: TransitionMonoid,
    inner: Inner,
    word: DynamicWord,
}

impl RegularEngine {
    pub fn from_regex(src: &str, n: usize, epsilon: f64, kind: EngineKind, meter: WorkMeter) -> Result<Self> {
        Self::new(regex::compile(src)?, n, epsilon, kind, meter)
    }

    pub fn new(dfa: Dfa, n: usize, epsilon: f64, kind: EngineKind, meter: WorkMeter) -> Result<Self> {
        let dfa = dfa.minimize();
        let tm = transition_monoid(&dfa, DEFAULT_MONOID_CAP)?;
        let kind = match kind {
            EngineKind::Auto if tm.monoid.is_group_free() => EngineKind::StarFree,
            EngineKind::Auto => EngineKind::Hierarchy,
            k => k,
        };
        let inner = match kind {
            EngineKind::StarFree => Inner::StarFree(StarFreeEval::new(tm.monoid.clone(), n, meter)?),
            _ => Inner::Hierarchy(HierarchyRangeEval::new(tm.monoid.clone(), n, epsilon, meter)),
        };
        Ok(Self {
            dfa,
            tm,
            inner,
            word: DynamicWord::new(n),
        })
    }

    pub fn engine(&self) -> EngineKind {
        match self.inner {
            Inner::Hierarchy(_) => EngineKind::Hierarchy,
            Inner::StarFree(_) => EngineKind::StarFree,
        }
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.dfa.alphabet()
    }

    pub fn transition_monoid(&self) -> &TransitionMonoid {
        &self.tm
    }

    pub fn word(&self) -> &DynamicWord {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// The evaluator's raw cell at `i`.
    pub fn cell(&self, i: usize) -> Result<Element> {
        match &self.inner {
            Inner::Hierarchy(h) => h.get(i),
            Inner::StarFree(s) => s.get(i),
        }
    }

    pub fn apply(&mut self, change: &Change) -> Result<()> {
        if let Change::Set { symbol, .. } = change {
            if symbol.0 as usize >= self.alphabet().len() {
                return Err(Error::UnknownSymbol(format!("#{}", symbol.0)));
            }
        }
        let old = self.word.apply(change)?;
        let pos = change.pos();
        let new = self.word.cells()[pos];
        self.push(pos, old, new)
    }

    fn push(&mut self, pos: usize, _old: Letter, new: Letter) -> Result<()> {
        let x = self.tm.morphism.image(new);
        match &mut self.inner {
            Inner::Hierarchy(h) => h.set(pos, x),
            Inner::StarFree(s) => s.set(pos, x),
        }
    }

    pub fn set(&mut self, pos: usize, symbol: Symbol) -> Result<()> {
        self.apply(&Change::Set { pos, symbol })
    }

    pub fn reset(&mut self, pos: usize) -> Result<()> {
        self.apply(&Change::Reset { pos })
    }

    /// Whether `w_l ∘ … ∘ w_r` is in the language; `l > r` asks about the empty word.
    pub fn range(&self, l: usize, r: usize) -> Result<bool> {
        let e = match &self.inner {
            Inner::Hierarchy(h) => h.range(l, r)?,
            Inner::StarFree(s) => s.range(l, r)?,
        };
        Ok(self.tm.accepting[e.index()])
    }

    pub fn member(&self) -> Result<bool> {
        if self.word.is_empty() {
            return Ok(self.tm.accepting[0]);
        }
        self.range(0, self.word.len() - 1)
    }
}

impl WordListener for RegularEngine {
    fn on_change(&mut self, pos: usize, old: Letter, new: Letter) -> Result<()> {
        let change = match new {
            Some(symbol) => Change::Set { pos, symbol },
            None => Change::Reset { pos },
        };
        self.word.apply(&change)?;
        self.push(pos, old, new)
    }

    fn as_any(&self) -> &dyn std::any::Any {
        self
    }
}
