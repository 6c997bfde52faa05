//! The dynamic input word: a fixed array of cells, each empty or holding one
//! symbol, plus the change operations that mutate it.

use std::any::Any;
use std::collections::HashMap;
use std::fmt;

use crate::error::{check_pos, Error, Result};

/// A symbol of a finite alphabet, identified by its index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

/// Cell content: `None` is the empty marker.
pub type Letter = Option<Symbol>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Change {
    Set { pos: usize, symbol: Symbol },
    Reset { pos: usize },
}

impl Change {
    pub fn pos(&self) -> usize {
        match *self {
            Change::Set { pos, .. } | Change::Reset { pos } => pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicWord {
    cells: Vec<Letter>,
}

impl DynamicWord {
    pub fn new(len: usize) -> Self {
        Self {
            cells: vec![None; len],
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, pos: usize) -> Result<Letter> {
        check_pos(pos, self.len())?;
        Ok(self.cells[pos])
    }

    pub fn cells(&self) -> &[Letter] {
        &self.cells
    }

    /// Checks legality without mutating.
    pub fn validate(&self, change: &Change) -> Result<()> {
        let pos = change.pos();
        check_pos(pos, self.len())?;
        match (change, self.cells[pos]) {
            (Change::Set { .. }, Some(_)) => Err(Error::IllegalChange {
                pos,
                reason: "cell already holds a symbol",
            }),
            (Change::Reset { .. }, None) => Err(Error::IllegalChange {
                pos,
                reason: "cell is already empty",
            }),
            _ => Ok(()),
        }
    }

    /// Applies a legal change and returns the previous cell content.
    pub fn apply(&mut self, change: &Change) -> Result<Letter> {
        self.validate(change)?;
        let pos = change.pos();
        let old = self.cells[pos];
        self.cells[pos] = match *change {
            Change::Set { symbol, .. } => Some(symbol),
            Change::Reset { .. } => None,
        };
        Ok(old)
    }

    pub fn set(&mut self, pos: usize, symbol: Symbol) -> Result<()> {
        self.apply(&Change::Set { pos, symbol }).map(|_| ())
    }

    pub fn reset(&mut self, pos: usize) -> Result<()> {
        self.apply(&Change::Reset { pos }).map(|_| ())
    }

    /// Non-empty letters of positions `l..=r`, in order.
    pub fn snapshot(&self, l: usize, r: usize) -> Result<Vec<Symbol>> {
        check_pos(r, self.len())?;
        if l > r {
            return Err(Error::OutOfRange { pos: l, len: r + 1 });
        }
        Ok(self.cells[l..=r].iter().flatten().copied().collect())
    }

    /// The represented word over all positions.
    pub fn word(&self) -> Vec<Symbol> {
        self.cells.iter().flatten().copied().collect()
    }

    pub fn occupied(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.map(|_| i))
    }
}

/// A structure that follows the changes of an [`ObservedWord`].
pub trait WordListener: Any {
    /// Called after the cell at `pos` went from `old` to `new`.
    fn on_change(&mut self, pos: usize, old: Letter, new: Letter) -> Result<()>;

    fn as_any(&self) -> &dyn Any;
}

/// A word that forwards every change to its subscribers, in subscription
/// order, after the cell itself has been updated.
pub struct ObservedWord {
    word: DynamicWord,
    listeners: Vec<Box<dyn WordListener>>,
}

impl ObservedWord {
    pub fn new(len: usize) -> Self {
        Self {
            word: DynamicWord::new(len),
            listeners: Vec::new(),
        }
    }

    pub fn subscribe(&mut self, listener: Box<dyn WordListener>) -> usize {
        self.listeners.push(listener);
        self.listeners.len() - 1
    }

    pub fn word(&self) -> &DynamicWord {
        &self.word
    }

    pub fn apply(&mut self, change: &Change) -> Result<()> {
        let old = self.word.apply(change)?;
        let pos = change.pos();
        let new = self.word.cells[pos];
        for l in &mut self.listeners {
            l.on_change(pos, old, new)?;
        }
        Ok(())
    }

    pub fn listener<T: WordListener>(&self, id: usize) -> Option<&T> {
        self.listeners.get(id)?.as_any().downcast_ref::<T>()
    }
}

impl fmt::Debug for ObservedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObservedWord")
            .field("word", &self.word)
            .field("listeners", &self.listeners.len())
            .finish()
    }
}

/// Named symbols used by scripts and the CLI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    lookup: HashMap<String, Symbol>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let lookup = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), Symbol(i as u32)))
            .collect();
        Self { names, lookup }
    }

    /// Bracket alphabet with `types` kinds: `(1 )1 (2 )2 ...`, where the
    /// opening bracket of type `t` (0-based) is symbol `2t` and its closing
    /// partner is `2t + 1`. Single-type alphabets also accept `(` and `)`.
    pub fn dyck(types: usize) -> Self {
        let mut alpha = Self::new((1..=types).flat_map(|t| [format!("({t}"), format!("){t}")]));
        if types >= 1 {
            alpha.lookup.insert("(".into(), Symbol(0));
            alpha.lookup.insert(")".into(), Symbol(1));
        }
        alpha
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn symbol(&self, name: &str) -> Result<Symbol> {
        self.lookup
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s.0 as usize]
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..self.names.len() as u32).map(Symbol)
    }

    pub fn render(&self, word: &[Symbol]) -> String {
        word.iter().map(|&s| self.name(s)).collect()
    }
}
