//! Regular expressions over single-character letters: concatenation,
//! union `+`, Kleene star `*` and parentheses. Compiled through a Thompson
//! automaton and the subset construction, then minimized.

use std::collections::{BTreeSet, HashMap};

use crate::algebra::dfa::Dfa;
use crate::error::{Error, Result};
use crate::word::Alphabet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regex {
    Empty,
    Letter(char),
    Concat(Box<Regex>, Box<Regex>),
    Union(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    pub fn parse(src: &str) -> Result<Regex> {
        let chars: Vec<(usize, char)> = src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        let mut p = Parser { chars, pos: 0, len: src.len() };
        let r = p.union()?;
        if let Some(&(off, c)) = p.chars.get(p.pos) {
            return Err(Error::Regex {
                offset: off,
                message: format!("unexpected `{c}`"),
            });
        }
        Ok(r)
    }

    pub fn letters(&self) -> BTreeSet<char> {
        let mut out = BTreeSet::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut BTreeSet<char>) {
        match self {
            Regex::Empty => {}
            Regex::Letter(c) => {
                out.insert(*c);
            }
            Regex::Concat(a, b) | Regex::Union(a, b) => {
                a.collect_letters(out);
                b.collect_letters(out);
            }
            Regex::Star(a) => a.collect_letters(out),
        }
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |&(o, _)| o)
    }

    fn union(&mut self) -> Result<Regex> {
        let mut r = self.concat()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            let rhs = self.concat()?;
            r = Regex::Union(Box::new(r), Box::new(rhs));
        }
        Ok(r)
    }

    fn concat(&mut self) -> Result<Regex> {
        let mut r: Option<Regex> = None;
        while let Some(c) = self.peek() {
            if c == '+' || c == ')' {
                break;
            }
            let atom = self.starred()?;
            r = Some(match r {
                None => atom,
                Some(prev) => Regex::Concat(Box::new(prev), Box::new(atom)),
            });
        }
        Ok(r.unwrap_or(Regex::Empty))
    }

    fn starred(&mut self) -> Result<Regex> {
        let mut r = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            r = Regex::Star(Box::new(r));
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Regex> {
        let off = self.offset();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let r = self.union()?;
                if self.peek() != Some(')') {
                    return Err(Error::Regex {
                        offset: self.offset(),
                        message: "expected `)`".into(),
                    });
                }
                self.pos += 1;
                Ok(r)
            }
            Some('*') => Err(Error::Regex {
                offset: off,
                message: "`*` without operand".into(),
            }),
            Some(c) if c.is_alphanumeric() => {
                self.pos += 1;
                Ok(Regex::Letter(c))
            }
            Some(c) => Err(Error::Regex {
                offset: off,
                message: format!("unexpected `{c}`"),
            }),
            None => Err(Error::Regex {
                offset: off,
                message: "unexpected end of expression".into(),
            }),
        }
    }
}

#[derive(Default)]
struct Nfa {
    eps: Vec<Vec<usize>>,
    edges: Vec<Vec<(char, usize)>>,
}

impl Nfa {
    fn state(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.edges.push(Vec::new());
        self.eps.len() - 1
    }

    /// Returns (entry, exit) of the fragment for `r`.
    fn build(&mut self, r: &Regex) -> (usize, usize) {
        match r {
            Regex::Empty => {
                let s = self.state();
                (s, s)
            }
            Regex::Letter(c) => {
                let (s, t) = (self.state(), self.state());
                self.edges[s].push((*c, t));
                (s, t)
            }
            Regex::Concat(a, b) => {
                let (s1, t1) = self.build(a);
                let (s2, t2) = self.build(b);
                self.eps[t1].push(s2);
                (s1, t2)
            }
            Regex::Union(a, b) => {
                let (s, t) = (self.state(), self.state());
                let (s1, t1) = self.build(a);
                let (s2, t2) = self.build(b);
                self.eps[s].extend([s1, s2]);
                self.eps[t1].push(t);
                self.eps[t2].push(t);
                (s, t)
            }
            Regex::Star(a) => {
                let (s, t) = (self.state(), self.state());
                let (s1, t1) = self.build(a);
                self.eps[s].extend([s1, t]);
                self.eps[t1].extend([s1, t]);
                (s, t)
            }
        }
    }

    fn eps_closure(&self, set: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &p in &self.eps[q] {
                if set.insert(p) {
                    stack.push(p);
                }
            }
        }
    }
}

/// Compiles `src` into a minimal DFA over the letters it mentions.
pub fn compile(src: &str) -> Result<Dfa> {
    let r = Regex::parse(src)?;
    let letters: Vec<char> = r.letters().into_iter().collect();
    compile_over(&r, &letters)
}

/// Compiles over an explicit alphabet (which must cover the letters used).
pub fn compile_over(r: &Regex, letters: &[char]) -> Result<Dfa> {
    if let Some(c) = r.letters().into_iter().find(|c| !letters.contains(c)) {
        return Err(Error::UnknownSymbol(c.to_string()));
    }
    let alphabet = Alphabet::new(letters.iter().map(|c| c.to_string()));
    let mut nfa = Nfa::default();
    let (entry, exit) = nfa.build(r);
    let mut start = BTreeSet::from([entry]);
    nfa.eps_closure(&mut start);
    let mut ids: HashMap<BTreeSet<usize>, u32> = HashMap::from([(start.clone(), 0)]);
    let mut sets = vec![start];
    let mut delta: Vec<Vec<u32>> = Vec::new();
    let mut i = 0;
    while i < sets.len() {
        let mut row = Vec::with_capacity(letters.len());
        for &c in letters {
            let mut next: BTreeSet<usize> = sets[i]
                .iter()
                .flat_map(|&q| nfa.edges[q].iter().filter(|(a, _)| *a == c).map(|&(_, p)| p))
                .collect();
            nfa.eps_closure(&mut next);
            let id = match ids.get(&next) {
                Some(&id) => id,
                None => {
                    let id = sets.len() as u32;
                    ids.insert(next.clone(), id);
                    sets.push(next);
                    id
                }
            };
            row.push(id);
        }
        delta.push(row);
        i += 1;
    }
    let accepting = sets.iter().map(|s| s.contains(&exit)).collect();
    Ok(Dfa::new(alphabet, delta, 0, accepting)?.minimize())
}
