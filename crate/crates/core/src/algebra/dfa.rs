use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Alphabet, Symbol};

/// A complete deterministic automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    states: usize,
    delta: Vec<u32>,
    start: u32,
    accepting: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct DfaFile {
    states: usize,
    alphabet: Vec<String>,
    start: u32,
    accepting: Vec<u32>,
    delta: Vec<(u32, String, u32)>,
}

impl Dfa {
    /// `delta[q][a]` is the successor of state `q` under symbol `a`.
    pub fn new(
        alphabet: Alphabet,
        delta: Vec<Vec<u32>>,
        start: u32,
        accepting: Vec<bool>,
    ) -> Result<Self> {
        let states = delta.len();
        let k = alphabet.len();
        if states == 0 {
            return Err(Error::InvalidDfa("no states".into()));
        }
        if start as usize >= states || accepting.len() != states {
            return Err(Error::InvalidDfa("bad start state or accepting vector".into()));
        }
        let mut flat = Vec::with_capacity(states * k);
        for (q, row) in delta.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidDfa(format!("state {q} is not total")));
            }
            if let Some(&bad) = row.iter().find(|&&p| p as usize >= states) {
                return Err(Error::InvalidDfa(format!("transition to unknown state {bad}")));
            }
            flat.extend_from_slice(row);
        }
        Ok(Self {
            alphabet,
            states,
            delta: flat,
            start,
            accepting,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: DfaFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidDfa(e.to_string()))?;
        let alphabet = Alphabet::new(f.alphabet.iter().cloned());
        let mut delta = vec![vec![u32::MAX; alphabet.len()]; f.states];
        for (q, a, p) in &f.delta {
            let sym = alphabet.symbol(a)?;
            let row = delta
                .get_mut(*q as usize)
                .ok_or_else(|| Error::InvalidDfa(format!("unknown state {q}")))?;
            row[sym.0 as usize] = *p;
        }
        if delta.iter().flatten().any(|&p| p == u32::MAX) {
            return Err(Error::InvalidDfa("transition function is not total".into()));
        }
        let mut accepting = vec![false; f.states];
        for &q in &f.accepting {
            *accepting
                .get_mut(q as usize)
                .ok_or_else(|| Error::InvalidDfa(format!("unknown accepting state {q}")))? = true;
        }
        Dfa::new(alphabet, delta, f.start, accepting)
    }

    pub fn to_json(&self) -> String {
        let f = DfaFile {
            states: self.states,
            alphabet: self.alphabet.symbols().map(|s| self.alphabet.name(s).to_string()).collect(),
            start: self.start,
            accepting: (0..self.states as u32).filter(|&q| self.accepting[q as usize]).collect(),
            delta: (0..self.states as u32)
                .flat_map(|q| {
                    self.alphabet.symbols().map(move |a| (q, a))
                })
                .map(|(q, a)| (q, self.alphabet.name(a).to_string(), self.step(q, a)))
                .collect(),
        };
        serde_json::to_string_pretty(&f).expect("serializable")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn is_accepting(&self, q: u32) -> bool {
        self.accepting[q as usize]
    }

    #[inline]
    pub fn step(&self, q: u32, a: Symbol) -> u32 {
        self.delta[q as usize * self.alphabet.len() + a.0 as usize]
    }

    pub fn run_from(&self, q: u32, word: &[Symbol]) -> u32 {
        word.iter().fold(q, |q, &a| self.step(q, a))
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        self.is_accepting(self.run_from(self.start, word))
    }

    /// Removes unreachable states and merges equivalent ones. States of the
    /// result are numbered in breadth-first order from the start state.
    pub fn minimize(&self) -> Dfa {
        let k = self.alphabet.len();
        // reachable states, BFS order
        let mut order = vec![self.start];
        let mut seen = vec![false; self.states];
        seen[self.start as usize] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for a in self.alphabet.symbols() {
                let p = self.step(q, a);
                if !seen[p as usize] {
                    seen[p as usize] = true;
                    order.push(p);
                }
            }
            i += 1;
        }
        // Moore refinement: class ids from (class, successor classes)
        let mut class: Vec<u32> = vec![0; self.states];
        for &q in &order {
            class[q as usize] = self.accepting[q as usize] as u32;
        }
        let mut count = {
            let mut c: Vec<u32> = order.iter().map(|&q| class[q as usize]).collect();
            c.sort();
            c.dedup();
            c.len()
        };
        loop {
            let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut next = vec![0; self.states];
            for &q in &order {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[q as usize]);
                sig.extend(self.alphabet.symbols().map(|a| class[self.step(q, a) as usize]));
                let fresh = ids.len() as u32;
                next[q as usize] = *ids.entry(sig).or_insert(fresh);
            }
            let new_count = ids.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // renumber classes in BFS order from the start class
        let mut rename: HashMap<u32, u32> = HashMap::new();
        let mut reps: Vec<u32> = Vec::new();
        let mut queue = VecDeque::from([self.start]);
        rename.insert(class[self.start as usize], 0);
        reps.push(self.start);
        while let Some(q) = queue.pop_front() {
            for a in self.alphabet.symbols() {
                let p = self.step(q, a);
                let c = class[p as usize];
                if let Entry::Vacant(e) = rename.entry(c) {
                    e.insert(reps.len() as u32);
                    reps.push(p);
                    queue.push_back(p);
                }
            }
        }
        let delta = reps
            .iter()
            .map(|&q| {
                self.alphabet
                    .symbols()
                    .map(|a| rename[&class[self.step(q, a) as usize]])
                    .collect()
            })
            .collect();
        let accepting = reps.iter().map(|&q| self.accepting[q as usize]).collect();
        Dfa::new(self.alphabet.clone(), delta, 0, accepting).expect("minimized automaton is total")
    }
}
