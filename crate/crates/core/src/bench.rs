//! Workload harness: builds an engine for a problem, replays a script or a
//! seeded random workload, optionally cross-checks every step against the
//! oracles, and records the work of each operation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{example_monoid, regex, Dfa, Element, FiniteMonoid};
use crate::dyck::{D1Engine, DkEngine};
use crate::dyck_range::DyckRange;
use crate::error::{Error, Result};
use crate::hierarchy::HierarchyRangeEval;
use crate::meter::WorkMeter;
use crate::oracle;
use crate::ranked_set::RankedSet;
use crate::regular::{EngineKind, RegularEngine};
use crate::script::ScriptOp;
use crate::starfree::StarFreeEval;
use crate::string_eq::{Side, StringEq};
use crate::word::{Alphabet, Change, DynamicWord, Letter, Symbol};

/// Language of the running example; the default for regular problems.
pub const EXAMPLE_REGEX: &str = "c*ac*ac*b(a+b+c)*";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    Nextink,
    RangeEval,
    Starfree,
    Regular,
    Stringeq,
    Dyck1,
    Dyckk,
    DyckRange,
}

impl Problem {
    pub const ALL: [Problem; 8] = [
        Problem::Nextink,
        Problem::RangeEval,
        Problem::Starfree,
        Problem::Regular,
        Problem::Stringeq,
        Problem::Dyck1,
        Problem::Dyckk,
        Problem::DyckRange,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Problem::Nextink => "nextink",
            Problem::RangeEval => "range-eval",
            Problem::Starfree => "starfree",
            Problem::Regular => "regular",
            Problem::Stringeq => "stringeq",
            Problem::Dyck1 => "dyck1",
            Problem::Dyckk => "dyckk",
            Problem::DyckRange => "dyck-range",
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Problem::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownSymbol(s.to_string()))
    }
}

/// Relative weights of random sets, resets and queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpMix {
    pub set: u32,
    pub reset: u32,
    pub query: u32,
}

impl Default for OpMix {
    fn default() -> Self {
        Self {
            set: 45,
            reset: 45,
            query: 10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub problem: Problem,
    pub n: usize,
    pub ops: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub types: usize,
    pub monoid: Option<FiniteMonoid>,
    pub dfa: Option<Dfa>,
    pub regex: Option<String>,
    pub engine: EngineKind,
    pub script: Option<Vec<ScriptOp>>,
    pub verify: bool,
    pub mix: OpMix,
    /// Fraction of cells filled (unmetered) before the workload starts.
    pub fill: f64,
}

impl Scenario {
    pub fn new(problem: Problem, n: usize) -> Self {
        Self {
            problem,
            n,
            ops: 1000,
            seed: 0,
            epsilon: 0.5,
            types: 2,
            monoid: None,
            dfa: None,
            regex: None,
            engine: EngineKind::Auto,
            script: None,
            verify: false,
            mix: OpMix::default(),
            fill: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub idx: usize,
    pub op: &'static str,
    pub arg1: String,
    pub arg2: String,
    pub answer: String,
    pub work: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct OpStats {
    pub count: usize,
    pub total: u64,
    pub max: u64,
    pub mean: f64,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub rows: Vec<Row>,
    /// First engine/oracle disagreement found under verification.
    pub divergence: Option<String>,
}

pub const CSV_HEADER: &str = "idx,op,arg1,arg2,answer,work";

impl Report {
    pub fn summary(&self) -> BTreeMap<&'static str, OpStats> {
        let mut out: BTreeMap<&'static str, OpStats> = BTreeMap::new();
        for row in &self.rows {
            let s = out.entry(row.op).or_default();
            s.count += 1;
            s.total += row.work;
            s.max = s.max.max(row.work);
        }
        for s in out.values_mut() {
            s.mean = s.total as f64 / s.count as f64;
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&format!("{},{},{},{},{},{}\n", r.idx, r.op, r.arg1, r.arg2, r.answer, r.work));
        }
        s
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "ops": self.rows.len(),
            "divergence": self.divergence,
            "per_op": self.summary(),
        })
    }
}

fn yes(b: bool) -> String {
    b.to_string()
}

fn position(p: Option<usize>) -> String {
    p.map_or_else(|| "-".to_string(), |p| p.to_string())
}

fn unsupported(op: &ScriptOp, problem: Problem) -> Error {
    Error::Unsupported {
        op: op.name().to_string(),
        problem: problem.to_string(),
    }
}

/// One engine behind the harness.
trait Driver {
    fn problem(&self) -> Problem;
    fn len(&self) -> usize;
    /// Symbol names the random generator draws from.
    fn symbols(&self) -> Vec<String>;
    fn two_sided(&self) -> bool {
        false
    }
    fn occupied(&self, side: Side, pos: usize) -> bool;
    /// Runs the operation on the engine; changes answer `ok`.
    fn exec(&mut self, op: &ScriptOp) -> Result<String>;
    /// The oracle's answer to a query.
    fn oracle(&self, op: &ScriptOp) -> Result<String>;
    /// Query whose answer summarizes the whole state after a change.
    fn probe(&self) -> ScriptOp;
    fn random_query(&self, rng: &mut ChaCha8Rng) -> ScriptOp {
        let n = self.len();
        let l = rng.gen_range(0..n);
        let r = rng.gen_range(l..n);
        ScriptOp::Range { l, r }
    }
    /// Extra structural check after a change, if the engine has one.
    fn state_check(&self) -> std::result::Result<(), String> {
        Ok(())
    }
}

fn checked_symbol(alpha: &Alphabet, name: &str) -> Result<Symbol> {
    alpha.symbol(name)
}

// ---- nextink

struct NextInk {
    set: RankedSet,
    members: Vec<bool>,
}

impl Driver for NextInk {
    fn problem(&self) -> Problem {
        Problem::Nextink
    }
    fn len(&self) -> usize {
        self.members.len()
    }
    fn symbols(&self) -> Vec<String> {
        vec!["1".into()]
    }
    fn occupied(&self, _: Side, pos: usize) -> bool {
        self.members[pos]
    }
    fn exec(&mut self, op: &ScriptOp) -> Result<String> {
        match *op {
            ScriptOp::Set { pos, .. } => {
                crate::error::check_pos(pos, self.len())?;
                if self.members[pos] {
                    return Err(Error::IllegalChange { pos, reason: "cell already holds a symbol" });
                }
                self.set.insert(pos)?;
                self.members[pos] = true;
            }
            ScriptOp::Reset { pos } => {
                crate::error::check_pos(pos, self.len())?;
                if !self.members[pos] {
                    return Err(Error::IllegalChange { pos, reason: "cell is already empty" });
                }
                self.set.delete(pos)?;
                self.members[pos] = false;
            }
            ScriptOp::Succ(i) => return Ok(position(self.set.succ(i)?)),
            ScriptOp::Pred(i) => return Ok(position(self.set.pred(i)?)),
            _ => return Err(unsupported(op, self.problem())),
        }
        Ok("ok".into())
    }
    fn oracle(&self, op: &ScriptOp) -> Result<String> {
        match *op {
            ScriptOp::Succ(i) => Ok(position(oracle::nextink_succ(&self.members, i))),
            ScriptOp::Pred(i) => Ok(position(oracle::nextink_pred(&self.members, i))),
            _ => Err(unsupported(op, self.problem())),
        }
    }
    fn probe(&self) -> ScriptOp {
        ScriptOp::Succ(0)
    }
    fn random_query(&self, rng: &mut ChaCha8Rng) -> ScriptOp {
        let i = rng.gen_range(0..self.len());
        if rng.gen_bool(0.5) {
            ScriptOp::Succ(i)
        } else {
            ScriptOp::Pred(i)
        }
    }
    fn state_check(&self) -> std::result::Result<(), String> {
        let want: Vec<usize> = (0..self.len()).filter(|&i| self.members[i]).collect();
        if self.set.elements() != want {
            return Err("ranked set contents differ from the cells".into());
        }
        Ok(())
    }
}

// ---- monoid range products

enum MonoidEval {
    Hierarchy(HierarchyRangeEval),
    StarFree(StarFreeEval),
}

struct MonoidProblem {
    problem: Problem,
    monoid: FiniteMonoid,
    eval: MonoidEval,
    word: DynamicWord,
}

impl MonoidProblem {
    fn elements(&self) -> Vec<Element> {
        self.word
            .cells()
            .iter()
            .map(|c| c.map_or(Element::IDENTITY, |s| Element(s.0)))
            .collect()
    }

    fn range(&self, l: usize, r: usize) -> Result<Element> {
        match &self.eval {
            MonoidEval::Hierarchy(h) => h.range(l, r),
            MonoidEval::StarFree(s) => s.range(l, r),
        }
    }

    fn put(&mut self, pos: usize, x: Element) -> Result<()> {
        match &mut self.eval {
            MonoidEval::Hierarchy(h) => h.set(pos, x),
            MonoidEval::StarFree(s) => s.set(pos, x),
        }
    }
}

impl Driver for MonoidProblem {
    fn problem(&self) -> Problem {
        self.problem
    }
    fn len(&self) -> usize {
        self.word.len()
    }
    fn symbols(&self) -> Vec<String> {
        self.monoid
            .elements()
            .filter(|x| !x.is_identity())
            .map(|x| self.monoid.name(x))
            .collect()
    }
    fn occupied(&self, _: Side, pos: usize) -> bool {
        self.word.cells()[pos].is_some()
    }
    fn exec(&mut self, op: &ScriptOp) -> Result<String> {
        match op {
            ScriptOp::Set { pos, symbol } => {
                let x = self.monoid.element(symbol)?;
                self.word.set(*pos, Symbol(x.0))?;
                self.put(*pos, x)?;
            }
            ScriptOp::Reset { pos } => {
                self.word.reset(*pos)?;
                self.put(*pos, Element::IDENTITY)?;
            }
            ScriptOp::Range { l, r } => return Ok(self.monoid.name(self.range(*l, *r)?)),
            ScriptOp::Member => return Ok(self.monoid.name(self.range(0, self.len() - 1)?)),
            _ => return Err(unsupported(op, self.problem)),
        }
        Ok("ok".into())
    }
    fn oracle(&self, op: &ScriptOp) -> Result<String> {
        let els = self.elements();
        let (l, r) = match *op {
            ScriptOp::Range { l, r } => (l, r),
            ScriptOp::Member => (0, self.len() - 1),
            _ => return Err(unsupported(op, self.problem)),
        };
        Ok(self.monoid.name(oracle::monoid_fold(&self.monoid, &els, l, r)))
    }
    fn probe(&self) -> ScriptOp {
        ScriptOp::Member
    }
}

// ---- regular languages

struct Regular {
    problem: Problem,
    engine: RegularEngine,
    reference: Dfa,
}

impl Driver for Regular {
    fn problem(&self) -> Problem {
        self.problem
    }
    fn len(&self) -> usize {
        self.engine.len()
    }
    fn symbols(&self) -> Vec<String> {
        let a = self.engine.alphabet();
        a.symbols().map(|s| a.name(s).to_string()).collect()
    }
    fn occupied(&self, _: Side, pos: usize) -> bool {
        self.engine.word().cells()[pos].is_some()
    }
    fn exec(&mut self, op: &ScriptOp) -> Result<String> {
        match op {
            ScriptOp::Set { pos, symbol } => {
                let s = checked_symbol(self.engine.alphabet(), symbol)?;
                self.engine.set(*pos, s)?;
            }
            ScriptOp::Reset { pos } => self.engine.reset(*pos)?,
            ScriptOp::Range { l, r } => return Ok(yes(self.engine.range(*l, *r)?)),
            ScriptOp::Member => return Ok(yes(self.engine.member()?)),
            _ => return Err(unsupported(op, self.problem)),
        }
        Ok("ok".into())
    }
    fn oracle(&self, op: &ScriptOp) -> Result<String> {
        let cells = self.engine.word().cells();
        // the reference automaton may order its alphabet differently
        let translated: Vec<Letter> = cells
            .iter()
            .map(|c| c.map(|s| self.reference.alphabet().symbol(self.engine.alphabet().name(s))).transpose())
            .collect::<Result<_>>()?;
        let (l, r) = match *op {
            ScriptOp::Range { l, r } => (l, r),
            ScriptOp::Member => (0, self.len().saturating_sub(1)),
            _ => return Err(unsupported(op, self.problem)),
        };
        if self.len() == 0 {
            return Ok(yes(self.reference.accepts(&[])));
        }
        Ok(yes(oracle::dfa_range(&self.reference, &translated, l, r)))
    }
    fn probe(&self) -> ScriptOp {
        ScriptOp::Member
    }
}

// ---- string equality

struct StringEquality {
    eq: StringEq,
    alphabet: Alphabet,
    n: usize,
}

impl StringEquality {
    fn cells(&self, side: Side) -> Vec<Letter> {
        (0..self.len()).map(|i| self.eq.get(side, i).expect("in range")).collect()
    }
}

impl Driver for StringEquality {
    fn problem(&self) -> Problem {
        Problem::Stringeq
    }
    fn len(&self) -> usize {
        self.n
    }
    fn symbols(&self) -> Vec<String> {
        self.alphabet.symbols().map(|s| self.alphabet.name(s).to_string()).collect()
    }
    fn two_sided(&self) -> bool {
        true
    }
    fn occupied(&self, side: Side, pos: usize) -> bool {
        self.eq.get(side, pos).map(|c| c.is_some()).unwrap_or(false)
    }
    fn exec(&mut self, op: &ScriptOp) -> Result<String> {
        match op {
            ScriptOp::SetU { pos, symbol } => self.eq.set(Side::U, *pos, self.alphabet.symbol(symbol)?)?,
            ScriptOp::SetV { pos, symbol } => self.eq.set(Side::V, *pos, self.alphabet.symbol(symbol)?)?,
            ScriptOp::ResetU { pos } => self.eq.reset(Side::U, *pos)?,
            ScriptOp::ResetV { pos } => self.eq.reset(Side::V, *pos)?,
            ScriptOp::Equals => return Ok(yes(self.eq.equals())),
            _ => return Err(unsupported(op, Problem::Stringeq)),
        }
        Ok("ok".into())
    }
    fn oracle(&self, op: &ScriptOp) -> Result<String> {
        match op {
            ScriptOp::Equals => Ok(yes(oracle::equals(&self.cells(Side::U), &self.cells(Side::V)))),
            _ => Err(unsupported(op, Problem::Stringeq)),
        }
    }
    fn probe(&self) -> ScriptOp {
        ScriptOp::Equals
    }
    fn random_query(&self, _: &mut ChaCha8Rng) -> ScriptOp {
        ScriptOp::Equals
    }
}

// ---- Dyck languages

enum DyckEngine {
    One(D1Engine),
    Typed(DkEngine),
    Range(DyckRange),
}

struct Dyck {
    problem: Problem,
    engine: DyckEngine,
    alphabet: Alphabet,
    typed: bool,
}

impl Dyck {
    fn word(&self) -> &DynamicWord {
        match &self.engine {
            DyckEngine::One(d) => d.word(),
            DyckEngine::Typed(d) => d.word(),
            DyckEngine::Range(d) => d.word(),
        }
    }

    fn apply(&mut self, c: &Change) -> Result<()> {
        match &mut self.engine {
            DyckEngine::One(d) => d.apply(c),
            DyckEngine::Typed(d) => d.apply(c),
            DyckEngine::Range(d) => d.apply(c),
        }
    }
}

impl Driver for Dyck {
    fn problem(&self) -> Problem {
        self.problem
    }
    fn len(&self) -> usize {
        self.word().len()
    }
    fn symbols(&self) -> Vec<String> {
        self.alphabet.symbols().map(|s| self.alphabet.name(s).to_string()).collect()
    }
    fn occupied(&self, _: Side, pos: usize) -> bool {
        self.word().cells()[pos].is_some()
    }
    fn exec(&mut self, op: &ScriptOp) -> Result<String> {
        match op {
            ScriptOp::Set { pos, symbol } => {
                let symbol = self.alphabet.symbol(symbol)?;
                self.apply(&Change::Set { pos: *pos, symbol })?;
            }
            ScriptOp::Reset { pos } => self.apply(&Change::Reset { pos: *pos })?,
            ScriptOp::Member => {
                return Ok(yes(match &self.engine {
                    DyckEngine::One(d) => d.member(),
                    DyckEngine::Typed(d) => d.member(),
                    DyckEngine::Range(d) => d.is_empty() || d.rangek(0, d.len() - 1)?,
                }))
            }
            ScriptOp::Range { l, r } => match &self.engine {
                DyckEngine::Range(d) => return Ok(yes(d.rangek(*l, *r)?)),
                _ => return Err(unsupported(op, self.problem)),
            },
            _ => return Err(unsupported(op, self.problem)),
        }
        Ok("ok".into())
    }
    fn oracle(&self, op: &ScriptOp) -> Result<String> {
        let cells = self.word().cells();
        match *op {
            ScriptOp::Member => Ok(yes(oracle::dyck_range(cells, 0, cells.len().saturating_sub(1), self.typed))),
            ScriptOp::Range { l, r } => Ok(yes(oracle::dyck_range(cells, l, r, self.typed))),
            _ => Err(unsupported(op, self.problem)),
        }
    }
    fn probe(&self) -> ScriptOp {
        ScriptOp::Member
    }
    fn random_query(&self, rng: &mut ChaCha8Rng) -> ScriptOp {
        if self.problem != Problem::DyckRange {
            return ScriptOp::Member;
        }
        let n = self.len();
        let l = rng.gen_range(0..n);
        ScriptOp::Range { l, r: rng.gen_range(l..n) }
    }
}

fn build(s: &Scenario, meter: &WorkMeter) -> Result<Box<dyn Driver>> {
    let n = s.n;
    if n == 0 {
        return Err(Error::OutOfRange { pos: 0, len: 0 });
    }
    let monoid = || s.monoid.clone().unwrap_or_else(example_monoid);
    let regular = |kind: EngineKind| -> Result<Box<dyn Driver>> {
        let reference = match (&s.dfa, &s.regex) {
            (Some(d), _) => d.clone(),
            (None, Some(r)) => regex::compile(r)?,
            (None, None) => regex::compile(EXAMPLE_REGEX)?,
        };
        let engine = RegularEngine::new(reference.clone(), n, s.epsilon, kind, meter.clone())?;
        Ok(Box::new(Regular {
            problem: s.problem,
            engine,
            reference,
        }))
    };
    Ok(match s.problem {
        Problem::Nextink => Box::new(NextInk {
            set: RankedSet::new(n, meter.clone()),
            members: vec![false; n],
        }),
        Problem::RangeEval => Box::new(MonoidProblem {
            problem: s.problem,
            monoid: monoid(),
            eval: MonoidEval::Hierarchy(HierarchyRangeEval::new(monoid(), n, s.epsilon, meter.clone())),
            word: DynamicWord::new(n),
        }),
        Problem::Starfree if s.monoid.is_some() || (s.regex.is_none() && s.dfa.is_none()) => {
            Box::new(MonoidProblem {
                problem: s.problem,
                monoid: monoid(),
                eval: MonoidEval::StarFree(StarFreeEval::new(monoid(), n, meter.clone())?),
                word: DynamicWord::new(n),
            })
        }
        Problem::Starfree => regular(EngineKind::StarFree)?,
        Problem::Regular => regular(s.engine)?,
        Problem::Stringeq => Box::new(StringEquality {
            eq: StringEq::new(n, meter.clone()),
            alphabet: Alphabet::new(["a", "b"]),
            n,
        }),
        Problem::Dyck1 => Box::new(Dyck {
            problem: s.problem,
            engine: DyckEngine::One(D1Engine::new(n, meter.clone())),
            alphabet: Alphabet::dyck(1),
            typed: false,
        }),
        Problem::Dyckk => Box::new(Dyck {
            problem: s.problem,
            engine: DyckEngine::Typed(DkEngine::new(n, s.types, meter.clone())),
            alphabet: Alphabet::dyck(s.types),
            typed: true,
        }),
        Problem::DyckRange => Box::new(Dyck {
            problem: s.problem,
            engine: DyckEngine::Range(DyckRange::new(n, s.types, s.epsilon, meter.clone())),
            alphabet: Alphabet::dyck(s.types),
            typed: true,
        }),
    })
}

/// A uniformly drawn cell of `side` whose occupancy equals `want`.
fn pick_cell(d: &dyn Driver, side: Side, want: bool, rng: &mut ChaCha8Rng) -> Option<usize> {
    let n = d.len();
    for _ in 0..16 {
        let p = rng.gen_range(0..n);
        if d.occupied(side, p) == want {
            return Some(p);
        }
    }
    let candidates: Vec<usize> = (0..n).filter(|&p| d.occupied(side, p) == want).collect();
    (!candidates.is_empty()).then(|| candidates[rng.gen_range(0..candidates.len())])
}

fn set_op(side: Side, two_sided: bool, pos: usize, symbol: String) -> ScriptOp {
    match (two_sided, side) {
        (false, _) => ScriptOp::Set { pos, symbol },
        (true, Side::U) => ScriptOp::SetU { pos, symbol },
        (true, Side::V) => ScriptOp::SetV { pos, symbol },
    }
}

fn reset_op(side: Side, two_sided: bool, pos: usize) -> ScriptOp {
    match (two_sided, side) {
        (false, _) => ScriptOp::Reset { pos },
        (true, Side::U) => ScriptOp::ResetU { pos },
        (true, Side::V) => ScriptOp::ResetV { pos },
    }
}

/// Next random operation; keeps every change legal.
fn random_op(d: &dyn Driver, mix: OpMix, symbols: &[String], rng: &mut ChaCha8Rng) -> ScriptOp {
    let two = d.two_sided();
    let side = if two && rng.gen_bool(0.5) { Side::V } else { Side::U };
    let total = (mix.set + mix.reset + mix.query).max(1);
    let roll = rng.gen_range(0..total);
    let set = |rng: &mut ChaCha8Rng| {
        pick_cell(d, side, false, rng).map(|p| set_op(side, two, p, symbols[rng.gen_range(0..symbols.len())].clone()))
    };
    let reset = |rng: &mut ChaCha8Rng| pick_cell(d, side, true, rng).map(|p| reset_op(side, two, p));
    if roll < mix.set {
        set(rng).or_else(|| reset(rng)).expect("some cell exists")
    } else if roll < mix.set + mix.reset {
        reset(rng).or_else(|| set(rng)).expect("some cell exists")
    } else {
        d.random_query(rng)
    }
}

fn verify_step(d: &mut dyn Driver, op: &ScriptOp, answer: &str) -> Result<Option<String>> {
    if op.is_change() {
        if let Err(e) = d.state_check() {
            return Ok(Some(e));
        }
        let probe = d.probe();
        let got = d.exec(&probe)?;
        let want = d.oracle(&probe)?;
        return Ok((got != want).then(|| format!("after change, `{probe}` gives {got} but the oracle says {want}")));
    }
    let want = d.oracle(op)?;
    Ok((answer != want).then(|| format!("engine answered {answer} but the oracle says {want}")))
}

pub fn run(s: &Scenario) -> Result<Report> {
    let meter = WorkMeter::new();
    let mut d = build(s, &meter)?;
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let symbols = d.symbols();
    if s.fill > 0.0 {
        let sides: &[Side] = if d.two_sided() { &[Side::U, Side::V] } else { &[Side::U] };
        for &side in sides {
            for p in 0..d.len() {
                if rng.gen_bool(s.fill.min(1.0)) {
                    let sym = symbols[rng.gen_range(0..symbols.len())].clone();
                    d.exec(&set_op(side, d.two_sided(), p, sym))?;
                }
            }
        }
    }
    let mut report = Report::default();
    let count = s.script.as_ref().map_or(s.ops, Vec::len);
    for idx in 0..count {
        let op = match &s.script {
            Some(script) => script[idx].clone(),
            None => random_op(d.as_ref(), s.mix, &symbols, &mut rng),
        };
        meter.reset();
        let answer = d.exec(&op)?;
        let work = meter.read();
        let (arg1, arg2) = op.args();
        report.rows.push(Row {
            idx,
            op: op.name(),
            arg1,
            arg2,
            answer: answer.clone(),
            work,
        });
        if s.verify {
            if let Some(msg) = verify_step(d.as_mut(), &op, &answer)? {
                report.divergence = Some(format!("op {idx} (`{op}`): {msg}"));
                break;
            }
        }
    }
    Ok(report)
}

// ---- scaling

/// Growth shape a problem's per-operation work is expected to follow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Shape {
    Log,
    Log3,
    Linear,
    NLogN,
    Power(f64),
}

impl Shape {
    pub fn eval(self, n: f64) -> f64 {
        match self {
            Shape::Log => n.log2(),
            Shape::Log3 => n.log2().powi(3),
            Shape::Linear => n,
            Shape::NLogN => n * n.log2(),
            Shape::Power(e) => n.powf(e),
        }
    }

    /// The bound a scenario's changes are expected to obey.
    pub fn for_scenario(s: &Scenario) -> Shape {
        match s.problem {
            Problem::Nextink | Problem::Starfree => Shape::Log,
            Problem::Regular if s.engine == EngineKind::Hierarchy => Shape::Power(s.epsilon),
            Problem::Regular => Shape::Log,
            Problem::RangeEval | Problem::DyckRange => Shape::Power(s.epsilon),
            Problem::Stringeq => Shape::Linear,
            Problem::Dyck1 => Shape::Log3,
            Problem::Dyckk => Shape::NLogN,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Log => write!(f, "log n"),
            Shape::Log3 => write!(f, "(log n)^3"),
            Shape::Linear => write!(f, "n"),
            Shape::NLogN => write!(f, "n log n"),
            Shape::Power(e) => write!(f, "n^{e}"),
        }
    }
}

/// Least-squares fit of `w ≈ a + c·f(n)`, plus growth diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fit {
    pub shape: Shape,
    pub coefficient: f64,
    pub intercept: f64,
    pub r2: f64,
    /// Largest `(w₂/w₁) / (f(n₂)/f(n₁))` over consecutive sizes.
    pub max_step_ratio: f64,
    /// Largest `(w/f(n)) / (w₀/f(n₀))`, relative to the smallest size.
    pub max_normalized_growth: f64,
}

impl fmt::Display for Fit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "w ≈ {:.3} + {:.4}·{} (R² = {:.4}, step ratio ≤ {:.3}, growth ≤ {:.3})",
            self.intercept, self.coefficient, self.shape, self.r2, self.max_step_ratio, self.max_normalized_growth
        )
    }
}

pub fn fit(shape: Shape, points: &[(usize, f64)]) -> Fit {
    let xs: Vec<f64> = points.iter().map(|&(n, _)| shape.eval(n as f64)).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, w)| w).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let c = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - c * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - a - c * x).powi(2)).sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    let step = xs
        .windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| (y[1] / y[0]) / (x[1] / x[0]))
        .fold(0.0, f64::max);
    let growth = xs.iter().zip(&ys).map(|(x, y)| (y / x) / (ys[0] / xs[0])).fold(0.0, f64::max);
    Fit {
        shape,
        coefficient: c,
        intercept: a,
        r2,
        max_step_ratio: step,
        max_normalized_growth: growth,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeStats {
    pub n: usize,
    pub change_mean: f64,
    pub change_max: u64,
    pub query_mean: f64,
    pub query_max: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleReport {
    pub problem: Problem,
    pub sizes: Vec<SizeStats>,
    /// Fit of the mean change work against the scenario's shape.
    pub change_fit: Fit,
}

/// Runs `base` at each size and fits the mean change work.
pub fn scale(base: &Scenario, ns: &[usize]) -> Result<ScaleReport> {
    if ns.len() < 3 {
        return Err(Error::Parse {
            line: 0,
            message: "scaling needs at least three sizes".into(),
        });
    }
    let mut sizes = Vec::with_capacity(ns.len());
    for &n in ns {
        let s = Scenario { n, ..base.clone() };
        let report = run(&s)?;
        if let Some(d) = report.divergence {
            return Err(Error::Parse { line: 0, message: format!("n = {n}: {d}") });
        }
        let (mut cw, mut cmax, mut cc) = (0u64, 0u64, 0usize);
        let (mut qw, mut qmax, mut qc) = (0u64, 0u64, 0usize);
        for row in &report.rows {
            let change = matches!(row.op, "set" | "reset" | "setu" | "setv" | "resetu" | "resetv");
            if change {
                cw += row.work;
                cmax = cmax.max(row.work);
                cc += 1;
            } else {
                qw += row.work;
                qmax = qmax.max(row.work);
                qc += 1;
            }
        }
        sizes.push(SizeStats {
            n,
            change_mean: cw as f64 / cc.max(1) as f64,
            change_max: cmax,
            query_mean: qw as f64 / qc.max(1) as f64,
            query_max: qmax,
        });
    }
    let points: Vec<(usize, f64)> = sizes.iter().map(|s| (s.n, s.change_mean)).collect();
    Ok(ScaleReport {
        problem: base.problem,
        change_fit: fit(Shape::for_scenario(base), &points),
        sizes,
    })
}
