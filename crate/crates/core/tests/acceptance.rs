//! Acceptance suite: one PASS/FAIL line per criterion, detail lines indented.
//!
//! A sub-check listed in `KNOWN_FAILURES` still fails its criterion, but
//! does not by itself make the process exit non-zero; every other failure
//! does, and so does a known failure that starts passing.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use dynlang::algebra::{example_monoid, kr_decompose, regex, transition_monoid, Element, FiniteMonoid, KrDecomposition, DEFAULT_MONOID_CAP};
use dynlang::bench::{self, Problem, Scenario};
use dynlang::dyck::balance::{BalancePair, ChangeKind, Effect};
use dynlang::dyck::{D1Engine, DkEngine};
use dynlang::dyck_range::DyckRange;
use dynlang::hierarchy::{HierarchyParams, HierarchyRangeEval, HierarchyStore, MonoidCombine};
use dynlang::oracle;
use dynlang::regular::{EngineKind, RegularEngine};
use dynlang::script::ScriptOp;
use dynlang::starfree::StarFreeEval;
use dynlang::string_eq::{reduce_to_dyck, Side, StringEq};
use dynlang::{Letter, RankedSet, Symbol, WorkMeter};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sub-checks that cannot pass as stated; see the diagnosis printed with them.
const KNOWN_FAILURES: &[&str] = &["literal-regex-monoid"];

struct Outcome {
    pass: bool,
    /// Failed sub-checks outside `KNOWN_FAILURES`.
    unexpected: usize,
    /// Known failures that passed.
    fixed: Vec<&'static str>,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            pass: true,
            unexpected: 0,
            fixed: Vec::new(),
            summary: String::new(),
            details: Vec::new(),
        }
    }

    /// Records a sub-check; a false `ok` fails the criterion.
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        self.details.push(format!("{} {what}", if ok { "ok  " } else { "FAIL" }));
        self.pass &= ok;
        self.unexpected += usize::from(!ok);
    }

    /// Like `check`, for a sub-check listed in `KNOWN_FAILURES`.
    fn check_known(&mut self, key: &'static str, ok: bool, what: impl Into<String>) {
        assert!(KNOWN_FAILURES.contains(&key));
        let what = what.into();
        self.details.push(format!("{} {what}{}", if ok { "ok  " } else { "FAIL" }, if ok { "" } else { " [known failure]" }));
        self.pass &= ok;
        if ok {
            self.fixed.push(key);
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.details.push(format!("     {}", what.into()));
    }
}

/// Visits every filling of cells `0..n` with `choices` or the empty marker,
/// walking depth-first so that each step is a single set or reset.
fn walk<S>(
    s: &mut S,
    n: usize,
    choices: &[Symbol],
    set: &dyn Fn(&mut S, usize, Symbol),
    reset: &dyn Fn(&mut S, usize),
    visit: &mut dyn FnMut(&S),
) {
    fn rec<S>(
        s: &mut S,
        i: usize,
        n: usize,
        choices: &[Symbol],
        set: &dyn Fn(&mut S, usize, Symbol),
        reset: &dyn Fn(&mut S, usize),
        visit: &mut dyn FnMut(&S),
    ) {
        if i == n {
            visit(s);
            return;
        }
        rec(s, i + 1, n, choices, set, reset, visit);
        for &c in choices {
            set(s, i, c);
            rec(s, i + 1, n, choices, set, reset, visit);
            reset(s, i);
        }
    }
    rec(s, 0, n, choices, set, reset, visit);
}

fn syms(k: u32) -> Vec<Symbol> {
    (0..k).map(Symbol).collect()
}

fn elements_of(cells: &[Letter]) -> Vec<Element> {
    cells.iter().map(|c| c.map_or(Element::IDENTITY, |s| Element(s.0))).collect()
}

// ---------------------------------------------------------------- 1

fn exhaustive_nextink(out: &mut Outcome) {
    let n = 12;
    let mut st = (RankedSet::new(n, WorkMeter::new()), vec![false; n]);
    let (mut words, mut bad) = (0, 0);
    walk(
        &mut st,
        n,
        &[Symbol(0)],
        &|s, i, _| {
            s.0.insert(i).unwrap();
            s.1[i] = true;
        },
        &|s, i| {
            s.0.delete(i).unwrap();
            s.1[i] = false;
        },
        &mut |s| {
            words += 1;
            for i in 0..n {
                bad += usize::from(s.0.succ(i).unwrap() != oracle::nextink_succ(&s.1, i));
                bad += usize::from(s.0.pred(i).unwrap() != oracle::nextink_pred(&s.1, i));
            }
        },
    );
    out.check(bad == 0, format!("ranked set, n = {n}: {words} sets, succ/pred at every i, {bad} divergences"));
}

enum Eval {
    H(HierarchyRangeEval),
    S(StarFreeEval),
}

impl Eval {
    fn set(&mut self, i: usize, x: Element) {
        match self {
            Eval::H(h) => h.set(i, x).unwrap(),
            Eval::S(s) => s.set(i, x).unwrap(),
        }
    }
    fn range(&self, l: usize, r: usize) -> Element {
        match self {
            Eval::H(h) => h.range(l, r).unwrap(),
            Eval::S(s) => s.range(l, r).unwrap(),
        }
    }
}

fn exhaustive_monoid(out: &mut Outcome, label: &str, m: &FiniteMonoid, n: usize, starfree: bool) {
    let eval = if starfree {
        Eval::S(StarFreeEval::new(m.clone(), n, WorkMeter::new()).unwrap())
    } else {
        Eval::H(HierarchyRangeEval::new(m.clone(), n, 0.5, WorkMeter::new()))
    };
    let mut st = (eval, vec![None; n]);
    let nonid: Vec<Symbol> = m.elements().skip(1).map(|x| Symbol(x.0)).collect();
    let (mut words, mut bad) = (0, 0);
    walk(
        &mut st,
        n,
        &nonid,
        &|s, i, c| {
            s.0.set(i, Element(c.0));
            s.1[i] = Some(c);
        },
        &|s, i| {
            s.0.set(i, Element::IDENTITY);
            s.1[i] = None;
        },
        &mut |s| {
            words += 1;
            let els = elements_of(&s.1);
            for l in 0..n {
                for r in l..n {
                    bad += usize::from(s.0.range(l, r) != oracle::monoid_fold(m, &els, l, r));
                }
            }
        },
    );
    out.check(bad == 0, format!("{label}, n = {n}: {words} sequences, all ranges, {bad} divergences"));
}

fn exhaustive_regular(out: &mut Outcome, kind: EngineKind) {
    let n = 6;
    let dfa = regex::compile(bench::EXAMPLE_REGEX).unwrap();
    let mut e = RegularEngine::new(dfa.clone(), n, 0.5, kind, WorkMeter::new()).unwrap();
    assert_eq!(e.alphabet(), dfa.alphabet());
    let (mut words, mut bad) = (0, 0);
    walk(
        &mut e,
        n,
        &syms(3),
        &|e, i, c| e.set(i, c).unwrap(),
        &|e, i| e.reset(i).unwrap(),
        &mut |e| {
            words += 1;
            let cells = e.word().cells();
            bad += usize::from(e.member().unwrap() != oracle::dfa_range(&dfa, cells, 0, n - 1));
            for l in 0..n {
                for r in l..n {
                    bad += usize::from(e.range(l, r).unwrap() != oracle::dfa_range(&dfa, cells, l, r));
                }
            }
        },
    );
    out.check(bad == 0, format!("regular ({kind}), n = {n}: {words} words, member + all ranges, {bad} divergences"));
}

fn exhaustive_stringeq(out: &mut Outcome) {
    let n = 4;
    let mut e = StringEq::new(n, WorkMeter::new());
    let side = |i: usize| if i < n { (Side::U, i) } else { (Side::V, i - n) };
    let (mut pairs, mut bad) = (0, 0);
    walk(
        &mut e,
        2 * n,
        &syms(2),
        &|e, i, c| {
            let (s, p) = side(i);
            e.set(s, p, c).unwrap()
        },
        &|e, i| {
            let (s, p) = side(i);
            e.reset(s, p).unwrap()
        },
        &mut |e| {
            pairs += 1;
            let u: Vec<Letter> = (0..n).map(|p| e.get(Side::U, p).unwrap()).collect();
            let v: Vec<Letter> = (0..n).map(|p| e.get(Side::V, p).unwrap()).collect();
            bad += usize::from(e.equals() != oracle::equals(&u, &v));
        },
    );
    out.check(bad == 0, format!("string equality, n = {n}: {pairs} pairs, {bad} divergences"));
}

fn exhaustive_d1(out: &mut Outcome) {
    let n = 10;
    let mut d = D1Engine::new(n, WorkMeter::new());
    let (mut words, mut bad) = (0, 0);
    walk(
        &mut d,
        n,
        &syms(2),
        &|d, i, c| d.set(i, c).unwrap(),
        &|d, i| d.reset(i).unwrap(),
        &mut |d| {
            words += 1;
            let w = d.word().word();
            let rep = oracle::dyck(&w, false);
            bad += usize::from(d.member() != rep.member || d.root() != rep.unmatched);
        },
    );
    out.check(bad == 0, format!("D1 engine, n = {n}: {words} words, member + root pair, {bad} divergences"));
}

fn exhaustive_dk(out: &mut Outcome) {
    let n = 6;
    let mut d = DkEngine::new(n, 2, WorkMeter::new());
    let (mut words, mut bad, mut broken) = (0, 0, 0);
    walk(
        &mut d,
        n,
        &syms(4),
        &|d, i, c| d.set(i, c).unwrap(),
        &|d, i| d.reset(i).unwrap(),
        &mut |d| {
            words += 1;
            bad += usize::from(d.member() != oracle::dyck(&d.word().word(), true).member);
            broken += usize::from(d.check_invariants().is_err());
        },
    );
    out.check(
        bad == 0 && broken == 0,
        format!("Dk engine (k = 2), n = {n}: {words} words incl. deletions, {bad} divergences, {broken} invariant breaks"),
    );
}

fn exhaustive_dyck_range(out: &mut Outcome) {
    let n = 8;
    let mut d = DyckRange::new(n, 1, 0.5, WorkMeter::new());
    let (mut words, mut bad) = (0, 0);
    walk(
        &mut d,
        n,
        &syms(2),
        &|d, i, c| d.set(i, c).unwrap(),
        &|d, i| d.reset(i).unwrap(),
        &mut |d| {
            words += 1;
            let cells = d.word().cells();
            for p in 0..n {
                for q in p..n {
                    bad += usize::from(d.range1(p, q).unwrap() != oracle::dyck_range(cells, p, q, false));
                    for i in p..=q {
                        if cells[i] == Some(Symbol(0)) {
                            bad += usize::from(d.find_match(i, p, q).unwrap() != oracle::dyck_match(cells, i, p, q));
                        }
                    }
                }
            }
        },
    );
    out.check(bad == 0, format!("Dyck ranges (k = 1), n = {n}: {words} words, range1 + find_match, {bad} divergences"));

    let n = 6;
    let mut d = DyckRange::new(n, 2, 0.5, WorkMeter::new());
    let (mut words, mut bad) = (0, 0);
    walk(
        &mut d,
        n,
        &syms(4),
        &|d, i, c| d.set(i, c).unwrap(),
        &|d, i| d.reset(i).unwrap(),
        &mut |d| {
            words += 1;
            let cells = d.word().cells();
            for p in 0..n {
                for q in p..n {
                    bad += usize::from(d.rangek(p, q).unwrap() != oracle::dyck_range(cells, p, q, true));
                }
            }
        },
    );
    out.check(bad == 0, format!("Dyck ranges (k = 2), n = {n}: {words} words, typed ranges, {bad} divergences"));
}

fn criterion1() -> Outcome {
    let mut out = Outcome::new();
    exhaustive_nextink(&mut out);
    let m = example_monoid();
    exhaustive_monoid(&mut out, "hierarchy, example monoid", &m, 5, false);
    exhaustive_monoid(&mut out, "hierarchy, Z3", &FiniteMonoid::cyclic_group(3), 6, false);
    exhaustive_monoid(&mut out, "star-free, example monoid", &m, 5, true);
    exhaustive_regular(&mut out, EngineKind::StarFree);
    exhaustive_regular(&mut out, EngineKind::Hierarchy);
    exhaustive_stringeq(&mut out);
    exhaustive_d1(&mut out);
    exhaustive_dk(&mut out);
    exhaustive_dyck_range(&mut out);
    out.summary = "exhaustive small-scale oracle equivalence".into();
    out
}

// ---------------------------------------------------------------- 2

fn criterion2() -> Outcome {
    let mut out = Outcome::new();
    let mut runs: Vec<(String, Scenario)> = Problem::ALL
        .into_iter()
        .map(|p| (p.to_string(), Scenario::new(p, 256)))
        .collect();
    let mut hier = Scenario::new(Problem::Regular, 256);
    hier.engine = EngineKind::Hierarchy;
    runs.push(("regular (hierarchy)".into(), hier));
    for (label, mut s) in runs {
        s.ops = 10_000;
        s.seed = 20240;
        s.verify = true;
        let r = bench::run(&s).unwrap();
        let resets = r.rows.iter().filter(|r| r.op.starts_with("reset")).count();
        match r.divergence {
            None => out.check(r.rows.len() == s.ops, format!("{label}: {} ops verified ({resets} resets), 0 divergences", r.rows.len())),
            Some(d) => out.check(false, format!("{label}: {d}")),
        }
    }
    out.summary = "randomized oracle equivalence, 10^4 ops at n = 256".into();
    out
}

// ---------------------------------------------------------------- 3

fn criterion3() -> Outcome {
    let mut out = Outcome::new();
    let m = example_monoid();
    let el = |c: char| match c {
        'Q' => m.element("A2").unwrap(),
        c => m.element(&c.to_string()).unwrap(),
    };
    let seq: Vec<Element> = "AA1AABBA11A1AABAA1B11A1B1A1A11BB".chars().map(el).collect();
    let ev = StarFreeEval::from_elements(m.clone(), &seq, WorkMeter::new()).unwrap();
    let result = ev.range(1, 26).unwrap();
    out.check(result == m.element("E").unwrap(), format!("sequence range(1,26) = {}", m.name(result)));
    let k = ev.switching_positions().unwrap();
    let in_query: Vec<usize> = k.iter().copied().filter(|&i| (1..=26).contains(&i)).collect();
    out.check(in_query == [6, 14, 18, 23], format!("switching positions within the query: {in_query:?} (all: {k:?})"));
    let parts = ev.split_parts().unwrap();
    let (k1, kq) = (in_query[0], *in_query.last().unwrap());
    let tv = |e: Element, emb: &[Element]| m.name(emb[e.index()]);
    let factors = [
        tv(parts.v.range(1, k1).unwrap(), parts.v_embedding),
        tv(parts.t.range(1, k1).unwrap(), parts.t_embedding),
        tv(parts.u.range(k1 + 1, kq).unwrap(), parts.t_embedding),
        tv(parts.v.range(kq + 1, 26).unwrap(), parts.v_embedding),
        tv(parts.t.range(kq + 1, 26).unwrap(), parts.t_embedding),
    ];
    out.check(factors == ["A2", "B", "E", "A", "1"], format!("factors v·t·u·v·t = {factors:?}"));

    // interval hierarchy at n = 27, t = 3
    let params = HierarchyParams::with_t(27, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cells: Vec<Element> = (0..27).map(|_| Element(rng.gen_range(0..6))).collect();
    let mut store = HierarchyStore::from_values(params, MonoidCombine(m.clone()), &cells, WorkMeter::new());
    let chain: Vec<(usize, usize)> = store.chain(2, 22).unwrap().iter().map(|f| (f.start, f.end)).collect();
    out.check(chain == [(2, 3), (3, 9), (9, 18), (18, 21), (21, 23)], format!("range(2,22) chain {chain:?}"));
    out.check(
        store.range(2, 22).unwrap() == oracle::monoid_fold(&m, &cells, 2, 22),
        "range(2,22) equals the fold",
    );
    let snapshot = |s: &HierarchyStore<MonoidCombine>| {
        let mut v = Vec::new();
        for k in 0..params.h {
            let step = params.pow(k);
            for block in 0..params.padded / params.pow(k + 1) {
                let base = block * step * params.t;
                for a in 0..params.t {
                    for b in a + 1..=params.t {
                        v.push(((k, base + a * step, base + b * step), s.lookup(k, base + a * step, base + b * step)));
                    }
                }
            }
        }
        v
    };
    let before = snapshot(&store);
    let new = Element((cells[23].0 + 1) % 6);
    store.set(23, new).unwrap();
    let after = snapshot(&store);
    let stray = before
        .iter()
        .zip(&after)
        .filter(|((key, x), (_, y))| x != y && !(key.1 <= 23 && 23 < key.2))
        .count();
    out.check(stray == 0, "change at 23 touches only intervals containing 23");
    let id = store.lookup(1, 18, 27) == m.mul(m.mul(store.lookup(0, 18, 21), store.lookup(0, 21, 24)), store.lookup(0, 24, 27));
    out.check(id, "m'[18,27) = m[18,21)∘m'[21,24)∘m[24,27)");
    out.check(store.check_consistency().is_ok(), "store consistent after the change");

    let word: Vec<Symbol> = ")())(()".chars().map(|c| Symbol(u32::from(c == ')'))).collect();
    let pair = word
        .iter()
        .map(|s| if s.0 == 0 { BalancePair::OPEN } else { BalancePair::CLOSE })
        .fold(BalancePair::EMPTY, BalancePair::compose);
    out.check(
        pair == BalancePair::new(2, 1) && oracle::dyck(&word, false).unmatched == pair,
        format!(")())(() folds to ({}, {})", pair.l, pair.r),
    );
    out.summary = "worked examples reproduced".into();
    out
}

// ---------------------------------------------------------------- 4

fn criterion4() -> Outcome {
    let mut out = Outcome::new();
    let m = example_monoid();
    let literal = "c*ac*ac*b(a+b+c)*";
    let tm = transition_monoid(&regex::compile(literal).unwrap().minimize(), DEFAULT_MONOID_CAP).unwrap();
    let iso = tm.monoid.isomorphism_to(&m).is_some();
    out.check_known(
        "literal-regex-monoid",
        iso,
        format!("syntactic monoid of {literal} has {} elements, isomorphic to the 6-element table: {iso}", tm.monoid.size()),
    );
    if !iso {
        out.note("a third `a` before the first `b` can never be repaired, so `aaa` is an extra zero;");
        out.note("the 6-element table (A·A² = A²) describes `at least two a's before the first b`:");
        let prose = "c*ac*a(a+c)*b(a+b+c)*";
        let tm = transition_monoid(&regex::compile(prose).unwrap().minimize(), DEFAULT_MONOID_CAP).unwrap();
        let ok = tm.monoid.isomorphism_to(&m).is_some();
        out.note(format!("{prose} gives {} elements, isomorphic: {ok}", tm.monoid.size()));
    }

    let d = kr_decompose(&m).unwrap();
    let names = |emb: &[Element]| emb.iter().map(|&x| m.name(x)).collect::<Vec<_>>();
    match &d {
        KrDecomposition::Split { t, v } => {
            let (tn, vn) = (names(&t.sub.embedding), names(&v.sub.embedding));
            out.check(tn == ["1", "B", "D", "E"] && vn == ["1", "A", "A2"], format!("T = {tn:?}, V = {vn:?}"));
            let cyclic = match v.decomposition {
                KrDecomposition::Cyclic { generator, threshold } => {
                    Some((v.sub.monoid.name(generator), threshold))
                }
                _ => None,
            };
            out.check(
                cyclic == Some(("A".to_string(), 2)),
                format!("case D at the top, case {} on V with generator/threshold {cyclic:?}, case {} on T", v.decomposition.tag(), t.decomposition.tag()),
            );
        }
        other => out.check(false, format!("expected case D, got {}", other.tag())),
    }
    out.check(d.check(&m).is_ok(), "decomposition satisfies the case conditions");

    let mut cells = 0;
    let mut bad = 0;
    for kind in ChangeKind::ALL {
        let table = kind.table();
        for l1 in 0..=4u32 {
            for r1 in 0..=4u32 {
                for l2 in 0..=4u32 {
                    for r2 in 0..=4u32 {
                        let (y1, y2) = (BalancePair::new(l1, r1), BalancePair::new(l2, r2));
                        let before = y1.compose(y2);
                        for in_first in [true, false] {
                            for e in kind.effects() {
                                let child = if in_first { y1 } else { y2 };
                                let (Some(l), Some(r)) = (child.l.checked_add_signed(e.dl), child.r.checked_add_signed(e.dr)) else {
                                    continue;
                                };
                                let changed = BalancePair::new(l, r);
                                let after = if in_first { changed.compose(y2) } else { y1.compose(changed) };
                                let got = Effect::new(after.l as i32 - before.l as i32, after.r as i32 - before.r as i32);
                                cells += 1;
                                bad += usize::from(got != table.parent_effect(in_first, r1, l2, e));
                            }
                        }
                    }
                }
            }
        }
    }
    out.check(bad == 0, format!("effect tables for all four change kinds: {cells} cases against compose, {bad} wrong"));
    out.summary = "structural checks".into();
    out
}

// ---------------------------------------------------------------- 5

fn scale_line(out: &mut Outcome, label: &str, s: &Scenario, ns: &[usize], ok: impl Fn(&bench::Fit) -> bool) {
    let rep = bench::scale(s, ns).unwrap();
    let f = rep.change_fit;
    let means: Vec<String> = rep.sizes.iter().map(|z| format!("{}:{:.0}", z.n, z.change_mean)).collect();
    out.check(ok(&f), format!("{label}: {f}"));
    out.note(format!("mean change work {}", means.join(" ")));
}

fn criterion5() -> Outcome {
    let mut out = Outcome::new();
    let base = |p: Problem, ops: usize, fill: f64| {
        let mut s = Scenario::new(p, 0);
        s.ops = ops;
        s.seed = 5;
        s.fill = fill;
        s
    };
    let pow2 = |a: u32, b: u32, step: usize| (a..=b).step_by(step).map(|k| 1usize << k).collect::<Vec<_>>();

    let mut s = base(Problem::Nextink, 4000, 0.5);
    s.mix.query = 50;
    scale_line(&mut out, "ranked set vs log n", &s, &pow2(8, 16, 2), |f| f.r2 >= 0.95);

    let s = base(Problem::Dyck1, 2000, 0.5);
    scale_line(&mut out, "D1 changes vs (log n)^3", &s, &pow2(6, 14, 2), |f| f.r2 >= 0.95);

    for eps in [0.4, 1.0] {
        // sizes n = t^(2/ε), so that t = n^(ε/2) exactly
        let ts: &[usize] = if eps < 0.5 { &[2, 3, 4, 5, 6] } else { &[3, 4, 6, 8, 12] };
        let ns: Vec<usize> = ts.iter().map(|&t| (t as f64).powf(2.0 / eps).round() as usize).collect();
        for p in [Problem::RangeEval, Problem::DyckRange] {
            let mut s = base(p, 1500, 0.5);
            s.epsilon = eps;
            s.mix.query = 0;
            scale_line(&mut out, &format!("{p} changes at ε = {eps}, step ratio ≤ 1.25"), &s, &ns, |f| f.max_step_ratio <= 1.25);
        }
    }

    let s = base(Problem::Stringeq, 1000, 0.5);
    scale_line(&mut out, "string equality changes vs n", &s, &pow2(7, 11, 1), |f| f.r2 >= 0.95);

    let mut s = base(Problem::Dyckk, 400, 0.5);
    s.mix.query = 0;
    scale_line(&mut out, "Dk changes vs n log n, growth ≤ 1.5", &s, &pow2(5, 9, 1), |f| f.max_normalized_growth <= 1.5);

    // typed range queries on a fixed balanced word, growing query length
    let eps = 0.5;
    let n = 1024;
    let meter = WorkMeter::new();
    let mut d = DyckRange::new(n, 2, eps, meter.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    // concatenated random balanced blocks of length 2..=8
    let mut i = 0;
    while i < n {
        let half = rng.gen_range(1..=4).min((n - i) / 2);
        let mut stack = Vec::new();
        let mut opened = 0;
        while opened < half || !stack.is_empty() {
            let open = opened < half && (stack.is_empty() || rng.gen_bool(0.5));
            let s = if open {
                opened += 1;
                let s = Symbol(2 * rng.gen_range(0..2));
                stack.push(s);
                s
            } else {
                Symbol(stack.pop().unwrap().0 + 1)
            };
            d.set(i, s).unwrap();
            i += 1;
        }
    }
    let mut pts = Vec::new();
    for len in [64usize, 128, 256, 512, 1024] {
        // longest balanced prefix of at most `len` cells
        let q = (0..len).rev().find(|&q| d.range1(0, q).unwrap()).unwrap();
        meter.reset();
        let ok = d.rangek(0, q).unwrap();
        pts.push((q + 1, meter.read() as f64));
        out.check(ok, format!("balanced prefix of length {} accepted", q + 1));
    }
    let f = bench::fit(bench::Shape::Power(1.0 + eps), &pts);
    out.check(f.max_normalized_growth <= 1.5, format!("typed range queries vs len^{}: {f}", 1.0 + eps));
    out.note(format!("query work {pts:?}"));
    out.summary = "work scaling fits".into();
    out
}

// ---------------------------------------------------------------- 6

fn criterion6() -> Outcome {
    let mut out = Outcome::new();
    let (mut pairs, mut bad) = (0, 0);
    for len in 0..=4u32 {
        let words: Vec<Vec<Symbol>> = (0..1u32 << len)
            .map(|bits| (0..len).map(|i| Symbol((bits >> i) & 1)).collect())
            .collect();
        for s1 in &words {
            for s2 in &words {
                pairs += 1;
                let w = reduce_to_dyck(s1, s2, 2).unwrap();
                let via_oracle = oracle::dyck(&w, true).member;
                let mut d = DkEngine::new(w.len(), 2, WorkMeter::new());
                for (i, &s) in w.iter().enumerate() {
                    d.set(i, s).unwrap();
                }
                let mut e = StringEq::new(len as usize, WorkMeter::new());
                for i in 0..len as usize {
                    e.set(Side::U, i, s1[i]).unwrap();
                    e.set(Side::V, i, s2[i]).unwrap();
                }
                let want = s1 == s2;
                bad += usize::from(via_oracle != want || d.member() != want || e.equals() != want);
            }
        }
    }
    out.check(bad == 0, format!("{pairs} pairs with |s| ≤ 4: equality ⇔ typed-Dyck membership (oracle and Dk engine), {bad} wrong"));
    out.summary = "string equality reduces to typed Dyck membership".into();
    out
}

// ---------------------------------------------------------------- 7

fn criterion7() -> Outcome {
    let mut out = Outcome::new();
    let regexes = [bench::EXAMPLE_REGEX, "(a+b)*ab(a+b)*", "a*b*", "(ab)*", "(a+b)*bb(a+b)*a"];
    for (k, re) in regexes.into_iter().enumerate() {
        let mut s = Scenario::new(Problem::Regular, 64);
        s.regex = Some(re.to_string());
        s.ops = 1000;
        s.seed = 70 + k as u64;
        s.mix.query = 30;
        s.engine = EngineKind::Hierarchy;
        let hier = bench::run(&s).unwrap();
        let script: Vec<ScriptOp> = hier
            .rows
            .iter()
            .map(|r| format!("{} {} {}", r.op, r.arg1, r.arg2).parse().unwrap())
            .collect();
        s.engine = EngineKind::StarFree;
        s.script = Some(script);
        let sf = bench::run(&s).unwrap();
        let disagree = hier.rows.iter().zip(&sf.rows).filter(|(a, b)| a.answer != b.answer).count();
        let queries = hier.rows.iter().filter(|r| r.op == "range").count();
        out.check(
            disagree == 0 && sf.rows.len() == hier.rows.len(),
            format!("{re}: {} ops ({queries} range queries), {disagree} disagreements", hier.rows.len()),
        );
    }
    out.summary = "star-free and hierarchy engines agree".into();
    out
}

fn main() {
    let criteria: [(u8, fn() -> Outcome); 7] = [
        (1, criterion1),
        (2, criterion2),
        (3, criterion3),
        (4, criterion4),
        (5, criterion5),
        (6, criterion6),
        (7, criterion7),
    ];
    let mut failed = Vec::new();
    let mut fatal = false;
    for (k, f) in criteria {
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome {
                pass: false,
                unexpected: 1,
                fixed: Vec::new(),
                summary: format!("panicked: {msg}"),
                details: Vec::new(),
            }
        });
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        println!("criterion {k}: {verdict} - {} ({:.1}s)", out.summary, start.elapsed().as_secs_f64());
        for d in &out.details {
            println!("    {d}");
        }
        if !out.pass {
            failed.push(k);
        }
        for key in &out.fixed {
            println!("    known failure `{key}` now passes; remove it from KNOWN_FAILURES");
        }
        fatal |= out.unexpected > 0 || !out.fixed.is_empty();
    }
    if failed.is_empty() {
        println!("acceptance: all 7 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
    }
    if fatal {
        println!("acceptance: unexpected failures");
        std::process::exit(1);
    } else if !failed.is_empty() {
        println!("acceptance: only known failures {KNOWN_FAILURES:?}; exiting 0");
    }
}
