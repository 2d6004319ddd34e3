//! Inside-out normalizer producing basic forms.
//!
//! Each subterm is turned into a list of working alternatives (binders,
//! pending zero tests, one entry per attribute). Composition multiplies the
//! lists out, operators act per alternative, and after every step an
//! alternative is *settled*: tests are decided, solved for variables and
//! substituted back, and unused binders are dropped.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use super::basic::{Alternative, BasicForm, Test};
use super::term::{AttrSet, Attribute, Tuplix};
use super::TuplixError;
use crate::flux;
use crate::funcdef;
use crate::meadow::{poly_is_zero, solve_poly, Base, DecisionConfig, Poly, Tri};
use crate::symbol::Symbol;

#[derive(Debug, Clone)]
pub struct NormalizeOptions {
    pub decision: DecisionConfig,
    /// Eliminate summation binders solved by a test (`sum x . [x - t] & X`
    /// becomes `X[t/x]`).
    pub sum_elim: bool,
    /// Record one line per operator node.
    pub trace: bool,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions {
            decision: DecisionConfig::default(),
            sum_elim: true,
            trace: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub form: BasicForm,
    pub trace: Vec<String>,
}

/// Basic form of `p` with summation elimination.
pub fn normalize(p: &Tuplix) -> Result<BasicForm, TuplixError> {
    normalize_with(p, &NormalizeOptions::default()).map(|o| o.form)
}

pub fn normalize_with(p: &Tuplix, opts: &NormalizeOptions) -> Result<Outcome, TuplixError> {
    let p = funcdef::sum_fn_elim(&funcdef::apply_fd(p));
    let mut engine = Engine {
        opts,
        taken: p.free_vars(),
        trace: Vec::new(),
    };
    let alts = engine.norm(&p)?;
    let form = engine.finish(alts);
    Ok(Outcome {
        form,
        trace: engine.trace,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct WAlt {
    binders: Vec<Symbol>,
    tests: Vec<Poly>,
    entries: BTreeMap<Attribute, Poly>,
}

impl WAlt {
    fn vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for t in &self.tests {
            out.extend(t.vars());
        }
        for p in self.entries.values() {
            out.extend(p.vars());
        }
        out
    }

    fn substitute(&mut self, x: &Symbol, s: &Poly) {
        for t in &mut self.tests {
            *t = t.substitute(x, s);
        }
        for p in self.entries.values_mut() {
            *p = p.substitute(x, s);
        }
    }

    fn rename(&mut self, from: &Symbol, to: &Symbol) {
        self.substitute(from, &Poly::var(to.clone()));
        for b in &mut self.binders {
            if b == from {
                *b = to.clone();
            }
        }
    }

    fn to_tuplix(&self) -> Tuplix {
        let mut parts: Vec<Tuplix> = self.tests.iter().map(|t| Tuplix::Test(t.to_term())).collect();
        for (a, p) in &self.entries {
            parts.push(Tuplix::Entry(a.clone(), p.to_term()));
        }
        let mut body = Tuplix::conj_all(parts);
        for x in self.binders.iter().rev() {
            body = Tuplix::Sum(x.clone(), Box::new(body));
        }
        body
    }

    /// Serialization used for canonical ordering and α-comparison.
    fn key(&self, with_tests: bool) -> String {
        let mut s = String::new();
        for (a, p) in &self.entries {
            s.push_str(&format!("{a}:{};", p.to_term().to_prefix()));
        }
        if with_tests {
            let tests: Vec<String> = self.tests.iter().map(|t| t.to_term().to_prefix()).sorted().collect();
            s.push('|');
            s.push_str(&tests.join(";"));
        }
        s
    }
}

fn product(x: &WAlt, y: &WAlt) -> WAlt {
    let mut entries = x.entries.clone();
    for (a, p) in &y.entries {
        let merged = match entries.get(a) {
            Some(q) => q.add(p),
            None => p.clone(),
        };
        entries.insert(a.clone(), merged);
    }
    WAlt {
        binders: x.binders.iter().chain(&y.binders).cloned().collect(),
        tests: x.tests.iter().chain(&y.tests).cloned().collect(),
        entries,
    }
}

/// `[t1] & ... & [tn] = [t1/t1 + ... + tn/tn]`.
fn merge_tests(tests: &[Poly]) -> Poly {
    match tests {
        [] => Poly::zero(),
        [t] => t.clone(),
        _ => tests
            .iter()
            .fold(Poly::zero(), |acc, t| acc.add(&t.mul(&t.inverse()))),
    }
}

/// Simplest presentation of a zero test: a single term keeps only its
/// distinct bases (`[2 * x^2 / y] = [x * y]`), anything else is made monic.
fn tidy_test(t: &Poly) -> Poly {
    if let Some((m, _)) = t.single_term() {
        let mut out = Poly::int(1);
        for (b, _) in m.factors() {
            let f = match b {
                Base::Sum(inner) => inner.clone(),
                _ => Poly::from_base(b.clone()),
            };
            out = out.mul(&f);
        }
        return out;
    }
    t.monic().1
}

fn tmp_symbol(i: usize) -> Symbol {
    Symbol::from_parts("", Some((1u64 << 40) + i as u64), 0)
}

struct Engine<'a> {
    opts: &'a NormalizeOptions,
    taken: BTreeSet<Symbol>,
    trace: Vec<String>,
}

impl Engine<'_> {
    fn note(&mut self, what: impl FnOnce() -> String) {
        if self.opts.trace {
            let line = what();
            self.trace.push(line);
        }
    }

    fn fresh(&mut self, x: &Symbol) -> Symbol {
        let y = x.fresh_against(&self.taken);
        self.taken.insert(y.clone());
        y
    }

    fn decide(&self, t: &Poly) -> Tri {
        match t.as_constant() {
            Some(c) if num_traits::Zero::is_zero(&c) => Tri::ProvablyTrue,
            Some(_) => Tri::ProvablyFalse,
            None => poly_is_zero(t, &self.opts.decision).unwrap_or(Tri::Unknown),
        }
    }

    fn settle_all(&self, alts: Vec<WAlt>) -> Vec<WAlt> {
        let mut out: Vec<WAlt> = Vec::with_capacity(alts.len());
        for a in alts {
            if let Some(a) = self.settle(a) {
                if !out.contains(&a) {
                    out.push(a);
                }
            }
        }
        out
    }

    fn norm(&mut self, p: &Tuplix) -> Result<Vec<WAlt>, TuplixError> {
        use Tuplix::*;
        Ok(match p {
            Eps => vec![WAlt::default()],
            Delta => vec![],
            Test(t) => self.settle_all(vec![WAlt {
                tests: vec![Poly::from_term(t)],
                ..Default::default()
            }]),
            Entry(a, t) => vec![WAlt {
                entries: [(a.clone(), Poly::from_term(t))].into_iter().collect(),
                ..Default::default()
            }],
            Conj(x, y) => {
                let xs = self.norm(x)?;
                if xs.is_empty() {
                    // still validate the other side
                    self.norm(y)?;
                    return Ok(vec![]);
                }
                let ys = self.norm(y)?;
                let prods = xs.iter().cartesian_product(&ys).map(|(a, b)| product(a, b)).collect();
                self.settle_all(prods)
            }
            Alt(x, y) => {
                let mut xs = self.norm(x)?;
                for a in self.norm(y)? {
                    if !xs.contains(&a) {
                        xs.push(a);
                    }
                }
                xs
            }
            Sum(x, body) => {
                let y = self.fresh(x);
                let body = if &y == x {
                    body.as_ref().clone()
                } else {
                    body.substitute(x, &crate::meadow::DataTerm::Var(y.clone()))
                };
                let mut alts = self.norm(&body)?;
                for a in &mut alts {
                    a.binders.insert(0, y.clone());
                }
                self.settle_all(alts)
            }
            Scalar(t, body) => {
                let k = Poly::from_term(t);
                let mut alts = self.norm(body)?;
                for a in &mut alts {
                    for v in a.entries.values_mut() {
                        *v = k.mul(v);
                    }
                }
                self.note(|| format!("scalar {t}: {} alternative(s)", alts.len()));
                self.settle_all(alts)
            }
            Clear(set, body) => {
                let mut alts = self.norm(body)?;
                for a in &mut alts {
                    a.entries.retain(|k, _| !set.contains(k));
                }
                self.note(|| format!("clear {}: {} alternative(s)", show_set(set), alts.len()));
                self.settle_all(alts)
            }
            Select(set, body) => {
                let mut alts = self.norm(body)?;
                for a in &mut alts {
                    a.entries.retain(|k, _| set.contains(k));
                }
                self.note(|| format!("select {}: {} alternative(s)", show_set(set), alts.len()));
                self.settle_all(alts)
            }
            Encap(set, body) => {
                if let Some(bad) = set.iter().find(|a| !a.is_flat()) {
                    return Err(TuplixError::SignedEncapsulation(bad.clone()));
                }
                let mut alts = self.norm(body)?;
                for a in &mut alts {
                    for h in set {
                        if let Some(total) = a.entries.remove(h) {
                            a.tests.push(total);
                        }
                    }
                }
                let alts = self.settle_all(alts);
                self.note(|| format!("encap {}: {} alternative(s)", show_set(set), alts.len()));
                alts
            }
            Kirch(t, body) => {
                // operators inside are eliminated first
                let expanded = if body.is_basic_syntax() {
                    flux::kirchhoff_t(t, body)?
                } else {
                    let inner = self.norm(body)?;
                    flux::kirchhoff_t(t, &alts_tuplix(&inner))?
                };
                let alts = self.norm(&expanded)?;
                self.note(|| format!("K: {} alternative(s)", alts.len()));
                alts
            }
            Zeta(g, set, body) => {
                let inner = self.norm(body)?;
                let annotated = flux::sign_annotate(g, set, &alts_tuplix(&inner))?;
                let alts = self.norm(&annotated)?;
                self.note(|| format!("zeta {}: {} alternative(s)", g.name, alts.len()));
                alts
            }
            Flat(body) => {
                let inner = self.norm(body)?;
                self.norm(&flux::to_flat(&alts_tuplix(&inner)))?
            }
            Signed(g, body) => {
                let inner = self.norm(body)?;
                self.norm(&flux::to_signed(g, &alts_tuplix(&inner))?)?
            }
            Gamma(f, _) => {
                return Err(TuplixError::ResidualDefinition(f.to_string()));
            }
            SumFn(f, _) => {
                return Err(TuplixError::ResidualDefinition(f.to_string()));
            }
        })
    }

    /// Decides, solves and substitutes the tests of one alternative;
    /// `None` when it is `null`.
    fn settle(&self, mut a: WAlt) -> Option<WAlt> {
        let mut solved: BTreeSet<Symbol> = BTreeSet::new();
        'outer: loop {
            let mut kept: Vec<Poly> = Vec::new();
            for t in std::mem::take(&mut a.tests) {
                let t = tidy_test(&t);
                match self.decide(&t) {
                    Tri::ProvablyTrue => {}
                    Tri::ProvablyFalse => return None,
                    Tri::Unknown => {
                        if !kept.contains(&t) {
                            kept.push(t);
                        }
                    }
                }
            }
            a.tests = kept;

            if self.opts.sum_elim {
                for b in a.binders.clone() {
                    for i in 0..a.tests.len() {
                        if let Some(sol) = solve_poly(&a.tests[i], &b, &self.opts.decision) {
                            a.tests.remove(i);
                            a.binders.retain(|x| x != &b);
                            a.substitute(&b, &sol);
                            continue 'outer;
                        }
                    }
                }
            }

            for i in 0..a.tests.len() {
                if let Some((v, sol)) = solve_test(&a.tests[i], &a.binders, &solved) {
                    // keep the test, substitute everywhere else
                    let test = a.tests[i].clone();
                    a.substitute(&v, &sol);
                    a.tests[i] = test;
                    solved.insert(v);
                    continue 'outer;
                }
            }
            break;
        }

        if self.opts.sum_elim {
            self.drop_vacuous_disequations(&mut a);
        }
        let used = a.vars();
        a.binders.retain(|b| used.contains(b));
        Some(a)
    }

    /// `sum x . [1 - (x - t)/(x - t)] = eps` when nothing else mentions `x`.
    fn drop_vacuous_disequations(&self, a: &mut WAlt) {
        for b in a.binders.clone() {
            let elsewhere = |a: &WAlt, skip: usize| {
                a.entries.values().any(|p| p.mentions(&b))
                    || a.tests.iter().enumerate().any(|(j, t)| j != skip && t.mentions(&b))
            };
            let hit = (0..a.tests.len()).find(|&i| {
                a.tests[i].mentions(&b) && !elsewhere(a, i) && is_disequation(&a.tests[i], &b)
            });
            if let Some(i) = hit {
                a.tests.remove(i);
                a.binders.retain(|x| x != &b);
            }
        }
    }

    fn finish(&mut self, alts: Vec<WAlt>) -> BasicForm {
        // α-normalize binders to placeholders, remembering readable names
        let mut work: Vec<(WAlt, BTreeMap<Symbol, Symbol>)> = alts
            .into_iter()
            .filter_map(|a| self.merge_own_tests(a))
            .map(|a| {
                let hints = a.binders.iter().map(|b| (b.clone(), b.clone())).collect();
                canonical(&a, &hints, false)
            })
            .collect();

        // C5/C6: alternatives with the same body merge by multiplying tests
        loop {
            let mut groups: BTreeMap<(usize, String), Vec<usize>> = BTreeMap::new();
            for (i, (a, _)) in work.iter().enumerate() {
                groups.entry((a.binders.len(), a.key(false))).or_default().push(i);
            }
            if groups.values().all(|g| g.len() == 1) {
                break;
            }
            let mut next = Vec::new();
            for idx in groups.values() {
                if idx.len() == 1 {
                    next.push(work[idx[0]].clone());
                    continue;
                }
                let (first, hints) = work[idx[0]].clone();
                let tests: Vec<Poly> = idx.iter().map(|&i| merge_tests(&work[i].0.tests)).collect();
                let mut prod = Poly::int(1);
                for t in self.absorb(tests) {
                    prod = prod.mul(&t);
                }
                let merged = WAlt {
                    tests: if prod.is_zero() { vec![] } else { vec![prod] },
                    ..first
                };
                if let Some(m) = self.settle(merged).and_then(|m| self.merge_own_tests(m)) {
                    next.push(canonical(&m, &hints, false));
                }
            }
            work = next;
        }

        let mut out: Vec<Alternative> = work
            .into_iter()
            .map(|(a, hints)| {
                let (a, hints) = canonical(&a, &hints, true);
                self.to_alternative(a, &hints)
            })
            .collect();
        out.sort_by_cached_key(|a| a.to_string());
        out.dedup();
        BasicForm::from_sorted(out)
    }

    /// Drops the tests of a disjunction that imply another member:
    /// `[s] + [s] & [t] = [s]`.
    fn absorb(&self, mut tests: Vec<Poly>) -> Vec<Poly> {
        let mut i = 0;
        while i < tests.len() {
            let implied = (0..tests.len()).any(|j| {
                j != i && {
                    // t_i = 0 forces t_j = 0 iff t_j * (1 - t_i / t_i) vanishes
                    let ti = &tests[i];
                    let gate = Poly::int(1).sub(&ti.mul(&ti.inverse()));
                    self.decide(&tests[j].mul(&gate)) == Tri::ProvablyTrue
                }
            });
            if implied {
                tests.remove(i);
            } else {
                i += 1;
            }
        }
        tests
    }

    /// Collapses several pending tests into one; `None` when the result is
    /// `null`.
    fn merge_own_tests(&self, mut a: WAlt) -> Option<WAlt> {
        if a.tests.len() < 2 {
            return Some(a);
        }
        // After settling, a test solved for a variable that no other test
        // mentions can always be met, so only the rest can clash.
        let open: Vec<Poly> = (0..a.tests.len())
            .filter(|&i| !isolated(&a.tests, i))
            .map(|i| a.tests[i].clone())
            .collect();
        if open.len() > 1 && self.decide(&tidy_test(&merge_tests(&open))) == Tri::ProvablyFalse {
            return None;
        }
        a.tests = vec![tidy_test(&merge_tests(&a.tests))];
        Some(a)
    }

    fn to_alternative(&self, mut a: WAlt, hints: &BTreeMap<Symbol, Symbol>) -> Alternative {
        let binder_set: BTreeSet<Symbol> = a.binders.iter().cloned().collect();
        let mut avoid: BTreeSet<Symbol> = a.vars().difference(&binder_set).cloned().collect();
        for b in a.binders.clone() {
            let hint = hints.get(&b).cloned().unwrap_or_else(|| Symbol::new("x"));
            let base = Symbol::from_parts(hint.family(), hint.index(), 0);
            let name = base.fresh_against(&avoid);
            avoid.insert(name.clone());
            a.rename(&b, &name);
        }
        let test = match a.tests.as_slice() {
            [] => None,
            [t] => Some(match solve_test(t, &a.binders, &BTreeSet::new()) {
                Some((v, sol)) => Test::Solved(v, sol.to_term()),
                None => Test::Zero(t.to_term()),
            }),
            _ => unreachable!("tests are merged before output"),
        };
        Alternative {
            binders: a.binders,
            test,
            entries: a.entries.into_iter().map(|(k, v)| (k, v.to_term())).collect(),
        }
    }
}

/// Solves a test for its first binder with a constant coefficient, or
/// failing that for its greatest such free variable. A test mentioning a
/// variable of `solved` is already in solved form and left alone.
fn solve_test(t: &Poly, binders: &[Symbol], solved: &BTreeSet<Symbol>) -> Option<(Symbol, Poly)> {
    let vars = t.vars();
    if !vars.is_disjoint(solved) {
        return None;
    }
    let bound = binders.iter().filter(|b| vars.contains(*b));
    let free = vars.iter().rev().filter(|v| !binders.contains(v));
    for v in bound.chain(free) {
        if let Some((c, r)) = t.linear_in(&Base::Var(v.clone())) {
            if let Some(c) = c.as_constant() {
                return Some((v.clone(), r.neg().scale(&c.recip())));
            }
        }
    }
    None
}

/// Whether test `i` is linear with constant coefficient in a variable that
/// no other test mentions.
fn isolated(tests: &[Poly], i: usize) -> bool {
    tests[i].vars().into_iter().any(|v| {
        let others = tests.iter().enumerate().any(|(j, t)| j != i && t.mentions(&v));
        !others
            && matches!(tests[i].linear_in(&Base::Var(v)), Some((c, _)) if c.as_constant().is_some())
    })
}

/// Whether `t` is (a multiple of) `1 - w/w` for some `w` linear in `x`
/// with a constant coefficient.
fn is_disequation(t: &Poly, x: &Symbol) -> bool {
    let mut candidates: Vec<Poly> = Vec::new();
    for (m, _) in t.terms() {
        for (b, p) in m.factors() {
            match b {
                Base::Var(v) if v == x && p.neg > 0 => candidates.push(Poly::var(v.clone())),
                Base::Sum(inner) if inner.mentions(x) => candidates.push(inner.clone()),
                _ => {}
            }
        }
    }
    candidates.into_iter().any(|w| {
        let linear = matches!(w.linear_in(&Base::Var(x.clone())), Some((c, _)) if c.as_constant().is_some());
        linear && Poly::int(1).sub(&w.mul(&w.inverse())).monic().1 == t.monic().1
    })
}

/// Renames the binders of `a` to positional placeholders in the order that
/// minimizes the serialized body; ties go to the order whose readable names
/// sort first.
fn canonical(
    a: &WAlt,
    hints: &BTreeMap<Symbol, Symbol>,
    with_tests: bool,
) -> (WAlt, BTreeMap<Symbol, Symbol>) {
    let n = a.binders.len();
    let hint_of = |b: &Symbol| hints.get(b).cloned().unwrap_or_else(|| b.clone());
    let apply = |order: &[Symbol]| -> WAlt {
        let mut w = a.clone();
        for (i, b) in order.iter().enumerate() {
            w.rename(b, &tmp_symbol(i));
        }
        for i in 0..order.len() {
            w.rename(&tmp_symbol(i), &Symbol::placeholder(i));
        }
        w.binders = (0..order.len()).map(Symbol::placeholder).collect();
        w
    };
    let orders: Vec<Vec<Symbol>> = if n <= 6 {
        a.binders.iter().cloned().permutations(n).collect()
    } else {
        vec![a.binders.clone()]
    };
    let best = orders
        .into_iter()
        .map(|order| {
            let w = apply(&order);
            let names: Vec<Symbol> = order.iter().map(&hint_of).collect();
            (w.key(with_tests), names, w)
        })
        .min_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)))
        .expect("at least one ordering");
    let new_hints = best
        .1
        .iter()
        .enumerate()
        .map(|(i, h)| (Symbol::placeholder(i), h.clone()))
        .collect();
    (best.2, new_hints)
}

fn alts_tuplix(alts: &[WAlt]) -> Tuplix {
    Tuplix::alt_all(alts.iter().map(WAlt::to_tuplix))
}

fn show_set(set: &AttrSet) -> String {
    format!("{{{}}}", set.iter().map(|a| a.to_string()).join(", "))
}
