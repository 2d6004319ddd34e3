//! Comparison of two basic forms.
//!
//! Alternatives are matched pairwise: same number of binders (up to a
//! permutation), the same attributes, tests with provably equal zero sets
//! (`t/t = s/s`) and provably equal payloads. Summations that differ by an
//! invertible affine change of their variables are matched by rewriting
//! each alternative so that its first independent payloads become the
//! binders themselves. A mismatch is only reported as a definite inequality
//! when a test-free alternative has an attribute set missing on the other
//! side, or for single, test-free, binder-free alternatives; everything
//! else that fails to match is `Unknown`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;

use super::basic::{Alternative, BasicForm};
use super::Attribute;
use crate::meadow::{
    eq_data_with, eval_data, find_witness, normalize_data, solve_linear, Assignment, DataTerm,
    DecisionConfig, Rational, Tri,
};
use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    /// The reason names a distinguishing attribute or assignment.
    NotEqual(String),
    Unknown(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equal => write!(f, "equal"),
            Verdict::NotEqual(why) => write!(f, "not equal: {why}"),
            Verdict::Unknown(why) => write!(f, "unknown: {why}"),
        }
    }
}

pub fn compare(a: &BasicForm, b: &BasicForm, cfg: &DecisionConfig) -> Verdict {
    let (xs, ys) = (a.alternatives(), b.alternatives());
    if xs.len() == 1 && ys.len() == 1 {
        if let Some(why) = refute(&xs[0], &ys[0], cfg) {
            return Verdict::NotEqual(why);
        }
    }
    if let (Some(vx), Some(vy)) = (ground_rows(xs), ground_rows(ys)) {
        return match vx.symmetric_difference(&vy).next() {
            None => Verdict::Equal,
            Some(row) => Verdict::NotEqual(format!("only one side contains {}", show_row(row))),
        };
    }
    if let Some(why) = unmatched_shape(xs, ys).or_else(|| unmatched_shape(ys, xs)) {
        return Verdict::NotEqual(why);
    }
    if xs.is_empty() != ys.is_empty() {
        let other = if xs.is_empty() { ys } else { xs };
        if other.iter().any(|x| x.binders.is_empty() && x.test.is_none()) {
            return Verdict::NotEqual("one side is null, the other has an unconditional alternative".into());
        }
    }
    if xs.len() != ys.len() {
        return Verdict::Unknown(format!("{} against {} alternative(s)", xs.len(), ys.len()));
    }
    let mut used = vec![false; ys.len()];
    for x in xs {
        let hit = (0..ys.len()).find(|&j| {
            !used[j]
                && (same_alternative(x, &ys[j], cfg)
                    || same_alternative(&reparametrize(x), &reparametrize(&ys[j]), cfg))
        });
        match hit {
            Some(j) => used[j] = true,
            None => return Verdict::Unknown(format!("no provable match for `{x}`")),
        }
    }
    Verdict::Equal
}

fn proves(t: &DataTerm, s: &DataTerm, cfg: &DecisionConfig) -> bool {
    matches!(eq_data_with(t, s, cfg), Ok(Tri::ProvablyTrue))
}

fn same_alternative(x: &Alternative, y: &Alternative, cfg: &DecisionConfig) -> bool {
    if x.binders.len() != y.binders.len() || !x.entries.keys().eq(y.entries.keys()) {
        return false;
    }
    let n = y.binders.len();
    let orders: Vec<Vec<Symbol>> = if n <= 6 {
        y.binders.iter().cloned().permutations(n).collect()
    } else {
        vec![y.binders.clone()]
    };
    orders.into_iter().any(|order| {
        let y = rename(y, &order, &x.binders, x);
        let tests_match = match (&x.test, &y.test) {
            (None, None) => true,
            (Some(s), Some(t)) => {
                let (s, t) = (s.value(), t.value());
                proves(&(s.clone() / s), &(t.clone() / t), cfg)
            }
            _ => false,
        };
        tests_match
            && x.entries
                .iter()
                .zip(&y.entries)
                .all(|((_, s), (_, t))| proves(s, t, cfg))
    })
}

/// Walks the entries in attribute order; whenever a payload can be solved
/// for a remaining binder, that binder is replaced so the payload becomes a
/// new binder. `sum x . a(-x) & b(x)` and `sum y . a(y) & b(-y)` both turn
/// into `sum #0 . a(#0) & b(-#0)`.
fn reparametrize(a: &Alternative) -> Alternative {
    let mut out = a.clone();
    let mut remaining = a.binders.clone();
    let mut fresh = Vec::new();
    for attr in a.entries.keys() {
        if remaining.is_empty() {
            break;
        }
        let z = Symbol::placeholder(fresh.len());
        let eq = out.entries[attr].clone() - DataTerm::Var(z.clone());
        let solved = remaining
            .iter()
            .enumerate()
            .find_map(|(i, b)| solve_linear(&eq, b).map(|s| (i, s)));
        if let Some((i, s)) = solved {
            let b = remaining.remove(i);
            out = subst_alt(&out, &b, &s);
            fresh.push(z);
        }
    }
    fresh.extend(remaining);
    out.binders = fresh;
    out.test = out.test.map(|t| super::basic::Test::Zero(normalize_data(&t.value())));
    for v in out.entries.values_mut() {
        *v = normalize_data(v);
    }
    out
}

/// Renames the binders `from` of `y` to `to`, going through names fresh
/// for both alternatives so that swaps do not collide.
fn rename(y: &Alternative, from: &[Symbol], to: &[Symbol], x: &Alternative) -> Alternative {
    let mut avoid: BTreeSet<Symbol> = alternative_vars(y);
    avoid.extend(alternative_vars(x));
    let temps: Vec<Symbol> = from
        .iter()
        .map(|b| {
            let t = Symbol::from_parts(format!("tmp{}", b.family()), b.index(), 0).fresh_against(&avoid);
            avoid.insert(t.clone());
            t
        })
        .collect();
    let mut out = y.clone();
    for (f, t) in from.iter().zip(&temps) {
        out = subst_alt(&out, f, &DataTerm::Var(t.clone()));
    }
    for (t, f) in temps.iter().zip(to) {
        out = subst_alt(&out, t, &DataTerm::Var(f.clone()));
    }
    out.binders = to.to_vec();
    out
}

fn subst_alt(a: &Alternative, x: &Symbol, s: &DataTerm) -> Alternative {
    Alternative {
        binders: a.binders.clone(),
        test: a.test.as_ref().map(|t| super::basic::Test::Zero(t.value().substitute(x, s))),
        entries: a
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), v.substitute(x, s)))
            .collect(),
    }
}

fn alternative_vars(a: &Alternative) -> BTreeSet<Symbol> {
    let mut out: BTreeSet<Symbol> = a.binders.iter().cloned().collect();
    if let Some(t) = &a.test {
        out.extend(t.value().vars());
    }
    for v in a.entries.values() {
        out.extend(v.vars());
    }
    out
}

type Row = BTreeMap<Attribute, Rational>;

/// The tuples of a form whose alternatives are plain and variable-free.
fn ground_rows(xs: &[Alternative]) -> Option<BTreeSet<Row>> {
    let env = Assignment::new();
    xs.iter()
        .map(|x| {
            if !x.binders.is_empty() || x.test.is_some() {
                return None;
            }
            x.entries
                .iter()
                .map(|(a, t)| {
                    if !t.vars().is_empty() {
                        return None;
                    }
                    eval_data(t, &env).ok().map(|v| (a.clone(), v))
                })
                .collect()
        })
        .collect()
}

fn show_row(row: &Row) -> String {
    if row.is_empty() {
        return "eps".into();
    }
    row.iter().map(|(a, v)| format!("{a}({v})")).join(" & ")
}

/// A test-free alternative always contributes tuples over exactly its
/// attributes; if no alternative on the other side has that attribute set,
/// those tuples are missing there.
fn unmatched_shape(xs: &[Alternative], ys: &[Alternative]) -> Option<String> {
    let x = xs
        .iter()
        .filter(|x| x.test.is_none())
        .find(|x| !ys.iter().any(|y| x.entries.keys().eq(y.entries.keys())))?;
    let attrs = x.entries.keys().map(|a| a.to_string()).join(", ");
    Some(format!("no alternative of the other side has exactly the attributes {{{attrs}}} of `{x}`"))
}

/// A definite difference between two unconditional alternatives.
fn refute(x: &Alternative, y: &Alternative, cfg: &DecisionConfig) -> Option<String> {
    let plain = |a: &Alternative| a.binders.is_empty() && a.test.is_none();
    if !plain(x) || !plain(y) {
        return None;
    }
    let zero = DataTerm::zero();
    let attrs: BTreeSet<_> = x.entries.keys().chain(y.entries.keys()).collect();
    for a in attrs {
        let s = x.entries.get(a).unwrap_or(&zero);
        let t = y.entries.get(a).unwrap_or(&zero);
        if x.entries.contains_key(a) != y.entries.contains_key(a) {
            // an absent entry is not the same as a zero entry
            return Some(format!("attribute {a} occurs on one side only"));
        }
        if let Some(env) = find_witness(s, t, cfg) {
            let shown = env.iter().map(|(v, q)| format!("{v} = {q}")).join(", ");
            let at = if shown.is_empty() { String::new() } else { format!(" at {shown}") };
            return Some(format!("{a}({s}) differs from {a}({t}){at}"));
        }
    }
    None
}
