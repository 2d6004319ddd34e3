//! The flux constraint operator `K` and the signed attribute notation.
//!
//! `K_t(P)` adds to every alternative of `P` the test that `t` plus the sum
//! of all entry payloads vanishes; `K(P)` is `K_0(P)`. It is computed by
//! structural recursion on `P`, treating `&` as a list constructor.
//!
//! `zeta{g; H}` adds a signed copy `+a(x)` (outgoing) or `-a(-x)`
//! (in-going) next to every entry of a channel in `H`, so that the stream
//! stays visible after `H` is encapsulated.

use std::collections::BTreeSet;

use crate::calculus::{conj, AttrSet, Attribute, Sign, Tuplix, TuplixError, UnitRef};
use crate::meadow::DataTerm;
use crate::symbol::Symbol;

pub fn kirchhoff(p: &Tuplix) -> Result<Tuplix, TuplixError> {
    kirchhoff_t(&DataTerm::zero(), p)
}

/// `K_t(P)`. Signed entries are flattened first; operator nodes other than
/// `&`, `+` and `sum` are rejected.
pub fn kirchhoff_t(t: &DataTerm, p: &Tuplix) -> Result<Tuplix, TuplixError> {
    if !p.is_basic_syntax() {
        return Err(TuplixError::MalformedInput(
            "K applies only to terms built from eps, null, tests, entries, &, + and sum".into(),
        ));
    }
    Ok(k(t, &to_flat(p)))
}

fn plus(acc: &DataTerm, x: &DataTerm) -> DataTerm {
    if acc.is_const_zero() {
        x.clone()
    } else {
        acc.clone() + x.clone()
    }
}

fn k(t: &DataTerm, p: &Tuplix) -> Tuplix {
    match p {
        Tuplix::Delta => Tuplix::Delta,
        Tuplix::Alt(x, y) => Tuplix::Alt(Box::new(k(t, x)), Box::new(k(t, y))),
        Tuplix::Sum(x, q) => {
            let (x, q) = rebind(x, q, &t.vars());
            Tuplix::Sum(x, Box::new(k(t, &q)))
        }
        _ => k_list(t, p.conjuncts()),
    }
}

/// `K_t(c1 & ... & cn)`. Compound conjuncts are first pulled out:
/// alternatives by distribution, summations by widening their scope.
fn k_list(t: &DataTerm, items: Vec<Tuplix>) -> Tuplix {
    let compound = items
        .iter()
        .position(|c| matches!(c, Tuplix::Alt(..) | Tuplix::Sum(..)));
    match compound {
        Some(i) => match &items[i] {
            Tuplix::Alt(x, y) => {
                let mut left = items.clone();
                left[i] = x.as_ref().clone();
                let mut right = items.clone();
                right[i] = y.as_ref().clone();
                Tuplix::Alt(Box::new(k_list(t, flatten(left))), Box::new(k_list(t, flatten(right))))
            }
            Tuplix::Sum(x, q) => {
                let mut avoid = t.vars();
                for (j, c) in items.iter().enumerate() {
                    if j != i {
                        avoid.extend(c.free_vars());
                    }
                }
                let (x, q) = rebind(x, q, &avoid);
                let mut inner = items.clone();
                inner[i] = q;
                Tuplix::Sum(x, Box::new(k_list(t, flatten(inner))))
            }
            _ => unreachable!(),
        },
        None => {
            let mut parts = Vec::new();
            let mut acc = t.clone();
            for c in items {
                match c {
                    Tuplix::Delta => return Tuplix::Delta,
                    Tuplix::Eps => {}
                    Tuplix::Entry(_, ref x) => {
                        acc = plus(&acc, x);
                        parts.push(c);
                    }
                    other => parts.push(other),
                }
            }
            parts.push(Tuplix::Test(acc));
            Tuplix::conj_all(parts)
        }
    }
}

fn flatten(items: Vec<Tuplix>) -> Vec<Tuplix> {
    items.iter().flat_map(Tuplix::conjuncts).collect()
}

/// Renames the binder `x` of `q` away from `avoid` when necessary.
fn rebind(x: &Symbol, q: &Tuplix, avoid: &BTreeSet<Symbol>) -> (Symbol, Tuplix) {
    if !avoid.contains(x) {
        return (x.clone(), q.clone());
    }
    let mut all = avoid.clone();
    all.extend(q.all_vars());
    let y = x.fresh_against(&all);
    let q = q.substitute(x, &DataTerm::Var(y.clone()));
    (y, q)
}

/// `zeta{g; H}(P)`: signed copies of the entries over channels in `H`.
pub fn sign_annotate(g: &UnitRef, h: &AttrSet, p: &Tuplix) -> Result<Tuplix, TuplixError> {
    match p {
        Tuplix::Entry(a, x) => {
            if !a.is_flat() {
                return Err(TuplixError::MalformedInput(format!(
                    "zeta expects flat entries, found {a}"
                )));
            }
            let name = a.name();
            let in_h = h.contains(a);
            if g.outs.contains(name) {
                if in_h {
                    return Ok(conj(Tuplix::Entry(Attribute::plus(name.clone()), x.clone()), p.clone()));
                }
            } else if g.ins.contains(name) {
                if in_h {
                    return Ok(conj(Tuplix::Entry(Attribute::minus(name.clone()), -x.clone()), p.clone()));
                }
            } else {
                return Err(TuplixError::Unclassified {
                    unit: g.name.clone(),
                    attr: a.clone(),
                });
            }
            Ok(p.clone())
        }
        Tuplix::Eps | Tuplix::Delta | Tuplix::Test(_) => Ok(p.clone()),
        Tuplix::Conj(..) | Tuplix::Alt(..) | Tuplix::Sum(..) => {
            let mut err = None;
            let out = p.map_children(
                |c| match sign_annotate(g, h, c) {
                    Ok(r) => r,
                    Err(e) => {
                        err.get_or_insert(e);
                        Tuplix::Delta
                    }
                },
                DataTerm::clone,
            );
            err.map_or(Ok(out), Err)
        }
        _ => Err(TuplixError::MalformedInput(
            "zeta applies only to terms built from eps, null, tests, entries, &, + and sum".into(),
        )),
    }
}

/// `+a(t)` becomes `a(t)` and `-a(t)` becomes `a(-t)`.
pub fn to_flat(p: &Tuplix) -> Tuplix {
    match p {
        Tuplix::Entry(a, t) => match a.sign() {
            Sign::Flat => p.clone(),
            Sign::Plus => Tuplix::Entry(a.to_flat(), t.clone()),
            Sign::Minus => Tuplix::Entry(a.to_flat(), -t.clone()),
        },
        _ => p.map_children(to_flat, DataTerm::clone),
    }
}

/// `a(t)` becomes `-a(-t)` for in-going and `+a(t)` for outgoing channels
/// of `g`. A channel that is both is ambiguous and rejected.
pub fn to_signed(g: &UnitRef, p: &Tuplix) -> Result<Tuplix, TuplixError> {
    match p {
        Tuplix::Entry(a, t) if a.is_flat() => {
            let name = a.name();
            match (g.ins.contains(name), g.outs.contains(name)) {
                (true, false) => Ok(Tuplix::Entry(Attribute::minus(name.clone()), -t.clone())),
                (false, true) => Ok(Tuplix::Entry(Attribute::plus(name.clone()), t.clone())),
                _ => Err(TuplixError::Unclassified {
                    unit: g.name.clone(),
                    attr: a.clone(),
                }),
            }
        }
        _ => {
            let mut err = None;
            let out = p.map_children(
                |c| match to_signed(g, c) {
                    Ok(r) => r,
                    Err(e) => {
                        err.get_or_insert(e);
                        Tuplix::Delta
                    }
                },
                DataTerm::clone,
            );
            err.map_or(Ok(out), Err)
        }
    }
}
