//! Lambda abstractions on the data side, the `gamma(f, lam ...)` function
//! definition construct, and summation over function variables read as a
//! let binding.
//!
//! Lambdas are second-class: they appear only at the head of an application
//! or inside a definition, never as arguments. β-reduction therefore always
//! terminates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::calculus::Tuplix;
use crate::meadow::{Callee, DataTerm};
use crate::symbol::Symbol;

/// A function variable `f` of fixed arity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FnVar {
    name: Symbol,
    arity: usize,
}

impl FnVar {
    pub fn new(name: impl Into<Symbol>, arity: usize) -> Self {
        FnVar {
            name: name.into(),
            arity,
        }
    }

    pub fn name(&self) -> &Symbol {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

impl fmt::Display for FnVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// `lam x1, ..., xn . body`. Equality is α-equivalence.
#[derive(Debug, Clone)]
pub struct Lambda {
    params: Vec<Symbol>,
    body: DataTerm,
}

impl Lambda {
    pub fn new(params: Vec<Symbol>, body: DataTerm) -> Self {
        Lambda { params, body }
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[Symbol] {
        &self.params
    }

    pub fn body(&self) -> &DataTerm {
        &self.body
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        let mut vs = self.body.vars();
        for p in &self.params {
            vs.remove(p);
        }
        vs
    }

    /// Body with the parameters replaced by positional placeholders.
    fn canonical_body(&self) -> DataTerm {
        self.instantiate(
            &(0..self.arity())
                .map(|i| DataTerm::Var(Symbol::placeholder(i)))
                .collect::<Vec<_>>(),
        )
    }

    /// `body[args/params]`, simultaneously and without capture.
    pub fn instantiate(&self, args: &[DataTerm]) -> DataTerm {
        debug_assert_eq!(args.len(), self.arity());
        let mut avoid: BTreeSet<Symbol> = self.body.vars();
        for a in args {
            avoid.extend(a.vars());
        }
        avoid.extend(self.params.iter().cloned());
        // first move the parameters out of the way, then fill them in
        let mut body = self.body.clone();
        let mut staged = Vec::with_capacity(self.arity());
        for p in &self.params {
            let tmp = Symbol::from_parts("", Some(u64::MAX - staged.len() as u64), 0)
                .fresh_against(&avoid);
            avoid.insert(tmp.clone());
            body = body.substitute(p, &DataTerm::Var(tmp.clone()));
            staged.push(tmp);
        }
        for (tmp, a) in staged.iter().zip(args) {
            body = body.substitute(tmp, a);
        }
        body
    }

    /// Capture-avoiding substitution of a free variable.
    pub fn substitute(&self, x: &Symbol, s: &DataTerm) -> Lambda {
        if self.params.contains(x) {
            return self.clone();
        }
        let svars = s.vars();
        let mut avoid: BTreeSet<Symbol> = self.body.vars();
        avoid.extend(svars.iter().cloned());
        avoid.insert(x.clone());
        avoid.extend(self.params.iter().cloned());
        let mut params = Vec::with_capacity(self.arity());
        let mut body = self.body.clone();
        for p in &self.params {
            if svars.contains(p) {
                let q = p.fresh_against(&avoid);
                avoid.insert(q.clone());
                body = body.substitute(p, &DataTerm::Var(q.clone()));
                params.push(q);
            } else {
                params.push(p.clone());
            }
        }
        Lambda {
            params,
            body: body.substitute(x, s),
        }
    }

    pub(crate) fn map_body(&self, f: impl FnOnce(&DataTerm) -> DataTerm) -> Lambda {
        Lambda {
            params: self.params.clone(),
            body: f(&self.body),
        }
    }
}

impl PartialEq for Lambda {
    fn eq(&self, other: &Self) -> bool {
        self.arity() == other.arity() && self.canonical_body() == other.canonical_body()
    }
}

impl Eq for Lambda {}

impl Hash for Lambda {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.arity().hash(state);
        self.canonical_body().to_prefix().hash(state);
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lam ")?;
        for (i, p) in self.params.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, " . {}", self.body)
    }
}

/// Contracts every `(lam xs . body)(args)` redex, innermost first.
pub fn beta_reduce(t: &DataTerm) -> DataTerm {
    match t {
        DataTerm::Const(_) | DataTerm::Var(_) => t.clone(),
        DataTerm::Neg(a) => DataTerm::Neg(Box::new(beta_reduce(a))),
        DataTerm::Inv(a) => DataTerm::Inv(Box::new(beta_reduce(a))),
        DataTerm::Add(a, b) => DataTerm::Add(Box::new(beta_reduce(a)), Box::new(beta_reduce(b))),
        DataTerm::Mul(a, b) => DataTerm::Mul(Box::new(beta_reduce(a)), Box::new(beta_reduce(b))),
        DataTerm::App(app) => {
            let args: Vec<DataTerm> = app.args().iter().map(beta_reduce).collect();
            match app.head() {
                Callee::Fn(_) => DataTerm::App(app.map_args(|a| beta_reduce(a))),
                Callee::Lambda(l) => beta_reduce(&l.instantiate(&args)),
            }
        }
    }
}

/// Replaces applications of defined function variables by the β-reduced
/// definition body.
fn unfold(t: &DataTerm, defs: &BTreeMap<FnVar, Lambda>) -> DataTerm {
    if defs.is_empty() {
        return t.clone();
    }
    match t {
        DataTerm::Const(_) | DataTerm::Var(_) => t.clone(),
        DataTerm::Neg(a) => DataTerm::Neg(Box::new(unfold(a, defs))),
        DataTerm::Inv(a) => DataTerm::Inv(Box::new(unfold(a, defs))),
        DataTerm::Add(a, b) => DataTerm::Add(Box::new(unfold(a, defs)), Box::new(unfold(b, defs))),
        DataTerm::Mul(a, b) => DataTerm::Mul(Box::new(unfold(a, defs)), Box::new(unfold(b, defs))),
        DataTerm::App(app) => {
            let args: Vec<DataTerm> = app.args().iter().map(|a| unfold(a, defs)).collect();
            match app.head() {
                Callee::Fn(f) => match defs.get(f) {
                    Some(l) => beta_reduce(&l.instantiate(&args)),
                    None => DataTerm::App(app.map_args(|a| unfold(a, defs))),
                },
                Callee::Lambda(l) => {
                    let l = l.map_body(|b| unfold(b, defs));
                    beta_reduce(&l.instantiate(&args))
                }
            }
        }
    }
}

/// Uses every definition `gamma(f, lam xs . t)` to rewrite applications
/// `f(ss)` in its conjunctive scope to `t[ss/xs]`. The definitions stay in
/// place.
pub fn apply_fd(p: &Tuplix) -> Tuplix {
    fd_in(p, &BTreeMap::new())
}

fn fd_in(p: &Tuplix, defs: &BTreeMap<FnVar, Lambda>) -> Tuplix {
    match p {
        Tuplix::Conj(..) => {
            let parts = p.conjuncts();
            let mut scope = defs.clone();
            for part in &parts {
                if let Tuplix::Gamma(f, l) = part {
                    scope.insert(f.clone(), l.map_body(|b| unfold(b, defs)));
                }
            }
            let mut out = Tuplix::Eps;
            for (i, part) in parts.iter().enumerate() {
                let next = fd_in(part, &scope);
                out = if i == 0 { next } else { Tuplix::Conj(Box::new(out), Box::new(next)) };
            }
            out
        }
        Tuplix::Gamma(f, l) => Tuplix::Gamma(f.clone(), l.map_body(|b| unfold(b, defs))),
        Tuplix::SumFn(f, body) => {
            let mut inner = defs.clone();
            inner.remove(f);
            Tuplix::SumFn(f.clone(), Box::new(fd_in(body, &inner)))
        }
        _ => p.map_children(|c| fd_in(c, defs), |t| unfold(t, defs)),
    }
}

/// Reads `sumf f . (gamma(f, l) & Q)` as `let f = l in Q`: once the
/// definition has been applied, the binder and the definition are dropped
/// provided `f` no longer occurs in `Q`. A binder whose body does not
/// mention `f` at all is dropped too. Anything else is left in place.
pub fn sum_fn_elim(p: &Tuplix) -> Tuplix {
    match p {
        Tuplix::SumFn(f, body) => {
            let body = sum_fn_elim(&apply_fd(body));
            if !body.mentions_fn(f) {
                return body;
            }
            let parts = body.conjuncts();
            let defining: Vec<usize> = parts
                .iter()
                .enumerate()
                .filter(|(_, c)| matches!(c, Tuplix::Gamma(g, _) if g == f))
                .map(|(i, _)| i)
                .collect();
            if defining.len() == 1 {
                let rest: Vec<Tuplix> = parts
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != defining[0])
                    .map(|(_, c)| c.clone())
                    .collect();
                let rest = Tuplix::conj_all(rest);
                if !rest.mentions_fn(f) {
                    return rest;
                }
            }
            Tuplix::SumFn(f.clone(), Box::new(body))
        }
        _ => p.map_children(sum_fn_elim, DataTerm::clone),
    }
}
