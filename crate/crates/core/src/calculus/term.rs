use std::collections::BTreeSet;
use std::fmt;

use crate::funcdef::{FnVar, Lambda};
use crate::meadow::DataTerm;
use crate::symbol::Symbol;

/// Presentation of an attribute: plain `a`, or the signed copies `+a` and
/// `-a`, which are distinct attributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Flat,
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Attribute {
    name: Symbol,
    sign: Sign,
}

impl Attribute {
    pub fn flat(name: impl Into<Symbol>) -> Self {
        Attribute {
            name: name.into(),
            sign: Sign::Flat,
        }
    }

    pub fn plus(name: impl Into<Symbol>) -> Self {
        Attribute {
            name: name.into(),
            sign: Sign::Plus,
        }
    }

    pub fn minus(name: impl Into<Symbol>) -> Self {
        Attribute {
            name: name.into(),
            sign: Sign::Minus,
        }
    }

    pub fn name(&self) -> &Symbol {
        &self.name
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn is_flat(&self) -> bool {
        self.sign == Sign::Flat
    }

    pub fn to_flat(&self) -> Attribute {
        Attribute::flat(self.name.clone())
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Flat => write!(f, "{}", self.name),
            Sign::Plus => write!(f, "+{}", self.name),
            Sign::Minus => write!(f, "-{}", self.name),
        }
    }
}

pub type AttrSet = BTreeSet<Attribute>;

/// A unit together with its in-going and outgoing channels, as needed by
/// the signed-attribute operators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitRef {
    pub name: Symbol,
    pub ins: BTreeSet<Symbol>,
    pub outs: BTreeSet<Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tuplix {
    Eps,
    Delta,
    Test(DataTerm),
    Entry(Attribute, DataTerm),
    Conj(Box<Tuplix>, Box<Tuplix>),
    Alt(Box<Tuplix>, Box<Tuplix>),
    Sum(Symbol, Box<Tuplix>),
    Scalar(DataTerm, Box<Tuplix>),
    Clear(AttrSet, Box<Tuplix>),
    Select(AttrSet, Box<Tuplix>),
    Encap(AttrSet, Box<Tuplix>),
    /// `K_t(P)`; plain `K(P)` is `K_0(P)`.
    Kirch(DataTerm, Box<Tuplix>),
    Zeta(UnitRef, AttrSet, Box<Tuplix>),
    Flat(Box<Tuplix>),
    Signed(UnitRef, Box<Tuplix>),
    Gamma(FnVar, Lambda),
    SumFn(FnVar, Box<Tuplix>),
}

/// `X & Y` with `δ` absorbing and `ε` as unit.
pub fn conj(x: Tuplix, y: Tuplix) -> Tuplix {
    match (x, y) {
        (Tuplix::Delta, _) | (_, Tuplix::Delta) => Tuplix::Delta,
        (Tuplix::Eps, y) => y,
        (x, Tuplix::Eps) => x,
        (x, y) => Tuplix::Conj(Box::new(x), Box::new(y)),
    }
}

/// `X + Y` with `δ` as unit.
pub fn alt(x: Tuplix, y: Tuplix) -> Tuplix {
    match (x, y) {
        (Tuplix::Delta, y) => y,
        (x, Tuplix::Delta) => x,
        (x, y) => Tuplix::Alt(Box::new(x), Box::new(y)),
    }
}

pub fn sum(x: impl Into<Symbol>, p: Tuplix) -> Tuplix {
    match p {
        Tuplix::Delta => Tuplix::Delta,
        p => Tuplix::Sum(x.into(), Box::new(p)),
    }
}

/// `[t]`; a constant zero test is `ε` right away.
pub fn test(t: DataTerm) -> Tuplix {
    if t.is_const_zero() {
        Tuplix::Eps
    } else {
        Tuplix::Test(t)
    }
}

pub fn entry(a: Attribute, t: DataTerm) -> Tuplix {
    Tuplix::Entry(a, t)
}

impl Tuplix {
    pub fn conj_all(parts: impl IntoIterator<Item = Tuplix>) -> Tuplix {
        let mut it = parts.into_iter();
        match it.next() {
            None => Tuplix::Eps,
            Some(first) => it.fold(first, |acc, p| Tuplix::Conj(Box::new(acc), Box::new(p))),
        }
    }

    pub fn alt_all(parts: impl IntoIterator<Item = Tuplix>) -> Tuplix {
        let mut it = parts.into_iter();
        match it.next() {
            None => Tuplix::Delta,
            Some(first) => it.fold(first, |acc, p| Tuplix::Alt(Box::new(acc), Box::new(p))),
        }
    }

    /// Flattened list of conjuncts, left to right.
    pub fn conjuncts(&self) -> Vec<Tuplix> {
        let mut out = Vec::new();
        fn go(p: &Tuplix, out: &mut Vec<Tuplix>) {
            match p {
                Tuplix::Conj(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                _ => out.push(p.clone()),
            }
        }
        go(self, &mut out);
        out
    }

    /// Rebuilds the node with every direct tuplix child mapped by `fp` and
    /// every direct data term mapped by `fd`. Binders are not renamed.
    pub fn map_children(
        &self,
        mut fp: impl FnMut(&Tuplix) -> Tuplix,
        mut fd: impl FnMut(&DataTerm) -> DataTerm,
    ) -> Tuplix {
        use Tuplix::*;
        let b = |p: Tuplix| Box::new(p);
        match self {
            Eps | Delta => self.clone(),
            Test(t) => Test(fd(t)),
            Entry(a, t) => Entry(a.clone(), fd(t)),
            Conj(x, y) => Conj(b(fp(x)), b(fp(y))),
            Alt(x, y) => Alt(b(fp(x)), b(fp(y))),
            Sum(v, p) => Sum(v.clone(), b(fp(p))),
            Scalar(t, p) => Scalar(fd(t), b(fp(p))),
            Clear(i, p) => Clear(i.clone(), b(fp(p))),
            Select(j, p) => Select(j.clone(), b(fp(p))),
            Encap(h, p) => Encap(h.clone(), b(fp(p))),
            Kirch(t, p) => Kirch(fd(t), b(fp(p))),
            Zeta(g, h, p) => Zeta(g.clone(), h.clone(), b(fp(p))),
            Flat(p) => Flat(b(fp(p))),
            Signed(g, p) => Signed(g.clone(), b(fp(p))),
            Gamma(f, l) => Gamma(f.clone(), l.map_body(|t| fd(t))),
            SumFn(f, p) => SumFn(f.clone(), b(fp(p))),
        }
    }

    fn children(&self) -> Vec<&Tuplix> {
        use Tuplix::*;
        match self {
            Eps | Delta | Test(_) | Entry(..) | Gamma(..) => vec![],
            Conj(x, y) | Alt(x, y) => vec![x, y],
            Sum(_, p) | Scalar(_, p) | Clear(_, p) | Select(_, p) | Encap(_, p) | Kirch(_, p)
            | Zeta(_, _, p) | Flat(p) | Signed(_, p) | SumFn(_, p) => vec![p],
        }
    }

    fn data(&self) -> Vec<&DataTerm> {
        match self {
            Tuplix::Test(t) | Tuplix::Entry(_, t) | Tuplix::Scalar(t, _) | Tuplix::Kirch(t, _) => {
                vec![t]
            }
            Tuplix::Gamma(_, l) => vec![l.body()],
            _ => vec![],
        }
    }

    /// True when only `eps`, `null`, tests, entries, `&`, `+` and `sum` occur.
    pub fn is_basic_syntax(&self) -> bool {
        match self {
            Tuplix::Eps | Tuplix::Delta | Tuplix::Test(_) | Tuplix::Entry(..) => true,
            Tuplix::Conj(x, y) | Tuplix::Alt(x, y) => x.is_basic_syntax() && y.is_basic_syntax(),
            Tuplix::Sum(_, p) => p.is_basic_syntax(),
            _ => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Tuplix::Sum(x, p) => {
                let mut inner = p.free_vars();
                inner.remove(x);
                out.extend(inner);
            }
            Tuplix::Gamma(_, l) => out.extend(l.free_vars()),
            _ => {
                for t in self.data() {
                    t.collect_vars(out);
                }
                for c in self.children() {
                    c.collect_free(out);
                }
            }
        }
    }

    /// Every data variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        fn go(p: &Tuplix, out: &mut BTreeSet<Symbol>) {
            if let Tuplix::Sum(x, _) = p {
                out.insert(x.clone());
            }
            if let Tuplix::Gamma(_, l) = p {
                out.extend(l.params().iter().cloned());
            }
            for t in p.data() {
                t.collect_vars(out);
            }
            for c in p.children() {
                go(c, out);
            }
        }
        go(self, &mut out);
        out
    }

    /// Attributes of the entries occurring in the term.
    pub fn attributes(&self) -> AttrSet {
        let mut out = AttrSet::new();
        fn go(p: &Tuplix, out: &mut AttrSet) {
            if let Tuplix::Entry(a, _) = p {
                out.insert(a.clone());
            }
            for c in p.children() {
                go(c, out);
            }
        }
        go(self, &mut out);
        out
    }

    pub fn mentions_fn(&self, f: &FnVar) -> bool {
        if let Tuplix::Gamma(g, l) = self {
            return g == f || l.body().fn_vars().contains(f);
        }
        if let Tuplix::SumFn(g, p) = self {
            return g != f && p.mentions_fn(f);
        }
        self.data().iter().any(|t| t.fn_vars().contains(f))
            || self.children().iter().any(|c| c.mentions_fn(f))
    }

    /// `P[s/x]`, renaming summation binders that would capture a variable
    /// of `s`.
    pub fn substitute(&self, x: &Symbol, s: &DataTerm) -> Tuplix {
        match self {
            Tuplix::Sum(y, _) if y == x => self.clone(),
            Tuplix::Sum(y, p) => {
                let svars = s.vars();
                if svars.contains(y) && p.free_vars().contains(x) {
                    let mut avoid = svars;
                    avoid.extend(p.all_vars());
                    avoid.insert(x.clone());
                    let fresh = y.fresh_against(&avoid);
                    let renamed = p.substitute(y, &DataTerm::Var(fresh.clone()));
                    Tuplix::Sum(fresh, Box::new(renamed.substitute(x, s)))
                } else {
                    Tuplix::Sum(y.clone(), Box::new(p.substitute(x, s)))
                }
            }
            Tuplix::Gamma(f, l) => Tuplix::Gamma(f.clone(), l.substitute(x, s)),
            _ => self.map_children(|c| c.substitute(x, s), |t| t.substitute(x, s)),
        }
    }
}

/// Capture-avoiding substitution `P[t/x]`.
pub fn subst_tuplix(p: &Tuplix, x: &Symbol, t: &DataTerm) -> Tuplix {
    p.substitute(x, t)
}

pub fn free_vars(p: &Tuplix) -> BTreeSet<Symbol> {
    p.free_vars()
}
