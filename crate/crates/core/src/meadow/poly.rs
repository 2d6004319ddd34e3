//! Sparse polynomial representation used as the normal form of data terms.
//!
//! A [`Poly`] is a finite sum of rational multiples of monomials. A monomial
//! is a product of powers of bases, where a base is a variable, an opaque
//! function application, or (only ever inverted) a monic, content-free sum.
//! Every factor carries a pair of exponents `(pos, neg)` meaning
//! `b^pos * (b^-1)^neg`, reduced with the meadow laws
//!
//! * `b^p * b^-q = b^(p-q)` when `p > q`, and symmetrically when `p < q`,
//! * `b^p * b^-p = b * b^-1` when `p >= 1`,
//!
//! which hold pointwise in every zero-totalized field (both sides vanish at
//! `b = 0`).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use super::term::{Callee, DataTerm, Rational};
use crate::funcdef::{self, FnVar};
use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Base {
    Var(Symbol),
    App(FnVar, Vec<Poly>),
    /// Monic, content-free polynomial with at least two terms.
    Sum(Poly),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Power {
    pub pos: u32,
    pub neg: u32,
}

impl Power {
    pub const ONE: Power = Power { pos: 1, neg: 0 };

    fn reduced(pos: u32, neg: u32) -> Power {
        match pos.cmp(&neg) {
            Ordering::Greater => Power { pos: pos - neg, neg: 0 },
            Ordering::Less => Power { pos: 0, neg: neg - pos },
            Ordering::Equal if pos == 0 => Power { pos: 0, neg: 0 },
            Ordering::Equal => Power { pos: 1, neg: 1 },
        }
    }

    fn combine(self, other: Power) -> Power {
        Power::reduced(self.pos + other.pos, self.neg + other.neg)
    }

    fn is_unit(self) -> bool {
        self.pos == 0 && self.neg == 0
    }

    fn swapped(self) -> Power {
        Power {
            pos: self.neg,
            neg: self.pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub(crate) struct Monomial(BTreeMap<Base, Power>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(BTreeMap::new())
    }

    pub fn of(base: Base, power: Power) -> Monomial {
        let mut m = BTreeMap::new();
        if !power.is_unit() {
            m.insert(base, power);
        }
        Monomial(m)
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Base, &Power)> {
        self.0.iter()
    }

    pub fn get(&self, base: &Base) -> Option<Power> {
        self.0.get(base).copied()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (b, p) in &other.0 {
            let combined = match out.get(b) {
                Some(q) => q.combine(*p),
                None => *p,
            };
            if combined.is_unit() {
                out.remove(b);
            } else {
                out.insert(b.clone(), combined);
            }
        }
        Monomial(out)
    }

    pub fn without(&self, base: &Base) -> Monomial {
        let mut out = self.0.clone();
        out.remove(base);
        Monomial(out)
    }

    /// True when every factor has a plain non-negative power.
    pub fn is_pure(&self) -> bool {
        self.0.values().all(|p| p.neg == 0)
    }

    /// `(numerator, denominator)` with `self = numerator / denominator`.
    pub fn split_denominator(&self) -> (Monomial, Monomial) {
        let mut num = BTreeMap::new();
        let mut den = BTreeMap::new();
        for (b, p) in &self.0 {
            if p.pos > 0 {
                num.insert(b.clone(), Power { pos: p.pos, neg: 0 });
            }
            if p.neg > 0 {
                den.insert(b.clone(), Power { pos: 0, neg: p.neg });
            }
        }
        (Monomial(num), Monomial(den))
    }
}

/// Normalized data term. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly(BTreeMap<Monomial, Rational>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(BTreeMap::new())
    }

    pub fn constant(c: Rational) -> Poly {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(Monomial::one(), c);
        }
        Poly(m)
    }

    pub fn int(n: i64) -> Poly {
        Poly::constant(super::term::rational(n))
    }

    pub fn var(v: Symbol) -> Poly {
        Poly::from_base(Base::Var(v))
    }

    pub(crate) fn from_base(b: Base) -> Poly {
        Poly::monomial(Rational::one(), Monomial::of(b, Power::ONE))
    }

    pub(crate) fn monomial(c: Rational, m: Monomial) -> Poly {
        let mut out = BTreeMap::new();
        if !c.is_zero() {
            out.insert(m, c);
        }
        Poly(out)
    }

    pub(crate) fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.0.len() {
            0 => Some(Rational::zero()),
            1 => self.0.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub(crate) fn single_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.0.len() == 1 {
            self.0.iter().next()
        } else {
            None
        }
    }

    /// Leading (greatest) term.
    pub(crate) fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.0.iter().next_back()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.0.clone();
        for (m, c) in &other.0 {
            let sum = match out.get(m) {
                Some(d) => d + c,
                None => c.clone(),
            };
            if sum.is_zero() {
                out.remove(m);
            } else {
                out.insert(m.clone(), sum);
            }
        }
        Poly(out)
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(m, c)| (m.clone(), c * k)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                let m = m1.mul(m2);
                let c = c1 * c2;
                let sum = match out.remove(&m) {
                    Some(d) => d + c,
                    None => c,
                };
                if !sum.is_zero() {
                    out.insert(m, sum);
                }
            }
        }
        Poly(out)
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::int(1);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Totalized inverse.
    pub fn inverse(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        if let Some((m, c)) = self.single_term() {
            return invert_monomial(m).scale(&c.recip());
        }
        let (content, rest) = self.split_content();
        let (lead, monic) = rest.monic();
        let sum = Poly::monomial(
            Rational::one(),
            Monomial::of(Base::Sum(monic), Power { pos: 0, neg: 1 }),
        );
        invert_monomial(&content).mul(&sum).scale(&lead.recip())
    }

    /// Splits off the largest monomial of plain positive variable/application
    /// powers dividing every term: `self = content * rest`.
    pub(crate) fn split_content(&self) -> (Monomial, Poly) {
        let mut iter = self.0.keys();
        let Some(first) = iter.next() else {
            return (Monomial::one(), Poly::zero());
        };
        let mut common: BTreeMap<Base, u32> = first
            .factors()
            .filter(|(b, p)| !matches!(b, Base::Sum(_)) && p.neg == 0)
            .map(|(b, p)| (b.clone(), p.pos))
            .collect();
        for m in iter {
            common.retain(|b, e| match m.get(b) {
                Some(p) if p.neg == 0 => {
                    *e = (*e).min(p.pos);
                    true
                }
                _ => false,
            });
        }
        if common.is_empty() {
            return (Monomial::one(), self.clone());
        }
        let content = Monomial(
            common
                .iter()
                .map(|(b, e)| (b.clone(), Power { pos: *e, neg: 0 }))
                .collect(),
        );
        let rest = Poly(
            self.0
                .iter()
                .map(|(m, c)| {
                    let mut f = m.0.clone();
                    for (b, e) in &common {
                        let p = f[b];
                        if p.pos == *e {
                            f.remove(b);
                        } else {
                            f.insert(b.clone(), Power { pos: p.pos - e, neg: 0 });
                        }
                    }
                    (Monomial(f), c.clone())
                })
                .collect(),
        );
        (content, rest)
    }

    /// `self = lead * monic` with the leading coefficient of `monic` equal
    /// to one.
    pub(crate) fn monic(&self) -> (Rational, Poly) {
        match self.leading() {
            None => (Rational::one(), Poly::zero()),
            Some((_, c)) => {
                let c = c.clone();
                (c.clone(), self.scale(&c.recip()))
            }
        }
    }

    pub fn from_term(t: &DataTerm) -> Poly {
        match t {
            DataTerm::Const(c) => Poly::constant(c.clone()),
            DataTerm::Var(v) => Poly::var(v.clone()),
            DataTerm::Neg(a) => Poly::from_term(a).neg(),
            DataTerm::Add(a, b) => Poly::from_term(a).add(&Poly::from_term(b)),
            DataTerm::Mul(a, b) => Poly::from_term(a).mul(&Poly::from_term(b)),
            DataTerm::Inv(a) => Poly::from_term(a).inverse(),
            DataTerm::App(app) => match app.head() {
                Callee::Fn(f) => Poly::from_base(Base::App(
                    f.clone(),
                    app.args().iter().map(Poly::from_term).collect(),
                )),
                Callee::Lambda(_) => Poly::from_term(&funcdef::beta_reduce(t)),
            },
        }
    }

    /// Canonical data term for this polynomial; `from_term` maps it back to
    /// `self`. Terms sharing a denominator are printed over it once:
    /// `(x - y) / (x - y)` rather than `x / (x - y) - y / (x - y)`.
    pub fn to_term(&self) -> DataTerm {
        let mut groups: Vec<(Monomial, Poly)> = Vec::new();
        for (m, c) in self.0.iter().rev() {
            let (num, den) = m.split_denominator();
            match groups.iter_mut().find(|(d, _)| *d == den && !den.is_one()) {
                Some((_, p)) => {
                    p.0.insert(num, c.clone());
                }
                None => groups.push((den, Poly([(num, c.clone())].into_iter().collect()))),
            }
        }
        let mut acc: Option<DataTerm> = None;
        for (den, num) in groups {
            let (negative, t) = if let Some((m, c)) = num.single_term() {
                let m = m.mul(&den);
                if acc.is_none() && c.is_negative() && !(c.abs().is_one() && !m.is_one()) {
                    acc = Some(monomial_term(c, &m));
                    continue;
                }
                (c.is_negative(), monomial_term(&c.abs(), &m))
            } else {
                let negative = num.leading().is_some_and(|(_, c)| c.is_negative());
                let num = if negative { num.neg() } else { num };
                (negative, over(num.to_term(), &den))
            };
            acc = Some(match (acc, negative) {
                (None, false) => t,
                (None, true) => DataTerm::Neg(Box::new(t)),
                (Some(prev), false) => DataTerm::Add(Box::new(prev), Box::new(t)),
                (Some(prev), true) => {
                    DataTerm::Add(Box::new(prev), Box::new(DataTerm::Neg(Box::new(t))))
                }
            });
        }
        acc.unwrap_or_else(DataTerm::zero)
    }

    /// Every data variable, including those inside inverted sums and
    /// function arguments.
    pub fn vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Symbol>) {
        for m in self.0.keys() {
            for (b, _) in m.factors() {
                b.collect_vars(out);
            }
        }
    }

    pub fn mentions(&self, v: &Symbol) -> bool {
        self.vars().contains(v)
    }

    pub(crate) fn has_inverse(&self) -> bool {
        self.0.keys().any(|m| !m.is_pure())
    }

    /// Variables and applications occurring as plain factors at top level.
    pub(crate) fn indeterminates(&self) -> BTreeSet<Base> {
        self.0
            .keys()
            .flat_map(|m| m.factors().map(|(b, _)| b.clone()))
            .filter(|b| !matches!(b, Base::Sum(_)))
            .collect()
    }

    pub fn substitute(&self, x: &Symbol, s: &Poly) -> Poly {
        self.substitute_base(&Base::Var(x.clone()), s)
    }

    /// Replaces an indeterminate (variable or application) by a polynomial,
    /// renormalizing inverted sums and application arguments on the way.
    pub(crate) fn substitute_base(&self, target: &Base, s: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for (m, c) in &self.0 {
            let mut term = Poly::constant(c.clone());
            for (b, p) in m.factors() {
                let factor = if b == target {
                    power_of(s, *p)
                } else {
                    match b {
                        Base::Var(_) => Poly::monomial(Rational::one(), Monomial::of(b.clone(), *p)),
                        Base::App(f, args) => {
                            let new_args: Vec<Poly> =
                                args.iter().map(|a| a.substitute_base(target, s)).collect();
                            if &new_args == args {
                                Poly::monomial(Rational::one(), Monomial::of(b.clone(), *p))
                            } else {
                                power_of(&Poly::from_base(Base::App(f.clone(), new_args)), *p)
                            }
                        }
                        Base::Sum(inner) => power_of(&inner.substitute_base(target, s), *p),
                    }
                };
                term = term.mul(&factor);
                if term.is_zero() {
                    break;
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Writes `self = coeff * v + rest` when `v` occurs only linearly, as a
    /// plain factor, and nowhere inside inverses or applications.
    pub(crate) fn linear_in(&self, v: &Base) -> Option<(Poly, Poly)> {
        let mut coeff = Poly::zero();
        let mut rest = Poly::zero();
        for (m, c) in &self.0 {
            match m.get(v) {
                None => {
                    if m.factors().any(|(b, _)| b.contains(v)) {
                        return None;
                    }
                    rest = rest.add(&Poly::monomial(c.clone(), m.clone()));
                }
                Some(Power { pos: 1, neg: 0 }) => {
                    let other = m.without(v);
                    if other.factors().any(|(b, _)| b.contains(v)) {
                        return None;
                    }
                    coeff = coeff.add(&Poly::monomial(c.clone(), other));
                }
                Some(_) => return None,
            }
        }
        if coeff.is_zero() {
            None
        } else {
            Some((coeff, rest))
        }
    }

    /// Exact division by a pure polynomial under a lexicographic term order;
    /// `None` when `divisor` does not divide `self`. Inverse factors in
    /// `self` are carried through only when they share no base with the
    /// divisor.
    pub(crate) fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() || divisor.has_inverse() {
            return None;
        }
        let dbases = divisor.indeterminates();
        for m in self.0.keys() {
            for (b, p) in m.factors() {
                if p.neg > 0 && dbases.contains(b) {
                    return None;
                }
            }
        }
        let order: Vec<Base> = dbases.iter().cloned().collect();
        let lead_of = |p: &Poly| -> Option<(Monomial, Rational)> {
            p.0.iter()
                .max_by(|(a, _), (b, _)| lex_cmp(a, b, &order))
                .map(|(m, c)| (m.clone(), c.clone()))
        };
        let (dm, dc) = lead_of(divisor)?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = lead_of(&rem) {
            let qm = monomial_div(&rm, &dm)?;
            let t = Poly::monomial(&rc / &dc, qm);
            quot = quot.add(&t);
            rem = rem.sub(&t.mul(divisor));
        }
        Some(quot)
    }
}

/// Lexicographic comparison on the exponents of `order`'s bases, ties broken
/// by the structural order of the cofactor.
fn lex_cmp(a: &Monomial, b: &Monomial, order: &[Base]) -> Ordering {
    for base in order {
        let ea = a.get(base).map_or(0, |p| p.pos);
        let eb = b.get(base).map_or(0, |p| p.pos);
        match ea.cmp(&eb) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    let strip = |m: &Monomial| {
        let mut r = m.clone();
        for base in order {
            r = r.without(base);
        }
        r
    };
    strip(a).cmp(&strip(b))
}

fn monomial_div(m: &Monomial, d: &Monomial) -> Option<Monomial> {
    let mut out = m.0.clone();
    for (b, p) in d.factors() {
        let have = out.get(b).copied()?;
        if have.neg > 0 || have.pos < p.pos {
            return None;
        }
        if have.pos == p.pos {
            out.remove(b);
        } else {
            out.insert(b.clone(), Power { pos: have.pos - p.pos, neg: 0 });
        }
    }
    Some(Monomial(out))
}

impl Base {
    fn collect_vars(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Base::Var(v) => {
                out.insert(v.clone());
            }
            Base::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Base::Sum(p) => p.collect_vars(out),
        }
    }

    /// True when `target` occurs in `self`, including `self == target`.
    pub(crate) fn contains(&self, target: &Base) -> bool {
        if self == target {
            return true;
        }
        match self {
            Base::Var(_) => false,
            Base::App(_, args) => args.iter().any(|a| a.contains_base(target)),
            Base::Sum(p) => p.contains_base(target),
        }
    }

    pub(crate) fn to_term(&self) -> DataTerm {
        match self {
            Base::Var(v) => DataTerm::Var(v.clone()),
            Base::App(f, args) => DataTerm::app(
                Callee::Fn(f.clone()),
                args.iter().map(Poly::to_term).collect(),
            )
            .expect("normalized application keeps its arity"),
            Base::Sum(p) => p.to_term(),
        }
    }
}

impl Poly {
    pub(crate) fn contains_base(&self, target: &Base) -> bool {
        self.0
            .keys()
            .any(|m| m.factors().any(|(b, _)| b.contains(target)))
    }
}

fn invert_monomial(m: &Monomial) -> Poly {
    let mut acc = Poly::int(1);
    for (b, p) in m.factors() {
        let factor = match b {
            Base::Sum(inner) => {
                // only inverted sums are stored, so the swap is a plain power
                power_of(inner, p.swapped())
            }
            _ => Poly::monomial(Rational::one(), Monomial::of(b.clone(), p.swapped())),
        };
        acc = acc.mul(&factor);
    }
    acc
}

fn power_of(s: &Poly, p: Power) -> Poly {
    let mut out = s.pow(p.pos);
    if p.neg > 0 {
        out = out.mul(&s.inverse().pow(p.neg));
    }
    out
}

/// `t / d` for a denominator monomial holding only inverted factors.
fn over(t: DataTerm, den: &Monomial) -> DataTerm {
    let mut acc = t;
    for (b, p) in den.factors() {
        for _ in 0..p.neg {
            acc = DataTerm::Mul(Box::new(acc), Box::new(DataTerm::Inv(Box::new(b.to_term()))));
        }
    }
    acc
}

fn monomial_term(c: &Rational, m: &Monomial) -> DataTerm {
    let mut positive: Vec<DataTerm> = Vec::new();
    let mut inverse: Vec<DataTerm> = Vec::new();
    for (b, p) in m.factors() {
        let t = b.to_term();
        for _ in 0..p.pos {
            positive.push(t.clone());
        }
        for _ in 0..p.neg {
            inverse.push(t.clone());
        }
    }
    let mut acc = if !c.is_one() || positive.is_empty() {
        DataTerm::Const(c.clone())
    } else {
        positive.remove(0)
    };
    for f in positive {
        acc = DataTerm::Mul(Box::new(acc), Box::new(f));
    }
    for f in inverse {
        acc = DataTerm::Mul(Box::new(acc), Box::new(DataTerm::Inv(Box::new(f))));
    }
    acc
}
