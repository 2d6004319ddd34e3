//! Zero and equality checks for data terms.
//!
//! A term is a polynomial over opaque inverse atoms. To decide whether it
//! vanishes we split on the zero-ness of each inverse argument: where the
//! argument is assumed nonzero its inverse becomes a genuine field inverse,
//! where it is assumed zero the constraint is solved by substitution (so the
//! inverse folds to `0^-1 = 0`). Every leaf is then a rational function whose
//! numerator is compared with zero as a polynomial over the rationals.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eval::{eval_data, Assignment};
use super::poly::{Base, Poly};
use super::term::{DataTerm, Rational};
use super::MeadowError;
use crate::symbol::Symbol;

/// Three-valued verdict of a symbolic check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tri {
    ProvablyTrue,
    ProvablyFalse,
    Unknown,
}

pub const DEFAULT_SEED: u64 = 0xCAFE;
pub const DEFAULT_BRANCH_BUDGET: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionConfig {
    /// Seed of the random pre-pass in [`eq_data_with`].
    pub seed: u64,
    /// Maximum number of case-split nodes explored per check.
    pub branch_budget: u64,
    /// Number of random evaluations tried before the exact procedure.
    pub samples: usize,
}

impl Default for DecisionConfig {
    fn default() -> Self {
        DecisionConfig {
            seed: DEFAULT_SEED,
            branch_budget: DEFAULT_BRANCH_BUDGET,
            samples: 64,
        }
    }
}

pub fn is_zero(t: &DataTerm) -> Result<Tri, MeadowError> {
    is_zero_with(t, &DecisionConfig::default())
}

/// `ProvablyTrue` when `t = 0` in every cancellation meadow under every
/// assignment, `ProvablyFalse` when `t != 0` under every assignment.
pub fn is_zero_with(t: &DataTerm, cfg: &DecisionConfig) -> Result<Tri, MeadowError> {
    poly_is_zero(&Poly::from_term(t), cfg)
}

pub(crate) fn poly_is_zero(p: &Poly, cfg: &DecisionConfig) -> Result<Tri, MeadowError> {
    let s = explore(p, cfg)?;
    Ok(if s.always_zero() {
        Tri::ProvablyTrue
    } else if s.never_zero() {
        Tri::ProvablyFalse
    } else {
        Tri::Unknown
    })
}

pub fn eq_data(t: &DataTerm, s: &DataTerm) -> Result<Tri, MeadowError> {
    eq_data_with(t, s, &DecisionConfig::default())
}

/// `ProvablyTrue` when `t = s` is an identity, `ProvablyFalse` when the two
/// sides differ under at least one assignment.
pub fn eq_data_with(t: &DataTerm, s: &DataTerm, cfg: &DecisionConfig) -> Result<Tri, MeadowError> {
    if find_witness(t, s, cfg).is_some() {
        return Ok(Tri::ProvablyFalse);
    }
    poly_eq(&Poly::from_term(t), &Poly::from_term(s), cfg)
}

pub(crate) fn poly_eq(p: &Poly, q: &Poly, cfg: &DecisionConfig) -> Result<Tri, MeadowError> {
    let d = p.sub(q);
    if d.is_zero() {
        return Ok(Tri::ProvablyTrue);
    }
    let s = explore(&d, cfg)?;
    Ok(if s.always_zero() {
        Tri::ProvablyTrue
    } else if s.somewhere_nonzero() {
        Tri::ProvablyFalse
    } else {
        Tri::Unknown
    })
}

/// Searches random rational assignments for one where `t` and `s` differ.
/// Terms applying function variables have no value and are never sampled.
pub fn find_witness(t: &DataTerm, s: &DataTerm, cfg: &DecisionConfig) -> Option<Assignment> {
    if has_fn_app(t) || has_fn_app(s) {
        return None;
    }
    let mut vars: BTreeSet<Symbol> = t.vars();
    vars.extend(s.vars());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let try_env = |env: &Assignment| match (eval_data(t, env), eval_data(s, env)) {
        (Ok(a), Ok(b)) => a != b,
        _ => false,
    };
    // the small corner points catch most totalization mismatches
    for corner in [0i64, 1] {
        let env: Assignment = vars
            .iter()
            .map(|v| (v.clone(), super::term::rational(corner)))
            .collect();
        if try_env(&env) {
            return Some(env);
        }
    }
    let sample = |rng: &mut ChaCha8Rng| -> Assignment {
        vars.iter()
            .map(|v| {
                let n: i64 = rng.gen_range(-100..=100);
                let d: i64 = rng.gen_range(1..=100);
                (v.clone(), Rational::new(n.into(), d.into()))
            })
            .collect()
    };
    // random points almost never hit the zeros of an inverted sum, where
    // the totalized inverse matters; aim at them directly
    let mut sums = Vec::new();
    inverted_sums(&Poly::from_term(t), &mut sums);
    inverted_sums(&Poly::from_term(s), &mut sums);
    for q in &sums {
        for v in q.vars() {
            let Some((c, r)) = q.linear_in(&Base::Var(v.clone())) else {
                continue;
            };
            for _ in 0..4 {
                let mut env = sample(&mut rng);
                let (Ok(c), Ok(r)) = (eval_data(&c.to_term(), &env), eval_data(&r.to_term(), &env)) else {
                    continue;
                };
                if c.is_zero() {
                    continue;
                }
                env.insert(v.clone(), -r / c);
                if try_env(&env) {
                    return Some(env);
                }
            }
        }
    }
    for _ in 0..cfg.samples {
        let env = sample(&mut rng);
        if try_env(&env) {
            return Some(env);
        }
    }
    None
}

/// Arguments of the inverses in `p`, nested ones included, without
/// duplicates.
fn inverted_sums(p: &Poly, out: &mut Vec<Poly>) {
    for (m, _) in p.terms() {
        for (b, _) in m.factors() {
            if let Base::Sum(q) = b {
                if !out.contains(q) {
                    out.push(q.clone());
                }
                inverted_sums(q, out);
            }
        }
    }
}

fn has_fn_app(t: &DataTerm) -> bool {
    !crate::funcdef::beta_reduce(t).fn_vars().is_empty()
}

#[derive(Debug, Default)]
struct Summary {
    /// Some feasible leaf where the term vanishes identically.
    zero: bool,
    /// Some feasible leaf where the term vanishes nowhere.
    nowhere_zero: bool,
    /// Some feasible leaf where the term vanishes at some points only.
    mixed: bool,
    /// Some branch could not be resolved.
    undecided: bool,
}

impl Summary {
    fn always_zero(&self) -> bool {
        !self.undecided && !self.nowhere_zero && !self.mixed
    }

    fn never_zero(&self) -> bool {
        !self.undecided && !self.zero && !self.mixed && self.nowhere_zero
    }

    fn somewhere_nonzero(&self) -> bool {
        self.nowhere_zero || self.mixed
    }
}

/// `num / den` with both sides free of inverses and `den` nonzero on the
/// current branch. The denominator is kept as a product of factors so that
/// sums are taken over the least common multiple instead of the product.
#[derive(Debug, Clone)]
struct Fraction {
    num: Poly,
    den: BTreeMap<Poly, u32>,
}

fn product(factors: &BTreeMap<Poly, u32>) -> Poly {
    factors
        .iter()
        .fold(Poly::int(1), |acc, (f, n)| acc.mul(&f.pow(*n)))
}

impl Fraction {
    fn zero() -> Fraction {
        Fraction {
            num: Poly::zero(),
            den: BTreeMap::new(),
        }
    }

    fn add(self, other: Fraction) -> Fraction {
        if other.num.is_zero() {
            return self;
        }
        if self.num.is_zero() {
            return other;
        }
        let mut lcm = self.den.clone();
        for (f, n) in &other.den {
            let e = lcm.entry(f.clone()).or_insert(0);
            *e = (*e).max(*n);
        }
        let widen = |fr: &Fraction| {
            let missing: BTreeMap<Poly, u32> = lcm
                .iter()
                .map(|(f, n)| (f.clone(), n - fr.den.get(f).copied().unwrap_or(0)))
                .filter(|(_, n)| *n > 0)
                .collect();
            fr.num.mul(&product(&missing))
        };
        Fraction {
            num: widen(&self).add(&widen(&other)),
            den: lcm,
        }
    }
}

/// Irreducible-enough factors whose simultaneous non-vanishing is
/// equivalent to that of `a`: its variable content and its monic
/// content-free remainder.
pub(crate) fn nonzero_factors(a: &Poly) -> Vec<Poly> {
    let mut out = Vec::new();
    if a.as_constant().is_some() {
        return out;
    }
    let (content, rest) = a.split_content();
    for (b, _) in content.factors() {
        out.push(Poly::from_base(b.clone()));
    }
    if rest.as_constant().is_none() {
        out.push(rest.monic().1);
    }
    out
}

/// Evaluates `p` as a fraction assuming every member of `hyps` is nonzero;
/// `Err(k)` asks for a case split on `k`.
fn to_fraction(p: &Poly, hyps: &BTreeSet<Poly>) -> Result<Fraction, Poly> {
    let mut acc = Fraction::zero();
    for (m, c) in p.terms() {
        let mut num = Poly::constant(c.clone());
        let mut den: BTreeMap<Poly, u32> = BTreeMap::new();
        for (b, pw) in m.factors() {
            match b {
                Base::Sum(inner) => {
                    let f = to_fraction(inner, hyps)?;
                    if f.num.is_zero() {
                        num = Poly::zero();
                        break;
                    }
                    for k in nonzero_factors(&f.num) {
                        if !hyps.contains(&k) {
                            return Err(k);
                        }
                    }
                    num = num.mul(&product(&f.den).pow(pw.neg));
                    *den.entry(f.num).or_insert(0) += pw.neg;
                }
                _ => {
                    let base = Poly::from_base(b.clone());
                    if pw.neg == 0 {
                        num = num.mul(&base.pow(pw.pos));
                        continue;
                    }
                    if !hyps.contains(&base) {
                        return Err(base);
                    }
                    if pw.pos > pw.neg {
                        num = num.mul(&base.pow(pw.pos - pw.neg));
                    } else if pw.neg > pw.pos {
                        *den.entry(base).or_insert(0) += pw.neg - pw.pos;
                    }
                }
            }
        }
        acc = acc.add(Fraction { num, den });
    }
    Ok(acc)
}

#[derive(Debug, Clone)]
struct Branch {
    term: Poly,
    hyps: BTreeSet<Poly>,
    /// Pending constraints `z = 0`, processed last first.
    zeros: Vec<Poly>,
    /// Hypotheses `h != 0` that still need case splits before they can
    /// join `hyps`; taken up once `zeros` is empty.
    pending: Vec<Poly>,
}

enum Substituted {
    Feasible(Branch),
    Empty,
}

impl Branch {
    /// Applies `target := e` everywhere. `extra` are nonzero factors that
    /// justify the inverses introduced by `e`.
    fn substitute(&self, target: &Base, e: &Poly, extra: &[Poly]) -> Substituted {
        let mut hyps: BTreeSet<Poly> = extra.iter().cloned().collect();
        let known = hyps.clone();
        let mut pending: Vec<Poly> = self
            .pending
            .iter()
            .map(|h| h.substitute_base(target, e))
            .collect();
        for h in &self.hyps {
            let h2 = h.substitute_base(target, e);
            match to_fraction(&h2, &known) {
                Ok(f) if f.num.is_zero() => return Substituted::Empty,
                Ok(f) => hyps.extend(nonzero_factors(&f.num)),
                Err(_) => pending.push(h2),
            }
        }
        Substituted::Feasible(Branch {
            pending,
            term: self.term.substitute_base(target, e),
            hyps,
            zeros: self
                .zeros
                .iter()
                .map(|z| z.substitute_base(target, e))
                .collect(),
        })
    }
}

struct Explorer<'a> {
    cfg: &'a DecisionConfig,
    visited: u64,
    summary: Summary,
}

fn explore(p: &Poly, cfg: &DecisionConfig) -> Result<Summary, MeadowError> {
    let mut summary = Summary::default();
    if !p.has_inverse() {
        // plain polynomial: no splitting needed
        match p.as_constant() {
            Some(c) if c.is_zero() => summary.zero = true,
            Some(_) => summary.nowhere_zero = true,
            None => summary.mixed = true,
        }
        return Ok(summary);
    }
    let mut ex = Explorer {
        cfg,
        visited: 0,
        summary,
    };
    ex.run(Branch {
        term: p.clone(),
        hyps: BTreeSet::new(),
        zeros: Vec::new(),
        pending: Vec::new(),
    })?;
    Ok(ex.summary)
}

impl Explorer<'_> {
    fn run(&mut self, mut br: Branch) -> Result<(), MeadowError> {
        self.visited += 1;
        if self.visited > self.cfg.branch_budget {
            return Err(MeadowError::ResourceLimit {
                budget: self.cfg.branch_budget,
            });
        }
        if let Some(z) = br.zeros.pop() {
            return self.constrain(br, z);
        }
        if let Some(h) = br.pending.pop() {
            return match to_fraction(&h, &br.hyps) {
                Err(k) => {
                    br.pending.push(h);
                    self.split(br, k)
                }
                // the hypothesis fails everywhere here: no such points
                Ok(f) if f.num.is_zero() => Ok(()),
                Ok(f) => {
                    br.hyps.extend(nonzero_factors(&f.num));
                    self.run(br)
                }
            };
        }
        match to_fraction(&br.term, &br.hyps) {
            Err(k) => self.split(br, k),
            Ok(f) => {
                if f.num.is_zero() {
                    self.summary.zero = true;
                } else if nonzero_factors(&f.num).iter().all(|k| br.hyps.contains(k)) {
                    self.summary.nowhere_zero = true;
                } else {
                    self.summary.mixed = true;
                }
                Ok(())
            }
        }
    }

    fn split(&mut self, br: Branch, k: Poly) -> Result<(), MeadowError> {
        let mut nonzero = br.clone();
        nonzero.hyps.insert(k.clone());
        self.run(nonzero)?;
        let mut zero = br;
        zero.zeros.push(k);
        self.run(zero)
    }

    /// Explores the part of `br` where `z = 0`.
    fn constrain(&mut self, br: Branch, z: Poly) -> Result<(), MeadowError> {
        let f = match to_fraction(&z, &br.hyps) {
            Err(k) => {
                let mut br = br;
                br.zeros.push(z);
                return self.split(br, k);
            }
            Ok(f) => f,
        };
        let a = f.num;
        if a.is_zero() {
            return self.run(br);
        }
        if a.as_constant().is_some() {
            return Ok(());
        }
        for factor in nonzero_factors(&a) {
            if br.hyps.contains(&factor) {
                continue;
            }
            if let Some((_, c)) = factor.single_term() {
                // a single variable or application, normalized to coefficient one
                debug_assert!(c == &Rational::from_integer(1.into()));
                let base = factor.indeterminates().into_iter().next().expect("nonconstant");
                self.follow(br.substitute(&base, &Poly::zero(), &[]))?;
                continue;
            }
            self.solve_factor(&br, &factor)?;
        }
        Ok(())
    }

    fn solve_factor(&mut self, br: &Branch, m: &Poly) -> Result<(), MeadowError> {
        if let Some((b, roots)) = rational_roots(m) {
            for r in roots {
                self.follow(br.substitute(&b, &Poly::constant(r), &[]))?;
            }
            return Ok(());
        }
        let mut nonconstant = None;
        for b in m.indeterminates().into_iter().rev() {
            if let Some((c, r)) = m.linear_in(&b) {
                if let Some(c0) = c.as_constant() {
                    let sol = r.neg().scale(&c0.recip());
                    return self.follow(br.substitute(&b, &sol, &[]));
                }
                if nonconstant.is_none() && !c.has_inverse() && !r.has_inverse() {
                    nonconstant = Some((b, c, r));
                }
            }
        }
        match nonconstant {
            Some((b, c, r)) => {
                // c != 0: b = -r / c
                let extra = nonzero_factors(&c);
                let sol = r.neg().mul(&c.inverse());
                let mut with_c = br.clone();
                with_c.hyps.extend(extra.iter().cloned());
                self.follow(with_c.substitute(&b, &sol, &extra))?;
                // c = 0 and then r = 0
                let mut without = br.clone();
                without.zeros.push(r);
                without.zeros.push(c);
                self.run(without)
            }
            None => {
                self.summary.undecided = true;
                Ok(())
            }
        }
    }

    fn follow(&mut self, s: Substituted) -> Result<(), MeadowError> {
        match s {
            Substituted::Feasible(b) => self.run(b),
            Substituted::Empty => Ok(()),
        }
    }
}

/// The indeterminate of a univariate polynomial of degree at least two and
/// its distinct roots, provided it splits into rational linear factors.
/// Anything else may have irrational roots, so nothing is claimed.
fn rational_roots(m: &Poly) -> Option<(Base, Vec<Rational>)> {
    let mut bases = m.indeterminates().into_iter();
    let b = bases.next()?;
    if bases.next().is_some() || m.has_inverse() {
        return None;
    }
    let mut coeffs: Vec<Rational> = Vec::new();
    for (mono, c) in m.terms() {
        let k = match mono.get(&b) {
            None => 0,
            Some(p) if p.neg == 0 && mono.factors().count() == 1 => p.pos as usize,
            Some(_) => return None,
        };
        if coeffs.len() <= k {
            coeffs.resize(k + 1, Rational::zero());
        }
        coeffs[k] = c.clone();
    }
    if coeffs.len() < 3 {
        return None;
    }
    let mut roots: Vec<Rational> = Vec::new();
    while coeffs.len() > 1 {
        let root = if coeffs[0].is_zero() {
            Rational::zero()
        } else {
            rational_root(&coeffs)?
        };
        // synthetic division by (b - root), highest degree first
        let mut carry = Rational::zero();
        let mut quotient = vec![Rational::zero(); coeffs.len() - 1];
        for k in (1..coeffs.len()).rev() {
            carry = &coeffs[k] + &carry * &root;
            quotient[k - 1] = carry.clone();
        }
        coeffs = quotient;
        if !roots.contains(&root) {
            roots.push(root);
        }
    }
    Some((b, roots))
}

/// Some rational root by the rational root theorem, for modest
/// coefficients only.
fn rational_root(coeffs: &[Rational]) -> Option<Rational> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Signed, ToPrimitive};
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let divisors = |n: &BigInt| -> Option<Vec<u64>> {
        let n = n.abs().to_u64().filter(|&n| n <= 10_000)?;
        Some((1..=n).filter(|d| n % d == 0).collect())
    };
    let ps = divisors(&ints[0])?;
    let qs = divisors(ints.last()?)?;
    let value = |r: &Rational| {
        coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * r + c)
    };
    for p in &ps {
        for q in &qs {
            for sign in [1i64, -1] {
                let r = Rational::new(BigInt::from(*p) * sign, BigInt::from(*q));
                if value(&r).is_zero() {
                    return Some(r);
                }
            }
        }
    }
    None
}

/// Normal form of `t` on the branch where every term in `nonzero` is
/// nonzero: inverses of those terms cancel against matching factors
/// (`x * x^-1 = 1` for `x != 0`).
pub fn normalize_data_assuming(t: &DataTerm, nonzero: &[DataTerm]) -> DataTerm {
    let mut hyps = BTreeSet::new();
    for h in nonzero {
        hyps.extend(nonzero_factors(&Poly::from_term(h)));
    }
    cancel_assuming(&Poly::from_term(t), &hyps).to_term()
}

pub(crate) fn cancel_assuming(p: &Poly, hyps: &BTreeSet<Poly>) -> Poly {
    let mut cur = p.clone();
    for h in hyps {
        cur = cancel_one(&cur, h);
    }
    cur
}

fn cancel_one(p: &Poly, h: &Poly) -> Poly {
    if let Some((_, _)) = h.single_term() {
        // a variable or application: reduce b^p * b^-q by plain exponent rules
        let base = h.indeterminates().into_iter().next().expect("nonconstant");
        let mut out = Poly::zero();
        for (m, c) in p.terms() {
            let mut term = Poly::monomial(c.clone(), m.without(&base));
            if let Some(pw) = m.get(&base) {
                let b = Poly::from_base(base.clone());
                if pw.pos > pw.neg {
                    term = term.mul(&b.pow(pw.pos - pw.neg));
                } else if pw.neg > pw.pos {
                    term = term.mul(&b.inverse().pow(pw.neg - pw.pos));
                }
            }
            out = out.add(&term);
        }
        return out;
    }
    // an inverted sum: divide each group sharing the same power of it
    let sum = Base::Sum(h.clone());
    let mut groups: std::collections::BTreeMap<u32, Poly> = Default::default();
    for (m, c) in p.terms() {
        let q = m.get(&sum).map_or(0, |pw| pw.neg);
        let g = groups.entry(q).or_insert_with(Poly::zero);
        *g = g.add(&Poly::monomial(c.clone(), m.without(&sum)));
    }
    let mut out = Poly::zero();
    for (q, mut g) in groups {
        let mut left = q;
        while left > 0 {
            match g.exact_div(h).or_else(|| constant_multiple(&g, h)) {
                Some(d) => {
                    g = d;
                    left -= 1;
                }
                None => break,
            }
        }
        out = out.add(&g.mul(&h.inverse().pow(left)));
    }
    out
}

/// `g / h` when it is a constant; covers divisors that carry inverses,
/// which polynomial division does not handle.
fn constant_multiple(g: &Poly, h: &Poly) -> Option<Poly> {
    let (m, c) = h.terms().next()?;
    let k = g.terms().find(|(n, _)| *n == m).map(|(_, d)| d / c)?;
    (g.sub(&h.scale(&k)).is_zero()).then(|| Poly::constant(k))
}
