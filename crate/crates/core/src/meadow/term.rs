use std::collections::BTreeSet;
use std::fmt;
use std::ops;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::funcdef::{FnVar, Lambda};
use crate::symbol::Symbol;

pub type Rational = num_rational::BigRational;

/// Expression over a cancellation meadow: rational constants, variables,
/// the ring operations, the totalized inverse, and applications of
/// function variables or explicit lambdas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataTerm {
    Const(Rational),
    Var(Symbol),
    Neg(Box<DataTerm>),
    Add(Box<DataTerm>, Box<DataTerm>),
    Mul(Box<DataTerm>, Box<DataTerm>),
    Inv(Box<DataTerm>),
    App(Application),
}

/// Head of an application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Callee {
    Fn(FnVar),
    Lambda(Box<Lambda>),
}

impl Callee {
    pub fn arity(&self) -> usize {
        match self {
            Callee::Fn(f) => f.arity(),
            Callee::Lambda(l) => l.arity(),
        }
    }
}

/// An application whose argument count always equals the arity of its
/// head; the only way to build one is [`Application::new`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Application {
    head: Callee,
    args: Vec<DataTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{head}` expects {expected} argument(s), got {found}")]
pub struct ArityMismatch {
    pub head: String,
    pub expected: usize,
    pub found: usize,
}

impl Application {
    pub fn new(head: Callee, args: Vec<DataTerm>) -> Result<Self, ArityMismatch> {
        if head.arity() != args.len() {
            let name = match &head {
                Callee::Fn(f) => f.name().to_string(),
                Callee::Lambda(l) => l.to_string(),
            };
            return Err(ArityMismatch {
                head: name,
                expected: head.arity(),
                found: args.len(),
            });
        }
        Ok(Application { head, args })
    }

    pub fn head(&self) -> &Callee {
        &self.head
    }

    pub fn args(&self) -> &[DataTerm] {
        &self.args
    }

    /// Rebuilds the application with each argument mapped; arity is kept.
    pub fn map_args(&self, mut f: impl FnMut(&DataTerm) -> DataTerm) -> Application {
        Application {
            head: self.head.clone(),
            args: self.args.iter().map(&mut f).collect(),
        }
    }

    pub(crate) fn with_head(&self, head: Callee) -> Application {
        debug_assert_eq!(head.arity(), self.args.len());
        Application {
            head,
            args: self.args.clone(),
        }
    }
}

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl DataTerm {
    pub fn int(n: i64) -> DataTerm {
        DataTerm::Const(rational(n))
    }

    pub fn zero() -> DataTerm {
        DataTerm::int(0)
    }

    pub fn one() -> DataTerm {
        DataTerm::int(1)
    }

    pub fn ratio(num: i64, den: i64) -> DataTerm {
        DataTerm::Const(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn var(name: impl Into<Symbol>) -> DataTerm {
        DataTerm::Var(name.into())
    }

    pub fn inv(self) -> DataTerm {
        DataTerm::Inv(Box::new(self))
    }

    pub fn app(head: Callee, args: Vec<DataTerm>) -> Result<DataTerm, ArityMismatch> {
        Ok(DataTerm::App(Application::new(head, args)?))
    }

    pub fn is_const_zero(&self) -> bool {
        matches!(self, DataTerm::Const(c) if c.is_zero())
    }

    /// All data variables occurring in the term (`Var(t)`); lambda
    /// parameters are bound and excluded.
    pub fn vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            DataTerm::Const(_) => {}
            DataTerm::Var(v) => {
                out.insert(v.clone());
            }
            DataTerm::Neg(a) | DataTerm::Inv(a) => a.collect_vars(out),
            DataTerm::Add(a, b) | DataTerm::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            DataTerm::App(app) => {
                if let Callee::Lambda(l) = app.head() {
                    out.extend(l.free_vars());
                }
                for arg in app.args() {
                    arg.collect_vars(out);
                }
            }
        }
    }

    /// Function variables applied anywhere in the term.
    pub fn fn_vars(&self) -> BTreeSet<FnVar> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let DataTerm::App(app) = t {
                match app.head() {
                    Callee::Fn(f) => {
                        out.insert(f.clone());
                    }
                    Callee::Lambda(l) => out.extend(l.body().fn_vars()),
                }
            }
        });
        out
    }

    pub fn contains_app(&self) -> bool {
        let mut found = false;
        self.visit(&mut |t| found |= matches!(t, DataTerm::App(_)));
        found
    }

    /// Pre-order traversal (does not enter lambda bodies).
    pub fn visit(&self, f: &mut impl FnMut(&DataTerm)) {
        f(self);
        match self {
            DataTerm::Const(_) | DataTerm::Var(_) => {}
            DataTerm::Neg(a) | DataTerm::Inv(a) => a.visit(f),
            DataTerm::Add(a, b) | DataTerm::Mul(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            DataTerm::App(app) => app.args().iter().for_each(|a| a.visit(f)),
        }
    }

    /// Replaces every occurrence of `x` by `s`. Data terms bind nothing
    /// except lambda parameters, which are renamed when they would capture
    /// a variable of `s`.
    pub fn substitute(&self, x: &Symbol, s: &DataTerm) -> DataTerm {
        match self {
            DataTerm::Const(_) => self.clone(),
            DataTerm::Var(v) if v == x => s.clone(),
            DataTerm::Var(_) => self.clone(),
            DataTerm::Neg(a) => DataTerm::Neg(Box::new(a.substitute(x, s))),
            DataTerm::Inv(a) => DataTerm::Inv(Box::new(a.substitute(x, s))),
            DataTerm::Add(a, b) => {
                DataTerm::Add(Box::new(a.substitute(x, s)), Box::new(b.substitute(x, s)))
            }
            DataTerm::Mul(a, b) => {
                DataTerm::Mul(Box::new(a.substitute(x, s)), Box::new(b.substitute(x, s)))
            }
            DataTerm::App(app) => {
                let head = match app.head() {
                    Callee::Lambda(l) => Callee::Lambda(Box::new(l.substitute(x, s))),
                    h => h.clone(),
                };
                DataTerm::App(app.with_head(head).map_args(|a| a.substitute(x, s)))
            }
        }
    }

    /// Canonical prefix serialization, e.g. `(add x (mul 2 (inv y)))`.
    pub fn to_prefix(&self) -> String {
        match self {
            DataTerm::Const(c) => c.to_string(),
            DataTerm::Var(v) => v.to_string(),
            DataTerm::Neg(a) => format!("(neg {})", a.to_prefix()),
            DataTerm::Inv(a) => format!("(inv {})", a.to_prefix()),
            DataTerm::Add(a, b) => format!("(add {} {})", a.to_prefix(), b.to_prefix()),
            DataTerm::Mul(a, b) => format!("(mul {} {})", a.to_prefix(), b.to_prefix()),
            DataTerm::App(app) => {
                let head = match app.head() {
                    Callee::Fn(f) => f.name().to_string(),
                    Callee::Lambda(l) => {
                        let params: Vec<String> = l.params().iter().map(|p| p.to_string()).collect();
                        format!("(lam ({}) {})", params.join(" "), l.body().to_prefix())
                    }
                };
                let mut s = format!("(app {head}");
                for a in app.args() {
                    s.push(' ');
                    s.push_str(&a.to_prefix());
                }
                s.push(')');
                s
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            DataTerm::Add(..) => 1,
            DataTerm::Mul(..) => 2,
            DataTerm::Neg(_) => 3,
            DataTerm::Const(c) if c.is_negative() || !c.is_integer() => 2,
            DataTerm::Inv(_) => 4,
            _ => 5,
        }
    }

    /// True for terms that print without any operator at top level.
    pub(crate) fn is_atomic(&self) -> bool {
        self.precedence() >= 4
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, t: &DataTerm, min: u8) -> fmt::Result {
    if t.precedence() < min {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

impl fmt::Display for DataTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataTerm::Const(c) => {
                if c.is_integer() {
                    write!(f, "{}", c.numer())
                } else {
                    write!(f, "{}/{}", c.numer(), c.denom())
                }
            }
            DataTerm::Var(v) => write!(f, "{v}"),
            DataTerm::Add(a, b) => {
                write_operand(f, a, 1)?;
                match b.as_ref() {
                    DataTerm::Neg(inner) => {
                        write!(f, " - ")?;
                        write_operand(f, inner, 2)
                    }
                    _ => {
                        write!(f, " + ")?;
                        write_operand(f, b, 2)
                    }
                }
            }
            DataTerm::Mul(a, b) => {
                write_operand(f, a, 2)?;
                match b.as_ref() {
                    DataTerm::Inv(inner) => {
                        write!(f, " / ")?;
                        write_operand(f, inner, 4)
                    }
                    _ => {
                        write!(f, " * ")?;
                        write_operand(f, b, 3)
                    }
                }
            }
            DataTerm::Neg(a) => {
                write!(f, "-")?;
                // `-2` reads back as a literal
                let min = if matches!(a.as_ref(), DataTerm::Const(_)) { 6 } else { 4 };
                write_operand(f, a, min)
            }
            DataTerm::Inv(a) => {
                write_operand(f, a, 5)?;
                write!(f, "^-1")
            }
            DataTerm::App(app) => {
                match app.head() {
                    Callee::Fn(fv) => write!(f, "{}", fv.name())?,
                    Callee::Lambda(l) => write!(f, "({l})")?,
                }
                write!(f, "(")?;
                for (i, a) in app.args().iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl From<i64> for DataTerm {
    fn from(n: i64) -> Self {
        DataTerm::int(n)
    }
}

impl From<Rational> for DataTerm {
    fn from(c: Rational) -> Self {
        DataTerm::Const(c)
    }
}

impl ops::Add for DataTerm {
    type Output = DataTerm;
    fn add(self, rhs: DataTerm) -> DataTerm {
        DataTerm::Add(Box::new(self), Box::new(rhs))
    }
}

impl ops::Sub for DataTerm {
    type Output = DataTerm;
    fn sub(self, rhs: DataTerm) -> DataTerm {
        DataTerm::Add(Box::new(self), Box::new(DataTerm::Neg(Box::new(rhs))))
    }
}

impl ops::Mul for DataTerm {
    type Output = DataTerm;
    fn mul(self, rhs: DataTerm) -> DataTerm {
        DataTerm::Mul(Box::new(self), Box::new(rhs))
    }
}

impl ops::Div for DataTerm {
    type Output = DataTerm;
    fn div(self, rhs: DataTerm) -> DataTerm {
        DataTerm::Mul(Box::new(self), Box::new(DataTerm::Inv(Box::new(rhs))))
    }
}

impl ops::Neg for DataTerm {
    type Output = DataTerm;
    fn neg(self) -> DataTerm {
        DataTerm::Neg(Box::new(self))
    }
}
