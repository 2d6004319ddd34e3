use std::collections::BTreeMap;
use std::fmt;

use super::term::{Attribute, Tuplix};
use crate::meadow::{normalize_data, DataTerm};
use crate::symbol::Symbol;

/// The single merged zero test of an alternative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Test {
    /// `[t]`
    Zero(DataTerm),
    /// `[v == t]`, i.e. `[v - t]` with `v` solved for.
    Solved(Symbol, DataTerm),
}

impl Test {
    /// The term whose vanishing the test asserts.
    pub fn value(&self) -> DataTerm {
        match self {
            Test::Zero(t) => t.clone(),
            Test::Solved(v, t) => normalize_data(&(DataTerm::Var(v.clone()) - t.clone())),
        }
    }
}

impl fmt::Display for Test {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Test::Zero(t) => write!(f, "[{t}]"),
            Test::Solved(v, t) if t.is_const_zero() => write!(f, "[{v}]"),
            Test::Solved(v, t) => write!(f, "[{v} == {t}]"),
        }
    }
}

/// `sum binders . test & entries`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Alternative {
    pub binders: Vec<Symbol>,
    pub test: Option<Test>,
    pub entries: BTreeMap<Attribute, DataTerm>,
}

impl Alternative {
    pub fn to_tuplix(&self) -> Tuplix {
        let mut parts = Vec::new();
        if let Some(t) = &self.test {
            parts.push(Tuplix::Test(match t {
                Test::Zero(t) => t.clone(),
                Test::Solved(v, t) if t.is_const_zero() => DataTerm::Var(v.clone()),
                Test::Solved(v, t) => DataTerm::Var(v.clone()) - t.clone(),
            }));
        }
        for (a, t) in &self.entries {
            parts.push(Tuplix::Entry(a.clone(), t.clone()));
        }
        let mut body = Tuplix::conj_all(parts);
        for x in self.binders.iter().rev() {
            body = Tuplix::Sum(x.clone(), Box::new(body));
        }
        body
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.binders.is_empty() {
            write!(f, "sum ")?;
            for (i, x) in self.binders.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, " . ")?;
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            if first {
                first = false;
                Ok(())
            } else {
                write!(f, " & ")
            }
        };
        if let Some(t) = &self.test {
            sep(f)?;
            write!(f, "{t}")?;
        }
        for (a, t) in &self.entries {
            sep(f)?;
            write!(f, "{a}({t})")?;
        }
        if first {
            write!(f, "eps")?;
        }
        Ok(())
    }
}

/// Output of the normalizer: `null`, or a sum of alternatives sorted by
/// their printed form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BasicForm {
    alternatives: Vec<Alternative>,
}

impl BasicForm {
    pub fn delta() -> BasicForm {
        BasicForm::default()
    }

    pub fn eps() -> BasicForm {
        BasicForm {
            alternatives: vec![Alternative::default()],
        }
    }

    pub(crate) fn from_sorted(alternatives: Vec<Alternative>) -> BasicForm {
        BasicForm { alternatives }
    }

    pub fn is_delta(&self) -> bool {
        self.alternatives.is_empty()
    }

    pub fn alternatives(&self) -> &[Alternative] {
        &self.alternatives
    }

    pub fn to_tuplix(&self) -> Tuplix {
        Tuplix::alt_all(self.alternatives.iter().map(Alternative::to_tuplix))
    }
}

impl fmt::Display for BasicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alternatives.is_empty() {
            return write!(f, "null");
        }
        let many = self.alternatives.len() > 1;
        for (i, a) in self.alternatives.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if many && !a.binders.is_empty() {
                write!(f, "({a})")?;
            } else {
                write!(f, "{a}")?;
            }
        }
        Ok(())
    }
}
