//! Names for data variables, attributes, units and function variables.
//!
//! A name is a family identifier with an optional integer index and an
//! optional run of primes: `x`, `inc_0`, `a_12`, `u'`, `c_1''`. Indexed
//! families order numerically by index, so `a_2 < a_10`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    family: String,
    index: Option<u64>,
    primes: u32,
}

impl Symbol {
    /// Builds a symbol from its parts. The family must be a plain identifier
    /// (letters and digits, starting with a letter); internal callers may
    /// also use an empty family for placeholder names that can never be
    /// written in source text.
    pub fn from_parts(family: impl Into<String>, index: Option<u64>, primes: u32) -> Self {
        Symbol {
            family: family.into(),
            index,
            primes,
        }
    }

    pub fn new(family: impl Into<String>) -> Self {
        Symbol::from_parts(family, None, 0)
    }

    pub fn indexed(family: impl Into<String>, index: u64) -> Self {
        Symbol::from_parts(family, Some(index), 0)
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn index(&self) -> Option<u64> {
        self.index
    }

    pub fn primes(&self) -> u32 {
        self.primes
    }

    /// The same name with one more prime: `u` → `u'`.
    pub fn primed(&self) -> Symbol {
        Symbol {
            primes: self.primes + 1,
            ..self.clone()
        }
    }

    /// First primed variant of `self` that is not in `avoid`; `self` itself
    /// when it is already free.
    pub fn fresh_against(&self, avoid: &BTreeSet<Symbol>) -> Symbol {
        let mut candidate = self.clone();
        while avoid.contains(&candidate) {
            candidate = candidate.primed();
        }
        candidate
    }

    /// Placeholder used for canonical (de Bruijn style) renaming. Never
    /// produced by the parser.
    pub(crate) fn placeholder(slot: usize) -> Symbol {
        Symbol::from_parts("", Some(slot as u64), 0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family.is_empty() {
            write!(f, "#")?;
        } else {
            write!(f, "{}", self.family)?;
        }
        if let Some(i) = self.index {
            if self.family.is_empty() {
                write!(f, "{i}")?;
            } else {
                write!(f, "_{i}")?;
            }
        }
        for _ in 0..self.primes {
            write!(f, "'")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid name `{0}`")]
pub struct InvalidSymbol(pub String);

impl FromStr for Symbol {
    type Err = InvalidSymbol;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || InvalidSymbol(s.to_string());
        let trimmed = s.trim_end_matches('\'');
        let primes = (s.len() - trimmed.len()) as u32;
        let (family, index) = match trimmed.rsplit_once('_') {
            Some((fam, idx)) if !idx.is_empty() && idx.bytes().all(|b| b.is_ascii_digit()) => {
                (fam, Some(idx.parse::<u64>().map_err(|_| bad())?))
            }
            _ => (trimmed, None),
        };
        let mut chars = family.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return Err(bad()),
        }
        if !chars.all(|c| c.is_ascii_alphanumeric()) {
            return Err(bad());
        }
        Ok(Symbol::from_parts(family, index, primes))
    }
}

impl From<&str> for Symbol {
    /// Panics on malformed input; intended for literals in code and tests.
    fn from(s: &str) -> Self {
        s.parse().unwrap_or_else(|e| panic!("{e}"))
    }
}
