//! Tuplix terms and their normalization to basic form.

mod basic;
mod equiv;
pub mod logic;
mod normalize;
mod term;

pub use basic::{Alternative, BasicForm, Test};
pub use equiv::{compare, Verdict};
pub use logic::{tand, timp, tnot, tor};
pub use normalize::{normalize, normalize_with, NormalizeOptions, Outcome};
pub use term::{
    alt, conj, entry, free_vars, subst_tuplix, sum, test, AttrSet, Attribute, Sign, Tuplix, UnitRef,
};

use crate::meadow::DataTerm;
use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TuplixError {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("encapsulation over the signed attribute `{0}` is not defined")]
    SignedEncapsulation(Attribute),
    #[error("attribute `{attr}` is neither in-going nor outgoing for unit `{unit}`")]
    Unclassified { unit: Symbol, attr: Attribute },
    #[error("definition of `{0}` could not be eliminated")]
    ResidualDefinition(String),
}

fn basic_only(p: &Tuplix) -> Tuplix {
    assert!(
        p.is_basic_syntax(),
        "expected a term built from eps, null, tests, entries, &, + and sum"
    );
    p.clone()
}

/// Basic form of a term without operators, summations kept.
pub fn simplify(p: &Tuplix) -> Tuplix {
    let opts = NormalizeOptions {
        sum_elim: false,
        ..Default::default()
    };
    normalize_with(&basic_only(p), &opts)
        .expect("operator-free terms always normalize")
        .form
        .to_tuplix()
}

/// Basic form with every summation that a test solves eliminated.
pub fn sum_elim(p: &Tuplix) -> Tuplix {
    normalize(&basic_only(p))
        .expect("operator-free terms always normalize")
        .to_tuplix()
}

pub fn scalar_mul(t: &DataTerm, p: &Tuplix) -> Result<Tuplix, TuplixError> {
    normalize(&Tuplix::Scalar(t.clone(), Box::new(p.clone()))).map(|b| b.to_tuplix())
}

pub fn clear(set: &AttrSet, p: &Tuplix) -> Result<Tuplix, TuplixError> {
    normalize(&Tuplix::Clear(set.clone(), Box::new(p.clone()))).map(|b| b.to_tuplix())
}

/// Keeps only the entries with an attribute in `set`.
pub fn select(set: &AttrSet, p: &Tuplix) -> Result<Tuplix, TuplixError> {
    normalize(&Tuplix::Select(set.clone(), Box::new(p.clone()))).map(|b| b.to_tuplix())
}

pub fn encapsulate(set: &AttrSet, p: &Tuplix) -> Result<Tuplix, TuplixError> {
    normalize(&Tuplix::Encap(set.clone(), Box::new(p.clone()))).map(|b| b.to_tuplix())
}
