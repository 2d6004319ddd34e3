//! Data terms over cancellation meadows: normalization, substitution,
//! exact evaluation and the zero/equality decision procedure.

mod decide;
mod eval;
mod poly;
mod solve;
pub mod term;

pub use decide::{
    eq_data, eq_data_with, find_witness, is_zero, is_zero_with, normalize_data_assuming,
    DecisionConfig, Tri, DEFAULT_BRANCH_BUDGET, DEFAULT_SEED,
};
pub use eval::{eval_data, inv, Assignment};
pub use poly::Poly;
pub use solve::solve_linear;
pub use term::{rational, Application, ArityMismatch, Callee, DataTerm, Rational};

pub(crate) use decide::poly_is_zero;
pub(crate) use poly::Base;
pub(crate) use solve::solve_poly;

use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeadowError {
    #[error("variable `{0}` has no value")]
    UnboundVariable(Symbol),
    #[error("function variable `{0}` has no interpretation")]
    UninterpretedFunction(Symbol),
    #[error("case-split budget of {budget} branches exceeded")]
    ResourceLimit { budget: u64 },
}

/// Canonical representative of `t`: an ordered sparse polynomial whose
/// atoms are variables, function applications and inverses of non-constant
/// sums. Idempotent.
pub fn normalize_data(t: &DataTerm) -> DataTerm {
    Poly::from_term(t).to_term()
}

/// `t[s/x]`.
pub fn substitute_data(t: &DataTerm, x: &Symbol, s: &DataTerm) -> DataTerm {
    t.substitute(x, s)
}
