use std::collections::BTreeMap;

use num_traits::Zero;

use super::term::{Callee, DataTerm, Rational};
use super::MeadowError;
use crate::funcdef;
use crate::symbol::Symbol;

/// Values for the free variables of a term.
pub type Assignment = BTreeMap<Symbol, Rational>;

/// Exact evaluation in the rationals with `0^-1 = 0`. Explicit lambda
/// applications are β-reduced first; applications of function variables
/// have no value.
pub fn eval_data(t: &DataTerm, env: &Assignment) -> Result<Rational, MeadowError> {
    match t {
        DataTerm::Const(c) => Ok(c.clone()),
        DataTerm::Var(v) => env
            .get(v)
            .cloned()
            .ok_or_else(|| MeadowError::UnboundVariable(v.clone())),
        DataTerm::Neg(a) => Ok(-eval_data(a, env)?),
        DataTerm::Add(a, b) => Ok(eval_data(a, env)? + eval_data(b, env)?),
        DataTerm::Mul(a, b) => Ok(eval_data(a, env)? * eval_data(b, env)?),
        DataTerm::Inv(a) => Ok(inv(&eval_data(a, env)?)),
        DataTerm::App(app) => match app.head() {
            Callee::Lambda(_) => eval_data(&funcdef::beta_reduce(t), env),
            Callee::Fn(f) => Err(MeadowError::UninterpretedFunction(f.name().clone())),
        },
    }
}

/// Totalized inverse on the rationals.
pub fn inv(c: &Rational) -> Rational {
    if c.is_zero() {
        Rational::zero()
    } else {
        c.recip()
    }
}
