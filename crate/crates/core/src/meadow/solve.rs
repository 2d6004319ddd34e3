use super::decide::{poly_is_zero, DecisionConfig, Tri};
use super::poly::{Base, Poly};
use super::term::DataTerm;
use crate::symbol::Symbol;

/// Solves `t = 0` for `x` when `t` normalizes to `c * x + r` with `x`
/// absent from `c` and `r` and `c` provably nonzero.
pub fn solve_linear(t: &DataTerm, x: &Symbol) -> Option<DataTerm> {
    solve_poly(&Poly::from_term(t), x, &DecisionConfig::default()).map(|p| p.to_term())
}

pub(crate) fn solve_poly(p: &Poly, x: &Symbol, cfg: &DecisionConfig) -> Option<Poly> {
    let (c, r) = p.linear_in(&Base::Var(x.clone()))?;
    let nonzero = match c.as_constant() {
        Some(k) => !num_traits::Zero::is_zero(&k),
        None => poly_is_zero(&c, cfg).ok() == Some(Tri::ProvablyFalse),
    };
    nonzero.then(|| r.neg().mul(&c.inverse()))
}
