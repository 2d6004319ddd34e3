//! Shared by the integration tests of this crate and the acceptance run of
//! the command-line crate.
#![allow(dead_code)]

pub mod axioms;
pub mod gen;
pub mod meadow_suite;
pub mod oracle;

use tuplix::calculus::{compare, normalize, BasicForm, Tuplix, Verdict};
use tuplix::meadow::DecisionConfig;
use tuplix::syntax::parse_tuplix;

pub fn t(src: &str) -> Tuplix {
    parse_tuplix(src).unwrap_or_else(|e| panic!("`{src}` does not parse: {e:?}"))
}

pub fn nf(src: &str) -> BasicForm {
    normalize(&t(src)).unwrap_or_else(|e| panic!("`{src}`: {e}"))
}

/// The printed basic form of `src`.
pub fn show(src: &str) -> String {
    nf(src).to_string()
}

pub fn verdict(a: &BasicForm, b: &BasicForm) -> Verdict {
    compare(a, b, &DecisionConfig::default())
}

pub fn same(a: &str, b: &str) -> bool {
    verdict(&nf(a), &nf(b)) == Verdict::Equal
}

/// The closed form of the reserve chain after `n + 1` periods, as printed
/// by hand: the outer transfers `a_0`, `b_0`, `c_{n+1}`, `a_{n+2}` under the
/// flux constraint, and per period the income and the expenditure.
pub fn reserve_general(n: u64) -> String {
    let mut s = format!(
        "K(sum u, v, w, x . a_0(-u) & b_0(-v) & c_{}(w) & a_{}(x)",
        n + 1,
        n + 2
    );
    for i in 0..=n {
        s.push_str(&format!(" & d_{i}(-inc_{i}) & e_{i}(pw + (1-k)*inc_{i})"));
    }
    s.push(')');
    s
}
