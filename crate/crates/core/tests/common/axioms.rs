//! Equational axioms of the calculus as text templates.
//!
//! Placeholders: `{X}`, `{Y}`, `{Z}` closed terms; `{x}`, `{y}` data terms;
//! `{Pv}`, `{Qv}` terms in which `v` may occur free; `{Pw}` is `{Pv}` with
//! `v` renamed to `w`.

use rand::Rng;
use tuplix::calculus::{compare, normalize, Tuplix};
use tuplix::meadow::DecisionConfig;
use tuplix::syntax::parse_tuplix;
use tuplix::{DataTerm, Symbol};

use super::gen::{random_closed, random_constant, random_open_in};
use super::oracle::{denote, denote_form};

pub struct Axiom {
    pub name: &'static str,
    pub lhs: &'static str,
    pub rhs: &'static str,
}

const fn ax(name: &'static str, lhs: &'static str, rhs: &'static str) -> Axiom {
    Axiom { name, lhs, rhs }
}

pub const AXIOMS: &[Axiom] = &[
    ax("T1", "{X} & {Y}", "{Y} & {X}"),
    ax("T2", "({X} & {Y}) & {Z}", "{X} & ({Y} & {Z})"),
    ax("T3", "{X} & eps", "{X}"),
    ax("T4", "{X} & null", "null"),
    ax("T5", "a({x}) & a({y})", "a({x} + {y})"),
    ax("T6", "[{x}]", "[{x} / {x}]"),
    ax("T7", "[0]", "eps"),
    ax("T8", "[1]", "null"),
    ax("T9", "[{x}] & [{y}]", "[{x} / {x} + {y} / {y}]"),
    ax("T10", "[{x} - {y}] & a({x})", "[{x} - {y}] & a({y})"),
    ax("C1", "{X} + {Y}", "{Y} + {X}"),
    ax("C2", "({X} + {Y}) + {Z}", "{X} + ({Y} + {Z})"),
    ax("C3", "{X} + {X}", "{X}"),
    ax("C4", "{X} + null", "{X}"),
    ax("C5", "{X} & ({Y} + {Z})", "{X} & {Y} + {X} & {Z}"),
    ax("C6", "[{x}] + [{y}]", "[{x} * {y}]"),
    ax("S1", "sum v . {X}", "{X}"),
    ax("S2", "sum v . {Pv}", "sum w . {Pw}"),
    ax("S3", "sum v . ({X} & {Pv})", "{X} & sum v . {Pv}"),
    ax("S4", "sum v . ({Pv} + {Qv})", "(sum v . {Pv}) + (sum v . {Qv})"),
    ax("S5", "sum v . [v - {x}]", "eps"),
    ax("S6", "sum v . [1 - (v - {x}) / (v - {x})]", "eps"),
    ax("Sc1", "({x}) * eps", "eps"),
    ax("Sc2", "({x}) * null", "null"),
    ax("Sc3", "({x}) * [{y}]", "[{y}]"),
    ax("Sc4", "({x}) * a({y})", "a({x} * {y})"),
    ax("Sc5", "({x}) * ({X} & {Y})", "({x}) * ({X}) & ({x}) * ({Y})"),
    ax("Sc6", "({x}) * ({X} + {Y})", "({x}) * ({X}) + ({x}) * ({Y})"),
    ax("Sc7", "({x}) * (sum v . {Pv})", "sum v . ({x}) * ({Pv})"),
    ax("Cl1", "clear{a, b}(eps)", "eps"),
    ax("Cl2", "clear{a, b}(null)", "null"),
    ax("Cl3", "clear{a, b}([{x}])", "[{x}]"),
    ax("Cl4", "clear{a, b}(a({x})) & clear{a, b}(c({y}))", "c({y})"),
    ax("Cl5", "clear{a}({X} & {Y})", "clear{a}({X}) & clear{a}({Y})"),
    ax("Cl6", "clear{a}({X} + {Y})", "clear{a}({X}) + clear{a}({Y})"),
    ax("Cl7", "clear{a}(sum v . {Pv})", "sum v . clear{a}({Pv})"),
    ax("E1", "encap{a}(eps)", "eps"),
    ax("E2", "encap{a}(null)", "null"),
    ax("E3", "encap{a}([{x}])", "[{x}]"),
    ax("E4", "encap{a}(a({x})) & encap{a}(b({y}))", "[{x}] & b({y})"),
    ax("E5", "encap{a}({X} & encap{a}({Y}))", "encap{a}({X}) & encap{a}({Y})"),
    ax("E6", "encap{a}({X} + {Y})", "encap{a}({X}) + encap{a}({Y})"),
    ax("E7", "encap{a}(sum v . {Pv})", "sum v . encap{a}({Pv})"),
];

pub type Subst = Vec<(&'static str, String)>;

pub fn instantiate(template: &str, subst: &Subst) -> String {
    let mut out = template.to_string();
    for (k, v) in subst {
        out = out.replace(&format!("{{{k}}}"), v);
    }
    out
}

pub fn symbolic_subst() -> Subst {
    vec![
        ("X", "(a(x) & [y])".into()),
        ("Y", "(b(y) + c(1))".into()),
        ("Z", "(a(-x) & b(2))".into()),
        ("x", "x".into()),
        ("y", "y".into()),
        ("Pv", "(a(v) & b(x - v))".into()),
        ("Pw", "(a(w) & b(x - w))".into()),
        ("Qv", "([v - y] & c(v))".into()),
    ]
}

pub fn ground_subst(rng: &mut impl Rng) -> Subst {
    let closed = |rng: &mut _| format!("({})", random_closed(rng, 3));
    let p = random_open_in(rng, 3, "v");
    let pw = p.substitute(&Symbol::new("v"), &DataTerm::var("w"));
    let q = random_open_in(rng, 3, "v");
    vec![
        ("X", closed(rng)),
        ("Y", closed(rng)),
        ("Z", closed(rng)),
        ("x", random_constant(rng)),
        ("y", random_constant(rng)),
        ("Pv", format!("({p})")),
        ("Pw", format!("({pw})")),
        ("Qv", format!("({q})")),
    ]
}

fn parse(src: &str) -> Result<Tuplix, String> {
    parse_tuplix(src).map_err(|e| format!("`{src}` does not parse: {e:?}"))
}

/// Both sides have the same basic form up to the equivalence check and,
/// when they are closed and summation-free, the same brute-force meaning,
/// which the normal form must share.
pub fn check_instance(lhs: &str, rhs: &str) -> Result<(), String> {
    let (l, r) = (parse(lhs)?, parse(rhs)?);
    let nl = normalize(&l).map_err(|e| format!("`{lhs}`: {e}"))?;
    let nr = normalize(&r).map_err(|e| format!("`{rhs}`: {e}"))?;
    if let (Some(dl), Some(dr)) = (denote(&l), denote(&r)) {
        if dl != dr {
            return Err(format!("`{lhs}` and `{rhs}` mean different things"));
        }
        if denote_form(&nl).as_ref() != Some(&dl) {
            return Err(format!("normal form `{nl}` of `{lhs}` changes its meaning"));
        }
        if denote_form(&nr).as_ref() != Some(&dr) {
            return Err(format!("normal form `{nr}` of `{rhs}` changes its meaning"));
        }
    }
    if nl == nr {
        return Ok(());
    }
    match compare(&nl, &nr, &DecisionConfig::default()) {
        tuplix::calculus::Verdict::Equal => Ok(()),
        v => Err(format!("`{lhs}` ~> `{nl}` vs `{rhs}` ~> `{nr}`: {v}")),
    }
}

/// The symbolic instance and `ground` random closed instances.
pub fn check_axiom(a: &Axiom, rng: &mut impl Rng, ground: usize) -> Result<(), String> {
    let s = symbolic_subst();
    check_instance(&instantiate(a.lhs, &s), &instantiate(a.rhs, &s))?;
    for _ in 0..ground {
        let s = ground_subst(rng);
        check_instance(&instantiate(a.lhs, &s), &instantiate(a.rhs, &s))?;
    }
    Ok(())
}
