//! Meadow axioms, derived identities and the zero-test logic.

use std::collections::BTreeMap;

use num_rational::BigRational;
use tuplix::calculus::{compare, normalize, tand, timp, tnot, tor, Tuplix, Verdict};
use tuplix::meadow::{
    eq_data, eval_data, is_zero, normalize_data, normalize_data_assuming, DecisionConfig,
};
use tuplix::syntax::parse_data;
use tuplix::{DataTerm, Symbol, Tri};

pub type Check = (String, Result<(), String>);

pub fn d(src: &str) -> DataTerm {
    parse_data(src).unwrap_or_else(|e| panic!("`{src}`: {e:?}"))
}

fn provably_equal(name: &str, l: &str, r: &str) -> Check {
    let got = eq_data(&d(l), &d(r));
    let res = match got {
        Ok(Tri::ProvablyTrue) => Ok(()),
        other => Err(format!("{l} = {r}: {other:?}")),
    };
    (name.to_string(), res)
}

pub const MEADOW_AXIOMS: [(&str, &str); 10] = [
    ("(x + y) + z", "x + (y + z)"),
    ("x + y", "y + x"),
    ("x + 0", "x"),
    ("x + (-x)", "0"),
    ("(x * y) * z", "x * (y * z)"),
    ("x * y", "y * x"),
    ("1 * x", "x"),
    ("x * (y + z)", "x * y + x * z"),
    ("(x^-1)^-1", "x"),
    ("x * (x * x^-1)", "x"),
];

pub const DERIVED: [(&str, &str); 6] = [
    ("(0)^-1", "0"),
    ("(-x)^-1", "-(x^-1)"),
    ("(x * y)^-1", "x^-1 * y^-1"),
    ("0 * x", "0"),
    ("x * -y", "-(x * y)"),
    ("-(-x)", "x"),
];

pub fn env(pairs: &[(&str, i64)]) -> BTreeMap<Symbol, BigRational> {
    pairs
        .iter()
        .map(|(v, n)| (Symbol::new(*v), BigRational::from_integer((*n).into())))
        .collect()
}

pub fn meadow_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for (i, (l, r)) in MEADOW_AXIOMS.iter().enumerate() {
        out.push(provably_equal(&format!("meadow axiom {}", i + 1), l, r));
    }
    out.push((
        "separation 0 != 1".into(),
        match is_zero(&d("1")) {
            Ok(Tri::ProvablyFalse) => Ok(()),
            other => Err(format!("is_zero(1) = {other:?}")),
        },
    ));
    for (i, (l, r)) in DERIVED.iter().enumerate() {
        out.push(provably_equal(&format!("derived identity {}", i + 1), l, r));
    }
    // cancellation: x != 0 and x*y = x*z give y = z
    let cancelled = normalize_data_assuming(&d("(x * y - x * z) / x"), &[d("x")]);
    out.push((
        "cancellation".into(),
        if cancelled == normalize_data(&d("y - z")) {
            Ok(())
        } else {
            Err(format!("(x*y - x*z)/x became {cancelled} assuming x != 0"))
        },
    ));
    let mut inverse = Ok(());
    for u in ["x", "x + y", "x * y - 3", "x^-1 + 2"] {
        let got = normalize_data_assuming(&d(&format!("({u}) * ({u})^-1")), &[d(u)]);
        if got != DataTerm::one() {
            inverse = Err(format!("u = {u}: u * u^-1 became {got} assuming u != 0"));
        }
    }
    out.push(("general inverse law".into(), inverse));
    // x/x = 1 only where x != 0
    let not_provable = match (is_zero(&d("x/x - 1")), eq_data(&d("x/x"), &d("1"))) {
        (Ok(Tri::Unknown), Ok(t)) if t != Tri::ProvablyTrue => {
            let at = |n| eval_data(&d("x/x"), &env(&[("x", n)]));
            match (at(0), at(1)) {
                (Ok(z), Ok(o)) if z == BigRational::from_integer(0.into()) && o == BigRational::from_integer(1.into()) => Ok(()),
                other => Err(format!("x/x at 0 and 1: {other:?}")),
            }
        }
        other => Err(format!("x/x = 1 judged {other:?}")),
    };
    out.push(("x/x = 1 not provable, refuted at x = 0".into(), not_provable));
    out
}

/// `t` read as a formula: true exactly when it is zero.
fn holds(t: &DataTerm, x: i64, y: i64) -> bool {
    use num_traits::Zero;
    eval_data(t, &env(&[("x", x), ("y", y)]))
        .expect("closed after assignment")
        .is_zero()
}

/// One entry per row of the four truth tables.
pub fn truth_table_rows() -> Vec<Check> {
    let (x, y) = (d("x"), d("y"));
    let ops: [(&str, DataTerm, fn(bool, bool) -> bool); 4] = [
        ("not", tnot(&x), |p, _| !p),
        ("and", tand(&x, &y), |p, q| p && q),
        ("or", tor(&x, &y), |p, q| p || q),
        ("implies", timp(&x, &y), |p, q| !p || q),
    ];
    let mut out = Vec::new();
    for (name, t, classical) in &ops {
        for (vx, vy) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let want = classical(vx == 0, vy == 0);
            let got = holds(t, vx, vy);
            out.push((
                format!("{name} at x={vx}, y={vy}"),
                if got == want {
                    Ok(())
                } else {
                    Err(format!("{t} gives {got}, expected {want}"))
                },
            ));
        }
    }
    out
}

fn same_test(name: &str, l: &DataTerm, r: &DataTerm) -> Check {
    let form = |t: &DataTerm| normalize(&Tuplix::Test(t.clone())).expect("tests normalize");
    let (fl, fr) = (form(l), form(r));
    let res = match compare(&fl, &fr, &DecisionConfig::default()) {
        Verdict::Equal => Ok(()),
        v => Err(format!("[{l}] ~> {fl} vs [{r}] ~> {fr}: {v}")),
    };
    (name.to_string(), res)
}

pub fn logic_laws() -> Vec<Check> {
    let (x, y, z) = (d("x"), d("y"), d("z"));
    vec![
        same_test("double negation", &tnot(&tnot(&x)), &x),
        same_test(
            "and distributes over or",
            &tand(&x, &tor(&y, &z)),
            &tor(&tand(&x, &y), &tand(&x, &z)),
        ),
        same_test(
            "or distributes over and",
            &tor(&x, &tand(&y, &z)),
            &tand(&tor(&x, &y), &tor(&x, &z)),
        ),
        same_test("absorption of or", &tand(&x, &tor(&x, &y)), &x),
        same_test("absorption of and", &tor(&x, &tand(&x, &y)), &x),
        same_test("and commutes", &tand(&x, &y), &tand(&y, &x)),
        same_test("or is idempotent", &tor(&x, &x), &x),
        same_test("de Morgan", &tnot(&tand(&x, &y)), &tor(&tnot(&x), &tnot(&y))),
    ]
}
