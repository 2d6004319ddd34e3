mod common;

use common::{nf, t};
use proptest::prelude::*;
use serde_json::json;
use tuplix::calculus::{Attribute, Tuplix};
use tuplix::json::basic_form_to_json;
use tuplix::meadow::{DataTerm, Rational};
use tuplix::syntax::{parse_data, parse_tuplix, Pos};
use tuplix::workspace::Workspace;
use tuplix::Symbol;

fn d(src: &str) -> DataTerm {
    parse_data(src).unwrap()
}

fn entry(a: &str, src: &str) -> Tuplix {
    Tuplix::Entry(Attribute::flat(a), d(src))
}

fn conj(x: Tuplix, y: Tuplix) -> Tuplix {
    Tuplix::Conj(Box::new(x), Box::new(y))
}

#[test]
fn terms_parse_to_the_expected_trees() {
    let ws = Workspace::parse("S = a(rew*(n1+n2))").unwrap();
    assert_eq!(ws.term("S"), Some(&entry("a", "rew * (n1 + n2)")));

    assert_eq!(t("[x == 0] & a(x)"), conj(Tuplix::Test(d("x - 0")), entry("a", "x")));
    assert_eq!(t("[x] & a(x)"), conj(Tuplix::Test(d("x")), entry("a", "x")));

    // sum reaches to the end of the expression
    assert_eq!(
        t("sum x . a(-x) & b(x)"),
        Tuplix::Sum("x".into(), Box::new(conj(entry("a", "-x"), entry("b", "x"))))
    );
    assert_eq!(t("a(1) + b(2) & c(3)"), Tuplix::Alt(
        Box::new(entry("a", "1")),
        Box::new(conj(entry("b", "2"), entry("c", "3")))
    ));
    assert_eq!(
        t("2 * a(1) & b(1)"),
        conj(Tuplix::Scalar(d("2"), Box::new(entry("a", "1"))), entry("b", "1"))
    );
    assert_eq!(t("+a(1)"), Tuplix::Entry(Attribute::plus("a"), d("1")));
    assert_eq!(t("-a(1)"), Tuplix::Entry(Attribute::minus("a"), d("1")));
}

#[test]
fn indexed_names() {
    let s: Symbol = "inc_12".parse().unwrap();
    assert_eq!((s.family(), s.index()), ("inc", Some(12)));
    assert_eq!(s.to_string(), "inc_12");
    assert_eq!(d("inc_0"), DataTerm::Var(Symbol::indexed("inc", 0)));
    assert_eq!(t("a_3(1)"), Tuplix::Entry(Attribute::flat(Symbol::indexed("a", 3)), d("1")));
}

#[test]
fn data_syntax() {
    assert_eq!(d("x / y"), d("x * y^-1"));
    assert_eq!(d("-(2)").to_string(), "-(2)");
    assert_eq!(d("x - y"), DataTerm::Add(Box::new(d("x")), Box::new(d("-y"))));
    assert_eq!(d("2/3"), DataTerm::Const(Rational::new(2.into(), 3.into())));
}

#[test]
fn errors_carry_positions() {
    let e = parse_tuplix("a(1 +").unwrap_err();
    assert_eq!(e[0].pos, Pos { line: 1, col: 6 });
    let e = parse_tuplix("a(1) &\n  b(2) & ]").unwrap_err();
    assert_eq!(e[0].pos, Pos { line: 2, col: 10 });
    assert!(e[0].to_string().starts_with("2:10: "));
    let e = parse_data("x ? y").unwrap_err();
    assert_eq!(e[0].pos.col, 3);
}

#[test]
fn statement_errors_do_not_stop_parsing() {
    let src = "let ok = a(1)\nlet bad = a(1 +\nlet also = b(2) &\nlet fine = c(3)\n";
    let (ws, errors) = Workspace::parse_lenient(src);
    assert_eq!(errors.len(), 2);
    assert_eq!(errors[0].pos.line, 3);
    assert_eq!(errors[1].pos.line, 4);
    assert!(ws.term("ok").is_some() && ws.term("fine").is_some());
    assert!(ws.term("bad").is_none());
    assert!(Workspace::parse(src).is_err());
}

#[test]
fn names_are_unique_per_namespace() {
    assert!(Workspace::parse("let x = eps\nlet x = null").is_err());
    let src = "net n { unit g { in: a; out: b } }\nnet n { unit h { in: c } }";
    assert!(Workspace::parse(src).is_err());
    // the same name may be a network and a term
    let ws = Workspace::parse("net n { unit g { in: a; out: b } }\nlet n = a(1)").unwrap();
    assert!(ws.network("n").is_some() && ws.term("n").is_some());
    // specs need a declared unit, once
    assert!(Workspace::parse("spec g = a(1)").is_err());
    let twice = "net n { unit g { in: a } }\nspec g = a(-1)\nspec g = a(-2)";
    assert!(Workspace::parse(twice).is_err());
}

#[test]
fn networks_and_specs() {
    let ws = Workspace::parse(
        "net chain {\n  unit g { in: a; out: b }\n  unit h { in: b; out: c }\n}\n\
         spec g = a(-1) & b(1)\nspec h = b(-1) & c(1)\n\
         let visible = encap{b}(zeta{g; b}(g) & h)",
    )
    .unwrap();
    let net = ws.network("chain").unwrap();
    assert_eq!(net.units.len(), 2);
    assert_eq!(net.attrs.len(), 3);
    assert_eq!(ws.term("g"), Some(&t("a(-1) & b(1)")));
    let shown = tuplix::calculus::normalize(ws.term("visible").unwrap()).unwrap();
    assert_eq!(shown.to_string(), "a(-1) & +b(1) & c(1)");
}

#[test]
fn options() {
    let ws = Workspace::parse("option seed = 7\noption budget = 50\noption trace = on").unwrap();
    assert_eq!(ws.options.seed, 7);
    assert_eq!(ws.options.branch_budget, 50);
    assert!(ws.options.trace);
    assert!(Workspace::parse("option speed = 1").is_err());
    assert!(Workspace::parse("option seed = fast").is_err());
}

#[test]
fn json_rendering() {
    let form = nf("sum x . [x - y] & a(x) & b(2) + c(1)");
    assert_eq!(
        basic_form_to_json(&form),
        json!({"alternatives": [
            {"binders": [], "test": null, "entries": {"a": "y", "b": "2"}},
            {"binders": [], "test": null, "entries": {"c": "1"}},
        ]})
    );
    assert_eq!(basic_form_to_json(&nf("null")), json!({"alternatives": []}));
    let open = basic_form_to_json(&nf("sum x . [x * x - 2] & a(x)"));
    assert_eq!(open["alternatives"][0]["binders"], json!(["x"]));
    assert_eq!(open["alternatives"][0]["test"], json!("x * x - 2"));
}

fn data() -> impl Strategy<Value = DataTerm> {
    let leaf = prop_oneof![
        (-3i64..=3).prop_map(DataTerm::int),
        (1i64..=3, 2i64..=4).prop_map(|(n, m)| DataTerm::Const(Rational::new(n.into(), m.into()))),
        prop::sample::select(vec!["x", "y", "inc_0"]).prop_map(DataTerm::var),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            inner.clone().prop_map(|a| -a),
            inner.prop_map(DataTerm::inv),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn data_terms_print_and_parse_back(s in data()) {
        prop_assert_eq!(parse_data(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn terms_print_and_parse_back(s in data(), r in data(), a in prop::sample::select(vec!["a", "b_1"])) {
        let p = Tuplix::Alt(
            Box::new(Tuplix::Sum("x".into(), Box::new(conj(Tuplix::Test(s), entry(a, "x"))))),
            Box::new(Tuplix::Scalar(r.clone(), Box::new(Tuplix::Entry(Attribute::minus(a), r)))),
        );
        prop_assert_eq!(parse_tuplix(&p.to_string()).unwrap(), p);
    }
}
