//! Financial transfer networks: units owning in-going and outgoing channels,
//! validation of the ownership conditions, and the standard pipelines that
//! compose unit specifications under encapsulation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::calculus::{
    normalize_with, AttrSet, Attribute, BasicForm, NormalizeOptions, Tuplix, TuplixError, UnitRef,
};
use crate::meadow::DataTerm;
use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Ports {
    pub ins: BTreeSet<Symbol>,
    pub outs: BTreeSet<Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Network {
    pub attrs: BTreeSet<Symbol>,
    pub units: BTreeMap<Symbol, Ports>,
}

impl Network {
    pub fn new() -> Self {
        Network::default()
    }

    /// Adds (or replaces) a unit; its channels are added to the attributes.
    pub fn add_unit(
        &mut self,
        unit: impl Into<Symbol>,
        ins: impl IntoIterator<Item = Symbol>,
        outs: impl IntoIterator<Item = Symbol>,
    ) -> &mut Self {
        let ports = Ports {
            ins: ins.into_iter().collect(),
            outs: outs.into_iter().collect(),
        };
        self.attrs.extend(ports.ins.iter().cloned());
        self.attrs.extend(ports.outs.iter().cloned());
        self.units.insert(unit.into(), ports);
        self
    }

    pub fn unit_ref(&self, unit: &Symbol) -> Option<UnitRef> {
        self.units.get(unit).map(|p| UnitRef {
            name: unit.clone(),
            ins: p.ins.clone(),
            outs: p.outs.clone(),
        })
    }

    fn port_set(&self, unit: &Symbol) -> Result<BTreeSet<Symbol>, FtnError> {
        let p = self
            .units
            .get(unit)
            .ok_or_else(|| FtnError::UnknownUnit(unit.clone()))?;
        Ok(p.ins.union(&p.outs).cloned().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// The attribute is in-going for both units.
    SharedInput { attr: Symbol, units: (Symbol, Symbol) },
    SharedOutput { attr: Symbol, units: (Symbol, Symbol) },
    /// A unit uses a channel missing from the attribute set.
    Undeclared { unit: Symbol, attr: Symbol },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SharedInput { attr, units: (g, h) } => {
                write!(f, "`{attr}` is in-going for both `{g}` and `{h}`")
            }
            Violation::SharedOutput { attr, units: (g, h) } => {
                write!(f, "`{attr}` is outgoing for both `{g}` and `{h}`")
            }
            Violation::Undeclared { unit, attr } => {
                write!(f, "unit `{unit}` uses undeclared attribute `{attr}`")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// `(unit, attr)` with `attr` both in-going and outgoing for `unit`.
    /// Allowed, but reported.
    pub self_channels: Vec<(Symbol, Symbol)>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_ftn(net: &Network) -> ValidationReport {
    let mut report = ValidationReport::default();
    let units: Vec<_> = net.units.iter().collect();
    for (i, (g, pg)) in units.iter().enumerate() {
        for (h, ph) in &units[i + 1..] {
            for a in pg.ins.intersection(&ph.ins) {
                report.violations.push(Violation::SharedInput {
                    attr: a.clone(),
                    units: ((*g).clone(), (*h).clone()),
                });
            }
            for a in pg.outs.intersection(&ph.outs) {
                report.violations.push(Violation::SharedOutput {
                    attr: a.clone(),
                    units: ((*g).clone(), (*h).clone()),
                });
            }
        }
        for a in pg.ins.union(&pg.outs) {
            if !net.attrs.contains(a) {
                report.violations.push(Violation::Undeclared {
                    unit: (*g).clone(),
                    attr: a.clone(),
                });
            }
        }
        for a in pg.ins.intersection(&pg.outs) {
            report.self_channels.push(((*g).clone(), a.clone()));
        }
    }
    report.violations.sort();
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    Internal,
    External,
}

/// Internal when some unit receives over `a` and some (possibly the same)
/// unit sends over it.
pub fn classify(net: &Network, a: &Symbol) -> Result<Class, FtnError> {
    if !net.attrs.contains(a) {
        return Err(FtnError::UnknownAttribute(a.clone()));
    }
    let received = net.units.values().any(|p| p.ins.contains(a));
    let sent = net.units.values().any(|p| p.outs.contains(a));
    Ok(if received && sent {
        Class::Internal
    } else {
        Class::External
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitSpec {
    pub unit: Symbol,
    pub body: Tuplix,
}

impl UnitSpec {
    pub fn new(unit: impl Into<Symbol>, body: Tuplix) -> Self {
        UnitSpec {
            unit: unit.into(),
            body,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecViolation {
    pub unit: Symbol,
    pub attr: Attribute,
}

impl fmt::Display for SpecViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "spec of `{}` uses `{}`, which is not one of its channels", self.unit, self.attr)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FtnError {
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(Symbol),
    #[error("unknown unit `{0}`")]
    UnknownUnit(Symbol),
    #[error("no specification given for unit `{0}`")]
    MissingSpec(Symbol),
    #[error("{}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Spec(Vec<SpecViolation>),
    #[error(transparent)]
    Tuplix(#[from] TuplixError),
}

/// Attributes of the body (signed ones by their name) that are not channels
/// of the unit.
pub fn check_unit_spec(net: &Network, s: &UnitSpec) -> Result<Vec<SpecViolation>, FtnError> {
    let ports = net.port_set(&s.unit)?;
    Ok(s.body
        .attributes()
        .into_iter()
        .filter(|a| !ports.contains(a.name()))
        .map(|attr| SpecViolation {
            unit: s.unit.clone(),
            attr,
        })
        .collect())
}

fn check_all(net: &Network, specs: &[UnitSpec]) -> Result<(), FtnError> {
    let mut bad = Vec::new();
    for s in specs {
        bad.extend(check_unit_spec(net, s)?);
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(FtnError::Spec(bad))
    }
}

/// Channels connecting two of the given units (a unit may connect to
/// itself).
pub fn internal_among(net: &Network, units: &[Symbol]) -> AttrSet {
    let ports: Vec<&Ports> = units.iter().filter_map(|u| net.units.get(u)).collect();
    let ins: BTreeSet<&Symbol> = ports.iter().flat_map(|p| &p.ins).collect();
    let outs: BTreeSet<&Symbol> = ports.iter().flat_map(|p| &p.outs).collect();
    ins.intersection(&outs)
        .map(|a| Attribute::flat((*a).clone()))
        .collect()
}

fn default_h(net: &Network, specs: &[UnitSpec]) -> AttrSet {
    let units: Vec<Symbol> = specs.iter().map(|s| s.unit.clone()).collect();
    internal_among(net, &units)
}

/// The encapsulated composition `encap{H}(P_1 & ... & P_k)` as an unevaluated
/// term. `H` defaults to the channels internal to the specified units.
pub fn composition(
    net: &Network,
    specs: &[UnitSpec],
    h: Option<&AttrSet>,
) -> Result<Tuplix, FtnError> {
    check_all(net, specs)?;
    let h = h.cloned().unwrap_or_else(|| default_h(net, specs));
    let body = Tuplix::conj_all(specs.iter().map(|s| s.body.clone()));
    Ok(Tuplix::Encap(h, Box::new(body)))
}

pub fn compose_encapsulate(
    net: &Network,
    specs: &[UnitSpec],
    h: Option<&AttrSet>,
) -> Result<BasicForm, FtnError> {
    compose_encapsulate_with(net, specs, h, &NormalizeOptions::default())
}

pub fn compose_encapsulate_with(
    net: &Network,
    specs: &[UnitSpec],
    h: Option<&AttrSet>,
    opts: &NormalizeOptions,
) -> Result<BasicForm, FtnError> {
    let p = composition(net, specs, h)?;
    Ok(normalize_with(&p, opts)?.form)
}

/// `select{J}(encap{H}(zeta{g; H}(P_g) & others))` where `J` holds every
/// channel of `g` in flat and both signed forms.
pub fn focus_term(net: &Network, specs: &[UnitSpec], g: &Symbol) -> Result<Tuplix, FtnError> {
    check_all(net, specs)?;
    let unit = net.unit_ref(g).ok_or_else(|| FtnError::UnknownUnit(g.clone()))?;
    if !specs.iter().any(|s| &s.unit == g) {
        return Err(FtnError::MissingSpec(g.clone()));
    }
    let h = default_h(net, specs);
    let parts = specs.iter().map(|s| {
        if &s.unit == g {
            Tuplix::Zeta(unit.clone(), h.clone(), Box::new(s.body.clone()))
        } else {
            s.body.clone()
        }
    });
    let encapsulated = Tuplix::Encap(h.clone(), Box::new(Tuplix::conj_all(parts)));
    let j: AttrSet = unit
        .ins
        .union(&unit.outs)
        .flat_map(|a| {
            [
                Attribute::flat(a.clone()),
                Attribute::plus(a.clone()),
                Attribute::minus(a.clone()),
            ]
        })
        .collect();
    Ok(Tuplix::Select(j, Box::new(encapsulated)))
}

pub fn focus(net: &Network, specs: &[UnitSpec], g: &Symbol) -> Result<BasicForm, FtnError> {
    focus_with(net, specs, g, &NormalizeOptions::default())
}

pub fn focus_with(
    net: &Network,
    specs: &[UnitSpec],
    g: &Symbol,
    opts: &NormalizeOptions,
) -> Result<BasicForm, FtnError> {
    let p = focus_term(net, specs, g)?;
    Ok(normalize_with(&p, opts)?.form)
}

// The reserve chain: per period n a spending unit Q_n and a reserve R_n.
// R_n takes the transfer a_n and the reservation b_n, and pays out the
// withdrawal c_n and the transfer a_{n+1}. Q_n takes c_n and the income
// d_n, and pays the reservation b_{n+1} and the expenditure e_n.

fn at(family: &str, n: u64) -> Symbol {
    Symbol::indexed(family, n)
}

fn var(name: &str) -> DataTerm {
    DataTerm::var(name)
}

fn flat(family: &str, n: u64, t: DataTerm) -> Tuplix {
    Tuplix::Entry(Attribute::flat(at(family, n)), t)
}

fn sums(binders: &[&str], body: Tuplix) -> Tuplix {
    binders
        .iter()
        .rev()
        .fold(body, |p, x| Tuplix::Sum(Symbol::from(*x), Box::new(p)))
}

/// `K(sum u, v, w, x . a_n(-u) & b_n(-v) & c_n(w) & a_{n+1}(x))`.
pub fn reserve_unit(n: u64) -> Tuplix {
    let body = Tuplix::conj_all([
        flat("a", n, -var("u")),
        flat("b", n, -var("v")),
        flat("c", n, var("w")),
        flat("a", n + 1, var("x")),
    ]);
    Tuplix::Kirch(DataTerm::zero(), Box::new(sums(&["u", "v", "w", "x"], body)))
}

/// `K(sum u . c_n(-pw) & d_n(-inc_n) & b_{n+1}(k * inc_n) & e_n(u))`.
pub fn spending_unit(n: u64) -> Tuplix {
    let inc = DataTerm::Var(at("inc", n));
    let body = Tuplix::conj_all([
        flat("c", n, -var("pw")),
        flat("d", n, -inc.clone()),
        flat("b", n + 1, var("k") * inc),
        flat("e", n, var("u")),
    ]);
    Tuplix::Kirch(DataTerm::zero(), Box::new(sums(&["u"], body)))
}

/// Units `Q_0..Q_n` and `R_0..R_{n+1}`.
pub fn reserve_network(n: u64) -> Network {
    let mut net = Network::new();
    for i in 0..=n + 1 {
        net.add_unit(at("R", i), [at("a", i), at("b", i)], [at("c", i), at("a", i + 1)]);
    }
    for i in 0..=n {
        net.add_unit(at("Q", i), [at("c", i), at("d", i)], [at("b", i + 1), at("e", i)]);
    }
    net
}

pub fn reserve_specs(n: u64) -> Vec<UnitSpec> {
    let qs = (0..=n).map(|i| UnitSpec::new(at("Q", i), spending_unit(i)));
    let rs = (0..=n + 1).map(|i| UnitSpec::new(at("R", i), reserve_unit(i)));
    qs.chain(rs).collect()
}

/// `{a_{i+1}, b_{i+1}, c_i | 0 <= i <= n}`.
pub fn reserve_h(n: u64) -> AttrSet {
    (0..=n)
        .flat_map(|i| {
            [
                Attribute::flat(at("a", i + 1)),
                Attribute::flat(at("b", i + 1)),
                Attribute::flat(at("c", i)),
            ]
        })
        .collect()
}

/// `encap{H_n}(Q_0 & ... & Q_n & R_0 & ... & R_{n+1})`, unevaluated.
pub fn reserve_chain_term(n: u64) -> Tuplix {
    composition(&reserve_network(n), &reserve_specs(n), Some(&reserve_h(n)))
        .expect("the reserve specifications use only their own channels")
}

pub fn reserve_chain(n: u64) -> BasicForm {
    reserve_chain_with(n, &NormalizeOptions::default())
}

pub fn reserve_chain_with(n: u64, opts: &NormalizeOptions) -> BasicForm {
    normalize_with(&reserve_chain_term(n), opts)
        .expect("the reserve chain contains no unsupported operators")
        .form
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::conj;

    fn s(x: &str) -> Symbol {
        Symbol::from(x)
    }

    fn syms(xs: &[&str]) -> Vec<Symbol> {
        xs.iter().map(|x| s(x)).collect()
    }

    fn gh() -> Network {
        let mut net = Network::new();
        net.add_unit("g", syms(&["a"]), syms(&["b"]));
        net.add_unit("h", syms(&["b"]), syms(&["c"]));
        net
    }

    fn e(a: &str, n: i64) -> Tuplix {
        Tuplix::Entry(Attribute::flat(a), DataTerm::int(n))
    }

    #[test]
    fn two_unit_chain_is_valid_and_classified() {
        let net = gh();
        assert!(validate_ftn(&net).is_ok());
        assert_eq!(classify(&net, &s("b")).unwrap(), Class::Internal);
        assert_eq!(classify(&net, &s("a")).unwrap(), Class::External);
        assert_eq!(classify(&net, &s("c")).unwrap(), Class::External);
        assert!(matches!(classify(&net, &s("z")), Err(FtnError::UnknownAttribute(_))));
    }

    #[test]
    fn shared_inputs_are_reported() {
        let mut net = Network::new();
        net.add_unit("g", syms(&["a"]), syms(&[]));
        net.add_unit("h", syms(&["a"]), syms(&[]));
        let r = validate_ftn(&net);
        assert_eq!(
            r.violations,
            vec![Violation::SharedInput {
                attr: s("a"),
                units: (s("g"), s("h"))
            }]
        );
        assert!(validate_ftn(&Network::new()).is_ok());
    }

    #[test]
    fn self_channels_are_internal_and_flagged() {
        let mut net = Network::new();
        net.add_unit("g", syms(&["a"]), syms(&["a"]));
        let r = validate_ftn(&net);
        assert!(r.is_ok());
        assert_eq!(r.self_channels, vec![(s("g"), s("a"))]);
        assert_eq!(classify(&net, &s("a")).unwrap(), Class::Internal);
    }

    #[test]
    fn unit_specs_are_checked_against_channels() {
        let net = gh();
        assert!(check_unit_spec(&net, &UnitSpec::new("g", conj(e("a", -1), e("b", 1))))
            .unwrap()
            .is_empty());
        let bad = check_unit_spec(&net, &UnitSpec::new("g", e("c", 1))).unwrap();
        assert_eq!(bad.len(), 1);
        assert!(matches!(
            check_unit_spec(&net, &UnitSpec::new("q", Tuplix::Eps)),
            Err(FtnError::UnknownUnit(_))
        ));
    }

    #[test]
    fn focus_on_either_end_of_a_stream() {
        let net = gh();
        let specs = vec![
            UnitSpec::new("g", conj(e("a", -1), e("b", 1))),
            UnitSpec::new("h", conj(e("b", -1), e("c", 1))),
        ];
        assert_eq!(compose_encapsulate(&net, &specs, None).unwrap().to_string(), "a(-1) & c(1)");
        assert_eq!(focus(&net, &specs, &s("g")).unwrap().to_string(), "a(-1) & +b(1)");
        assert_eq!(focus(&net, &specs, &s("h")).unwrap().to_string(), "-b(1) & c(1)");
    }

    #[test]
    fn mismatched_flux_nullifies() {
        let mut net = Network::new();
        net.add_unit("g", syms(&[]), syms(&["a"]));
        net.add_unit("h", syms(&["a"]), syms(&[]));
        let specs = vec![UnitSpec::new("g", e("a", 1)), UnitSpec::new("h", e("a", -2))];
        assert!(compose_encapsulate(&net, &specs, None).unwrap().is_delta());
    }

    #[test]
    fn reserve_network_is_valid() {
        for n in 0..3 {
            let net = reserve_network(n);
            assert!(validate_ftn(&net).is_ok());
            for s in reserve_specs(n) {
                assert!(check_unit_spec(&net, &s).unwrap().is_empty());
            }
        }
    }
}
