//! A parsed `.tpx` file: networks, unit specifications, named terms and
//! options.

use std::collections::BTreeMap;

use crate::calculus::{NormalizeOptions, Tuplix, UnitRef};
use crate::ftn::{Network, UnitSpec};
use crate::meadow::{DecisionConfig, DEFAULT_BRANCH_BUDGET, DEFAULT_SEED};
use crate::symbol::Symbol;
use crate::syntax::{parse_workspace, ParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub seed: u64,
    pub branch_budget: u64,
    pub trace: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: DEFAULT_SEED,
            branch_budget: DEFAULT_BRANCH_BUDGET,
            trace: false,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub networks: BTreeMap<String, Network>,
    pub specs: BTreeMap<Symbol, UnitSpec>,
    pub terms: BTreeMap<String, Tuplix>,
    pub options: Options,
}

pub(crate) enum Item {
    Net(String, Network),
    Spec(UnitSpec),
    Let(String, Tuplix),
    Option(String, String),
}

impl Workspace {
    /// Parses a whole file; any error makes the result an error list, each
    /// carrying its position.
    pub fn parse(src: &str) -> Result<Workspace, Vec<ParseError>> {
        let (ws, errors) = parse_workspace(src);
        if errors.is_empty() {
            Ok(ws)
        } else {
            Err(errors)
        }
    }

    /// Like [`Workspace::parse`] but keeps every statement that parsed.
    pub fn parse_lenient(src: &str) -> (Workspace, Vec<ParseError>) {
        parse_workspace(src)
    }

    pub(crate) fn add(&mut self, item: Item) -> Result<(), String> {
        match item {
            Item::Net(name, net) => {
                if self.networks.contains_key(&name) {
                    return Err(format!("network `{name}` is already defined"));
                }
                self.networks.insert(name, net);
            }
            Item::Spec(spec) => {
                self.unit(&spec.unit)?;
                if self.specs.contains_key(&spec.unit) {
                    return Err(format!("unit `{}` already has a specification", spec.unit));
                }
                self.specs.insert(spec.unit.clone(), spec);
            }
            Item::Let(name, t) => {
                if self.terms.contains_key(&name) {
                    return Err(format!("term `{name}` is already defined"));
                }
                self.terms.insert(name, t);
            }
            Item::Option(key, value) => match key.as_str() {
                "seed" | "budget" => {
                    let n: u64 = value
                        .parse()
                        .map_err(|_| format!("option `{key}` expects a non-negative integer"))?;
                    if key == "seed" {
                        self.options.seed = n;
                    } else {
                        self.options.branch_budget = n;
                    }
                }
                "trace" => {
                    self.options.trace = match value.as_str() {
                        "on" | "true" => true,
                        "off" | "false" => false,
                        _ => return Err("option `trace` expects on or off".into()),
                    }
                }
                _ => return Err(format!("unknown option `{key}`")),
            },
        }
        Ok(())
    }

    /// A named term: a `let` binding, or the body of the unit spec with
    /// that name.
    pub fn term(&self, name: &str) -> Option<&Tuplix> {
        self.terms.get(name).or_else(|| {
            let sym: Symbol = name.parse().ok()?;
            self.specs.get(&sym).map(|s| &s.body)
        })
    }

    /// The unit with this name; it must be declared in exactly one network.
    pub fn unit(&self, name: &Symbol) -> Result<UnitRef, String> {
        let hits: Vec<UnitRef> = self.networks.values().filter_map(|n| n.unit_ref(name)).collect();
        match hits.len() {
            0 => Err(format!("unit `{name}` is not declared in any network")),
            1 => Ok(hits.into_iter().next().expect("one hit")),
            _ => Err(format!("unit `{name}` is declared in several networks")),
        }
    }

    pub fn network(&self, name: &str) -> Option<&Network> {
        self.networks.get(name)
    }

    /// Specifications of the given units of `net`, in the given order.
    pub fn specs_of(&self, net: &Network, units: &[Symbol]) -> Result<Vec<UnitSpec>, String> {
        units
            .iter()
            .map(|u| {
                if !net.units.contains_key(u) {
                    return Err(format!("unit `{u}` is not part of the network"));
                }
                self.specs
                    .get(u)
                    .cloned()
                    .ok_or_else(|| format!("unit `{u}` has no specification"))
            })
            .collect()
    }

    /// The seed from `TUPLIX_SEED` if set, else the `seed` option.
    pub fn seed(&self) -> u64 {
        std::env::var("TUPLIX_SEED")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(self.options.seed)
    }

    pub fn decision(&self) -> DecisionConfig {
        DecisionConfig {
            seed: self.seed(),
            branch_budget: self.options.branch_budget,
            ..DecisionConfig::default()
        }
    }

    pub fn normalize_options(&self) -> NormalizeOptions {
        NormalizeOptions {
            decision: self.decision(),
            trace: self.options.trace,
            ..NormalizeOptions::default()
        }
    }
}
