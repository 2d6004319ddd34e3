use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::lexer::{tokenize, Pos, Tok, Token};
use super::ParseError;
use crate::calculus::{AttrSet, Attribute, Tuplix, UnitRef};
use crate::ftn::{Network, UnitSpec};
use crate::funcdef::{FnVar, Lambda};
use crate::meadow::{Application, Callee, DataTerm, Rational};
use crate::symbol::Symbol;
use crate::workspace::{Item, Workspace};

const RESERVED: &[&str] = &[
    "eps", "null", "sum", "def", "in", "lam", "sumf", "gamma", "encap", "clear", "select", "K",
    "zeta", "flat", "signed", "net", "unit", "spec", "let", "option",
];

type PResult<T> = Result<T, ParseError>;

pub(crate) struct Parser<'a> {
    toks: &'a [Token],
    i: usize,
    /// Named terms and networks visible to references; `None` outside a
    /// workspace.
    scope: Option<&'a Workspace>,
    /// Arity of each function name seen in the current statement.
    arity: BTreeMap<Symbol, usize>,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(toks: &'a [Token], scope: Option<&'a Workspace>) -> Self {
        Parser {
            toks,
            i: 0,
            scope,
            arity: BTreeMap::new(),
        }
    }

    fn peek(&self) -> &Token {
        &self.toks[self.i.min(self.toks.len() - 1)]
    }

    fn peek_at(&self, k: usize) -> &Token {
        &self.toks[(self.i + k).min(self.toks.len() - 1)]
    }

    fn bump(&mut self) -> Token {
        let t = self.peek().clone();
        if t.tok != Tok::Eof {
            self.i += 1;
        }
        t
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(&self.peek().tok, Tok::Punct(q) if *q == p)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == w)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            pos: self.peek().pos,
            message: message.into(),
        })
    }

    fn expect_punct(&mut self, p: &str) -> PResult<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.err(format!("expected `{p}`, found {}", self.peek().tok))
        }
    }

    fn expect_word(&mut self, w: &str) -> PResult<()> {
        if self.is_word(w) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{w}`, found {}", self.peek().tok))
        }
    }

    fn ident(&mut self) -> PResult<(String, Pos)> {
        match &self.peek().tok {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                let s = s.clone();
                let pos = self.bump().pos;
                Ok((s, pos))
            }
            Tok::Ident(s) => self.err(format!("`{s}` is a reserved word")),
            other => self.err(format!("expected a name, found {other}")),
        }
    }

    fn symbol(&mut self) -> PResult<Symbol> {
        let (s, pos) = self.ident()?;
        s.parse().map_err(|e: crate::symbol::InvalidSymbol| ParseError {
            pos,
            message: e.to_string(),
        })
    }

    fn symbol_list(&mut self) -> PResult<Vec<Symbol>> {
        let mut out = vec![self.symbol()?];
        while self.eat_punct(",") {
            out.push(self.symbol()?);
        }
        Ok(out)
    }

    pub(crate) fn at_end(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    pub(crate) fn finish(&mut self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err(format!("unexpected {}", self.peek().tok))
        }
    }

    // ---- data terms ----

    pub(crate) fn data(&mut self) -> PResult<DataTerm> {
        let mut x = self.data_product()?;
        loop {
            if self.eat_punct("+") {
                x = x + self.data_product()?;
            } else if self.eat_punct("-") {
                x = DataTerm::Add(Box::new(x), Box::new(DataTerm::Neg(Box::new(self.data_product()?))));
            } else {
                return Ok(x);
            }
        }
    }

    fn data_product(&mut self) -> PResult<DataTerm> {
        let mut x = self.data_unary()?;
        loop {
            if self.eat_punct("*") {
                x = x * self.data_unary()?;
            } else if self.eat_punct("/") {
                x = x / self.data_unary()?;
            } else {
                return Ok(x);
            }
        }
    }

    fn data_unary(&mut self) -> PResult<DataTerm> {
        if self.is_punct("-") {
            let glued_literal = !self.peek_at(1).spaced
                && matches!(self.peek_at(1).tok, Tok::Int(_) | Tok::Ratio(..))
                && !matches!(self.peek_at(2).tok, Tok::Punct("^-1"));
            self.bump();
            if glued_literal {
                let c = self.literal()?;
                return Ok(DataTerm::Const(-c));
            }
            return Ok(-self.data_unary()?);
        }
        let mut x = self.data_atom()?;
        while self.eat_punct("^-1") {
            x = x.inv();
        }
        Ok(x)
    }

    fn literal(&mut self) -> PResult<Rational> {
        match self.peek().tok.clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Rational::from_integer(n))
            }
            Tok::Ratio(n, d) => {
                if d.is_zero() {
                    return self.err("zero denominator in a numeral");
                }
                self.bump();
                Ok(Rational::new(n, d))
            }
            other => self.err(format!("expected a number, found {other}")),
        }
    }

    fn data_atom(&mut self) -> PResult<DataTerm> {
        match self.peek().tok.clone() {
            Tok::Int(_) | Tok::Ratio(..) => Ok(DataTerm::Const(self.literal()?)),
            Tok::Punct("(") => {
                self.bump();
                if self.is_word("lam") {
                    let l = self.lambda()?;
                    self.expect_punct(")")?;
                    let pos = self.peek().pos;
                    self.expect_punct("(")?;
                    let args = self.data_args()?;
                    return self.apply(Callee::Lambda(Box::new(l)), args, pos);
                }
                let x = self.data()?;
                self.expect_punct(")")?;
                Ok(x)
            }
            Tok::Ident(w) if !RESERVED.contains(&w.as_str()) => {
                let pos = self.peek().pos;
                let name = self.symbol()?;
                if self.eat_punct("(") {
                    let args = self.data_args()?;
                    self.note_arity(&name, args.len(), pos)?;
                    let f = FnVar::new(name, args.len());
                    return self.apply(Callee::Fn(f), args, pos);
                }
                Ok(DataTerm::Var(name))
            }
            other => self.err(format!("expected a data term, found {other}")),
        }
    }

    /// Arguments after the opening parenthesis, up to and including `)`.
    fn data_args(&mut self) -> PResult<Vec<DataTerm>> {
        let mut args = Vec::new();
        if self.eat_punct(")") {
            return Ok(args);
        }
        loop {
            args.push(self.data()?);
            if self.eat_punct(")") {
                return Ok(args);
            }
            self.expect_punct(",")?;
        }
    }

    /// A function name must be used with one arity throughout a statement.
    fn note_arity(&mut self, name: &Symbol, n: usize, pos: Pos) -> PResult<()> {
        match self.arity.get(name) {
            Some(&m) if m != n => Err(ParseError {
                pos,
                message: format!("`{name}` takes {m} argument(s), not {n}"),
            }),
            _ => {
                self.arity.insert(name.clone(), n);
                Ok(())
            }
        }
    }

    fn apply(&self, head: Callee, args: Vec<DataTerm>, pos: Pos) -> PResult<DataTerm> {
        Application::new(head, args)
            .map(DataTerm::App)
            .map_err(|e| ParseError {
                pos,
                message: e.to_string(),
            })
    }

    fn lambda(&mut self) -> PResult<Lambda> {
        self.expect_word("lam")?;
        let params = self.symbol_list()?;
        let distinct: BTreeSet<&Symbol> = params.iter().collect();
        if distinct.len() != params.len() {
            return self.err("repeated lambda parameter");
        }
        self.expect_punct(".")?;
        let body = self.data()?;
        Ok(Lambda::new(params, body))
    }

    // ---- tuplix terms ----

    pub(crate) fn tuplix(&mut self) -> PResult<Tuplix> {
        let mut x = self.conj()?;
        while self.eat_punct("+") {
            x = Tuplix::Alt(Box::new(x), Box::new(self.conj()?));
        }
        Ok(x)
    }

    fn conj(&mut self) -> PResult<Tuplix> {
        let mut x = self.factor()?;
        while self.eat_punct("&") {
            x = Tuplix::Conj(Box::new(x), Box::new(self.factor()?));
        }
        Ok(x)
    }

    fn factor(&mut self) -> PResult<Tuplix> {
        if self.is_word("sum") {
            self.bump();
            let binders = self.symbol_list()?;
            self.expect_punct(".")?;
            let body = self.tuplix()?;
            return Ok(binders
                .into_iter()
                .rev()
                .fold(body, |p, x| Tuplix::Sum(x, Box::new(p))));
        }
        if self.is_word("def") {
            self.bump();
            let pos = self.peek().pos;
            let name = self.symbol()?;
            self.expect_punct("=")?;
            let l = self.lambda()?;
            self.note_arity(&name, l.arity(), pos)?;
            self.expect_word("in")?;
            let body = self.tuplix()?;
            let f = FnVar::new(name, l.arity());
            let gamma = Tuplix::Gamma(f.clone(), l);
            return Ok(Tuplix::SumFn(f, Box::new(Tuplix::Conj(Box::new(gamma), Box::new(body)))));
        }
        if self.is_word("sumf") {
            self.bump();
            let name = self.symbol()?;
            self.expect_punct(".")?;
            let body = self.tuplix()?;
            let arity = fn_arity(&body, &name).unwrap_or(0);
            return Ok(Tuplix::SumFn(FnVar::new(name, arity), Box::new(body)));
        }
        // `t * P`: try a data operand followed by `*`, else back off
        let save = self.i;
        if let Ok(t) = self.data_unary() {
            if self.eat_punct("*") {
                let p = self.factor()?;
                return Ok(Tuplix::Scalar(t, Box::new(p)));
            }
        }
        self.i = save;
        self.primary()
    }

    fn primary(&mut self) -> PResult<Tuplix> {
        let tok = self.peek().clone();
        match &tok.tok {
            Tok::Punct("[") => {
                self.bump();
                let t = self.data()?;
                let t = if self.eat_punct("==") {
                    t - self.data()?
                } else {
                    t
                };
                self.expect_punct("]")?;
                Ok(Tuplix::Test(t))
            }
            Tok::Punct("(") => {
                self.bump();
                let p = self.tuplix()?;
                self.expect_punct(")")?;
                Ok(p)
            }
            Tok::Punct(sign @ ("+" | "-")) => {
                self.bump();
                let name = self.symbol()?;
                let a = if *sign == "+" {
                    Attribute::plus(name)
                } else {
                    Attribute::minus(name)
                };
                self.expect_punct("(")?;
                let t = self.data()?;
                self.expect_punct(")")?;
                Ok(Tuplix::Entry(a, t))
            }
            Tok::Ident(w) => match w.as_str() {
                "eps" => {
                    self.bump();
                    Ok(Tuplix::Eps)
                }
                "null" => {
                    self.bump();
                    Ok(Tuplix::Delta)
                }
                "encap" | "clear" | "select" => {
                    self.bump();
                    self.expect_punct("{")?;
                    let set = self.attr_set("}")?;
                    let p = self.paren_tuplix()?;
                    Ok(match w.as_str() {
                        "encap" => Tuplix::Encap(set, p),
                        "clear" => Tuplix::Clear(set, p),
                        _ => Tuplix::Select(set, p),
                    })
                }
                "K" => {
                    self.bump();
                    let t = if self.eat_punct("{") {
                        let t = self.data()?;
                        self.expect_punct("}")?;
                        t
                    } else {
                        DataTerm::zero()
                    };
                    Ok(Tuplix::Kirch(t, self.paren_tuplix()?))
                }
                "zeta" => {
                    self.bump();
                    self.expect_punct("{")?;
                    let g = self.unit_ref()?;
                    self.expect_punct(";")?;
                    let set = self.attr_set("}")?;
                    Ok(Tuplix::Zeta(g, set, self.paren_tuplix()?))
                }
                "flat" => {
                    self.bump();
                    Ok(Tuplix::Flat(self.paren_tuplix()?))
                }
                "signed" => {
                    self.bump();
                    self.expect_punct("{")?;
                    let g = self.unit_ref()?;
                    self.expect_punct("}")?;
                    Ok(Tuplix::Signed(g, self.paren_tuplix()?))
                }
                "gamma" => {
                    self.bump();
                    self.expect_punct("(")?;
                    let pos = self.peek().pos;
                    let name = self.symbol()?;
                    self.expect_punct(",")?;
                    let l = self.lambda()?;
                    self.note_arity(&name, l.arity(), pos)?;
                    self.expect_punct(")")?;
                    Ok(Tuplix::Gamma(FnVar::new(name, l.arity()), l))
                }
                _ => {
                    let pos = tok.pos;
                    let (name, _) = self.ident()?;
                    if self.eat_punct("(") {
                        let a = name.parse::<Symbol>().map_err(|e| ParseError {
                            pos,
                            message: e.to_string(),
                        })?;
                        let t = self.data()?;
                        self.expect_punct(")")?;
                        return Ok(Tuplix::Entry(Attribute::flat(a), t));
                    }
                    self.reference(&name, pos)
                }
            },
            other => self.err(format!("expected a tuplix term, found {other}")),
        }
    }

    fn paren_tuplix(&mut self) -> PResult<Box<Tuplix>> {
        self.expect_punct("(")?;
        let p = self.tuplix()?;
        self.expect_punct(")")?;
        Ok(Box::new(p))
    }

    /// Possibly empty list of `a`, `+a`, `-a` up to `close`.
    fn attr_set(&mut self, close: &str) -> PResult<AttrSet> {
        let mut set = AttrSet::new();
        if self.eat_punct(close) {
            return Ok(set);
        }
        loop {
            let a = if self.eat_punct("+") {
                Attribute::plus(self.symbol()?)
            } else if self.eat_punct("-") {
                Attribute::minus(self.symbol()?)
            } else {
                Attribute::flat(self.symbol()?)
            };
            set.insert(a);
            if self.eat_punct(close) {
                return Ok(set);
            }
            self.expect_punct(",")?;
        }
    }

    fn unit_ref(&mut self) -> PResult<UnitRef> {
        let pos = self.peek().pos;
        let name = self.symbol()?;
        let Some(ws) = self.scope else {
            return Err(ParseError {
                pos,
                message: format!("unit `{name}` needs a network declaration"),
            });
        };
        ws.unit(&name).map_err(|message| ParseError { pos, message })
    }

    fn reference(&self, name: &str, pos: Pos) -> PResult<Tuplix> {
        match self.scope.and_then(|ws| ws.term(name)) {
            Some(p) => Ok(p.clone()),
            None => Err(ParseError {
                pos,
                message: format!("`{name}` is not a defined term"),
            }),
        }
    }

    // ---- statements ----

    /// Parses one statement into `ws`. On return the parser sits at the
    /// start of the next statement.
    fn statement(&mut self) -> PResult<Item> {
        let start = self.peek().pos;
        self.arity.clear();
        let stmt = if self.is_word("net") {
            self.bump();
            let (name, _) = self.ident()?;
            Item::Net(name, self.net_body()?)
        } else if self.is_word("spec") {
            self.bump();
            let unit = self.symbol()?;
            self.expect_punct("=")?;
            Item::Spec(UnitSpec::new(unit, self.tuplix()?))
        } else if self.is_word("let") {
            self.bump();
            let (name, _) = self.ident()?;
            self.expect_punct("=")?;
            Item::Let(name, self.tuplix()?)
        } else if self.is_word("option") {
            self.bump();
            let (key, pos) = self.ident()?;
            self.expect_punct("=")?;
            let value = match self.bump().tok {
                Tok::Int(n) => n.to_string(),
                Tok::Ident(s) => s,
                other => {
                    return Err(ParseError {
                        pos,
                        message: format!("expected an option value, found {other}"),
                    })
                }
            };
            Item::Option(key, value)
        } else if matches!(self.peek().tok, Tok::Ident(_)) && self.peek_at(1).tok == Tok::Punct("=") {
            let (name, _) = self.ident()?;
            self.bump();
            Item::Let(name, self.tuplix()?)
        } else {
            return self.err(format!("expected a statement, found {}", self.peek().tok));
        };
        if !(self.eat_punct(";") || self.at_end() || self.peek().line_start) {
            return self.err(format!("unexpected {} after statement starting at {start}", self.peek().tok));
        }
        Ok(stmt)
    }

    fn net_body(&mut self) -> PResult<Network> {
        let mut net = Network::new();
        self.expect_punct("{")?;
        while !self.eat_punct("}") {
            if self.is_word("unit") {
                self.bump();
                let unit = self.symbol()?;
                self.expect_punct("{")?;
                let (mut ins, mut outs) = (Vec::new(), Vec::new());
                while !self.eat_punct("}") {
                    let which = if self.is_word("in") {
                        &mut ins
                    } else if self.is_word("out") {
                        &mut outs
                    } else {
                        return self.err(format!("expected `in` or `out`, found {}", self.peek().tok));
                    };
                    self.bump();
                    self.expect_punct(":")?;
                    if !self.is_punct(";") && !self.is_punct("}") {
                        which.extend(self.symbol_list()?);
                    }
                    self.eat_punct(";");
                }
                if net.units.contains_key(&unit) {
                    return self.err(format!("unit `{unit}` declared twice"));
                }
                net.add_unit(unit, ins, outs);
            } else if self.is_word("attrs") {
                self.bump();
                self.expect_punct(":")?;
                if !self.is_punct(";") && !self.is_punct("}") {
                    net.attrs.extend(self.symbol_list()?);
                }
                self.eat_punct(";");
            } else {
                return self.err(format!("expected `unit` or `attrs`, found {}", self.peek().tok));
            }
        }
        Ok(net)
    }

    /// Skips to the next token that can start a statement on a fresh line.
    fn recover(&mut self, start: usize) {
        if self.i == start {
            self.bump();
        }
        while !self.at_end() {
            let t = self.peek();
            if t.line_start {
                let starts = match &t.tok {
                    Tok::Ident(w) if ["net", "spec", "let", "option"].contains(&w.as_str()) => true,
                    Tok::Ident(_) => self.peek_at(1).tok == Tok::Punct("="),
                    _ => false,
                };
                if starts {
                    return;
                }
            }
            if self.eat_punct(";") {
                return;
            }
            self.bump();
        }
    }
}

fn fn_arity(p: &Tuplix, name: &Symbol) -> Option<usize> {
    if let Tuplix::Gamma(f, _) = p {
        if f.name() == name {
            return Some(f.arity());
        }
    }
    let found = Cell::new(None);
    p.map_children(
        |c| {
            if found.get().is_none() {
                found.set(fn_arity(c, name));
            }
            c.clone()
        },
        |t| {
            if found.get().is_none() {
                found.set(t.fn_vars().into_iter().find(|f| f.name() == name).map(|f| f.arity()));
            }
            t.clone()
        },
    );
    found.get()
}

/// Parses a whole `.tpx` source. Statement errors are collected and parsing
/// resumes at the next statement.
pub(crate) fn parse_workspace(src: &str) -> (Workspace, Vec<ParseError>) {
    let (toks, lex_errors) = tokenize(src);
    let mut errors: Vec<ParseError> = lex_errors
        .into_iter()
        .map(|e| ParseError {
            pos: e.pos,
            message: e.message,
        })
        .collect();
    let mut ws = Workspace::default();
    let mut i = 0;
    while toks[i].tok != Tok::Eof {
        let pos = toks[i].pos;
        let result = {
            let mut p = Parser::new(&toks, Some(&ws));
            p.i = i;
            let r = p.statement();
            if r.is_err() {
                p.recover(i);
            }
            i = p.i;
            r
        };
        match result.and_then(|item| ws.add(item).map_err(|message| ParseError { pos, message })) {
            Ok(()) => {}
            Err(e) => errors.push(e),
        }
    }
    errors.sort_by_key(|e| e.pos);
    (ws, errors)
}
