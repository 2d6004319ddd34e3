//! The `.tpx` language: lexer, parser and printer.

mod lexer;
mod parser;
mod printer;

use std::fmt;

pub use lexer::{tokenize, LexError, Pos, Tok, Token};

use crate::calculus::Tuplix;
use crate::meadow::DataTerm;
use crate::workspace::Workspace;
use parser::Parser;

pub(crate) use parser::parse_workspace;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

fn lex(src: &str) -> Result<Vec<Token>, Vec<ParseError>> {
    let (toks, errors) = tokenize(src);
    if errors.is_empty() {
        Ok(toks)
    } else {
        Err(errors
            .into_iter()
            .map(|e| ParseError {
                pos: e.pos,
                message: e.message,
            })
            .collect())
    }
}

pub fn parse_data(src: &str) -> Result<DataTerm, Vec<ParseError>> {
    let toks = lex(src)?;
    let mut p = Parser::new(&toks, None);
    let t = p.data().map_err(|e| vec![e])?;
    p.finish().map_err(|e| vec![e])?;
    Ok(t)
}

/// A standalone tuplix term; names of other terms and units are unknown.
pub fn parse_tuplix(src: &str) -> Result<Tuplix, Vec<ParseError>> {
    parse_term(src, None)
}

/// A tuplix term that may refer to the terms and units of `ws`.
pub fn parse_tuplix_in(src: &str, ws: &Workspace) -> Result<Tuplix, Vec<ParseError>> {
    parse_term(src, Some(ws))
}

fn parse_term(src: &str, ws: Option<&Workspace>) -> Result<Tuplix, Vec<ParseError>> {
    let toks = lex(src)?;
    let mut p = Parser::new(&toks, ws);
    let t = p.tuplix().map_err(|e| vec![e])?;
    p.finish().map_err(|e| vec![e])?;
    Ok(t)
}
