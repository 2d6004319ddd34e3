use std::fmt;

use num_bigint::BigInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(BigInt),
    /// `n/m` written without spaces.
    Ratio(BigInt, BigInt),
    Punct(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Ratio(n, d) => write!(f, "`{n}/{d}`"),
            Tok::Punct(p) => write!(f, "`{p}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
    /// Whitespace or a comment separates this token from the previous one.
    pub spaced: bool,
    /// First token on its line.
    pub line_start: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub pos: Pos,
    pub message: String,
}

// longest first
const PUNCT: &[&str] = &[
    "==", "^-1", "(", ")", "[", "]", "{", "}", ",", ";", ":", ".", "&", "+", "-", "*", "/", "=",
];

/// Splits `src` into tokens. Comments run from `#` or `//` to the end of
/// the line. Unknown characters are reported and skipped.
pub fn tokenize(src: &str) -> (Vec<Token>, Vec<LexError>) {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut errors = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut spaced = true;
    let mut line_start = true;
    let peek = |i: usize| chars.get(i).copied();

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            spaced = true;
            line_start = true;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            spaced = true;
            continue;
        }
        if c == '#' || (c == '/' && peek(i + 1) == Some('/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            spaced = true;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_alphabetic() {
            // names of terms may use `_` freely; variables and attributes
            // are checked when they are turned into symbols
            while peek(i).is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                i += 1;
            }
            while peek(i) == Some('\'') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() {
            let digits = |i: &mut usize| {
                let s = *i;
                while peek(*i).is_some_and(|c| c.is_ascii_digit()) {
                    *i += 1;
                }
                chars[s..*i].iter().collect::<String>().parse::<BigInt>().expect("digits")
            };
            let n = digits(&mut i);
            if peek(i) == Some('/') && peek(i + 1).is_some_and(|c| c.is_ascii_digit()) {
                i += 1;
                let d = digits(&mut i);
                Tok::Ratio(n, d)
            } else {
                Tok::Int(n)
            }
        } else if let Some(p) = PUNCT.iter().find(|p| {
            p.chars().enumerate().all(|(k, pc)| peek(i + k) == Some(pc))
        }) {
            i += p.chars().count();
            Tok::Punct(p)
        } else {
            errors.push(LexError {
                pos,
                message: format!("unexpected character `{c}`"),
            });
            i += 1;
            col += 1;
            spaced = true;
            continue;
        };
        col += i - start;
        out.push(Token {
            tok,
            pos,
            spaced,
            line_start,
        });
        spaced = false;
        line_start = false;
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
        spaced: true,
        line_start: true,
    });
    (out, errors)
}
