use std::fmt;

use crate::calculus::{AttrSet, Tuplix};

// binding levels: 0 open (sum, def, sumf run to the end), 1 `+`, 2 `&`,
// 3 scalar, 4 primary
fn level(p: &Tuplix) -> u8 {
    match p {
        Tuplix::Sum(..) | Tuplix::SumFn(..) => 0,
        Tuplix::Alt(..) => 1,
        Tuplix::Conj(..) => 2,
        Tuplix::Scalar(..) => 3,
        _ => 4,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, p: &Tuplix, min: u8) -> fmt::Result {
    if level(p) < min {
        write!(f, "(")?;
        write_tuplix(f, p)?;
        write!(f, ")")
    } else {
        write_tuplix(f, p)
    }
}

fn write_set(f: &mut fmt::Formatter<'_>, set: &AttrSet) -> fmt::Result {
    for (i, a) in set.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

fn write_tuplix(f: &mut fmt::Formatter<'_>, p: &Tuplix) -> fmt::Result {
    match p {
        Tuplix::Eps => write!(f, "eps"),
        Tuplix::Delta => write!(f, "null"),
        Tuplix::Test(t) => write!(f, "[{t}]"),
        Tuplix::Entry(a, t) => write!(f, "{a}({t})"),
        Tuplix::Alt(x, y) => {
            write_at(f, x, 1)?;
            write!(f, " + ")?;
            write_at(f, y, 2)
        }
        Tuplix::Conj(x, y) => {
            write_at(f, x, 2)?;
            write!(f, " & ")?;
            write_at(f, y, 3)
        }
        Tuplix::Sum(x, body) => {
            write!(f, "sum {x}")?;
            let mut body = body.as_ref();
            while let Tuplix::Sum(y, inner) = body {
                write!(f, ", {y}")?;
                body = inner;
            }
            write!(f, " . ")?;
            write_tuplix(f, body)
        }
        Tuplix::SumFn(fv, body) => {
            if let Tuplix::Conj(g, rest) = body.as_ref() {
                if let Tuplix::Gamma(h, l) = g.as_ref() {
                    if h == fv {
                        write!(f, "def {} = {l} in ", fv.name())?;
                        return write_tuplix(f, rest);
                    }
                }
            }
            write!(f, "sumf {} . ", fv.name())?;
            write_tuplix(f, body)
        }
        Tuplix::Scalar(t, body) => {
            if t.is_atomic() {
                write!(f, "{t} * ")?;
            } else {
                write!(f, "({t}) * ")?;
            }
            write_at(f, body, 3)
        }
        Tuplix::Clear(set, body) | Tuplix::Select(set, body) | Tuplix::Encap(set, body) => {
            let op = match p {
                Tuplix::Clear(..) => "clear",
                Tuplix::Select(..) => "select",
                _ => "encap",
            };
            write!(f, "{op}{{")?;
            write_set(f, set)?;
            write!(f, "}}(")?;
            write_tuplix(f, body)?;
            write!(f, ")")
        }
        Tuplix::Kirch(t, body) => {
            if t.is_const_zero() {
                write!(f, "K(")?;
            } else {
                write!(f, "K{{{t}}}(")?;
            }
            write_tuplix(f, body)?;
            write!(f, ")")
        }
        Tuplix::Zeta(g, set, body) => {
            write!(f, "zeta{{{}; ", g.name)?;
            write_set(f, set)?;
            write!(f, "}}(")?;
            write_tuplix(f, body)?;
            write!(f, ")")
        }
        Tuplix::Flat(body) => {
            write!(f, "flat(")?;
            write_tuplix(f, body)?;
            write!(f, ")")
        }
        Tuplix::Signed(g, body) => {
            write!(f, "signed{{{}}}(", g.name)?;
            write_tuplix(f, body)?;
            write!(f, ")")
        }
        Tuplix::Gamma(fv, l) => write!(f, "gamma({}, {l})", fv.name()),
    }
}

impl fmt::Display for Tuplix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuplix(f, self)
    }
}
