//! Brute-force meaning of closed terms, written without the engine.
//!
//! A closed summation-free term denotes a finite set of tuplices, each a map
//! from attributes to rationals. `a(0)` is kept: an entry with value zero is
//! not the empty tuplix.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};
use tuplix::calculus::{Attribute, BasicForm, Tuplix};
use tuplix::DataTerm;

pub type Row = BTreeMap<Attribute, BigRational>;
pub type Denotation = BTreeSet<Row>;

/// Value of a closed data term in the zero-totalized rationals.
pub fn value(t: &DataTerm) -> Option<BigRational> {
    Some(match t {
        DataTerm::Const(c) => c.clone(),
        DataTerm::Var(_) | DataTerm::App(_) => return None,
        DataTerm::Neg(a) => -value(a)?,
        DataTerm::Add(a, b) => value(a)? + value(b)?,
        DataTerm::Mul(a, b) => value(a)? * value(b)?,
        DataTerm::Inv(a) => {
            let v = value(a)?;
            if v.is_zero() {
                v
            } else {
                BigRational::one() / v
            }
        }
    })
}

fn merge(x: &Row, y: &Row) -> Row {
    let mut out = x.clone();
    for (a, v) in y {
        *out.entry(a.clone()).or_insert_with(BigRational::zero) += v;
    }
    out
}

pub fn denote(p: &Tuplix) -> Option<Denotation> {
    use Tuplix::*;
    Some(match p {
        Eps => [Row::new()].into(),
        Delta => Denotation::new(),
        Test(t) => {
            if value(t)?.is_zero() {
                [Row::new()].into()
            } else {
                Denotation::new()
            }
        }
        Entry(a, t) => [[(a.clone(), value(t)?)].into()].into(),
        Conj(x, y) => {
            let (dx, dy) = (denote(x)?, denote(y)?);
            dx.iter()
                .flat_map(|r| dy.iter().map(move |s| merge(r, s)))
                .collect()
        }
        Alt(x, y) => denote(x)?.union(&denote(y)?).cloned().collect(),
        Scalar(t, x) => {
            let c = value(t)?;
            denote(x)?
                .into_iter()
                .map(|r| r.into_iter().map(|(a, v)| (a, v * &c)).collect())
                .collect()
        }
        Clear(set, x) => denote(x)?
            .into_iter()
            .map(|r| r.into_iter().filter(|(a, _)| !set.contains(a)).collect())
            .collect(),
        Select(set, x) => denote(x)?
            .into_iter()
            .map(|r| r.into_iter().filter(|(a, _)| set.contains(a)).collect())
            .collect(),
        Encap(set, x) => denote(x)?
            .into_iter()
            .filter(|r| r.iter().all(|(a, v)| !set.contains(a) || v.is_zero()))
            .map(|r| r.into_iter().filter(|(a, _)| !set.contains(a)).collect())
            .collect(),
        _ => return None,
    })
}

/// Meaning of a basic form without binders or open tests.
pub fn denote_form(b: &BasicForm) -> Option<Denotation> {
    let mut out = Denotation::new();
    for alt in b.alternatives() {
        if !alt.binders.is_empty() {
            return None;
        }
        if let Some(t) = &alt.test {
            if !value(&t.value())?.is_zero() {
                continue;
            }
        }
        let mut row = Row::new();
        for (a, t) in &alt.entries {
            row.insert(a.clone(), value(t)?);
        }
        out.insert(row);
    }
    Some(out)
}

/// Reads a simplified closed term back as rows, insisting on the canonical
/// shape: `null`, or alternatives without tests, each a conjunction of
/// entries with strictly increasing attributes and constant payloads, the
/// alternatives pairwise distinct.
pub fn canonical_rows(p: &Tuplix) -> Result<Vec<Row>, String> {
    if *p == Tuplix::Delta {
        return Ok(Vec::new());
    }
    let mut alts = Vec::new();
    let mut cur = p;
    while let Tuplix::Alt(x, y) = cur {
        alts.push(y.as_ref());
        cur = x;
    }
    alts.push(cur);
    alts.reverse();
    let mut rows = Vec::new();
    for alt in alts {
        let mut row = Row::new();
        if *alt != Tuplix::Eps {
            for part in alt.conjuncts() {
                let Tuplix::Entry(a, t) = &part else {
                    return Err(format!("`{part}` in `{p}` is not an entry"));
                };
                let Some(v) = value(t) else {
                    return Err(format!("payload `{t}` is not closed"));
                };
                if !matches!(t, DataTerm::Const(_)) {
                    return Err(format!("payload `{t}` is not a literal"));
                }
                if row.keys().next_back().is_some_and(|last| last >= a) {
                    return Err(format!("attributes out of order in `{alt}`"));
                }
                row.insert(a.clone(), v);
            }
        }
        if rows.contains(&row) {
            return Err(format!("repeated alternative `{alt}`"));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// `simplify(p)` is canonical and means what `p` means.
pub fn check_simplify(p: &Tuplix) -> Result<(), String> {
    let expected = denote(p).ok_or_else(|| format!("`{p}` is not closed"))?;
    let s = tuplix::calculus::simplify(p);
    let rows = canonical_rows(&s)?;
    let got: Denotation = rows.iter().cloned().collect();
    if got != expected {
        return Err(format!("`{p}` simplifies to `{s}`, which means something else"));
    }
    Ok(())
}
