//! Closed term corpora.

use rand::Rng;
use tuplix::calculus::{Attribute, Tuplix};
use tuplix::DataTerm;

pub const ATTRS: [&str; 3] = ["a", "b", "c"];

/// `eps`, `null`, `[c]` and `a(c)` for the three attributes, `c` in -2..2.
pub fn atoms() -> Vec<Tuplix> {
    let mut out = vec![Tuplix::Eps, Tuplix::Delta];
    for c in -2..=2 {
        out.push(Tuplix::Test(DataTerm::int(c)));
    }
    for a in ATTRS {
        for c in -2..=2 {
            out.push(Tuplix::Entry(Attribute::flat(a), DataTerm::int(c)));
        }
    }
    out
}

fn both(x: &Tuplix, y: &Tuplix) -> [Tuplix; 2] {
    [
        Tuplix::Conj(Box::new(x.clone()), Box::new(y.clone())),
        Tuplix::Alt(Box::new(x.clone()), Box::new(y.clone())),
    ]
}

/// Every term over `atoms` with `&` and `+` and at most `nodes` nodes.
pub fn by_size(atoms: &[Tuplix], nodes: usize) -> Vec<Tuplix> {
    // sized[n]: terms with exactly n nodes (n odd)
    let mut sized: Vec<Vec<Tuplix>> = vec![Vec::new(); nodes + 1];
    if nodes >= 1 {
        sized[1] = atoms.to_vec();
    }
    for n in (3..=nodes).step_by(2) {
        let mut here = Vec::new();
        for left in (1..n - 1).step_by(2) {
            let right = n - 1 - left;
            for x in &sized[left] {
                for y in &sized[right] {
                    here.extend(both(x, y));
                }
            }
        }
        sized[n] = here;
    }
    sized.into_iter().flatten().collect()
}

/// Every term over `atoms` with `&` and `+` of depth at most `depth`
/// (an atom has depth 1).
pub fn by_depth(atoms: &[Tuplix], depth: usize) -> Vec<Tuplix> {
    let mut all = atoms.to_vec();
    for _ in 1..depth {
        let mut next = atoms.to_vec();
        for x in &all {
            for y in &all {
                next.extend(both(x, y));
            }
        }
        all = next;
    }
    all
}

/// A random closed term of depth at most `depth` over [`atoms`].
pub fn random_closed(rng: &mut impl Rng, depth: usize) -> Tuplix {
    let atoms = atoms();
    fn go(rng: &mut impl Rng, atoms: &[Tuplix], depth: usize) -> Tuplix {
        if depth <= 1 || rng.gen_bool(0.25) {
            return atoms[rng.gen_range(0..atoms.len())].clone();
        }
        let x = go(rng, atoms, depth - 1);
        let y = go(rng, atoms, depth - 1);
        let [c, a] = both(&x, &y);
        if rng.gen_bool(0.5) {
            c
        } else {
            a
        }
    }
    go(rng, &atoms, depth)
}

/// A random payload for ground axiom instances.
pub fn random_constant(rng: &mut impl Rng) -> String {
    const CHOICES: [&str; 8] = ["0", "1", "2", "(-1)", "(-2)", "(1/2)", "(-3/2)", "3"];
    CHOICES[rng.gen_range(0..CHOICES.len())].to_string()
}

/// Like [`random_closed`] but some payloads are the variable `v`.
pub fn random_open_in(rng: &mut impl Rng, depth: usize, v: &str) -> Tuplix {
    let p = random_closed(rng, depth);
    let mut flip = rng.gen::<u64>();
    fn go(p: &Tuplix, v: &str, flip: &mut u64) -> Tuplix {
        match p {
            Tuplix::Entry(a, t) => {
                *flip = flip.rotate_left(1);
                let t = if *flip & 1 == 1 {
                    DataTerm::var(v) + t.clone()
                } else {
                    t.clone()
                };
                Tuplix::Entry(a.clone(), t)
            }
            _ => p.map_children(|c| go(c, v, flip), DataTerm::clone),
        }
    }
    go(&p, v, &mut flip)
}

/// Exhaustive small terms, every depth-4 term over a few two-atom
/// alphabets, and `random` random terms of depth up to 6.
pub fn oracle_corpus(rng: &mut impl Rng, random: usize) -> Vec<Tuplix> {
    let entry = |a: &str, c: i64| Tuplix::Entry(Attribute::flat(a), DataTerm::int(c));
    let mut out = by_size(&atoms(), 5);
    for pair in [
        [entry("a", 1), entry("a", -1)],
        [entry("a", 2), entry("b", -2)],
        [Tuplix::Delta, Tuplix::Test(DataTerm::int(0))],
    ] {
        out.extend(by_depth(&pair, 4));
    }
    out.extend((0..random).map(|_| random_closed(rng, 6)));
    out
}
