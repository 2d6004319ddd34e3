mod common;

use common::gen::{atoms, by_depth, by_size, random_closed};
use common::oracle::{check_simplify, denote};
use common::verdict;
use tuplix::calculus::{normalize, Verdict};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tuplix::Tuplix;

fn check_all(terms: impl IntoIterator<Item = Tuplix>) {
    let failures: Vec<String> = terms
        .into_iter()
        .filter_map(|p| check_simplify(&p).err())
        .take(10)
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn corpus_sizes() {
    assert_eq!(atoms().len(), 22);
    // 22 + 2*22^2 + 4*22^3
    assert_eq!(by_size(&atoms(), 5).len(), 22 + 968 + 42_592 * 2);
    // d(n) = 2 + 2*d(n-1)^2 from d(1) = 2
    assert_eq!(by_depth(&atoms()[..2], 3).len(), 2 + 2 * 10 * 10);
}

#[test]
fn simplify_matches_oracle_on_terms_up_to_three_nodes() {
    check_all(by_size(&atoms(), 3));
}

#[test]
fn simplify_matches_oracle_on_random_terms() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    check_all((0..2000).map(|_| random_closed(&mut rng, 6)));
}

#[test]
fn comparison_agrees_with_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let terms: Vec<Tuplix> = (0..300).map(|_| random_closed(&mut rng, 3)).collect();
    let forms: Vec<_> = terms.iter().map(|p| (normalize(p).unwrap(), denote(p).unwrap())).collect();
    let mut decided = 0;
    for (i, (a, da)) in forms.iter().enumerate() {
        for (b, db) in &forms[i..i + 20.min(forms.len() - i)] {
            match verdict(a, b) {
                Verdict::Equal => assert_eq!(da, db, "`{a}` vs `{b}`"),
                Verdict::NotEqual(_) => assert_ne!(da, db, "`{a}` vs `{b}`"),
                Verdict::Unknown(_) => continue,
            }
            decided += 1;
        }
    }
    // closed terms are always decided
    assert_eq!(decided, forms.iter().enumerate().map(|(i, _)| 20.min(forms.len() - i)).sum::<usize>());
}
