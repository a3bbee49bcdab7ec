use std::sync::OnceLock;

use proptest::prelude::*;

use cayley_core::corpus::{generate_tables, CorpusSpec};
use cayley_core::element::{act, canonicalize, section, tau, EnumerationResult};
use cayley_core::io::{corpus_line, parse_corpus_line, parse_table, print_table};
use cayley_core::semigroup::{find_isomorphism, named_family};
use cayley_core::{check_associativity, direct_product, enumerate, equal, GenWord, MulTable};

/// Every labeled table of order at most 3.
fn corpus() -> &'static [MulTable] {
    static CORPUS: OnceLock<Vec<MulTable>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        (1..=3)
            .flat_map(|n| generate_tables(CorpusSpec::labeled(n)).unwrap())
            .collect()
    })
}

fn table() -> impl Strategy<Value = MulTable> {
    (0..corpus().len()).prop_map(|i| corpus()[i].clone())
}

fn word(n: usize, max_len: usize) -> impl Strategy<Value = GenWord> {
    prop::collection::vec(0..n, 1..=max_len).prop_map(|w| GenWord::new(w).unwrap())
}

fn table_and_words(max_len: usize) -> impl Strategy<Value = (MulTable, GenWord, GenWord, Vec<usize>)> {
    table().prop_flat_map(move |s| {
        let n = s.order();
        (Just(s), word(n, max_len), word(n, max_len), prop::collection::vec(0..n, 0..8))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lambda_maps_compose_contravariantly(s in table(), a in 0usize..3, b in 0usize..3) {
        let (a, b) = (a % s.order(), b % s.order());
        prop_assert_eq!(s.lambda_map(a).then(&s.lambda_map(b)), s.lambda_map(s.mul(b, a)));
    }

    #[test]
    fn tau_is_the_reversed_product(s in table(), a in 0usize..3, b in 0usize..3) {
        let (a, b) = (a % s.order(), b % s.order());
        let w = GenWord::new(vec![a, b]).unwrap();
        prop_assert_eq!(tau(&s, &w), s.lambda_map(s.mul(b, a)));
    }

    #[test]
    fn action_unfolds_through_sections((s, w, _, prefix) in table_and_words(4)) {
        let out = act(&s, &w, &prefix);
        prop_assert_eq!(out.len(), prefix.len());
        if let Some((&x, rest)) = prefix.split_first() {
            prop_assert_eq!(out[0], tau(&s, &w).apply(x));
            prop_assert_eq!(&out[1..], &act(&s, &section(&s, &w, x), rest)[..]);
        }
    }

    #[test]
    fn act_is_a_right_action((s, u, v, prefix) in table_and_words(3)) {
        let first = act(&s, &u, &prefix);
        prop_assert_eq!(act(&s, &u.concat(&v), &prefix), act(&s, &v, &first));
    }

    #[test]
    fn generator_states_equal_iff_lambda_maps_equal(s in table(), a in 0usize..3, b in 0usize..3) {
        let (a, b) = (a % s.order(), b % s.order());
        prop_assert_eq!(
            equal(&s, &GenWord::single(a), &GenWord::single(b)),
            s.lambda_map(a) == s.lambda_map(b)
        );
    }

    #[test]
    fn canonical_forms_decide_equality((s, u, v, _) in table_and_words(4)) {
        let same = canonicalize(&s, &u).unwrap() == canonicalize(&s, &v).unwrap();
        prop_assert_eq!(same, equal(&s, &u, &v));
        prop_assert_eq!(canonicalize(&s, &u).unwrap().act(&[0, 0, 0]), act(&s, &u, &[0, 0, 0]));
    }

    #[test]
    fn text_formats_round_trip(s in table()) {
        prop_assert_eq!(&parse_table(&print_table(&s)).unwrap(), &s);
        prop_assert_eq!(&parse_corpus_line(&corpus_line(&s)).unwrap(), &s);
    }

    #[test]
    fn direct_products_are_associative(s in table(), t in table()) {
        let p = direct_product(&s, &t).unwrap();
        prop_assert_eq!(p.order(), s.order() * t.order());
        prop_assert!(check_associativity(&p.rows()).unwrap());
        let swapped = direct_product(&t, &s).unwrap();
        prop_assert!(find_isomorphism(&p, &swapped).is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_cayley_tables_match_word_products(s in table()) {
        if let EnumerationResult::Closed { words, cayley, generator_map, .. } = enumerate(&s, 200).unwrap() {
            prop_assert!(cayley.is_associative());
            for (a, &g) in generator_map.iter().enumerate() {
                prop_assert!(equal(&s, &GenWord::single(a), &words[g]));
            }
            for i in 0..words.len() {
                for j in 0..words.len() {
                    prop_assert!(equal(&s, &words[i].concat(&words[j]), &words[cayley.mul(i, j)]));
                }
            }
        }
    }

    #[test]
    fn relabeling_preserves_isomorphism_class(
        (s, perm) in table().prop_flat_map(|s| {
            let perm = Just(s.elements().collect::<Vec<_>>()).prop_shuffle();
            (Just(s), perm)
        })
    ) {
        let t = s.relabel(&perm);
        let iso = find_isomorphism(&s, &t).unwrap();
        for (a, b) in s.elements().flat_map(|a| s.elements().map(move |b| (a, b))) {
            prop_assert_eq!(iso[s.mul(a, b)], t.mul(iso[a], iso[b]));
        }
    }
}

#[test]
fn named_families_are_associative() {
    for spec in ["left_zero:4", "right_zero:4", "null:4", "cyclic:5", "s3", "rectangular_band:2x3", "ijkf"] {
        let s = named_family(spec).unwrap();
        assert!(check_associativity(&s.rows()).unwrap(), "{spec}");
    }
}
