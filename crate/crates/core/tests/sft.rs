mod common;

use num_bigint::BigUint;
use proptest::prelude::*;
use relent::{gallery, text, PeriodicOrbit, Sft, Word};

use common::{all_strings, irreducible_sft, recurrent_classes};

fn any_sft(max: usize) -> impl Strategy<Value = Sft> {
    (1..=max)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * n)))
        .prop_map(|(n, bits)| {
            let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let m: Vec<Vec<u8>> = (0..n)
                .map(|i| (0..n).map(|j| u8::from(bits[i * n + j])).collect())
                .collect();
            Sft::from_matrix(&names, &m).unwrap()
        })
}

fn brute_word_count(x: &Sft, n: usize) -> usize {
    all_strings(x.len(), n)
        .into_iter()
        .filter(|w| w.windows(2).all(|p| x.allowed(p[0], p[1])))
        .count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn word_counts_match_enumeration(x in irreducible_sft(3), n in 1usize..=10) {
        let brute = brute_word_count(&x, n);
        prop_assert_eq!(x.word_count(n), BigUint::from(brute));
        prop_assert_eq!(x.enumerate_words(n).unwrap().len(), brute);
    }

    #[test]
    fn higher_block_shifts_counts(x in irreducible_sft(4), k in 2usize..=3, n in 1usize..=8) {
        let hb = x.higher_block(k).unwrap();
        prop_assert_eq!(hb.sft.word_count(n), x.word_count(n + k - 1));
    }

    #[test]
    fn components_partition_in_topological_order(x in any_sft(6)) {
        let comps = x.strongly_connected_components();
        let mut owner = vec![usize::MAX; x.len()];
        for (c, comp) in comps.iter().enumerate() {
            for &v in &comp.vertices {
                prop_assert_eq!(owner[v], usize::MAX);
                owner[v] = c;
            }
        }
        prop_assert!(owner.iter().all(|&c| c != usize::MAX));
        for (u, v) in x.edges() {
            prop_assert!(owner[u] <= owner[v], "edge {}->{} goes backwards", u, v);
        }
        let oracle = recurrent_classes(&x.successor_lists());
        prop_assert_eq!(comps.iter().filter(|c| !c.trivial).count(), oracle.len());
    }

    #[test]
    fn text_format_round_trips(x in any_sft(5)) {
        let printed = text::format_sft(&x);
        let again = text::parse_sft(&printed).unwrap();
        prop_assert_eq!(&again, &x);
        prop_assert_eq!(text::format_sft(&again), printed);
    }

    #[test]
    fn periodic_orbits_are_primitive_and_distinct(x in irreducible_sft(3), p in 1usize..=6) {
        let orbits = x.periodic_orbits(p).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for o in &orbits {
            let b = o.block().symbols().to_vec();
            let n = b.len();
            prop_assert!(x.allowed(b[n - 1], b[0]));
            prop_assert!((1..n).all(|d| n % d != 0 || b[d..] != b[..n - d] ));
            prop_assert!(seen.insert(o.canonical().block().symbols().to_vec()));
        }
    }
}

#[test]
fn validate_examples() {
    let golden = Sft::from_matrix(&["0", "1"], &[vec![1, 1], vec![1, 0]]).unwrap();
    assert!(golden.validate().is_clean());
    let stranded = Sft::from_matrix(&["0", "1"], &[vec![1, 1], vec![0, 0]]).unwrap();
    let d = stranded.validate();
    assert!(d.is_valid() && !d.is_clean());
    assert!(d.warnings.iter().any(|w| w.message.contains("stranded")));
    assert!(Sft::full_shift(&["0", "1"]).unwrap().validate().is_clean());
}

#[test]
fn irreducibility_examples() {
    let golden = Sft::from_matrix(&["0", "1"], &[vec![1, 1], vec![1, 0]]).unwrap();
    assert!(golden.is_irreducible().unwrap());
    let loops = Sft::from_matrix(&["0", "1"], &[vec![1, 0], vec![0, 1]]).unwrap();
    assert!(!loops.is_irreducible().unwrap());
    assert!(gallery::load("EX5").unwrap().x.is_irreducible().unwrap());
}

#[test]
fn component_examples() {
    let joined = Sft::from_matrix(&["0", "1"], &[vec![1, 1], vec![0, 1]]).unwrap();
    let comps = joined.strongly_connected_components();
    assert_eq!(comps.len(), 2);
    assert!(comps.iter().all(|c| !c.trivial));
    let golden = Sft::from_matrix(&["0", "1"], &[vec![1, 1], vec![1, 0]]).unwrap();
    assert_eq!(golden.strongly_connected_components().len(), 1);
}

#[test]
fn enumeration_examples() {
    let golden = Sft::from_matrix(&["0", "1"], &[vec![1, 1], vec![1, 0]]).unwrap();
    let words: Vec<String> = golden
        .enumerate_words(3)
        .unwrap()
        .iter()
        .map(|w| golden.format_word(w).replace(' ', ""))
        .collect();
    assert_eq!(words, ["000", "001", "010", "100", "101"]);
    assert_eq!(Sft::full_shift(&["0", "1"]).unwrap().enumerate_words(2).unwrap().len(), 4);
    assert_eq!(golden.enumerate_words(1).unwrap().len(), 2);
    assert!(golden.enumerate_words_with_cap(30, 1000).is_err());
}

#[test]
fn higher_block_examples() {
    let full = Sft::full_shift(&["0", "1"]).unwrap();
    let hb = full.higher_block(2).unwrap();
    assert_eq!(hb.sft.len(), 4);
    assert_eq!(hb.sft.edges().len(), 8);
    let golden = Sft::from_matrix(&["0", "1"], &[vec![1, 1], vec![1, 0]]).unwrap();
    assert_eq!(golden.higher_block(2).unwrap().sft.len(), 3);
}

#[test]
fn periodic_orbit_examples() {
    let golden = Sft::from_matrix(&["0", "1"], &[vec![1, 1], vec![1, 0]]).unwrap();
    let orbits: Vec<Vec<usize>> = golden
        .periodic_orbits(2)
        .unwrap()
        .iter()
        .map(|o| o.block().symbols().to_vec())
        .collect();
    assert_eq!(orbits, vec![vec![0], vec![0, 1]]);
    let full = Sft::full_shift(&["0", "1"]).unwrap();
    assert_eq!(full.periodic_orbits(1).unwrap().len(), 2);
    let cycle = Sft::from_matrix(&["0", "1"], &[vec![0, 1], vec![1, 0]]).unwrap();
    assert!(cycle.periodic_orbits(1).unwrap().is_empty());
    assert!(PeriodicOrbit::new(&golden, Word::from_indices(vec![0, 0])).is_err());
}
