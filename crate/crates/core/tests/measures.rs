mod common;

use std::collections::BTreeMap;

use num_rational::BigRational;
use proptest::prelude::*;
use relent::measures::{
    block_entropy_bounds, parry_measure, perron, pressure_equilibrium, shannon, weighted_entropy,
};
use relent::{gallery, linalg, text, MarkovMeasure, Measure, Sft, Word};

use common::{abk_nu, irreducible_sft, q, random_markov, xor_lift};

fn golden() -> Sft {
    Sft::from_matrix(&["0", "1"], &[vec![1, 1], vec![1, 0]]).unwrap()
}

fn rational_markov(x: &Sft, weights: &[u8]) -> MarkovMeasure {
    let n = x.len();
    let rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let w: Vec<i64> = (0..n)
                .map(|j| if x.allowed(i, j) { 1 + weights[(i * n + j) % weights.len()] as i64 % 5 } else { 0 })
                .collect();
            let total: i64 = w.iter().sum();
            w.into_iter().map(|v| q(v, total)).collect()
        })
        .collect();
    MarkovMeasure::from_rational(x.clone(), rows).unwrap()
}

fn marginal(dist: &BTreeMap<Word, BigRational>, drop_first: bool) -> BTreeMap<Word, BigRational> {
    let mut out: BTreeMap<Word, BigRational> = BTreeMap::new();
    for (w, p) in dist {
        let key = if drop_first { w.drop_first() } else { w.drop_last() };
        *out.entry(key).or_insert_with(|| q(0, 1)) += p;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exact_block_marginals_agree(x in irreducible_sft(4), w in proptest::collection::vec(any::<u8>(), 16), n in 1usize..=5) {
        let mu = rational_markov(&x, &w);
        let small = mu.block_distribution_exact(n).unwrap();
        let big = mu.block_distribution_exact(n + 1).unwrap();
        prop_assert_eq!(&marginal(&big, true), &small);
        prop_assert_eq!(&marginal(&big, false), &small);
        let total = small.values().fold(q(0, 1), |a, b| a + b);
        prop_assert_eq!(total, q(1, 1));
    }

    #[test]
    fn parry_is_maximal(x in irreducible_sft(5), w in proptest::collection::vec(0.0f64..1.0, 25)) {
        let parry = parry_measure(&x).unwrap();
        let log_lambda = linalg::spectral_radius(&x.adjacency_matrix()).unwrap().ln();
        prop_assert!((parry.entropy() - log_lambda).abs() < 1e-9);
        let mu = random_markov(&x, &w);
        prop_assert!(mu.entropy() <= log_lambda + 1e-9);
        prop_assert!(mu.entropy() <= (x.len() as f64).ln() + 1e-12);
    }

    #[test]
    fn variational_identity(x in irreducible_sft(4), v in proptest::collection::vec(-2.0f64..2.0, 16)) {
        let n = x.len();
        let pot: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| v[i * n + j]).collect()).collect();
        let eq = pressure_equilibrium(&x, &pot).unwrap();
        let edges = eq.state.edge_distribution();
        let integral: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| x.allowed(i, j))
            .map(|(i, j)| edges[i][j] * pot[i][j])
            .sum();
        prop_assert!((eq.pressure - eq.state.entropy() - integral).abs() < 1e-9);
        let other = random_markov(&x, &v.iter().map(|t| t.abs()).collect::<Vec<_>>());
        let e2 = other.edge_distribution();
        let int2: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| x.allowed(i, j))
            .map(|(i, j)| e2[i][j] * pot[i][j])
            .sum();
        prop_assert!(eq.pressure >= other.entropy() + int2 - 1e-9);
    }

    #[test]
    fn measure_text_round_trips(x in irreducible_sft(4), w in proptest::collection::vec(any::<u8>(), 16)) {
        let mu = rational_markov(&x, &w);
        let printed = text::format_markov(&mu);
        let again = match text::parse_measure(&printed, &x).unwrap() {
            Measure::Markov(m) => m,
            Measure::Periodic(_) => unreachable!(),
        };
        prop_assert_eq!(again.exact_transition(), mu.exact_transition());
        prop_assert_eq!(text::format_markov(&again), printed);
    }
}

#[test]
fn perron_examples() {
    let g = perron(&golden().adjacency_matrix()).unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((g.lambda - phi).abs() < 1e-12);
    let dot: f64 = g.left.iter().zip(&g.right).map(|(a, b)| a * b).sum();
    assert!((dot - 1.0).abs() < 1e-12);
    let full = perron(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
    assert!((full.lambda - 2.0).abs() < 1e-12);
    assert!((full.right[0] - full.right[1]).abs() < 1e-12);
    let swap = perron(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    assert!((swap.lambda - 1.0).abs() < 1e-12);
    assert!(perron(&[vec![1.0, 0.0], vec![0.0, 1.0]]).is_err());
}

#[test]
fn parry_examples() {
    let full = parry_measure(&Sft::full_shift(&["0", "1"]).unwrap()).unwrap();
    for row in full.transition() {
        assert!(row.iter().all(|p| (p - 0.5).abs() < 1e-12));
    }
    let cycle = Sft::from_matrix(&["0", "1"], &[vec![0, 1], vec![1, 0]]).unwrap();
    let m = parry_measure(&cycle).unwrap();
    assert!(m.entropy().abs() < 1e-12);
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((parry_measure(&golden()).unwrap().entropy() - phi.ln()).abs() < 1e-9);
}

#[test]
fn entropy_examples() {
    let full = Sft::full_shift(&["0", "1"]).unwrap();
    let half = MarkovMeasure::bernoulli(full.clone(), &[0.5, 0.5]).unwrap();
    assert!((half.entropy() - std::f64::consts::LN_2).abs() < 1e-15);
    let b = MarkovMeasure::bernoulli(full, &[0.7, 0.3]).unwrap();
    let formula = -0.7 * 0.7f64.ln() - 0.3 * 0.3f64.ln();
    assert!((b.entropy() - formula).abs() < 1e-15);
    assert!((b.entropy() - 0.6108643).abs() < 1e-7);
    let plug_in = shannon(b.block_distribution(12).unwrap().values()) / 12.0;
    assert!((plug_in - formula).abs() < 1e-12);
}

#[test]
fn block_distribution_examples() {
    let full = Sft::full_shift(&["0", "1"]).unwrap();
    let half = MarkovMeasure::bernoulli_exact(full, &[q(1, 2), q(1, 2)]).unwrap();
    let d = half.block_distribution_exact(2).unwrap();
    assert_eq!(d.len(), 4);
    assert!(d.values().all(|p| *p == q(1, 4)));
    let parry = parry_measure(&golden()).unwrap();
    let d1 = parry.block_distribution(1).unwrap();
    for (w, p) in d1 {
        assert!((p - parry.stationary()[w.symbols()[0]]).abs() < 1e-15);
    }
    // Markov ν on the ABK base at n = 3, path by path.
    let code = gallery::load("ABK").unwrap().code;
    let nu = abk_nu(&code);
    let y = code.codomain();
    let exact = nu.block_distribution_exact(3).unwrap();
    let (pt, pi) = (nu.exact_transition().unwrap(), nu.exact_stationary().unwrap());
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let by_hand = &pi[i] * &pt[i][j] * &pt[j][k];
                let w = Word::from_indices(vec![i, j, k]);
                let got = exact.get(&w).cloned().unwrap_or_else(|| q(0, 1));
                assert_eq!(got, by_hand, "{}", y.format_word(&w));
            }
        }
    }
}

#[test]
fn entropy_bound_examples() {
    let full = Sft::full_shift(&["0", "1"]).unwrap();
    let half = MarkovMeasure::bernoulli(full, &[0.5, 0.5]).unwrap();
    for n in 1..5 {
        let b = block_entropy_bounds(&half.tagged_blocks(n).unwrap(), &half.tagged_blocks(n + 1).unwrap()).unwrap();
        assert!((b.upper - std::f64::consts::LN_2).abs() < 1e-12);
        assert!((b.lower - std::f64::consts::LN_2).abs() < 1e-12);
    }
    let parry = parry_measure(&golden()).unwrap();
    let b = block_entropy_bounds(&parry.tagged_blocks(1).unwrap(), &parry.tagged_blocks(2).unwrap()).unwrap();
    assert!(b.width() < 1e-12);
    assert!((b.upper - parry.entropy()).abs() < 1e-12);

    // Image of B(0.7) under XOR: the bracket shrinks as n grows.
    let xor = gallery::load("XOR").unwrap().code;
    let mu = xor_lift(&xor, q(7, 10));
    let mut widths = Vec::new();
    let mut prev = xor.tagged_pushforward(&mu, 1).unwrap();
    for n in 1..=10 {
        let next = xor.tagged_pushforward(&mu, n + 1).unwrap();
        let b = block_entropy_bounds(&prev, &next).unwrap();
        assert!(b.lower <= b.upper + 1e-12);
        widths.push(b.width());
        prev = next;
    }
    assert!(widths.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{widths:?}");
    assert!(widths[9] < widths[0]);
}

#[test]
fn inconsistent_blocks_are_rejected() {
    let full = Sft::full_shift(&["0", "1"]).unwrap();
    let a = MarkovMeasure::bernoulli(full.clone(), &[0.5, 0.5]).unwrap();
    let b = MarkovMeasure::bernoulli(full, &[0.9, 0.1]).unwrap();
    assert!(block_entropy_bounds(&a.tagged_blocks(2).unwrap(), &b.tagged_blocks(3).unwrap()).is_err());
}

#[test]
fn weighted_entropy_examples() {
    let ln2 = std::f64::consts::LN_2;
    assert_eq!(weighted_entropy(0.4, 0.1, 0.0).unwrap(), 0.4);
    assert!((weighted_entropy(0.3, 0.3, 5.0).unwrap() - 0.3).abs() < 1e-15);
    assert!((weighted_entropy(ln2, 0.0, 1.0).unwrap() - ln2 / 2.0).abs() < 1e-15);
    assert!(weighted_entropy(0.3, 0.3, -1.0).is_err());
}

#[test]
fn pressure_examples() {
    let g = golden();
    let zero = vec![vec![0.0; 2]; 2];
    let eq = pressure_equilibrium(&g, &zero).unwrap();
    let parry = parry_measure(&g).unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((eq.pressure - phi.ln()).abs() < 1e-12);
    let c = vec![vec![0.75; 2]; 2];
    let shifted = pressure_equilibrium(&g, &c).unwrap();
    assert!((shifted.pressure - phi.ln() - 0.75).abs() < 1e-12);
    for i in 0..2 {
        for j in 0..2 {
            assert!((shifted.state.transition()[i][j] - parry.transition()[i][j]).abs() < 1e-12);
        }
    }
    let mut pot = vec![vec![0.0; 2]; 2];
    pot[0][0] = 1.0;
    let e = std::f64::consts::E;
    // Largest root of t² − e t − 1.
    let lambda = (e + (e * e + 4.0).sqrt()) / 2.0;
    assert!((pressure_equilibrium(&g, &pot).unwrap().pressure - lambda.ln()).abs() < 1e-12);
    let reducible = Sft::from_matrix(&["0", "1"], &[vec![1, 1], vec![0, 1]]).unwrap();
    assert!(pressure_equilibrium(&reducible, &zero).is_err());
}

#[test]
fn bad_measures_are_rejected() {
    let g = golden();
    assert!(MarkovMeasure::new(g.clone(), vec![vec![0.5, 0.5], vec![0.5, 0.5]]).is_err());
    assert!(MarkovMeasure::new(g.clone(), vec![vec![0.5, 0.6], vec![1.0, 0.0]]).is_err());
    let err = text::parse_measure("markov\nrows:\n1/2 1/2\n1 1\n", &g).unwrap_err();
    assert!(err.to_string().contains("forbidden") || err.to_string().contains("sum"), "{err}");
}
