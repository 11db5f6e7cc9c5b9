//! Fixtures and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use relent::measures::MarkovMeasure;
use relent::{FactorCode, Sft, Word};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `ν` on the ABK base: `a → b`, then `b` repeats with probability 1/2.
pub fn abk_nu(code: &FactorCode) -> MarkovMeasure {
    let y = code.codomain();
    let (a, b) = (y.index_of("a").unwrap(), y.index_of("b").unwrap());
    let mut p = vec![vec![q(0, 1); 2]; 2];
    p[a][b] = q(1, 1);
    p[b][a] = q(1, 2);
    p[b][b] = q(1, 2);
    MarkovMeasure::from_rational(y.clone(), p).unwrap()
}

/// The lift of `B(p, 1−p)` on the full 2-shift to its 2-block recoding,
/// with `p` the probability of symbol `0`.
pub fn xor_lift(code: &FactorCode, p: BigRational) -> MarkovMeasure {
    let x = code.domain();
    let one = q(1, 1);
    let probs = [p.clone(), &one - &p];
    let mut t = vec![vec![q(0, 1); x.len()]; x.len()];
    for i in 0..x.len() {
        for j in x.successors(i) {
            let last = x.name(j).as_bytes()[1];
            t[i][j] = probs[(last - b'0') as usize].clone();
        }
    }
    MarkovMeasure::from_rational(x.clone(), t).unwrap()
}

/// Counts `X`-words of length `|y|` with image `y` by enumeration.
pub fn brute_count(code: &FactorCode, y: &Word) -> u64 {
    let x = code.domain();
    let mut count = 0u64;
    let mut stack: Vec<(usize, usize)> = code
        .preimage(y.symbols()[0])
        .iter()
        .map(|&s| (s, 1))
        .collect();
    while let Some((s, len)) = stack.pop() {
        if len == y.len() {
            count += 1;
            continue;
        }
        for t in x.successors(s) {
            if code.image(t) == y.symbols()[len] {
                stack.push((t, len + 1));
            }
        }
    }
    count
}

/// Every word of length `n` over `alphabet` symbols, allowed or not.
pub fn all_strings(alphabet: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..alphabet).map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}

/// Mutual-reachability classes that carry a cycle, as sorted vertex sets.
pub fn recurrent_classes(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = succ.len();
    let mut reach = vec![vec![false; n]; n];
    for s in 0..n {
        let mut stack: Vec<usize> = succ[s].clone();
        while let Some(v) = stack.pop() {
            if !reach[s][v] {
                reach[s][v] = true;
                stack.extend(succ[v].iter().copied());
            }
        }
    }
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for s in 0..n {
        if seen[s] || !reach[s][s] {
            continue;
        }
        let class: Vec<usize> = (0..n).filter(|&v| reach[s][v] && reach[v][s]).collect();
        class.iter().for_each(|&v| seen[v] = true);
        classes.push(class);
    }
    classes
}

/// An irreducible SFT on up to `max` symbols: a Hamiltonian cycle plus
/// random extra edges.
pub fn irreducible_sft(max: usize) -> impl Strategy<Value = Sft> {
    (2..=max)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * n)))
        .prop_map(|(n, extra)| {
            let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
            let m: Vec<Vec<u8>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| u8::from(j == (i + 1) % n || extra[i * n + j]))
                        .collect()
                })
                .collect();
            Sft::from_matrix(&names, &m).unwrap()
        })
}

/// A random stochastic matrix supported exactly on the adjacency of `x`.
pub fn random_markov(x: &Sft, weights: &[f64]) -> MarkovMeasure {
    let n = x.len();
    let t: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let row: Vec<f64> = (0..n)
                .map(|j| if x.allowed(i, j) { 0.05 + weights[(i * n + j) % weights.len()] } else { 0.0 })
                .collect();
            let s: f64 = row.iter().sum();
            row.into_iter().map(|v| v / s).collect()
        })
        .collect();
    MarkovMeasure::new(x.clone(), t).unwrap()
}

/// A random 1-block code from an irreducible `X` onto the smallest 1-step
/// SFT containing its image.
pub fn random_code() -> impl Strategy<Value = FactorCode> {
    irreducible_sft(5)
        .prop_flat_map(|x| {
            let n = x.len();
            (Just(x), 1..=n.min(3), proptest::collection::vec(0usize..3, n))
        })
        .prop_map(|(x, k, labels)| {
            let map: Vec<usize> = (0..x.len()).map(|i| if i < k { i } else { labels[i] % k }).collect();
            let names: Vec<String> = (0..k).map(|i| format!("y{i}")).collect();
            let mut m = vec![vec![0u8; k]; k];
            for (u, v) in x.edges() {
                m[map[u]][map[v]] = 1;
            }
            let y = Sft::from_matrix(&names, &m).unwrap();
            FactorCode::new(x, y, map).unwrap()
        })
}
