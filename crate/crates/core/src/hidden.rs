//! Hidden Markov presentations of stationary processes on an SFT.
//!
//! A [`HiddenChain`] is a finite stationary Markov chain on states `z`
//! together with an emission `ζ(z)` in the alphabet of `X`. Markov measures
//! are the case `ζ = id`; renewal processes such as relatively maximal
//! measures over a singleton clump need more states.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::MarkovMeasure;
use crate::sft::{Sft, Word, DEFAULT_WORD_CAP};

const ROW_TOLERANCE: f64 = 1e-12;
const STATIONARY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct HiddenChain {
    base: Sft,
    emission: Vec<usize>,
    stationary: Vec<f64>,
    transitions: Vec<Vec<(usize, f64)>>,
}

impl HiddenChain {
    /// Checks stochastic rows, stationarity, and that every transition with
    /// mass emits an allowed `X`-edge.
    pub fn new(
        base: Sft,
        emission: Vec<usize>,
        stationary: Vec<f64>,
        transitions: Vec<Vec<(usize, f64)>>,
    ) -> Result<Self> {
        let n = emission.len();
        if n == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if stationary.len() != n || transitions.len() != n {
            return Err(Error::Shape(format!("hidden chain with {n} states")));
        }
        if let Some(&s) = emission.iter().find(|&&s| s >= base.len()) {
            return Err(Error::InvalidArgument(format!("emission {s} out of range")));
        }
        let mut image = vec![0.0; n];
        for (z, row) in transitions.iter().enumerate() {
            let mut sum = 0.0;
            for &(t, p) in row {
                if t >= n || !(p >= 0.0) {
                    return Err(Error::InvalidMeasure(format!("bad transition from state {z}")));
                }
                if p > 0.0 && !base.allowed(emission[z], emission[t]) {
                    return Err(Error::InvalidMeasure(format!(
                        "state {z} -> {t} emits forbidden {} -> {}",
                        base.name(emission[z]),
                        base.name(emission[t])
                    )));
                }
                sum += p;
                image[t] += stationary[z] * p;
            }
            if (sum - 1.0).abs() > ROW_TOLERANCE {
                return Err(Error::InvalidMeasure(format!("row {z} sums to {sum}")));
            }
        }
        let total: f64 = stationary.iter().sum();
        let dev = image
            .iter()
            .zip(&stationary)
            .map(|(a, b)| (a - b).abs())
            .fold((total - 1.0).abs(), f64::max);
        if dev > STATIONARY_TOLERANCE || stationary.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::InvalidMeasure(format!(
                "initial vector is not a stationary distribution (deviation {dev:e})"
            )));
        }
        Ok(HiddenChain {
            base,
            emission,
            stationary,
            transitions,
        })
    }

    pub fn from_markov(mu: &MarkovMeasure) -> Self {
        let transitions = mu
            .transition()
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0.0)
                    .map(|(j, &p)| (j, p))
                    .collect()
            })
            .collect();
        HiddenChain {
            base: mu.base().clone(),
            emission: (0..mu.base().len()).collect(),
            stationary: mu.stationary().to_vec(),
            transitions,
        }
    }

    pub fn base(&self) -> &Sft {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.emission.len()
    }

    pub fn is_empty(&self) -> bool {
        self.emission.is_empty()
    }

    pub fn emission(&self, z: usize) -> usize {
        self.emission[z]
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    pub fn transitions(&self, z: usize) -> &[(usize, f64)] {
        &self.transitions[z]
    }

    /// Law of the emitted `X`-blocks of length `n` (positive mass only).
    pub fn block_distribution(&self, n: usize) -> Result<BTreeMap<Word, f64>> {
        let mut out = BTreeMap::new();
        if n == 0 {
            return Ok(out);
        }
        let mut visited = 0usize;
        let mut stack: Vec<(Vec<usize>, Vec<f64>)> = Vec::new();
        for s in (0..self.base.len()).rev() {
            let v: Vec<f64> = (0..self.len())
                .map(|z| if self.emission[z] == s { self.stationary[z] } else { 0.0 })
                .collect();
            if v.iter().any(|&p| p > 0.0) {
                stack.push((vec![s], v));
            }
        }
        while let Some((w, v)) = stack.pop() {
            visited += 1;
            if visited > DEFAULT_WORD_CAP {
                return Err(Error::CapExceeded {
                    count: format!("more than {visited} prefixes"),
                    cap: DEFAULT_WORD_CAP,
                });
            }
            if w.len() == n {
                out.insert(Word::from_indices(w), v.iter().sum());
                continue;
            }
            let mut by_symbol: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
            for (z, &p) in v.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                for &(t, q) in &self.transitions[z] {
                    by_symbol
                        .entry(self.emission[t])
                        .or_insert_with(|| vec![0.0; self.len()])[t] += p * q;
                }
            }
            for (s, next) in by_symbol.into_iter().rev() {
                let mut word = w.clone();
                word.push(s);
                stack.push((word, next));
            }
        }
        Ok(out)
    }
}

/// Shape summary for reports.
#[derive(Clone, Debug, Serialize)]
pub struct HiddenChainSummary {
    pub states: usize,
    pub transitions: usize,
}

impl From<&HiddenChain> for HiddenChainSummary {
    fn from(c: &HiddenChain) -> Self {
        HiddenChainSummary {
            states: c.len(),
            transitions: c.transitions.iter().map(Vec::len).sum(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn markov_chain_blocks_match_measure() {
        let x = Sft::from_matrix(&["0", "1"], &[vec![1, 1], vec![1, 0]]).unwrap();
        let mu = MarkovMeasure::new(x, vec![vec![0.4, 0.6], vec![1.0, 0.0]]).unwrap();
        let chain = HiddenChain::from_markov(&mu);
        let a = chain.block_distribution(5).unwrap();
        let b = mu.block_distribution(5).unwrap();
        assert_eq!(a.len(), b.len());
        for (w, p) in &b {
            assert!((a[w] - p).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_non_stationary_start() {
        let x = Sft::full_shift(&["0", "1"]).unwrap();
        let t = vec![vec![(0, 0.5), (1, 0.5)], vec![(0, 1.0)]];
        assert!(HiddenChain::new(x, vec![0, 1], vec![0.5, 0.5], t).is_err());
    }
}
