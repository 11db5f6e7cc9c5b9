//! Stationary measures on SFTs: Markov (including Bernoulli), periodic-orbit
//! measures, Shannon–Parry maximal measures and equilibrium states of
//! locally constant potentials.
//!
//! Entropies are in nats throughout.
//!
//! A [`MarkovMeasure`] built from rational transition probabilities keeps
//! an exact copy of its transition matrix and stationary vector, and the
//! `_exact` block-distribution methods use it. Spectral constructions
//! (Parry, pressure) are binary64 only.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, SpectralData};
use crate::rational;
use crate::sft::{HigherBlock, PeriodicOrbit, Sft, Word, DEFAULT_WORD_CAP};

const ROW_SUM_TOLERANCE: f64 = 1e-12;
const STATIONARY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
struct ExactParts {
    transition: Vec<Vec<BigRational>>,
    stationary: Vec<BigRational>,
}

/// A stationary 1-step Markov measure supported on an SFT.
#[derive(Clone, Debug)]
pub struct MarkovMeasure {
    base: Sft,
    transition: Vec<Vec<f64>>,
    stationary: Vec<f64>,
    exact: Option<ExactParts>,
}

impl MarkovMeasure {
    /// Markov measure with the unique stationary vector of `transition`.
    pub fn new(base: Sft, transition: Vec<Vec<f64>>) -> Result<Self> {
        check_transition(&base, &transition)?;
        let stationary = linalg::stationary(&transition)?;
        let m = MarkovMeasure {
            base,
            transition,
            stationary,
            exact: None,
        };
        m.check_stationary()?;
        Ok(m)
    }

    /// Markov measure with a caller-supplied stationary vector, checked.
    pub fn with_stationary(
        base: Sft,
        transition: Vec<Vec<f64>>,
        stationary: Vec<f64>,
    ) -> Result<Self> {
        check_transition(&base, &transition)?;
        if stationary.len() != base.len() || stationary.iter().any(|&p| p < -1e-15) {
            return Err(Error::InvalidMeasure("bad stationary vector".into()));
        }
        let total: f64 = stationary.iter().sum();
        if (total - 1.0).abs() > STATIONARY_TOLERANCE {
            return Err(Error::InvalidMeasure(format!(
                "stationary vector sums to {total}"
            )));
        }
        let m = MarkovMeasure {
            base,
            transition,
            stationary: stationary.into_iter().map(|p| p.max(0.0)).collect(),
            exact: None,
        };
        m.check_stationary()?;
        Ok(m)
    }

    /// Markov measure with exact rational transition probabilities.
    pub fn from_rational(base: Sft, transition: Vec<Vec<BigRational>>) -> Result<Self> {
        let stationary = check_exact_transition(&base, &transition)
            .and_then(|_| linalg::stationary_exact(&transition))?;
        Self::assemble_exact(base, transition, stationary)
    }

    /// Exact Markov measure with a caller-supplied stationary vector, which
    /// must be exactly stationary.
    pub fn from_rational_with_stationary(
        base: Sft,
        transition: Vec<Vec<BigRational>>,
        stationary: Vec<BigRational>,
    ) -> Result<Self> {
        check_exact_transition(&base, &transition)?;
        let n = base.len();
        if stationary.len() != n || stationary.iter().any(|p| p.is_negative()) {
            return Err(Error::InvalidMeasure("bad stationary vector".into()));
        }
        if stationary.iter().sum::<BigRational>() != BigRational::one() {
            return Err(Error::InvalidMeasure("stationary vector does not sum to 1".into()));
        }
        for j in 0..n {
            let s: BigRational = (0..n).map(|i| &stationary[i] * &transition[i][j]).sum();
            if s != stationary[j] {
                return Err(Error::InvalidMeasure(format!(
                    "stationary vector is not fixed at `{}`",
                    base.name(j)
                )));
            }
        }
        Self::assemble_exact(base, transition, stationary)
    }

    fn assemble_exact(
        base: Sft,
        transition: Vec<Vec<BigRational>>,
        stationary: Vec<BigRational>,
    ) -> Result<Self> {
        let tf = transition
            .iter()
            .map(|r| r.iter().map(rational::to_f64).collect())
            .collect();
        let sf = stationary.iter().map(rational::to_f64).collect();
        Ok(MarkovMeasure {
            base,
            transition: tf,
            stationary: sf,
            exact: Some(ExactParts {
                transition,
                stationary,
            }),
        })
    }

    /// Bernoulli (i.i.d.) measure with symbol probabilities `probs`.
    pub fn bernoulli(base: Sft, probs: &[f64]) -> Result<Self> {
        let rows = vec![probs.to_vec(); base.len()];
        Self::with_stationary(base, rows, probs.to_vec())
    }

    pub fn bernoulli_exact(base: Sft, probs: &[BigRational]) -> Result<Self> {
        let rows = vec![probs.to_vec(); base.len()];
        Self::from_rational_with_stationary(base, rows, probs.to_vec())
    }

    fn check_stationary(&self) -> Result<()> {
        let n = self.base.len();
        let mut worst = 0.0f64;
        for j in 0..n {
            let s: f64 = (0..n)
                .map(|i| self.stationary[i] * self.transition[i][j])
                .sum();
            worst = worst.max((s - self.stationary[j]).abs());
        }
        if worst > STATIONARY_TOLERANCE {
            return Err(Error::InvalidMeasure(format!(
                "stationarity residual {worst:e} exceeds {STATIONARY_TOLERANCE:e}"
            )));
        }
        Ok(())
    }

    pub fn base(&self) -> &Sft {
        &self.base
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.transition
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact_transition(&self) -> Option<&[Vec<BigRational>]> {
        self.exact.as_ref().map(|e| e.transition.as_slice())
    }

    pub fn exact_stationary(&self) -> Option<&[BigRational]> {
        self.exact.as_ref().map(|e| e.stationary.as_slice())
    }

    fn exact_parts(&self) -> Result<&ExactParts> {
        self.exact
            .as_ref()
            .ok_or_else(|| Error::NotExact("measure has floating-point transitions".into()))
    }

    /// Entropy rate `-Σ_i p_i Σ_j P_ij log P_ij`.
    pub fn entropy(&self) -> f64 {
        let n = self.base.len();
        let mut h = 0.0;
        for i in 0..n {
            if self.stationary[i] == 0.0 {
                continue;
            }
            let row: f64 = self.transition[i]
                .iter()
                .filter(|&&p| p > 0.0)
                .map(|&p| p * p.ln())
                .sum();
            h -= self.stationary[i] * row;
        }
        h.max(0.0)
    }

    /// Joint 2-block probabilities `p_i P_ij`.
    pub fn edge_distribution(&self) -> Vec<Vec<f64>> {
        self.transition
            .iter()
            .zip(&self.stationary)
            .map(|(row, &p)| row.iter().map(|&q| p * q).collect())
            .collect()
    }

    /// Mass of each 1-block cylinder.
    pub fn symbol_mass(&self) -> Vec<f64> {
        self.stationary.clone()
    }

    pub fn block_probability(&self, word: &Word) -> f64 {
        let s = word.symbols();
        if s.is_empty() {
            return 1.0;
        }
        let mut p = self.stationary[s[0]];
        for w in s.windows(2) {
            p *= self.transition[w[0]][w[1]];
        }
        p
    }

    pub fn block_probability_exact(&self, word: &Word) -> Result<BigRational> {
        let e = self.exact_parts()?;
        let s = word.symbols();
        if s.is_empty() {
            return Ok(BigRational::one());
        }
        let mut p = e.stationary[s[0]].clone();
        for w in s.windows(2) {
            p *= &e.transition[w[0]][w[1]];
        }
        Ok(p)
    }

    /// Probabilities of all positive-mass `n`-blocks.
    pub fn block_distribution(&self, n: usize) -> Result<BTreeMap<Word, f64>> {
        self.block_distribution_with_cap(n, DEFAULT_WORD_CAP)
    }

    pub fn block_distribution_with_cap(&self, n: usize, cap: usize) -> Result<BTreeMap<Word, f64>> {
        let mut out = BTreeMap::new();
        let mut buf = Vec::with_capacity(n);
        for s in 0..self.base.len() {
            if self.stationary[s] > 0.0 {
                buf.push(s);
                self.extend_blocks(&mut buf, self.stationary[s], n, cap, &mut out)?;
                buf.pop();
            }
        }
        Ok(out)
    }

    fn extend_blocks(
        &self,
        buf: &mut Vec<usize>,
        p: f64,
        n: usize,
        cap: usize,
        out: &mut BTreeMap<Word, f64>,
    ) -> Result<()> {
        if buf.len() == n {
            if out.len() >= cap {
                return Err(Error::CapExceeded {
                    count: format!(">{cap}"),
                    cap,
                });
            }
            out.insert(Word::from_indices(buf.clone()), p);
            return Ok(());
        }
        let last = *buf.last().expect("non-empty");
        for t in 0..self.base.len() {
            let q = self.transition[last][t];
            if q > 0.0 {
                buf.push(t);
                self.extend_blocks(buf, p * q, n, cap, out)?;
                buf.pop();
            }
        }
        Ok(())
    }

    /// Exact probabilities of all positive-mass `n`-blocks.
    pub fn block_distribution_exact(&self, n: usize) -> Result<BTreeMap<Word, BigRational>> {
        self.block_distribution_exact_with_cap(n, DEFAULT_WORD_CAP)
    }

    pub fn block_distribution_exact_with_cap(
        &self,
        n: usize,
        cap: usize,
    ) -> Result<BTreeMap<Word, BigRational>> {
        let e = self.exact_parts()?;
        let mut out = BTreeMap::new();
        let mut stack: Vec<(Vec<usize>, BigRational)> = (0..self.base.len())
            .rev()
            .filter(|&s| !e.stationary[s].is_zero())
            .map(|s| (vec![s], e.stationary[s].clone()))
            .collect();
        while let Some((w, p)) = stack.pop() {
            if w.len() == n {
                if out.len() >= cap {
                    return Err(Error::CapExceeded {
                        count: format!(">{cap}"),
                        cap,
                    });
                }
                out.insert(Word::from_indices(w), p);
                continue;
            }
            let last = *w.last().expect("non-empty");
            for t in (0..self.base.len()).rev() {
                let q = &e.transition[last][t];
                if !q.is_zero() {
                    let mut next = w.clone();
                    next.push(t);
                    stack.push((next, &p * q));
                }
            }
        }
        Ok(out)
    }

    /// Hidden-state-tagged block distribution of the measure viewed through
    /// the identity code: tag = first symbol.
    pub fn tagged_blocks(&self, n: usize) -> Result<TaggedBlocks> {
        let dist = self.block_distribution(n)?;
        let probs = dist
            .into_iter()
            .map(|(w, p)| ((w.first().unwrap_or(0), w), p))
            .collect();
        Ok(TaggedBlocks { length: n, probs })
    }

    /// The same process on a higher-block presentation of its base.
    pub fn lift_to_higher_block(&self, hb: &HigherBlock) -> Result<MarkovMeasure> {
        let m = hb.blocks.len();
        let follow = |i: usize, j: usize| -> Option<usize> {
            hb.sft
                .allowed(i, j)
                .then(|| hb.blocks[j].last().expect("k >= 1"))
        };
        if let Some(e) = &self.exact {
            let transition: Vec<Vec<BigRational>> = (0..m)
                .map(|i| {
                    let last = hb.blocks[i].last().expect("k >= 1");
                    (0..m)
                        .map(|j| match follow(i, j) {
                            Some(t) => e.transition[last][t].clone(),
                            None => BigRational::zero(),
                        })
                        .collect()
                })
                .collect();
            let stationary = hb
                .blocks
                .iter()
                .map(|b| self.block_probability_exact(b))
                .collect::<Result<Vec<_>>>()?;
            MarkovMeasure::from_rational_with_stationary(hb.sft.clone(), transition, stationary)
        } else {
            let transition: Vec<Vec<f64>> = (0..m)
                .map(|i| {
                    let last = hb.blocks[i].last().expect("k >= 1");
                    (0..m)
                        .map(|j| follow(i, j).map_or(0.0, |t| self.transition[last][t]))
                        .collect()
                })
                .collect();
            let stationary = hb.blocks.iter().map(|b| self.block_probability(b)).collect();
            MarkovMeasure::with_stationary(hb.sft.clone(), transition, stationary)
        }
    }

    /// Cumulative-row sampler for long paths.
    pub fn sampler(&self) -> ChainSampler {
        ChainSampler::new(&self.stationary, &self.transition)
    }
}

fn check_transition(base: &Sft, transition: &[Vec<f64>]) -> Result<()> {
    let n = base.len();
    if n == 0 {
        return Err(Error::EmptyAlphabet);
    }
    if transition.len() != n || transition.iter().any(|r| r.len() != n) {
        return Err(Error::Shape(format!("transition matrix must be {n}x{n}")));
    }
    for (i, row) in transition.iter().enumerate() {
        for (j, &p) in row.iter().enumerate() {
            if !(p >= 0.0) || !p.is_finite() {
                return Err(Error::InvalidMeasure(format!("entry ({i},{j}) = {p}")));
            }
            if p > 0.0 && !base.allowed(i, j) {
                return Err(Error::InvalidMeasure(format!(
                    "transition {} -> {} has mass but is forbidden",
                    base.name(i),
                    base.name(j)
                )));
            }
        }
        let s: f64 = row.iter().sum();
        if (s - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(Error::InvalidMeasure(format!(
                "row `{}` sums to {s}",
                base.name(i)
            )));
        }
    }
    Ok(())
}

fn check_exact_transition(base: &Sft, transition: &[Vec<BigRational>]) -> Result<()> {
    let n = base.len();
    if n == 0 {
        return Err(Error::EmptyAlphabet);
    }
    if transition.len() != n || transition.iter().any(|r| r.len() != n) {
        return Err(Error::Shape(format!("transition matrix must be {n}x{n}")));
    }
    for (i, row) in transition.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            if p.is_negative() {
                return Err(Error::InvalidMeasure(format!("entry ({i},{j}) is negative")));
            }
            if !p.is_zero() && !base.allowed(i, j) {
                return Err(Error::InvalidMeasure(format!(
                    "transition {} -> {} has mass but is forbidden",
                    base.name(i),
                    base.name(j)
                )));
            }
        }
        if row.iter().sum::<BigRational>() != BigRational::one() {
            return Err(Error::InvalidMeasure(format!(
                "row `{}` does not sum to 1",
                base.name(i)
            )));
        }
    }
    Ok(())
}

/// Draws stationary paths of a finite Markov chain.
#[derive(Clone, Debug)]
pub struct ChainSampler {
    initial: Vec<f64>,
    rows: Vec<Vec<(usize, f64)>>,
}

impl ChainSampler {
    pub fn new(initial: &[f64], transition: &[Vec<f64>]) -> Self {
        let cumulative = |probs: &[f64]| {
            let mut acc = 0.0;
            probs
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0.0)
                .map(|(j, &p)| {
                    acc += p;
                    (j, acc)
                })
                .collect::<Vec<_>>()
        };
        ChainSampler {
            initial: initial.to_vec(),
            rows: transition.iter().map(|r| cumulative(r)).collect(),
        }
    }

    fn draw(row: &[(usize, f64)], u: f64) -> usize {
        let total = row.last().map_or(1.0, |r| r.1);
        let u = u * total;
        row.iter()
            .find(|&&(_, c)| u < c)
            .or(row.last())
            .map(|&(j, _)| j)
            .expect("row has mass")
    }

    pub fn first<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let mut acc = 0.0;
        let u: f64 = rng.gen();
        for (j, &p) in self.initial.iter().enumerate() {
            acc += p;
            if u < acc && p > 0.0 {
                return j;
            }
        }
        self.initial
            .iter()
            .rposition(|&p| p > 0.0)
            .expect("initial distribution has mass")
    }

    pub fn next<R: Rng + ?Sized>(&self, rng: &mut R, from: usize) -> usize {
        Self::draw(&self.rows[from], rng.gen())
    }

    pub fn path<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(n);
        if n == 0 {
            return out;
        }
        let mut s = self.first(rng);
        out.push(s);
        for _ in 1..n {
            s = self.next(rng, s);
            out.push(s);
        }
        out
    }
}

/// Uniform measure on a periodic orbit.
#[derive(Clone, Debug)]
pub struct PeriodicMeasure {
    base: Sft,
    orbit: PeriodicOrbit,
}

impl PeriodicMeasure {
    pub fn new(base: Sft, orbit: PeriodicOrbit) -> Result<Self> {
        // Re-check against this base in case the orbit came from elsewhere.
        PeriodicOrbit::new(&base, orbit.block().clone())?;
        Ok(PeriodicMeasure { base, orbit })
    }

    pub fn base(&self) -> &Sft {
        &self.base
    }

    pub fn orbit(&self) -> &PeriodicOrbit {
        &self.orbit
    }

    pub fn symbol_mass(&self) -> Vec<f64> {
        let p = self.orbit.period() as f64;
        let mut mass = vec![0.0; self.base.len()];
        for &s in self.orbit.block().symbols() {
            mass[s] += 1.0 / p;
        }
        mass
    }

    /// Exact `n`-block distribution: each phase contributes `1/period`.
    pub fn block_distribution_exact(&self, n: usize) -> BTreeMap<Word, BigRational> {
        let p = self.orbit.period();
        let mut out: BTreeMap<Word, BigRational> = BTreeMap::new();
        for t in 0..p {
            let w = Word::from_indices((0..n).map(|i| self.orbit.at(t + i)).collect());
            *out.entry(w).or_insert_with(BigRational::zero) += rational::ratio(1, p as i64);
        }
        out
    }
}

/// A stationary ergodic measure of either supported kind.
#[derive(Clone, Debug)]
pub enum Measure {
    Markov(MarkovMeasure),
    Periodic(PeriodicMeasure),
}

impl Measure {
    pub fn base(&self) -> &Sft {
        match self {
            Measure::Markov(m) => m.base(),
            Measure::Periodic(m) => m.base(),
        }
    }

    pub fn symbol_mass(&self) -> Vec<f64> {
        match self {
            Measure::Markov(m) => m.symbol_mass(),
            Measure::Periodic(m) => m.symbol_mass(),
        }
    }
}

impl From<MarkovMeasure> for Measure {
    fn from(m: MarkovMeasure) -> Self {
        Measure::Markov(m)
    }
}

impl From<PeriodicMeasure> for Measure {
    fn from(m: PeriodicMeasure) -> Self {
        Measure::Periodic(m)
    }
}

/// Perron eigendata of a nonnegative matrix.
pub fn perron(matrix: &[Vec<f64>]) -> Result<SpectralData> {
    linalg::perron(matrix)
}

/// Equilibrium state of a 2-block potential and its pressure.
#[derive(Clone, Debug)]
pub struct Equilibrium {
    pub pressure: f64,
    pub state: MarkovMeasure,
    pub spectral: SpectralData,
}

/// Pressure and equilibrium state of a locally constant potential given on
/// 2-blocks (`potential[i][j]` is read only where `ij` is allowed).
pub fn pressure_equilibrium(sft: &Sft, potential: &[Vec<f64>]) -> Result<Equilibrium> {
    let n = sft.len();
    if potential.len() != n || potential.iter().any(|r| r.len() != n) {
        return Err(Error::Shape(format!("potential must be {n}x{n}")));
    }
    let weighted: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if sft.allowed(i, j) {
                        potential[i][j].exp()
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let spectral = linalg::perron(&weighted)?;
    let lambda = spectral.lambda;
    let r = &spectral.right;
    let transition: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n)
                .map(|j| weighted[i][j] * r[j] / (lambda * r[i]))
                .collect();
            let s: f64 = row.iter().sum();
            row.iter_mut().for_each(|p| *p /= s);
            row
        })
        .collect();
    let mut stationary: Vec<f64> = (0..n).map(|i| spectral.left[i] * r[i]).collect();
    let total: f64 = stationary.iter().sum();
    stationary.iter_mut().for_each(|p| *p /= total);
    let state = MarkovMeasure::with_stationary(sft.clone(), transition, stationary)?;
    Ok(Equilibrium {
        pressure: lambda.ln(),
        state,
        spectral,
    })
}

/// Shannon–Parry measure of maximal entropy.
pub fn parry_measure(sft: &Sft) -> Result<MarkovMeasure> {
    let zero = vec![vec![0.0; sft.len()]; sft.len()];
    Ok(pressure_equilibrium(sft, &zero)?.state)
}

/// Weighted entropy `(h(μ) + α h(πμ)) / (α + 1)`.
pub fn weighted_entropy(mu_entropy: f64, nu_entropy: f64, alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidArgument(format!("alpha must be >= 0, got {alpha}")));
    }
    Ok((mu_entropy + alpha * nu_entropy) / (alpha + 1.0))
}

/// Shannon entropy of a finite distribution (nats).
pub fn shannon<'a>(probs: impl IntoIterator<Item = &'a f64>) -> f64 {
    -probs
        .into_iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>()
}

/// Joint law of a hidden state at time 0 and the observed block starting
/// there. For a plain Markov measure the tag is the first symbol.
#[derive(Clone, Debug)]
pub struct TaggedBlocks {
    pub length: usize,
    pub probs: BTreeMap<(usize, Word), f64>,
}

impl TaggedBlocks {
    fn word_marginal(&self) -> BTreeMap<Word, f64> {
        let mut out = BTreeMap::new();
        for ((_, w), &p) in &self.probs {
            *out.entry(w.clone()).or_insert(0.0) += p;
        }
        out
    }

    fn drop_last(&self) -> BTreeMap<(usize, Word), f64> {
        let mut out = BTreeMap::new();
        for ((t, w), &p) in &self.probs {
            *out.entry((*t, w.drop_last())).or_insert(0.0) += p;
        }
        out
    }
}

/// Bracket on the entropy rate of the observed process.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyBounds {
    pub n: usize,
    /// `H(y_n | y_0..y_{n-1})`, nonincreasing in `n`.
    pub upper: f64,
    /// `H(y_n | y_0..y_{n-1}, x_0)`, nondecreasing in `n`.
    pub lower: f64,
}

impl EntropyBounds {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Entropy-rate bracket from tagged block laws of lengths `n` and `n + 1`.
pub fn block_entropy_bounds(dist_n: &TaggedBlocks, dist_next: &TaggedBlocks) -> Result<EntropyBounds> {
    if dist_next.length != dist_n.length + 1 {
        return Err(Error::InvalidArgument(format!(
            "block lengths {} and {} are not consecutive",
            dist_n.length, dist_next.length
        )));
    }
    let marginal = dist_next.drop_last();
    let mut deviation = 0.0f64;
    for (k, &p) in &marginal {
        deviation = deviation.max((p - dist_n.probs.get(k).copied().unwrap_or(0.0)).abs());
    }
    for (k, &p) in &dist_n.probs {
        if !marginal.contains_key(k) {
            deviation = deviation.max(p);
        }
    }
    if deviation > 1e-10 {
        return Err(Error::InconsistentMarginals(deviation));
    }
    let h_words = |d: &TaggedBlocks| shannon(d.word_marginal().values());
    let h_tagged = |d: &TaggedBlocks| shannon(d.probs.values());
    let upper = h_words(dist_next) - h_words(dist_n);
    let lower = h_tagged(dist_next) - h_tagged(dist_n);
    Ok(EntropyBounds {
        n: dist_n.length,
        upper,
        lower: lower.min(upper),
    })
}
