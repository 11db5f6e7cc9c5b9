//! Relatively maximal measures.
//!
//! Over a singleton clump `a`, the first-return system to `[a]` is a
//! countable-state Bernoulli shift on the return loops `aCa`, and the lift
//! of maximal entropy spreads the mass of each loop evenly over its bands
//! `aBa` (the `X`-words with `π(B) = C`). Entropies then follow from
//! Abramov's formula `h(μ) = μ[a]·h(μ_a)`.
//!
//! Over a periodic orbit the fiber is itself an SFT, and its maximal
//! measures live on the components of largest entropy.
//!
//! [`fiber_entropy_optimizer`] maximizes entropy over Markov lifts directly
//! and serves as an independent numerical check.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::FactorCode;
use crate::hidden::HiddenChain;
use crate::linalg;
use crate::measures::MarkovMeasure;
use crate::rng::trial_rng;
use crate::sft::{PeriodicOrbit, Sft, Word, DEFAULT_WORD_CAP};

/// Longest return loop retained by default.
pub const DEFAULT_TRUNCATION: usize = 40;
/// Minimum retained loop mass accepted by [`abramov_entropy`] by default.
pub const DEFAULT_RETAINED_THRESHOLD: f64 = 1.0 - 1e-6;
pub const DEFAULT_RESTARTS: usize = 16;

const WEIGHT_TOLERANCE: f64 = 1e-12;

/// A return loop `aCa` of `Y` with its bands in `X`.
#[derive(Clone, Debug)]
pub struct ReturnLoop {
    pub word: Word,
    /// `ν_a[aCa] = ν[aCa] / ν[a]`.
    pub probability: f64,
    pub exact: Option<BigRational>,
    pub bands: Vec<Word>,
}

impl ReturnLoop {
    /// Number of steps from `a` back to `a`.
    pub fn length(&self) -> usize {
        self.word.len() - 1
    }

    pub fn band_count(&self) -> usize {
        self.bands.len()
    }
}

/// First-return data over a singleton clump, truncated at a maximal loop
/// length.
#[derive(Clone, Debug)]
pub struct InducedSystem {
    code: FactorCode,
    nu: MarkovMeasure,
    pub clump: usize,
    pub clump_x: usize,
    pub loops: Vec<ReturnLoop>,
    pub truncation: usize,
    pub retained_mass: f64,
    pub retained_mass_exact: Option<BigRational>,
}

impl InducedSystem {
    pub fn code(&self) -> &FactorCode {
        &self.code
    }

    pub fn nu(&self) -> &MarkovMeasure {
        &self.nu
    }

    /// `ν[a]`.
    pub fn clump_mass(&self) -> f64 {
        self.nu.stationary()[self.clump]
    }

    pub fn find_loop(&self, word: &Word) -> Option<usize> {
        self.loops.iter().position(|l| &l.word == word)
    }
}

pub fn build_induced(
    code: &FactorCode,
    nu: &MarkovMeasure,
    a: usize,
    truncation: usize,
) -> Result<InducedSystem> {
    code.check_codomain(nu.base())?;
    let y = code.codomain();
    if a >= y.len() {
        return Err(Error::InvalidArgument(format!("symbol index {a} out of range")));
    }
    if truncation == 0 {
        return Err(Error::InvalidArgument("truncation must be at least 1".into()));
    }
    let pre = code.preimage(a);
    if pre.len() != 1 {
        return Err(Error::NotSingletonClump(y.name(a).to_string()));
    }
    if !(nu.stationary()[a] > 0.0) {
        return Err(Error::ZeroMass(format!("ν[{}] = 0", y.name(a))));
    }
    let clump_x = pre[0];
    let p = nu.transition();
    let exact = nu.exact_transition();

    let mut loops = Vec::new();
    let mut stack: Vec<(Vec<usize>, f64, Option<BigRational>)> =
        vec![(vec![a], 1.0, exact.map(|_| BigRational::from_integer(1.into())))];
    while let Some((w, prob, prob_exact)) = stack.pop() {
        let last = *w.last().expect("non-empty");
        for c in y.successors(last) {
            if p[last][c] == 0.0 {
                continue;
            }
            let np = prob * p[last][c];
            let ne = match (&prob_exact, exact) {
                (Some(q), Some(e)) => Some(q * &e[last][c]),
                _ => None,
            };
            let mut next = w.clone();
            next.push(c);
            if c == a {
                loops.push(ReturnLoop {
                    word: Word::from_indices(next),
                    probability: np,
                    exact: ne,
                    bands: Vec::new(),
                });
                if loops.len() > DEFAULT_WORD_CAP {
                    return Err(Error::CapExceeded {
                        count: format!("more than {} return loops", DEFAULT_WORD_CAP),
                        cap: DEFAULT_WORD_CAP,
                    });
                }
            } else if w.len() < truncation {
                stack.push((next, np, ne));
            }
        }
    }
    loops.sort_by(|l, r| (l.word.len(), &l.word).cmp(&(r.word.len(), &r.word)));
    for l in &mut loops {
        l.bands = enumerate_bands(code, clump_x, &l.word)?;
        if l.bands.is_empty() {
            return Err(Error::InvalidCode(format!(
                "loop {} has no preimage",
                y.format_word(&l.word)
            )));
        }
    }
    let retained_mass = loops.iter().map(|l| l.probability).sum();
    let retained_mass_exact = if exact.is_some() {
        Some(
            loops
                .iter()
                .map(|l| l.exact.clone().expect("exact measure"))
                .fold(BigRational::zero(), |acc, q| acc + q),
        )
    } else {
        None
    };
    Ok(InducedSystem {
        code: code.clone(),
        nu: nu.clone(),
        clump: a,
        clump_x,
        loops,
        truncation,
        retained_mass,
        retained_mass_exact,
    })
}

fn enumerate_bands(code: &FactorCode, clump_x: usize, loop_word: &Word) -> Result<Vec<Word>> {
    let x = code.domain();
    let target = loop_word.symbols();
    let mut out = Vec::new();
    let mut stack = vec![vec![clump_x]];
    while let Some(w) = stack.pop() {
        if w.len() == target.len() {
            out.push(Word::from_indices(w));
            if out.len() > DEFAULT_WORD_CAP {
                return Err(Error::CapExceeded {
                    count: format!("more than {} bands", DEFAULT_WORD_CAP),
                    cap: DEFAULT_WORD_CAP,
                });
            }
            continue;
        }
        let last = *w.last().expect("non-empty");
        for &s in code.preimage(target[w.len()]).iter().rev() {
            if x.allowed(last, s) {
                let mut next = w.clone();
                next.push(s);
                stack.push(next);
            }
        }
    }
    Ok(out)
}

/// A Bernoulli measure on bands whose loop sums reproduce `ν_a`.
#[derive(Clone, Debug)]
pub struct InducedBernoulli {
    pub induced: InducedSystem,
    pub weights: Vec<Vec<f64>>,
    exact: Option<Vec<Vec<BigRational>>>,
    index: HashMap<Vec<usize>, (usize, usize)>,
}

/// Spreads each loop's mass evenly over its bands.
pub fn maximal_induced_measure(induced: &InducedSystem) -> InducedBernoulli {
    let weights = induced
        .loops
        .iter()
        .map(|l| vec![l.probability / l.band_count() as f64; l.band_count()])
        .collect();
    let exact = induced
        .loops
        .iter()
        .map(|l| {
            l.exact.as_ref().map(|p| {
                let j = BigRational::from_integer(l.band_count().into());
                vec![p / j; l.band_count()]
            })
        })
        .collect::<Option<Vec<_>>>();
    InducedBernoulli::assemble(induced.clone(), weights, exact)
}

impl InducedBernoulli {
    /// Arbitrary band weights; each loop's weights must sum to its
    /// `ν_a`-probability.
    pub fn with_weights(induced: InducedSystem, weights: Vec<Vec<f64>>) -> Result<Self> {
        if weights.len() != induced.loops.len() {
            return Err(Error::Shape("one weight row per loop".into()));
        }
        for (l, row) in induced.loops.iter().zip(&weights) {
            if row.len() != l.band_count() {
                return Err(Error::Shape("one weight per band".into()));
            }
            if row.iter().any(|&q| !(q >= 0.0)) {
                return Err(Error::InvalidMeasure("negative band weight".into()));
            }
            let s: f64 = row.iter().sum();
            if (s - l.probability).abs() > WEIGHT_TOLERANCE {
                return Err(Error::InvalidMeasure(format!(
                    "band weights sum to {s}, loop has mass {}",
                    l.probability
                )));
            }
        }
        Ok(Self::assemble(induced, weights, None))
    }

    fn assemble(
        induced: InducedSystem,
        weights: Vec<Vec<f64>>,
        exact: Option<Vec<Vec<BigRational>>>,
    ) -> Self {
        let mut index = HashMap::new();
        for (i, l) in induced.loops.iter().enumerate() {
            for (j, b) in l.bands.iter().enumerate() {
                index.insert(b.symbols().to_vec(), (i, j));
            }
        }
        InducedBernoulli {
            induced,
            weights,
            exact,
            index,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact_weights(&self) -> Option<&[Vec<BigRational>]> {
        self.exact.as_deref()
    }

    pub fn loop_sums(&self) -> Vec<f64> {
        self.weights.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn loop_sums_exact(&self) -> Option<Vec<BigRational>> {
        self.exact.as_ref().map(|rows| {
            rows.iter()
                .map(|r| r.iter().fold(BigRational::zero(), |acc, q| acc + q))
                .collect()
        })
    }

    /// `(loop, band)` of an `X`-band word.
    pub fn locate(&self, band: &[usize]) -> Option<(usize, usize)> {
        self.index.get(band).copied()
    }

    /// `−Σ q ln q` over all retained bands.
    pub fn induced_entropy(&self) -> f64 {
        -self
            .weights
            .iter()
            .flatten()
            .filter(|&&q| q > 0.0)
            .map(|&q| q * q.ln())
            .sum::<f64>()
    }

    /// `ν[a]·Σ q ln(ν_a[loop]/q)`: the entropy carried by band choices.
    pub fn fiber_entropy(&self) -> f64 {
        let s: f64 = self
            .induced
            .loops
            .iter()
            .zip(&self.weights)
            .flat_map(|(l, row)| row.iter().map(move |&q| (l.probability, q)))
            .filter(|&(_, q)| q > 0.0)
            .map(|(p, q)| q * (p / q).ln())
            .sum();
        self.induced.clump_mass() * s
    }

    /// Renewal presentation of the measure on `X`: after each visit to the
    /// clump a band is drawn, and the hidden state records the rest of the
    /// current band. Retained loops are renormalized to total mass one.
    pub fn hidden_chain(&self) -> Result<HiddenChain> {
        let ind = &self.induced;
        let total: f64 = self.weights.iter().flatten().sum();
        if !(total > 0.0) {
            return Err(Error::ZeroMass("no band carries mass".into()));
        }
        let mut suffixes: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for (l, row) in ind.loops.iter().zip(&self.weights) {
            for (b, &q) in l.bands.iter().zip(row) {
                let inner = &b.symbols()[1..b.len() - 1];
                for p in 0..inner.len() {
                    *suffixes.entry(inner[p..].to_vec()).or_insert(0.0) += q / total;
                }
            }
        }
        let ids: HashMap<Vec<usize>, usize> = suffixes
            .keys()
            .enumerate()
            .map(|(i, s)| (s.clone(), i + 1))
            .collect();
        let n = suffixes.len() + 1;
        let mut emission = vec![ind.clump_x; n];
        let mut transitions: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut from_clump: BTreeMap<usize, f64> = BTreeMap::new();
        for (l, row) in ind.loops.iter().zip(&self.weights) {
            for (b, &q) in l.bands.iter().zip(row) {
                if q == 0.0 {
                    continue;
                }
                let inner = &b.symbols()[1..b.len() - 1];
                let to = if inner.is_empty() { 0 } else { ids[inner] };
                *from_clump.entry(to).or_insert(0.0) += q / total;
            }
        }
        transitions[0] = from_clump.into_iter().collect();
        let mut stationary = vec![1.0; n];
        for (s, &mass) in &suffixes {
            let id = ids[s];
            emission[id] = s[0];
            let next = if s.len() == 1 { 0 } else { ids[&s[1..]] };
            transitions[id] = vec![(next, 1.0)];
            stationary[id] = mass;
        }
        let norm: f64 = stationary.iter().sum();
        stationary.iter_mut().for_each(|p| *p /= norm);
        HiddenChain::new(ind.code.domain().clone(), emission, stationary, transitions)
    }
}

/// Entropies of the lifted measure via Abramov's formula.
#[derive(Clone, Debug, Serialize)]
pub struct AbramovEntropy {
    /// `ν[a]`.
    pub clump_mass: f64,
    /// `h(μ_a) = −Σ q ln q` over retained bands.
    pub induced_entropy: f64,
    /// `h(μ) = ν[a]·h(μ_a)`.
    pub h_mu: f64,
    pub nu_entropy: f64,
    /// `h(μ) − h(ν)`.
    pub h_rel: f64,
    /// `ν[a]·Σ q ln(ν_a[loop]/q)`; equals `h_rel` up to the truncated tail.
    pub fiber_entropy: f64,
    pub retained_mass: f64,
    pub truncation: usize,
}

pub fn abramov_entropy(measure: &InducedBernoulli, threshold: f64) -> Result<AbramovEntropy> {
    let ind = &measure.induced;
    if ind.retained_mass < threshold {
        return Err(Error::TruncationMass {
            retained: ind.retained_mass,
            threshold,
        });
    }
    let clump_mass = ind.clump_mass();
    let induced_entropy = measure.induced_entropy();
    let h_mu = clump_mass * induced_entropy;
    let nu_entropy = ind.nu.entropy();
    Ok(AbramovEntropy {
        clump_mass,
        induced_entropy,
        h_mu,
        nu_entropy,
        h_rel: h_mu - nu_entropy,
        fiber_entropy: measure.fiber_entropy(),
        retained_mass: ind.retained_mass,
        truncation: ind.truncation,
    })
}

fn split_bands<'w>(measure: &InducedBernoulli, x_word: &'w Word) -> Result<Vec<&'w [usize]>> {
    let a = measure.induced.clump_x;
    let s = x_word.symbols();
    let x = measure.induced.code.domain();
    if s.first() != Some(&a) || s.last() != Some(&a) {
        return Err(Error::InvalidArgument(format!(
            "`{}` must start and end with the clump symbol",
            x.format_word(x_word)
        )));
    }
    let cuts: Vec<usize> = (0..s.len()).filter(|&i| s[i] == a).collect();
    Ok(cuts.windows(2).map(|c| &s[c[0]..=c[1]]).collect())
}

/// `μ[x_word] = ν[a]·Π q(band)` for a concatenation of bands, exactly.
pub fn cylinder_probability_exact(measure: &InducedBernoulli, x_word: &Word) -> Result<BigRational> {
    let exact = measure
        .exact
        .as_ref()
        .ok_or_else(|| Error::NotExact("band weights are not rational".into()))?;
    let clump = measure
        .induced
        .nu
        .exact_stationary()
        .ok_or_else(|| Error::NotExact("ν is not rational".into()))?[measure.induced.clump]
        .clone();
    let mut prob = clump;
    for band in split_bands(measure, x_word)? {
        let (i, j) = measure.locate(band).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "`{}` is not a retained band",
                measure.induced.code.domain().format_word(&Word::from_indices(band.to_vec()))
            ))
        })?;
        prob *= &exact[i][j];
    }
    Ok(prob)
}

pub fn cylinder_probability(measure: &InducedBernoulli, x_word: &Word) -> Result<f64> {
    let mut prob = measure.induced.clump_mass();
    for band in split_bands(measure, x_word)? {
        let (i, j) = measure.locate(band).ok_or_else(|| {
            Error::InvalidArgument("word is not a concatenation of retained bands".into())
        })?;
        prob *= measure.weights[i][j];
    }
    Ok(prob)
}

/// One recurrent component of a periodic fiber.
#[derive(Clone, Debug, Serialize)]
pub struct FiberComponent {
    pub vertices: Vec<String>,
    pub lambda: f64,
    /// Entropy per shift step.
    pub entropy: f64,
    pub maximal: bool,
}

/// The fiber `π⁻¹O(y)` over a periodic point, expanded by phase.
#[derive(Clone, Debug, Serialize)]
pub struct FiberSft {
    pub orbit: Vec<String>,
    pub period: usize,
    #[serde(skip)]
    pub graph: Sft,
    /// `(X-symbol, phase)` of each graph vertex.
    pub vertices: Vec<(usize, usize)>,
    pub components: Vec<FiberComponent>,
    pub max_entropy: f64,
    pub maximal_components: usize,
    pub determinate: bool,
}

const ENTROPY_TIE: f64 = 1e-12;

pub fn fiber_periodic(code: &FactorCode, orbit: &PeriodicOrbit) -> Result<FiberSft> {
    let x = code.domain();
    let y = code.codomain();
    let p = orbit.period();
    if !y.is_allowed_word(&Word::from_indices(
        (0..=p).map(|t| orbit.at(t)).collect(),
    )) {
        return Err(Error::DisallowedWord(y.format_word(orbit.block())));
    }
    let mut vertices = Vec::new();
    for t in 0..p {
        let pre = code.preimage(orbit.at(t));
        if pre.is_empty() {
            return Err(Error::InvalidCode("orbit has no fiber".into()));
        }
        vertices.extend(pre.iter().map(|&s| (s, t)));
    }
    let names: Vec<String> = vertices
        .iter()
        .map(|&(s, t)| format!("{}@{t}", x.name(s)))
        .collect();
    let mut edges = Vec::new();
    for (i, &(s, t)) in vertices.iter().enumerate() {
        for (j, &(u, v)) in vertices.iter().enumerate() {
            if v == (t + 1) % p && x.allowed(s, u) {
                edges.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let graph = Sft::from_edges(&names, &edges)?;
    let mut components = Vec::new();
    for c in graph.strongly_connected_components() {
        if c.trivial {
            continue;
        }
        let lambda = linalg::spectral_radius(&c.sft.adjacency_matrix())?;
        components.push(FiberComponent {
            vertices: c.vertices.iter().map(|&v| names[v].clone()).collect(),
            lambda,
            entropy: lambda.ln(),
            maximal: false,
        });
    }
    if components.is_empty() {
        return Err(Error::InvalidCode("orbit has no fiber".into()));
    }
    let max_entropy = components
        .iter()
        .map(|c| c.entropy)
        .fold(f64::NEG_INFINITY, f64::max);
    for c in &mut components {
        c.maximal = c.entropy >= max_entropy - ENTROPY_TIE;
    }
    let maximal_components = components.iter().filter(|c| c.maximal).count();
    Ok(FiberSft {
        orbit: orbit
            .block()
            .symbols()
            .iter()
            .map(|&s| y.name(s).to_string())
            .collect(),
        period: p,
        graph,
        vertices,
        components,
        max_entropy,
        maximal_components,
        determinate: maximal_components == 1,
    })
}

/// The first-return system to a clump `π⁻¹(a)` with bounded return time:
/// symbols of `X_a` are return words `sBt` (`s, t ∈ π⁻¹(a)`, no internal
/// clump symbol), with `sBt → t…` allowed; `Y_a` is the full shift on
/// return words of `Y`.
#[derive(Clone, Debug)]
pub struct ReturnWordSystem {
    pub clump: usize,
    pub x: Sft,
    pub y: Sft,
    pub code: FactorCode,
    pub x_words: Vec<Word>,
    pub y_words: Vec<Word>,
    /// Some path leaves the clump for longer than the length bound.
    pub truncated: bool,
}

pub fn return_word_system(code: &FactorCode, a: usize, max_len: usize) -> Result<ReturnWordSystem> {
    let x = code.domain();
    let ysft = code.codomain();
    if a >= ysft.len() {
        return Err(Error::InvalidArgument(format!("symbol index {a} out of range")));
    }
    let in_clump = |s: usize| code.image(s) == a;
    let mut x_words = Vec::new();
    let mut truncated = false;
    for &start in code.preimage(a) {
        let mut stack = vec![vec![start]];
        while let Some(w) = stack.pop() {
            let last = *w.last().expect("non-empty");
            for t in x.successors(last) {
                let mut next = w.clone();
                next.push(t);
                if in_clump(t) {
                    x_words.push(Word::from_indices(next));
                } else if next.len() <= max_len {
                    stack.push(next);
                } else {
                    truncated = true;
                }
            }
            if x_words.len() > DEFAULT_WORD_CAP {
                return Err(Error::CapExceeded {
                    count: format!("more than {} return words", DEFAULT_WORD_CAP),
                    cap: DEFAULT_WORD_CAP,
                });
            }
        }
    }
    x_words.sort();
    let mut y_words: Vec<Word> = x_words.iter().map(|w| code.image_word(w)).collect();
    y_words.sort();
    y_words.dedup();
    let x_names = concatenated_names(x, &x_words);
    let y_names = concatenated_names(ysft, &y_words);
    let mut edges = Vec::new();
    for (i, u) in x_words.iter().enumerate() {
        for (j, v) in x_words.iter().enumerate() {
            if u.last() == v.first() {
                edges.push((x_names[i].clone(), x_names[j].clone()));
            }
        }
    }
    let xa = Sft::from_edges(&x_names, &edges)?;
    let ya = Sft::full_shift(&y_names)?;
    let map = x_words
        .iter()
        .map(|w| {
            let img = code.image_word(w);
            y_words.binary_search(&img).expect("image listed")
        })
        .collect();
    let code_a = FactorCode::new(xa.clone(), ya.clone(), map)?;
    Ok(ReturnWordSystem {
        clump: a,
        x: xa,
        y: ya,
        code: code_a,
        x_words,
        y_words,
        truncated,
    })
}

fn concatenated_names(sft: &Sft, words: &[Word]) -> Vec<String> {
    let plain: Vec<String> = words
        .iter()
        .map(|w| w.symbols().iter().map(|&s| sft.name(s)).collect())
        .collect();
    let mut seen = std::collections::HashSet::new();
    if plain.iter().all(|n| seen.insert(n.clone())) {
        return plain;
    }
    words
        .iter()
        .map(|w| {
            w.symbols()
                .iter()
                .map(|&s| sft.name(s))
                .collect::<Vec<_>>()
                .join(".")
        })
        .collect()
}

impl ReturnWordSystem {
    /// `ν_a`: the Bernoulli law of return words of a Markov `ν` on `Y`.
    pub fn induced_measure(&self, nu: &MarkovMeasure) -> Result<MarkovMeasure> {
        let mass = |w: &Word| -> f64 {
            w.symbols()
                .windows(2)
                .map(|p| nu.transition()[p[0]][p[1]])
                .product()
        };
        let probs: Vec<f64> = self.y_words.iter().map(mass).collect();
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::TruncationMass {
                retained: total,
                threshold: 1.0,
            });
        }
        match nu.exact_transition() {
            Some(e) => {
                let probs: Vec<BigRational> = self
                    .y_words
                    .iter()
                    .map(|w| {
                        w.symbols()
                            .windows(2)
                            .map(|p| e[p[0]][p[1]].clone())
                            .fold(BigRational::from_integer(1.into()), |acc, q| acc * q)
                    })
                    .collect();
                MarkovMeasure::bernoulli_exact(self.y.clone(), &probs)
            }
            None => MarkovMeasure::bernoulli(self.y.clone(), &probs),
        }
    }
}

/// State names of the six-state homogeneous-clump return system, in the
/// order used by [`homclump_matrix`].
pub const HOMCLUMP_STATES: [&str; 6] = ["a1a1", "a1b1a1", "a1a2", "a2a2", "a2b2a2", "a2a1"];

pub fn homclump_matrix(x: f64, y: f64) -> Vec<Vec<f64>> {
    vec![
        vec![x, 1.0 - 2.0 * x, x, 0.0, 0.0, 0.0],
        vec![y, 1.0 - 2.0 * y, y, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, x, 1.0 - 2.0 * x, x],
        vec![0.0, 0.0, 0.0, x, 1.0 - 2.0 * x, x],
        vec![0.0, 0.0, 0.0, y, 1.0 - 2.0 * y, y],
        vec![x, 1.0 - 2.0 * x, x, 0.0, 0.0, 0.0],
    ]
}

/// `(y, 1−2x, y, y, 1−2x, y) / (4y + 2(1−2x))`.
pub fn homclump_fixed_vector(x: f64, y: f64) -> Vec<f64> {
    let d = 4.0 * y + 2.0 * (1.0 - 2.0 * x);
    [y, 1.0 - 2.0 * x, y, y, 1.0 - 2.0 * x, y]
        .iter()
        .map(|v| v / d)
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct HomClumpFamily {
    pub k: f64,
    pub x: f64,
    pub y: f64,
    pub states: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
    pub fixed: Vec<f64>,
    /// Largest deviation of `fixed` from the recomputed stationary vector.
    pub fixed_deviation: f64,
}

/// The lift of maximal entropy over `ν` with `K = ν[aa]/ν[aba]`, as a
/// chain on the six return words.
pub fn homclump_family(k: f64) -> Result<HomClumpFamily> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidArgument(format!("K must be positive, got {k}")));
    }
    let x = k / (2.0 * k + 2.0);
    let matrix = homclump_matrix(x, x);
    let fixed = homclump_fixed_vector(x, x);
    let recomputed = linalg::stationary(&matrix)?;
    let fixed_deviation = fixed
        .iter()
        .zip(&recomputed)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if fixed_deviation > 1e-12 {
        return Err(Error::InvalidMeasure(format!(
            "fixed vector deviates by {fixed_deviation:e}"
        )));
    }
    Ok(HomClumpFamily {
        k,
        x,
        y: x,
        states: HOMCLUMP_STATES.iter().map(|s| s.to_string()).collect(),
        matrix,
        fixed,
        fixed_deviation,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OptimizerRestart {
    pub index: usize,
    pub entropy: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub converged: bool,
}

/// Best Markov lift found by [`fiber_entropy_optimizer`].
#[derive(Clone, Debug)]
pub struct FiberOptimum {
    pub order: usize,
    /// The support of the lift: a subsystem of the `order`-block
    /// presentation of `X`.
    pub sft: Sft,
    /// The `X`-block behind each symbol of `sft`.
    pub blocks: Vec<Word>,
    pub measure: MarkovMeasure,
    pub entropy: f64,
    pub nu_entropy: f64,
    pub relative_entropy: f64,
    /// Max difference between the lift's image `(order+1)`-block law and `ν`'s.
    pub constraint_deviation: f64,
    pub best_restart: usize,
    pub restarts: Vec<OptimizerRestart>,
    /// Always true: local search, not a certificate.
    pub heuristic: bool,
}

impl FiberOptimum {
    fn position(&self, block: &[usize]) -> Option<usize> {
        self.blocks.iter().position(|b| b.symbols() == block)
    }

    /// Transition probability between two `order`-blocks of `X` (0 off the
    /// support).
    pub fn transition_between(&self, from: &[usize], to: &[usize]) -> f64 {
        match (self.position(from), self.position(to)) {
            (Some(i), Some(j)) => self.measure.transition()[i][j],
            _ => 0.0,
        }
    }

    pub fn stationary_of(&self, block: &[usize]) -> f64 {
        self.position(block)
            .map_or(0.0, |i| self.measure.stationary()[i])
    }
}

struct DualProblem {
    n: usize,
    edges: Vec<(usize, usize, usize)>,
    target: Vec<f64>,
}

struct DualPoint {
    value: f64,
    gradient: Vec<f64>,
}

impl DualProblem {
    fn weights(&self, theta: &[f64]) -> Vec<Vec<f64>> {
        let mut w = vec![vec![0.0; self.n]; self.n];
        for &(i, j, c) in &self.edges {
            w[i][j] = theta[c].exp();
        }
        w
    }

    fn evaluate(&self, theta: &[f64]) -> Result<DualPoint> {
        let w = self.weights(theta);
        let sp = linalg::perron(&w)?;
        let mut g = vec![0.0; self.target.len()];
        for &(i, j, c) in &self.edges {
            g[c] += sp.left[i] * w[i][j] * sp.right[j] / sp.lambda;
        }
        let value = sp.lambda.ln()
            - theta
                .iter()
                .zip(&self.target)
                .map(|(t, v)| t * v)
                .sum::<f64>();
        let gradient = g.iter().zip(&self.target).map(|(a, b)| a - b).collect();
        Ok(DualPoint { value, gradient })
    }

    fn hessian(&self, theta: &[f64]) -> Result<Vec<Vec<f64>>> {
        let d = theta.len();
        let h = 1e-5;
        let mut cols = Vec::with_capacity(d);
        for j in 0..d {
            let mut plus = theta.to_vec();
            let mut minus = theta.to_vec();
            plus[j] += h;
            minus[j] -= h;
            let gp = self.evaluate(&plus)?.gradient;
            let gm = self.evaluate(&minus)?.gradient;
            cols.push(
                gp.iter()
                    .zip(&gm)
                    .map(|(a, b)| (a - b) / (2.0 * h))
                    .collect::<Vec<f64>>(),
            );
        }
        Ok((0..d)
            .map(|i| (0..d).map(|j| 0.5 * (cols[j][i] + cols[i][j])).collect())
            .collect())
    }

    /// Damped Newton descent on the convex dual.
    fn minimize(&self, mut theta: Vec<f64>) -> Result<(Vec<f64>, usize, f64)> {
        let norm = |g: &[f64]| g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let mut point = self.evaluate(&theta)?;
        let mut damping = 1e-3;
        let mut iterations = 0;
        while iterations < MAX_DUAL_STEPS && norm(&point.gradient) > DUAL_GRADIENT_TOLERANCE {
            iterations += 1;
            let hess = self.hessian(&theta)?;
            let mut accepted = false;
            while damping < 1e12 {
                let mut a = hess.clone();
                for (i, row) in a.iter_mut().enumerate() {
                    row[i] += damping;
                }
                let rhs: Vec<f64> = point.gradient.iter().map(|g| -g).collect();
                let Some(step) = linalg::solve(a, rhs) else {
                    damping *= 10.0;
                    continue;
                };
                let trial: Vec<f64> = theta.iter().zip(&step).map(|(t, s)| t + s).collect();
                match self.evaluate(&trial) {
                    Ok(next)
                        if next.value < point.value
                            || (norm(&next.gradient) < norm(&point.gradient)
                                && next.value <= point.value + 1e-13) =>
                    {
                        let mean = trial.iter().sum::<f64>() / trial.len() as f64;
                        theta = trial.iter().map(|t| t - mean).collect();
                        point = next;
                        damping = (damping / 10.0).max(1e-10);
                        accepted = true;
                        break;
                    }
                    _ => damping *= 10.0,
                }
            }
            if !accepted {
                break;
            }
        }
        let g = norm(&point.gradient);
        Ok((theta, iterations, g))
    }
}

const MAX_DUAL_STEPS: usize = 200;
const DUAL_GRADIENT_TOLERANCE: f64 = 1e-12;
const CONVERGED_GRADIENT: f64 = 1e-10;

/// Maximizes `h(μ)` over Markov measures on the `order`-block presentation
/// of `X` whose image `(order+1)`-block law equals `ν`'s.
///
/// The maximizer is an equilibrium state of a potential `θ∘π` on
/// `(order+1)`-blocks; `θ` minimizes the convex dual
/// `ln λ(A∘e^{θ∘π}) − θ·ν`, whose gradient is the image law minus `ν`.
/// Restarts begin from random `θ` and keep the best lift (lowest index on
/// ties).
pub fn fiber_entropy_optimizer(
    code: &FactorCode,
    nu: &MarkovMeasure,
    order: usize,
    restarts: usize,
    seed: u64,
) -> Result<FiberOptimum> {
    if !(1..=3).contains(&order) {
        return Err(Error::InvalidArgument(format!("order must be 1, 2 or 3, got {order}")));
    }
    if restarts == 0 {
        return Err(Error::InvalidArgument("need at least one restart".into()));
    }
    code.check_codomain(nu.base())?;
    let hx = code.domain().higher_block(order)?;
    let targets = nu.block_distribution(order + 1)?;
    let constraints: Vec<(Word, f64)> = targets.into_iter().filter(|(_, p)| *p > 0.0).collect();
    let index: HashMap<Vec<usize>, usize> = constraints
        .iter()
        .enumerate()
        .map(|(i, (w, _))| (w.symbols().to_vec(), i))
        .collect();

    let names = hx.sft.names().to_vec();
    let mut kept_edges = Vec::new();
    let mut edge_class = HashMap::new();
    for (i, j) in hx.sft.edges() {
        let mut block = hx.blocks[i].symbols().to_vec();
        block.push(hx.blocks[j].last().expect("order >= 1"));
        let img = code.image_word(&Word::from_indices(block));
        if let Some(&c) = index.get(img.symbols()) {
            kept_edges.push((names[i].clone(), names[j].clone()));
            edge_class.insert((i, j), c);
        }
    }
    let support = Sft::from_edges(&names, &kept_edges)?;
    let (sft, kept) = support.trim();
    if sft.is_empty() || !sft.is_irreducible()? {
        return Err(Error::Infeasible(format!(
            "no irreducible lift supports the order-{} constraints",
            order + 1
        )));
    }
    let mut edges = Vec::new();
    let mut covered = vec![false; constraints.len()];
    for (a, b) in sft.edges() {
        let c = edge_class[&(kept[a], kept[b])];
        covered[c] = true;
        edges.push((a, b, c));
    }
    if let Some(c) = covered.iter().position(|&v| !v) {
        return Err(Error::Infeasible(format!(
            "image block `{}` has ν-mass but no lift",
            code.codomain().format_word(&constraints[c].0)
        )));
    }
    let problem = DualProblem {
        n: sft.len(),
        edges,
        target: constraints.iter().map(|(_, p)| *p).collect(),
    };
    let d = problem.target.len();

    let runs: Vec<Result<(Vec<f64>, OptimizerRestart)>> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = trial_rng(seed, r as u64);
            let start: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let (theta, iterations, gradient_norm) = problem.minimize(start)?;
            let entropy = equilibrium(&problem, &sft, &theta)?.entropy();
            Ok((
                theta,
                OptimizerRestart {
                    index: r,
                    entropy,
                    iterations,
                    gradient_norm,
                    converged: gradient_norm <= CONVERGED_GRADIENT,
                },
            ))
        })
        .collect();
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let mut best: Option<usize> = None;
    for (r, (_, s)) in runs.iter().enumerate() {
        let better = match best {
            None => true,
            Some(b) => {
                let cur = &runs[b].1;
                (s.converged && !cur.converged)
                    || (s.converged == cur.converged && s.entropy > cur.entropy + ENTROPY_TIE)
            }
        };
        if better {
            best = Some(r);
        }
    }
    let best = best.expect("at least one restart");
    let theta = &runs[best].0;
    let measure = equilibrium(&problem, &sft, theta)?;
    let deviation = problem
        .evaluate(theta)?
        .gradient
        .iter()
        .fold(0.0f64, |m, g| m.max(g.abs()));
    let entropy = measure.entropy();
    let nu_entropy = nu.entropy();
    Ok(FiberOptimum {
        order,
        blocks: kept.iter().map(|&i| hx.blocks[i].clone()).collect(),
        sft,
        measure,
        entropy,
        nu_entropy,
        relative_entropy: entropy - nu_entropy,
        constraint_deviation: deviation,
        best_restart: best,
        restarts: runs.into_iter().map(|(_, s)| s).collect(),
        heuristic: true,
    })
}

fn equilibrium(problem: &DualProblem, sft: &Sft, theta: &[f64]) -> Result<MarkovMeasure> {
    let w = problem.weights(theta);
    let sp = linalg::perron(&w)?;
    let n = problem.n;
    let transition: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n)
                .map(|j| w[i][j] * sp.right[j] / (sp.lambda * sp.right[i]))
                .collect();
            let s: f64 = row.iter().sum();
            row.iter_mut().for_each(|p| *p /= s);
            row
        })
        .collect();
    let mut stationary: Vec<f64> = (0..n).map(|i| sp.left[i] * sp.right[i]).collect();
    let s: f64 = stationary.iter().sum();
    stationary.iter_mut().for_each(|p| *p /= s);
    MarkovMeasure::with_stationary(sft.clone(), transition, stationary)
}

/// `ν_a[aCa]` as a float, for reports.
pub fn loop_probability(l: &ReturnLoop) -> f64 {
    l.exact
        .as_ref()
        .and_then(|q| q.to_f64())
        .unwrap_or(l.probability)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn abk() -> FactorCode {
        let x = Sft::from_edges(
            &["a", "b1", "b2"],
            &[
                ("a", "b1"),
                ("a", "b2"),
                ("b1", "a"),
                ("b2", "a"),
                ("b1", "b1"),
                ("b2", "b2"),
                ("b1", "b2"),
            ],
        )
        .unwrap();
        let y = Sft::from_edges(&["a", "b"], &[("a", "b"), ("b", "a"), ("b", "b")]).unwrap();
        FactorCode::checked(x, y, vec![0, 1, 1]).unwrap()
    }

    fn abk_nu(code: &FactorCode) -> MarkovMeasure {
        MarkovMeasure::from_rational(
            code.codomain().clone(),
            vec![vec![ratio(0, 1), ratio(1, 1)], vec![ratio(1, 2), ratio(1, 2)]],
        )
        .unwrap()
    }

    #[test]
    fn abk_loops_have_k_plus_one_bands() {
        let code = abk();
        let ind = build_induced(&code, &abk_nu(&code), 0, 12).unwrap();
        assert_eq!(ind.loops.len(), 11);
        for (k, l) in (1..).zip(&ind.loops) {
            assert_eq!(l.length(), k + 1);
            assert_eq!(l.band_count(), k + 1);
            assert_eq!(l.exact.clone().unwrap(), ratio(1, 1 << k));
        }
    }

    #[test]
    fn non_singleton_clump_is_rejected() {
        let code = abk();
        assert!(matches!(
            build_induced(&code, &abk_nu(&code), 1, 10),
            Err(Error::NotSingletonClump(_))
        ));
    }

    #[test]
    fn renewal_chain_reproduces_cylinders() {
        let code = abk();
        let ind = build_induced(&code, &abk_nu(&code), 0, 30).unwrap();
        let m = maximal_induced_measure(&ind);
        let chain = m.hidden_chain().unwrap();
        let blocks = chain.block_distribution(6).unwrap();
        let w = Word::from(vec![0, 1, 2, 0, 2, 0]);
        let direct = cylinder_probability(&m, &w).unwrap();
        assert!((blocks[&w] - direct).abs() < 1e-9);
    }

    #[test]
    fn abk_fiber_over_ab() {
        let code = abk();
        let orbit = PeriodicOrbit::new(code.codomain(), Word::from(vec![0, 1])).unwrap();
        let f = fiber_periodic(&code, &orbit).unwrap();
        assert_eq!(f.components.len(), 1);
        assert!((f.max_entropy - 0.5 * std::f64::consts::LN_2).abs() < 1e-12);
        assert!(f.determinate);
    }

    #[test]
    fn abk_fiber_over_b_is_not_determinate() {
        let code = abk();
        let orbit = PeriodicOrbit::new(code.codomain(), Word::from(vec![1])).unwrap();
        let f = fiber_periodic(&code, &orbit).unwrap();
        assert_eq!(f.components.len(), 2);
        assert_eq!(f.maximal_components, 2);
        assert!(!f.determinate);
    }

    #[test]
    fn homclump_fixed_vector_is_stationary() {
        for k in [0.2, 1.0, 3.0] {
            let h = homclump_family(k).unwrap();
            assert!(h.fixed_deviation < 1e-12);
            assert!(h.x > 0.0 && h.x < 0.5);
        }
        assert!(homclump_family(0.0).is_err());
    }
}
