//! Fiber posteriors, relatively independent joinings, the interleaving
//! map, plug-in entropy estimates and a relative-Markov diagnostic.
//!
//! Conditioning on `π⁻¹F` is replaced by conditioning on a finite
//! `Y`-window; results depend on the window length, which is therefore
//! always an explicit parameter.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::FactorCode;
use crate::hidden::HiddenChain;
use crate::measures::{ChainSampler, MarkovMeasure};
use crate::rng::{trial_rng, Moments};
use crate::sft::{Sft, Word, DEFAULT_WORD_CAP};

/// A sampled quantity with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
    pub ci95: (f64, f64),
}

impl From<Moments> for Estimate {
    fn from(m: Moments) -> Self {
        let (mean, se) = (m.mean(), m.std_err());
        Estimate {
            mean,
            std_err: se,
            ci95: (mean - 1.96 * se, mean + 1.96 * se),
        }
    }
}

/// Source of `ν`-distributed `Y`-words.
#[derive(Clone, Debug)]
pub enum NuSampler {
    /// A Markov measure on `Y`.
    Markov(MarkovMeasure),
    /// The image of a Markov measure on `X`.
    Image { code: FactorCode, mu: MarkovMeasure },
}

impl NuSampler {
    pub fn base(&self) -> &Sft {
        match self {
            NuSampler::Markov(m) => m.base(),
            NuSampler::Image { code, .. } => code.codomain(),
        }
    }

    pub fn block_distribution(&self, n: usize) -> Result<BTreeMap<Word, f64>> {
        match self {
            NuSampler::Markov(m) => m.block_distribution(n),
            NuSampler::Image { code, mu } => code.pushforward_blocks(mu, n),
        }
    }

    pub fn stream(&self) -> NuStream {
        match self {
            NuSampler::Markov(m) => NuStream {
                sampler: m.sampler(),
                map: None,
                state: None,
            },
            NuSampler::Image { code, mu } => NuStream {
                sampler: mu.sampler(),
                map: Some(code.map().to_vec()),
                state: None,
            },
        }
    }

    pub fn window<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<usize> {
        self.stream().next_chunk(rng, n)
    }
}

/// A stationary `ν`-path produced chunk by chunk.
#[derive(Clone, Debug)]
pub struct NuStream {
    sampler: ChainSampler,
    map: Option<Vec<usize>>,
    state: Option<usize>,
}

impl NuStream {
    pub fn next_chunk<R: Rng + ?Sized>(&mut self, rng: &mut R, n: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let s = match self.state {
                None => self.sampler.first(rng),
                Some(prev) => self.sampler.next(rng, prev),
            };
            self.state = Some(s);
            out.push(match &self.map {
                Some(m) => m[s],
                None => s,
            });
        }
        out
    }
}

/// Forward–backward posteriors of `x_t` given a `Y`-window.
#[derive(Clone, Debug)]
pub struct PosteriorTable {
    pub y: Word,
    /// `marginals[t][s] = P(x_t = s | y)`.
    pub marginals: Vec<Vec<f64>>,
    /// `ln P(y)` under the chosen start.
    pub log_probability: f64,
    backward: Vec<Vec<f64>>,
    transition: Vec<Vec<f64>>,
    mask: Vec<Vec<bool>>,
}

/// Posterior under the stationary start.
pub fn posterior(mu: &MarkovMeasure, code: &FactorCode, y: &Word) -> Result<PosteriorTable> {
    posterior_after(mu, code, y, None)
}

/// Posterior given the window and, if present, the `X`-symbol just before it.
pub fn posterior_after(
    mu: &MarkovMeasure,
    code: &FactorCode,
    y: &Word,
    prev: Option<usize>,
) -> Result<PosteriorTable> {
    code.check_domain(mu.base())?;
    let n = y.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty window".into()));
    }
    if !code.codomain().is_allowed_word(y) {
        return Err(Error::DisallowedWord(code.codomain().format_word(y)));
    }
    let k = mu.base().len();
    let p = mu.transition();
    let mask: Vec<Vec<bool>> = y
        .symbols()
        .iter()
        .map(|&b| (0..k).map(|s| code.image(s) == b).collect())
        .collect();
    let zero = || Error::ZeroMass(format!("window `{}` has probability 0", code.codomain().format_word(y)));

    let mut alpha = vec![vec![0.0; k]; n];
    let mut log_probability = 0.0;
    for s in 0..k {
        if mask[0][s] {
            alpha[0][s] = match prev {
                None => mu.stationary()[s],
                Some(q) => p[q][s],
            };
        }
    }
    for t in 0..n {
        if t > 0 {
            for s in 0..k {
                if !mask[t][s] {
                    continue;
                }
                alpha[t][s] = (0..k).map(|r| alpha[t - 1][r] * p[r][s]).sum();
            }
        }
        let c: f64 = alpha[t].iter().sum();
        if !(c > 0.0) {
            return Err(zero());
        }
        alpha[t].iter_mut().for_each(|a| *a /= c);
        log_probability += c.ln();
    }
    let mut backward = vec![vec![0.0; k]; n];
    for s in 0..k {
        backward[n - 1][s] = if mask[n - 1][s] { 1.0 } else { 0.0 };
    }
    for t in (0..n - 1).rev() {
        for s in 0..k {
            if mask[t][s] {
                backward[t][s] = (0..k).map(|r| p[s][r] * backward[t + 1][r]).sum();
            }
        }
        let c = backward[t].iter().cloned().fold(0.0, f64::max);
        if !(c > 0.0) {
            return Err(zero());
        }
        backward[t].iter_mut().for_each(|b| *b /= c);
    }
    let marginals = (0..n)
        .map(|t| {
            let mut g: Vec<f64> = (0..k).map(|s| alpha[t][s] * backward[t][s]).collect();
            let z: f64 = g.iter().sum();
            g.iter_mut().for_each(|x| *x /= z);
            g
        })
        .collect();
    Ok(PosteriorTable {
        y: y.clone(),
        marginals,
        log_probability,
        backward,
        transition: p.to_vec(),
        mask,
    })
}

impl PosteriorTable {
    pub fn len(&self) -> usize {
        self.marginals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marginals.is_empty()
    }

    fn draw<R: Rng + ?Sized>(rng: &mut R, weights: &[f64]) -> usize {
        let total: f64 = weights.iter().sum();
        let mut u = rng.gen::<f64>() * total;
        for (s, &w) in weights.iter().enumerate() {
            if w > 0.0 {
                if u < w {
                    return s;
                }
                u -= w;
            }
        }
        weights.iter().rposition(|&w| w > 0.0).expect("positive weight")
    }

    /// Draws one fiber path from the posterior.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let n = self.len();
        let k = self.marginals[0].len();
        let mut x = Vec::with_capacity(n);
        x.push(Self::draw(rng, &self.marginals[0]));
        for t in 1..n {
            let prev = x[t - 1];
            let w: Vec<f64> = (0..k)
                .map(|s| {
                    if self.mask[t][s] {
                        self.transition[prev][s] * self.backward[t][s]
                    } else {
                        0.0
                    }
                })
                .collect();
            x.push(Self::draw(rng, &w));
        }
        x
    }
}

/// Exact posteriors for a rational Markov measure.
#[derive(Clone, Debug)]
pub struct ExactPosterior {
    /// `(πμ)[y]`.
    pub probability: BigRational,
    pub marginals: Vec<Vec<BigRational>>,
}

pub fn posterior_exact(mu: &MarkovMeasure, code: &FactorCode, y: &Word) -> Result<ExactPosterior> {
    code.check_domain(mu.base())?;
    let (p, pi) = match (mu.exact_transition(), mu.exact_stationary()) {
        (Some(p), Some(pi)) => (p, pi),
        _ => return Err(Error::NotExact("measure is not rational".into())),
    };
    let n = y.len();
    if n == 0 || !code.codomain().is_allowed_word(y) {
        return Err(Error::DisallowedWord(code.codomain().format_word(y)));
    }
    let k = mu.base().len();
    let on = |t: usize, s: usize| code.image(s) == y.symbols()[t];
    let mut alpha = vec![vec![BigRational::zero(); k]; n];
    for s in 0..k {
        if on(0, s) {
            alpha[0][s] = pi[s].clone();
        }
    }
    for t in 1..n {
        for s in 0..k {
            if on(t, s) {
                let mut acc = BigRational::zero();
                for r in 0..k {
                    if !alpha[t - 1][r].is_zero() && !p[r][s].is_zero() {
                        acc += &alpha[t - 1][r] * &p[r][s];
                    }
                }
                alpha[t][s] = acc;
            }
        }
    }
    let mut beta = vec![vec![BigRational::zero(); k]; n];
    for s in 0..k {
        if on(n - 1, s) {
            beta[n - 1][s] = BigRational::from_integer(1.into());
        }
    }
    for t in (0..n - 1).rev() {
        for s in 0..k {
            if on(t, s) {
                let mut acc = BigRational::zero();
                for r in 0..k {
                    if !beta[t + 1][r].is_zero() && !p[s][r].is_zero() {
                        acc += &p[s][r] * &beta[t + 1][r];
                    }
                }
                beta[t][s] = acc;
            }
        }
    }
    let probability = alpha[n - 1]
        .iter()
        .fold(BigRational::zero(), |acc, a| acc + a);
    if probability.is_zero() {
        return Err(Error::ZeroMass("window has probability 0".into()));
    }
    let marginals = (0..n)
        .map(|t| {
            (0..k)
                .map(|s| &alpha[t][s] * &beta[t][s] / &probability)
                .collect()
        })
        .collect();
    Ok(ExactPosterior {
        probability,
        marginals,
    })
}

/// One draw from the relatively independent joining over a window.
#[derive(Clone, Debug, Serialize)]
pub struct JoiningSample {
    pub y: Vec<usize>,
    pub u: Vec<usize>,
    pub v: Vec<usize>,
    pub coincidences: Vec<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct JoiningReport {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub center: usize,
    /// Frequency of `u_c = v_c` at the window center.
    pub coincidence: Estimate,
    /// Mean of `Σ_s P₁(x_c = s | y) P₂(x_c = s | y)`, the conditional
    /// expectation of the coincidence indicator.
    pub overlap: Estimate,
    /// Block length up to which `πμ₁ = πμ₂ = ν` was verified.
    pub pushforward_checked: usize,
}

/// Longest block length used to compare the images of two lifts.
pub const PUSHFORWARD_CHECK_LENGTH: usize = 8;
const PUSHFORWARD_TOLERANCE: f64 = 1e-12;

/// Compares `πμ₁`, `πμ₂` and `ν` on blocks of length `length`.
pub fn check_common_image(
    mu1: &MarkovMeasure,
    mu2: &MarkovMeasure,
    code: &FactorCode,
    nu: &NuSampler,
    length: usize,
) -> Result<()> {
    let a = code.pushforward_blocks(mu1, length)?;
    let b = code.pushforward_blocks(mu2, length)?;
    let c = nu.block_distribution(length)?;
    let dev = |x: &BTreeMap<Word, f64>, y: &BTreeMap<Word, f64>| {
        x.keys()
            .chain(y.keys())
            .map(|w| (x.get(w).unwrap_or(&0.0) - y.get(w).unwrap_or(&0.0)).abs())
            .fold(0.0, f64::max)
    };
    let deviation = dev(&a, &b).max(dev(&a, &c));
    if deviation > PUSHFORWARD_TOLERANCE {
        return Err(Error::PushforwardMismatch { length, deviation });
    }
    Ok(())
}

/// A single joining draw for trial `trial` under master seed `seed`.
pub fn joining_sample(
    mu1: &MarkovMeasure,
    mu2: &MarkovMeasure,
    code: &FactorCode,
    nu: &NuSampler,
    n: usize,
    seed: u64,
    trial: u64,
) -> Result<JoiningSample> {
    let mut rng = trial_rng(seed, trial);
    let y = Word::from(nu.window(&mut rng, n));
    let u = posterior(mu1, code, &y)?.sample(&mut rng);
    let v = posterior(mu2, code, &y)?.sample(&mut rng);
    let coincidences = u.iter().zip(&v).map(|(a, b)| a == b).collect();
    Ok(JoiningSample {
        y: y.into_inner(),
        u,
        v,
        coincidences,
    })
}

pub fn sample_joining(
    mu1: &MarkovMeasure,
    mu2: &MarkovMeasure,
    code: &FactorCode,
    nu: &NuSampler,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<JoiningReport> {
    if n == 0 || trials < 2 {
        return Err(Error::InvalidArgument("need n >= 1 and at least 2 trials".into()));
    }
    let checked = n.min(PUSHFORWARD_CHECK_LENGTH);
    check_common_image(mu1, mu2, code, nu, checked)?;
    let center = n / 2;
    let draws: Vec<Result<(f64, f64)>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let y = Word::from(nu.window(&mut rng, n));
            let p1 = posterior(mu1, code, &y)?;
            let p2 = posterior(mu2, code, &y)?;
            let u = p1.sample(&mut rng);
            let v = p2.sample(&mut rng);
            let hit = if u[center] == v[center] { 1.0 } else { 0.0 };
            let overlap = p1.marginals[center]
                .iter()
                .zip(&p2.marginals[center])
                .map(|(a, b)| a * b)
                .sum();
            Ok((hit, overlap))
        })
        .collect();
    let mut hits = Moments::default();
    let mut overlaps = Moments::default();
    for d in draws {
        let (h, o) = d?;
        hits.push(h);
        overlaps.push(o);
    }
    Ok(JoiningReport {
        n,
        trials,
        seed,
        center,
        coincidence: hits.into(),
        overlap: overlaps.into(),
        pushforward_checked: checked,
    })
}

/// Output of the interleaving map with its bookkeeping.
#[derive(Clone, Debug, Serialize)]
pub struct InterleaveSample {
    pub w: Vec<usize>,
    /// 1 where `w_k` was read from `u`, 2 where from `v`.
    pub sources: Vec<u8>,
    /// `N_k`: the last coincidence strictly before `k`, if any.
    pub last_coincidence: Vec<Option<usize>>,
}

/// `w_k = u_k` if `r_{N_k} = 1` and `v_k` otherwise, where `N_k` is the
/// last `n < k` with `u_n = v_n`; `r_minus_inf` stands in for `r_{N_k}`
/// before the first coincidence.
pub fn interleave(
    code: &FactorCode,
    u: &Word,
    v: &Word,
    r: &[u8],
    r_minus_inf: u8,
) -> Result<InterleaveSample> {
    let x = code.domain();
    if u.len() != v.len() || r.len() != u.len() {
        return Err(Error::Shape("u, v and r must have equal length".into()));
    }
    if r.iter().chain(std::iter::once(&r_minus_inf)).any(|&c| c != 1 && c != 2) {
        return Err(Error::InvalidArgument("coins must be 1 or 2".into()));
    }
    for w in [u, v] {
        if !x.is_allowed_word(w) {
            return Err(Error::DisallowedWord(x.format_word(w)));
        }
    }
    if code.image_word(u) != code.image_word(v) {
        return Err(Error::InvalidArgument("u and v have different images".into()));
    }
    let mut out = InterleaveSample {
        w: Vec::with_capacity(u.len()),
        sources: Vec::with_capacity(u.len()),
        last_coincidence: Vec::with_capacity(u.len()),
    };
    let mut last = None;
    for k in 0..u.len() {
        let coin = last.map_or(r_minus_inf, |n: usize| r[n]);
        let (a, b) = (u.symbols()[k], v.symbols()[k]);
        out.w.push(if coin == 1 { a } else { b });
        out.sources.push(coin);
        out.last_coincidence.push(last);
        if a == b {
            last = Some(k);
        }
    }
    debug_assert!(x.is_allowed_word(&Word::from(out.w.clone())));
    Ok(out)
}

/// Streaming form of [`interleave`].
#[derive(Clone, Copy, Debug)]
pub struct Interleaver {
    coin: u8,
}

impl Interleaver {
    pub fn new(r_minus_inf: u8) -> Self {
        Interleaver { coin: r_minus_inf }
    }

    /// Emits `w_k`; `coin` is consulted only at a coincidence.
    pub fn step(&mut self, u: usize, v: usize, coin: impl FnOnce() -> u8) -> usize {
        let w = if self.coin == 1 { u } else { v };
        if u == v {
            self.coin = coin();
        }
        w
    }
}

#[derive(Clone, Debug)]
pub struct InterleavedStream {
    pub w: Vec<usize>,
    pub coincidences: usize,
}

/// Default chunk length for [`interleave_stream`].
pub const STREAM_CHUNK: usize = 1024;

/// A long sample of `π₃(u, v, r)` with `(u, v)` drawn from the joining of
/// `μ₁` and `μ₂` over `ν`. The path is produced in chunks; each chunk's
/// posteriors condition on the chunk's `Y`-symbols and on the previous
/// `X`-symbol, which is exact when the lifts are deterministic.
pub fn interleave_stream(
    mu1: &MarkovMeasure,
    mu2: &MarkovMeasure,
    code: &FactorCode,
    nu: &NuSampler,
    length: usize,
    seed: u64,
) -> Result<InterleavedStream> {
    check_common_image(mu1, mu2, code, nu, PUSHFORWARD_CHECK_LENGTH.min(length.max(1)))?;
    let mut rng = trial_rng(seed, 0);
    let mut stream = nu.stream();
    let coin = |rng: &mut rand_chacha::ChaCha8Rng| if rng.gen_bool(0.5) { 1u8 } else { 2u8 };
    let mut inter = Interleaver::new(coin(&mut rng));
    let mut w = Vec::with_capacity(length);
    let mut coincidences = 0usize;
    let (mut prev_u, mut prev_v) = (None, None);
    while w.len() < length {
        let m = STREAM_CHUNK.min(length - w.len());
        let y = Word::from(stream.next_chunk(&mut rng, m));
        let u = posterior_after(mu1, code, &y, prev_u)?.sample(&mut rng);
        let v = posterior_after(mu2, code, &y, prev_v)?.sample(&mut rng);
        for k in 0..m {
            if u[k] == v[k] {
                coincidences += 1;
            }
            let out = inter.step(u[k], v[k], || coin(&mut rng));
            w.push(out);
        }
        prev_u = u.last().copied();
        prev_v = v.last().copied();
    }
    Ok(InterleavedStream { w, coincidences })
}

/// Block bootstrap settings.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Bootstrap {
    pub blocks: usize,
    pub resamples: usize,
    pub seed: u64,
}

impl Default for Bootstrap {
    fn default() -> Self {
        Bootstrap {
            blocks: 32,
            resamples: 100,
            seed: 0,
        }
    }
}

/// Plug-in entropy-rate estimates from one long sample (cyclic blocks).
#[derive(Clone, Debug, Serialize)]
pub struct EmpiricalEntropy {
    pub length: usize,
    pub n_max: usize,
    pub alphabet: usize,
    /// `conditional[n] = H(x_0 | x_1…x_n)`, `n = 0..=n_max`.
    pub conditional: Vec<f64>,
    pub conditional_ci: Vec<(f64, f64)>,
    /// `block_rate[n-1] = H_n / n`, `n = 1..=n_max`.
    pub block_rate: Vec<f64>,
    pub block_rate_ci: Vec<(f64, f64)>,
    pub bootstrap: Bootstrap,
}

impl EmpiricalEntropy {
    /// The conditional estimate at the largest context.
    pub fn estimate(&self) -> f64 {
        self.conditional[self.n_max]
    }
}

pub fn empirical_entropy(stream: &[usize], alphabet: usize, n_max: usize) -> Result<EmpiricalEntropy> {
    empirical_entropy_with(stream, alphabet, n_max, Bootstrap::default())
}

pub fn empirical_entropy_with(
    stream: &[usize],
    alphabet: usize,
    n_max: usize,
    bootstrap: Bootstrap,
) -> Result<EmpiricalEntropy> {
    let n = stream.len();
    let big = alphabet.max(2) as u64;
    let contexts = big
        .checked_pow(n_max as u32)
        .ok_or_else(|| Error::InsufficientData("context space too large".into()))?;
    let span = big
        .checked_pow(n_max as u32 + 1)
        .ok_or_else(|| Error::InsufficientData("context space too large".into()))?;
    if (n as u64) < contexts.saturating_mul(10) {
        return Err(Error::InsufficientData(format!(
            "length {n} is below 10·{alphabet}^{n_max}"
        )));
    }
    if bootstrap.blocks == 0 || bootstrap.blocks > n {
        return Err(Error::InvalidArgument("bad bootstrap block count".into()));
    }
    if let Some(&s) = stream.iter().find(|&&s| s >= alphabet) {
        return Err(Error::InvalidArgument(format!("symbol {s} outside alphabet")));
    }
    let len = n_max + 1;
    let high = span / big;
    let mut code = 0u64;
    for t in 0..len {
        code = code * big + stream[t % n] as u64;
    }
    let mut ids: HashMap<u64, u32> = HashMap::new();
    let mut codes: Vec<u64> = Vec::new();
    let mut per_block: Vec<Vec<u32>> = vec![Vec::new(); bootstrap.blocks];
    for i in 0..n {
        if i > 0 {
            code = (code % high) * big + stream[(i + len - 1) % n] as u64;
        }
        let id = *ids.entry(code).or_insert_with(|| {
            codes.push(code);
            (codes.len() - 1) as u32
        }) as usize;
        let b = i * bootstrap.blocks / n;
        let counts = &mut per_block[b];
        if counts.len() <= id {
            counts.resize(id + 1, 0);
        }
        counts[id] += 1;
    }
    let d = codes.len();
    // level_of[j][id]: index of the j-prefix (j = 1..=len) of block `id`.
    let mut level_of: Vec<Vec<u32>> = Vec::with_capacity(len);
    let mut level_size = Vec::with_capacity(len);
    for j in 1..=len {
        let div = big.pow((len - j) as u32);
        let mut map: HashMap<u64, u32> = HashMap::new();
        let idx: Vec<u32> = codes
            .iter()
            .map(|&c| {
                let next = map.len() as u32;
                *map.entry(c / div).or_insert(next)
            })
            .collect();
        level_size.push(map.len());
        level_of.push(idx);
    }
    let estimates = |counts: &[u64]| -> (Vec<f64>, Vec<f64>) {
        let total: u64 = counts.iter().sum();
        let nt = total as f64;
        let mut h = vec![0.0; len + 1];
        for j in 1..=len {
            let mut agg = vec![0u64; level_size[j - 1]];
            for (id, &c) in counts.iter().enumerate() {
                agg[level_of[j - 1][id] as usize] += c;
            }
            h[j] = nt.ln()
                - agg
                    .iter()
                    .filter(|&&c| c > 0)
                    .map(|&c| c as f64 * (c as f64).ln())
                    .sum::<f64>()
                    / nt;
        }
        let cond = (0..len).map(|m| h[m + 1] - h[m]).collect();
        let rate = (1..=n_max).map(|m| h[m] / m as f64).collect();
        (cond, rate)
    };
    let sum_blocks = |chosen: &[usize]| -> Vec<u64> {
        let mut acc = vec![0u64; d];
        for &b in chosen {
            for (id, &c) in per_block[b].iter().enumerate() {
                acc[id] += c as u64;
            }
        }
        acc
    };
    let all: Vec<usize> = (0..bootstrap.blocks).collect();
    let (conditional, block_rate) = estimates(&sum_blocks(&all));
    let resamples: Vec<(Vec<f64>, Vec<f64>)> = (0..bootstrap.resamples)
        .into_par_iter()
        .map(|r| {
            let mut rng = trial_rng(bootstrap.seed, r as u64);
            let chosen: Vec<usize> = (0..bootstrap.blocks)
                .map(|_| rng.gen_range(0..bootstrap.blocks))
                .collect();
            estimates(&sum_blocks(&chosen))
        })
        .collect();
    // Basic bootstrap interval `(2θ̂ − q₉₇.₅, 2θ̂ − q₂.₅)`: resampled plug-in
    // entropies sit below θ̂, and reflecting removes that shift.
    let ci = |point: f64, values: Vec<f64>| -> (f64, f64) {
        if values.is_empty() {
            return (f64::NAN, f64::NAN);
        }
        let mut v = values;
        v.sort_by(|a, b| a.total_cmp(b));
        let at = |q: f64| v[((v.len() - 1) as f64 * q).round() as usize];
        (2.0 * point - at(0.975), 2.0 * point - at(0.025))
    };
    let conditional_ci = (0..len)
        .map(|m| ci(conditional[m], resamples.iter().map(|r| r.0[m]).collect()))
        .collect();
    let block_rate_ci = (0..n_max)
        .map(|m| ci(block_rate[m], resamples.iter().map(|r| r.1[m]).collect()))
        .collect();
    Ok(EmpiricalEntropy {
        length: n,
        n_max,
        alphabet,
        conditional,
        conditional_ci,
        block_rate,
        block_rate_ci,
        bootstrap,
    })
}

/// Conditional-entropy gaps `H(x_0 | x_1, y) − H(x_0 | x_1…x_k, y)` for
/// `k = 1..=n`, with `y = y_{-m}…y_m`.
#[derive(Clone, Debug, Serialize)]
pub struct MarkovGapReport {
    pub n: usize,
    pub m: usize,
    /// `conditional[k-1] = H(x_0 | x_1…x_k, y)`.
    pub conditional: Vec<f64>,
    /// `gaps[k-1]`, nondecreasing in `k`; `gaps[0] = 0`.
    pub gaps: Vec<f64>,
    pub terminal_gap: f64,
}

/// Largest `n` and `m` accepted by [`relative_markov_diagnostic`].
pub const DIAGNOSTIC_CAP: usize = 12;

pub fn relative_markov_diagnostic(
    chain: &HiddenChain,
    code: &FactorCode,
    n: usize,
    m: usize,
) -> Result<MarkovGapReport> {
    code.check_domain(chain.base())?;
    if n == 0 || n > DIAGNOSTIC_CAP || m > DIAGNOSTIC_CAP {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= n <= {DIAGNOSTIC_CAP} and m <= {DIAGNOSTIC_CAP}"
        )));
    }
    let mut conditional = Vec::with_capacity(n);
    for k in 1..=n {
        let hi = k.max(m);
        let joint = observed_entropy(chain, code, m, hi, |t| (0..=k as isize).contains(&t))?;
        let rest = observed_entropy(chain, code, m, hi, |t| (1..=k as isize).contains(&t))?;
        conditional.push(joint - rest);
    }
    let gaps: Vec<f64> = conditional.iter().map(|c| conditional[0] - c).collect();
    Ok(MarkovGapReport {
        n,
        m,
        terminal_gap: *gaps.last().expect("n >= 1"),
        conditional,
        gaps,
    })
}

/// Entropy of the observations at positions `-m..=hi`: the `X`-symbol
/// where `sees_x(t)`, the `Y`-symbol elsewhere.
fn observed_entropy(
    chain: &HiddenChain,
    code: &FactorCode,
    m: usize,
    hi: usize,
    sees_x: impl Fn(isize) -> bool,
) -> Result<f64> {
    let z = chain.len();
    let lo = -(m as isize);
    let hi = hi as isize;
    let mut entropy = 0.0;
    let mut visited = 0usize;
    let mut stack: Vec<(isize, Vec<f64>)> = vec![(lo, chain.stationary().to_vec())];
    while let Some((t, v)) = stack.pop() {
        visited += 1;
        if visited > DEFAULT_WORD_CAP {
            return Err(Error::CapExceeded {
                count: format!("more than {visited} window prefixes"),
                cap: DEFAULT_WORD_CAP,
            });
        }
        let x_obs = sees_x(t);
        let mut groups: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for (s, &p) in v.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let e = chain.emission(s);
            let key = if x_obs { e } else { code.image(e) };
            groups.entry(key).or_insert_with(|| vec![0.0; z])[s] = p;
        }
        for (_, g) in groups {
            if t == hi {
                let p: f64 = g.iter().sum();
                if p > 0.0 {
                    entropy -= p * p.ln();
                }
                continue;
            }
            let mut next = vec![0.0; z];
            for (s, &p) in g.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                for &(u, q) in chain.transitions(s) {
                    next[u] += p * q;
                }
            }
            stack.push((t + 1, next));
        }
    }
    Ok(entropy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> Sft {
        Sft::from_matrix(&["0", "1"], &[vec![1, 1], vec![1, 0]]).unwrap()
    }

    #[test]
    fn interleave_of_equal_words_is_identity() {
        let x = golden();
        let code = FactorCode::identity(x);
        let u = Word::from(vec![0, 1, 0, 0, 1]);
        let out = interleave(&code, &u, &u, &[2, 1, 2, 2, 1], 2).unwrap();
        assert_eq!(out.w, u.symbols());
    }

    #[test]
    fn interleave_rejects_bad_coins() {
        let code = FactorCode::identity(golden());
        let u = Word::from(vec![0, 1]);
        assert!(interleave(&code, &u, &u, &[1, 3], 1).is_err());
    }

    #[test]
    fn identity_code_posterior_is_point_mass() {
        let x = golden();
        let mu = MarkovMeasure::new(x.clone(), vec![vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap();
        let code = FactorCode::identity(x);
        let t = posterior(&mu, &code, &Word::from(vec![0, 1, 0])).unwrap();
        assert_eq!(t.marginals[1], vec![0.0, 1.0]);
    }

    #[test]
    fn markov_measure_has_zero_gap() {
        let x = golden();
        let mu = MarkovMeasure::new(x.clone(), vec![vec![0.3, 0.7], vec![1.0, 0.0]]).unwrap();
        let code = FactorCode::identity(x);
        let r = relative_markov_diagnostic(&HiddenChain::from_markov(&mu), &code, 4, 2).unwrap();
        assert!(r.gaps.iter().all(|g| g.abs() < 1e-12));
    }

    #[test]
    fn fair_coin_entropy_is_log2() {
        let x: Vec<usize> = (0..200_000)
            .map(|i| {
                let mut r = trial_rng(3, i as u64);
                r.gen_range(0..2)
            })
            .collect();
        let e = empirical_entropy(&x, 2, 4).unwrap();
        assert!((e.estimate() - std::f64::consts::LN_2).abs() < 1e-3);
        for w in e.conditional.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn periodic_word_has_zero_entropy() {
        let x: Vec<usize> = (0..9_999).map(|i| i % 3).collect();
        let e = empirical_entropy(&x, 3, 3).unwrap();
        assert!(e.estimate().abs() < 1e-12);
    }

    #[test]
    fn short_stream_is_rejected() {
        assert!(matches!(
            empirical_entropy(&[0, 1, 0, 1], 2, 3),
            Err(Error::InsufficientData(_))
        ));
    }
}
