//! 1-block factor codes `π: X → Y`, preimage counting, clumps, pushforwards
//! and the relative entropy of `X` over an ergodic `ν` on `Y`.
//!
//! The number of `X`-blocks over a `Y`-block `y_0…y_{n-1}` is the sum of
//! the entries of `M_{y_0y_1}⋯M_{y_{n-2}y_{n-1}}`, where `M_{bb'}` is the
//! adjacency of `X` restricted to rows `π⁻¹(b)` and columns `π⁻¹(b')`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::measures::{Measure, MarkovMeasure, PeriodicMeasure, TaggedBlocks};
use crate::rng::{trial_rng, Moments};
use crate::sft::{Diagnostics, HigherBlock, Sft, Word, DEFAULT_WORD_CAP};

/// Length up to which [`FactorCode::validate`] checks that every `Y`-word
/// has a preimage.
pub const IMAGE_CHECK_LENGTH: usize = 8;

/// A 1-block map from the symbols of `domain` to those of `codomain`.
#[derive(Clone, Debug)]
pub struct FactorCode {
    domain: Sft,
    codomain: Sft,
    map: Vec<usize>,
    preimages: Vec<Vec<usize>>,
}

impl FactorCode {
    /// Structural construction only; see [`FactorCode::validate`] for the
    /// factor-map checks.
    pub fn new(domain: Sft, codomain: Sft, map: Vec<usize>) -> Result<Self> {
        if map.len() != domain.len() {
            return Err(Error::InvalidCode(format!(
                "map has {} entries for {} domain symbols",
                map.len(),
                domain.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&b| b >= codomain.len()) {
            return Err(Error::InvalidCode(format!("image index {bad} out of range")));
        }
        let mut preimages = vec![Vec::new(); codomain.len()];
        for (x, &y) in map.iter().enumerate() {
            preimages[y].push(x);
        }
        Ok(FactorCode {
            domain,
            codomain,
            map,
            preimages,
        })
    }

    /// Builds a code from `x -> y` name pairs covering every domain symbol once.
    pub fn from_names<S: AsRef<str>>(domain: Sft, codomain: Sft, pairs: &[(S, S)]) -> Result<Self> {
        let mut map = vec![usize::MAX; domain.len()];
        for (x, y) in pairs {
            let i = domain.index_of(x.as_ref())?;
            let j = codomain.index_of(y.as_ref())?;
            if map[i] != usize::MAX {
                return Err(Error::InvalidCode(format!("symbol `{}` mapped twice", x.as_ref())));
            }
            map[i] = j;
        }
        if let Some(i) = map.iter().position(|&m| m == usize::MAX) {
            return Err(Error::InvalidCode(format!(
                "symbol `{}` has no image",
                domain.name(i)
            )));
        }
        Self::new(domain, codomain, map)
    }

    /// Construction plus a clean [`FactorCode::validate`].
    pub fn checked(domain: Sft, codomain: Sft, map: Vec<usize>) -> Result<Self> {
        let code = Self::new(domain, codomain, map)?;
        let d = code.validate();
        if let Some(e) = d.errors.first() {
            return Err(Error::InvalidCode(e.message.clone()));
        }
        Ok(code)
    }

    /// The identity code of a system onto itself.
    pub fn identity(sft: Sft) -> Self {
        let map = (0..sft.len()).collect();
        Self::new(sft.clone(), sft, map).expect("identity is structurally valid")
    }

    pub fn domain(&self) -> &Sft {
        &self.domain
    }

    pub fn codomain(&self) -> &Sft {
        &self.codomain
    }

    pub fn image(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `π⁻¹(b)` in alphabet order.
    pub fn preimage(&self, b: usize) -> &[usize] {
        &self.preimages[b]
    }

    pub fn image_word(&self, x: &Word) -> Word {
        Word::from_indices(x.symbols().iter().map(|&s| self.map[s]).collect())
    }

    /// Checks that allowed `X`-edges map to allowed `Y`-edges, that the
    /// symbol map is onto, and that every `Y`-word up to
    /// [`IMAGE_CHECK_LENGTH`] has a preimage.
    pub fn validate(&self) -> Diagnostics {
        let mut d = Diagnostics::default();
        for (i, j) in self.domain.edges() {
            let (a, b) = (self.map[i], self.map[j]);
            if !self.codomain.allowed(a, b) {
                d.error(
                    "forbidden_image",
                    format!(
                        "edge {} -> {} maps to forbidden {} -> {}",
                        self.domain.name(i),
                        self.domain.name(j),
                        self.codomain.name(a),
                        self.codomain.name(b)
                    ),
                );
            }
        }
        if d.errors.is_empty() {
            let report = self.image_subshift_check(IMAGE_CHECK_LENGTH);
            for w in &report.missing {
                d.error("missing_preimage", format!("`{w}` has no preimage"));
            }
            if report.missing_truncated {
                d.error("missing_preimage", "further words without preimage omitted".into());
            }
        }
        d
    }

    pub fn transfer_family(&self) -> TransferFamily {
        let mut blocks = BTreeMap::new();
        for (b, c) in self.codomain.edges() {
            let m: Vec<Vec<u8>> = self.preimages[b]
                .iter()
                .map(|&s| {
                    self.preimages[c]
                        .iter()
                        .map(|&t| u8::from(self.domain.allowed(s, t)))
                        .collect()
                })
                .collect();
            blocks.insert((b, c), m);
        }
        TransferFamily { blocks }
    }

    /// Exact number of `X`-words projecting to `y`.
    pub fn count_preimages(&self, y: &Word) -> Result<BigUint> {
        if y.is_empty() || !self.codomain.is_allowed_word(y) {
            return Err(Error::DisallowedWord(self.codomain.format_word(y)));
        }
        let s = y.symbols();
        let mut v = vec![BigUint::one(); self.preimages[s[0]].len()];
        for w in s.windows(2) {
            let (b, c) = (w[0], w[1]);
            let (rows, cols) = (&self.preimages[b], &self.preimages[c]);
            let mut next = vec![BigUint::zero(); cols.len()];
            for (a, &from) in rows.iter().enumerate() {
                if v[a].is_zero() {
                    continue;
                }
                for (k, &to) in cols.iter().enumerate() {
                    if self.domain.allowed(from, to) {
                        next[k] += &v[a];
                    }
                }
            }
            v = next;
        }
        Ok(v.into_iter().sum())
    }

    /// `ln` of the preimage count of every prefix of `y` (finite floats with
    /// rescaling). `None` if some prefix has no preimage.
    pub fn log_count_profile(&self, y: &[usize]) -> Option<Vec<f64>> {
        let mut out = Vec::with_capacity(y.len());
        let first = *y.first()?;
        let mut v = vec![1.0f64; self.preimages[first].len()];
        let mut log_scale = 0.0;
        let total: f64 = v.iter().sum();
        if total == 0.0 {
            return None;
        }
        out.push(total.ln());
        for w in y.windows(2) {
            let (rows, cols) = (&self.preimages[w[0]], &self.preimages[w[1]]);
            let mut next = vec![0.0; cols.len()];
            for (a, &from) in rows.iter().enumerate() {
                if v[a] == 0.0 {
                    continue;
                }
                for (k, &to) in cols.iter().enumerate() {
                    if self.domain.allowed(from, to) {
                        next[k] += v[a];
                    }
                }
            }
            let total: f64 = next.iter().sum();
            if total == 0.0 {
                return None;
            }
            next.iter_mut().for_each(|x| *x /= total);
            log_scale += total.ln();
            out.push(log_scale);
            v = next;
        }
        Some(out)
    }

    /// The code induced on `k`-block presentations of both sides, with the
    /// two recodings.
    pub fn higher_block(&self, k: usize) -> Result<(FactorCode, HigherBlock, HigherBlock)> {
        let hx = self.domain.higher_block(k)?;
        let hy = self.codomain.higher_block(k)?;
        let map = hx
            .blocks
            .iter()
            .map(|b| {
                let img = self.image_word(b);
                hy.symbol_of(img.symbols()).ok_or_else(|| {
                    Error::InvalidCode(format!(
                        "block {} maps outside the codomain",
                        self.domain.format_word(b)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let code = FactorCode::new(hx.sft.clone(), hy.sft.clone(), map)?;
        Ok((code, hx, hy))
    }

    /// Clump sizes, singleton clumps, and singleton blocks on the `k`-block
    /// presentations for `k = 1..=k_max`.
    pub fn clump_analysis(&self, k_max: usize) -> Result<ClumpReport> {
        if k_max == 0 {
            return Err(Error::InvalidArgument("k_max must be at least 1".into()));
        }
        let clumps: Vec<ClumpEntry> = (0..self.codomain.len())
            .map(|b| ClumpEntry {
                symbol: self.codomain.name(b).to_string(),
                preimages: self.preimages[b]
                    .iter()
                    .map(|&x| self.domain.name(x).to_string())
                    .collect(),
            })
            .collect();
        let singleton_clumps = clumps
            .iter()
            .filter(|c| c.preimages.len() == 1)
            .map(|c| c.symbol.clone())
            .collect();
        let n_all = clumps.iter().map(|c| c.preimages.len()).min().unwrap_or(0);

        let mut singletons = Vec::new();
        let mut per_order = Vec::new();
        for k in 1..=k_max {
            let (code_k, _, hy) = self.higher_block(k)?;
            let mut found = 0usize;
            for b in 0..code_k.codomain.len() {
                if code_k.preimages[b].len() == 1 {
                    found += 1;
                    if singletons.len() < SINGLETON_LIST_CAP {
                        singletons.push(SingletonBlock {
                            k,
                            block: self.codomain.format_word(&hy.blocks[b]),
                        });
                    }
                }
            }
            per_order.push(OrderCount { k, singletons: found });
        }
        Ok(ClumpReport {
            clumps,
            singleton_clumps,
            n_all,
            higher_block_singletons: singletons,
            singletons_per_order: per_order,
        })
    }

    /// Lists `Y`-words up to length `n` without preimage and `X`-edges whose
    /// image is forbidden in `Y`.
    pub fn image_subshift_check(&self, n: usize) -> ImageReport {
        let mut forbidden_images = Vec::new();
        for (i, j) in self.domain.edges() {
            if !self.codomain.allowed(self.map[i], self.map[j]) {
                forbidden_images.push(format!(
                    "{} -> {}",
                    self.domain.name(i),
                    self.domain.name(j)
                ));
            }
        }
        let mut missing = Vec::new();
        let mut missing_truncated = false;
        let mut checked_words = 0usize;
        // Depth-first over Y-words, carrying the count vector of the prefix;
        // extensions of a word without preimage are not reported again.
        let mut stack: Vec<(Vec<usize>, Vec<u64>)> = (0..self.codomain.len())
            .rev()
            .map(|b| (vec![b], vec![1u64; self.preimages[b].len()]))
            .collect();
        while let Some((w, v)) = stack.pop() {
            checked_words += 1;
            if v.iter().all(|&c| c == 0) {
                if missing.len() < SINGLETON_LIST_CAP {
                    missing.push(self.codomain.format_word(&Word::from_indices(w)));
                } else {
                    missing_truncated = true;
                }
                continue;
            }
            if w.len() == n || checked_words > DEFAULT_WORD_CAP {
                continue;
            }
            let last = *w.last().expect("non-empty");
            for c in self.codomain.successors(last).collect::<Vec<_>>().into_iter().rev() {
                let cols = &self.preimages[c];
                let next: Vec<u64> = cols
                    .iter()
                    .map(|&t| {
                        self.preimages[last]
                            .iter()
                            .zip(&v)
                            .filter(|(&s, &cnt)| cnt > 0 && self.domain.allowed(s, t))
                            .map(|(_, &cnt)| cnt.min(1))
                            .sum::<u64>()
                            .min(1)
                    })
                    .collect();
                let mut word = w.clone();
                word.push(c);
                stack.push((word, next));
            }
        }
        ImageReport {
            n,
            clean: missing.is_empty() && forbidden_images.is_empty(),
            missing,
            missing_truncated,
            forbidden_images,
        }
    }

    /// `(πμ)[w]` for all positive-mass `Y`-blocks of length `n`.
    pub fn pushforward_blocks(&self, mu: &MarkovMeasure, n: usize) -> Result<BTreeMap<Word, f64>> {
        self.check_domain(mu.base())?;
        let mut out = BTreeMap::new();
        for (x, p) in mu.block_distribution(n)? {
            *out.entry(self.image_word(&x)).or_insert(0.0) += p;
        }
        Ok(out)
    }

    /// Exact pushforward; requires a rational measure.
    pub fn pushforward_blocks_exact(
        &self,
        mu: &MarkovMeasure,
        n: usize,
    ) -> Result<BTreeMap<Word, BigRational>> {
        self.check_domain(mu.base())?;
        let mut out: BTreeMap<Word, BigRational> = BTreeMap::new();
        for (x, p) in mu.block_distribution_exact(n)? {
            *out.entry(self.image_word(&x)).or_insert_with(BigRational::zero) += p;
        }
        Ok(out)
    }

    /// Joint law of `(x_0, π(x_0…x_{n-1}))` under `μ`, for entropy brackets
    /// of the image process.
    pub fn tagged_pushforward(&self, mu: &MarkovMeasure, n: usize) -> Result<TaggedBlocks> {
        self.check_domain(mu.base())?;
        let mut probs = BTreeMap::new();
        for (x, p) in mu.block_distribution(n)? {
            let tag = x.first().unwrap_or(0);
            *probs.entry((tag, self.image_word(&x))).or_insert(0.0) += p;
        }
        Ok(TaggedBlocks { length: n, probs })
    }

    pub(crate) fn check_domain(&self, base: &Sft) -> Result<()> {
        if base != &self.domain {
            return Err(Error::InvalidArgument("measure does not live on the code's domain".into()));
        }
        Ok(())
    }

    pub(crate) fn check_codomain(&self, base: &Sft) -> Result<()> {
        if base != &self.codomain {
            return Err(Error::InvalidArgument(
                "measure does not live on the code's codomain".into(),
            ));
        }
        Ok(())
    }
}

const SINGLETON_LIST_CAP: usize = 10_000;

/// `M_{bb'}` for every allowed `Y`-transition `bb'`.
#[derive(Clone, Debug)]
pub struct TransferFamily {
    pub blocks: BTreeMap<(usize, usize), Vec<Vec<u8>>>,
}

impl TransferFamily {
    pub fn matrix(&self, b: usize, c: usize) -> Option<&Vec<Vec<u8>>> {
        self.blocks.get(&(b, c))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClumpEntry {
    pub symbol: String,
    pub preimages: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingletonBlock {
    pub k: usize,
    pub block: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderCount {
    pub k: usize,
    pub singletons: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClumpReport {
    pub clumps: Vec<ClumpEntry>,
    pub singleton_clumps: Vec<String>,
    /// Minimum clump size over all `Y`-symbols.
    pub n_all: usize,
    pub higher_block_singletons: Vec<SingletonBlock>,
    pub singletons_per_order: Vec<OrderCount>,
}

impl ClumpReport {
    pub fn has_singleton_at(&self, k: usize, block: &str) -> bool {
        self.higher_block_singletons
            .iter()
            .any(|s| s.k == k && s.block == block)
    }

    pub fn singletons_at(&self, k: usize) -> usize {
        self.singletons_per_order
            .iter()
            .find(|o| o.k == k)
            .map_or(0, |o| o.singletons)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ImageReport {
    pub n: usize,
    pub clean: bool,
    pub missing: Vec<String>,
    pub missing_truncated: bool,
    pub forbidden_images: Vec<String>,
}

/// `N_ν(π)`: the smallest clump over `Y`-symbols charged by `ν`.
pub fn bound_n(code: &FactorCode, nu: &Measure) -> Result<usize> {
    code.check_codomain(nu.base())?;
    let mass = nu.symbol_mass();
    let charged: Vec<usize> = (0..mass.len()).filter(|&b| mass[b] > 0.0).collect();
    if charged.is_empty() {
        return Err(Error::ZeroMass("measure charges no symbol".into()));
    }
    let n = charged
        .iter()
        .map(|&b| code.preimage(b).len())
        .min()
        .expect("non-empty");
    if n == 0 {
        return Err(Error::InvalidCode("a charged symbol has no preimage".into()));
    }
    Ok(n)
}

/// Monte-Carlo (or, over a periodic orbit, exact) relative entropy
/// `∫ lim (1/n) log |π⁻¹[y_0…y_{n-1}]| dν`.
#[derive(Clone, Debug, Serialize)]
pub struct RelativeEntropyEstimate {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Mean of `(1/n) ln count` at window length `n`.
    pub value: f64,
    pub std_err: f64,
    /// Mean of `ln count_n − ln count_{n−1}`; free of the `O(1/n)` edge
    /// bias that `value` carries.
    pub increment: f64,
    pub increment_std_err: f64,
    /// Mean of `(1/m) ln count_m`, `m = 1..=n` (the Cesàro averages of the
    /// increments).
    pub cesaro: Vec<f64>,
    /// Mean increment at each `m` (entry `m-1`; the first is `ln count_1`).
    pub increments: Vec<f64>,
    /// Exact limit, when `ν` is a periodic-orbit measure.
    pub limit: Option<f64>,
}

impl RelativeEntropyEstimate {
    pub fn ci95(&self) -> (f64, f64) {
        (
            self.increment - 1.96 * self.increment_std_err,
            self.increment + 1.96 * self.increment_std_err,
        )
    }
}

pub fn relative_entropy_over_nu(
    code: &FactorCode,
    nu: &Measure,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<RelativeEntropyEstimate> {
    if n < 2 {
        return Err(Error::InvalidArgument("window length must be at least 2".into()));
    }
    code.check_codomain(nu.base())?;
    match nu {
        Measure::Periodic(p) => periodic_relative_entropy(code, p, n, seed),
        Measure::Markov(m) => {
            if trials < 2 {
                return Err(Error::InvalidArgument("need at least 2 trials".into()));
            }
            let sampler = m.sampler();
            let profiles: Vec<Option<Vec<f64>>> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(seed, t as u64);
                    let y = sampler.path(&mut rng, n);
                    code.log_count_profile(&y)
                })
                .collect();
            let mut cesaro = vec![0.0; n];
            let mut incr = vec![0.0; n];
            let mut value = Moments::default();
            let mut increment = Moments::default();
            for profile in profiles {
                let profile = profile.ok_or_else(|| {
                    Error::InvalidCode("sampled window has no preimage".into())
                })?;
                for m in 0..n {
                    cesaro[m] += profile[m] / (m + 1) as f64;
                    incr[m] += profile[m] - if m == 0 { 0.0 } else { profile[m - 1] };
                }
                value.push(profile[n - 1] / n as f64);
                increment.push(profile[n - 1] - profile[n - 2]);
            }
            let t = trials as f64;
            Ok(RelativeEntropyEstimate {
                n,
                trials,
                seed,
                value: value.mean(),
                std_err: value.std_err(),
                increment: increment.mean(),
                increment_std_err: increment.std_err(),
                cesaro: cesaro.into_iter().map(|x| x / t).collect(),
                increments: incr.into_iter().map(|x| x / t).collect(),
                limit: None,
            })
        }
    }
}

fn periodic_relative_entropy(
    code: &FactorCode,
    nu: &PeriodicMeasure,
    n: usize,
    seed: u64,
) -> Result<RelativeEntropyEstimate> {
    let orbit = nu.orbit();
    let p = orbit.period();
    let limit = periodic_growth_rate(code, orbit.block().symbols())?;
    let mut cesaro = vec![0.0; n];
    let mut incr = vec![0.0; n];
    for phase in 0..p {
        let y: Vec<usize> = (0..n).map(|i| orbit.at(phase + i)).collect();
        let profile = code
            .log_count_profile(&y)
            .ok_or_else(|| Error::InvalidCode("orbit has no preimage".into()))?;
        for m in 0..n {
            cesaro[m] += profile[m] / ((m + 1) * p) as f64;
            incr[m] += (profile[m] - if m == 0 { 0.0 } else { profile[m - 1] }) / p as f64;
        }
    }
    Ok(RelativeEntropyEstimate {
        n,
        trials: 0,
        seed,
        value: cesaro[n - 1],
        std_err: 0.0,
        increment: incr[n - 1],
        increment_std_err: 0.0,
        cesaro,
        increments: incr,
        limit: Some(limit),
    })
}

/// `(1/p) ln ρ(M_{C_0C_1}⋯M_{C_{p-1}C_0})` for the periodic point `CCC…`.
pub fn periodic_growth_rate(code: &FactorCode, block: &[usize]) -> Result<f64> {
    let p = block.len();
    let pre = |t: usize| code.preimage(block[t % p]);
    let n0 = pre(0).len();
    // Product of transfer matrices around the cycle, as floats.
    let mut prod: Vec<Vec<f64>> = (0..n0)
        .map(|i| (0..n0).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for t in 0..p {
        let (rows, cols) = (pre(t), pre(t + 1));
        let step: Vec<Vec<f64>> = rows
            .iter()
            .map(|&s| {
                cols.iter()
                    .map(|&u| if code.domain().allowed(s, u) { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect();
        prod = prod
            .iter()
            .map(|row| {
                (0..cols.len())
                    .map(|j| row.iter().zip(&step).map(|(a, r)| a * r[j]).sum())
                    .collect()
            })
            .collect();
    }
    let rho = linalg::spectral_radius(&prod)?;
    if rho == 0.0 {
        return Err(Error::InvalidCode("periodic point has no preimage".into()));
    }
    Ok(rho.ln() / p as f64)
}

/// Convenience: exact count as `u128`, for small tests and reports.
pub fn count_as_u128(c: &BigUint) -> Option<u128> {
    c.to_u128()
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

    #[test]
    fn single_symbol_count_is_clump_size() {
        let c = abk();
        assert_eq!(c.count_preimages(&Word::from(vec![1])).unwrap(), BigUint::from(2u32));
        assert_eq!(c.count_preimages(&Word::from(vec![0])).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn disallowed_word_is_rejected() {
        assert!(matches!(
            abk().count_preimages(&Word::from(vec![0, 0])),
            Err(Error::DisallowedWord(_))
        ));
    }

    #[test]
    fn forbidden_image_edge_is_named() {
        let x = Sft::full_shift(&["p", "q"]).unwrap();
        let y = Sft::from_edges(&["a", "b"], &[("a", "b"), ("b", "a"), ("b", "b")]).unwrap();
        let code = FactorCode::new(x, y, vec![0, 1]).unwrap();
        let d = code.validate();
        assert_eq!(d.errors.len(), 1);
        assert!(d.errors[0].message.contains("p -> p"));
    }

    #[test]
    fn shrunk_codomain_reports_missing_preimage() {
        let x = Sft::full_shift(&["p", "q"]).unwrap();
        let y = Sft::full_shift(&["a", "b", "c"]).unwrap();
        let code = FactorCode::new(x, y, vec![0, 1]).unwrap();
        let one = code.image_subshift_check(1);
        assert_eq!(one.missing, vec!["c"]);
        assert!(!one.clean);
        assert!(!code.validate().is_valid());
    }

    #[test]
    fn abk_image_is_clean() {
        assert!(abk().image_subshift_check(8).clean);
    }

    #[test]
    fn transfer_family_matches_adjacency() {
        let c = abk();
        let tf = c.transfer_family();
        assert_eq!(tf.matrix(0, 1).unwrap(), &vec![vec![1, 1]]);
        assert_eq!(tf.matrix(1, 1).unwrap(), &vec![vec![1, 1], vec![0, 1]]);
        assert!(tf.matrix(0, 0).is_none());
    }

    #[test]
    fn bound_uses_charged_symbols_only() {
        let c = abk();
        let y = c.codomain().clone();
        let nu = MarkovMeasure::from_rational(
            y.clone(),
            vec![vec![ratio(0, 1), ratio(1, 1)], vec![ratio(1, 2), ratio(1, 2)]],
        )
        .unwrap();
        assert_eq!(bound_n(&c, &nu.into()).unwrap(), 1);
        let bb = crate::sft::PeriodicOrbit::new(&y, Word::from(vec![1])).unwrap();
        let fixed = PeriodicMeasure::new(y, bb).unwrap();
        assert_eq!(bound_n(&c, &fixed.into()).unwrap(), 2);
    }

    #[test]
    fn periodic_growth_over_ab() {
        let c = abk();
        let rate = periodic_growth_rate(&c, &[0, 1]).unwrap();
        assert!((rate - 0.5 * std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn log_profile_matches_exact_counts() {
        let c = abk();
        let y = vec![0, 1, 1, 1, 0, 1, 0, 1, 1];
        let profile = c.log_count_profile(&y).unwrap();
        for m in 1..=y.len() {
            let exact = c.count_preimages(&Word::from(y[..m].to_vec())).unwrap();
            let exact = exact.to_f64().unwrap().ln();
            assert!((profile[m - 1] - exact).abs() < 1e-12);
        }
    }
}
