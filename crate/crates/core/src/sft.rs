//! One-step subshifts of finite type presented by a 0/1 transition graph.
//!
//! Symbols are opaque names mapped to dense indices when the system is
//! built; everything downstream works with indices. A [`Word`] is a plain
//! index sequence and only means something relative to the [`Sft`] it was
//! checked against.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph;

/// Default cap on the number of words any enumeration may produce.
pub const DEFAULT_WORD_CAP: usize = 1_000_000;

/// A finite word over an alphabet, as dense symbol indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn from_indices(symbols: Vec<usize>) -> Self {
        Word(symbols)
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Word with the first symbol removed.
    pub fn drop_first(&self) -> Word {
        Word(self.0[1..].to_vec())
    }

    /// Word with the last symbol removed.
    pub fn drop_last(&self) -> Word {
        Word(self.0[..self.0.len() - 1].to_vec())
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

/// A stranded symbol or malformed entry found by validation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostic {
    pub kind: &'static str,
    pub message: String,
}

/// Outcome of a validation pass. Warnings do not stop construction.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub errors: Vec<Diagnostic>,
    pub warnings: Vec<Diagnostic>,
}

impl Diagnostics {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn is_clean(&self) -> bool {
        self.errors.is_empty() && self.warnings.is_empty()
    }

    pub(crate) fn error(&mut self, kind: &'static str, message: String) {
        self.errors.push(Diagnostic { kind, message });
    }

    pub(crate) fn warn(&mut self, kind: &'static str, message: String) {
        self.warnings.push(Diagnostic { kind, message });
    }
}

/// A 1-step shift of finite type: an alphabet plus allowed 2-blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sft {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adjacency: Vec<bool>,
}

impl Sft {
    /// Builds a system from a list of allowed transitions given by name.
    pub fn from_edges<S: AsRef<str>>(names: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut sft = Self::empty(names)?;
        for (from, to) in edges {
            let i = sft.index_of(from.as_ref())?;
            let j = sft.index_of(to.as_ref())?;
            let n = sft.len();
            sft.adjacency[i * n + j] = true;
        }
        Ok(sft)
    }

    /// Builds a system from a 0/1 matrix indexed in alphabet order.
    pub fn from_matrix<S: AsRef<str>>(names: &[S], matrix: &[Vec<u8>]) -> Result<Self> {
        let mut sft = Self::empty(names)?;
        let n = sft.len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("expected {n}x{n}")));
        }
        for (i, row) in matrix.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => sft.adjacency[i * n + j] = true,
                    other => {
                        return Err(Error::NonBinaryEntry {
                            row: i,
                            col: j,
                            value: other as i64,
                        })
                    }
                }
            }
        }
        Ok(sft)
    }

    /// The full shift on the given symbols.
    pub fn full_shift<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut sft = Self::empty(names)?;
        sft.adjacency.iter_mut().for_each(|e| *e = true);
        Ok(sft)
    }

    fn empty<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut index = HashMap::with_capacity(names.len());
        let mut owned = Vec::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            let name = name.as_ref().to_string();
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(Error::InvalidArgument(format!("bad symbol name `{name}`")));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateSymbol(name));
            }
            owned.push(name);
        }
        let n = owned.len();
        Ok(Sft {
            names: owned,
            index,
            adjacency: vec![false; n * n],
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    #[inline]
    pub fn allowed(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.len() + j]
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| self.allowed(i, j))
    }

    pub fn predecessors(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.allowed(i, j))
    }

    pub fn successor_lists(&self) -> Vec<Vec<usize>> {
        (0..self.len()).map(|i| self.successors(i).collect()).collect()
    }

    /// Allowed transitions in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.allowed(i, j))
            .collect()
    }

    /// Adjacency as a dense float matrix.
    pub fn adjacency_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if self.allowed(i, j) { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect()
    }

    /// Reports stranded symbols (zero in- or out-degree).
    pub fn validate(&self) -> Diagnostics {
        let mut d = Diagnostics::default();
        if self.is_empty() {
            d.error("empty_alphabet", "alphabet is empty".into());
        }
        for i in 0..self.len() {
            let out = self.successors(i).count();
            let inn = self.predecessors(i).count();
            if out == 0 || inn == 0 {
                d.warn(
                    "stranded_symbol",
                    format!(
                        "stranded symbol `{}` (in-degree {inn}, out-degree {out})",
                        self.names[i]
                    ),
                );
            }
        }
        d
    }

    /// Removes stranded symbols until none remain. Returns the trimmed
    /// system and the original index of each surviving symbol.
    pub fn trim(&self) -> (Sft, Vec<usize>) {
        let n = self.len();
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for i in 0..n {
                if !alive[i] {
                    continue;
                }
                let out = (0..n).any(|j| alive[j] && self.allowed(i, j));
                let inn = (0..n).any(|j| alive[j] && self.allowed(j, i));
                if !out || !inn {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let kept: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
        (self.induced(&kept), kept)
    }

    /// Subsystem on the given symbols (in the given order) with all edges
    /// among them.
    pub fn induced(&self, vertices: &[usize]) -> Sft {
        let names: Vec<&str> = vertices.iter().map(|&v| self.names[v].as_str()).collect();
        let mut sub = Sft::empty(&names).expect("names already unique");
        let m = vertices.len();
        for (a, &i) in vertices.iter().enumerate() {
            for (b, &j) in vertices.iter().enumerate() {
                sub.adjacency[a * m + b] = self.allowed(i, j);
            }
        }
        sub
    }

    pub fn is_irreducible(&self) -> Result<bool> {
        if self.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let succ = self.successor_lists();
        let comps = graph::strongly_connected(self.len(), &succ);
        Ok(comps.len() == 1 && graph::is_nontrivial(&comps[0], &succ))
    }

    /// Strongly connected components in topological order.
    pub fn strongly_connected_components(&self) -> Vec<Component> {
        let succ = self.successor_lists();
        graph::strongly_connected(self.len(), &succ)
            .into_iter()
            .map(|vertices| Component {
                trivial: !graph::is_nontrivial(&vertices, &succ),
                sft: self.induced(&vertices),
                vertices,
            })
            .collect()
    }

    /// True iff every adjacent pair of the word is an allowed transition.
    pub fn is_allowed_word(&self, word: &Word) -> bool {
        word.symbols().iter().all(|&s| s < self.len())
            && word.symbols().windows(2).all(|p| self.allowed(p[0], p[1]))
    }

    /// Checks a word against this system.
    pub fn word(&self, symbols: Vec<usize>) -> Result<Word> {
        let w = Word(symbols);
        if w.is_empty() || !self.is_allowed_word(&w) {
            return Err(Error::DisallowedWord(self.format_word(&w)));
        }
        Ok(w)
    }

    /// Builds a word from symbol names.
    pub fn word_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Word> {
        let symbols = names
            .iter()
            .map(|n| self.index_of(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.word(symbols)
    }

    /// Parses a word. Whitespace-separated tokens are taken as symbol
    /// names; otherwise the string is split into names, longest match first.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.split_whitespace().count() > 1 {
            let tokens: Vec<&str> = text.split_whitespace().collect();
            return self.word_from_names(&tokens);
        }
        let mut names: Vec<&str> = self.names.iter().map(String::as_str).collect();
        names.sort_by_key(|n| std::cmp::Reverse(n.len()));
        let mut out = Vec::new();
        if self.tokenize(text, &names, &mut out) {
            self.word(out)
        } else {
            Err(Error::UnknownSymbol(text.to_string()))
        }
    }

    fn tokenize(&self, rest: &str, names: &[&str], out: &mut Vec<usize>) -> bool {
        if rest.is_empty() {
            return true;
        }
        for name in names {
            if let Some(tail) = rest.strip_prefix(name) {
                let idx = self.index[*name];
                // Prune on adjacency so ambiguous names resolve to an allowed word.
                if out.last().is_some_and(|&p| !self.allowed(p, idx)) {
                    continue;
                }
                out.push(idx);
                if self.tokenize(tail, names, out) {
                    return true;
                }
                out.pop();
            }
        }
        false
    }

    /// Concatenated symbol names, space-separated when any name is longer
    /// than one character would make that ambiguous.
    pub fn format_word(&self, word: &Word) -> String {
        let single = self.names.iter().all(|n| n.chars().count() == 1);
        let parts: Vec<&str> = word
            .symbols()
            .iter()
            .map(|&s| self.names.get(s).map(String::as_str).unwrap_or("?"))
            .collect();
        if single {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }

    /// Number of allowed words of length `n`, exactly.
    pub fn word_count(&self, n: usize) -> BigUint {
        if n == 0 {
            return BigUint::one();
        }
        let m = self.len();
        let mut v = vec![BigUint::one(); m];
        for _ in 1..n {
            let mut next = vec![BigUint::zero(); m];
            for i in 0..m {
                if v[i].is_zero() {
                    continue;
                }
                for j in self.successors(i) {
                    next[j] += &v[i];
                }
            }
            v = next;
        }
        v.into_iter().sum()
    }

    /// All allowed words of length `n` in lexicographic order, capped at
    /// [`DEFAULT_WORD_CAP`].
    pub fn enumerate_words(&self, n: usize) -> Result<Vec<Word>> {
        self.enumerate_words_with_cap(n, DEFAULT_WORD_CAP)
    }

    pub fn enumerate_words_with_cap(&self, n: usize, cap: usize) -> Result<Vec<Word>> {
        if n == 0 {
            return Err(Error::InvalidArgument("word length must be at least 1".into()));
        }
        let count = self.word_count(n);
        if count.to_usize().is_none_or(|c| c > cap) {
            return Err(Error::CapExceeded {
                count: count.to_string(),
                cap,
            });
        }
        let mut out = Vec::with_capacity(count.to_usize().unwrap_or(0));
        let mut buf = Vec::with_capacity(n);
        for s in 0..self.len() {
            buf.push(s);
            self.extend_words(&mut buf, n, &mut out);
            buf.pop();
        }
        Ok(out)
    }

    fn extend_words(&self, buf: &mut Vec<usize>, n: usize, out: &mut Vec<Word>) {
        if buf.len() == n {
            out.push(Word(buf.clone()));
            return;
        }
        let last = *buf.last().expect("non-empty prefix");
        for t in self.successors(last) {
            buf.push(t);
            self.extend_words(buf, n, out);
            buf.pop();
        }
    }

    /// The `k`-block presentation: symbols are allowed `k`-blocks, with an
    /// edge wherever two blocks overlap in an allowed `k+1`-block.
    pub fn higher_block(&self, k: usize) -> Result<HigherBlock> {
        self.higher_block_with_cap(k, DEFAULT_WORD_CAP)
    }

    pub fn higher_block_with_cap(&self, k: usize, cap: usize) -> Result<HigherBlock> {
        if k == 0 {
            return Err(Error::InvalidArgument("block order must be at least 1".into()));
        }
        let blocks = self.enumerate_words_with_cap(k, cap)?;
        let position: HashMap<&[usize], usize> = blocks
            .iter()
            .enumerate()
            .map(|(i, b)| (b.symbols(), i))
            .collect();
        let names = block_names(self, &blocks);
        let mut sft = Sft::empty(&names)?;
        let m = blocks.len();
        for (i, b) in blocks.iter().enumerate() {
            let last = b.last().expect("k >= 1");
            for t in self.successors(last) {
                let mut shifted = b.symbols()[1..].to_vec();
                shifted.push(t);
                if let Some(&j) = position.get(shifted.as_slice()) {
                    sft.adjacency[i * m + j] = true;
                }
            }
        }
        Ok(HigherBlock {
            sft,
            blocks,
            order: k,
        })
    }

    /// One representative (least rotation) per primitive periodic orbit of
    /// period at most `max_period`, sorted by period then block.
    pub fn periodic_orbits(&self, max_period: usize) -> Result<Vec<PeriodicOrbit>> {
        self.periodic_orbits_with_cap(max_period, DEFAULT_WORD_CAP)
    }

    pub fn periodic_orbits_with_cap(
        &self,
        max_period: usize,
        cap: usize,
    ) -> Result<Vec<PeriodicOrbit>> {
        let mut out = Vec::new();
        for p in 1..=max_period {
            let words = self.enumerate_words_with_cap(p, cap)?;
            for w in words {
                let s = w.symbols();
                if !self.allowed(s[p - 1], s[0]) {
                    continue;
                }
                if is_primitive(s) && least_rotation(s) == s {
                    out.push(PeriodicOrbit { block: w });
                }
            }
        }
        Ok(out)
    }
}

fn block_names(sft: &Sft, blocks: &[Word]) -> Vec<String> {
    let plain: Vec<String> = blocks
        .iter()
        .map(|b| b.symbols().iter().map(|&s| sft.name(s)).collect::<String>())
        .collect();
    let mut seen = std::collections::HashSet::new();
    if plain.iter().all(|n| seen.insert(n.clone())) {
        plain
    } else {
        blocks
            .iter()
            .map(|b| {
                b.symbols()
                    .iter()
                    .map(|&s| sft.name(s))
                    .collect::<Vec<_>>()
                    .join(".")
            })
            .collect()
    }
}

/// A strongly connected component and its induced subsystem.
#[derive(Clone, Debug)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub sft: Sft,
    /// A single vertex without a self-loop.
    pub trivial: bool,
}

/// A higher-block recoding together with the block each new symbol stands for.
#[derive(Clone, Debug)]
pub struct HigherBlock {
    pub sft: Sft,
    pub blocks: Vec<Word>,
    pub order: usize,
}

impl HigherBlock {
    /// Index of the new symbol standing for `block`.
    pub fn symbol_of(&self, block: &[usize]) -> Option<usize> {
        self.blocks.iter().position(|b| b.symbols() == block)
    }

    /// Recodes an original word of length `n >= order` into a word of
    /// length `n - order + 1`.
    pub fn recode(&self, word: &Word) -> Option<Word> {
        let k = self.order;
        if word.len() < k {
            return None;
        }
        word.symbols()
            .windows(k)
            .map(|w| self.symbol_of(w))
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }
}

/// A primitive cycle `C`, standing for the periodic point `CCC...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicOrbit {
    block: Word,
}

impl PeriodicOrbit {
    /// Checks that `block` closes up into a cycle and is not a proper power.
    pub fn new(sft: &Sft, block: Word) -> Result<Self> {
        let s = block.symbols();
        if s.is_empty() || !sft.is_allowed_word(&block) || !sft.allowed(s[s.len() - 1], s[0]) {
            return Err(Error::DisallowedWord(format!(
                "{} does not close up into a cycle",
                sft.format_word(&block)
            )));
        }
        if !is_primitive(s) {
            return Err(Error::InvalidArgument(format!(
                "{} is a power of a shorter cycle",
                sft.format_word(&block)
            )));
        }
        Ok(PeriodicOrbit { block })
    }

    pub fn block(&self) -> &Word {
        &self.block
    }

    pub fn period(&self) -> usize {
        self.block.len()
    }

    /// Symbol at phase `t` (taken mod the period).
    pub fn at(&self, t: usize) -> usize {
        self.block.symbols()[t % self.period()]
    }

    /// The same orbit read from phase `shift`.
    pub fn rotated(&self, shift: usize) -> PeriodicOrbit {
        let s = self.block.symbols();
        let p = s.len();
        let rotated = (0..p).map(|i| s[(i + shift) % p]).collect();
        PeriodicOrbit {
            block: Word(rotated),
        }
    }

    /// Least rotation.
    pub fn canonical(&self) -> PeriodicOrbit {
        PeriodicOrbit {
            block: Word(least_rotation(self.block.symbols()).to_vec()),
        }
    }
}

fn is_primitive(s: &[usize]) -> bool {
    let p = s.len();
    (1..p)
        .filter(|d| p % d == 0)
        .all(|d| (0..p).any(|i| s[i] != s[i % d]))
}

fn least_rotation(s: &[usize]) -> Vec<usize> {
    let p = s.len();
    (0..p)
        .map(|r| (0..p).map(|i| s[(i + r) % p]).collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

impl fmt::Display for Sft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format_sft(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> Sft {
        Sft::from_matrix(&["0", "1"], &[vec![1, 1], vec![1, 0]]).unwrap()
    }

    #[test]
    fn golden_mean_is_valid_and_irreducible() {
        let g = golden();
        assert!(g.validate().is_clean());
        assert!(g.is_irreducible().unwrap());
    }

    #[test]
    fn zero_row_is_reported_stranded() {
        let s = Sft::from_matrix(&["x", "y"], &[vec![1, 1], vec![0, 0]]).unwrap();
        let d = s.validate();
        assert!(d.is_valid());
        assert_eq!(d.warnings.len(), 1);
        assert!(d.warnings[0].message.contains("stranded symbol `y`"));
        let (trimmed, kept) = s.trim();
        assert_eq!(kept, vec![0]);
        assert_eq!(trimmed.len(), 1);
    }

    #[test]
    fn non_binary_entry_is_rejected() {
        let err = Sft::from_matrix(&["x"], &[vec![2]]).unwrap_err();
        assert!(matches!(err, Error::NonBinaryEntry { value: 2, .. }));
    }

    #[test]
    fn empty_alphabet_errors() {
        let s = Sft::from_matrix::<&str>(&[], &[]).unwrap();
        assert!(matches!(s.is_irreducible(), Err(Error::EmptyAlphabet)));
    }

    #[test]
    fn two_disjoint_loops_are_reducible() {
        let s = Sft::from_matrix(&["p", "q"], &[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(!s.is_irreducible().unwrap());
        let comps = s.strongly_connected_components();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| !c.trivial));
    }

    #[test]
    fn one_way_bridge_gives_two_components_in_order() {
        let s = Sft::from_edges(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "a"), ("b", "c"), ("c", "d"), ("d", "c")],
        )
        .unwrap();
        let comps = s.strongly_connected_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].vertices, vec![0, 1]);
        assert_eq!(comps[1].vertices, vec![2, 3]);
    }

    #[test]
    fn golden_three_blocks() {
        let words = golden().enumerate_words(3).unwrap();
        let text: Vec<String> = words.iter().map(|w| golden().format_word(w)).collect();
        assert_eq!(text, vec!["000", "001", "010", "100", "101"]);
    }

    #[test]
    fn cap_is_enforced() {
        let full = Sft::full_shift(&["0", "1"]).unwrap();
        assert!(matches!(
            full.enumerate_words_with_cap(11, 1000),
            Err(Error::CapExceeded { .. })
        ));
        assert_eq!(full.enumerate_words(2).unwrap().len(), 4);
    }

    #[test]
    fn length_one_words_are_the_alphabet() {
        let g = golden();
        assert_eq!(g.enumerate_words(1).unwrap().len(), 2);
    }

    #[test]
    fn higher_block_of_golden_mean() {
        let hb = golden().higher_block(2).unwrap();
        assert_eq!(hb.sft.names(), &["00", "01", "10"]);
        // 00->00, 00->01, 01->10, 10->00, 10->01
        assert_eq!(hb.sft.edges().len(), 5);
    }

    #[test]
    fn full_shift_two_block_edges_overlap() {
        let full = Sft::full_shift(&["0", "1"]).unwrap();
        let hb = full.higher_block(2).unwrap();
        let idx = |n: &str| hb.sft.index_of(n).unwrap();
        assert!(hb.sft.allowed(idx("01"), idx("10")));
        assert!(hb.sft.allowed(idx("01"), idx("11")));
        assert!(!hb.sft.allowed(idx("01"), idx("00")));
    }

    #[test]
    fn golden_orbits_up_to_two() {
        let g = golden();
        let orbits = g.periodic_orbits(2).unwrap();
        let blocks: Vec<String> = orbits.iter().map(|o| g.format_word(o.block())).collect();
        assert_eq!(blocks, vec!["0", "01"]);
    }

    #[test]
    fn two_cycle_has_no_fixed_points() {
        let s = Sft::from_matrix(&["p", "q"], &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(s.periodic_orbits(1).unwrap().is_empty());
        assert_eq!(s.periodic_orbits(2).unwrap().len(), 1);
    }

    #[test]
    fn orbit_rejects_powers_and_open_words() {
        let full = Sft::full_shift(&["0", "1"]).unwrap();
        assert!(PeriodicOrbit::new(&full, Word::from(vec![0, 1, 0, 1])).is_err());
        let g = golden();
        assert!(PeriodicOrbit::new(&g, Word::from(vec![1, 1])).is_err());
        let o = PeriodicOrbit::new(&g, Word::from(vec![1, 0])).unwrap();
        assert_eq!(o.canonical().block().symbols(), &[0, 1]);
    }

    #[test]
    fn parse_word_with_multichar_names() {
        let s = Sft::from_edges(
            &["a", "b1", "b2"],
            &[("a", "b1"), ("b1", "a"), ("b1", "b2"), ("b2", "a")],
        )
        .unwrap();
        let w = s.parse_word("ab1b2a").unwrap();
        assert_eq!(w.symbols(), &[0, 1, 2, 0]);
        assert_eq!(s.parse_word("a b1 b2 a").unwrap(), w);
        assert!(s.parse_word("ab2b1").is_err());
    }
}
