use std::path::{Path, PathBuf};

use clap::Args;
use relent::measures::parry_measure;
use relent::{gallery, text, FactorCode, MarkovMeasure, Measure, Sft, Word};
use serde::Serialize;

use crate::report::{CliError, CliResult};

/// Where the system and code come from: a gallery entry or text files.
#[derive(Args, Clone, Debug, Serialize)]
pub struct Inputs {
    /// Built-in example (GOLDEN, FULL2, XOR, ABK, HOMC, HOMCPLUS, EX5).
    #[arg(long, conflicts_with_all = ["system", "codomain", "code"])]
    pub gallery: Option<String>,
    /// System file for X.
    #[arg(long)]
    pub system: Option<PathBuf>,
    /// System file for Y.
    #[arg(long)]
    pub codomain: Option<PathBuf>,
    /// Code file mapping X-symbols to Y-symbols.
    #[arg(long, requires_all = ["system", "codomain"])]
    pub code: Option<PathBuf>,
}

pub fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

impl Inputs {
    pub fn has_code(&self) -> bool {
        self.gallery.is_some() || self.code.is_some()
    }

    /// `X`, from the gallery entry or `--system`.
    pub fn system(&self) -> CliResult<Sft> {
        if let Some(name) = &self.gallery {
            return Ok(gallery::load(name)?.x);
        }
        let path = self
            .system
            .as_ref()
            .ok_or_else(|| CliError::Usage("pass --gallery or --system".into()))?;
        Ok(text::parse_sft(&read(path)?)?)
    }

    pub fn code(&self) -> CliResult<FactorCode> {
        if let Some(name) = &self.gallery {
            return Ok(gallery::load(name)?.code);
        }
        let (Some(x), Some(y), Some(c)) = (&self.system, &self.codomain, &self.code) else {
            return Err(CliError::Usage(
                "pass --gallery, or --system, --codomain and --code".into(),
            ));
        };
        let x = text::parse_sft(&read(x)?)?;
        let y = text::parse_sft(&read(y)?)?;
        Ok(text::parse_code(&read(c)?, &x, &y)?)
    }
}

/// A measure argument: a measure file, or `parry` for the Parry measure
/// of the base.
pub fn measure(arg: &str, base: &Sft) -> CliResult<Measure> {
    if arg.eq_ignore_ascii_case("parry") {
        return Ok(Measure::Markov(parry_measure(base)?));
    }
    Ok(text::parse_measure(&read(Path::new(arg))?, base)?)
}

pub fn markov(arg: &str, base: &Sft, flag: &str) -> CliResult<MarkovMeasure> {
    match measure(arg, base)? {
        Measure::Markov(m) => Ok(m),
        Measure::Periodic(_) => Err(CliError::Usage(format!("{flag} must be a Markov measure"))),
    }
}

pub fn word(base: &Sft, text: &str) -> CliResult<Word> {
    Ok(base.parse_word(text)?)
}

/// Parses counts such as `10000`, `1_000_000`, `10^7` or `1e6`.
pub fn parse_count(s: &str) -> Result<usize, String> {
    let t = s.trim().replace('_', "");
    let bad = || format!("`{s}` is not a count (try 10000, 10^7 or 1e6)");
    if let Some((b, e)) = t.split_once('^') {
        let b: usize = b.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        return b.checked_pow(e).ok_or_else(bad);
    }
    if let Some((m, e)) = t.split_once(['e', 'E']) {
        let m: usize = m.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        return 10usize.checked_pow(e).and_then(|p| p.checked_mul(m)).ok_or_else(bad);
    }
    t.parse().map_err(|_| bad())
}

#[cfg(test)]
mod tests {
    use super::parse_count;

    #[test]
    fn counts() {
        assert_eq!(parse_count("10^7"), Ok(10_000_000));
        assert_eq!(parse_count("2e3"), Ok(2000));
        assert_eq!(parse_count("1_000"), Ok(1000));
        assert!(parse_count("ten").is_err());
        assert!(parse_count("10^40").is_err());
    }
}
