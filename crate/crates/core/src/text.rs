//! Plain-text formats for systems, codes and measures.
//!
//! System file:
//!
//! ```text
//! # comments run to end of line
//! alphabet: a b1 b2
//! a -> b1
//! b1 -> a
//! ```
//!
//! Code file: an optional `map:` header, then one `x -> y` line per
//! domain symbol (`map: x -> y` on a single line is accepted too).
//!
//! Measure file: a `markov` header, an optional `alphabet:` line that must
//! match the base system, `rows:` followed by one row per symbol in
//! alphabet order (fractions `1/3` or decimals), and an optional
//! `stationary:` line that is checked against the recomputed vector.
//! A `periodic` header followed by `orbit: a b` describes the uniform
//! measure on a periodic orbit.
//!
//! Printers emit the canonical form (no comments, edges in row-major
//! order), so `format(parse(format(x))) == format(x)`.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::factor::FactorCode;
use crate::measures::{MarkovMeasure, Measure, PeriodicMeasure};
use crate::rational;
use crate::sft::{PeriodicOrbit, Sft};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_arrow(line_no: usize, line: &str) -> Result<(String, String)> {
    let (from, to) = line
        .split_once("->")
        .ok_or_else(|| Error::parse(line_no, format!("expected `x -> y`, got `{line}`")))?;
    let (from, to) = (from.trim(), to.trim());
    if from.is_empty() || to.is_empty() || from.contains(char::is_whitespace) || to.contains(char::is_whitespace) {
        return Err(Error::parse(line_no, format!("expected `x -> y`, got `{line}`")));
    }
    Ok((from.to_string(), to.to_string()))
}

pub fn parse_sft(text: &str) -> Result<Sft> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing `alphabet:` line"))?;
    let names: Vec<String> = header
        .strip_prefix("alphabet:")
        .ok_or_else(|| Error::parse(line_no, "first line must be `alphabet: ...`"))?
        .split_whitespace()
        .map(str::to_string)
        .collect();
    let mut edges = Vec::new();
    for (line_no, line) in lines {
        edges.push(parse_arrow(line_no, line)?);
    }
    Sft::from_edges(&names, &edges)
}

pub fn format_sft(sft: &Sft) -> String {
    let mut out = format!("alphabet: {}\n", sft.names().join(" "));
    for (i, j) in sft.edges() {
        out.push_str(&format!("{} -> {}\n", sft.name(i), sft.name(j)));
    }
    out
}

/// Parses the `x -> y` pairs of a code file.
pub fn parse_code_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (line_no, line) in content_lines(text) {
        let body = line.strip_prefix("map:").map(str::trim).unwrap_or(line);
        if body.is_empty() {
            continue;
        }
        pairs.push(parse_arrow(line_no, body)?);
    }
    Ok(pairs)
}

pub fn parse_code(text: &str, domain: &Sft, codomain: &Sft) -> Result<FactorCode> {
    let pairs = parse_code_pairs(text)?;
    FactorCode::from_names(domain.clone(), codomain.clone(), &pairs)
}

pub fn format_code(code: &FactorCode) -> String {
    let mut out = String::from("map:\n");
    for i in 0..code.domain().len() {
        out.push_str(&format!(
            "{} -> {}\n",
            code.domain().name(i),
            code.codomain().name(code.image(i))
        ));
    }
    out
}

/// Parses a measure file over `base`.
pub fn parse_measure(text: &str, base: &Sft) -> Result<Measure> {
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    let (line_no, header) = *lines
        .first()
        .ok_or_else(|| Error::parse(1, "empty measure file"))?;
    match header {
        "markov" => parse_markov(&lines[1..], base).map(Measure::Markov),
        "periodic" => {
            let (line_no, orbit) = *lines
                .get(1)
                .ok_or_else(|| Error::parse(line_no, "missing `orbit:` line"))?;
            let body = orbit
                .strip_prefix("orbit:")
                .ok_or_else(|| Error::parse(line_no, "expected `orbit: ...`"))?;
            let word = base.parse_word(body)?;
            let orbit = PeriodicOrbit::new(base, word)?;
            Ok(Measure::Periodic(PeriodicMeasure::new(base.clone(), orbit)?))
        }
        other => Err(Error::parse(
            line_no,
            format!("unknown measure kind `{other}` (expected `markov` or `periodic`)"),
        )),
    }
}

fn parse_markov(lines: &[(usize, &str)], base: &Sft) -> Result<MarkovMeasure> {
    let n = base.len();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut stationary: Option<Vec<BigRational>> = None;
    let mut in_rows = false;
    for &(line_no, line) in lines {
        if let Some(rest) = line.strip_prefix("alphabet:") {
            let names: Vec<&str> = rest.split_whitespace().collect();
            if names != base.names().iter().map(String::as_str).collect::<Vec<_>>() {
                return Err(Error::parse(line_no, "alphabet does not match the base system"));
            }
            in_rows = false;
        } else if let Some(rest) = line.strip_prefix("rows:") {
            in_rows = true;
            if !rest.trim().is_empty() {
                rows.push(parse_row(line_no, rest, n)?);
            }
        } else if let Some(rest) = line.strip_prefix("stationary:") {
            stationary = Some(parse_row(line_no, rest, n)?);
            in_rows = false;
        } else if in_rows {
            rows.push(parse_row(line_no, line, n)?);
        } else {
            return Err(Error::parse(line_no, format!("unexpected line `{line}`")));
        }
    }
    if rows.len() != n {
        return Err(Error::Shape(format!("expected {n} rows, found {}", rows.len())));
    }
    match stationary {
        None => MarkovMeasure::from_rational(base.clone(), rows),
        Some(given) => match MarkovMeasure::from_rational(base.clone(), rows.clone()) {
            Ok(m) => {
                let dev = m
                    .stationary()
                    .iter()
                    .zip(&given)
                    .map(|(a, b)| (a - rational::to_f64(b)).abs())
                    .fold(0.0, f64::max);
                if dev > 1e-10 {
                    return Err(Error::InvalidMeasure(format!(
                        "given stationary vector deviates from the recomputed one by {dev:e}"
                    )));
                }
                Ok(m)
            }
            // Not unique: the supplied vector must be exactly stationary.
            Err(_) => MarkovMeasure::from_rational_with_stationary(base.clone(), rows, given),
        },
    }
}

fn parse_row(line_no: usize, line: &str, n: usize) -> Result<Vec<BigRational>> {
    let row = line
        .split_whitespace()
        .map(rational::parse)
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::parse(line_no, e.to_string()))?;
    if row.len() != n {
        return Err(Error::parse(line_no, format!("expected {n} entries, found {}", row.len())));
    }
    Ok(row)
}

pub fn format_measure(measure: &Measure) -> String {
    match measure {
        Measure::Markov(m) => format_markov(m),
        Measure::Periodic(p) => {
            let names: Vec<&str> = p
                .orbit()
                .block()
                .symbols()
                .iter()
                .map(|&s| p.base().name(s))
                .collect();
            format!("periodic\norbit: {}\n", names.join(" "))
        }
    }
}

pub fn format_markov(m: &MarkovMeasure) -> String {
    let mut out = String::from("markov\n");
    out.push_str(&format!("alphabet: {}\n", m.base().names().join(" ")));
    out.push_str("rows:\n");
    match m.exact_transition() {
        Some(rows) => {
            for row in rows {
                let cells: Vec<String> = row.iter().map(rational::format).collect();
                out.push_str(&cells.join(" "));
                out.push('\n');
            }
            if let Some(st) = m.exact_stationary() {
                let cells: Vec<String> = st.iter().map(rational::format).collect();
                out.push_str(&format!("stationary: {}\n", cells.join(" ")));
            }
        }
        None => {
            for row in m.transition() {
                let cells: Vec<String> = row.iter().map(|p| format!("{p}")).collect();
                out.push_str(&cells.join(" "));
                out.push('\n');
            }
        }
    }
    out
}
