//! Built-in example systems.
//!
//! Each entry is a text file with `[X]`, `[Y]` and `[map]` sections in the
//! formats of [`crate::text`], preceded by comment lines that become the
//! entry's notes. Loading re-derives the documented facts of the entry and
//! refuses an entry whose facts do not hold.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::FactorCode;
use crate::linalg;
use crate::relmax;
use crate::sft::{Sft, Word};
use crate::text;

pub const NAMES: [&str; 7] = ["GOLDEN", "FULL2", "XOR", "ABK", "HOMC", "HOMCPLUS", "EX5"];

fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "GOLDEN" => include_str!("../gallery/golden.txt"),
        "FULL2" => include_str!("../gallery/full2.txt"),
        "XOR" => include_str!("../gallery/xor.txt"),
        "ABK" => include_str!("../gallery/abk.txt"),
        "HOMC" => include_str!("../gallery/homc.txt"),
        "HOMCPLUS" => include_str!("../gallery/homcplus.txt"),
        "EX5" => include_str!("../gallery/ex5.txt"),
        _ => return None,
    })
}

#[derive(Clone, Debug)]
pub struct GalleryEntry {
    pub name: String,
    pub x: Sft,
    pub y: Sft,
    pub code: FactorCode,
    pub notes: String,
}

/// Loads a built-in entry by (case-insensitive) name and checks its facts.
pub fn load(name: &str) -> Result<GalleryEntry> {
    let key = name.to_ascii_uppercase();
    let text = source(&key).ok_or_else(|| Error::UnknownGallery(name.to_string()))?;
    let entry = parse_entry(&key, text)?;
    let report = self_check(&entry);
    if let Some(bad) = report.checks.iter().find(|c| !c.passed) {
        return Err(Error::InvalidCode(format!(
            "gallery entry {key} fails `{}`: {}",
            bad.fact, bad.detail
        )));
    }
    Ok(entry)
}

pub fn load_all() -> Result<Vec<GalleryEntry>> {
    NAMES.iter().map(|n| load(n)).collect()
}

/// Parses the sectioned entry format.
pub fn parse_entry(name: &str, text: &str) -> Result<GalleryEntry> {
    let mut notes = Vec::new();
    let mut sections: Vec<(String, usize, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if let Some(tag) = trimmed.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            sections.push((tag.to_ascii_lowercase(), i + 1, String::new()));
        } else if let Some((_, _, body)) = sections.last_mut() {
            body.push_str(line);
            body.push('\n');
        } else if let Some(note) = trimmed.strip_prefix('#') {
            notes.push(note.trim().to_string());
        } else if !trimmed.is_empty() {
            return Err(Error::parse(i + 1, "text before the first section"));
        }
    }
    let section = |tag: &str| -> Result<(usize, &str)> {
        sections
            .iter()
            .find(|(t, _, _)| t == tag)
            .map(|(_, line, body)| (*line, body.as_str()))
            .ok_or_else(|| Error::parse(1, format!("missing [{tag}] section")))
    };
    let offset = |line: usize, e: Error| match e {
        Error::Parse { line: l, message } => Error::Parse {
            line: l + line,
            message,
        },
        other => other,
    };
    let (lx, bx) = section("x")?;
    let (ly, by) = section("y")?;
    let (lm, bm) = section("map")?;
    let x = text::parse_sft(bx).map_err(|e| offset(lx, e))?;
    let y = text::parse_sft(by).map_err(|e| offset(ly, e))?;
    let code = text::parse_code(bm, &x, &y).map_err(|e| offset(lm, e))?;
    Ok(GalleryEntry {
        name: name.to_string(),
        x,
        y,
        code,
        notes: notes.join(" "),
    })
}

/// The entry in its own file format.
pub fn export(entry: &GalleryEntry) -> String {
    let mut out = String::new();
    for line in wrap(&entry.notes, 72) {
        out.push_str(&format!("# {line}\n"));
    }
    out.push_str("[X]\n");
    out.push_str(&text::format_sft(&entry.x));
    out.push_str("[Y]\n");
    out.push_str(&text::format_sft(&entry.y));
    out.push_str("[map]\n");
    for line in text::format_code(&entry.code).lines().skip(1) {
        out.push_str(line);
        out.push('\n');
    }
    out
}

fn wrap(text: &str, width: usize) -> Vec<String> {
    let mut lines = Vec::new();
    let mut cur = String::new();
    for word in text.split_whitespace() {
        if !cur.is_empty() && cur.len() + 1 + word.len() > width {
            lines.push(std::mem::take(&mut cur));
        }
        if !cur.is_empty() {
            cur.push(' ');
        }
        cur.push_str(word);
    }
    if !cur.is_empty() {
        lines.push(cur);
    }
    lines
}

#[derive(Clone, Debug, Serialize)]
pub struct FactCheck {
    pub fact: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfCheckReport {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<FactCheck>,
}

struct Checks(Vec<FactCheck>);

impl Checks {
    fn record(&mut self, fact: &str, outcome: Result<std::result::Result<(), String>>) {
        let (passed, detail) = match outcome {
            Ok(Ok(())) => (true, String::new()),
            Ok(Err(d)) => (false, d),
            Err(e) => (false, e.to_string()),
        };
        self.0.push(FactCheck {
            fact: fact.to_string(),
            passed,
            detail,
        });
    }
}

fn expect(cond: bool, detail: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(detail())
    }
}

/// Re-derives the documented facts of an entry.
pub fn self_check(entry: &GalleryEntry) -> SelfCheckReport {
    let mut c = Checks(Vec::new());
    let code = &entry.code;
    c.record(
        "X has no stranded symbols",
        Ok(expect(entry.x.validate().is_clean(), || "stranded symbol".into())),
    );
    c.record(
        "Y has no stranded symbols",
        Ok(expect(entry.y.validate().is_clean(), || "stranded symbol".into())),
    );
    c.record(
        "code is a factor map on words up to length 8",
        Ok({
            let d = code.validate();
            expect(d.is_valid(), || {
                d.errors.first().map(|e| e.message.clone()).unwrap_or_default()
            })
        }),
    );
    match entry.name.as_str() {
        "GOLDEN" => c.record(
            "spectral radius is the golden ratio",
            linalg::spectral_radius(&entry.x.adjacency_matrix()).map(|l| {
                let phi = (1.0 + 5f64.sqrt()) / 2.0;
                expect((l - phi).abs() < 1e-12, || format!("λ = {l}"))
            }),
        ),
        "FULL2" => c.record(
            "spectral radius is 2",
            linalg::spectral_radius(&entry.x.adjacency_matrix())
                .map(|l| expect((l - 2.0).abs() < 1e-12, || format!("λ = {l}"))),
        ),
        "XOR" => c.record(
            "every Y-word of length at most 8 has exactly 2 preimages",
            (|| {
                for n in 1..=8 {
                    for w in entry.y.enumerate_words(n)? {
                        let count = code.count_preimages(&w)?;
                        if count != 2u32.into() {
                            return Ok(Err(format!(
                                "{} has {count} preimages",
                                entry.y.format_word(&w)
                            )));
                        }
                    }
                }
                Ok(Ok(()))
            })(),
        ),
        "ABK" => {
            c.record(
                "a is a singleton clump",
                entry.y.index_of("a").map(|a| {
                    expect(code.preimage(a).len() == 1, || "a has several preimages".into())
                }),
            );
            c.record(
                "ab^ka has k+1 preimages for k <= 10",
                (|| {
                    let a = entry.y.index_of("a")?;
                    let b = entry.y.index_of("b")?;
                    for k in 1..=10usize {
                        let mut w = vec![a];
                        w.extend(std::iter::repeat(b).take(k));
                        w.push(a);
                        let count = code.count_preimages(&Word::from(w))?;
                        if count != (k as u32 + 1).into() {
                            return Ok(Err(format!("k = {k}: {count} preimages")));
                        }
                    }
                    Ok(Ok(()))
                })(),
            );
        }
        "HOMC" => {
            c.record(
                "no singleton clump",
                code.clump_analysis(1).map(|r| {
                    expect(r.singleton_clumps.is_empty(), || {
                        format!("singletons {:?}", r.singleton_clumps)
                    })
                }),
            );
            c.record(
                "return system to [a] has six states",
                entry.y.index_of("a").and_then(|a| {
                    relmax::return_word_system(code, a, 8).map(|s| {
                        expect(s.x.len() == 6 && !s.truncated, || {
                            format!("{} states", s.x.len())
                        })
                    })
                }),
            );
        }
        "HOMCPLUS" => c.record(
            "no singleton at order 1; abba is a singleton at order 4",
            code.clump_analysis(4).map(|r| {
                expect(
                    r.singletons_at(1) == 0 && r.has_singleton_at(4, "abba"),
                    || "clump structure differs".into(),
                )
            }),
        ),
        "EX5" => c.record(
            "no singleton block up to order 6",
            code.clump_analysis(6).map(|r| {
                expect(r.higher_block_singletons.is_empty(), || {
                    format!("found {:?}", r.higher_block_singletons.first())
                })
            }),
        ),
        _ => {}
    }
    let passed = c.0.iter().all(|f| f.passed);
    SelfCheckReport {
        name: entry.name.clone(),
        passed,
        checks: c.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_entries_load() {
        for name in NAMES {
            let e = load(name).unwrap();
            assert!(self_check(&e).passed, "{name}");
        }
        assert!(matches!(load("nope"), Err(Error::UnknownGallery(_))));
    }

    #[test]
    fn export_round_trips() {
        for name in NAMES {
            let e = load(name).unwrap();
            let text = export(&e);
            let again = parse_entry(name, &text).unwrap();
            assert_eq!(export(&again), text);
            assert_eq!(again.x, e.x);
        }
    }

    #[test]
    fn section_errors_carry_file_lines() {
        let err = parse_entry("T", "[X]\nalphabet: a\na => a\n[Y]\nalphabet: a\n[map]\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }
}
