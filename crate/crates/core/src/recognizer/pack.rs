//! Language packs: trigger patterns and first-name lists.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::Lang;
use crate::store::records;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" | "l" => Ok(Side::Left),
            "right" | "r" => Ok(Side::Right),
            other => Err(Error::Config(format!("unknown trigger side {other:?}"))),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriggerCategory {
    Title,
    CountryAdjective,
    Profession,
    RegexPattern,
}

impl FromStr for TriggerCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "title" => Ok(TriggerCategory::Title),
            "country_adjective" => Ok(TriggerCategory::CountryAdjective),
            "profession" => Ok(TriggerCategory::Profession),
            "regex_pattern" | "regex" => Ok(TriggerCategory::RegexPattern),
            other => Err(Error::Config(format!("unknown trigger category {other:?}"))),
        }
    }
}

/// A local pattern that licenses a name next to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriggerPattern {
    pub phrase: String,
    pub side: Side,
    pub category: TriggerCategory,
    pub language: Lang,
}

impl TriggerPattern {
    pub fn new(phrase: &str, side: Side, category: TriggerCategory, language: Lang) -> Self {
        TriggerPattern {
            phrase: phrase.to_string(),
            side,
            category,
            language,
        }
    }
}

/// Parses a pattern pack: `phrase<TAB>side<TAB>category` per line.
/// Regular expressions are compiled here so a bad pack fails at load time.
pub fn parse_pattern_pack(text: &str, language: Lang, src: &str) -> Result<Vec<TriggerPattern>> {
    let mut out = Vec::new();
    for (line, f) in records(text) {
        let get = |i: usize, what: &str| -> Result<&str> {
            f.get(i)
                .map(|s| s.trim())
                .filter(|s| !s.is_empty())
                .ok_or_else(|| Error::parse(src, line, format!("missing {what} (column {})", i + 1)))
        };
        let phrase = get(0, "phrase")?;
        let side: Side = get(1, "side")?
            .parse()
            .map_err(|e: Error| Error::parse(src, line, e.to_string()))?;
        let category: TriggerCategory = get(2, "category")?
            .parse()
            .map_err(|e: Error| Error::parse(src, line, e.to_string()))?;
        let pattern = TriggerPattern::new(phrase, side, category, language);
        super::compile_trigger(&pattern).map_err(|e| Error::parse(src, line, e.to_string()))?;
        out.push(pattern);
    }
    Ok(out)
}

/// One first name per line.
pub fn parse_first_names(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}
