//! Pattern-based person-name recognition.
//!
//! Three methods produce candidate spans:
//!
//! * **known**: longest match against a dictionary of known names,
//! * **first name**: a listed first name followed by capitalized tokens,
//! * **trigger**: capitalized tokens next to a chain of trigger phrases
//!   (titles, country adjectives, professions, regular expressions).
//!
//! Overlaps are resolved by method (known > first name > trigger), then
//! span length, then position.

mod pack;
mod tokenize;

use std::collections::{HashMap, HashSet};

use regex::{Regex, RegexBuilder};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{EntityCatalog, EntityId, Lang, TitleTable, VariantMap};

pub use pack::{parse_first_names, parse_pattern_pack, Side, TriggerCategory, TriggerPattern};
pub use tokenize::{phrase_tokens, tokenize, Token};

/// Triggers adjacent to a known or first-name match within this many tokens
/// are attributed to it.
pub const TITLE_WINDOW: usize = 3;

#[derive(Debug, Clone)]
pub struct RecognizerConfig {
    pub known_names: VariantMap,
    pub first_names: HashSet<String>,
    pub triggers: Vec<TriggerPattern>,
    pub max_name_tokens: usize,
}

impl Default for RecognizerConfig {
    fn default() -> Self {
        RecognizerConfig {
            known_names: VariantMap::new(),
            first_names: HashSet::new(),
            triggers: Vec::new(),
            max_name_tokens: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Known,
    FirstName,
    Trigger,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Known => "known",
            Method::FirstName => "first_name",
            Method::Trigger => "trigger",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mention {
    pub surface: String,
    /// Byte offsets into the input; `surface == text[start..end]`.
    pub start: usize,
    pub end: usize,
    pub method: Method,
    /// Set for known-name matches.
    pub entity: Option<EntityId>,
    /// Trigger phrases (as written in the pattern pack) next to the name,
    /// in text order.
    pub attached_triggers: Vec<String>,
    /// Lowercased text of each adjacent trigger chain, usable as a title.
    pub titles: Vec<String>,
}

/// Token-sequence dictionary.
#[derive(Debug, Default)]
struct TokenTrie<V> {
    nodes: Vec<TrieNode<V>>,
}

#[derive(Debug)]
struct TrieNode<V> {
    children: HashMap<String, usize>,
    value: Option<V>,
}

impl<V> TokenTrie<V> {
    fn new() -> Self {
        TokenTrie {
            nodes: vec![TrieNode {
                children: HashMap::new(),
                value: None,
            }],
        }
    }

    fn insert<S: AsRef<str>>(&mut self, key: &[S], value: V) {
        let mut at = 0;
        for k in key {
            let next = self.nodes.len();
            at = match self.nodes[at].children.get(k.as_ref()) {
                Some(&n) => n,
                None => {
                    self.nodes[at].children.insert(k.as_ref().to_string(), next);
                    self.nodes.push(TrieNode {
                        children: HashMap::new(),
                        value: None,
                    });
                    next
                }
            };
        }
        self.nodes[at].value = Some(value);
    }

    /// Longest key matching a prefix of `tokens`: (length, value).
    fn longest<'a>(&self, tokens: impl Iterator<Item = &'a str>) -> Option<(usize, &V)> {
        let mut at = 0;
        let mut best = None;
        for (i, t) in tokens.enumerate() {
            match self.nodes[at].children.get(t) {
                Some(&n) => at = n,
                None => break,
            }
            if let Some(v) = &self.nodes[at].value {
                best = Some((i + 1, v));
            }
        }
        best
    }
}

struct RegexTrigger {
    re: Regex,
    tokens: usize,
    pattern: usize,
}

/// Compiles a single trigger's regular expression (anchored, case-insensitive).
pub(crate) fn compile_trigger(p: &TriggerPattern) -> Result<Option<Regex>> {
    if p.phrase.trim().is_empty() {
        return Err(Error::Config("empty trigger phrase".into()));
    }
    if p.category != TriggerCategory::RegexPattern {
        if phrase_tokens(&p.phrase).is_empty() {
            return Err(Error::Config(format!("trigger {:?} has no word characters", p.phrase)));
        }
        return Ok(None);
    }
    RegexBuilder::new(&format!("^(?:{})$", p.phrase))
        .case_insensitive(true)
        .size_limit(1 << 20)
        .build()
        .map(Some)
        .map_err(|e| Error::Config(format!("bad trigger regex {:?}: {e}", p.phrase)))
}

/// A trigger occurrence over tokens `[start, end)`.
#[derive(Debug, Clone, Copy)]
struct TriggerHit {
    start: usize,
    end: usize,
    pattern: usize,
}

/// Compiled recognizer; construction validates the whole configuration.
pub struct Recognizer {
    known: TokenTrie<EntityId>,
    first_names: HashSet<String>,
    triggers: Vec<TriggerPattern>,
    /// Whether the pattern ends in a full stop ("Dr."), which then does not
    /// break the phrase.
    abbreviation: Vec<bool>,
    literal: [TokenTrie<usize>; 2],
    regexes: [Vec<RegexTrigger>; 2],
    max_name_tokens: usize,
}

fn side_ix(s: Side) -> usize {
    match s {
        Side::Left => 0,
        Side::Right => 1,
    }
}

impl Recognizer {
    pub fn new(config: RecognizerConfig) -> Result<Self> {
        if config.max_name_tokens < 2 {
            return Err(Error::Config("max_name_tokens must be at least 2".into()));
        }
        let mut known = TokenTrie::new();
        for (name, id) in config.known_names.iter() {
            let toks = phrase_tokens(name);
            if !toks.is_empty() {
                known.insert(&toks, id);
            }
        }
        let mut literal = [TokenTrie::new(), TokenTrie::new()];
        let mut regexes: [Vec<RegexTrigger>; 2] = [Vec::new(), Vec::new()];
        let mut abbreviation = Vec::with_capacity(config.triggers.len());
        for (i, p) in config.triggers.iter().enumerate() {
            abbreviation.push(p.phrase.trim_end().ends_with('.'));
            match compile_trigger(p)? {
                Some(re) => regexes[side_ix(p.side)].push(RegexTrigger {
                    re,
                    tokens: p.phrase.split_whitespace().count().max(1),
                    pattern: i,
                }),
                None => {
                    let key: Vec<String> = phrase_tokens(&p.phrase).iter().map(|t| t.to_lowercase()).collect();
                    literal[side_ix(p.side)].insert(&key, i);
                }
            }
        }
        Ok(Recognizer {
            known,
            first_names: config.first_names,
            triggers: config.triggers,
            abbreviation,
            literal,
            regexes,
            max_name_tokens: config.max_name_tokens,
        })
    }

    pub fn triggers(&self) -> &[TriggerPattern] {
        &self.triggers
    }

    /// Longest trigger of `side` starting at token `i`.
    fn trigger_at(&self, side: Side, tokens: &[Token], lower: &[String], i: usize) -> Option<TriggerHit> {
        let s = side_ix(side);
        let mut best = self.literal[s]
            .longest(lower[i..].iter().map(String::as_str))
            .map(|(len, &p)| TriggerHit {
                start: i,
                end: i + len,
                pattern: p,
            });
        for rt in &self.regexes[s] {
            let end = i + rt.tokens;
            if end > tokens.len() || best.is_some_and(|b| b.end >= end) {
                continue;
            }
            let joined = tokens[i..end].iter().map(|t| t.text).collect::<Vec<_>>().join(" ");
            if rt.re.is_match(&joined) {
                best = Some(TriggerHit {
                    start: i,
                    end,
                    pattern: rt.pattern,
                });
            }
        }
        best
    }

    /// Whether the phrase continues from token `a` into token `a + 1`.
    fn joined(tokens: &[Token], a: usize) -> bool {
        !tokens[a].break_after && !tokens[a + 1].break_before
    }

    /// Whether a trigger hit flows into the next token. A full stop that is
    /// part of the pattern itself ("Dr.") does not break the phrase.
    fn trigger_joined(&self, tokens: &[Token], hit: &TriggerHit) -> bool {
        if hit.end >= tokens.len() || tokens[hit.end].break_before {
            return false;
        }
        let last = &tokens[hit.end - 1];
        !last.break_after || self.abbreviation[hit.pattern] && last.trailing == "."
    }

    pub fn recognize(&self, text: &str) -> Vec<Mention> {
        let tokens = tokenize(text);
        let n = tokens.len();
        if n == 0 {
            return Vec::new();
        }
        let lower: Vec<String> = tokens.iter().map(|t| t.text.to_lowercase()).collect();

        // Longest trigger per side: left hits indexed by end, right by start.
        let mut left_ending: Vec<Option<TriggerHit>> = vec![None; n + 1];
        let mut right_starting: Vec<Option<TriggerHit>> = vec![None; n + 1];
        let mut trigger_start = vec![false; n];
        for i in 0..n {
            if let Some(h) = self.trigger_at(Side::Left, &tokens, &lower, i) {
                trigger_start[i] = true;
                let slot = &mut left_ending[h.end];
                if slot.is_none_or(|old| h.start < old.start) {
                    *slot = Some(h);
                }
            }
            if let Some(h) = self.trigger_at(Side::Right, &tokens, &lower, i) {
                trigger_start[i] = true;
                right_starting[i] = Some(h);
            }
        }

        // Chain of left triggers flowing into token `pos`, in text order.
        let left_chain = |pos: usize| -> Vec<TriggerHit> {
            let mut chain = Vec::new();
            let mut j = pos;
            while let Some(h) = left_ending[j] {
                if !self.trigger_joined(&tokens, &h) {
                    break;
                }
                chain.push(h);
                j = h.start;
            }
            chain.reverse();
            chain
        };
        // Chain of right triggers starting at token `pos`.
        let right_chain = |pos: usize| -> Vec<TriggerHit> {
            let mut chain = Vec::new();
            let mut j = pos;
            while j < n {
                let Some(h) = right_starting[j] else { break };
                chain.push(h);
                if !self.trigger_joined(&tokens, &h) {
                    break;
                }
                j = h.end;
            }
            chain
        };
        // No phrase break anywhere between tokens `a` and `b`.
        let unbroken = |a: usize, b: usize| (a..b).all(|k| Self::joined(&tokens, k));

        let eligible = |i: usize| tokens[i].is_capitalized() && !trigger_start[i];

        let mut candidates: Vec<(Method, usize, usize, Option<EntityId>, Vec<TriggerHit>, Vec<TriggerHit>)> =
            Vec::new();

        // Known names: leftmost-longest scan.
        let mut i = 0;
        while i < n {
            // A known name never spans a phrase break.
            let limit = (i..n - 1).find(|&k| !Self::joined(&tokens, k)).map_or(n, |k| k + 1);
            match self.known.longest(tokens[i..limit].iter().map(|t| t.text)) {
                Some((len, &id)) => {
                    candidates.push((Method::Known, i, i + len, Some(id), Vec::new(), Vec::new()));
                    i += len;
                }
                None => i += 1,
            }
        }

        // First name plus capitalized continuation.
        for i in 0..n {
            if !self.first_names.contains(tokens[i].text) {
                continue;
            }
            let mut end = i + 1;
            while end < n && end - i < self.max_name_tokens && Self::joined(&tokens, end - 1) && eligible(end) {
                end += 1;
            }
            if end - i >= 2 {
                candidates.push((Method::FirstName, i, end, None, Vec::new(), Vec::new()));
            }
        }

        // Left triggers followed by capitalized tokens.
        for s in 1..n {
            let chain = left_chain(s);
            if chain.is_empty() || !eligible(s) {
                continue;
            }
            let mut end = s + 1;
            while end < n && end - s < self.max_name_tokens && Self::joined(&tokens, end - 1) && eligible(end) {
                end += 1;
            }
            if end - s >= 2 {
                let right = if end < n && Self::joined(&tokens, end - 1) { right_chain(end) } else { Vec::new() };
                candidates.push((Method::Trigger, s, end, None, chain, right));
            }
        }

        // Capitalized tokens followed by right triggers.
        for e in 1..n {
            if right_starting[e].is_none() || !Self::joined(&tokens, e - 1) || !eligible(e - 1) {
                continue;
            }
            let mut start = e - 1;
            while start > 0 && e - start < self.max_name_tokens && Self::joined(&tokens, start - 1) && eligible(start - 1) {
                start -= 1;
            }
            if e - start >= 2 {
                let left = left_chain(start);
                candidates.push((Method::Trigger, start, e, None, left, right_chain(e)));
            }
        }

        // Precedence: method, then longer span, then leftmost.
        candidates.sort_by(|a, b| {
            a.0.cmp(&b.0)
                .then((tokens[b.2 - 1].end - tokens[b.1].start).cmp(&(tokens[a.2 - 1].end - tokens[a.1].start)))
                .then(a.1.cmp(&b.1))
        });
        let mut taken = vec![false; n];
        let mut accepted = Vec::new();
        for c in candidates {
            if taken[c.1..c.2].iter().any(|&t| t) {
                continue;
            }
            taken[c.1..c.2].iter_mut().for_each(|t| *t = true);
            accepted.push(c);
        }
        accepted.sort_by_key(|c| c.1);

        accepted
            .into_iter()
            .map(|(method, s, e, entity, mut left, mut right)| {
                if method != Method::Trigger {
                    // Nearest chain within the title window, same phrase only, not
                    // reaching past another mention.
                    left = (s.saturating_sub(TITLE_WINDOW)..=s)
                        .rev()
                        .filter(|&j| unbroken(j, s) && !taken[j..s].contains(&true))
                        .map(&left_chain)
                        .find(|c| !c.is_empty())
                        .unwrap_or_default();
                    right = (e..=(e + TITLE_WINDOW).min(n - 1))
                        .filter(|&j| e < n && unbroken(e - 1, j) && !taken[e..j].contains(&true))
                        .map(&right_chain)
                        .find(|c| !c.is_empty())
                        .unwrap_or_default();
                }
                let start = tokens[s].start;
                let end = tokens[e - 1].end;
                let mut attached = Vec::new();
                let mut titles = Vec::new();
                for chain in [&left, &right] {
                    if chain.is_empty() {
                        continue;
                    }
                    attached.extend(chain.iter().map(|h| self.triggers[h.pattern].phrase.clone()));
                    // Regex cues ("said", "told") help recognition but are not titles.
                    let words: Vec<&str> = chain
                        .iter()
                        .filter(|h| self.triggers[h.pattern].category != TriggerCategory::RegexPattern)
                        .flat_map(|h| lower[h.start..h.end].iter().map(String::as_str))
                        .collect();
                    if !words.is_empty() {
                        titles.push(words.join(" "));
                    }
                }
                Mention {
                    surface: text[start..end].to_string(),
                    start,
                    end,
                    method,
                    entity,
                    attached_triggers: attached,
                    titles,
                }
            })
            .collect()
    }
}

/// Recognizes names in `text`; see the module docs for the rules.
pub fn recognize(text: &str, recognizer: &Recognizer) -> Vec<Mention> {
    recognizer.recognize(text)
}

/// Adds title attributions for every mention that resolves to an entity.
pub fn attribute_titles(mentions: &[Mention], catalog: &EntityCatalog, language: Lang, table: &mut TitleTable) {
    for m in mentions {
        let Some(id) = m.entity.or_else(|| catalog.resolve(&m.surface)) else {
            continue;
        };
        for t in &m.titles {
            table.add(id, language, t, 1);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContextCount {
    pub phrase: String,
    pub side: Side,
    pub count: u32,
}

impl Serialize for Side {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Counts the left and right contexts (up to `window` tokens) around every
/// known-name occurrence. Sorted by count descending, then phrase, then side.
pub fn harvest_contexts(texts: &[&str], known: &VariantMap, window: usize) -> Result<Vec<ContextCount>> {
    if window == 0 {
        return Err(Error::Config("context window must be at least 1".into()));
    }
    let mut trie = TokenTrie::new();
    for (name, id) in known.iter() {
        let toks = phrase_tokens(name);
        if !toks.is_empty() {
            trie.insert(&toks, id);
        }
    }
    let mut counts: HashMap<(String, Side), u32> = HashMap::new();
    for text in texts {
        let tokens = tokenize(text);
        let words: Vec<&str> = tokens.iter().map(|t| t.text).collect();
        let mut i = 0;
        while i < words.len() {
            let Some((len, _)) = trie.longest(words[i..].iter().copied()) else {
                i += 1;
                continue;
            };
            let end = i + len;
            if i > 0 {
                let left = words[i.saturating_sub(window)..i].join(" ");
                *counts.entry((left, Side::Left)).or_insert(0) += 1;
            }
            if end < words.len() {
                let right = words[end..(end + window).min(words.len())].join(" ");
                *counts.entry((right, Side::Right)).or_insert(0) += 1;
            }
            i = end;
        }
    }
    let mut out: Vec<ContextCount> = counts
        .into_iter()
        .map(|((phrase, side), count)| ContextCount { phrase, side, count })
        .collect();
    out.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.phrase.cmp(&b.phrase)).then(a.side.cmp(&b.side)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn en() -> Lang {
        Lang::new("en").unwrap()
    }

    fn trig(p: &str, side: Side, cat: TriggerCategory) -> TriggerPattern {
        TriggerPattern::new(p, side, cat, en())
    }

    #[test]
    fn trigger_chain_example() {
        let r = Recognizer::new(RecognizerConfig {
            triggers: vec![
                trig("American", Side::Left, TriggerCategory::CountryAdjective),
                trig("doctor", Side::Left, TriggerCategory::Profession),
            ],
            ..Default::default()
        })
        .unwrap();
        let m = r.recognize("the American doctor John Smith");
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].surface, "John Smith");
        assert_eq!(m[0].method, Method::Trigger);
        assert_eq!(m[0].attached_triggers, vec!["American", "doctor"]);
        assert_eq!(m[0].titles, vec!["american doctor"]);
    }

    #[test]
    fn first_name_example() {
        let r = Recognizer::new(RecognizerConfig {
            first_names: ["John".to_string()].into(),
            ..Default::default()
        })
        .unwrap();
        let m = r.recognize("John Kerry spoke");
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].surface, "John Kerry");
        assert_eq!(m[0].method, Method::FirstName);
    }

    #[test]
    fn nothing_in_lowercase_text() {
        let r = Recognizer::new(RecognizerConfig {
            first_names: ["John".to_string()].into(),
            triggers: vec![trig("president", Side::Left, TriggerCategory::Title)],
            ..Default::default()
        })
        .unwrap();
        assert!(r.recognize("the meeting ended").is_empty());
        assert!(r.recognize("").is_empty());
    }

    #[test]
    fn known_beats_guesses() {
        let known: VariantMap = [("Rafik Hariri", EntityId(7))].into_iter().collect();
        let r = Recognizer::new(RecognizerConfig {
            known_names: known,
            first_names: ["Rafik".to_string()].into(),
            triggers: vec![trig("prime minister", Side::Left, TriggerCategory::Title)],
            ..Default::default()
        })
        .unwrap();
        let m = r.recognize("former prime minister Rafik Hariri Jones arrived");
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].surface, "Rafik Hariri");
        assert_eq!(m[0].entity, Some(EntityId(7)));
        assert_eq!(m[0].attached_triggers, vec!["prime minister"]);
        assert_eq!(m[0].titles, vec!["prime minister"]);
    }

    #[test]
    fn rejects_small_name_limit_and_bad_regex() {
        assert!(Recognizer::new(RecognizerConfig {
            max_name_tokens: 1,
            ..Default::default()
        })
        .is_err());
        assert!(Recognizer::new(RecognizerConfig {
            triggers: vec![trig("(", Side::Left, TriggerCategory::RegexPattern)],
            ..Default::default()
        })
        .is_err());
    }

    #[test]
    fn regex_trigger() {
        let r = Recognizer::new(RecognizerConfig {
            triggers: vec![trig("[0-9]+ year-old", Side::Left, TriggerCategory::RegexPattern)],
            ..Default::default()
        })
        .unwrap();
        let m = r.recognize("a 45 year-old Maria Lopez was");
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].surface, "Maria Lopez");
        assert_eq!(m[0].attached_triggers, vec!["[0-9]+ year-old"]);
    }

    #[test]
    fn harvest_example() {
        let known: VariantMap = [("John Smith", EntityId(1))].into_iter().collect();
        let got = harvest_contexts(&["president John Smith said", "president John Smith left"], &known, 1).unwrap();
        let flat: Vec<_> = got.iter().map(|c| (c.phrase.as_str(), c.side, c.count)).collect();
        assert_eq!(
            flat,
            vec![("president", Side::Left, 2), ("left", Side::Right, 1), ("said", Side::Right, 1)]
        );
        assert!(harvest_contexts(&[], &known, 1).unwrap().is_empty());
        assert!(harvest_contexts(&["John Smith"], &known, 2).unwrap().is_empty());
        assert!(harvest_contexts(&["x"], &known, 0).is_err());
    }

    #[test]
    fn attributes_titles_to_resolvable_mentions() {
        let mut cat = EntityCatalog::new();
        let id = cat.insert("Rafik Hariri", crate::model::EntityKind::Person, []).unwrap();
        let r = Recognizer::new(RecognizerConfig {
            known_names: cat.variants().clone(),
            triggers: vec![
                trig("former", Side::Left, TriggerCategory::Title),
                trig("Lebanese", Side::Left, TriggerCategory::CountryAdjective),
                trig("prime minister", Side::Left, TriggerCategory::Title),
            ],
            ..Default::default()
        })
        .unwrap();
        let m = r.recognize("the former Lebanese prime minister Rafik Hariri was");
        let mut table = TitleTable::new();
        attribute_titles(&m, &cat, en(), &mut table);
        let t: Vec<_> = table.for_entity(id).collect();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].phrase, "former lebanese prime minister");
    }
}
