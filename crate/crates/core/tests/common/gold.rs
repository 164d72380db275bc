//! The annotated recognizer corpus under `fixtures/gold`.

use relmap::model::{EntityCatalog, Lang};
use relmap::recognizer::{parse_first_names, parse_pattern_pack, Mention, Method, Recognizer, RecognizerConfig};
use relmap::store::parse_entities;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expected {
    pub surface: String,
    pub method: Method,
    pub entity: Option<u32>,
    pub attached: Vec<String>,
    pub titles: Vec<String>,
}

pub struct Sentence {
    pub text: String,
    pub expected: Vec<Expected>,
}

pub fn catalog() -> EntityCatalog {
    parse_entities(include_str!("../fixtures/gold/entities.tsv"), "entities.tsv").unwrap()
}

pub fn recognizer() -> Recognizer {
    let en = Lang::new("en").unwrap();
    Recognizer::new(RecognizerConfig {
        known_names: catalog().variants().clone(),
        first_names: parse_first_names(include_str!("../fixtures/gold/first_names.txt")),
        triggers: parse_pattern_pack(include_str!("../fixtures/gold/pack_en.tsv"), en, "pack_en.tsv").unwrap(),
        ..RecognizerConfig::default()
    })
    .unwrap()
}

fn list(field: &str) -> Vec<String> {
    if field == "-" {
        Vec::new()
    } else {
        field.split(';').map(str::to_string).collect()
    }
}

pub fn corpus() -> Vec<Sentence> {
    let mut out: Vec<Sentence> = Vec::new();
    for line in include_str!("../fixtures/gold/corpus.txt").lines() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        if let Some(text) = line.strip_prefix("> ") {
            out.push(Sentence { text: text.to_string(), expected: Vec::new() });
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        assert_eq!(f.len(), 5, "bad gold line {line:?}");
        let method = match f[1] {
            "known" => Method::Known,
            "first_name" => Method::FirstName,
            "trigger" => Method::Trigger,
            m => panic!("bad method {m}"),
        };
        out.last_mut().expect("mention before any sentence").expected.push(Expected {
            surface: f[0].to_string(),
            method,
            entity: (f[2] != "-").then(|| f[2].parse().unwrap()),
            attached: list(f[3]),
            titles: list(f[4]),
        });
    }
    out
}

pub fn observed(text: &str, m: &Mention) -> Expected {
    assert_eq!(&text[m.start..m.end], m.surface);
    Expected {
        surface: m.surface.clone(),
        method: m.method,
        entity: m.entity.map(|e| e.0),
        attached: m.attached_triggers.clone(),
        titles: m.titles.clone(),
    }
}

/// Sentences whose output differs from the annotation, with both sides.
pub fn mismatches() -> Vec<(String, Vec<Expected>, Vec<Expected>)> {
    let r = recognizer();
    corpus()
        .into_iter()
        .filter_map(|s| {
            let got: Vec<Expected> = r.recognize(&s.text).iter().map(|m| observed(&s.text, m)).collect();
            (got != s.expected).then_some((s.text, s.expected, got))
        })
        .collect()
}
