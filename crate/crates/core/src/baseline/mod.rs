//! Encyclopedia-derived relation baseline: person-to-person hyperlinks that
//! are confirmed by the inverse link, per language.

mod html;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{EntityCatalog, EntityId, Lang};
use crate::store::records;

pub use html::{extract_hyperlinks, href_title, Hyperlink};

/// Person links found on one language's page for one entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PersonPage {
    pub entity: EntityId,
    pub language: Lang,
    pub outlinks: BTreeSet<EntityId>,
}

/// A symmetric person pair with `a < b`, confirmed in `languages`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BaselineRelation {
    pub a: EntityId,
    pub b: EntityId,
    pub languages: BTreeSet<Lang>,
}

/// Keeps hyperlinks that name a known person other than the page's own
/// entity. The link target is tried before the anchor text.
pub fn extract_person_links(html: &str, entity: EntityId, language: Lang, names: &EntityCatalog) -> PersonPage {
    let outlinks = extract_hyperlinks(html)
        .into_iter()
        .filter_map(|l| {
            let by_target = (!l.target.is_empty()).then(|| names.resolve(&l.target)).flatten();
            by_target.or_else(|| names.resolve(&l.anchor))
        })
        .filter(|&id| id != entity && names.is_person(id))
        .collect();
    PersonPage {
        entity,
        language,
        outlinks,
    }
}

/// Relation (A, B) holds in language ℓ iff A's ℓ page links B and B's ℓ page
/// links A. Output is ordered by (a, b).
pub fn confirm_relations(pages: &[PersonPage]) -> Vec<BaselineRelation> {
    let mut by_key: HashMap<(EntityId, Lang), BTreeSet<EntityId>> = HashMap::new();
    for p in pages {
        by_key
            .entry((p.entity, p.language))
            .or_default()
            .extend(p.outlinks.iter().copied());
    }
    let mut found: BTreeMap<(EntityId, EntityId), BTreeSet<Lang>> = BTreeMap::new();
    for (&(a, lang), links) in &by_key {
        for &b in links.iter().filter(|&&b| a < b) {
            if by_key.get(&(b, lang)).is_some_and(|back| back.contains(&a)) {
                found.entry((a, b)).or_default().insert(lang);
            }
        }
    }
    found
        .into_iter()
        .map(|((a, b), languages)| BaselineRelation { a, b, languages })
        .collect()
}

/// Relations confirmed in at least `min_languages` languages.
pub fn multilingual_subset(relations: &[BaselineRelation], min_languages: usize) -> Result<Vec<BaselineRelation>> {
    if min_languages == 0 {
        return Err(Error::Config("min_languages must be at least 1".into()));
    }
    Ok(relations
        .iter()
        .filter(|r| r.languages.len() >= min_languages)
        .cloned()
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineStats {
    pub relations: usize,
    pub persons: usize,
    pub mean_per_person: f64,
    pub min_per_person: usize,
    pub max_per_person: usize,
    /// A person with the most relations (lowest id on ties).
    pub busiest: Option<EntityId>,
}

pub fn baseline_stats(relations: &[BaselineRelation]) -> BaselineStats {
    let mut per: BTreeMap<EntityId, usize> = BTreeMap::new();
    for r in relations {
        *per.entry(r.a).or_insert(0) += 1;
        *per.entry(r.b).or_insert(0) += 1;
    }
    let persons = per.len();
    let busiest = per
        .iter()
        .fold(None, |best: Option<(EntityId, usize)>, (&e, &n)| match best {
            Some((_, m)) if m >= n => best,
            _ => Some((e, n)),
        });
    BaselineStats {
        relations: relations.len(),
        persons,
        mean_per_person: if persons == 0 { 0.0 } else { per.values().sum::<usize>() as f64 / persons as f64 },
        min_per_person: per.values().copied().min().unwrap_or(0),
        max_per_person: busiest.map_or(0, |b| b.1),
        busiest: busiest.map(|b| b.0),
    }
}

/// A page that could not be used, with the reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageError {
    pub path: String,
    pub message: String,
}

/// Reads a dump laid out as `<lang>/<entity_id>.html`. Pages that cannot be
/// read or do not name a known person are reported and skipped.
pub fn load_page_dump(dir: &Path, names: &EntityCatalog) -> Result<(Vec<PersonPage>, Vec<PageError>)> {
    let mut pages = Vec::new();
    let mut errors = Vec::new();
    let mut lang_dirs: Vec<_> = std::fs::read_dir(dir)?.collect::<std::io::Result<_>>()?;
    lang_dirs.sort_by_key(|e| e.file_name());
    for lang_dir in lang_dirs {
        if !lang_dir.file_type()?.is_dir() {
            continue;
        }
        let Ok(language) = Lang::new(&lang_dir.file_name().to_string_lossy()) else {
            continue;
        };
        let mut files: Vec<_> = std::fs::read_dir(lang_dir.path())?.collect::<std::io::Result<_>>()?;
        files.sort_by_key(|e| e.file_name());
        for f in files {
            let path = f.path();
            let shown = path.display().to_string();
            if path.extension().and_then(|e| e.to_str()) != Some("html") {
                continue;
            }
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("");
            let Ok(entity) = stem.parse::<EntityId>() else {
                errors.push(PageError { path: shown, message: "file name is not an entity id".into() });
                continue;
            };
            if !names.is_person(entity) {
                errors.push(PageError { path: shown, message: format!("entity {entity} is not a known person") });
                continue;
            }
            let text = match std::fs::read(&path).map(String::from_utf8) {
                Ok(Ok(t)) => t,
                Ok(Err(_)) => {
                    errors.push(PageError { path: shown, message: "page is not valid UTF-8".into() });
                    continue;
                }
                Err(e) => {
                    errors.push(PageError { path: shown, message: e.to_string() });
                    continue;
                }
            };
            pages.push(extract_person_links(&text, entity, language, names));
        }
    }
    Ok((pages, errors))
}

/// `entity_a<TAB>entity_b<TAB>lang,lang,...` per relation.
pub fn write_relations(relations: &[BaselineRelation]) -> String {
    let mut out = String::new();
    for r in relations {
        let langs: Vec<&str> = r.languages.iter().map(Lang::as_str).collect();
        writeln!(out, "{}\t{}\t{}", r.a, r.b, langs.join(",")).unwrap();
    }
    out
}

/// Parses a relation file. Pairs are canonicalized to `a < b` and repeated
/// pairs merge their languages.
pub fn parse_relations(text: &str, src: &str) -> Result<Vec<BaselineRelation>> {
    let mut merged: BTreeMap<(EntityId, EntityId), BTreeSet<Lang>> = BTreeMap::new();
    for (line, f) in records(text) {
        if f.len() < 3 {
            return Err(Error::parse(src, line, "expected entity_a, entity_b, languages"));
        }
        let id = |s: &str| {
            s.trim()
                .parse::<EntityId>()
                .map_err(|e| Error::parse(src, line, format!("bad entity id {s:?}: {e}")))
        };
        let (a, b) = (id(f[0])?, id(f[1])?);
        if a == b {
            return Err(Error::parse(src, line, "relation joins an entity to itself"));
        }
        let mut langs = BTreeSet::new();
        for l in f[2].split(',').map(str::trim).filter(|l| !l.is_empty()) {
            langs.insert(Lang::new(l).map_err(|e| Error::parse(src, line, e.to_string()))?);
        }
        if langs.is_empty() {
            return Err(Error::parse(src, line, "relation has no confirming language"));
        }
        merged.entry((a.min(b), a.max(b))).or_default().extend(langs);
    }
    Ok(merged
        .into_iter()
        .map(|((a, b), languages)| BaselineRelation { a, b, languages })
        .collect())
}
