//! Tab-separated input and output formats. Every format skips blank lines
//! and lines starting with `#`, and reports errors with 1-based line numbers.
//!
//! | file        | columns                                                       |
//! |-------------|---------------------------------------------------------------|
//! | entities    | `entity_id, kind, canonical_name[, variant]*`                 |
//! | clusters    | `cluster_id, language, date, article_count[, medoid_url]`     |
//! | occurrences | `cluster_id, language, date, entity_id_or_surface`            |
//! | titles      | `entity_id, language, phrase, count`                          |

use std::fmt::Write as _;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::model::{Cluster, ClusterId, EntityCatalog, EntityId, EntityKind, Lang, TitleTable};
use crate::store::index::{OccurrenceIndex, OccurrenceRecord};

/// Non-comment lines split on tabs, with their 1-based line numbers.
pub(crate) fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            None
        } else {
            Some((i + 1, line.split('\t').collect()))
        }
    })
}

fn field<'a>(fields: &[&'a str], i: usize, name: &str, src: &str, line: usize) -> Result<&'a str> {
    match fields.get(i).map(|f| f.trim()) {
        Some(f) if !f.is_empty() => Ok(f),
        _ => Err(Error::parse(src, line, format!("missing {name} (column {})", i + 1))),
    }
}

pub(crate) fn parse_date(s: &str) -> Option<NaiveDate> {
    if s.len() != 10 {
        return None;
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d").ok()
}

fn date_field(fields: &[&str], i: usize, src: &str, line: usize) -> Result<NaiveDate> {
    let s = field(fields, i, "date", src, line)?;
    parse_date(s).ok_or_else(|| Error::parse(src, line, format!("invalid date {s:?}, want YYYY-MM-DD")))
}

fn lang_field(fields: &[&str], i: usize, src: &str, line: usize) -> Result<Lang> {
    let s = field(fields, i, "language", src, line)?;
    Lang::new(s).map_err(|e| Error::parse(src, line, e.to_string()))
}

pub fn parse_entities(text: &str, src: &str) -> Result<EntityCatalog> {
    let mut catalog = EntityCatalog::new();
    for (line, f) in records(text) {
        let id: EntityId = field(&f, 0, "entity id", src, line)?
            .parse()
            .map_err(|e| Error::parse(src, line, format!("bad entity id: {e}")))?;
        let kind: EntityKind = field(&f, 1, "kind", src, line)?
            .parse()
            .map_err(|e: Error| Error::parse(src, line, e.to_string()))?;
        let name = field(&f, 2, "canonical name", src, line)?;
        catalog
            .insert_with_id(id, name, kind, f[3..].iter().copied())
            .map_err(|e| Error::parse(src, line, e.to_string()))?;
    }
    Ok(catalog)
}

pub fn write_entities(catalog: &EntityCatalog) -> String {
    let mut out = String::new();
    for e in catalog.iter() {
        write!(out, "{}\t{}\t{}", e.id, e.kind.as_str(), e.canonical_name).unwrap();
        for v in e.variants.iter().filter(|v| **v != e.canonical_name) {
            write!(out, "\t{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_clusters(text: &str, src: &str) -> Result<Vec<Cluster>> {
    let mut out = Vec::new();
    for (line, f) in records(text) {
        let id = field(&f, 0, "cluster id", src, line)?;
        let language = lang_field(&f, 1, src, line)?;
        let date = date_field(&f, 2, src, line)?;
        let count = field(&f, 3, "article count", src, line)?;
        let article_count: u32 = count
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::parse(src, line, format!("article count must be a positive integer, got {count:?}")))?;
        let medoid_url = f
            .get(4)
            .map(|s| s.trim())
            .filter(|s| !s.is_empty())
            .map(str::to_string);
        out.push(Cluster {
            id: id.into(),
            language,
            date,
            medoid_url,
            article_count,
        });
    }
    Ok(out)
}

pub fn write_clusters(clusters: &[Cluster]) -> String {
    let mut out = String::new();
    for c in clusters {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            c.id,
            c.language,
            c.date.format("%Y-%m-%d"),
            c.article_count,
            c.medoid_url.as_deref().unwrap_or("")
        )
        .unwrap();
    }
    out
}

/// How an occurrence line names its entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntityRef {
    Id(EntityId),
    Surface(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawOccurrence {
    pub line: usize,
    pub cluster: ClusterId,
    pub language: Lang,
    pub date: NaiveDate,
    pub entity: EntityRef,
}

pub fn parse_occurrences(text: &str, src: &str) -> Result<Vec<RawOccurrence>> {
    let mut out = Vec::new();
    for (line, f) in records(text) {
        let cluster = field(&f, 0, "cluster id", src, line)?.into();
        let language = lang_field(&f, 1, src, line)?;
        let date = date_field(&f, 2, src, line)?;
        let who = field(&f, 3, "entity", src, line)?;
        let entity = if who.bytes().all(|b| b.is_ascii_digit()) {
            EntityRef::Id(
                who.parse()
                    .map_err(|e| Error::parse(src, line, format!("bad entity id: {e}")))?,
            )
        } else {
            EntityRef::Surface(who.to_string())
        };
        out.push(RawOccurrence {
            line,
            cluster,
            language,
            date,
            entity,
        });
    }
    Ok(out)
}

/// What to do with a surface form the catalog does not know.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnknownSurface {
    /// Register it as a new person under the next free id.
    #[default]
    Create,
    Reject,
}

/// Resolves each occurrence's entity against the catalog, creating or
/// rejecting unknown surfaces per `policy`. Numeric ids must be declared.
pub fn resolve_occurrences(
    raw: Vec<RawOccurrence>,
    catalog: &mut EntityCatalog,
    policy: UnknownSurface,
    src: &str,
) -> Result<Vec<(usize, OccurrenceRecord)>> {
    let mut out = Vec::with_capacity(raw.len());
    for r in raw {
        let entity = match &r.entity {
            EntityRef::Id(id) => {
                if catalog.get(*id).is_none() {
                    return Err(Error::parse(src, r.line, format!("undeclared entity id {id}")));
                }
                *id
            }
            EntityRef::Surface(s) => match catalog.resolve(s) {
                Some(id) => id,
                None if policy == UnknownSurface::Create => catalog
                    .insert(s, EntityKind::Person, [])
                    .map_err(|e| Error::parse(src, r.line, e.to_string()))?,
                None => return Err(Error::parse(src, r.line, format!("unknown name {s:?}"))),
            },
        };
        out.push((
            r.line,
            OccurrenceRecord {
                entity,
                cluster: r.cluster,
                language: r.language,
                date: r.date,
            },
        ));
    }
    Ok(out)
}

pub fn write_occurrences(index: &OccurrenceIndex) -> String {
    let mut out = String::new();
    for (e, slot) in index.pairs() {
        let c = index.cluster(slot);
        writeln!(out, "{}\t{}\t{}\t{}", c.id, c.language, c.date.format("%Y-%m-%d"), e).unwrap();
    }
    out
}

pub fn parse_titles(text: &str, src: &str) -> Result<TitleTable> {
    let mut table = TitleTable::new();
    for (line, f) in records(text) {
        let entity: EntityId = field(&f, 0, "entity id", src, line)?
            .parse()
            .map_err(|e| Error::parse(src, line, format!("bad entity id: {e}")))?;
        let language = lang_field(&f, 1, src, line)?;
        let phrase = field(&f, 2, "phrase", src, line)?;
        let count = field(&f, 3, "count", src, line)?;
        let count: u32 = count
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::parse(src, line, format!("count must be a positive integer, got {count:?}")))?;
        table.add(entity, language, phrase, count);
    }
    Ok(table)
}

pub fn write_titles(table: &TitleTable) -> String {
    let mut out = String::new();
    for t in table.iter() {
        writeln!(out, "{}\t{}\t{}\t{}", t.entity, t.language, t.phrase, t.count).unwrap();
    }
    out
}
