//! Domain types shared by every stage: entities and their surface variants,
//! clusters, occurrences and title attributions.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Store-assigned identifier for a canonical person or organization.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct EntityId(pub u32);

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for EntityId {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        s.parse().map(EntityId)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityKind {
    Person,
    Organization,
}

impl EntityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EntityKind::Person => "person",
            EntityKind::Organization => "organization",
        }
    }
}

impl FromStr for EntityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "person" | "p" => Ok(EntityKind::Person),
            "organization" | "organisation" | "org" | "o" => Ok(EntityKind::Organization),
            other => Err(Error::Config(format!("unknown entity kind {other:?}"))),
        }
    }
}

/// Two-letter lowercase ISO-639-1 language code.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lang([u8; 2]);

impl Lang {
    pub fn new(code: &str) -> Result<Self> {
        match code.as_bytes() {
            &[a, b] if a.is_ascii_lowercase() && b.is_ascii_lowercase() => Ok(Lang([a, b])),
            _ => Err(Error::Config(format!(
                "language code must be two lowercase ASCII letters, got {code:?}"
            ))),
        }
    }

    pub fn as_str(&self) -> &str {
        // Constructed only from ASCII lowercase bytes.
        std::str::from_utf8(&self.0).unwrap()
    }
}

impl fmt::Debug for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lang({})", self.as_str())
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Lang {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Lang::new(s)
    }
}

impl Serialize for Lang {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Lang {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Lang::new(&s).map_err(serde::de::Error::custom)
    }
}

/// Opaque cluster identifier as it appears in the manifest.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClusterId(pub String);

impl fmt::Display for ClusterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ClusterId {
    fn from(s: &str) -> Self {
        ClusterId(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entity {
    pub id: EntityId,
    pub canonical_name: String,
    /// Always contains `canonical_name`.
    pub variants: BTreeSet<String>,
    pub kind: EntityKind,
}

/// A story: a group of articles in one language on one day.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cluster {
    pub id: ClusterId,
    pub language: Lang,
    pub date: NaiveDate,
    pub medoid_url: Option<String>,
    pub article_count: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occurrence {
    pub entity: EntityId,
    pub cluster: ClusterId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TitleAttribution {
    pub entity: EntityId,
    pub phrase: String,
    pub language: Lang,
    pub count: u32,
}

/// Title attributions of a store, one entry per (entity, language, phrase).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TitleTable {
    entries: BTreeMap<(EntityId, Lang, String), u32>,
}

impl TitleTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `count` recognitions of `phrase` for `entity`.
    pub fn add(&mut self, entity: EntityId, language: Lang, phrase: &str, count: u32) {
        if count == 0 {
            return;
        }
        *self
            .entries
            .entry((entity, language, phrase.to_string()))
            .or_insert(0) += count;
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = TitleAttribution> + '_ {
        self.entries
            .iter()
            .map(|((entity, language, phrase), &count)| TitleAttribution {
                entity: *entity,
                phrase: phrase.clone(),
                language: *language,
                count,
            })
    }

    /// Entries for one entity, in (language, phrase) order.
    pub fn for_entity(&self, entity: EntityId) -> impl Iterator<Item = TitleAttribution> + '_ {
        let lo = (entity, Lang([0, 0]), String::new());
        self.entries
            .range(lo..)
            .take_while(move |((e, _, _), _)| *e == entity)
            .map(|((entity, language, phrase), &count)| TitleAttribution {
                entity: *entity,
                phrase: phrase.clone(),
                language: *language,
                count,
            })
    }
}

/// Collapses runs of whitespace to a single space and trims both ends.
pub fn normalize_whitespace(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for word in s.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

/// Surface form to entity lookup. Keys are stored whitespace-normalized and
/// each key maps to exactly one entity.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VariantMap {
    map: HashMap<String, EntityId>,
}

impl VariantMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a surface form. Re-adding the same (surface, id) pair is a no-op;
    /// mapping a surface already owned by another entity is an error.
    pub fn insert(&mut self, surface: &str, id: EntityId) -> Result<()> {
        let key = normalize_whitespace(surface);
        if key.is_empty() {
            return Err(Error::Config("empty name variant".into()));
        }
        match self.map.get(&key) {
            Some(&existing) if existing != id => Err(Error::Config(format!(
                "variant {key:?} already belongs to entity {existing}, cannot map it to {id}"
            ))),
            Some(_) => Ok(()),
            None => {
                self.map.insert(key, id);
                Ok(())
            }
        }
    }

    pub fn get_normalized(&self, key: &str) -> Option<EntityId> {
        self.map.get(key).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, EntityId)> {
        self.map.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

impl<'a> FromIterator<(&'a str, EntityId)> for VariantMap {
    /// Panics if the pairs violate injectivity; intended for fixtures.
    fn from_iter<I: IntoIterator<Item = (&'a str, EntityId)>>(iter: I) -> Self {
        let mut map = VariantMap::new();
        for (surface, id) in iter {
            map.insert(surface, id).expect("conflicting variant");
        }
        map
    }
}

/// Looks up a surface form after whitespace normalization. Matching is
/// otherwise exact: no case folding.
pub fn resolve_variant(surface: &str, variants: &VariantMap) -> Option<EntityId> {
    variants.get_normalized(&normalize_whitespace(surface))
}

/// All known entities of one store together with their variant index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EntityCatalog {
    entities: BTreeMap<EntityId, Entity>,
    variants: VariantMap,
}

impl EntityCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Id the next call to [`EntityCatalog::insert`] will assign.
    pub fn next_id(&self) -> EntityId {
        self.entities
            .keys()
            .next_back()
            .map_or(EntityId(1), |id| EntityId(id.0 + 1))
    }

    /// Registers a new entity under the next free id.
    pub fn insert<'a>(
        &mut self,
        canonical_name: &str,
        kind: EntityKind,
        variants: impl IntoIterator<Item = &'a str>,
    ) -> Result<EntityId> {
        let id = self.next_id();
        self.insert_with_id(id, canonical_name, kind, variants)?;
        Ok(id)
    }

    /// Registers an entity under a caller-chosen id (used when loading files).
    pub fn insert_with_id<'a>(
        &mut self,
        id: EntityId,
        canonical_name: &str,
        kind: EntityKind,
        variants: impl IntoIterator<Item = &'a str>,
    ) -> Result<()> {
        if self.entities.contains_key(&id) {
            return Err(Error::Config(format!("entity id {id} declared twice")));
        }
        let canonical = normalize_whitespace(canonical_name);
        if canonical.is_empty() {
            return Err(Error::Config(format!("entity {id} has an empty name")));
        }
        let mut all: BTreeSet<String> = BTreeSet::new();
        all.insert(canonical.clone());
        for v in variants {
            let v = normalize_whitespace(v);
            if !v.is_empty() {
                all.insert(v);
            }
        }
        // Check every variant before touching the map so a failed insert
        // leaves the catalog unchanged.
        for v in &all {
            if let Some(owner) = self.variants.get_normalized(v) {
                return Err(Error::Config(format!(
                    "variant {v:?} already belongs to entity {owner}, cannot map it to {id}"
                )));
            }
        }
        for v in &all {
            self.variants.insert(v, id)?;
        }
        self.entities.insert(
            id,
            Entity {
                id,
                canonical_name: canonical,
                variants: all,
                kind,
            },
        );
        Ok(())
    }

    pub fn get(&self, id: EntityId) -> Option<&Entity> {
        self.entities.get(&id)
    }

    pub fn kind(&self, id: EntityId) -> Option<EntityKind> {
        self.entities.get(&id).map(|e| e.kind)
    }

    pub fn is_person(&self, id: EntityId) -> bool {
        self.kind(id) == Some(EntityKind::Person)
    }

    pub fn resolve(&self, surface: &str) -> Option<EntityId> {
        resolve_variant(surface, &self.variants)
    }

    pub fn variants(&self) -> &VariantMap {
        &self.variants
    }

    pub fn iter(&self) -> impl Iterator<Item = &Entity> {
        self.entities.values()
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    /// Case-insensitive substring search over canonical names and variants,
    /// results in id order.
    pub fn search(&self, query: &str) -> Vec<&Entity> {
        let needle = query.trim().to_lowercase();
        if needle.is_empty() {
            return Vec::new();
        }
        self.entities
            .values()
            .filter(|e| e.variants.iter().any(|v| v.to_lowercase().contains(&needle)))
            .collect()
    }
}
