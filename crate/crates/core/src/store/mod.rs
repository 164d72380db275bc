//! Ingestion, persistence and the inverted occurrence index.

mod files;
mod index;
mod snapshot;

use std::path::Path;

pub use files::{
    parse_clusters, parse_entities, parse_occurrences, parse_titles, resolve_occurrences,
    write_clusters, write_entities, write_occurrences, write_titles, EntityRef, RawOccurrence,
    UnknownSurface,
};
pub(crate) use files::records;
pub use index::{ingest, IndexBuilder, OccurrenceIndex, OccurrenceRecord};
pub(crate) use index::intersection_len;

use crate::error::{Error, Result};
use crate::model::{Cluster, EntityCatalog, TitleTable};

/// Everything the linker and the service read: the entity catalog, the
/// occurrence index and the title table. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub catalog: EntityCatalog,
    pub index: OccurrenceIndex,
    pub titles: TitleTable,
}

impl Snapshot {
    /// Builds a snapshot whose index knows every catalog entity, including
    /// ones that never occur.
    pub fn build(
        catalog: EntityCatalog,
        clusters: Vec<Cluster>,
        records: impl IntoIterator<Item = (usize, OccurrenceRecord)>,
        titles: TitleTable,
        src: &str,
    ) -> Result<Self> {
        let mut b = IndexBuilder::new(clusters)?;
        for e in catalog.iter() {
            b.declare_entity(e.id);
        }
        for (line, rec) in records {
            if catalog.get(rec.entity).is_none() {
                return Err(Error::parse(src, line, format!("undeclared entity id {}", rec.entity)));
            }
            b.add(&rec).map_err(|e| Error::parse(src, line, e.to_string()))?;
        }
        Ok(Snapshot {
            catalog,
            index: b.build(),
            titles,
        })
    }

    /// Reads the four tab-separated sources and builds a snapshot. The
    /// titles file is optional.
    pub fn from_files(
        entities: &Path,
        clusters: &Path,
        occurrences: &Path,
        titles: Option<&Path>,
        policy: UnknownSurface,
    ) -> Result<Self> {
        let read = |p: &Path| {
            std::fs::read_to_string(p).map_err(|e| {
                Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", p.display())))
            })
        };
        let name = |p: &Path| p.display().to_string();
        let mut catalog = parse_entities(&read(entities)?, &name(entities))?;
        let clusters_v = parse_clusters(&read(clusters)?, &name(clusters))?;
        let raw = parse_occurrences(&read(occurrences)?, &name(occurrences))?;
        let records = resolve_occurrences(raw, &mut catalog, policy, &name(occurrences))?;
        let titles = match titles {
            Some(p) => parse_titles(&read(p)?, &name(p))?,
            None => TitleTable::new(),
        };
        Snapshot::build(catalog, clusters_v, records, titles, &name(occurrences))
    }

    pub fn encode(&self) -> Vec<u8> {
        snapshot::encode(self)
    }

    pub fn decode(data: &[u8]) -> Result<Self> {
        snapshot::decode(data)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        // Write-then-rename so a reader never sees a half-written file.
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.encode())?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let data = std::fs::read(path).map_err(|e| {
            Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
        })?;
        Self::decode(&data)
    }
}
