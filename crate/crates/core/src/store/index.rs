use std::collections::{BTreeMap, BTreeSet, HashMap};

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::model::{Cluster, ClusterId, EntityId, Lang};

/// One line of occurrence input after entity resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceRecord {
    pub entity: EntityId,
    pub cluster: ClusterId,
    pub language: Lang,
    pub date: NaiveDate,
}

/// Immutable inverted index from entities to the clusters mentioning them,
/// with per-entity cluster frequency (C_e) and associate count (A_e).
///
/// Entities and clusters are addressed internally by dense slots: entity
/// slots follow ascending [`EntityId`], cluster slots ascending [`ClusterId`].
#[derive(Debug, Clone, PartialEq)]
pub struct OccurrenceIndex {
    entity_ids: Vec<EntityId>,
    postings: Vec<Vec<u32>>,
    associate_count: Vec<u32>,
    clusters: Vec<Cluster>,
    cluster_members: Vec<Vec<u32>>,
    by_date: BTreeMap<NaiveDate, Vec<u32>>,
    snapshot_date: Option<NaiveDate>,
}

impl OccurrenceIndex {
    pub fn empty() -> Self {
        IndexBuilder::default().build()
    }

    fn slot(&self, id: EntityId) -> Result<usize> {
        self.entity_ids
            .binary_search(&id)
            .map_err(|_| Error::UnknownEntity(id))
    }

    pub fn contains(&self, id: EntityId) -> bool {
        self.entity_ids.binary_search(&id).is_ok()
    }

    /// Every entity known to the index, ascending.
    pub fn entity_ids(&self) -> &[EntityId] {
        &self.entity_ids
    }

    pub fn entity_count(&self) -> usize {
        self.entity_ids.len()
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn cluster(&self, slot: u32) -> &Cluster {
        &self.clusters[slot as usize]
    }

    pub fn cluster_slot(&self, id: &ClusterId) -> Option<u32> {
        self.clusters
            .binary_search_by(|c| c.id.cmp(id))
            .ok()
            .map(|s| s as u32)
    }

    /// Entities mentioned in a cluster, ascending by id.
    pub fn cluster_members(&self, slot: u32) -> impl Iterator<Item = EntityId> + '_ {
        self.cluster_members[slot as usize]
            .iter()
            .map(|&e| self.entity_ids[e as usize])
    }

    /// Cluster slots mentioning `id`, ascending.
    pub fn postings(&self, id: EntityId) -> Result<&[u32]> {
        Ok(&self.postings[self.slot(id)?])
    }

    /// C_e: number of clusters mentioning the entity.
    pub fn cluster_freq(&self, id: EntityId) -> Result<u32> {
        Ok(self.postings[self.slot(id)?].len() as u32)
    }

    /// A_e: number of distinct other entities sharing at least one cluster.
    pub fn associate_count(&self, id: EntityId) -> Result<u32> {
        Ok(self.associate_count[self.slot(id)?])
    }

    /// Latest date of any declared cluster.
    pub fn snapshot_date(&self) -> Option<NaiveDate> {
        self.snapshot_date
    }

    /// Cluster slots dated `day`, ascending.
    pub fn clusters_on(&self, day: NaiveDate) -> &[u32] {
        self.by_date.get(&day).map_or(&[], Vec::as_slice)
    }

    /// C_{a,b}: number of clusters mentioning both entities.
    pub fn co_cluster_count(&self, a: EntityId, b: EntityId) -> Result<u32> {
        let pa = self.postings(a)?;
        let pb = self.postings(b)?;
        Ok(intersection_len(pa, pb) as u32)
    }

    /// Co-occurring entities with their shared cluster counts, sorted by
    /// count descending then id ascending. Cost is the summed size of the
    /// entity's clusters.
    pub fn neighbors(&self, id: EntityId) -> Result<Vec<(EntityId, u32)>> {
        let me = self.slot(id)?;
        let mut tally = vec![0u32; self.entity_ids.len()];
        let mut touched = Vec::new();
        for &c in &self.postings[me] {
            for &e in &self.cluster_members[c as usize] {
                let e = e as usize;
                if e == me {
                    continue;
                }
                if tally[e] == 0 {
                    touched.push(e);
                }
                tally[e] += 1;
            }
        }
        let mut out: Vec<(EntityId, u32)> = touched
            .into_iter()
            .map(|e| (self.entity_ids[e], tally[e]))
            .collect();
        out.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        Ok(out)
    }

    /// The deduplicated (entity, cluster slot) pairs, ordered by entity then cluster.
    pub fn pairs(&self) -> impl Iterator<Item = (EntityId, u32)> + '_ {
        self.entity_ids
            .iter()
            .zip(&self.postings)
            .flat_map(|(&e, p)| p.iter().map(move |&c| (e, c)))
    }

    pub fn occurrence_count(&self) -> usize {
        self.postings.iter().map(Vec::len).sum()
    }
}

/// Size of the intersection of two ascending slices. Falls back to binary
/// search of the shorter list when the lengths are very unequal.
pub(crate) fn intersection_len(a: &[u32], b: &[u32]) -> usize {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if small.is_empty() {
        return 0;
    }
    if large.len() / small.len() >= 16 {
        let mut rest = large;
        let mut n = 0;
        for x in small {
            match rest.binary_search(x) {
                Ok(i) => {
                    n += 1;
                    rest = &rest[i + 1..];
                }
                Err(i) => rest = &rest[i..],
            }
        }
        return n;
    }
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < small.len() && j < large.len() {
        match small[i].cmp(&large[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Single-writer builder for [`OccurrenceIndex`]. Clusters must be declared
/// up front; occurrences referencing other clusters are rejected.
#[derive(Debug, Default)]
pub struct IndexBuilder {
    clusters: Vec<Cluster>,
    slots: HashMap<ClusterId, u32>,
    entities: BTreeSet<EntityId>,
    pairs: Vec<(EntityId, u32)>,
}

impl IndexBuilder {
    pub fn new(clusters: impl IntoIterator<Item = Cluster>) -> Result<Self> {
        let mut clusters: Vec<Cluster> = clusters.into_iter().collect();
        clusters.sort_by(|a, b| a.id.cmp(&b.id));
        for w in clusters.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::Config(format!("cluster {} declared twice", w[0].id)));
            }
        }
        if let Some(c) = clusters.iter().find(|c| c.article_count == 0) {
            return Err(Error::Config(format!("cluster {} has zero articles", c.id)));
        }
        let slots = clusters
            .iter()
            .enumerate()
            .map(|(i, c)| (c.id.clone(), i as u32))
            .collect();
        Ok(IndexBuilder {
            clusters,
            slots,
            ..Default::default()
        })
    }

    /// Makes an entity known to the index even if it never occurs.
    pub fn declare_entity(&mut self, id: EntityId) {
        self.entities.insert(id);
    }

    pub fn add(&mut self, rec: &OccurrenceRecord) -> Result<()> {
        let slot = *self
            .slots
            .get(&rec.cluster)
            .ok_or_else(|| Error::Config(format!("undeclared cluster {}", rec.cluster)))?;
        let c = &self.clusters[slot as usize];
        if c.language != rec.language || c.date != rec.date {
            return Err(Error::Config(format!(
                "cluster {} is declared as {}/{} but referenced as {}/{}",
                c.id, c.language, c.date, rec.language, rec.date
            )));
        }
        self.add_slot(rec.entity, slot);
        Ok(())
    }

    pub(crate) fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    pub(crate) fn add_slot(&mut self, entity: EntityId, slot: u32) {
        debug_assert!((slot as usize) < self.clusters.len());
        self.entities.insert(entity);
        self.pairs.push((entity, slot));
    }

    pub fn build(self) -> OccurrenceIndex {
        let IndexBuilder {
            clusters,
            entities,
            mut pairs,
            ..
        } = self;
        pairs.sort_unstable();
        pairs.dedup();

        let entity_ids: Vec<EntityId> = entities.into_iter().collect();
        let mut postings = vec![Vec::new(); entity_ids.len()];
        let mut cluster_members = vec![Vec::new(); clusters.len()];
        let mut slot = 0usize;
        for (e, c) in pairs {
            while entity_ids[slot] != e {
                slot += 1;
            }
            postings[slot].push(c);
            // Pairs are entity-major, so member lists come out ascending.
            cluster_members[c as usize].push(slot as u32);
        }

        let mut associate_count = vec![0u32; entity_ids.len()];
        let mut stamp = vec![u32::MAX; entity_ids.len()];
        for (me, clusters_of) in postings.iter().enumerate() {
            let mut n = 0;
            for &c in clusters_of {
                for &other in &cluster_members[c as usize] {
                    let other = other as usize;
                    if other != me && stamp[other] != me as u32 {
                        stamp[other] = me as u32;
                        n += 1;
                    }
                }
            }
            associate_count[me] = n;
        }

        let mut by_date: BTreeMap<NaiveDate, Vec<u32>> = BTreeMap::new();
        for (i, c) in clusters.iter().enumerate() {
            by_date.entry(c.date).or_default().push(i as u32);
        }
        let snapshot_date = by_date.keys().next_back().copied();

        OccurrenceIndex {
            entity_ids,
            postings,
            associate_count,
            clusters,
            cluster_members,
            by_date,
            snapshot_date,
        }
    }
}

/// Builds an index from a cluster manifest and a stream of resolved records.
/// Duplicate (entity, cluster) pairs collapse; a record naming an undeclared
/// cluster fails with its 1-based position in the stream.
pub fn ingest(
    clusters: impl IntoIterator<Item = Cluster>,
    records: impl IntoIterator<Item = OccurrenceRecord>,
) -> Result<OccurrenceIndex> {
    let mut b = IndexBuilder::new(clusters)?;
    for (i, rec) in records.into_iter().enumerate() {
        b.add(&rec).map_err(|e| Error::parse("records", i + 1, e.to_string()))?;
    }
    Ok(b.build())
}
