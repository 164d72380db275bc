//! Compact binary snapshot of a built store.
//!
//! Layout (all integers LEB128 varints unless noted):
//!
//! ```text
//! magic      8 bytes  "RELMAP\x00\x01"
//! entities   n, then per entity: id, kind byte, canonical, k, k variants
//! clusters   n, then per cluster: id, 2 language bytes, days since CE (zigzag),
//!            article_count, medoid flag byte, [medoid]
//! postings   n, then per entity: id, k, k delta-encoded cluster slots
//! titles     n, then per entry: entity, 2 language bytes, phrase, count
//! ```
//!
//! Strings are a varint byte length followed by UTF-8. Decoding validates
//! every structural invariant and rebuilds the derived index counts, so a
//! decoded snapshot is indistinguishable from a freshly ingested one.

use chrono::{Datelike, NaiveDate};

use crate::error::{Error, Result};
use crate::model::{Cluster, EntityCatalog, EntityId, EntityKind, Lang, TitleTable};
use crate::store::index::IndexBuilder;
use crate::store::Snapshot;

const MAGIC: &[u8; 8] = b"RELMAP\x00\x01";

struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn varint(&mut self, mut v: u64) {
        loop {
            let byte = (v & 0x7f) as u8;
            v >>= 7;
            if v == 0 {
                self.buf.push(byte);
                return;
            }
            self.buf.push(byte | 0x80);
        }
    }

    fn len(&mut self, n: usize) {
        self.varint(n as u64);
    }

    fn str(&mut self, s: &str) {
        self.len(s.len());
        self.buf.extend_from_slice(s.as_bytes());
    }

    fn lang(&mut self, l: Lang) {
        self.buf.extend_from_slice(l.as_str().as_bytes());
    }
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Snapshot(msg.into())
}

impl<'a> Reader<'a> {
    fn remaining(&self) -> usize {
        self.data.len() - self.pos
    }

    fn byte(&mut self) -> Result<u8> {
        let b = *self
            .data
            .get(self.pos)
            .ok_or_else(|| bad("unexpected end of data"))?;
        self.pos += 1;
        Ok(b)
    }

    fn bytes(&mut self, n: usize) -> Result<&'a [u8]> {
        if n > self.remaining() {
            return Err(bad("unexpected end of data"));
        }
        let s = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn varint(&mut self) -> Result<u64> {
        let mut v = 0u64;
        for shift in (0..64).step_by(7) {
            let b = self.byte()?;
            let part = u64::from(b & 0x7f);
            if shift == 63 && part > 1 {
                return Err(bad("varint overflow"));
            }
            v |= part << shift;
            if b & 0x80 == 0 {
                return Ok(v);
            }
        }
        Err(bad("varint too long"))
    }

    fn u32(&mut self) -> Result<u32> {
        u32::try_from(self.varint()?).map_err(|_| bad("integer out of range"))
    }

    /// A count of items each taking at least one byte; bounded by the
    /// remaining input so corrupt lengths cannot trigger huge allocations.
    fn count(&mut self) -> Result<usize> {
        let n = self.varint()?;
        if n > self.remaining() as u64 {
            return Err(bad(format!("count {n} exceeds remaining input")));
        }
        Ok(n as usize)
    }

    fn str(&mut self) -> Result<&'a str> {
        let n = self.count()?;
        std::str::from_utf8(self.bytes(n)?).map_err(|_| bad("string is not UTF-8"))
    }

    fn lang(&mut self) -> Result<Lang> {
        let b = self.bytes(2)?;
        let s = std::str::from_utf8(b).map_err(|_| bad("bad language code"))?;
        Lang::new(s).map_err(|e| bad(e.to_string()))
    }
}

fn zigzag(v: i64) -> u64 {
    ((v << 1) ^ (v >> 63)) as u64
}

fn unzigzag(v: u64) -> i64 {
    ((v >> 1) as i64) ^ -((v & 1) as i64)
}

pub fn encode(snap: &Snapshot) -> Vec<u8> {
    let mut w = Writer { buf: MAGIC.to_vec() };

    w.len(snap.catalog.len());
    for e in snap.catalog.iter() {
        w.varint(e.id.0.into());
        w.buf.push(match e.kind {
            EntityKind::Person => 0,
            EntityKind::Organization => 1,
        });
        w.str(&e.canonical_name);
        let others: Vec<&String> = e.variants.iter().filter(|v| **v != e.canonical_name).collect();
        w.len(others.len());
        for v in others {
            w.str(v);
        }
    }

    let clusters = snap.index.clusters();
    w.len(clusters.len());
    for c in clusters {
        w.str(&c.id.0);
        w.lang(c.language);
        w.varint(zigzag(c.date.num_days_from_ce().into()));
        w.varint(c.article_count.into());
        match &c.medoid_url {
            Some(u) => {
                w.buf.push(1);
                w.str(u);
            }
            None => w.buf.push(0),
        }
    }

    let with_postings: Vec<EntityId> = snap
        .index
        .entity_ids()
        .iter()
        .copied()
        .filter(|&e| snap.index.cluster_freq(e).unwrap_or(0) > 0)
        .collect();
    w.len(with_postings.len());
    for e in with_postings {
        let p = snap.index.postings(e).expect("listed entity");
        w.varint(e.0.into());
        w.len(p.len());
        let mut prev = 0u32;
        for (i, &slot) in p.iter().enumerate() {
            w.varint(if i == 0 { slot } else { slot - prev }.into());
            prev = slot;
        }
    }

    w.len(snap.titles.len());
    for t in snap.titles.iter() {
        w.varint(t.entity.0.into());
        w.lang(t.language);
        w.str(&t.phrase);
        w.varint(t.count.into());
    }
    w.buf
}

pub fn decode(data: &[u8]) -> Result<Snapshot> {
    if data.len() < MAGIC.len() || &data[..MAGIC.len()] != MAGIC {
        return Err(bad("missing snapshot header"));
    }
    let mut r = Reader {
        data,
        pos: MAGIC.len(),
    };

    let mut catalog = EntityCatalog::new();
    for _ in 0..r.count()? {
        let id = EntityId(r.u32()?);
        let kind = match r.byte()? {
            0 => EntityKind::Person,
            1 => EntityKind::Organization,
            k => return Err(bad(format!("unknown entity kind byte {k}"))),
        };
        let canonical = r.str()?;
        let mut variants = Vec::new();
        for _ in 0..r.count()? {
            variants.push(r.str()?);
        }
        catalog
            .insert_with_id(id, canonical, kind, variants)
            .map_err(|e| bad(e.to_string()))?;
    }

    let mut clusters = Vec::new();
    for _ in 0..r.count()? {
        let id = r.str()?.into();
        let language = r.lang()?;
        let days = i32::try_from(unzigzag(r.varint()?)).map_err(|_| bad("date out of range"))?;
        let date = NaiveDate::from_num_days_from_ce_opt(days).ok_or_else(|| bad("date out of range"))?;
        let article_count = r.u32()?;
        let medoid_url = match r.byte()? {
            0 => None,
            1 => Some(r.str()?.to_string()),
            f => return Err(bad(format!("bad medoid flag {f}"))),
        };
        clusters.push(Cluster {
            id,
            language,
            date,
            medoid_url,
            article_count,
        });
    }
    if clusters.windows(2).any(|w| w[0].id >= w[1].id) {
        return Err(bad("clusters not in strictly ascending id order"));
    }
    let mut builder = IndexBuilder::new(clusters).map_err(|e| bad(e.to_string()))?;
    for e in catalog.iter() {
        builder.declare_entity(e.id);
    }

    let mut prev_entity = None;
    for _ in 0..r.count()? {
        let e = EntityId(r.u32()?);
        if prev_entity.is_some_and(|p| p >= e) {
            return Err(bad("posting lists not in ascending entity order"));
        }
        prev_entity = Some(e);
        if catalog.get(e).is_none() {
            return Err(bad(format!("postings for undeclared entity {e}")));
        }
        let n = r.count()?;
        if n == 0 {
            return Err(bad(format!("empty posting list for entity {e}")));
        }
        let mut slot = 0u32;
        for i in 0..n {
            let d = r.u32()?;
            if i > 0 && d == 0 {
                return Err(bad("posting list not strictly ascending"));
            }
            slot = slot.checked_add(d).ok_or_else(|| bad("cluster slot overflow"))?;
            if slot as usize >= builder.cluster_count() {
                return Err(bad(format!("cluster slot {slot} out of range")));
            }
            builder.add_slot(e, slot);
        }
    }

    let mut titles = TitleTable::new();
    let mut prev_key: Option<(EntityId, Lang, String)> = None;
    for _ in 0..r.count()? {
        let entity = EntityId(r.u32()?);
        let language = r.lang()?;
        let phrase = r.str()?;
        let count = r.u32()?;
        if count == 0 || phrase.is_empty() {
            return Err(bad("empty title entry"));
        }
        let key = (entity, language, phrase.to_string());
        if prev_key.as_ref().is_some_and(|p| *p >= key) {
            return Err(bad("title entries not in ascending order"));
        }
        titles.add(entity, language, phrase, count);
        prev_key = Some(key);
    }

    if r.remaining() != 0 {
        return Err(bad(format!("{} trailing bytes", r.remaining())));
    }
    Ok(Snapshot {
        catalog,
        index: builder.build(),
        titles,
    })
}
