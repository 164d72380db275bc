//! Related and associated person lists.
//!
//! *Related* partners are ranked by raw cluster co-occurrence. *Associated*
//! partners are ranked by the specific association weight
//!
//! ```text
//! w(a, b) = Co(a, b) · Icf(a, b) · Iass(a, b)
//! Co   = 1 + ln C_ab
//! Icf  = 2 C_ab / (C_a + C_b)
//! Iass = 1 / (1 + ln(A_a · A_b))
//! ```
//!
//! where C_ab counts shared clusters, C_e the clusters mentioning e and A_e
//! the distinct entities ever co-occurring with e. All logarithms are
//! natural. The weight is unbounded above.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EntityId, Lang, TitleTable};
use crate::store::OccurrenceIndex;

/// Cluster co-occurrence weight, `1 + ln(c12)`.
pub fn co_weight(c12: u32) -> Result<f64> {
    if c12 == 0 {
        return Err(Error::domain("co-occurrence weight needs at least one shared cluster"));
    }
    Ok(1.0 + f64::from(c12).ln())
}

/// Inverse cluster frequency, `2·c12 / (c1 + c2)`, in (0, 1].
pub fn icf(c12: u32, c1: u32, c2: u32) -> Result<f64> {
    if c12 == 0 || c12 > c1 || c12 > c2 {
        return Err(Error::domain(format!(
            "icf needs 1 <= c12 <= min(c1, c2), got c12={c12} c1={c1} c2={c2}"
        )));
    }
    Ok(2.0 * f64::from(c12) / (f64::from(c1) + f64::from(c2)))
}

/// Inverse association frequency, `1 / (1 + ln(a1·a2))`, in (0, 1].
pub fn iass(a1: u32, a2: u32) -> Result<f64> {
    if a1 == 0 || a2 == 0 {
        return Err(Error::domain(format!(
            "iass needs both associate counts >= 1, got a1={a1} a2={a2}"
        )));
    }
    // The product of two u32 values fits exactly in a u64.
    let prod = u64::from(a1) * u64::from(a2);
    Ok(1.0 / (1.0 + (prod as f64).ln()))
}

/// The weight from raw counts.
pub fn weight_from_counts(c12: u32, c1: u32, c2: u32, a1: u32, a2: u32) -> Result<f64> {
    Ok(co_weight(c12)? * icf(c12, c1, c2)? * iass(a1, a2)?)
}

/// Specific association weight of two co-occurring entities.
pub fn association_weight(index: &OccurrenceIndex, e1: EntityId, e2: EntityId) -> Result<f64> {
    let c12 = index.co_cluster_count(e1, e2)?;
    if c12 == 0 {
        return Err(Error::domain(format!("entities {e1} and {e2} never co-occur")));
    }
    pair_weight(index, e1, e2, c12)
}

fn pair_weight(index: &OccurrenceIndex, e1: EntityId, e2: EntityId, c12: u32) -> Result<f64> {
    // Operands are ordered so the product is bit-identical for (a, b) and (b, a).
    let (x, y) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
    weight_from_counts(
        c12,
        index.cluster_freq(x)?,
        index.cluster_freq(y)?,
        index.associate_count(x)?,
        index.associate_count(y)?,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankMode {
    Related,
    Associated,
}

impl RankMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RankMode::Related => "related",
            RankMode::Associated => "associated",
        }
    }
}

impl std::str::FromStr for RankMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "related" => Ok(RankMode::Related),
            "associated" => Ok(RankMode::Associated),
            other => Err(Error::Config(format!("unknown ranking mode {other:?}"))),
        }
    }
}

/// One partner of the subject in a ranked list.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub entity: EntityId,
    pub co_count: u32,
    /// `co_count` in related mode, the association weight in associated mode.
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedList {
    pub subject: EntityId,
    pub mode: RankMode,
    pub entries: Vec<RankedEntry>,
}

fn check_rank(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Config("rank must be at least 1".into()));
    }
    Ok(())
}

/// Every partner of `e`, fully ranked for `mode`.
pub fn rank_all(index: &OccurrenceIndex, e: EntityId, mode: RankMode) -> Result<Vec<RankedEntry>> {
    let neighbors = index.neighbors(e)?;
    match mode {
        // neighbors() is already count-descending, id-ascending.
        RankMode::Related => Ok(neighbors
            .into_iter()
            .map(|(entity, c)| RankedEntry {
                entity,
                co_count: c,
                score: f64::from(c),
            })
            .collect()),
        RankMode::Associated => {
            let mut out = neighbors
                .into_iter()
                .map(|(entity, c)| {
                    Ok(RankedEntry {
                        entity,
                        co_count: c,
                        score: pair_weight(index, e, entity, c)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            out.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.entity.cmp(&b.entity)));
            Ok(out)
        }
    }
}

/// Top `n` partners of `e` in `mode`.
pub fn ranked(index: &OccurrenceIndex, e: EntityId, n: usize, mode: RankMode) -> Result<RankedList> {
    check_rank(n)?;
    let mut entries = rank_all(index, e, mode)?;
    entries.truncate(n);
    Ok(RankedList {
        subject: e,
        mode,
        entries,
    })
}

/// Top `n` partners by shared cluster count.
pub fn related(index: &OccurrenceIndex, e: EntityId, n: usize) -> Result<RankedList> {
    ranked(index, e, n, RankMode::Related)
}

/// Top `n` partners by association weight.
pub fn associated(index: &OccurrenceIndex, e: EntityId, n: usize) -> Result<RankedList> {
    ranked(index, e, n, RankMode::Associated)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TitleSummary {
    pub phrase: String,
    pub language: Lang,
    pub count: u32,
}

/// The `k` most frequent titles of `e`, ties by (language, phrase).
pub fn top_titles(titles: &TitleTable, e: EntityId, k: usize) -> Result<Vec<TitleSummary>> {
    check_rank(k)?;
    let mut all: Vec<TitleSummary> = titles
        .for_entity(e)
        .map(|t| TitleSummary {
            phrase: t.phrase,
            language: t.language,
            count: t.count,
        })
        .collect();
    all.sort_by(|a, b| {
        b.count
            .cmp(&a.count)
            .then(a.language.cmp(&b.language))
            .then_with(|| a.phrase.cmp(&b.phrase))
    });
    all.truncate(k);
    Ok(all)
}

/// Entities mentioned in the most clusters dated `day`, ties by id.
pub fn vip_list(index: &OccurrenceIndex, day: NaiveDate, k: usize) -> Result<Vec<(EntityId, u32)>> {
    check_rank(k)?;
    let mut counts: std::collections::HashMap<EntityId, u32> = Default::default();
    for &c in index.clusters_on(day) {
        for e in index.cluster_members(c) {
            *counts.entry(e).or_insert(0) += 1;
        }
    }
    let mut out: Vec<(EntityId, u32)> = counts.into_iter().collect();
    out.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    out.truncate(k);
    Ok(out)
}
