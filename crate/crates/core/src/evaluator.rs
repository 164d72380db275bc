//! Precision and recall of ranked partner lists against a relation baseline.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::baseline::BaselineRelation;
use crate::error::{Error, Result};
use crate::linker::{rank_all, RankMode};
use crate::model::{EntityCatalog, EntityId};
use crate::store::OccurrenceIndex;

pub const DEFAULT_RANKS: [usize; 11] = [1, 2, 3, 4, 5, 10, 20, 30, 50, 75, 100];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Averaging {
    /// Mean of per-person precision and recall.
    #[default]
    Macro,
    /// Hits pooled over all persons before dividing.
    Micro,
}

impl Averaging {
    pub fn as_str(self) -> &'static str {
        match self {
            Averaging::Macro => "macro",
            Averaging::Micro => "micro",
        }
    }
}

impl std::str::FromStr for Averaging {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "macro" => Ok(Averaging::Macro),
            "micro" => Ok(Averaging::Micro),
            other => Err(Error::Config(format!("unknown averaging {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    pub ranks: Vec<usize>,
    pub mode: RankMode,
    pub averaging: Averaging,
    /// Restricts evaluation to these persons. `None` evaluates every person
    /// that appears in the baseline.
    pub persons: Option<BTreeSet<EntityId>>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            ranks: DEFAULT_RANKS.to_vec(),
            mode: RankMode::Related,
            averaging: Averaging::Macro,
            persons: None,
        }
    }
}

impl EvalConfig {
    pub fn with_mode(mode: RankMode) -> Self {
        EvalConfig {
            mode,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankRow {
    pub rank: usize,
    pub precision: f64,
    pub recall: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub mode: RankMode,
    pub averaging: Averaging,
    pub persons_evaluated: usize,
    pub baseline_size: usize,
    pub rows: Vec<RankRow>,
}

impl EvalReport {
    pub fn at(&self, rank: usize) -> Option<RankRow> {
        self.rows.iter().copied().find(|r| r.rank == rank)
    }
}

/// Baseline partners per person, after dropping relations with a non-person
/// endpoint.
pub fn baseline_partners(
    baseline: &[BaselineRelation],
    catalog: &EntityCatalog,
) -> (BTreeMap<EntityId, BTreeSet<EntityId>>, usize) {
    let mut partners: BTreeMap<EntityId, BTreeSet<EntityId>> = BTreeMap::new();
    let mut kept = 0;
    for r in baseline {
        if !(catalog.is_person(r.a) && catalog.is_person(r.b)) {
            continue;
        }
        kept += 1;
        partners.entry(r.a).or_default().insert(r.b);
        partners.entry(r.b).or_default().insert(r.a);
    }
    (partners, kept)
}

fn check_ranks(ranks: &[usize]) -> Result<()> {
    if ranks.is_empty() {
        return Err(Error::Config("no cutoff ranks given".into()));
    }
    if ranks.contains(&0) {
        return Err(Error::Config("cutoff ranks must be at least 1".into()));
    }
    Ok(())
}

/// Scores precomputed ranked lists. `lists[p]` is p's list, best first;
/// persons without a list count as returning nothing.
pub fn evaluate_lists(
    lists: &BTreeMap<EntityId, Vec<EntityId>>,
    partners: &BTreeMap<EntityId, BTreeSet<EntityId>>,
    ranks: &[usize],
    averaging: Averaging,
) -> Result<Vec<RankRow>> {
    check_ranks(ranks)?;
    if partners.is_empty() {
        return Err(Error::Config("baseline has no persons to evaluate".into()));
    }
    let empty = Vec::new();
    let persons = partners.len() as f64;
    Ok(ranks
        .iter()
        .map(|&n| {
            let (mut p_sum, mut r_sum) = (0.0, 0.0);
            let (mut hits, mut returned, mut wanted) = (0usize, 0usize, 0usize);
            for (p, truth) in partners {
                let list = lists.get(p).unwrap_or(&empty);
                let top = &list[..n.min(list.len())];
                let h = top.iter().filter(|e| truth.contains(e)).count();
                if !top.is_empty() {
                    p_sum += h as f64 / top.len() as f64;
                }
                r_sum += h as f64 / truth.len() as f64;
                hits += h;
                returned += top.len();
                wanted += truth.len();
            }
            let (precision, recall) = match averaging {
                Averaging::Macro => (p_sum / persons, r_sum / persons),
                Averaging::Micro => (
                    if returned == 0 { 0.0 } else { hits as f64 / returned as f64 },
                    hits as f64 / wanted as f64,
                ),
            };
            RankRow {
                rank: n,
                precision,
                recall,
            }
        })
        .collect())
}

/// Ranks each baseline person's partners from the index and scores the lists.
/// Organizations never appear in the scored lists.
pub fn evaluate(
    index: &OccurrenceIndex,
    catalog: &EntityCatalog,
    baseline: &[BaselineRelation],
    config: &EvalConfig,
) -> Result<EvalReport> {
    check_ranks(&config.ranks)?;
    let (mut partners, baseline_size) = baseline_partners(baseline, catalog);
    if let Some(keep) = &config.persons {
        partners.retain(|p, _| keep.contains(p));
    }
    if partners.is_empty() {
        return Err(Error::Config("baseline has no persons to evaluate".into()));
    }
    let depth = config.ranks.iter().copied().max().unwrap_or(0);
    let mut lists = BTreeMap::new();
    for &p in partners.keys() {
        if !index.contains(p) {
            continue;
        }
        let list: Vec<EntityId> = rank_all(index, p, config.mode)?
            .into_iter()
            .map(|e| e.entity)
            .filter(|&e| catalog.is_person(e))
            .take(depth)
            .collect();
        lists.insert(p, list);
    }
    let rows = evaluate_lists(&lists, &partners, &config.ranks, config.averaging)?;
    Ok(EvalReport {
        mode: config.mode,
        averaging: config.averaging,
        persons_evaluated: partners.len(),
        baseline_size,
        rows,
    })
}

/// Runs the same evaluation for both ranking modes.
pub fn compare_modes(
    index: &OccurrenceIndex,
    catalog: &EntityCatalog,
    baseline: &[BaselineRelation],
    config: &EvalConfig,
) -> Result<(EvalReport, EvalReport)> {
    let run = |mode| {
        evaluate(
            index,
            catalog,
            baseline,
            &EvalConfig {
                mode,
                ..config.clone()
            },
        )
    };
    Ok((run(RankMode::Related)?, run(RankMode::Associated)?))
}

fn header(out: &mut String, r: &EvalReport) {
    writeln!(
        out,
        "# averaging={} persons={} baseline_relations={}",
        r.averaging.as_str(),
        r.persons_evaluated,
        r.baseline_size
    )
    .unwrap();
}

/// Tab-separated table for one report.
pub fn format_report(r: &EvalReport) -> String {
    let mut out = String::new();
    header(&mut out, r);
    writeln!(out, "rank\t{0}_precision\t{0}_recall", r.mode.as_str()).unwrap();
    for row in &r.rows {
        writeln!(out, "{}\t{:.4}\t{:.4}", row.rank, row.precision, row.recall).unwrap();
    }
    out
}

/// Side-by-side table for related and associated reports over the same ranks.
pub fn format_comparison(related: &EvalReport, associated: &EvalReport) -> String {
    let mut out = String::new();
    header(&mut out, related);
    out.push_str("rank\trelated_precision\trelated_recall\tassociated_precision\tassociated_recall\n");
    for (a, b) in related.rows.iter().zip(&associated.rows) {
        writeln!(
            out,
            "{}\t{:.4}\t{:.4}\t{:.4}\t{:.4}",
            a.rank, a.precision, a.recall, b.precision, b.recall
        )
        .unwrap();
    }
    out
}
