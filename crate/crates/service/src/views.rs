//! Response payloads. Field names are part of the API and stay stable.

use chrono::NaiveDate;
use serde::Serialize;

use relmap::layout::LayoutGraph;
use relmap::linker::{RankMode, RankedList, TitleSummary};
use relmap::model::{Entity, EntityCatalog, EntityId, EntityKind, Lang};
use relmap::store::OccurrenceIndex;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntitySummary {
    pub id: EntityId,
    pub canonical_name: String,
    pub kind: &'static str,
    pub variants: Vec<String>,
}

impl EntitySummary {
    pub fn of(e: &Entity) -> Self {
        EntitySummary {
            id: e.id,
            canonical_name: e.canonical_name.clone(),
            kind: e.kind.as_str(),
            variants: e.variants.iter().cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchHit {
    pub id: EntityId,
    pub canonical_name: String,
    pub kind: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterView {
    pub id: String,
    pub date: NaiveDate,
    pub language: Lang,
    pub medoid_url: Option<String>,
    pub article_count: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partner {
    pub entity: EntityId,
    pub name: String,
    pub co_count: u32,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartnerList {
    pub subject: EntityId,
    pub mode: RankMode,
    pub entries: Vec<Partner>,
}

pub fn name_of(catalog: &EntityCatalog, id: EntityId) -> String {
    catalog.get(id).map_or_else(|| id.to_string(), |e| e.canonical_name.clone())
}

impl PartnerList {
    pub fn of(list: RankedList, catalog: &EntityCatalog) -> Self {
        PartnerList {
            subject: list.subject,
            mode: list.mode,
            entries: list
                .entries
                .into_iter()
                .map(|e| Partner {
                    entity: e.entity,
                    name: name_of(catalog, e.entity),
                    co_count: e.co_count,
                    score: e.score,
                })
                .collect(),
        }
    }
}

/// Everything shown on one person's page.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PersonPageView {
    pub entity: EntitySummary,
    pub latest_clusters: Vec<ClusterView>,
    pub titles: Vec<TitleSummary>,
    pub related: PartnerList,
    pub associated: PartnerList,
}

/// The `limit` most recent clusters mentioning `id`, newest first.
pub fn latest_clusters(index: &OccurrenceIndex, id: EntityId, limit: usize) -> Vec<ClusterView> {
    let mut clusters: Vec<&relmap::Cluster> = index
        .postings(id)
        .map(|p| p.iter().map(|&s| index.cluster(s)).collect())
        .unwrap_or_default();
    clusters.sort_by(|a, b| b.date.cmp(&a.date).then(a.id.cmp(&b.id)));
    clusters
        .into_iter()
        .take(limit)
        .map(|c| ClusterView {
            id: c.id.0.clone(),
            date: c.date,
            language: c.language,
            medoid_url: c.medoid_url.clone(),
            article_count: c.article_count,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphNode {
    pub id: EntityId,
    pub label: String,
    pub kind: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphEdge {
    pub a: EntityId,
    pub b: EntityId,
    pub co_count: u32,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayoutInfo {
    pub energy: f64,
    pub max_gradient: f64,
    pub moves: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphView {
    pub subject: EntityId,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layout: Option<LayoutInfo>,
}

impl GraphView {
    pub fn of(subject: EntityId, g: &LayoutGraph, catalog: &EntityCatalog, layout: Option<LayoutInfo>) -> Self {
        GraphView {
            subject,
            nodes: g
                .nodes
                .iter()
                .map(|n| GraphNode {
                    id: n.id,
                    label: n.label.clone(),
                    kind: catalog.kind(n.id).map(EntityKind::as_str),
                    x: n.position.map(|p| p[0]),
                    y: n.position.map(|p| p[1]),
                })
                .collect(),
            edges: g
                .edges
                .iter()
                .map(|e| GraphEdge {
                    a: e.a,
                    b: e.b,
                    co_count: e.co_count,
                    weight: e.weight,
                })
                .collect(),
            layout,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VipEntry {
    pub entity: EntityId,
    pub name: String,
    pub clusters: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VipView {
    pub date: Option<NaiveDate>,
    pub entries: Vec<VipEntry>,
}
