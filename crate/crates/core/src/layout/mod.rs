//! Static relation maps: the top-N association neighborhood of a subject,
//! laid out by stress minimization and exported as a DOT document or a
//! coordinate table.

mod dot;
mod kamada_kawai;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linker;
use crate::model::{EntityCatalog, EntityId};
use crate::store::{intersection_len, OccurrenceIndex};

pub use dot::{export_coords, export_dot};
pub use kamada_kawai::{kamada_kawai_layout, stress_energy, KamadaKawai, LayoutParams, LayoutReport, StepOutcome};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutNode {
    pub id: EntityId,
    pub label: String,
    pub position: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutEdge {
    pub a: EntityId,
    pub b: EntityId,
    pub co_count: u32,
    pub weight: f64,
}

/// Undirected graph with nodes in ascending id order and edges with
/// `a < b` in ascending `(a, b)` order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutGraph {
    pub nodes: Vec<LayoutNode>,
    pub edges: Vec<LayoutEdge>,
}

impl LayoutGraph {
    /// Builds a graph from unordered parts. Edges naming unknown nodes,
    /// self-loops and duplicate node ids are rejected.
    pub fn new(mut nodes: Vec<LayoutNode>, edges: Vec<LayoutEdge>) -> Result<Self> {
        nodes.sort_by_key(|n| n.id);
        if nodes.windows(2).any(|w| w[0].id == w[1].id) {
            return Err(Error::Config("duplicate node in layout graph".into()));
        }
        let mut norm: Vec<LayoutEdge> = Vec::with_capacity(edges.len());
        for mut e in edges {
            if e.a == e.b {
                return Err(Error::Config(format!("self-loop on {}", e.a)));
            }
            if e.a > e.b {
                std::mem::swap(&mut e.a, &mut e.b);
            }
            for id in [e.a, e.b] {
                if nodes.binary_search_by_key(&id, |n| n.id).is_err() {
                    return Err(Error::Config(format!("edge references missing node {id}")));
                }
            }
            norm.push(e);
        }
        norm.sort_by_key(|e| (e.a, e.b));
        norm.dedup_by_key(|e| (e.a, e.b));
        Ok(LayoutGraph { nodes, edges: norm })
    }

    pub fn node_index(&self, id: EntityId) -> Option<usize> {
        self.nodes.binary_search_by_key(&id, |n| n.id).ok()
    }

    /// All-pairs hop distances; fails if the graph is disconnected.
    pub fn hop_distances(&self) -> Result<Vec<Vec<u32>>> {
        let n = self.nodes.len();
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            let (a, b) = (self.node_index(e.a).unwrap(), self.node_index(e.b).unwrap());
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut dist = vec![vec![u32::MAX; n]; n];
        for (s, row) in dist.iter_mut().enumerate() {
            row[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if row[v] == u32::MAX {
                        row[v] = row[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            let reached = row.iter().filter(|&&d| d != u32::MAX).count();
            if reached != n {
                return Err(Error::Disconnected(reached, n));
            }
        }
        Ok(dist)
    }

    /// Desired pair distances `l_ij = L · d_ij`.
    pub fn desired_lengths(hops: &[Vec<u32>], unit: f64) -> Vec<Vec<f64>> {
        hops.iter()
            .map(|row| row.iter().map(|&d| unit * f64::from(d)).collect())
            .collect()
    }

    /// Spring strengths `k_ij = K / d_ij²` (zero on the diagonal).
    pub fn spring_strengths(hops: &[Vec<u32>], strength: f64) -> Vec<Vec<f64>> {
        hops.iter()
            .map(|row| {
                row.iter()
                    .map(|&d| if d == 0 { 0.0 } else { strength / f64::from(d * d) })
                    .collect()
            })
            .collect()
    }

    pub fn has_positions(&self) -> bool {
        !self.nodes.is_empty() && self.nodes.iter().all(|n| n.position.is_some())
    }
}

/// The subject plus its top `n` associated partners, with an edge for every
/// co-occurring pair among them weighted by association weight.
pub fn neighborhood_graph(
    index: &OccurrenceIndex,
    catalog: &EntityCatalog,
    subject: EntityId,
    n: usize,
) -> Result<LayoutGraph> {
    let top = linker::associated(index, subject, n)?;
    let mut ids: Vec<EntityId> = std::iter::once(subject)
        .chain(top.entries.iter().map(|e| e.entity))
        .collect();
    ids.sort();

    let label = |id: EntityId| {
        catalog
            .get(id)
            .map_or_else(|| id.to_string(), |e| e.canonical_name.clone())
    };
    let nodes = ids
        .iter()
        .map(|&id| LayoutNode {
            id,
            label: label(id),
            position: None,
        })
        .collect();

    let postings: Vec<&[u32]> = ids
        .iter()
        .map(|&id| index.postings(id))
        .collect::<Result<_>>()?;
    let mut edges = Vec::new();
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            let c = intersection_len(postings[i], postings[j]) as u32;
            if c > 0 {
                edges.push(LayoutEdge {
                    a: ids[i],
                    b: ids[j],
                    co_count: c,
                    weight: linker::association_weight(index, ids[i], ids[j])?,
                });
            }
        }
    }
    Ok(LayoutGraph { nodes, edges })
}
