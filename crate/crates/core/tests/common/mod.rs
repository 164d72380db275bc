//! Shared fixtures and from-scratch reference implementations.
#![allow(dead_code)]

pub mod dump;
pub mod gold;

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use relmap::model::{Cluster, ClusterId, EntityCatalog, EntityId, EntityKind, Lang, TitleTable};
use relmap::store::{ingest, OccurrenceIndex, OccurrenceRecord};
use relmap::Snapshot;

pub fn en() -> Lang {
    Lang::new("en").unwrap()
}

pub fn day(d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(2005, 11, d).unwrap()
}

/// A corpus as raw membership sets: `members[k]` lists the entities of
/// cluster k.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub members: Vec<BTreeSet<u32>>,
}

impl Corpus {
    pub fn random(rng: &mut StdRng, max_entities: u32, max_clusters: usize) -> Corpus {
        let n_entities = rng.random_range(2..=max_entities);
        let n_clusters = rng.random_range(1..=max_clusters);
        let members = (0..n_clusters)
            .map(|_| {
                let size = rng.random_range(1..=n_entities.min(6));
                (0..size).map(|_| rng.random_range(1..=n_entities)).collect()
            })
            .collect();
        Corpus { members }
    }

    pub fn cluster_id(k: usize) -> ClusterId {
        ClusterId(format!("c{k:04}"))
    }

    pub fn clusters(&self) -> Vec<Cluster> {
        (0..self.members.len())
            .map(|k| Cluster {
                id: Self::cluster_id(k),
                language: en(),
                date: day(1 + (k % 3) as u32),
                medoid_url: None,
                article_count: 1 + (k % 4) as u32,
            })
            .collect()
    }

    pub fn records(&self) -> Vec<OccurrenceRecord> {
        self.members
            .iter()
            .enumerate()
            .flat_map(|(k, m)| {
                m.iter().map(move |&e| OccurrenceRecord {
                    entity: EntityId(e),
                    cluster: Self::cluster_id(k),
                    language: en(),
                    date: day(1 + (k % 3) as u32),
                })
            })
            .collect()
    }

    pub fn index(&self) -> OccurrenceIndex {
        ingest(self.clusters(), self.records()).unwrap()
    }

    pub fn entities(&self) -> BTreeSet<u32> {
        self.members.iter().flatten().copied().collect()
    }

    /// Catalog naming every entity `Person <id>`; ids listed in `orgs` are
    /// organizations.
    pub fn catalog(&self, orgs: &BTreeSet<u32>) -> EntityCatalog {
        let mut c = EntityCatalog::new();
        for e in self.entities() {
            let kind = if orgs.contains(&e) { EntityKind::Organization } else { EntityKind::Person };
            c.insert_with_id(EntityId(e), &format!("Person {e}"), kind, []).unwrap();
        }
        c
    }

    pub fn snapshot(&self) -> Snapshot {
        let records = self.records().into_iter().enumerate().map(|(i, r)| (i + 1, r));
        Snapshot::build(self.catalog(&BTreeSet::new()), self.clusters(), records, TitleTable::new(), "corpus").unwrap()
    }
}

/// Reference counts computed by scanning every cluster for every query.
pub struct Brute<'a> {
    pub corpus: &'a Corpus,
}

impl Brute<'_> {
    pub fn c(&self, e: u32) -> u32 {
        self.corpus.members.iter().filter(|m| m.contains(&e)).count() as u32
    }

    pub fn c12(&self, a: u32, b: u32) -> u32 {
        self.corpus
            .members
            .iter()
            .filter(|m| m.contains(&a) && m.contains(&b))
            .count() as u32
    }

    pub fn partners(&self, e: u32) -> BTreeSet<u32> {
        self.corpus
            .members
            .iter()
            .filter(|m| m.contains(&e))
            .flatten()
            .copied()
            .filter(|&x| x != e)
            .collect()
    }

    pub fn weight(&self, a: u32, b: u32) -> f64 {
        let c12 = f64::from(self.c12(a, b));
        let (c1, c2) = (f64::from(self.c(a)), f64::from(self.c(b)));
        let (a1, a2) = (self.partners(a).len() as f64, self.partners(b).len() as f64);
        (1.0 + c12.ln()) * (2.0 * c12 / (c1 + c2)) / (1.0 + (a1 * a2).ln())
    }

    /// (partner, co-count) by co-count descending, then id.
    pub fn related(&self, e: u32) -> Vec<(u32, u32)> {
        let mut v: Vec<(u32, u32)> = self.partners(e).into_iter().map(|p| (p, self.c12(e, p))).collect();
        v.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
        v
    }

    /// (partner, weight) by weight descending, then id.
    pub fn associated(&self, e: u32) -> Vec<(u32, f64)> {
        let mut v: Vec<(u32, f64)> = self.partners(e).into_iter().map(|p| (p, self.weight(e, p))).collect();
        v.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap().then(x.0.cmp(&y.0)));
        v
    }
}

/// Relative error with an absolute floor for values near zero.
pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-300)
}

/// Builds a two-entity index with exactly the given counts for entities 1
/// and 2. Extra partners of each side are dealt round-robin over the
/// clusters it has without the other.
pub fn realize_counts(c12: u32, c1: u32, c2: u32, a1: u32, a2: u32) -> OccurrenceIndex {
    let mut members: Vec<BTreeSet<u32>> = Vec::new();
    for _ in 0..c12 {
        members.push([1, 2].into());
    }
    let mut next = 3u32;
    for (e, c, a) in [(1u32, c1, a1), (2, c2, a2)] {
        let first = members.len();
        for _ in 0..c - c12 {
            members.push([e].into());
        }
        for k in 0..(a - 1) as usize {
            let solo = c - c12;
            members[first + k % solo as usize].insert(next);
            next += 1;
        }
    }
    Corpus { members }.index()
}

/// One row of the reference formula grid.
#[derive(Debug, Clone, Copy)]
pub struct GridPoint {
    pub counts: [u32; 5],
    pub co: f64,
    pub icf: f64,
    pub iass: f64,
    pub weight: f64,
}

pub fn equation_grid() -> Vec<GridPoint> {
    include_str!("../fixtures/equation_grid.tsv")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            let n = |i: usize| f[i].parse::<u32>().unwrap();
            let x = |i: usize| f[i].parse::<f64>().unwrap();
            GridPoint {
                counts: [n(0), n(1), n(2), n(3), n(4)],
                co: x(5),
                icf: x(6),
                iass: x(7),
                weight: x(8),
            }
        })
        .collect()
}

pub fn seeded(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Index of a star: a hub sharing many clusters with everyone, and a
/// specific partner that shares few clusters but only with the subject.
/// Returns (index, subject, hub, specific).
pub fn hub_fixture() -> (OccurrenceIndex, EntityId, EntityId, EntityId) {
    let subject = 1;
    let hub = 2;
    let specific = 3;
    let mut members: Vec<BTreeSet<u32>> = Vec::new();
    // The hub appears in 100 clusters, 5 of them with the subject, the rest
    // with a rotating crowd of 200 other people.
    for k in 0..100u32 {
        let mut m: BTreeSet<u32> = [hub].into();
        if k < 5 {
            m.insert(subject);
        }
        m.insert(100 + (k * 2) % 200);
        m.insert(101 + (k * 2) % 200);
        members.push(m);
    }
    // The specific associate shares 3 clusters with the subject and is
    // otherwise quiet.
    for _ in 0..3 {
        members.push([subject, specific].into());
    }
    members.push([specific].into());
    // The subject has some other coverage of its own.
    for k in 0..4u32 {
        members.push([subject, 10 + k].into());
    }
    (Corpus { members }.index(), EntityId(subject), EntityId(hub), EntityId(specific))
}

/// The ids of a ranked list, in order.
pub fn ids_of(v: &[(u32, impl Copy)]) -> Vec<u32> {
    v.iter().map(|x| x.0).collect()
}

pub fn partner_map(pairs: &[(u32, u32)]) -> BTreeMap<EntityId, BTreeSet<EntityId>> {
    let mut m: BTreeMap<EntityId, BTreeSet<EntityId>> = BTreeMap::new();
    for &(a, b) in pairs {
        m.entry(EntityId(a)).or_default().insert(EntityId(b));
        m.entry(EntityId(b)).or_default().insert(EntityId(a));
    }
    m
}

pub fn layout_graph(n: u32, edges: &[(u32, u32)]) -> relmap::layout::LayoutGraph {
    use relmap::layout::{LayoutEdge, LayoutGraph, LayoutNode};
    LayoutGraph::new(
        (1..=n)
            .map(|id| LayoutNode { id: EntityId(id), label: format!("n{id}"), position: None })
            .collect(),
        edges
            .iter()
            .map(|&(a, b)| LayoutEdge { a: EntityId(a), b: EntityId(b), co_count: 1, weight: 1.0 })
            .collect(),
    )
    .unwrap()
}

/// A random connected graph: a random spanning tree plus extra edges.
pub fn random_connected(rng: &mut StdRng, max_nodes: u32) -> (u32, Vec<(u32, u32)>) {
    let n = rng.random_range(2..=max_nodes);
    let mut edges = BTreeSet::new();
    for v in 2..=n {
        let u = rng.random_range(1..v);
        edges.insert((u, v));
    }
    for _ in 0..rng.random_range(0..=n) {
        let a = rng.random_range(1..=n);
        let b = rng.random_range(1..=n);
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    (n, edges.into_iter().collect())
}

/// Stress energy written out from hop distances, independent of the solver.
pub fn reference_energy(pos: &[[f64; 2]], hops: &[Vec<u32>], unit: f64) -> f64 {
    let mut e = 0.0;
    for i in 0..pos.len() {
        for j in 0..i {
            let d = f64::from(hops[i][j]);
            let dist = ((pos[i][0] - pos[j][0]).powi(2) + (pos[i][1] - pos[j][1]).powi(2)).sqrt();
            e += (dist - unit * d).powi(2) / (d * d) / 2.0;
        }
    }
    e
}

/// Plain gradient descent with backtracking over all coordinates at once.
pub fn descend(pos: &mut [[f64; 2]], hops: &[Vec<u32>], unit: f64, iters: usize) -> f64 {
    let n = pos.len();
    let mut step = 0.1;
    for _ in 0..iters {
        let mut g = vec![[0.0f64; 2]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let d = f64::from(hops[i][j]);
                let dx = pos[i][0] - pos[j][0];
                let dy = pos[i][1] - pos[j][1];
                let dist = (dx * dx + dy * dy).sqrt().max(1e-12);
                let c = (dist - unit * d) / (d * d) / dist;
                g[i][0] += c * dx;
                g[i][1] += c * dy;
            }
        }
        let e0 = reference_energy(pos, hops, unit);
        loop {
            let trial: Vec<[f64; 2]> = (0..n).map(|i| [pos[i][0] - step * g[i][0], pos[i][1] - step * g[i][1]]).collect();
            if reference_energy(&trial, hops, unit) <= e0 || step < 1e-14 {
                pos.copy_from_slice(&trial);
                step *= 1.5;
                break;
            }
            step /= 2.0;
        }
    }
    reference_energy(pos, hops, unit)
}

/// Precision and recall per rank computed straight from pair sets: the
/// baseline as (person, partner) pairs and each person's ranked partners.
pub fn brute_eval(
    persons: &[u32],
    truth: &BTreeSet<(u32, u32)>,
    lists: &BTreeMap<u32, Vec<u32>>,
    ranks: &[usize],
) -> Vec<(f64, f64)> {
    ranks
        .iter()
        .map(|&n| {
            let (mut p_sum, mut r_sum) = (0.0, 0.0);
            for &p in persons {
                let wanted = truth.iter().filter(|(a, _)| *a == p).count();
                let top: Vec<u32> = lists.get(&p).map_or(Vec::new(), |l| l.iter().copied().take(n).collect());
                let hits = top.iter().filter(|&&x| truth.contains(&(p, x))).count();
                if !top.is_empty() {
                    p_sum += hits as f64 / top.len() as f64;
                }
                r_sum += hits as f64 / wanted as f64;
            }
            (p_sum / persons.len() as f64, r_sum / persons.len() as f64)
        })
        .collect()
}

/// A random evaluation instance over at most 15 entities, some of them
/// organizations: (corpus, organizations, baseline pairs).
pub fn random_eval_instance(rng: &mut StdRng) -> (Corpus, BTreeSet<u32>, Vec<(u32, u32)>) {
    let corpus = Corpus::random(rng, 15, 40);
    let ids: Vec<u32> = corpus.entities().into_iter().collect();
    let orgs: BTreeSet<u32> = ids.iter().copied().filter(|_| rng.random_range(0..6) == 0).collect();
    let mut pairs = BTreeSet::new();
    for _ in 0..rng.random_range(1..=20) {
        let a = rng.random_range(1..=16);
        let b = rng.random_range(1..=16);
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    (corpus, orgs, pairs.into_iter().collect())
}

/// Reference evaluation of an instance in one mode, via the brute linker.
pub fn brute_instance(
    corpus: &Corpus,
    orgs: &BTreeSet<u32>,
    pairs: &[(u32, u32)],
    associated: bool,
    ranks: &[usize],
) -> Option<Vec<(f64, f64)>> {
    let known = corpus.entities();
    let person = |e: u32| known.contains(&e) && !orgs.contains(&e);
    let mut truth = BTreeSet::new();
    for &(a, b) in pairs {
        if person(a) && person(b) {
            truth.insert((a, b));
            truth.insert((b, a));
        }
    }
    let persons: Vec<u32> = truth.iter().map(|x| x.0).collect::<BTreeSet<_>>().into_iter().collect();
    if persons.is_empty() {
        return None;
    }
    let brute = Brute { corpus };
    let lists = persons
        .iter()
        .map(|&p| {
            let l: Vec<u32> = if associated {
                brute.associated(p).into_iter().map(|x| x.0).collect()
            } else {
                brute.related(p).into_iter().map(|x| x.0).collect()
            };
            (p, l.into_iter().filter(|&x| person(x)).collect())
        })
        .collect();
    Some(brute_eval(&persons, &truth, &lists, ranks))
}

pub fn baseline_from_pairs(pairs: &[(u32, u32)]) -> Vec<relmap::baseline::BaselineRelation> {
    pairs
        .iter()
        .map(|&(a, b)| relmap::baseline::BaselineRelation {
            a: EntityId(a),
            b: EntityId(b),
            languages: [en()].into(),
        })
        .collect()
}
