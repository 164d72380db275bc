#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use relmap::store::UnknownSurface;
use relmap::Snapshot;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn snapshot() -> Snapshot {
    Snapshot::from_files(
        &fixture("entities.tsv"),
        &fixture("clusters.tsv"),
        &fixture("occurrences.tsv"),
        Some(&fixture("titles.tsv")),
        UnknownSurface::Reject,
    )
    .unwrap()
}

/// Cluster membership read straight from the fixture files, resolving the
/// few surface-form lines by hand.
pub fn members() -> BTreeMap<String, BTreeSet<u32>> {
    let text = std::fs::read_to_string(fixture("occurrences.tsv")).unwrap();
    let mut out: BTreeMap<String, BTreeSet<u32>> = BTreeMap::new();
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()) {
        let f: Vec<&str> = line.split('\t').collect();
        let id = match f[3] {
            "Rafiq Hariri" | "Rafik al-Hariri" => 7,
            s => s.parse().unwrap(),
        };
        out.entry(f[0].to_string()).or_default().insert(id);
    }
    out
}

pub fn co_count(m: &BTreeMap<String, BTreeSet<u32>>, a: u32, b: u32) -> u32 {
    m.values().filter(|s| s.contains(&a) && s.contains(&b)).count() as u32
}

pub fn freq(m: &BTreeMap<String, BTreeSet<u32>>, a: u32) -> u32 {
    m.values().filter(|s| s.contains(&a)).count() as u32
}

pub fn partners(m: &BTreeMap<String, BTreeSet<u32>>, a: u32) -> BTreeSet<u32> {
    m.values().filter(|s| s.contains(&a)).flatten().copied().filter(|&x| x != a).collect()
}

pub fn weight(m: &BTreeMap<String, BTreeSet<u32>>, a: u32, b: u32) -> f64 {
    let c12 = co_count(m, a, b) as f64;
    let (c1, c2) = (freq(m, a) as f64, freq(m, b) as f64);
    let (a1, a2) = (partners(m, a).len() as f64, partners(m, b).len() as f64);
    (1.0 + c12.ln()) * (2.0 * c12 / (c1 + c2)) / (1.0 + (a1 * a2).ln())
}
