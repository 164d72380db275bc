mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{baseline_from_pairs, brute_instance, hub_fixture, random_eval_instance, seeded, Corpus};
use proptest::prelude::*;
use relmap::evaluator::{
    compare_modes, evaluate, evaluate_lists, format_comparison, format_report, Averaging, EvalConfig, DEFAULT_RANKS,
};
use relmap::model::{EntityCatalog, EntityKind};
use relmap::{EntityId, RankMode};

fn run(corpus: &Corpus, orgs: &BTreeSet<u32>, pairs: &[(u32, u32)], mode: RankMode) -> Option<Vec<(f64, f64)>> {
    let index = corpus.index();
    let catalog = corpus.catalog(orgs);
    evaluate(&index, &catalog, &baseline_from_pairs(pairs), &EvalConfig::with_mode(mode))
        .ok()
        .map(|r| r.rows.iter().map(|x| (x.precision, x.recall)).collect())
}

#[test]
fn evaluate_equals_brute_force() {
    let mut rng = seeded(3);
    let mut checked = 0;
    for _ in 0..300 {
        let (corpus, orgs, pairs) = random_eval_instance(&mut rng);
        for (mode, assoc) in [(RankMode::Related, false), (RankMode::Associated, true)] {
            let want = brute_instance(&corpus, &orgs, &pairs, assoc, &DEFAULT_RANKS);
            assert_eq!(run(&corpus, &orgs, &pairs, mode), want);
            checked += usize::from(want.is_some());
        }
    }
    assert!(checked > 200);
}

#[test]
fn worked_example_through_an_index() {
    // Person 1 shares 3 clusters with 2, 2 with 9 and 1 with 3, so the
    // related list is [2, 9, 3]; the baseline is {2, 3}.
    let corpus = Corpus {
        members: vec![
            [1, 2].into(),
            [1, 2].into(),
            [1, 2].into(),
            [1, 9].into(),
            [1, 9].into(),
            [1, 3].into(),
        ],
    };
    let config = EvalConfig {
        ranks: vec![1, 2, 3],
        persons: Some([EntityId(1)].into()),
        ..EvalConfig::default()
    };
    let report = evaluate(&corpus.index(), &corpus.catalog(&BTreeSet::new()), &baseline_from_pairs(&[(1, 2), (1, 3)]), &config).unwrap();
    let got: Vec<(f64, f64)> = report.rows.iter().map(|r| (r.precision, r.recall)).collect();
    assert_eq!(got, vec![(1.0, 0.5), (0.5, 0.5), (2.0 / 3.0, 1.0)]);
    assert_eq!(report.persons_evaluated, 1);
}

#[test]
fn empty_lists_score_zero_and_perfect_lists_score_one() {
    let partners = BTreeMap::from([
        (EntityId(1), BTreeSet::from([EntityId(2), EntityId(3)])),
        (EntityId(4), BTreeSet::from([EntityId(5)])),
    ]);
    let rows = evaluate_lists(&BTreeMap::new(), &partners, &DEFAULT_RANKS, Averaging::Macro).unwrap();
    assert!(rows.iter().all(|r| r.precision == 0.0 && r.recall == 0.0));

    let lists = BTreeMap::from([
        (EntityId(1), vec![EntityId(3), EntityId(2)]),
        (EntityId(4), vec![EntityId(5)]),
    ]);
    let rows = evaluate_lists(&lists, &partners, &[2], Averaging::Macro).unwrap();
    assert_eq!((rows[0].precision, rows[0].recall), (1.0, 1.0));
}

#[test]
fn persons_missing_from_index_count_as_misses() {
    let corpus = Corpus { members: vec![[1, 2].into()] };
    let mut catalog = corpus.catalog(&BTreeSet::new());
    catalog.insert_with_id(EntityId(7), "Person 7", EntityKind::Person, []).unwrap();
    catalog.insert_with_id(EntityId(8), "Person 8", EntityKind::Person, []).unwrap();
    let config = EvalConfig { ranks: vec![1], ..EvalConfig::default() };
    let r = evaluate(&corpus.index(), &catalog, &baseline_from_pairs(&[(1, 2), (7, 8)]), &config).unwrap();
    assert_eq!(r.persons_evaluated, 4);
    assert_eq!((r.rows[0].precision, r.rows[0].recall), (0.5, 0.5));
}

#[test]
fn organizations_leave_lists_and_baseline() {
    let corpus = Corpus { members: vec![[1, 2, 3].into(), [1, 2].into()] };
    let orgs: BTreeSet<u32> = [2].into();
    let catalog = corpus.catalog(&orgs);
    let config = EvalConfig { ranks: vec![1], ..EvalConfig::default() };
    let r = evaluate(&corpus.index(), &catalog, &baseline_from_pairs(&[(1, 3), (1, 2)]), &config).unwrap();
    assert_eq!(r.baseline_size, 1);
    assert_eq!((r.rows[0].precision, r.rows[0].recall), (1.0, 1.0));
    let only_org = evaluate(&corpus.index(), &catalog, &baseline_from_pairs(&[(1, 2)]), &config);
    assert!(only_org.is_err());
}

#[test]
fn hub_baseline_favors_associated_mode() {
    let (index, subject, _hub, specific) = hub_fixture();
    let mut catalog = EntityCatalog::new();
    for &e in index.entity_ids() {
        catalog.insert_with_id(e, &format!("Person {e}"), EntityKind::Person, []).unwrap();
    }
    let baseline = baseline_from_pairs(&[(subject.0, specific.0)]);
    let config = EvalConfig { ranks: vec![1, 2, 3], persons: Some([subject].into()), ..EvalConfig::default() };
    let (rel, asc) = compare_modes(&index, &catalog, &baseline, &config).unwrap();
    assert_eq!(rel.persons_evaluated, asc.persons_evaluated);
    assert!(asc.rows[0].precision > rel.rows[0].precision);
    let table = format_comparison(&rel, &asc);
    assert!(table.starts_with("# averaging=macro persons=1 baseline_relations=1\nrank\trelated_precision"));
    assert_eq!(table.lines().count(), 5);
    assert!(format_report(&asc).contains("associated_precision"));
}

#[test]
fn micro_averaging_pools_counts() {
    let partners = BTreeMap::from([
        (EntityId(1), BTreeSet::from([EntityId(2)])),
        (EntityId(3), BTreeSet::from([EntityId(4), EntityId(5), EntityId(6)])),
    ]);
    let lists = BTreeMap::from([
        (EntityId(1), vec![EntityId(2)]),
        (EntityId(3), vec![EntityId(9), EntityId(4), EntityId(8)]),
    ]);
    let micro = evaluate_lists(&lists, &partners, &[3], Averaging::Micro).unwrap();
    assert_eq!((micro[0].precision, micro[0].recall), (2.0 / 4.0, 2.0 / 4.0));
    let mac = evaluate_lists(&lists, &partners, &[3], Averaging::Macro).unwrap();
    assert_eq!(mac[0].precision, (1.0 + 1.0 / 3.0) / 2.0);
}

proptest! {
    #[test]
    fn recall_grows_with_rank(seed in any::<u64>(), assoc in any::<bool>()) {
        let (corpus, orgs, pairs) = random_eval_instance(&mut seeded(seed));
        let mode = if assoc { RankMode::Associated } else { RankMode::Related };
        let ranks: Vec<usize> = (1..=20).collect();
        let config = EvalConfig { ranks, mode, ..EvalConfig::default() };
        let catalog = corpus.catalog(&orgs);
        if let Ok(r) = evaluate(&corpus.index(), &catalog, &baseline_from_pairs(&pairs), &config) {
            for w in r.rows.windows(2) {
                prop_assert!(w[1].recall >= w[0].recall);
            }
            for row in &r.rows {
                prop_assert!((0.0..=1.0).contains(&row.precision) && (0.0..=1.0).contains(&row.recall));
            }
        }
    }
}
