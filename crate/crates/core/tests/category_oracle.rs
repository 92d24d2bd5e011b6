use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use seedforge_core::fold::fold;
use seedforge_core::{CategoryIndex, ExpansionRequest};
use seedforge_testkit::oracle;

fn pairs(raw: &[(&str, &str)]) -> Vec<(String, String)> {
    raw.iter()
        .map(|(e, c)| (e.to_string(), c.to_string()))
        .collect()
}

fn check(
    pairs: &[(String, String)],
    positives: &[String],
    exclusions: &[String],
    k: usize,
    min_support: f64,
) {
    let index = CategoryIndex::from_pairs(pairs.iter().map(|(e, c)| (e, c))).unwrap();
    let got: Vec<_> = index
        .suggest_categories(positives, min_support)
        .unwrap()
        .into_iter()
        .map(|s| (s.category, s.support, s.matched_seeds))
        .collect();
    assert_eq!(
        got,
        oracle::brute_force_suggest(pairs, positives, min_support)
    );

    let request = ExpansionRequest::new(positives.to_vec(), exclusions.to_vec(), k).unwrap();
    let got: Vec<_> = index
        .expand_by_category(&request, min_support, "cat:kb")
        .unwrap()
        .into_iter()
        .map(|c| (c.surface, c.score, c.origin))
        .collect();
    assert_eq!(
        got,
        oracle::brute_force_category_expand(pairs, positives, exclusions, k, min_support)
    );
}

#[test]
fn ten_entity_kb_with_overlapping_categories() {
    let kb = pairs(&[
        ("oak", "tree"),
        ("pine", "tree"),
        ("maple", "tree"),
        ("birch", "tree"),
        ("cedar", "tree"),
        ("maple", "syrup_source"),
        ("birch", "syrup_source"),
        ("agave", "syrup_source"),
        ("sorghum", "syrup_source"),
        ("cane", "syrup_source"),
    ]);
    let seeds: Vec<String> = ["maple", "birch", "oak"].map(String::from).to_vec();
    for min_support in [0.5, 0.6, 0.7, 1.0] {
        for k in [1, 3, 10] {
            check(&kb, &seeds, &[], k, min_support);
            check(&kb, &seeds, &["Pine".to_string()], k, min_support);
        }
    }
    let index = CategoryIndex::from_pairs(kb.iter().map(|(e, c)| (e, c))).unwrap();
    let request = ExpansionRequest::new(seeds, Vec::<String>::new(), 10).unwrap();
    let out = index.expand_by_category(&request, 0.5, "cat:kb").unwrap();
    let got: Vec<_> = out
        .iter()
        .map(|c| (c.surface.as_str(), c.origin.as_str()))
        .collect();
    // tree: 3/3, syrup_source: 2/3
    assert_eq!(
        got,
        [
            ("cedar", "tree"),
            ("pine", "tree"),
            ("agave", "syrup_source"),
            ("cane", "syrup_source"),
            ("sorghum", "syrup_source"),
        ]
    );
    assert!(out.windows(2).all(|w| w[0].score >= w[1].score));
}

#[test]
fn member_matching_a_seed_is_excluded() {
    let kb = pairs(&[("Rust", "lang"), ("go", "lang"), ("zig", "lang")]);
    let index = CategoryIndex::from_pairs(kb.iter().map(|(e, c)| (e, c))).unwrap();
    let request = ExpansionRequest::new(["rust", "GO"], Vec::<String>::new(), 5).unwrap();
    let out = index.expand_by_category(&request, 0.5, "m").unwrap();
    assert_eq!(out.len(), 1);
    assert_eq!(out[0].surface, "zig");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn random_kbs_match_enumeration(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let entities: Vec<String> = (0..rng.gen_range(3..25)).map(|i| {
            let name = format!("e{i}");
            if rng.gen_bool(0.1) { name.to_uppercase() } else { name }
        }).collect();
        let categories: Vec<String> = (0..rng.gen_range(1..6)).map(|i| format!("c{i}")).collect();
        let kb: Vec<(String, String)> = (0..rng.gen_range(1..60))
            .map(|_| (entities.choose(&mut rng).unwrap().clone(), categories.choose(&mut rng).unwrap().clone()))
            .collect();
        let mut pool = entities.clone();
        pool.push("outside".into());
        let positives: Vec<String> = (0..rng.gen_range(1..6)).map(|_| {
            let s = pool.choose(&mut rng).unwrap();
            if rng.gen_bool(0.3) { s.to_lowercase() } else { s.clone() }
        }).collect();
        let exclusions: Vec<String> = (0..rng.gen_range(0..3)).map(|_| pool.choose(&mut rng).unwrap().clone()).collect();
        let min_support = [0.1, 0.25, 0.5, 0.6, 1.0][rng.gen_range(0..5)];
        let k = rng.gen_range(1..15);
        check(&kb, &positives, &exclusions, k, min_support);

        let index = CategoryIndex::from_pairs(kb.iter().map(|(e, c)| (e, c))).unwrap();
        let request = ExpansionRequest::new(positives.clone(), exclusions.clone(), k).unwrap();
        let out = index.expand_by_category(&request, min_support, "m").unwrap();
        let banned: Vec<String> = positives.iter().chain(&exclusions).map(|s| fold(s)).collect();
        for c in &out {
            prop_assert!(!banned.contains(&fold(&c.surface)));
            prop_assert!(c.score >= min_support && c.score > 0.0 && c.score <= 1.0);
            prop_assert!(index.members_of(&c.origin).unwrap().contains(&c.surface));
        }
    }
}
