use std::collections::BTreeMap;

use wheelpath::construct::Constructor;
use wheelpath::pairing::{pair_structure, random_triple};
use wheelpath::tripod::verify_tripod;
use wheelpath::{CaseId, CayleyGraph, ConstructError, ConstructOptions, Family, Permutation, TopologyError};

fn strict() -> ConstructOptions {
    ConstructOptions {
        strict: true,
        ..Default::default()
    }
}

fn perm(s: &str, n: usize) -> Permutation {
    Permutation::parse_with_degree(s, n).unwrap()
}

#[test]
fn degree_four_every_triple() {
    let g = CayleyGraph::build(4, Family::Wheel).unwrap();
    let c = Constructor::new(&g, strict()).unwrap();
    let view = g.full_view();
    let mut n = 0;
    for a in 0..24 {
        for b in a + 1..24 {
            for d in b + 1..24 {
                let built = c.build([a, b, d]).unwrap();
                assert_eq!(built.structure.counts(), [2, 2, 2]);
                assert_eq!(built.trace.case_id, CaseId::Even);
                assert!(verify_tripod(&view, &built.structure, c.target()).passed());
                assert_eq!(pair_structure(&view, &built.structure).unwrap().len(), 3);
                n += 1;
            }
        }
    }
    assert_eq!(n, 2024);
}

#[test]
fn case_is_invariant_under_left_translation() {
    let g = CayleyGraph::build(5, Family::Wheel).unwrap();
    let c = Constructor::new(&g, strict()).unwrap();
    // Left translation permutes the copies and keeps generator labels.
    let h = perm("(1 3)(2 4)", 5);
    let mut seen: BTreeMap<CaseId, usize> = BTreeMap::new();
    for seed in 0..60 {
        let omega = random_triple(g.vertex_count(), seed);
        let moved = omega.map(|v| g.left_translate(&h, v));
        let a = c.build(omega).unwrap();
        let b = c.build(moved).unwrap();
        assert_eq!(a.trace.case_id, b.trace.case_id, "{omega:?}");
        assert_eq!(a.structure.counts(), b.structure.counts());
        *seen.entry(a.trace.case_id).or_default() += 1;
    }
    assert!(seen.len() >= 2, "{seen:?}");
}

#[test]
fn building_twice_gives_the_same_structure() {
    let g = CayleyGraph::build(5, Family::Wheel).unwrap();
    let c = Constructor::new(&g, strict()).unwrap();
    for seed in 100..120 {
        let omega = random_triple(g.vertex_count(), seed);
        let a = c.build(omega).unwrap();
        let b = c.build(omega).unwrap();
        assert_eq!(a.structure, b.structure);
        assert_eq!(a.trace, b.trace);
    }
}

#[test]
fn input_order_is_recorded() {
    let g = CayleyGraph::build(5, Family::Wheel).unwrap();
    let c = Constructor::new(&g, strict()).unwrap();
    let omega = random_triple(g.vertex_count(), 3);
    let built = c.build(omega).unwrap();
    assert_eq!(built.structure.counts(), [2, 4, 4]);
    for role in 0..3 {
        assert_eq!(built.structure.omega[role], omega[built.trace.relabel[role]]);
    }
}

#[test]
fn three_copies_at_seven() {
    let g = CayleyGraph::build(7, Family::Wheel).unwrap();
    let c = Constructor::new(&g, strict()).unwrap();
    let omega = ["[7,4,3,1,2,6,5]", "[7,3,5,6,1,4,2]", "[4,2,3,6,7,5,1]"].map(|s| g.vertex(&perm(s, 7)).unwrap());
    let built = c.build(omega).unwrap();
    assert_eq!(built.trace.case_id, CaseId::OddCase3_3);
    assert_eq!(built.structure.counts(), [4, 6, 6]);
    assert_eq!(pair_structure(&g.full_view(), &built.structure).unwrap().len(), 8);
}

#[test]
fn bubble_sort_star_is_rejected() {
    let g = CayleyGraph::build(4, Family::BubbleSortStar).unwrap();
    assert!(matches!(Constructor::new(&g, strict()), Err(ConstructError::Topology(TopologyError::WrongFamily))));
}
