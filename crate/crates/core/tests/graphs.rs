mod common;

use common::gauge::{apply_gauge, gauge_equivalent};
use common::graph_oracle::naive_graded_group;
use common::snf::smith_diagonal;
use common::*;
use equisurg::graphspace::{
    canonical_form, edge_to_pi1, enumerate_graphs, graded_group, out_equivalent, pi1_to_edge, relation_generators,
    DecoratedGraph, GraphLimits, RelationKind,
};
use equisurg::{Group, GroupElement, Int};
use rand::Rng;

type G = DecoratedGraph<Int>;

fn compare_with_oracle(group: &Group) {
    let fast = graded_group(2, group, &GraphLimits::default()).unwrap();
    let naive = naive_graded_group(2, group);
    assert_eq!(fast.rank, naive.rank, "rank over {group}");
    let factors: Vec<i128> = fast.invariant_factors.iter().map(|x| x.to_string().parse().unwrap()).collect();
    assert_eq!(factors, naive.invariant_factors, "torsion over {group}");
    assert_eq!(fast.two_torsion_rank, naive.two_torsion_rank);
}

#[test]
fn oracle_snf_examples() {
    assert_eq!(smith_diagonal(vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
    assert_eq!(smith_diagonal(vec![vec![2, 4], vec![4, 8]]), vec![2]);
    assert!(smith_diagonal(vec![vec![0, 0], vec![0, 0]]).is_empty());
}

#[test]
fn degree_two_matches_naive_oracle_for_small_groups() {
    for group in [Group::Trivial, Group::Cyclic(2), Group::Cyclic(3), Group::Cyclic(4), Group::klein4()] {
        compare_with_oracle(&group);
    }
}

#[test]
fn degree_two_matches_naive_oracle_for_s3() {
    compare_with_oracle(&Group::symmetric3());
}

#[test]
fn degree_two_shapes_are_theta_and_dumbbell() {
    let g = Group::Trivial;
    let e = GroupElement::Trivial;
    let graphs = enumerate_graphs::<Int>(2, &g, &GraphLimits::default()).unwrap();
    let theta = G::from_pairs(&g, 2, &[(0, 3, e.clone()), (1, 4, e.clone()), (2, 5, e.clone())]).unwrap();
    let dumbbell = G::from_pairs(&g, 2, &[(0, 3, e.clone()), (1, 2, e.clone()), (4, 5, e)]).unwrap();
    let canon: Vec<G> = [theta, dumbbell].iter().map(|x| canonical_form(x).unwrap().0).collect();
    assert_eq!(graphs.len(), 2);
    assert!(canon.iter().all(|c| graphs.contains(c)));
}

#[test]
fn dumbbell_has_an_odd_automorphism() {
    let g = Group::Trivial;
    let e = GroupElement::Trivial;
    // the loop at vertex 0 uses slots 1 and 2, so flipping vertex 0 only swaps its two ends
    let dumbbell = G::from_pairs(&g, 2, &[(0, 3, e.clone()), (1, 2, e.clone()), (4, 5, e)]).unwrap();
    let flipped = dumbbell.flip_vertex(0);
    assert_eq!(canonical_form(&flipped).unwrap().0, canonical_form(&dumbbell).unwrap().0);
    assert_eq!(canonical_form(&dumbbell).unwrap().1, 0);
}

#[test]
fn canonical_form_is_idempotent_and_invariant() {
    let mut rng = rng(301);
    for group in [Group::Cyclic(3), Group::symmetric3()] {
        for _ in 0..30 {
            let n = if rng.gen_bool(0.5) { 2 } else { 4 };
            let g = decorated_graph(&mut rng, &group, n);
            let (c, s) = canonical_form(&g).unwrap();
            let (cc, ss) = canonical_form(&c).unwrap();
            assert_eq!(cc, c);
            assert!(ss == 1 || (s == 0 && ss == 0));
            let mut perm: Vec<usize> = (0..n).collect();
            perm.rotate_left(rng.gen_range(0..n));
            let v = rng.gen_range(0..n);
            let moved = g.relabel_vertices(&perm).rotate_vertex(v).reverse_edge(rng.gen_range(0..3 * n / 2));
            assert_eq!(canonical_form(&moved).unwrap(), (c.clone(), s));
            let (cf, sf) = canonical_form(&g.flip_vertex(v)).unwrap();
            assert_eq!((cf, sf), (c, -s));
        }
    }
}

#[test]
fn relation_examples() {
    let z2 = Group::Cyclic(2);
    let rels = relation_generators::<Int>(2, &z2, &GraphLimits::default()).unwrap();
    assert!(rels.iter().any(|r| r.kind == RelationKind::Ihx && !r.sum.is_zero()));
    assert!(rels.iter().any(|r| r.kind == RelationKind::As));
    // R3 with the identity is the zero relation
    let theta = G::from_pairs(&z2, 2, &[(0, 3, GroupElement::Cyclic(1)), (1, 4, GroupElement::Cyclic(0)), (2, 5, GroupElement::Cyclic(0))]).unwrap();
    assert_eq!(theta.transport(1, &GroupElement::Cyclic(0)), theta);
}

#[test]
fn degree_zero_and_four() {
    let r0 = graded_group(0, &Group::Cyclic(2), &GraphLimits::default()).unwrap();
    assert_eq!((r0.rank, r0.invariant_factors.len()), (1, 0));
    let r4 = graded_group(4, &Group::Trivial, &GraphLimits::default()).unwrap();
    assert_eq!(r4.rank, 2);
}

#[test]
fn decorations_round_trip_up_to_gauge() {
    let mut rng = rng(302);
    for group in [Group::Cyclic(2), Group::klein4(), Group::symmetric3()] {
        for _ in 0..25 {
            let n = if rng.gen_bool(0.5) { 2 } else { 4 };
            let g = decorated_graph(&mut rng, &group, n);
            let d = edge_to_pi1(&g).unwrap();
            let back: G = pi1_to_edge(&d).unwrap();
            assert!(gauge_equivalent(&g, &back), "{} {}", group, seed_note(302));
            let f: Vec<GroupElement> = (0..n).map(|_| element(&mut rng, &group, 1)).collect();
            let moved = apply_gauge(&g, &f);
            assert!(out_equivalent(&d, &edge_to_pi1(&moved).unwrap()).unwrap());
        }
    }
}

#[test]
fn theta_over_integers() {
    let z = Group::integers();
    let t = |k: i64| GroupElement::FreeAbelian(vec![k]);
    let theta = G::from_pairs(&z, 2, &[(0, 3, t(0)), (1, 4, t(1)), (2, 5, t(0))]).unwrap();
    let d = edge_to_pi1(&theta).unwrap();
    let mut images: Vec<GroupElement> = d.images.values().cloned().collect();
    images.sort();
    assert_eq!(images, vec![t(0), t(1)]);
    let all_one = G::from_pairs(&z, 2, &[(0, 3, t(0)), (1, 4, t(0)), (2, 5, t(0))]).unwrap();
    assert!(edge_to_pi1(&all_one).unwrap().images.values().all(|g| *g == t(0)));
}

#[test]
fn limits_are_enforced() {
    let tight = GraphLimits { max_degree: 4, max_group_order: 6, max_labelings: 10 };
    assert!(matches!(graded_group(2, &Group::Cyclic(3), &tight), Err(equisurg::Error::ResourceBound(_))));
}
