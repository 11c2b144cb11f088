mod common;

use std::collections::BTreeSet;

use common::{brute_force_forms, form_hash};
use kuratree_core::monoid::{ClassMonoid, DefaultActivity};
use kuratree_core::tree::{count_trees, enumerate_trees, for_each_tree_form, tree_leq};

fn brute_set(k: usize, ell: usize, e: u32) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    brute_force_forms(k, ell, e, |s, _| assert!(out.insert(s.to_string()), "repeated {s}"));
    out
}

#[test]
fn matches_brute_force_on_small_indices() {
    let m = ClassMonoid::unit();
    for k in 0..=3 {
        for ell in 0..=2 {
            for e in 0..=2 {
                let size: u128 = count_trees(k, ell, &m.multiple(0, e), &m, &DefaultActivity).iter().sum();
                if size > 200_000 {
                    continue;
                }
                let ours: BTreeSet<String> =
                    enumerate_trees(k, ell, &m.multiple(0, e), &m).iter().map(|t| t.canonical_form()).collect();
                assert_eq!(ours, brute_set(k, ell, e), "k={k} ell={ell} e={e}");
            }
        }
    }
}

#[test]
fn counts_by_size_match_brute_force() {
    let m = ClassMonoid::unit();
    for (k, ell, e) in [(3, 1, 3), (2, 2, 3), (1, 3, 2)] {
        let mut by_size = Vec::new();
        brute_force_forms(k, ell, e, |_, n| {
            if by_size.len() <= n {
                by_size.resize(n + 1, 0u128);
            }
            by_size[n] += 1;
        });
        assert_eq!(count_trees(k, ell, &m.multiple(0, e), &m, &DefaultActivity), by_size);
    }
}

#[test]
fn streamed_forms_have_the_same_fingerprint() {
    let m = ClassMonoid::unit();
    let mut ours = Vec::new();
    for_each_tree_form(3, 1, &m.multiple(0, 3), &m, &DefaultActivity, None, |s, _| ours.push(form_hash(s)));
    let mut theirs = Vec::new();
    brute_force_forms(3, 1, 3, |s, _| theirs.push(form_hash(s)));
    ours.sort_unstable();
    theirs.sort_unstable();
    assert_eq!(ours.len(), 587_583);
    assert_eq!(ours, theirs);
}

#[test]
fn known_small_sets() {
    let m = ClassMonoid::unit();
    let forms = |k, ell, e| -> Vec<String> {
        enumerate_trees(k, ell, &m.multiple(0, e), &m).iter().map(|t| t.canonical_form()).collect()
    };
    // Only the stable trivalent vertex.
    assert_eq!(forms(2, 0, 0), ["[0|](*,*)"]);
    assert_eq!(forms(0, 1, 0), ["[0|1]()"]);
    // One disk, or a ghost vertex carrying the leg with the disk on either side.
    assert_eq!(forms(1, 0, 1), ["[1|](*)", "[0|](*,[1|]())", "[0|]([1|](),*)"]);
}

#[test]
fn order_is_partial_on_small_sets() {
    let m = ClassMonoid::unit();
    let trees = enumerate_trees(2, 1, &m.multiple(0, 1), &m);
    for a in &trees {
        assert!(tree_leq(a, a));
        for b in &trees {
            if a != b && tree_leq(a, b) {
                assert!(!tree_leq(b, a));
                for c in &trees {
                    if tree_leq(b, c) {
                        assert!(tree_leq(a, c));
                    }
                }
            }
        }
    }
}
