use std::collections::BTreeSet;

use deflate_core::class::{enumerate_class, shading_grid, ClassLevels, PermClass};
use deflate_core::decomposition::{
    is_indecomposable, is_simple, maximal_intervals, proper_intervals, substitution_decompose,
    sum_components, DecompositionTree,
};
use deflate_core::deflate::{
    breaking_extensions, classify_principal, embed_indecomposable, extend_to_simple, Status,
};
use deflate_core::perm::{all_permutations, contains, Permutation, Slot, SumKind};
use deflate_core::witness::{bond_certificate, bundled_corpus, strip_slots};
use deflate_core::Symmetry;
use proptest::prelude::*;

fn p(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn upto(n: usize) -> Vec<Permutation> {
    (1..=n).flat_map(all_permutations).collect()
}

fn arb_perm(max: usize) -> impl Strategy<Value = Permutation> {
    (1..=max)
        .prop_flat_map(|n| Just((1..=n as u16).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

/// Brute force over all index subsets.
fn naive_contains(pattern: &Permutation, host: &Permutation) -> bool {
    let (k, n) = (pattern.len(), host.len());
    if k > n {
        return false;
    }
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .any(|mask| {
            let vals: Vec<u16> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| host.values()[i])
                .collect();
            Permutation::standardize(&vals) == *pattern
        })
}

#[test]
fn containment_is_a_partial_order() {
    let perms = upto(5);
    let le = |a: &Permutation, b: &Permutation| contains(a, b).is_some();
    for a in &perms {
        assert!(le(a, a));
        for b in &perms {
            assert_eq!(le(a, b), naive_contains(a, b), "{a} in {b}");
            if le(a, b) && le(b, a) {
                assert_eq!(a, b);
            }
        }
    }
    let small = upto(4);
    for a in &small {
        for b in &small {
            for c in &small {
                if le(a, b) && le(b, c) {
                    assert!(le(a, c));
                }
            }
        }
    }
}

#[test]
fn containment_is_symmetry_equivariant() {
    let patterns = upto(3);
    let hosts = upto(6);
    for f in Symmetry::ALL {
        for a in &patterns {
            let fa = f.apply(a);
            for b in &hosts {
                assert_eq!(
                    contains(a, b).is_some(),
                    contains(&fa, &f.apply(b)).is_some(),
                    "{f}: {a} in {b}"
                );
            }
        }
    }
}

#[test]
fn decomposition_is_unique_and_faithful() {
    for w in upto(8) {
        let tree = substitution_decompose(&w);
        assert_eq!(tree.to_permutation(), w);
        check_tree(&tree);
    }
}

fn check_tree(tree: &DecompositionTree) {
    let DecompositionTree::Node { skeleton, children } = tree else {
        return;
    };
    assert!(is_simple(skeleton));
    let s = skeleton.to_string();
    if s == "1 2" || s == "2 1" {
        let kind = if s == "1 2" {
            SumKind::Direct
        } else {
            SumKind::Skew
        };
        assert_eq!(sum_components(&children[0].to_permutation(), kind).len(), 1);
    } else {
        assert!(skeleton.len() >= 4);
    }
    children.iter().for_each(check_tree);
}

#[test]
fn maximal_intervals_partition_indecomposables() {
    for w in upto(7)
        .into_iter()
        .filter(|w| w.len() > 1 && is_indecomposable(w))
    {
        let blocks = maximal_intervals(&w).unwrap();
        let covered: usize = blocks.iter().map(|b| b.len()).sum();
        assert_eq!(covered, w.len());
        for iv in proper_intervals(&w) {
            assert!(blocks
                .iter()
                .any(|b| b.pos_lo <= iv.pos_lo && iv.pos_hi <= b.pos_hi));
        }
    }
}

#[test]
fn downward_closure_and_generating_tree() {
    for basis in [
        vec!["321"],
        vec!["2413", "3142"],
        vec!["1342"],
        vec!["123", "3412"],
    ] {
        let class = PermClass::new(basis.iter().map(|b| p(b))).unwrap();
        let members: BTreeSet<Permutation> = enumerate_class(&class, 7).collect();
        let brute: BTreeSet<Permutation> =
            upto(7).into_iter().filter(|w| class.contains(w)).collect();
        assert_eq!(members, brute, "{class}");
        for w in &members {
            for pos in 1..=w.len() {
                if let Some(d) = w.delete(pos) {
                    assert!(class.contains(&d));
                }
            }
        }
    }
}

#[test]
fn shading_commutes_with_symmetries() {
    let class = PermClass::principal(p("2413"));
    for w in enumerate_class(&class, 5) {
        let grid = shading_grid(&w, &class).unwrap();
        for f in Symmetry::ALL {
            let image = shading_grid(&f.apply(&w), &class.map(f)).unwrap();
            let mapped: BTreeSet<Slot> = grid
                .blocked
                .iter()
                .map(|&s| f.apply_slot(s, w.len()))
                .collect();
            assert_eq!(image.blocked, mapped, "{f} on {w}");
        }
    }
}

#[test]
fn basis_is_normalized() {
    let c = PermClass::new([p("321"), p("321654")]).unwrap();
    assert_eq!(c.basis(), &[p("321")]);
}

#[test]
fn embedding_postconditions_for_length_four_patterns() {
    for pi in all_permutations(4) {
        let class = PermClass::principal(pi.clone());
        for w in enumerate_class(&class, 6) {
            let trace = embed_indecomposable(&w, &pi).unwrap();
            assert!(trace
                .stages
                .windows(2)
                .all(|s| contains(&s[0], &s[1]).is_some()));
            assert_eq!(trace.stages[0], w);
        }
    }
}

#[test]
fn breaking_reports_hold_their_invariants() {
    let class = PermClass::principal(p("321"));
    for w in enumerate_class(&class, 7).filter(|w| is_indecomposable(w) && !is_simple(w)) {
        for r in breaking_extensions(&w, &class).unwrap() {
            assert!(class.contains(&r.extension));
            assert!(is_indecomposable(&r.extension));
            assert_eq!(r.extension, w.insert(r.slot).unwrap());
        }
    }
}

#[test]
fn extension_chains_are_valid() {
    for pi in ["321", "2413", "1432", "2143"] {
        let class = PermClass::principal(p(pi));
        for w in enumerate_class(&class, 5) {
            let Some(ext) = extend_to_simple(&w, &class, 9).unwrap() else {
                continue;
            };
            assert!(is_simple(&ext.simple) && class.contains(&ext.simple));
            assert!(contains(&w, &ext.simple).is_some());
            let mut cur = ext
                .embedding
                .as_ref()
                .map_or(w.clone(), |t| t.result().clone());
            for step in &ext.chain {
                assert_eq!(step.extension, cur.insert(step.slot).unwrap());
                cur = step.extension.clone();
            }
            if !ext.chain.is_empty() {
                assert_eq!(cur, ext.simple);
            }
        }
    }
}

#[test]
fn classifier_is_symmetry_invariant() {
    for pi in upto(6) {
        let status = classify_principal(&pi).status;
        for f in Symmetry::ALL {
            assert_eq!(
                classify_principal(&f.apply(&pi)).status,
                status,
                "{pi} under {f}"
            );
        }
    }
}

#[test]
fn classifier_never_contradicts_witnesses() {
    for row in bundled_corpus().iter().filter(|r| r.basis.len() == 1) {
        for f in Symmetry::ALL {
            let v = classify_principal(&f.apply(&row.basis[0]));
            assert_ne!(v.status, Status::NonDeflatable, "{}", row.basis[0]);
        }
    }
    for pi in ["2413", "321", "123456", "1432"] {
        assert_ne!(classify_principal(&p(pi)).status, Status::Deflatable);
    }
}

#[test]
fn certificates_are_sound_at_small_scale() {
    // No simple member three entries longer may contain a certified member.
    for pi in ["251364", "2413", "1342", "25314"] {
        let class = PermClass::principal(p(pi));
        for w in enumerate_class(&class, 7) {
            if bond_certificate(&w, &class).unwrap().is_some() {
                assert!(
                    extend_to_simple(&w, &class, w.len() + 3).unwrap().is_none(),
                    "{w} in {class}"
                );
            }
        }
    }
}

#[test]
fn certificates_respect_symmetries() {
    let class = PermClass::principal(p("251364"));
    let w = p("25173486");
    for f in Symmetry::ALL {
        assert!(
            bond_certificate(&f.apply(&w), &class.map(f))
                .unwrap()
                .is_some(),
            "{f}"
        );
    }
}

#[test]
fn strip_sizes_match_direct_enumeration() {
    for n in 3..=10 {
        for w in [Permutation::identity(n), p("25173486")]
            .into_iter()
            .filter(|w| w.len() == n)
        {
            for bond in deflate_core::perm::bonds(&w) {
                let (i, v) = (bond.left_pos, bond.low_value);
                let mut direct = 0;
                for ps in 1..=n + 1 {
                    for vs in 1..=n + 1 {
                        let col = ps == i + 1 && !(v..=v + 2).contains(&vs);
                        let row = vs == v + 1 && !(i..=i + 2).contains(&ps);
                        if col || row {
                            direct += 1;
                        }
                    }
                }
                let strips = strip_slots(&bond, n);
                assert_eq!(strips.len(), direct);
                assert_eq!(strips.len(), 2 * (n + 1) - 6);
            }
        }
    }
}

#[test]
fn generating_tree_levels_are_grouped() {
    let class = PermClass::principal(p("321"));
    for (i, level) in ClassLevels::new(&class, 6).enumerate() {
        assert!(level.iter().all(|w| w.len() == i + 1));
    }
}

proptest! {
    #[test]
    fn text_round_trip(w in arb_perm(64)) {
        prop_assert_eq!(w.to_string().parse::<Permutation>().unwrap(), w.clone());
        let spaced = double_spaced(&w);
        prop_assert_eq!(spaced.parse::<Permutation>().unwrap(), w);
    }

    #[test]
    fn insert_then_delete(w in arb_perm(30), a in 0usize..1000, b in 0usize..1000) {
        let n = w.len();
        let slot = Slot::new(a % (n + 1) + 1, b % (n + 1) + 1);
        let ext = w.insert(slot).unwrap();
        prop_assert_eq!(ext.at(slot.pos_slot), slot.val_slot);
        prop_assert_eq!(ext.delete(slot.pos_slot).unwrap(), w);
    }

    #[test]
    fn symmetries_compose(w in arb_perm(20)) {
        for a in Symmetry::ALL {
            prop_assert_eq!(a.inverse().apply(&a.apply(&w)), w.clone());
            for b in Symmetry::ALL {
                prop_assert_eq!(a.compose(b).apply(&w), a.apply(&b.apply(&w)));
            }
        }
    }

    #[test]
    fn containment_matches_brute_force(a in arb_perm(4), b in arb_perm(9)) {
        let found = contains(&a, &b);
        prop_assert_eq!(found.is_some(), naive_contains(&a, &b));
        if let Some(occ) = found {
            let vals: Vec<usize> = occ.entries(&b);
            prop_assert_eq!(Permutation::standardize(&vals), a);
        }
    }
}

/// Values separated by runs of whitespace.
fn double_spaced(w: &Permutation) -> String {
    w.values()
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("  ")
}

#[test]
fn witness_has_no_simple_extension_four_entries_longer() {
    let class = PermClass::principal(p("251364"));
    assert!(extend_to_simple(&p("25173486"), &class, 12)
        .unwrap()
        .is_none());
}
