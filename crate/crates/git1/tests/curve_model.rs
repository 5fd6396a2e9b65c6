use git1::curve::{
    special_point_counts, stability_index_sets, tail_from_tree, Anchor, Branch, CompId, CoreKind, Curve, CurveError, Marks, Tail,
};
use git1::{canonical_form, enumerate_curves, EnumOptions};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn tail(anchor: Anchor, marks: &[usize]) -> Tail {
    tail_from_tree(anchor, &[Branch { marks: marks.iter().copied().collect(), joints: vec![] }])
}

fn full(n: usize, core: CoreKind, marks: Vec<Vec<usize>>, tails: Vec<Tail>) -> Curve {
    Curve::full(n, core, marks, tails).unwrap()
}

fn classes(n: usize) -> BTreeSet<String> {
    enumerate_curves(n, &EnumOptions::defaults(n)).unwrap().iter().map(canonical_form).collect()
}

#[test]
fn n1_has_three_classes() {
    let want: BTreeSet<String> = [CoreKind::Smooth, CoreKind::Ngon(1), CoreKind::Fold(1)]
        .into_iter()
        .map(|k| canonical_form(&full(1, k, vec![vec![1]], vec![])))
        .collect();
    assert_eq!(classes(1), want);
    let mut o = EnumOptions::defaults(1);
    o.max_core_m = 0;
    let only = enumerate_curves(1, &o).unwrap();
    assert_eq!(only.len(), 1);
    assert_eq!(only[0].core, CoreKind::Smooth);
}

#[test]
fn n2_has_fifteen_classes_listed_by_hand() {
    let mut want = vec![
        full(2, CoreKind::Smooth, vec![vec![1, 2]], vec![]),
        full(2, CoreKind::Ngon(1), vec![vec![1, 2]], vec![]),
        full(2, CoreKind::Ngon(2), vec![vec![1], vec![2]], vec![]),
        full(2, CoreKind::Fold(1), vec![vec![1, 2]], vec![]),
        full(2, CoreKind::Fold(2), vec![vec![1], vec![2]], vec![]),
    ];
    for (a, b) in [(1, 2), (2, 1)] {
        for k in [CoreKind::Smooth, CoreKind::Ngon(1), CoreKind::Fold(1)] {
            want.push(full(2, k, vec![vec![a]], vec![tail(Anchor::Smooth { component: 0 }, &[b])]));
        }
        want.push(full(2, CoreKind::Ngon(1), vec![vec![a]], vec![tail(Anchor::Node { component: 0 }, &[b])]));
        want.push(full(2, CoreKind::Fold(1), vec![vec![a]], vec![tail(Anchor::Singular, &[b])]));
    }
    let want: BTreeSet<String> = want.iter().map(canonical_form).collect();
    assert_eq!(want.len(), 15);
    assert_eq!(classes(2), want);
}

#[test]
fn enumeration_is_deterministic_and_duplicate_free() {
    for n in 1..=3 {
        let a = enumerate_curves(n, &EnumOptions::defaults(n)).unwrap();
        let b = enumerate_curves(n, &EnumOptions::defaults(n)).unwrap();
        assert_eq!(a, b);
        let forms: BTreeSet<String> = a.iter().map(canonical_form).collect();
        assert_eq!(forms.len(), a.len());
    }
}

#[test]
fn budget_is_enforced() {
    let mut o = EnumOptions::defaults(3);
    o.budget = 5;
    assert!(matches!(enumerate_curves(3, &o), Err(CurveError::BudgetExceeded(_))));
}

#[test]
fn validation_examples() {
    assert!(Curve::full(1, CoreKind::Smooth, vec![vec![1]], vec![]).is_ok());
    assert!(Curve::full(2, CoreKind::Fold(2), vec![vec![1], vec![2]], vec![]).is_ok());
    let unmarked = tail(Anchor::Smooth { component: 0 }, &[]);
    assert!(matches!(
        Curve::full(2, CoreKind::Smooth, vec![vec![1]], vec![unmarked]),
        Err(CurveError::UnmarkedComponent(_))
    ));
    let two = vec![tail(Anchor::Singular, &[2]), tail(Anchor::Singular, &[3])];
    assert!(matches!(Curve::full(3, CoreKind::Fold(1), vec![vec![1]], two), Err(CurveError::AnchorClash(_))));
    let bad = vec![tail(Anchor::Singular, &[2])];
    assert!(matches!(Curve::full(2, CoreKind::Smooth, vec![vec![1]], bad), Err(CurveError::BadAnchor(_))));
    let dup = vec![tail(Anchor::Smooth { component: 0 }, &[1, 2])];
    assert!(matches!(Curve::full(2, CoreKind::Smooth, vec![vec![1]], dup), Err(CurveError::DuplicateMark(1))));
}

#[test]
fn special_point_examples() {
    let c = full(2, CoreKind::Ngon(1), vec![vec![1, 2]], vec![]);
    let s = c.special_counts(CompId::Core(0));
    assert_eq!((s.on_component, s.on_normalization), (3, 4));
    let c = full(3, CoreKind::Fold(3), vec![vec![1], vec![2], vec![3]], vec![]);
    assert!(special_point_counts(&c).iter().all(|(_, s)| s.on_component == 2));
    let c = full(2, CoreKind::Smooth, vec![vec![1]], vec![tail(Anchor::Smooth { component: 0 }, &[2])]);
    assert_eq!(c.special_counts(CompId::Tail(0, 0)).on_component, 2);
}

#[test]
fn index_set_examples() {
    let all: Marks = (1..=3).collect();
    let c = full(3, CoreKind::Fold(3), vec![vec![1], vec![2], vec![3]], vec![]);
    let ix = stability_index_sets(&c);
    assert_eq!((ix.i.clone(), ix.i0), (all.clone(), all.clone()));
    assert!(ix.j.is_empty());
    let c = full(3, CoreKind::Smooth, vec![vec![1, 2, 3]], vec![]);
    let ix = stability_index_sets(&c);
    assert_eq!(ix.i, all);
    assert!(ix.j.is_empty() && ix.i0.is_empty());
    let c = full(3, CoreKind::Smooth, vec![vec![1, 2]], vec![tail(Anchor::Smooth { component: 0 }, &[3])]);
    let ix = stability_index_sets(&c);
    assert_eq!(ix.i, [1, 2].into_iter().collect());
    assert!(ix.j.is_empty() && ix.i0.is_empty());
}

#[test]
fn index_sets_cover_marks() {
    for n in 1..=4 {
        for c in enumerate_curves(n, &EnumOptions::defaults(n)).unwrap() {
            let ix = stability_index_sets(&c);
            let mut covered: Marks = ix.i.union(&ix.j).copied().collect();
            for (id, s) in special_point_counts(&c) {
                if matches!(id, CompId::Tail(..)) && s.on_component == 2 {
                    covered.extend(c.marks_of(id).iter().copied());
                }
                assert!(s.on_normalization >= s.on_component);
            }
            assert_eq!(covered, (1..=n).collect::<Marks>());
            assert!(ix.i.is_disjoint(&ix.j) && ix.i0.is_subset(&ix.i));
            if !ix.i0.is_empty() {
                assert!(c.core.is_fold());
            }
        }
    }
}

#[test]
fn canonical_form_examples() {
    let a = full(2, CoreKind::Fold(2), vec![vec![1], vec![2]], vec![]);
    let b = full(2, CoreKind::Fold(2), vec![vec![2], vec![1]], vec![]);
    assert_eq!(canonical_form(&a), canonical_form(&b));
    let a = full(3, CoreKind::Ngon(3), vec![vec![1], vec![2], vec![3]], vec![]);
    let b = full(3, CoreKind::Ngon(3), vec![vec![1], vec![3], vec![2]], vec![]);
    assert_eq!(canonical_form(&a), canonical_form(&b));
    let a = full(2, CoreKind::Smooth, vec![vec![1, 2]], vec![]);
    let b = full(2, CoreKind::Fold(1), vec![vec![1, 2]], vec![]);
    assert_ne!(canonical_form(&a), canonical_form(&b));
}

#[test]
fn json_roundtrip() {
    for c in enumerate_curves(3, &EnumOptions::defaults(3)).unwrap() {
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(git1::curve::curve_from_json(&s).unwrap(), c);
    }
}

/// Relabel core components by `perm` (a symmetry of the core) and reverse the tail list.
fn relabel(c: &Curve, perm: &[usize], reflect: bool) -> Curve {
    let m = c.core_marks.len();
    let mut marks = vec![Marks::new(); m];
    for (k, ms) in c.core_marks.iter().enumerate() {
        marks[perm[k]] = ms.clone();
    }
    let mut tails: Vec<Tail> = c
        .tails
        .iter()
        .map(|t| {
            let mut t = t.clone();
            t.anchor = match t.anchor {
                Anchor::Smooth { component } => Anchor::Smooth { component: perm[component] },
                // node (k, k+1) goes to (perm k, perm k+1), which is keyed by the smaller end
                Anchor::Node { component } if reflect => Anchor::Node { component: perm[(component + 1) % m] },
                Anchor::Node { component } => Anchor::Node { component: perm[component] },
                Anchor::Singular => Anchor::Singular,
            };
            t
        })
        .collect();
    tails.reverse();
    Curve { core_marks: marks, tails, ..c.clone() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn canonical_form_is_symmetry_invariant(pick in 0usize..10_000, rot in 0usize..8, reflect: bool, seed in 0u64..1000) {
        let cs = enumerate_curves(4, &EnumOptions::defaults(4)).unwrap();
        let c = &cs[pick % cs.len()];
        let m = c.core_marks.len();
        let perm: Vec<usize> = match c.core {
            CoreKind::Ngon(_) => (0..m).map(|k| {
                let r = (k + rot) % m;
                if reflect { (m - r) % m } else { r }
            }).collect(),
            _ => {
                let mut p: Vec<usize> = (0..m).collect();
                let mut s = seed;
                for i in (1..m).rev() {
                    p.swap(i, (s % (i as u64 + 1)) as usize);
                    s /= 7;
                }
                p
            }
        };
        let d = relabel(c, &perm, reflect && matches!(c.core, CoreKind::Ngon(_)));
        let d = git1::curve::validate_curve(d).unwrap();
        prop_assert_eq!(canonical_form(&d), canonical_form(c));
        prop_assert_eq!(canonical_form(&d), canonical_form(&d.clone()));
    }
}
