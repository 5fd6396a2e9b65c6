use git1::curve::{tail_from_tree, validate_curve, Anchor, Branch, CoreKind, Curve, Marks, Tail};
use git1::polytope::{is_semistable, is_stable, Character};
use git1::rational::{q, qf};
use git1::smyth::*;
use git1::{canonical_form, enumerate_curves, EnumOptions};

fn tail(component: usize, marks: &[usize]) -> Tail {
    tail_from_tree(Anchor::Smooth { component }, &[Branch { marks: marks.iter().copied().collect(), joints: vec![] }])
}

fn raw(n: usize, core: CoreKind, marks: Vec<Marks>, tails: Vec<Tail>) -> Curve {
    validate_curve(Curve { n, core, core_marks: marks, tails, allow_unmarked: true }).unwrap()
}

#[test]
fn m_stability_examples() {
    for n in 4..=6 {
        let c = raw(n, CoreKind::Smooth, vec![(1..=n - 2).collect()], vec![tail(0, &[n - 1, n])]);
        assert_eq!(level(&c), n - 1);
        assert!(is_m_stable(&c, n - 2).unwrap());
        assert!(!is_m_stable(&c, n - 1).unwrap());
    }
    let f = raw(4, CoreKind::Fold(3), vec![[1].into(), [2].into(), [3, 4].into()], vec![]);
    assert!(is_m_stable(&f, 3).unwrap());
    assert!(!is_m_stable(&f, 2).unwrap());
    let f = raw(3, CoreKind::Fold(3), vec![[1].into(), [2].into(), [3].into()], vec![]);
    assert!(!no_infinitesimal_autos(&f));
    assert!(!is_m_stable(&f, 3).unwrap());
    let bad = raw(2, CoreKind::Fold(1), vec![[1].into()], vec![tail_from_tree(
        Anchor::Singular,
        &[Branch { marks: [2].into(), joints: vec![] }],
    )]);
    assert!(matches!(is_m_stable(&bad, 1), Err(SmythError::InvalidForMStability(_))));
}

#[test]
fn zu_stability_examples() {
    assert!(is_zu_stable(&Curve::full(1, CoreKind::Ngon(1), vec![vec![1]], vec![]).unwrap()));
    assert!(!is_zu_stable(&Curve::full(2, CoreKind::Fold(2), vec![vec![1], vec![2]], vec![]).unwrap()));
    assert!(is_zu_stable(&Curve::full(3, CoreKind::Smooth, vec![vec![1, 2, 3]], vec![]).unwrap()));
}

#[test]
fn zu_matches_large_characters() {
    for n in 1..=4 {
        let chi = Character::uniform(n, qf(5, 2));
        for c in enumerate_curves(n, &EnumOptions::defaults(n)).unwrap() {
            let ss = is_semistable(&c, &chi).unwrap().semistable;
            assert_eq!(ss, is_stable(&c, &chi).unwrap().stable);
            assert_eq!(ss, is_zu_stable(&c), "{}", canonical_form(&c));
        }
    }
}

#[test]
fn contraction_is_identity_on_marked_curves() {
    for c in enumerate_curves(3, &EnumOptions::defaults(3)).unwrap() {
        assert_eq!(contract_unmarked(&c).unwrap(), c);
    }
}

#[test]
fn smooth_unmarked_core_with_tails() {
    let c = raw(
        6,
        CoreKind::Smooth,
        vec![Marks::new()],
        vec![tail(0, &[1, 2]), tail(0, &[3, 4]), tail(0, &[5, 6])],
    );
    let img = contract_unmarked(&c).unwrap();
    assert_eq!(img.core, CoreKind::Fold(3));
    assert_eq!(img.n, 6);
    assert!(!img.allow_unmarked);
    let mut marks: Vec<Marks> = img.core_marks.clone();
    marks.sort();
    assert_eq!(marks, vec![Marks::from([1, 2]), [3, 4].into(), [5, 6].into()]);
}

#[test]
fn ngon_unmarked_cycle_component() {
    let c = raw(4, CoreKind::Ngon(3), vec![[1].into(), [2].into(), Marks::new()], vec![tail(2, &[3, 4])]);
    let img = contract_unmarked(&c).unwrap();
    assert_eq!(img.core, CoreKind::Ngon(2));
    assert!(matches!(img.tails[0].anchor, Anchor::Node { .. }));
}

#[test]
fn contraction_is_idempotent_and_keeps_marks() {
    for (n, m) in [(4, 2), (4, 3), (5, 2)] {
        for c in enumerate_m_stable(n, m, &SmythEnum::defaults(n)).unwrap() {
            let img = contract_unmarked(&c).unwrap();
            assert_eq!(img.n, n);
            assert_eq!(contract_unmarked(&img).unwrap(), img);
            let all: Marks = img.components().into_iter().flat_map(|id| img.marks_of(id).clone()).collect();
            assert_eq!(all, (1..=n).collect::<Marks>());
        }
    }
}

#[test]
fn inclusion_examples() {
    let r = check_inclusion(Mode::NMinus1, &Character::uniform(4, qf(1, 2)), &SmythEnum::defaults(4)).unwrap();
    assert!(r.violations.is_empty() && r.classes_checked > 0);
    let r = check_inclusion(Mode::NMinus3, &Character::uniform(5, q(1)), &SmythEnum::defaults(5)).unwrap();
    assert!(r.violations.is_empty() && r.with_unmarked > 0);
    let e = check_inclusion(Mode::NMinus2, &Character::uniform(4, q(2)), &SmythEnum::defaults(4)).unwrap_err();
    assert!(matches!(e, SmythError::HypothesisViolated(_)));
    assert!(matches!(check_hypothesis(Mode::NMinus3, &Character::uniform(4, q(1))), Err(SmythError::HypothesisViolated(_))));
    assert_eq!(Mode::parse("n-2"), Some(Mode::NMinus2));
    assert_eq!(Mode::NMinus3.m(7), 4);
}

#[test]
fn inclusion_fails_off_hypothesis() {
    // too small a character loses the smooth curves: the check is not vacuous
    let chi = Character::uniform(4, qf(1, 5));
    let curves = enumerate_m_stable(4, 3, &SmythEnum::defaults(4)).unwrap();
    assert!(curves.iter().any(|c| !is_semistable(&contract_unmarked(c).unwrap(), &chi).unwrap().semistable));
}

#[test]
fn obstruction_pair_n7() {
    let (a, b) = obstruction_pair(7, 4).unwrap();
    assert!(is_m_stable(&a, 3).unwrap() && is_m_stable(&b, 3).unwrap());
    let w = uniform_chi_window(&[a.clone(), b.clone()], 3).unwrap();
    assert_eq!(w.lower, Some(q(1)));
    assert_eq!(w.upper, Some(qf(1, 2)));
    assert!(w.is_empty());
    // a non-uniform character still works for this pair
    let x = common_character(&[a.clone(), b.clone()]).unwrap();
    assert!(is_semistable(&a, &x).unwrap().semistable && is_semistable(&b, &x).unwrap().semistable);
    // the bounds 1/(n-2k+2) and 1/(n-k-1)
    for (n, k) in [(7, 4), (9, 5), (8, 4)] {
        let (a, b) = obstruction_pair(n, k).unwrap();
        let w = uniform_chi_window(&[a, b], n - k).unwrap();
        assert_eq!(w.lower, Some(qf(1, n as i64 - 2 * k as i64 + 2)));
        assert_eq!(w.upper, Some(qf(1, n as i64 - k as i64 - 1)));
    }
}

#[test]
fn windows_shrink_when_adding_curves() {
    let cs = enumerate_m_stable(5, 2, &SmythEnum::defaults(5)).unwrap();
    let mut w = uniform_chi_window(&[], 2).unwrap();
    assert_eq!(w, ChiWindow::everything());
    for c in cs.iter().take(200) {
        let next = uniform_chi_window(std::slice::from_ref(c), 2).unwrap().intersect(&w);
        for k in 0..=12 {
            let a = qf(k, 4);
            assert!(!next.contains(&a) || w.contains(&a));
        }
        w = next;
    }
    let one = Curve::full(4, CoreKind::Smooth, vec![vec![1, 2, 3, 4]], vec![]).unwrap();
    assert_eq!(uniform_chi_window(&[one], 3).unwrap().describe(), "[1/4, inf)");
}

#[test]
fn n5_mode_n_minus_3_window_contains_one() {
    let cs = enumerate_m_stable(5, 2, &SmythEnum::defaults(5)).unwrap();
    let w = uniform_chi_window(&cs, 2).unwrap();
    assert!(w.contains(&q(1)), "{}", w.describe());
}
