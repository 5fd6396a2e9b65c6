use git1::chamber::*;
use git1::rational::{fmt_q, q, qf};
use git1::{canonical_form, enumerate_curves, EnumOptions, Q};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Distinct sign vectors seen on a grid of points that avoid every wall.
fn grid_sign_vectors(n: usize) -> BTreeSet<Vec<bool>> {
    let walls = wall_arrangement(n);
    let steps: Vec<Q> = (-7..=23).map(|k| qf(2 * k + 1, 14) * qf(1, n as i64).max(qf(1, 2)) * q(n as i64)).collect();
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; n];
    loop {
        let p: Vec<Q> = idx.iter().map(|&i| steps[i].clone()).collect();
        let vals: Vec<Q> = walls.iter().map(|w| w.eval(&p)).collect();
        if vals.iter().all(|v| *v != q(0)) && p.iter().all(|x| *x > q(-1) && *x < q(n as i64 + 1)) {
            out.insert(vals.iter().map(|v| *v > q(0)).collect());
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            idx[k] += 1;
            if idx[k] < steps.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[test]
fn wall_counts() {
    assert_eq!(wall_arrangement(1).len(), 2);
    let labels: Vec<String> = wall_arrangement(2).iter().map(Wall::label).collect();
    assert_eq!(labels, ["a1=0", "a2=0", "a1=1", "a2=1", "a1+a2=1"]);
    assert_eq!(wall_arrangement(3).len(), 10);
    assert_eq!(wall_arrangement(4).len(), 4 + 15);
}

#[test]
fn chamber_counts_match_grid_sampling() {
    for (n, want) in [(1, 3), (2, 12)] {
        let ch = enumerate_chambers(n, &BoxBounds::default_for(n)).unwrap();
        assert_eq!(ch.len(), want);
        assert_eq!(grid_sign_vectors(n).len(), want);
    }
    let ch = enumerate_chambers(3, &BoxBounds::default_for(3)).unwrap();
    let seen = grid_sign_vectors(3);
    let found: BTreeSet<Vec<bool>> = ch.iter().map(|c| c.signs.iter().map(|&s| s > 0).collect()).collect();
    assert!(seen.is_subset(&found));
}

#[test]
fn witnesses_are_strict() {
    for n in 1..=3 {
        let walls = wall_arrangement(n);
        for ch in enumerate_chambers(n, &BoxBounds::default_for(n)).unwrap() {
            for (w, &s) in walls.iter().zip(&ch.signs) {
                let v = w.eval(&ch.witness);
                assert!(if s > 0 { v > q(0) } else { v < q(0) });
            }
        }
    }
}

#[test]
fn clipped_box_drops_chamber() {
    let b = BoxBounds { lo: q(-1), hi: qf(1, 2) };
    let ch = enumerate_chambers(1, &b).unwrap();
    assert_eq!(ch.len(), 2);
    let b = BoxBounds { lo: q(-1), hi: qf(9, 10) };
    let ch = enumerate_chambers(2, &b).unwrap();
    assert!(ch.iter().all(|c| c.witness.iter().all(|x| *x < q(1))));
    assert!(ch.len() < 12);
    assert!(matches!(enumerate_chambers(5, &BoxBounds::default_for(5)), Err(ChamberError::BudgetExceeded { .. })));
}

fn stable_classes(n: usize, point: &[Q]) -> BTreeSet<String> {
    let b = BoxBounds::default_for(n);
    let curves = enumerate_curves(n, &EnumOptions::defaults(n)).unwrap();
    let ch = enumerate_chambers(n, &b).unwrap();
    let walls = wall_arrangement(n);
    let target: Vec<i8> = walls.iter().map(|w| if w.eval(point) > q(0) { 1 } else { -1 }).collect();
    let c = ch.iter().find(|c| c.signs == target).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    classify_chamber(c, &curves, &b, 5, &mut rng)
        .unwrap()
        .into_iter()
        .filter(|v| v.stable)
        .map(|v| v.class)
        .collect()
}

#[test]
fn classification_examples() {
    let s = stable_classes(2, &[qf(3, 2), qf(3, 2)]);
    let want: BTreeSet<String> = [
        (git1::curve::CoreKind::Smooth, vec![vec![1, 2]]),
        (git1::curve::CoreKind::Ngon(1), vec![vec![1, 2]]),
        (git1::curve::CoreKind::Ngon(2), vec![vec![1], vec![2]]),
        (git1::curve::CoreKind::Fold(1), vec![vec![1, 2]]),
    ]
    .into_iter()
    .map(|(k, m)| canonical_form(&git1::Curve::full(2, k, m, vec![]).unwrap()))
    .collect();
    assert_eq!(s, want);
    assert!(stable_classes(1, &[qf(1, 2)]).is_empty());
    assert_eq!(stable_classes(1, &[q(2)]).len(), 2);
}

#[test]
fn atlas_crossings_n1() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let r = atlas_report(1, 5, &mut rng).unwrap();
    assert_eq!(r.chambers.len(), 3);
    let x = r.crossings.iter().find(|c| c.wall == "a1=1").unwrap();
    // Fold(1) is semistable only on the wall itself
    assert!(x.leaving.is_empty());
    assert_eq!(x.entering.len(), 2);
    assert_eq!(x.on_wall.len(), 1);
    assert!(x.on_wall[0].contains("F1"));
    let tsv = r.tsv();
    assert_eq!(tsv.lines().count(), 1 + 3 * 3);
    let w: Vec<String> = r.chambers[0].witness.iter().map(fmt_q).collect();
    assert!(tsv.contains(&w.join(",")) || tsv.contains(&w[0]));
}

#[test]
fn atlas_crossing_below_level_wall_n2() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let r = atlas_report(2, 5, &mut rng).unwrap();
    assert_eq!(r.chambers.len(), 12);
    let below = r.table.iter().zip(&r.chambers).filter(|(_, c)| c.witness.iter().all(|x| *x > q(0)));
    for (row, c) in below {
        let s: Q = c.witness.iter().sum();
        if s < q(1) {
            assert!(row.iter().all(|v| !v.stable));
        }
    }
    for x in r.crossings.iter().filter(|c| c.wall == "a1+a2=1") {
        assert!(x.leaving.is_empty());
    }
}
