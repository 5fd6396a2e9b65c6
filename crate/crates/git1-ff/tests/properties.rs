use git1::curve::{CoreKind, Curve};
use git1::polytope::omega_sets;
use git1::rational::{q, qf, random_nonzero_q};
use git1::{enumerate_curves, EnumOptions, Q};
use git1_ff::coords::is_realizable;
use git1_ff::sym::Sym;
use git1_ff::{
    random_coordinatization, realize, vanishing_profile, verify_random, verify_symbolic, verify_table, weight_act,
    FfError,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn realizable(n: usize) -> Vec<Curve> {
    enumerate_curves(n, &EnumOptions::defaults(n)).unwrap().into_iter().filter(is_realizable).collect()
}

#[test]
fn trivial_weight_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for c in realizable(3) {
        let t = realize(&random_coordinatization(&c, &mut rng).unwrap()).unwrap();
        let u = weight_act(&t, &[q(1), q(1), q(1)]).unwrap();
        assert_eq!(format!("{:?}", u.charts), format!("{:?}", t.charts));
        assert_eq!(format!("{:?}", u.globals), format!("{:?}", t.globals));
    }
}

#[test]
fn zero_lambda_rejected() {
    let c = Curve::full(2, CoreKind::Fold(1), vec![vec![1, 2]], vec![]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let t = realize(&random_coordinatization(&c, &mut rng).unwrap()).unwrap();
    assert_eq!(weight_act(&t, &[q(1), q(0)]).unwrap_err(), FfError::ZeroLambda);
    assert_eq!(weight_act(&t, &[q(1)]).unwrap_err(), FfError::ZeroLambda);
}

#[test]
fn weight_action_keeps_reports_and_scales_s() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for c in realizable(3) {
        let t = realize(&random_coordinatization(&c, &mut rng).unwrap()).unwrap();
        let base = verify_table(&t);
        assert!(base.all_hold());
        let lambda: Vec<Q> = (0..3).map(|_| random_nonzero_q(&mut rng, 5, 4)).collect();
        let u = weight_act(&t, &lambda).unwrap();
        assert_eq!(verify_table(&u).pass_vector(), base.pass_vector());
        for (&i, ch) in &t.charts {
            let l6 = Sym::q(lambda[i - 1].clone()).pow(6);
            assert_eq!(u.charts[&i].s, ch.s.mul(&l6));
            assert_eq!(u.globals.s[&i], t.globals.s[&i].mul(&l6));
        }
    }
}

/// Rescaling the tangent data by lambda is the same as acting by weights,
/// at least on the chart constants of the Fold core.
#[test]
fn weight_action_matches_rescaled_scalings_on_fold() {
    let c = Curve::full(3, CoreKind::Fold(2), vec![vec![1, 2], vec![3]], vec![]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cc = random_coordinatization(&c, &mut rng).unwrap();
    let lambda = [qf(2, 3), q(-3), qf(5, 7)];
    let mut scaled = cc.clone();
    for (j, x) in scaled.scalings.iter_mut() {
        *x = x.clone() * lambda[*j - 1].clone();
    }
    let a = weight_act(&realize(&cc).unwrap(), &lambda).unwrap();
    let b = realize(&scaled).unwrap();
    for (&i, ch) in &a.charts {
        assert_eq!(ch.a, b.charts[&i].a);
        assert_eq!(ch.b, b.charts[&i].b);
        assert_eq!(ch.e, b.charts[&i].e);
        assert_eq!(ch.c, b.charts[&i].c);
    }
    assert_eq!(a.globals.c, b.globals.c);
}

#[test]
fn vanishing_profile_matches_omega_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 1..=3 {
        for c in realizable(n) {
            let t = realize(&random_coordinatization(&c, &mut rng).unwrap()).unwrap();
            let p = vanishing_profile(&t);
            let o = omega_sets(&c).unwrap();
            assert_eq!((p.omega1, p.omega0_rays), (o.omega1, o.omega0_rays), "{}", git1::canonical_form(&c));
        }
    }
}

#[test]
fn vanishing_profile_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let fold2 = Curve::full(2, CoreKind::Fold(2), vec![vec![1], vec![2]], vec![]).unwrap();
    let p = vanishing_profile(&realize(&random_coordinatization(&fold2, &mut rng).unwrap()).unwrap());
    assert!(p.omega0_rays.is_empty());
    assert_eq!(p.omega1, [1, 2].into_iter().collect());
    let ngon = Curve::full(2, CoreKind::Ngon(2), vec![vec![1], vec![2]], vec![]).unwrap();
    let t = realize(&random_coordinatization(&ngon, &mut rng).unwrap()).unwrap();
    for i in 1..=2 {
        assert_eq!(t.globals.pi[&i], t.x[&i].pow(4).scale(&qf(-1, 3)));
    }
    assert_eq!(vanishing_profile(&t).omega0_rays, [1, 2].into_iter().collect());
    let cusp = Curve::full(2, CoreKind::Fold(1), vec![vec![1, 2]], vec![]).unwrap();
    let p = vanishing_profile(&realize(&random_coordinatization(&cusp, &mut rng).unwrap()).unwrap());
    assert_eq!(p.omega0_rays, [1, 2].into_iter().collect());
}

#[test]
fn symbolic_mode_small_cores() {
    for n in 1..=2 {
        for c in realizable(n) {
            let r = verify_symbolic(&c).unwrap();
            assert!(r.all_hold(), "{} {:?}", git1::canonical_form(&c), r.failing());
        }
    }
}

#[test]
fn random_draws_n3() {
    for c in realizable(3) {
        let r = verify_random(&c, 5, 17).unwrap();
        assert!(r.all_hold(), "{} {:?}", git1::canonical_form(&c), r.failing());
    }
}
