use coapprox_core::coapprox::*;
use coapprox_core::fixtures;
use coapprox_core::linalg::{q, QMatrix, QVector, Rational};
use coapprox_core::space::{make_l1, make_linf, PolyhedralSpace};
use coapprox_core::subspace::{InducedBall, Subspace};
use coapprox_core::Error;

fn v(x: &[i64]) -> QVector {
    QVector::from_i64(x)
}

fn ball(space: &PolyhedralSpace, basis: QMatrix) -> InducedBall {
    InducedBall::new(space, Subspace::new(basis).unwrap()).unwrap()
}

fn eps(a: i64, b: i64) -> EpsilonValue {
    EpsilonValue::new(q(a, b)).unwrap()
}

#[test]
fn orthogonality_examples_agree_with_oracle() {
    let linf2 = make_linf(2).unwrap();
    let l1 = make_l1(3).unwrap();
    let cases = [
        (&linf2, v(&[1, 1]), v(&[1, -1]), true),
        (&linf2, v(&[1, 0]), v(&[1, 1]), false),
        (&l1, v(&[1, 0, 0]), v(&[0, 1, 1]), true),
        (&linf2, QVector::new(vec![q(1, 1), q(1, 2)]), v(&[0, 1]), true),
        (&linf2, v(&[1, 1]), v(&[0, 1]), true),
    ];
    for (s, x, y, expected) in cases {
        assert_eq!(bj_orthogonal(s, &x, &y).unwrap(), expected, "{x} {y}");
        assert_eq!(bj_orthogonal_lambda_oracle(s, &x, &y).unwrap(), expected, "{x} {y}");
    }
    assert_eq!(bj_orthogonal(&linf2, &v(&[0, 0]), &v(&[1, 0])), Err(Error::ZeroVector));
    assert_eq!(
        bj_orthogonal_lambda_oracle(&linf2, &v(&[0, 0]), &v(&[1, 0])),
        Err(Error::ZeroVector)
    );
}

#[test]
fn lambda_minimizer() {
    let linf2 = make_linf(2).unwrap();
    let (value, _) = min_along_line(&linf2, &v(&[1, 0]), &v(&[1, 1]));
    assert_eq!(value, q(1, 2));
}

#[test]
fn epsilon_orthogonality() {
    let linf2 = make_linf(2).unwrap();
    assert!(!eps_bj_orthogonal(&linf2, &v(&[1, 0]), &v(&[1, 1]), &eps(1, 2)).unwrap());
    let y = QVector::new(vec![q(1, 4), q(1, 1)]);
    assert!(eps_bj_orthogonal(&linf2, &v(&[1, 0]), &y, &eps(1, 2)).unwrap());
    assert!(!eps_bj_orthogonal(&linf2, &v(&[1, 0]), &y, &eps(1, 5)).unwrap());
    assert!(matches!(EpsilonValue::new(q(1, 1)), Err(Error::EpsilonOutOfRange(_))));
    assert!(matches!(EpsilonValue::new(q(-1, 3)), Err(Error::EpsilonOutOfRange(_))));
}

#[test]
fn prism_base_plane_coapproximations() {
    let s = fixtures::prism_space();
    let yb = ball(&s, fixtures::prism_base_plane());
    for (a, b, c) in [(3, -2, 5), (0, 0, 1), (-7, 4, -3), (1, 1, 1)] {
        let x = v(&[a, b, c]);
        assert!(is_best_coapprox(&s, &yb, &x, &v(&[a, b, 0])).unwrap());
        assert!(!is_best_coapprox(&s, &yb, &x, &v(&[a + 1, b, 0])).unwrap());
    }
    let r = solve_best_coapprox(&s, &yb, &v(&[3, -2, 5]), DEFAULT_BUDGET).unwrap();
    assert_eq!(r.y0(), Some(&v(&[3, -2, 0])));
    assert!(matches!(
        is_best_coapprox(&s, &yb, &v(&[1, 1, 1]), &v(&[0, 0, 1])),
        Err(Error::BasisMismatch(_))
    ));
}

#[test]
fn l1_fixture_has_no_coapproximation() {
    let s = make_l1(3).unwrap();
    let yb = ball(&s, fixtures::l1_3_anti_basis());
    let x = v(&[1, 0, 0]);
    for a in -4..=4 {
        for b in -4..=4 {
            let y0 = yb.subspace().point(&QVector::new(vec![q(a, 2), q(b, 2)]));
            assert!(!is_best_coapprox(&s, &yb, &x, &y0).unwrap());
        }
    }
    let r = solve_best_coapprox(&s, &yb, &x, DEFAULT_BUDGET).unwrap();
    assert!(!r.exists());
}

#[test]
fn points_of_the_subspace_are_their_own_coapproximation() {
    let s = fixtures::prism_space();
    let yb = ball(&s, fixtures::prism_anti_plane());
    let x = yb.subspace().point(&v(&[2, -1]));
    assert!(is_best_coapprox(&s, &yb, &x, &x).unwrap());
    assert_eq!(solve_best_coapprox(&s, &yb, &x, 10).unwrap().y0(), Some(&x));
    assert!(matches!(
        eps_coapprox_defect(&s, &yb, &x, &x),
        Err(Error::DegenerateQuery(_))
    ));
}

#[test]
fn defects() {
    let s = make_linf(3).unwrap();
    let yb = ball(&s, fixtures::linf3_repeated_basis());
    let d = eps_coapprox_defect(&s, &yb, &v(&[1, -1, 0]), &v(&[0, 0, 0])).unwrap();
    assert!(d < Rational::one());
    assert_eq!(d, Rational::zero());

    let s5 = make_linf(5).unwrap();
    let yb5 = ball(&s5, fixtures::linf5_strong_basis());
    for x in [v(&[1, 0, 0, 0, 0]), v(&[0, 0, 3, -1, 2]), v(&[1, 1, 1, 1, 1])] {
        assert_eq!(eps_coapprox_defect(&s5, &yb5, &x, &v(&[0; 5])).unwrap(), Rational::one());
    }
}

#[test]
fn anti_coproximinality() {
    let prism = fixtures::prism_space();
    let yb = ball(&prism, fixtures::prism_anti_plane());
    assert!(is_anti_coproximinal(&prism, &yb, &AntiOptions::default()).unwrap().is_yes());

    let s = make_linf(3).unwrap();
    let yb = ball(&s, QMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0]]));
    assert_eq!(
        is_anti_coproximinal(&s, &yb, &AntiOptions::default()).unwrap(),
        AntiVerdict::No {
            x: v(&[0, 0, 1]),
            y0: v(&[0, 0, 0])
        }
    );

    let l1 = make_l1(3).unwrap();
    let yb = ball(&l1, fixtures::l1_3_anti_basis());
    assert!(is_anti_coproximinal(&l1, &yb, &AntiOptions::default()).unwrap().is_yes());

    let line = ball(&s, QMatrix::from_i64(&[&[1, 2, 3]]));
    assert_eq!(
        is_anti_coproximinal(&s, &line, &AntiOptions::default()),
        Err(Error::DimensionOutOfRange { m: 1, n: 3 })
    );
}

#[test]
fn non_dense_subspace_falls_back_to_search() {
    let s = make_linf(3).unwrap();
    let yb = ball(&s, QMatrix::from_i64(&[&[1, 1, 0], &[0, 0, 1]]));
    match is_anti_coproximinal(&s, &yb, &AntiOptions::default()).unwrap() {
        AntiVerdict::No { x, y0 } => {
            assert!(!yb.subspace().contains(&x));
            assert!(is_best_coapprox(&s, &yb, &x, &y0).unwrap());
        }
        other => panic!("expected a counterexample, got {other:?}"),
    }
}

#[test]
fn strong_anti_coproximinality() {
    let prism = fixtures::prism_space();
    let strong = ball(&prism, fixtures::prism_strong_plane());
    assert_eq!(is_strongly_anti_coproximinal(&prism, &strong).unwrap(), StrongVerdict::Yes);
    let anti = ball(&prism, fixtures::prism_anti_plane());
    assert!(!is_strongly_anti_coproximinal(&prism, &anti).unwrap().is_yes());

    let s = make_linf(3).unwrap();
    let yb = ball(&s, fixtures::linf3_repeated_basis());
    match is_strongly_anti_coproximinal(&s, &yb).unwrap() {
        StrongVerdict::No { x, epsilon0, .. } => {
            assert!(epsilon0 < Rational::one());
            let d = eps_coapprox_defect(&s, &yb, &x, &v(&[0, 0, 0])).unwrap();
            assert!(d <= epsilon0);
        }
        StrongVerdict::Yes => panic!("repeated components cannot be strong"),
    }

    let l1 = make_l1(3).unwrap();
    let yb = ball(&l1, fixtures::l1_3_anti_basis());
    assert!(!is_strongly_anti_coproximinal(&l1, &yb).unwrap().is_yes());
}

#[test]
fn per_point_conditions() {
    let s5 = make_linf(5).unwrap();
    let yb5 = ball(&s5, fixtures::linf5_strong_basis());
    assert!(sufficient_condition_strong(&s5, &yb5, &v(&[1, 0, 0, 0, 0])).unwrap());

    let s = make_linf(3).unwrap();
    let plane = ball(&s, QMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0]]));
    assert!(!sufficient_condition_strong(&s, &plane, &v(&[0, 0, 1])).unwrap());
    assert!(!necessary_condition_check(&s, &plane, &v(&[0, 0, 1])).unwrap());
    assert_eq!(
        sufficient_condition_strong(&s, &plane, &v(&[1, 2, 0])),
        Err(Error::PointInSubspace)
    );
    assert!(necessary_condition_check(&s, &plane, &QVector::new(vec![q(1, 1), q(1, 2), q(0, 1)])).unwrap());
    assert_eq!(
        necessary_condition_check(&s, &plane, &v(&[0, 0, 0])),
        Err(Error::ZeroVector)
    );

    let rep = ball(&s, fixtures::linf3_repeated_basis());
    for x in [v(&[1, -1, 0]), v(&[2, 5, -3]), v(&[0, 0, 1])] {
        assert!(necessary_condition_check(&s, &rep, &x).unwrap());
    }
}

#[test]
fn budget_is_enforced() {
    let s = make_linf(3).unwrap();
    let yb = ball(&s, QMatrix::from_i64(&[&[1, 1, 0], &[0, 0, 1]]));
    assert_eq!(
        solve_best_coapprox(&s, &yb, &v(&[1, -2, 0]), 0),
        Err(Error::BudgetExceeded { cap: 0 })
    );
}
