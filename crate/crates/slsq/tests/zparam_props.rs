use std::f64::consts::{FRAC_PI_4, PI};

use proptest::prelude::*;
use slsq::halg::{atypical_rep, check_relations};
use slsq::zparam::{
    dispersion, left_labels, magnon_action_residual, parametrization_report, q_labels_from_x, q_parametrization_report,
    q_point_near, right_labels, unitary_point, zhukovski_solve, SqrtBranches, ZBranch,
};
use slsq::C64;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn momentum() -> impl Strategy<Value = f64> {
    prop_oneof![0.2..(PI - 0.2), -(PI - 0.2)..-0.2]
}

fn branch() -> impl Strategy<Value = ZBranch> {
    prop_oneof![Just(ZBranch::Outer), Just(ZBranch::Inner)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn both_roots_lie_on_the_mass_shell(p in momentum(), m in -3.0..3.0f64, h in 0.2..4.0f64, br in branch()) {
        let zp = zhukovski_solve(re(p), re(m), re(h), br).unwrap();
        let [a, b] = zp.mass_shell_residual();
        prop_assert!(a < 1e-10 && b < 1e-10);
    }

    #[test]
    fn magnon_labels_round_trip(p in momentum(), m in -3.0..3.0f64, h in 0.2..4.0f64, br in branch()) {
        let zp = zhukovski_solve(re(p), re(m), re(h), br).unwrap();
        for ml in [left_labels(&zp, SqrtBranches::default()).unwrap(), right_labels(&zp, SqrtBranches::default()).unwrap()] {
            let rep = parametrization_report(&zp, &ml);
            prop_assert!(rep.passed, "{:?}", rep.worst());
            prop_assert!(magnon_action_residual(&ml).unwrap() < 1e-10);
            prop_assert!(check_relations(&atypical_rep(&ml.labels)).unwrap().max_residual < 1e-11);
        }
    }

    #[test]
    fn physical_root_is_unitary(p in momentum(), m in 0.1..3.0f64, h in 0.2..4.0f64) {
        let zp = unitary_point(p, m, h).unwrap();
        prop_assert!(zp.xplus.im > 0.0);
        let pack = left_labels(&zp, SqrtBranches::default()).unwrap().pack;
        prop_assert!((pack.a.conj() - pack.b).norm() < 1e-10);
        prop_assert!((pack.c.conj() - pack.d).norm() < 1e-10);
    }

    #[test]
    fn deformed_point_is_consistent(p in momentum(), m in 0.5..2.0f64, h in 0.5..2.0f64, eps in 0.01..0.2f64) {
        let zp = zhukovski_solve(re(p), re(m), re(h), ZBranch::Outer).unwrap();
        let pt = q_point_near(&zp, re(1.0 + eps), re(m)).unwrap();
        let ml = q_labels_from_x(&pt, SqrtBranches::default()).unwrap();
        let rep = q_parametrization_report(&pt, &ml);
        prop_assert!(rep.passed, "{:?}", rep.worst());
    }

    #[test]
    fn dispersion_massless_at_quarter_turns(theta in -PI..PI, h in 0.1..5.0f64) {
        prop_assert_eq!(dispersion(theta, FRAC_PI_4, h).1.norm(), 0.0);
        prop_assert_eq!(dispersion(theta, 3.0 * FRAC_PI_4, h).1.norm(), 0.0);
    }
}
