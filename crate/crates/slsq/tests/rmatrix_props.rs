use std::f64::consts::PI;

use proptest::prelude::*;
use slsq::halg::atypical_rep;
use slsq::qalg::q_atypical_rep;
use slsq::rmatrix::{intertwining_report, r_closed, r_solve, r_trig, rq_closed, unitarity_check, ybe_residual};
use slsq::sample::Sampler;
use slsq::{RepLabels, C64};

fn polar() -> impl Strategy<Value = C64> {
    (0.5..2.0f64, -PI..PI).prop_map(|(r, t)| C64::from_polar(r, t))
}

/// Unit-modulus `ν` kept away from `ν⁴ = 1`.
fn nu() -> impl Strategy<Value = C64> {
    (-PI..PI).prop_filter("nu^4 near 1", |t| (C64::from_polar(1.0, 4.0 * t) - 1.0).norm() > 0.2).prop_map(|t| C64::from_polar(1.0, t))
}

fn labels_with(alpha: (C64, C64)) -> impl Strategy<Value = RepLabels> {
    (polar(), nu()).prop_map(move |(g, n)| RepLabels::new(g, n, alpha.0, alpha.1).unwrap())
}

fn pair() -> impl Strategy<Value = (RepLabels, RepLabels)> {
    (polar(), polar())
        .prop_flat_map(|a| (labels_with(a), labels_with(a)))
        .prop_filter("coincident nu^2", |(a, b)| (a.nu * a.nu - b.nu * b.nu).norm() > 0.05)
}

fn triple() -> impl Strategy<Value = [RepLabels; 3]> {
    (polar(), polar()).prop_flat_map(|a| [labels_with(a), labels_with(a), labels_with(a)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_intertwines((a, b) in pair()) {
        let r = r_closed(&a, &b).unwrap();
        let rep = intertwining_report(&r.entries, &atypical_rep(&a), &atypical_rep(&b)).unwrap();
        prop_assert!(rep.max_residual < 1e-9, "{:?}", rep.worst());
        prop_assert!(r.sparsity_residual() == 0.0);
    }

    #[test]
    fn nullspace_matches_closed_form((a, b) in pair()) {
        let solved = r_solve(&atypical_rep(&a), &atypical_rep(&b)).unwrap();
        let (_, res) = r_closed(&a, &b).unwrap().proportionality(&solved);
        prop_assert!(res < 1e-9);
    }

    #[test]
    fn yang_baxter(t in triple()) {
        prop_assert!(ybe_residual([&t[0], &t[1], &t[2]]).unwrap() < 1e-9);
    }

    #[test]
    fn trig_unitarity(t1 in 0.0..PI, t2 in 0.0..PI, l in 0.0..PI) {
        let (res, _) = unitarity_check(t1, t2, l);
        prop_assert!(res < 1e-12);
    }

    #[test]
    fn trig_r_is_real_and_six_vertex(t1 in -PI..PI, t2 in -PI..PI, l in -PI..PI) {
        let r = r_trig(t1, t2, l);
        prop_assert!(r.entries.data().iter().all(|z| z.im == 0.0));
        prop_assert!(r.sparsity_residual() == 0.0);
    }

    #[test]
    fn deformed_closed_form_intertwines(seed in any::<u64>()) {
        if let Some([a, b]) = Sampler::new(seed, false).q_labels_set::<2>() {
            let r = rq_closed(&a, &b).unwrap();
            let rep = intertwining_report(&r.entries, &q_atypical_rep(&a), &q_atypical_rep(&b)).unwrap();
            prop_assert!(rep.max_residual < 1e-9, "{:?}", rep.worst());
        }
    }
}
