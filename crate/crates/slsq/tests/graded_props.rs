use proptest::prelude::*;
use slsq::graded::{CMat, ONE};
use slsq::{graded_comm, graded_kron, graded_perm, GradedSpace, Parity, SuperMatrix, C64};

const TOL: f64 = 1e-10;

fn space() -> impl Strategy<Value = GradedSpace> {
    prop::collection::vec(0u8..2, 1..4).prop_map(|b| GradedSpace::from_bits(&b).unwrap())
}

fn parity() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::Even), Just(Parity::Odd)]
}

/// Random matrix on `space` with only entries of the requested parity.
fn homogeneous(space: GradedSpace, p: Parity) -> impl Strategy<Value = SuperMatrix> {
    let n = space.dim();
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n).prop_map(move |v| {
        let data = CMat::from_fn(n, n, |i, j| {
            if space.parity(i) + space.parity(j) == p {
                C64::new(v[i * n + j].0, v[i * n + j].1)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        SuperMatrix::homogeneous(&space, data, p).unwrap()
    })
}

fn on_space(space: GradedSpace) -> impl Strategy<Value = SuperMatrix> {
    parity().prop_flat_map(move |p| homogeneous(space.clone(), p))
}

fn sign(a: &SuperMatrix, b: &SuperMatrix) -> C64 {
    C64::new(a.parity().unwrap().koszul(b.parity().unwrap()), 0.0)
}

fn pair() -> impl Strategy<Value = (SuperMatrix, SuperMatrix, SuperMatrix, SuperMatrix)> {
    (space(), space()).prop_flat_map(|(v, w)| (on_space(v.clone()), on_space(w.clone()), on_space(v), on_space(w)))
}

proptest! {
    #[test]
    fn kron_mixed_product((a, b, c, d) in pair()) {
        let lhs = &graded_kron(&a, &b) * &graded_kron(&c, &d);
        let rhs = graded_kron(&(&a * &c), &(&b * &d)).scale(sign(&b, &c));
        prop_assert!(lhs.max_abs_diff(&rhs) < TOL);
    }

    #[test]
    fn kron_is_associative(
        (a, b, c) in (space(), space(), space()).prop_flat_map(|(u, v, w)| (on_space(u), on_space(v), on_space(w)))
    ) {
        let l = graded_kron(&graded_kron(&a, &b), &c);
        let r = graded_kron(&a, &graded_kron(&b, &c));
        prop_assert!(l.max_abs_diff(&r) < TOL);
        prop_assert_eq!(l.parity(), r.parity());
    }

    #[test]
    fn flip_is_involutive_and_swaps_factors((a, b, _, _) in pair()) {
        let (v, w) = (a.space_out().clone(), b.space_out().clone());
        let p = graded_perm(&v, &w);
        let back = graded_perm(&w, &v);
        prop_assert!((&back * &p).max_abs_diff(&SuperMatrix::identity(&v.tensor(&w))) < TOL);
        let swapped = &(&p * &graded_kron(&a, &b)) * &back;
        prop_assert!(swapped.max_abs_diff(&graded_kron(&b, &a).scale(sign(&a, &b))) < TOL);
    }

    #[test]
    fn graded_commutator_symmetry_and_jacobi(
        (a, b, c) in space().prop_flat_map(|v| (on_space(v.clone()), on_space(v.clone()), on_space(v)))
    ) {
        let ab = graded_comm(&a, &b).unwrap();
        let ba = graded_comm(&b, &a).unwrap();
        prop_assert!((&ab + &ba.scale(sign(&a, &b))).max_abs() < TOL);

        let term = |x: &SuperMatrix, y: &SuperMatrix, z: &SuperMatrix| {
            graded_comm(x, &graded_comm(y, z).unwrap()).unwrap().scale(sign(z, x))
        };
        let jacobi = &(&term(&a, &b, &c) + &term(&b, &c, &a)) + &term(&c, &a, &b);
        prop_assert!(jacobi.max_abs() < 1e-9);
    }

    #[test]
    fn parity_is_detected(m in space().prop_flat_map(on_space)) {
        if m.max_abs() > 0.0 {
            prop_assert_eq!(m.detect_parity(0.0), m.parity());
        }
        prop_assert!((m.clone().with_parity(m.parity().unwrap())).is_ok());
        prop_assert_eq!(m.scale(ONE).max_abs_diff(&m), 0.0);
    }
}
