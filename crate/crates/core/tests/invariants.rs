use proptest::prelude::*;

use cmcforge::algebra::{act_on_point, from_ball, hyperbolic_distance, to_ball, BallPoint, Mat2C, C64};
use cmcforge::genus0::{exists_cmc, jm_criterion, jm_intervals, total_abs_curvature};
use cmcforge::surface::Isometry;

fn su2() -> impl Strategy<Value = Mat2C> {
    prop::array::uniform4(-1.0f64..1.0).prop_filter_map("degenerate", |v| {
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        (n > 1e-3).then(|| {
            let (p, q) = (C64::new(v[0] / n, v[1] / n), C64::new(v[2] / n, v[3] / n));
            Mat2C::new(p, -q.conj(), q, p.conj())
        })
    })
}

fn sl2c() -> impl Strategy<Value = Mat2C> {
    prop::array::uniform6(-2.0f64..2.0).prop_filter_map("singular", |v| {
        let (a, b, c) = (C64::new(v[0], v[1]), C64::new(v[2], v[3]), C64::new(v[4], v[5]));
        // d chosen so that ad - bc = 1.
        (a.norm() > 0.1).then(|| Mat2C::new(a, b, c, (C64::new(1.0, 0.0) + b * c) / a))
    })
}

fn ball(c: f64) -> impl Strategy<Value = BallPoint> {
    let r = 1.0 / c.abs();
    prop::array::uniform3(-0.55f64..0.55).prop_map(move |u| BallPoint { y: u.map(|x| x * r), radius: r })
}

fn curvature() -> impl Strategy<Value = f64> {
    prop_oneof![0.05f64..2.0, -2.0f64..-0.05]
}

proptest! {
    #[test]
    fn ball_round_trip((c, b) in curvature().prop_flat_map(|c| (Just(c), ball(c)))) {
        let back = to_ball(&from_ball(&b, c).unwrap()).unwrap();
        for k in 0..3 {
            prop_assert!((back.y[k] - b.y[k]).abs() < 1e-12 * b.radius);
        }
    }

    #[test]
    fn su2_moves_points_by_isometries(
        (c, p, q) in curvature().prop_flat_map(|c| (Just(c), ball(c), ball(c))),
        a in su2(),
        flip in any::<bool>(),
    ) {
        let (x, y) = (from_ball(&p, c).unwrap(), from_ball(&q, c).unwrap());
        let d = hyperbolic_distance(&x, &y);
        let moved = |h: &cmcforge::algebra::HermitianPoint| {
            let mut h = *h;
            h.x = if flip { Isometry::reflection(&a).apply(&h.x) } else { act_on_point(&a, &h).unwrap().x };
            h
        };
        let d2 = hyperbolic_distance(&moved(&x), &moved(&y));
        prop_assert!((d - d2).abs() <= 1e-9 * (1.0 + d));
    }

    #[test]
    fn matrix_identities(a in sl2c(), b in sl2c()) {
        let id = Mat2C::identity();
        let scale = 1.0 + a.norm() * a.norm();
        prop_assert!((a * a.inverse()).dist(&id) < 1e-10 * scale);
        prop_assert!(((a * b).det() - C64::new(1.0, 0.0)).norm() < 1e-9 * scale * (1.0 + b.norm() * b.norm()));
        prop_assert!(((a * b).trace() - (b * a).trace()).norm() < 1e-10 * scale * (1.0 + b.norm()));
        prop_assert!((a * b).adjoint().dist(&(b.adjoint() * a.adjoint())) < 1e-12 * scale * (1.0 + b.norm()));
        // Cayley–Hamilton for det 1: A² - tr(A) A + I = 0.
        prop_assert!((a * a - a.scale(a.trace()) + id).norm() < 1e-10 * scale * scale);
    }

    #[test]
    fn exponential_of_su2_algebra(v in prop::array::uniform3(-3.0f64..3.0)) {
        let t = Mat2C::new(C64::new(0.0, v[0]), C64::new(v[1], v[2]), C64::new(-v[1], v[2]), C64::new(0.0, -v[0]));
        prop_assert!(t.exp_traceless().is_su2(1e-12));
    }

    #[test]
    fn interval_union_is_the_criterion(n in 3usize..12, c in -8.0f64..0.2499) {
        let iv = jm_intervals(n, 4).unwrap();
        let near_endpoint = iv.iter().any(|i| {
            (cmcforge::genus0::to_f64(&i.lo) - c).abs() < 1e-9 || (cmcforge::genus0::to_f64(&i.hi) - c).abs() < 1e-9
        });
        prop_assume!(!near_endpoint && c != 0.0);
        prop_assert_eq!(iv.iter().any(|i| i.contains(c)), jm_criterion(n, c).unwrap());
    }

    #[test]
    fn curvature_decreases_in_c(ends in 2usize..40, c in -3.0f64..0.24, dc in 1e-3f64..0.1) {
        prop_assume!(c + dc < 0.25);
        prop_assert!(total_abs_curvature(ends, c + dc).unwrap() < total_abs_curvature(ends, c).unwrap());
    }

    #[test]
    fn existence_is_decided_for_m_two(n in 3usize..12, c in -4.0f64..0.2499) {
        prop_assume!(c != 0.0);
        let e = exists_cmc(2, n, c).unwrap();
        prop_assert!(e.exists.is_some());
    }
}
