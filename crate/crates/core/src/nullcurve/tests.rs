use super::*;
use crate::algebra::{c as cx, I, ZERO};
use crate::wdata::{catenoid, gauss_schwarzian, noid};
use std::f64::consts::PI;

/// Classical RK4 on the exact circle `z = e^{iθ}`, independent of the
/// adaptive integrator and of the polygonal loop.
fn rk4_circle_monodromy(d: &WeierstrassData, c: f64, steps: usize) -> Mat2C {
    let rhs = |t: f64, f: Mat2C| {
        let z = C64::from_polar(1.0, t);
        (d.alpha().eval(z) * f).scale(I * z * c)
    };
    let h = 2.0 * PI / steps as f64;
    let mut f = Mat2C::identity();
    for k in 0..steps {
        let t = k as f64 * h;
        let k1 = rhs(t, f);
        let k2 = rhs(t + h / 2.0, f + k1.scale_re(h / 2.0));
        let k3 = rhs(t + h / 2.0, f + k2.scale_re(h / 2.0));
        let k4 = rhs(t + h, f + k3.scale_re(h));
        f = f + (k1 + k2.scale_re(2.0) + k3.scale_re(2.0) + k4).scale_re(h / 6.0);
    }
    f
}

fn trace_law(c: f64) -> f64 {
    2.0 * (PI * (1.0 - 4.0 * c).sqrt()).cos().abs()
}

#[test]
fn zero_c_is_constant() {
    let d = catenoid();
    let f0 = Mat2C::new(cx(2.0, 0.0), cx(1.0, 1.0), ZERO, cx(0.5, 0.0));
    let p = PolyPath::new(vec![cx(1.0, 0.0), cx(2.0, 1.0), cx(-1.0, 3.0)]).unwrap();
    let s = integrate(&d, 0.0, &p, f0, 1e-10).unwrap();
    assert!(s.samples.iter().all(|x| x.f == f0));
    let m = monodromy(&d, 0.0, "end", 1e-10).unwrap();
    assert_eq!(m.rho, Mat2C::identity());
}

#[test]
fn determinant_and_alpha_structure() {
    let d = catenoid();
    let p = PolyPath::new(vec![cx(1.0, 0.0), cx(2.0, 0.0)]).unwrap();
    let s = integrate(&d, 0.1, &p, Mat2C::identity(), 1e-10).unwrap();
    assert!(s.det_drift() < 1e-9);
    for x in &s.samples {
        let a = d.alpha().eval(x.z);
        assert!(a.trace().norm() < 1e-12 && a.det().norm() < 1e-12);
    }
}

#[test]
fn reversal_returns_initial_value() {
    let d = catenoid();
    let p = PolyPath::new(vec![cx(1.0, 0.0), cx(1.5, 0.7), cx(2.0, -0.3)]).unwrap();
    let f0 = Mat2C::identity();
    let fw = integrate(&d, 0.1, &p, f0, 1e-10).unwrap();
    let back = integrate(&d, 0.1, &p.reversed(), fw.end().f, 1e-10).unwrap();
    assert!(back.end().f.dist(&f0) < 1e-8);
}

#[test]
fn catenoid_trace_law_against_rk4() {
    let d = catenoid();
    for c in [0.1, 3.0 / 16.0, -0.2] {
        let m = monodromy(&d, c, "end", 1e-10).unwrap();
        let t = m.rho.trace().norm();
        assert!((t - trace_law(c)).abs() < 1e-6, "c={c}: {t} vs {}", trace_law(c));
        let oracle = rk4_circle_monodromy(&d, c, 4000);
        assert!(m.rho.dist(&oracle) < 1e-6, "c={c}");
        assert!((m.rho.det() - ONE).norm() < 1e-8);
    }
}

#[test]
fn noid_end_traces() {
    let d = noid(3).unwrap();
    for c in [0.05, 0.1, -0.1] {
        for k in 0..3 {
            let m = monodromy(&d, c, &format!("end{k}"), 1e-10).unwrap();
            assert!((m.rho.trace().norm() - trace_law(c)).abs() < 1e-6, "c={c} end{k}");
        }
    }
}

#[test]
fn c_derivative_is_residue() {
    let d = catenoid();
    let a = monodromy_c_derivative(&d, "end").unwrap();
    let expected = Mat2C::diag(2.0 * PI * I, -2.0 * PI * I);
    assert!(a.dist(&expected) < 1e-9);
    let mut errs = vec![];
    for c in [1e-2, 5e-3, 2.5e-3, 1.25e-3] {
        let m = monodromy(&d, c, "end", 1e-12).unwrap();
        errs.push((m.rho - Mat2C::identity() - a.scale_re(c)).norm());
    }
    for w in errs.windows(2) {
        assert!((w[0] / w[1]).log2() > 1.9, "{errs:?}");
    }
}

#[test]
fn fixed_curve_reflection_is_identity_and_tends_to_sigma() {
    let d = catenoid();
    let r1 = d.reflection((1, 1)).unwrap();
    let rec = reflection_record(&d, 0.1, r1, &Mat2C::identity(), 1e-10).unwrap();
    assert!(rec.rho_hat.dist(&Mat2C::identity()) < 1e-8);
    for r in &d.reflections {
        let small = reflection_matrix(&d, 1e-7, r, &Mat2C::identity(), 1e-10).unwrap();
        assert!(small.dist(&r.sigma) < 1e-5, "{:?}", r.label);
        let rec = reflection_record(&d, 0.1, r, &Mat2C::identity(), 1e-10).unwrap();
        assert!(rec.conj_residual < 1e-8 && rec.spread < 1e-8);
    }
}

#[test]
fn reflection_gauge_change() {
    let d = noid(3).unwrap();
    let a = Mat2C::new(cx(1.2, 0.3), cx(-0.4, 0.1), cx(0.2, -0.5), ZERO);
    let a = Mat2C::new(a.a11, a.a12, a.a21, (ONE + a.a12 * a.a21) / a.a11);
    for r in &d.reflections {
        let base = reflection_matrix(&d, 0.05, r, &Mat2C::identity(), 1e-10).unwrap();
        let moved = reflection_matrix(&d, 0.05, r, &a, 1e-10).unwrap();
        let expect = a.inverse() * base * a.conj();
        assert!(moved.dist(&expect) < 1e-7, "{:?}", r.label);
    }
}

#[test]
fn schwarzian_identity_catenoid() {
    let d = catenoid();
    let p = PolyPath::new(vec![cx(1.0, 0.0), cx(1.0, 1.0), cx(2.0, 0.0)]).unwrap();
    let c = 0.1;
    let s = integrate(&d, c, &p, Mat2C::identity(), 1e-10).unwrap();
    for z in [cx(1.0, 0.0), cx(1.0, 1.0), cx(2.0, 0.0)] {
        let lhs = secondary_schwarzian(&s, z).unwrap() - gauss_schwarzian(&d.g, z).unwrap();
        let rhs = d.q_at(z) * (2.0 * c);
        assert!((lhs - rhs).norm() <= 1e-5 * rhs.norm(), "{z}: {lhs} vs {rhs}");
    }
}

#[test]
fn gauss_maps_and_duality() {
    let d = noid(3).unwrap();
    let p = PolyPath::new(vec![cx(0.5, 0.0), cx(0.3, 0.4), cx(-0.4, 0.3)]).unwrap();
    let s = integrate(&d, 0.1, &p, Mat2C::identity(), 1e-10).unwrap();
    let dual = dualize(&s);
    for x in s.samples.iter().step_by(3) {
        let g = hyperbolic_gauss(&s, x.z).unwrap();
        assert!(g.chordal(&d.g.eval(x.z)) < 1e-6);
        let sec = secondary_gauss(&s, x.z).unwrap();
        let h = hyperbolic_gauss(&dual, x.z).unwrap();
        assert!(sec.chordal(&h) < 1e-6);
    }
    let back = dualize(&dual);
    for (a, b) in back.samples.iter().zip(&s.samples) {
        assert!(a.f.dist(&b.f) < 1e-12);
    }
}

#[test]
fn deformation_in_d() {
    let d = catenoid();
    let p = PolyPath::new(vec![cx(1.0, 0.0), cx(2.0, 0.5), cx(0.5, 1.0)]).unwrap();
    let c = 0.1;
    let s = integrate(&d, c, &p, Mat2C::identity(), 1e-10).unwrap();
    let b = Mat2C::new(cx(0.6, 0.0), cx(0.0, 0.8), cx(0.0, 0.8), cx(0.6, 0.0));
    let t = deform_in_d(&s, &b).unwrap();
    let mut far = 0.0f64;
    let stretched = deform_in_d(&s, &Mat2C::diag(cx(2.0, 0.0), cx(0.5, 0.0))).unwrap();
    for ((x, y), w) in s.samples.iter().zip(&t.samples).zip(&stretched.samples) {
        let px = surface_point(&x.f, c).unwrap();
        let py = surface_point(&y.f, c).unwrap();
        assert!(px.x.dist(&py.x) < 1e-9 * (1.0 + px.x.norm()));
        let pw = surface_point(&w.f, c).unwrap();
        far = far.max(crate::algebra::hyperbolic_distance(&px, &pw));
        assert!(hyperbolic_gauss(&t, x.z).unwrap().chordal(&d.g.eval(x.z)) < 1e-6);
    }
    assert!(far > 0.1);
}
