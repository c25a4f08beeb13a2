use super::*;
use crate::algebra::{c, ZERO};
use std::f64::consts::PI;

fn z_map() -> RationalMap {
    RationalMap::z()
}

#[test]
fn schwarzian_examples() {
    assert!(schwarzian(&z_map(), c(0.3, 0.2)).unwrap().norm() < 1e-14);
    let mob = RationalMap::new(Poly::real(&[1.0, 2.0]), Poly::real(&[3.0, -1.0]));
    assert!(schwarzian(&mob, c(0.7, -0.4)).unwrap().norm() < 1e-12);
    let sq = RationalMap::poly(Poly::monomial(ONE, 2));
    assert!((schwarzian(&sq, ONE).unwrap() - c(-1.5, 0.0)).norm() < 1e-14);
    assert!(schwarzian(&sq, ZERO).is_err());
    assert!((gauss_schwarzian(&GaussMap::Tanh, c(0.3, 0.1)).unwrap() - c(-2.0, 0.0)).norm() < 1e-12);
}

#[test]
fn schwarzian_moebius_invariance() {
    let g = RationalMap::new(Poly::real(&[0.5, 0.0, 1.0, 0.3]), Poly::real(&[1.0, -0.2]));
    // m∘g with m(w) = (2w + i)/(w - 3)
    let mg = RationalMap::new(
        g.num.scale(c(2.0, 0.0)).add(&g.den.scale(I)),
        g.num.sub(&g.den.scale(c(3.0, 0.0))),
    );
    for k in 0..20 {
        let z = C64::from_polar(0.4 + 0.07 * k as f64, 1.3 * k as f64);
        let (a, b) = (schwarzian(&g, z).unwrap(), schwarzian(&mg, z).unwrap());
        assert!((a - b).norm() <= 1e-10 * (1.0 + a.norm()), "{a} {b}");
    }
}

#[test]
fn regularity_reports() {
    assert!(check_regular(&catenoid()).pass);
    let branch = WeierstrassData::new(
        "branch",
        GaussMap::Rational(RationalMap::poly(Poly::monomial(ONE, 2))),
        RationalMap::poly(Poly::one()),
        vec![],
        vec![],
        BTreeMap::new(),
        ONE,
    );
    let rep = check_regular(&branch);
    assert!(!rep.pass);
    assert!(rep.violations.iter().any(|(p, _, _)| *p == ExtC::Finite(ZERO)));
    for n in 3..=6 {
        let rep = check_regular(&noid(n).unwrap());
        assert!(rep.pass, "noid({n}): {:?}", rep.violations);
    }
    for s in Solid::ALL {
        let rep = check_regular(&platonic(s).unwrap());
        assert!(rep.pass, "{}: {:?}", s.name(), rep.violations);
    }
    let e = check_regular(&enneper());
    assert!(e.pass);
    assert_eq!(e.method, "sampled");
}

#[test]
fn metric_examples() {
    let cat = catenoid();
    assert!((metric_dsg(&cat, ONE).unwrap() - 4.0).abs() < 1e-14);
    assert!((metric_dsigma(&z_map(), ZERO).unwrap() - 4.0).abs() < 1e-14);
    assert!(metric_dsg(&cat, ZERO).is_err());
}

#[test]
fn metric_hopf_product() {
    // g Möbius-related to z, ω = q/g' with q = z⁻²: ds² dσ² = 4|q|²
    let g = RationalMap::new(Poly::real(&[1.0, 2.0]), Poly::real(&[-0.5, 1.0]));
    for k in 0..12 {
        let z = C64::from_polar(0.8 + 0.1 * k as f64, 0.9 * k as f64);
        let q = 1.0 / (z * z);
        let gv = g.eval(z);
        let dg = g.deriv(z);
        let omega = q / dg;
        let s = 1.0 + gv.norm_sqr();
        let ds2 = s * s * omega.norm_sqr();
        let prod = ds2 * metric_dsigma(&g, z).unwrap();
        assert!((prod - 4.0 * q.norm_sqr()).abs() <= 1e-9 * prod);
    }
}

#[test]
fn sigma_from_normal_examples() {
    assert!(sigma_from_normal([0.0, 1.0, 0.0]).unwrap().dist(&Mat2C::identity()) < 1e-15);
    let s = sigma_from_normal([0.0, 0.0, 1.0]).unwrap();
    assert!(s.inverse().dist(&Mat2C::new(ZERO, -I, -I, ZERO)) < 1e-15);
    assert!(crate::algebra::delta(&s.inverse()).norm() < 1e-15);
    let s = sigma_from_normal([1.0, 0.0, 0.0]).unwrap();
    assert!(s.inverse().dist(&Mat2C::diag(I, -I)) < 1e-15);
    assert!(matches!(sigma_from_normal([1.0, 1.0, 0.0]), Err(Error::NonUnitNormal(_))));
    let nu = [0.36, 0.48, 0.8];
    let s = sigma_from_normal(nu).unwrap();
    assert!(s.is_su2(1e-12));
    assert!(s.times_conj().dist(&Mat2C::identity()) < 1e-12);
}

#[test]
fn catenoid_period() {
    let cat = catenoid();
    let (re, im) = euclid_period(&cat, cat.loop_path("end").unwrap()).unwrap();
    assert!(re.iter().all(|x| x.abs() < 1e-10), "{re:?}");
    assert!(im[0].abs() < 1e-10 && im[1].abs() < 1e-10);
    assert!((im[2] - 4.0 * PI).abs() < 1e-8);
    let twice = cat.loop_path("end").unwrap().repeated(2).unwrap();
    let (_, im2) = euclid_period(&cat, &twice).unwrap();
    assert!((im2[2] - 8.0 * PI).abs() < 1e-8);
    let small = PolyPath::circle(c(2.0, 0.0), c(2.5, 0.0), 16).unwrap();
    let (re, im) = euclid_period(&cat, &small).unwrap();
    assert!(re.iter().chain(im.iter()).all(|x| x.abs() < 1e-10));
}

#[test]
fn period_homotopy_invariance() {
    let cat = catenoid();
    let base = euclid_period(&cat, cat.loop_path("end").unwrap()).unwrap();
    let bumpy: Vec<C64> = (0..48)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / 48.0;
            C64::from_polar(1.0 + 0.3 * (3.0 * t).sin(), t)
        })
        .chain(std::iter::once(ONE))
        .collect();
    let other = euclid_period(&cat, &PolyPath::new(bumpy).unwrap()).unwrap();
    for k in 0..3 {
        assert!((base.0[k] - other.0[k]).abs() < 1e-9);
        assert!((base.1[k] - other.1[k]).abs() < 1e-9);
    }
}

#[test]
fn noid_ends_have_zero_periods_and_unit_coefficients() {
    for n in 3..=5 {
        let d = noid(n).unwrap();
        for k in 0..n {
            let (re, _) = euclid_period(&d, d.loop_path(&format!("end{k}")).unwrap()).unwrap();
            assert!(re.iter().all(|x| x.abs() < 1e-9), "noid({n}) end{k}: {re:?}");
            let zeta = C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
            let h = 1e-4;
            let z = zeta * (1.0 + h);
            let lead = d.q_at(z) * (z - zeta) * (z - zeta);
            assert!((lead - ONE).norm() < 1e-3, "{lead}");
        }
    }
}

#[test]
fn minimal_immersion_basics() {
    let cat = catenoid();
    assert_eq!(minimal_immerse(&cat, &PolyPath::point(ONE)).unwrap(), [0.0; 3]);
    let arc = PolyPath::circle(ZERO, ONE, 64).unwrap();
    let closed = minimal_immerse(&cat, &arc).unwrap();
    assert!(closed.iter().all(|x| x.abs() < 1e-10));
    let p = PolyPath::new(vec![ONE, c(1.5, 0.5), c(2.0, -0.3)]).unwrap();
    let a = minimal_immerse(&cat, &p).unwrap();
    let b = minimal_immerse(&cat, &p.reversed()).unwrap();
    for k in 0..3 {
        assert!((a[k] + b[k]).abs() < 1e-12);
    }
    // radial path 1 -> 2 on the standard catenoid: x3 = 2 log 2
    let r = minimal_immerse(&cat, &PolyPath::new(vec![ONE, c(2.0, 0.0)]).unwrap()).unwrap();
    assert!((r[2] - 2.0 * 2f64.ln()).abs() < 1e-10);
}

#[test]
fn reflections_of_every_catalog_entry() {
    for name in catalog_names() {
        let d = catalog(&name).unwrap();
        for r in &d.reflections {
            let chk = check_reflection(&d, r, 50);
            assert!(chk.involution <= 1e-12, "{name} {:?}: {chk:?}", r.label);
            assert!(chk.sigma_conj <= 1e-12, "{name} {:?}: {chk:?}", r.label);
            assert!(chk.gauss <= 1e-9, "{name} {:?}: {chk:?}", r.label);
            assert!(chk.hopf <= 1e-9, "{name} {:?}: {chk:?}", r.label);
            assert!(r.sigma.is_su2(1e-12));
            let w = r.anchor_point();
            let fixed = r.apply(w).finite().unwrap();
            assert!((fixed - w).norm() < 1e-12, "{name} anchor {:?}", r.label);
            assert_eq!(r.anchor.start(), d.basepoint);
        }
        let z0 = d.basepoint;
        assert!((d.reflections[0].apply(z0).finite().unwrap() - z0).norm() < 1e-15);
    }
}

#[test]
fn catalog_lookup() {
    let cat = catalog("catenoid").unwrap();
    assert_eq!(cat.punctures, vec![ExtC::Finite(ZERO), ExtC::Infinity]);
    assert_eq!(catalog("trinoid").unwrap().ends(), 3);
    assert!(matches!(catalog("helicoid"), Err(Error::UnknownSurface(_))));
    assert!(catalog("noid(2)").is_err());
    assert_eq!(catalog("platonic(cube)").unwrap().ends(), 8);
    assert_eq!(catalog("platonic(dodeca)").unwrap().ends(), 20);
}

#[test]
fn json_round_trip() {
    for name in ["catenoid", "enneper", "noid(4)", "platonic(tetra)"] {
        let d = catalog(name).unwrap();
        let s = d.to_json().unwrap();
        assert!(s.contains("\"schema\": \"v1\""));
        let back = WeierstrassData::from_json(&s).unwrap();
        assert_eq!(back.to_json().unwrap(), s);
        assert_eq!(back.g, d.g);
    }
}

#[test]
fn su2_equivalence_detection() {
    let g = RationalMap::new(Poly::real(&[0.2, 1.0, 0.5]), Poly::real(&[1.0, 0.0, 0.3]));
    let w = RationalMap::new(Poly::real(&[1.0]), Poly::real(&[0.0, 0.0, 1.0]));
    let found = su2_equivalent((&g, &w), (&g, &w)).unwrap();
    assert!(found.dist_up_to_sign(&Mat2C::identity()) < 1e-8);

    let (p, q) = (c(0.6, 0.3), c(-0.2, 0.7141428428542851));
    let n = (p.norm_sqr() + q.norm_sqr()).sqrt();
    let (p, q) = (p / n, q / n);
    let b = Mat2C::new(p, -q.conj(), q, p.conj());
    let apply = |b: &Mat2C| {
        let g2 = RationalMap::new(
            g.num.scale(b.a11).add(&g.den.scale(b.a12)),
            g.num.scale(b.a21).add(&g.den.scale(b.a22)),
        );
        let f = g.num.scale(b.a21).add(&g.den.scale(b.a22));
        let w2 = RationalMap::new(w.num.mul(&f).mul(&f), w.den.mul(&g.den).mul(&g.den));
        (g2, w2)
    };
    let (g2, w2) = apply(&b);
    let found = su2_equivalent((&g, &w), (&g2, &w2)).unwrap();
    assert!(found.dist_up_to_sign(&b) < 1e-8);

    let a = Mat2C::real(2.0, 0.0, 0.0, 0.5);
    let (g3, w3) = apply(&a);
    assert!(su2_equivalent((&g, &w), (&g3, &w3)).is_none());
}

#[test]
fn path_clearance() {
    let sing = [ZERO];
    assert!(check_clearance(&[c(-1.0, 0.01), c(1.0, 0.01)], &sing).is_err());
    assert!(check_clearance(&[c(-1.0, 0.5), c(1.0, 0.5)], &sing).is_ok());
    assert!(check_clearance(&[c(1.0, 0.0), ZERO], &sing).is_err());
}

#[test]
fn alpha_structure() {
    for name in ["catenoid", "enneper", "noid(3)", "platonic(octa)"] {
        let d = catalog(name).unwrap();
        for z in sample_points(&d, 30, 1.2) {
            let a = d.alpha().eval(z);
            let scale = 1.0 + a.norm();
            assert!(a.trace().norm() < 1e-12 * scale, "{name}");
            assert!(a.det().norm() < 1e-12 * scale * scale, "{name}");
            let g = d.g.eval(z).finite().unwrap();
            let gp = d.g.jet(z).unwrap()[1];
            let expect = d.q_at(z) / gp;
            assert!((a.a21 - expect).norm() < 1e-9 * (1.0 + expect.norm()), "{name}");
            assert!((a.a11 - g * expect).norm() < 1e-9 * (1.0 + (g * expect).norm()), "{name}");
            let j = d.alpha().jets(z);
            let h = 1e-5;
            let fd = (d.alpha().eval(z + h) - d.alpha().eval(z - h)).scale_re(0.5 / h);
            assert!(fd.dist(&j[1]) < 1e-6 * (1.0 + j[1].norm()), "{name}");
        }
    }
}

#[test]
fn noid_removable_point_at_origin() {
    let d = noid(3).unwrap();
    assert!(d.alpha().singular_points().iter().all(|p| p.norm() > 0.5));
    // α₂₁ = q/G' = 4.5/(z³ - 1)², continuous across the switch to local expansions.
    for r in [0.0, 1e-8, 9.9e-7, 1.01e-6, 1e-4] {
        let z = C64::from_polar(r, 0.7);
        let exact = C64::new(4.5, 0.0) / (z * z * z - 1.0).powi(2);
        assert!((d.alpha().eval(z).a21 - exact).norm() < 1e-12, "{r}");
        assert!((d.alpha().jets(z)[0].a21 - exact).norm() < 1e-12, "{r}");
    }
}

#[test]
fn platonic_poles_are_the_ends() {
    for s in Solid::ALL {
        let d = platonic(s).unwrap();
        assert_eq!(d.singular_points().len(), d.punctures.iter().filter(|p| p.finite().is_some()).count(), "{}", s.name());
    }
}

#[test]
fn piece_radius() {
    let d = noid(3).unwrap();
    let p = d.piece.as_ref().unwrap();
    let r = p.radius(PI + 0.1);
    let z = p.point(r, PI + 0.1);
    assert!((z.arg() + PI / 3.0).abs() < 1e-12);
    let r = p.radius(1.45 * PI);
    assert!((p.point(r, 1.45 * PI).norm() - 1.0).abs() < 1e-12);
    let cat = catenoid();
    assert!((cat.piece.as_ref().unwrap().radius(-0.3) - 1.0).abs() < 1e-12);
}
