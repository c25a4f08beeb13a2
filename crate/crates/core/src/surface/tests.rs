use super::*;
use crate::algebra::act_on_point;
use crate::genus0::total_abs_curvature;
use crate::wdata::{catenoid, minimal_immerse, noid};

fn grid(n: usize) -> GridSpec {
    GridSpec { n_radial: n, n_angular: n, ..GridSpec::default() }
}

fn ball_tri(tris: usize) -> SurfaceMesh {
    let c = 0.5;
    let mut m = SurfaceMesh::empty(c);
    let pts = [[0.0, 0.0, 0.0], [0.3, 0.0, 0.1], [0.0, 0.25, -0.2], [0.4, 0.5, 0.0]];
    for y in pts {
        let b = crate::algebra::BallPoint { y, radius: 2.0 };
        m.vertices.push(crate::algebra::from_ball(&b, c).unwrap());
        m.ball.push(y);
        m.domain.push(C64::new(0.0, 0.0));
    }
    m.faces = [[0, 1, 2], [1, 3, 2]][..tris].to_vec();
    m
}

#[test]
fn catenoid_mesh_on_the_hyperboloid() {
    let d = catenoid();
    let p = Pipeline::normalized(&d, 0.1, 1e-10).unwrap();
    let m = build_fundamental_mesh(&p, &grid(32)).unwrap();
    assert_eq!(m.vertices.len(), 32 * 32);
    assert!(m.det_defect() <= 1e-8, "{}", m.det_defect());
    assert!(m.vertices.iter().all(|v| v.x.trace().re > 0.0));
    assert!(m.conformality <= CONFORMALITY_TOL, "{}", m.conformality);
    assert!(m.faces.iter().flatten().all(|&i| i < m.vertices.len()));
    assert!(m.faces.iter().all(|f| triangle_area(&m.ball, f) > 1e-14));
}

#[test]
fn fixed_side_is_on_the_mirror() {
    let d = noid(3).unwrap();
    let p = Pipeline::normalized(&d, 0.05, 1e-10).unwrap();
    let g = grid(12);
    let m = build_fundamental_mesh(&p, &g).unwrap();
    let sigma = d.reflection((1, 1)).unwrap().sigma;
    let r = Isometry::reflection(&sigma);
    // Column φ = π of the grid is the fixed side of (1,1).
    for v in &m.vertices[..g.n_radial] {
        let e = r.apply(&v.x).dist(&v.x) / v.x.norm();
        assert!(e <= 1e-6, "{e}");
    }
}

#[test]
fn poincare_limit_is_minimal() {
    let d = catenoid();
    let mut sups = vec![];
    for c in [0.04, 0.02, 0.01] {
        let m = build_fundamental_mesh(&Pipeline::base(&d, c, 1e-10), &grid(12)).unwrap();
        let y = rescaled_ball(&m);
        let mut sup = 0.0f64;
        for (k, z) in m.domain.iter().enumerate() {
            let path = PolyPath::new(vec![d.basepoint, *z]).unwrap();
            let x = minimal_immerse(&d, &path).unwrap();
            sup = sup.max((0..3).map(|i| (y[k][i] - x[i]).powi(2)).sum::<f64>().sqrt());
        }
        sups.push(sup);
    }
    for w in sups.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 0.9, "{sups:?}");
    }
}

#[test]
fn orbit_of_noid3() {
    let d = noid(3).unwrap();
    let p = Pipeline::normalized(&d, 0.05, 1e-10).unwrap();
    let m = build_fundamental_mesh(&p, &grid(8)).unwrap();
    let gens = orbit_generators(&d);
    let same = reflect_orbit(&m, &gens, 0).unwrap();
    assert_eq!(same.vertices, m.vertices);
    assert_eq!(same.faces, m.faces);
    let full = reflect_orbit(&m, &gens, 12).unwrap();
    assert_eq!(full.provenance.words.len(), 12);
    assert_eq!(full.vertices.len(), 12 * m.vertices.len());
    assert!(full.det_defect() <= 1e-8);
    // Twice the same reflection is the identity and is dropped.
    let twice = reflect_orbit(&m, &gens[..1], 2).unwrap();
    assert_eq!(twice.provenance.words.len(), 2);
    let s = |l| d.reflection(l).unwrap().sigma;
    for (a, b, k) in [((1, 1), (2, 1), 3), ((1, 1), (3, 1), 2), ((2, 1), (3, 1), 2)] {
        let e = relation_defect(&m, &s(a), &s(b), k);
        assert!(e <= 1e-7, "{a:?}{b:?}: {e}");
    }
}

#[test]
fn distances_survive_isometries() {
    let d = catenoid();
    let m = build_fundamental_mesh(&Pipeline::normalized(&d, 0.1, 1e-10).unwrap(), &grid(6)).unwrap();
    let t = 0.7f64;
    let u = Mat2C::new(C64::new(t.cos(), 0.3), C64::new(0.2, t.sin()), C64::new(-0.2, t.sin()), C64::new(t.cos(), -0.3));
    let u = u.scale(C64::new(1.0, 0.0) / u.det().sqrt());
    let moved: Vec<_> = m.vertices.iter().map(|v| act_on_point(&u, v).unwrap()).collect();
    for i in (0..m.vertices.len()).step_by(5) {
        for j in (0..m.vertices.len()).step_by(7) {
            let a = hyperbolic_distance(&m.vertices[i], &m.vertices[j]);
            let b = hyperbolic_distance(&moved[i], &moved[j]);
            assert!((a - b).abs() <= 1e-9 * (1.0 + a), "{a} {b}");
        }
    }
}

#[test]
fn metric_product_is_hopf() {
    let d = noid(3).unwrap();
    let p = Pipeline::normalized(&d, 0.1, 1e-10).unwrap();
    let vals = p.polar_values(&[3.5, 4.2], &[vec![0.1, 0.3], vec![0.2, 0.4]]).unwrap();
    for s in vals.iter().flatten() {
        let m = s.f.inverse() * s.dir;
        let g = m.a11 / m.a21;
        // ds = (1+|g|²)|ω|, dσ = 2|g'|/(1+|g|²) with |ω| = |M₂₁|, |g'| = |q|/|M₂₁|.
        let ds = (1.0 + g.norm_sqr()) * m.a21.norm();
        let dsig = 2.0 * d.q_at(s.z).norm() / (m.a21.norm() * (1.0 + g.norm_sqr()));
        let q = d.q_at(s.z).norm();
        assert!((ds * ds * dsig * dsig / (4.0 * q * q) - 1.0).abs() <= 1e-6);
        assert!((ds - metric_density(s)).abs() <= 1e-9 * ds);
    }
}

#[test]
fn total_curvature_of_cousins() {
    let p3 = noid(3).unwrap();
    let cat = catenoid();
    for (d, n, c) in [(&p3, 3, 0.1), (&p3, 3, 1e-3), (&cat, 2, 0.1)] {
        let ta = numeric_ta(&Pipeline::normalized(d, c, 1e-10).unwrap(), &QuadratureSpec::default()).unwrap();
        let exact = total_abs_curvature(n, c).unwrap();
        assert!((ta / exact - 1.0).abs() <= 0.02, "{} {c}: {ta} vs {exact}", d.name);
    }
    let exact = 2.0 * PI * (3.0 * (0.6f64.sqrt() - 1.0) + 4.0);
    assert!((total_abs_curvature(3, 0.1).unwrap() - exact).abs() < 1e-12);
}

#[test]
fn obj_round_trip() {
    let empty = obj_string(&SurfaceMesh::empty(0.1));
    assert!(!empty.lines().any(|l| l.starts_with("v ") || l.starts_with("f ")));
    assert_eq!(obj_string(&parse_obj(&empty).unwrap()), empty);
    let two = obj_string(&ball_tri(2));
    assert_eq!(two.lines().filter(|l| l.starts_with("v ")).count(), 4);
    assert_eq!(two.lines().filter(|l| l.starts_with("f ")).count(), 2);
    assert_eq!(obj_string(&parse_obj(&two).unwrap()), two);
    assert!(two.contains("f 2 4 3"));

    let d = catenoid();
    let m = build_fundamental_mesh(&Pipeline::normalized(&d, 0.1, 1e-10).unwrap(), &grid(6)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.obj");
    export_obj(&m, &a).unwrap();
    let text = std::fs::read_to_string(&a).unwrap();
    let b = dir.path().join("b.obj");
    export_obj(&parse_obj(&text).unwrap(), &b).unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(export_obj(&m, &dir.path().join("missing/x.obj")).is_err());
}

#[test]
fn bad_obj() {
    assert!(parse_obj("v 1 2 3\n").is_err());
    assert!(parse_obj("# c 0.1\nf 1 2 3\n").is_err());
    assert!(parse_obj("# c 0.1\nv 0 0\n").is_err());
}
