//! Surfaces with ends at the vertices of a regular solid.
//!
//! One face center sits at `z = 0`, a vertex of that face on the positive real
//! axis. With `v` the monic polynomial of the finite vertices and `f` that of
//! the finite face centers, the Gauss map `G = z - N v/v'` fixes every vertex
//! and branches at the face centers, and `q = κ f^b/v²` has double poles with
//! unit leading coefficient at the vertices.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::algebra::{c, ExtC, Mat2C, C64};
use crate::error::{Error, Result};

use super::catalog::{end_loop, reflection};
use super::poly::{Poly, RationalMap};
use super::{Boundary, GaussMap, PieceSpec, PolyPath, WeierstrassData};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solid {
    Tetrahedron,
    Hexahedron,
    Octahedron,
    Dodecahedron,
    Icosahedron,
}

type V3 = [f64; 3];

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: V3, b: V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn unit(a: V3) -> V3 {
    let n = dot(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

fn signs(v: V3) -> Vec<V3> {
    let mut out: Vec<V3> = Vec::new();
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                let p = [v[0] * sx, v[1] * sy, v[2] * sz];
                if !out.iter().any(|q| dot([q[0] - p[0], q[1] - p[1], q[2] - p[2]], [q[0] - p[0], q[1] - p[1], q[2] - p[2]]) < 1e-20) {
                    out.push(p);
                }
            }
        }
    }
    out
}

fn cyclic(v: V3) -> Vec<V3> {
    [[v[0], v[1], v[2]], [v[1], v[2], v[0]], [v[2], v[0], v[1]]]
        .into_iter()
        .flat_map(signs)
        .collect()
}

fn cube() -> Vec<V3> {
    signs([1.0, 1.0, 1.0])
}

fn octa() -> Vec<V3> {
    cyclic([1.0, 0.0, 0.0])
}

fn icosa() -> Vec<V3> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    cyclic([0.0, 1.0, phi])
}

fn dodeca() -> Vec<V3> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut v = cube();
    v.extend(cyclic([0.0, 1.0 / phi, phi]));
    v
}

/// Face centers of [`dodeca`].
fn dodeca_faces() -> Vec<V3> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    cyclic([0.0, phi, 1.0])
}

/// Face centers of [`icosa`].
fn icosa_faces() -> Vec<V3> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut v = cube();
    v.extend(cyclic([0.0, phi, 1.0 / phi]));
    v
}

fn tetra() -> Vec<V3> {
    vec![[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]
}

impl Solid {
    pub const ALL: [Solid; 5] = [
        Solid::Tetrahedron,
        Solid::Hexahedron,
        Solid::Octahedron,
        Solid::Dodecahedron,
        Solid::Icosahedron,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Solid::Tetrahedron => "tetra",
            Solid::Hexahedron => "hexa",
            Solid::Octahedron => "octa",
            Solid::Dodecahedron => "dodeca",
            Solid::Icosahedron => "icosa",
        }
    }

    pub fn from_name(s: &str) -> Option<Solid> {
        match s {
            "tetra" | "tetrahedron" | "tetrahedra" => Some(Solid::Tetrahedron),
            "hexa" | "cube" | "hexahedron" | "hexahedra" => Some(Solid::Hexahedron),
            "octa" | "octahedron" | "octahedra" => Some(Solid::Octahedron),
            "dodeca" | "dodecahedron" | "dodecahedra" => Some(Solid::Dodecahedron),
            "icosa" | "icosahedron" | "icosahedra" => Some(Solid::Icosahedron),
            _ => None,
        }
    }

    /// `(m, n)`: edges per vertex and edges per face.
    pub fn symmetry(self) -> (usize, usize) {
        match self {
            Solid::Tetrahedron => (3, 3),
            Solid::Hexahedron => (3, 4),
            Solid::Octahedron => (4, 3),
            Solid::Dodecahedron => (3, 5),
            Solid::Icosahedron => (5, 3),
        }
    }

    /// Unit vertices and unit face centers.
    fn geometry(self) -> (Vec<V3>, Vec<V3>) {
        let (v, f) = match self {
            Solid::Tetrahedron => {
                let v = tetra();
                let f = v.iter().map(|p| [-p[0], -p[1], -p[2]]).collect();
                (v, f)
            }
            Solid::Hexahedron => (cube(), octa()),
            Solid::Octahedron => (octa(), cube()),
            Solid::Dodecahedron => (dodeca(), dodeca_faces()),
            Solid::Icosahedron => (icosa(), icosa_faces()),
        };
        (v.into_iter().map(unit).collect(), f.into_iter().map(unit).collect())
    }
}

fn stereo(p: V3) -> ExtC {
    if 1.0 - p[2] < 1e-9 {
        ExtC::Infinity
    } else {
        ExtC::Finite(c(p[0], p[1]) / (1.0 - p[2]))
    }
}

fn circle_through(a: C64, b: C64, d: C64) -> Option<(C64, f64)> {
    let (ab, ad) = (b - a, d - a);
    let den = 2.0 * (ab.conj() * ad).im;
    if den.abs() < 1e-12 {
        return None;
    }
    let center = a + (ad * ab.norm_sqr() - ab * ad.norm_sqr()) / C64::new(0.0, den);
    Some((center, (center - a).norm()))
}

/// Catalog entry for a regular solid.
pub fn platonic(solid: Solid) -> Result<WeierstrassData> {
    let (m, n) = solid.symmetry();
    let (verts, faces) = solid.geometry();
    let f0 = faces[0];
    let v1 = *verts
        .iter()
        .max_by(|a, b| dot(**a, f0).total_cmp(&dot(**b, f0)))
        .expect("vertices");
    let b3 = [-f0[0], -f0[1], -f0[2]];
    let t = dot(v1, b3);
    let b1 = unit([v1[0] - t * b3[0], v1[1] - t * b3[1], v1[2] - t * b3[2]]);
    let b2 = cross(b3, b1);
    let rot = |p: V3| [dot(b1, p), dot(b2, p), dot(b3, p)];
    let verts: Vec<V3> = verts.iter().map(|&p| rot(p)).collect();
    let faces: Vec<V3> = faces.iter().map(|&p| rot(p)).collect();
    let v1 = rot(v1);

    let nv = verts.len();
    let finite = |pts: &[V3]| pts.iter().filter_map(|&p| stereo(p).finite()).collect::<Vec<_>>();
    let vroots = finite(&verts);
    let froots = finite(&faces);
    let vpoly = Poly::from_roots(&vroots);
    let fpoly = Poly::from_roots(&froots);
    let dv = vpoly.deriv();
    let z = Poly::monomial(c(1.0, 0.0), 1);
    let gnum = z.mul(&dv).sub(&vpoly.scale(c(nv as f64, 0.0))).trimmed(1e-11);
    let gmap = RationalMap::new(gnum, dv.clone()).normalized();
    let b = (2 * nv - 4) / faces.len();
    let e1 = stereo(v1).finite().ok_or_else(|| Error::InvalidData("vertex at infinity".into()))?;
    let lead = fpoly.pow(b).eval(e1) / (dv.eval(e1) * dv.eval(e1));
    let kappa = c(1.0, 0.0) / lead;
    let q = RationalMap::new(fpoly.pow(b).scale(kappa), vpoly.pow(2));

    let nf = n as f64;
    let turn = C64::from_polar(1.0, PI / nf);
    let edge_rot = [
        (2.0 * PI / nf).cos() * v1[0],
        (2.0 * PI / nf).sin() * v1[0],
        v1[2],
    ];
    let v2 = *verts
        .iter()
        .min_by(|a, b| {
            let da = dot([a[0] - edge_rot[0], a[1] - edge_rot[1], a[2] - edge_rot[2]], [a[0] - edge_rot[0], a[1] - edge_rot[1], a[2] - edge_rot[2]]);
            let db = dot([b[0] - edge_rot[0], b[1] - edge_rot[1], b[2] - edge_rot[2]], [b[0] - edge_rot[0], b[1] - edge_rot[1], b[2] - edge_rot[2]]);
            da.total_cmp(&db)
        })
        .expect("vertices");
    let normal3 = unit(cross(v1, v2));
    let mid = stereo(unit([v1[0] + v2[0], v1[1] + v2[1], v1[2] + v2[2]]))
        .finite()
        .ok_or_else(|| Error::InvalidData("edge midpoint at infinity".into()))?;
    let sigma3 = super::sigma_from_normal(normal3)?;
    let z0 = e1 * 0.5;
    let w2 = turn * (0.5 * mid.norm());
    let reflections = vec![
        reflection((1, 1), Mat2C::identity(), [0.0, 1.0, 0.0], PolyPath::point(z0)),
        reflection(
            (2, 1),
            Mat2C::diag(turn, turn.conj()),
            [-(PI / nf).sin(), (PI / nf).cos(), 0.0],
            PolyPath::new(vec![z0, w2])?,
        ),
        reflection((3, 1), sigma3.inverse().conj(), normal3, PolyPath::new(vec![z0, mid])?),
    ];
    let mut loops = BTreeMap::new();
    let r = 0.5 * (e1 - z0).norm();
    loops.insert("end".to_string(), end_loop(&[z0, e1 - r], e1, 64)?);

    let e2 = stereo(v2).finite();
    let edge = match (e2, stereo([-v1[0], -v1[1], -v1[2]]).finite()) {
        (Some(e2), Some(anti)) => match circle_through(e1, e2, anti) {
            Some((center, radius)) => Boundary::Circle { center, radius },
            None => Boundary::Line { point: e1, dir: e2 - e1 },
        },
        (Some(e2), None) => Boundary::Line { point: e1, dir: e2 - e1 },
        _ => Boundary::Line { point: e1, dir: mid - e1 },
    };
    let edges = nv * m / 2;
    let piece = PieceSpec {
        end: e1,
        phi_range: (PI - PI / m as f64, PI),
        breakpoints: vec![(mid - e1).arg().rem_euclid(2.0 * PI)],
        boundaries: vec![
            Boundary::Line { point: C64::new(0.0, 0.0), dir: c(1.0, 0.0) },
            Boundary::Line { point: C64::new(0.0, 0.0), dir: turn },
            edge,
        ],
        multiplicity: 4 * edges,
        fixed_sides: vec![(PI, (1, 1))],
    };
    let punctures = verts.iter().map(|&p| stereo(p)).collect();
    Ok(WeierstrassData::new(
        format!("platonic({})", solid.name()),
        GaussMap::Rational(gmap),
        q,
        punctures,
        reflections,
        loops,
        z0,
    )
    .with_piece(piece)
    .with_symmetry((m, n)))
}
