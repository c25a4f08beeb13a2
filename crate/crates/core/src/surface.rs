//! Surface points `f = (1/|c|) F F*`, meshes of the fundamental piece, the
//! reflection orbit, numeric total absolute curvature and mesh export.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{hyperbolic_distance, to_ball, HermitianPoint, Mat2C, C64};
use crate::error::{Error, Result};
use crate::nullcurve::{integrate, surface_point, Sample};
use crate::periodkill::{normalize, ReflectionRep};
use crate::quad::gauss_legendre01;
use crate::wdata::{metric_dsg, PieceSpec, PolyPath, WeierstrassData};

/// `F = F̌ g` with `F̌(z0) = I`, ready to be sampled anywhere in the piece.
#[derive(Clone, Debug)]
pub struct Pipeline<'a> {
    pub data: &'a WeierstrassData,
    pub c: f64,
    pub tol: f64,
    pub gauge: Mat2C,
    pub rep: Option<ReflectionRep>,
}

impl<'a> Pipeline<'a> {
    /// Gauge from the normalization Steps II-III.
    pub fn normalized(data: &'a WeierstrassData, c: f64, tol: f64) -> Result<Self> {
        let rep = normalize(data, c, tol)?;
        Ok(Pipeline { data, c, tol, gauge: rep.gauge, rep: Some(rep) })
    }

    /// `F(z0) = I`, no further normalization.
    pub fn base(data: &'a WeierstrassData, c: f64, tol: f64) -> Self {
        Pipeline { data, c, tol, gauge: Mat2C::identity(), rep: None }
    }

    fn piece(&self) -> Result<&'a PieceSpec> {
        self.data
            .piece
            .as_ref()
            .ok_or_else(|| Error::InvalidData(format!("{} has no fundamental piece", self.data.name)))
    }

    fn regauged(&self, s: &Sample) -> Sample {
        Sample { z: s.z, f: s.f * self.gauge, dir: s.dir * self.gauge }
    }

    /// Values at `end + r e^{iφ}` for every angle and its radii, integrated
    /// along a tree: basepoint, an arc of constant radius, then the rays.
    pub fn polar_values(&self, angles: &[f64], radii: &[Vec<f64>]) -> Result<Vec<Vec<Sample>>> {
        let piece = self.piece()?;
        let d = self.data;
        let z0 = d.basepoint;
        let e = piece.end;
        let r0 = (z0 - e).norm();
        let phi0 = (z0 - e).arg();
        let unwrap = |phi: f64| phi0 + (phi - phi0 + PI).rem_euclid(2.0 * PI) - PI;
        let rmin_boundary = angles.iter().map(|&p| piece.radius(p)).fold(f64::INFINITY, f64::min);
        let hub = 0.9 * r0.min(rmin_boundary);
        let stem = if (hub - r0).abs() > 1e-14 { vec![z0, piece.point(hub, phi0)] } else { vec![z0] };

        // Arc samples for every requested angle, walking away from phi0 on each side.
        let mut hub_samples: Vec<Option<Sample>> = vec![None; angles.len()];
        for side in [1.0, -1.0] {
            let mut idx: Vec<usize> = (0..angles.len())
                .filter(|&k| {
                    let t = unwrap(angles[k]) - phi0;
                    if side > 0.0 { t >= 0.0 } else { t < 0.0 }
                })
                .collect();
            idx.sort_by(|&a, &b| ((unwrap(angles[a]) - phi0).abs()).total_cmp(&(unwrap(angles[b]) - phi0).abs()));
            if idx.is_empty() {
                continue;
            }
            let mut pts = stem.clone();
            let mut marks = Vec::with_capacity(idx.len());
            let mut cur = phi0;
            for &k in &idx {
                let target = unwrap(angles[k]);
                let steps = ((target - cur).abs() / 0.05).ceil() as usize;
                for s in 1..=steps {
                    pts.push(piece.point(hub, cur + (target - cur) * s as f64 / steps as f64));
                }
                cur = target;
                marks.push(pts.len() - 1);
            }
            let mut dedup: Vec<C64> = Vec::with_capacity(pts.len());
            let mut remap = Vec::with_capacity(pts.len());
            for p in pts {
                if dedup.last() != Some(&p) {
                    dedup.push(p);
                }
                remap.push(dedup.len() - 1);
            }
            let sol = integrate(d, self.c, &PolyPath::new(dedup)?, Mat2C::identity(), self.tol)?;
            for (&k, &m) in idx.iter().zip(&marks) {
                hub_samples[k] = Some(*sol.at_waypoint(remap[m]));
            }
        }

        (0..angles.len())
            .into_par_iter()
            .map(|k| {
                let start = hub_samples[k].expect("every angle sampled");
                let phi = angles[k];
                let mut out = vec![start; radii[k].len()];
                let mut outward: Vec<(usize, f64)> = Vec::new();
                let mut inward: Vec<(usize, f64)> = Vec::new();
                for (i, &r) in radii[k].iter().enumerate() {
                    if (r - hub).abs() <= 1e-14 * hub {
                        continue;
                    } else if r > hub {
                        outward.push((i, r));
                    } else {
                        inward.push((i, r));
                    }
                }
                outward.sort_by(|a, b| a.1.total_cmp(&b.1));
                inward.sort_by(|a, b| b.1.total_cmp(&a.1));
                for list in [outward, inward] {
                    if list.is_empty() {
                        continue;
                    }
                    let mut pts = vec![start.z];
                    let mut slots = Vec::new();
                    for &(i, r) in &list {
                        let p = piece.point(r, phi);
                        if pts.last() != Some(&p) {
                            pts.push(p);
                        }
                        slots.push((i, pts.len() - 1));
                    }
                    let sol = integrate(d, self.c, &PolyPath::new(pts)?, start.f, self.tol)?;
                    for (i, w) in slots {
                        out[i] = *sol.at_waypoint(w);
                    }
                }
                Ok(out.iter().map(|s| self.regauged(s)).collect())
            })
            .collect()
    }
}

/// Where the grid stops near the end: the radius at which the circumference
/// `2πr·ds_G` reaches `cutoff`.
pub fn truncation_radius(d: &WeierstrassData, piece: &PieceSpec, cutoff: f64) -> Result<f64> {
    let mid = 0.5 * (piece.phi_range.0 + piece.phi_range.1);
    let rmax = piece.radius(mid);
    let circ = |r: f64| -> Result<f64> { Ok(2.0 * PI * r * metric_dsg(d, piece.point(r, mid))?.sqrt()) };
    if circ(0.5 * rmax)? >= cutoff {
        return Ok(0.5 * rmax);
    }
    let (mut lo, mut hi) = ((1e-12f64).ln(), (0.5 * rmax).ln());
    if circ(lo.exp())? < cutoff {
        return Err(Error::Accuracy(format!("circumference never reaches {cutoff}")));
    }
    for _ in 0..80 {
        let m = 0.5 * (lo + hi);
        if circ(m.exp())? >= cutoff {
            lo = m;
        } else {
            hi = m;
        }
    }
    Ok(lo.exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub n_radial: usize,
    pub n_angular: usize,
    /// Circumference (in `ds_G`) at which ends are cut off.
    pub cutoff: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { n_radial: 32, n_angular: 32, cutoff: 20.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub surface: String,
    pub c: f64,
    pub lambda: Vec<f64>,
    /// Reflection words applied to the fundamental piece, one per copy.
    pub words: Vec<Vec<(usize, usize)>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceMesh {
    pub vertices: Vec<HermitianPoint>,
    /// Poincaré ball coordinates, radius `1/|c|`.
    pub ball: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
    pub domain: Vec<C64>,
    pub provenance: Provenance,
    /// Largest relative mismatch between edge lengths and the conformal metric.
    pub conformality: f64,
}

impl SurfaceMesh {
    pub fn empty(c: f64) -> Self {
        SurfaceMesh {
            vertices: vec![],
            ball: vec![],
            faces: vec![],
            domain: vec![],
            provenance: Provenance { surface: String::new(), c, lambda: vec![], words: vec![] },
            conformality: 0.0,
        }
    }

    fn from_points(points: Vec<HermitianPoint>, domain: Vec<C64>, faces: Vec<[usize; 3]>, provenance: Provenance) -> Result<Self> {
        let ball = points.iter().map(|p| to_ball(p).map(|b| b.y)).collect::<Result<Vec<_>>>()?;
        let mut mesh = SurfaceMesh { vertices: points, ball, faces: vec![], domain, provenance, conformality: 0.0 };
        mesh.faces = faces.into_iter().filter(|f| triangle_area(&mesh.ball, f) > 1e-14).collect();
        Ok(mesh)
    }

    /// Largest `|det X - 1/c²|·c²` over the vertices.
    pub fn det_defect(&self) -> f64 {
        self.vertices
            .iter()
            .map(|p| (p.x.det().re * p.c * p.c - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

fn triangle_area(ball: &[[f64; 3]], f: &[usize; 3]) -> f64 {
    let [a, b, c] = f.map(|i| ball[i]);
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let w = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
    0.5 * (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt()
}

/// Density `(|M₁₂| + |M₂₁|)` of the surface metric, `M = F⁻¹ α F`.
fn metric_density(s: &Sample) -> f64 {
    let m = s.f.inverse() * s.dir;
    m.a12.norm() + m.a21.norm()
}

/// Angular range of the truncated piece. A side that is a curve through the
/// end leaves `R(φ) → 0` at that angle; those angles are dropped where
/// `R(φ) < 2 r_cut`, since the truncated piece is empty there.
fn mesh_angles(piece: &PieceSpec, rcut: f64) -> Result<(f64, f64)> {
    let (a, b) = piece.phi_range;
    let wide = |phi: f64| piece.radius(phi) >= 2.0 * rcut;
    let mid = 0.5 * (a + b);
    if !wide(mid) {
        return Err(Error::InvalidData("fundamental piece lies inside the end truncation".into()));
    }
    let clip = |edge: f64| {
        if wide(edge) {
            return edge;
        }
        let (mut bad, mut good) = (edge, mid);
        for _ in 0..60 {
            let m = 0.5 * (bad + good);
            if wide(m) {
                good = m;
            } else {
                bad = m;
            }
        }
        good
    };
    Ok((clip(a), clip(b)))
}

/// Triangulated fundamental piece on a log-polar grid around its end.
pub fn build_fundamental_mesh(p: &Pipeline, grid: &GridSpec) -> Result<SurfaceMesh> {
    let piece = p.piece()?;
    if grid.n_radial < 2 || grid.n_angular < 2 {
        return Err(Error::InvalidData("grid needs at least 2x2 vertices".into()));
    }
    let rcut = truncation_radius(p.data, piece, grid.cutoff)?;
    let (a, b) = mesh_angles(piece, rcut)?;
    let angles: Vec<f64> = (0..grid.n_angular).map(|j| a + (b - a) * j as f64 / (grid.n_angular - 1) as f64).collect();
    let radii: Vec<Vec<f64>> = angles
        .iter()
        .map(|&phi| {
            let outer = piece.radius(phi);
            let inner = rcut;
            (0..grid.n_radial)
                .map(|i| inner * (outer / inner).powf(i as f64 / (grid.n_radial - 1) as f64))
                .collect()
        })
        .collect();
    let values = p.polar_values(&angles, &radii)?;
    let nr = grid.n_radial;
    let mut points = Vec::with_capacity(nr * angles.len());
    let mut domain = Vec::with_capacity(points.capacity());
    for col in &values {
        for s in col {
            points.push(surface_point(&s.f, p.c)?);
            domain.push(s.z);
        }
    }
    let id = |j: usize, i: usize| j * nr + i;
    let mut faces = Vec::new();
    for j in 0..angles.len() - 1 {
        for i in 0..nr - 1 {
            faces.push([id(j, i), id(j, i + 1), id(j + 1, i + 1)]);
            faces.push([id(j, i), id(j + 1, i + 1), id(j + 1, i)]);
        }
    }
    // Radial edges: hyperbolic length against the metric integrated by the trapezoid rule in log r.
    let mut conformality = 0.0f64;
    for (j, col) in values.iter().enumerate() {
        for i in 1..nr - 1 {
            let (s0, s1) = (&col[i], &col[i + 1]);
            let len = hyperbolic_distance(&points[id(j, i)], &points[id(j, i + 1)]);
            let (r0, r1) = (radii[j][i], radii[j][i + 1]);
            let t = (r1 / r0).ln();
            let expect = 0.5 * t * (metric_density(s0) * r0 + metric_density(s1) * r1);
            if expect > 0.0 {
                conformality = conformality.max((len / expect - 1.0).abs());
            }
        }
    }
    let provenance = Provenance { surface: p.data.name.clone(), c: p.c, lambda: vec![], words: vec![vec![]] };
    let mut mesh = SurfaceMesh::from_points(points, domain, faces, provenance)?;
    mesh.conformality = conformality;
    Ok(mesh)
}

/// [`build_fundamental_mesh`], doubling the grid until the conformality
/// check passes (at most `max_doublings` times).
pub fn build_checked_mesh(p: &Pipeline, grid: &GridSpec, max_doublings: usize) -> Result<SurfaceMesh> {
    let mut g = *grid;
    for _ in 0..=max_doublings {
        let mesh = build_fundamental_mesh(p, &g)?;
        if mesh.conformality <= CONFORMALITY_TOL {
            return Ok(mesh);
        }
        g.n_radial *= 2;
        g.n_angular *= 2;
    }
    Err(Error::Accuracy(format!("conformality above {CONFORMALITY_TOL} after {max_doublings} doublings")))
}

pub const CONFORMALITY_TOL: f64 = 0.02;

/// Isometry `X ↦ A X A*` or `X ↦ A conj(X) A*` of the Hermitian model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isometry {
    pub a: Mat2C,
    pub flip: bool,
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry { a: Mat2C::identity(), flip: false }
    }

    /// The reflection `X ↦ conj(σ⁻¹ X σ⁻¹*)` induced by a symmetry plane.
    pub fn reflection(sigma: &Mat2C) -> Self {
        Isometry { a: sigma.inverse().conj(), flip: true }
    }

    pub fn apply(&self, x: &Mat2C) -> Mat2C {
        let y = if self.flip { x.conj() } else { *x };
        self.a * y * self.a.adjoint()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let inner = if self.flip { other.a.conj() } else { other.a };
        Isometry { a: self.a * inner, flip: self.flip != other.flip }
    }
}

/// Images of the mesh under all words of length `≤ depth` in the reflections,
/// dropping copies that coincide vertex-wise within 1e-8 (relative).
pub fn reflect_orbit(mesh: &SurfaceMesh, reflections: &[((usize, usize), Mat2C)], depth: usize) -> Result<SurfaceMesh> {
    let n = mesh.vertices.len();
    let scale = 1.0 / mesh.provenance.c.abs();
    let mut copies: Vec<(Vec<(usize, usize)>, Isometry, Vec<Mat2C>)> =
        vec![(vec![], Isometry::identity(), mesh.vertices.iter().map(|p| p.x).collect())];
    let mut frontier = vec![0usize];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &k in &frontier {
            for (label, sigma) in reflections {
                let r = Isometry::reflection(sigma);
                let (word, iso, _) = &copies[k];
                let new_iso = r.compose(iso);
                let pts: Vec<Mat2C> = mesh.vertices.iter().map(|p| new_iso.apply(&p.x)).collect();
                let dup = copies.iter().any(|(_, _, q)| {
                    q.iter().zip(&pts).all(|(a, b)| a.dist(b) <= 1e-8 * (scale + a.norm()))
                });
                if !dup {
                    let mut w = vec![*label];
                    w.extend(word.iter().copied());
                    copies.push((w, new_iso, pts));
                    next.push(copies.len() - 1);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    let c = mesh.provenance.c;
    let mut points = Vec::with_capacity(n * copies.len());
    let mut domain = Vec::with_capacity(points.capacity());
    let mut faces = Vec::with_capacity(mesh.faces.len() * copies.len());
    let mut words = Vec::with_capacity(copies.len());
    for (k, (word, iso, pts)) in copies.into_iter().enumerate() {
        let off = k * n;
        points.extend(pts.into_iter().map(|x| HermitianPoint { x, c }));
        domain.extend(mesh.domain.iter().copied());
        // Orientation-reversing copies get their triangles flipped.
        faces.extend(mesh.faces.iter().map(|f| {
            if iso.flip { [f[0] + off, f[2] + off, f[1] + off] } else { [f[0] + off, f[1] + off, f[2] + off] }
        }));
        words.push(word);
    }
    let provenance = Provenance { words, ..mesh.provenance.clone() };
    let mut out = SurfaceMesh::from_points(points, domain, faces, provenance)?;
    out.conformality = mesh.conformality;
    Ok(out)
}

/// Largest vertex displacement of the piece under `(R_a R_b)^m`, relative to `1/|c|`.
pub fn relation_defect(mesh: &SurfaceMesh, a: &Mat2C, b: &Mat2C, m: usize) -> f64 {
    let step = Isometry::reflection(a).compose(&Isometry::reflection(b));
    let mut w = Isometry::identity();
    for _ in 0..m {
        w = step.compose(&w);
    }
    let scale = 1.0 / mesh.provenance.c.abs();
    mesh.vertices.iter().map(|p| w.apply(&p.x).dist(&p.x) / (scale + p.x.norm())).fold(0.0, f64::max)
}

/// Reflection data of the symmetry planes, for [`reflect_orbit`].
pub fn orbit_generators(d: &WeierstrassData) -> Vec<((usize, usize), Mat2C)> {
    d.reflections.iter().map(|r| (r.label, r.sigma)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureSpec {
    /// Gauss–Legendre points per angular segment, in each direction.
    pub points: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { points: 20 }
    }
}

/// Inner radius of the quadrature, relative to the piece. Closer to the end
/// `F` is too ill-conditioned to integrate at `1e-10`; the cap left out has
/// area `O(r^2μ)` on the sphere.
pub const TA_INNER: f64 = 2e-3;

/// `∫ dσ²` over the surface: the density `4|q|²/(|M₁₂| + |M₂₁|)²` integrated
/// over the fundamental piece with `r = R(φ)(ε + (1-ε)u²)`, times the multiplicity.
pub fn numeric_ta(p: &Pipeline, spec: &QuadratureSpec) -> Result<f64> {
    let piece = p.piece()?;
    let gl = gauss_legendre01(spec.points);
    let mut angles = Vec::new();
    let mut weights = Vec::new();
    for (a, b) in piece.angular_segments() {
        for &(x, w) in &gl {
            angles.push(a + (b - a) * x);
            weights.push((b - a) * w);
        }
    }
    let radii: Vec<Vec<f64>> =
        angles.iter().map(|&phi| gl.iter().map(|&(u, _)| ta_radius(piece.radius(phi), u)).collect()).collect();
    let values = p.polar_values(&angles, &radii)?;
    let mut total = 0.0;
    for (k, col) in values.iter().enumerate() {
        let big_r = piece.radius(angles[k]);
        for (i, s) in col.iter().enumerate() {
            let (u, wu) = gl[i];
            let r = ta_radius(big_r, u);
            let q = p.data.q_at(s.z).norm();
            let m = metric_density(s);
            let density = 4.0 * q * q / (m * m);
            // dA = r dr dφ.
            total += weights[k] * wu * density * r * 2.0 * big_r * (1.0 - TA_INNER) * u;
        }
    }
    Ok(total * piece.multiplicity as f64)
}

fn ta_radius(big_r: f64, u: f64) -> f64 {
    big_r * (TA_INNER + (1.0 - TA_INNER) * u * u)
}

/// `2y` for ball coordinates `y`, which tends to the minimal immersion as `c → 0`.
pub fn rescaled_ball(mesh: &SurfaceMesh) -> Vec<[f64; 3]> {
    mesh.ball.iter().map(|y| [2.0 * y[0], 2.0 * y[1], 2.0 * y[2]]).collect()
}

fn fmt_f(x: f64) -> String {
    // Shortest round-trip form, with negative zero folded to zero.
    if x == 0.0 { "0".into() } else { format!("{x:?}") }
}

/// ASCII OBJ in Poincaré ball coordinates, 1-indexed faces.
pub fn obj_string(mesh: &SurfaceMesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# cmcforge mesh");
    let _ = writeln!(s, "# c {}", fmt_f(mesh.provenance.c));
    for y in &mesh.ball {
        let _ = writeln!(s, "v {} {} {}", fmt_f(y[0]), fmt_f(y[1]), fmt_f(y[2]));
    }
    for f in &mesh.faces {
        let _ = writeln!(s, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    s
}

pub fn export_obj(mesh: &SurfaceMesh, path: &Path) -> Result<()> {
    std::fs::write(path, obj_string(mesh))?;
    Ok(())
}

/// Reads what [`obj_string`] writes; vertices are rebuilt from ball coordinates.
pub fn parse_obj(text: &str) -> Result<SurfaceMesh> {
    let mut c = None;
    let mut ball = Vec::new();
    let mut faces = Vec::new();
    let bad = |l: &str| Error::InvalidData(format!("bad OBJ line `{l}`"));
    for line in text.lines() {
        let mut it = line.split_whitespace();
        match it.next() {
            Some("#") => {
                if it.next() == Some("c") {
                    c = Some(it.next().and_then(|v| v.parse::<f64>().ok()).ok_or_else(|| bad(line))?);
                }
            }
            Some("v") => {
                let v: Vec<f64> = it.map(|x| x.parse::<f64>().map_err(|_| bad(line))).collect::<Result<_>>()?;
                if v.len() != 3 {
                    return Err(bad(line));
                }
                ball.push([v[0], v[1], v[2]]);
            }
            Some("f") => {
                let f: Vec<usize> = it.map(|x| x.parse::<usize>().map_err(|_| bad(line))).collect::<Result<_>>()?;
                if f.len() != 3 || f.iter().any(|&i| i == 0) {
                    return Err(bad(line));
                }
                faces.push([f[0] - 1, f[1] - 1, f[2] - 1]);
            }
            None => {}
            Some(_) => return Err(bad(line)),
        }
    }
    let c = c.ok_or_else(|| Error::InvalidData("OBJ lacks the `# c` header".into()))?;
    if faces.iter().flatten().any(|&i| i >= ball.len()) {
        return Err(Error::InvalidData("face index out of range".into()));
    }
    let vertices = ball
        .iter()
        .map(|y| crate::algebra::from_ball(&crate::algebra::BallPoint { y: *y, radius: 1.0 / c.abs() }, c))
        .collect::<Result<Vec<_>>>()?;
    let mut mesh = SurfaceMesh::empty(c);
    mesh.domain = vec![C64::new(f64::NAN, f64::NAN); vertices.len()];
    mesh.vertices = vertices;
    mesh.ball = ball;
    mesh.faces = faces;
    Ok(mesh)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeshStats {
    pub vertices: usize,
    pub faces: usize,
    pub copies: usize,
    pub det_defect: f64,
    pub conformality: f64,
}

impl MeshStats {
    pub fn of(mesh: &SurfaceMesh) -> Self {
        MeshStats {
            vertices: mesh.vertices.len(),
            faces: mesh.faces.len(),
            copies: mesh.provenance.words.len(),
            det_defect: mesh.det_defect(),
            conformality: mesh.conformality,
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn export_json<T: Serialize>(report: &T, path: &Path) -> Result<()> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

#[cfg(test)]
mod tests;
