//! Weierstrass data on a punctured sphere: Gauss map, Hopf density, ends,
//! reflections and loops, with metrics, Schwarzians and Euclidean
//! Weierstrass integrals.

mod catalog;
mod platonic;
pub mod poly;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::algebra::{c, cser, mobius_raw, ExtC, Mat2C, C64, I, ONE};
use crate::error::{Error, Result};
use crate::quad::integrate_polygon;
use poly::{schwarzian_of_jet, series_div, series_mul, to4, Poly, RationalMap};

pub use catalog::{catalog, catalog_names, catenoid, enneper, noid};
pub use platonic::{platonic, Solid};

/// Default tolerance of path integrals.
pub const QUAD_TOL: f64 = 1e-11;

/// Hyperbolic Gauss map: rational, or the closed-form `tanh z`.
#[derive(Clone, Debug, PartialEq)]
pub enum GaussMap {
    Rational(RationalMap),
    Tanh,
}

impl GaussMap {
    pub fn eval(&self, z: C64) -> ExtC {
        match self {
            GaussMap::Rational(r) => r.eval_ext(ExtC::Finite(z)),
            GaussMap::Tanh => ExtC::from_ratio(z.sinh(), z.cosh()),
        }
    }

    /// Taylor coefficients at `z`; `None` at a pole.
    pub fn jet(&self, z: C64) -> Option<[C64; 4]> {
        let (num, den) = match self {
            GaussMap::Rational(r) => (to4(&r.num.taylor(z, 4)), to4(&r.den.taylor(z, 4))),
            GaussMap::Tanh => (sinh_jet(z), cosh_jet(z)),
        };
        if den[0].norm() < 1e-300 {
            return None;
        }
        Some(series_div(&num, &den))
    }

    pub fn as_rational(&self) -> Option<&RationalMap> {
        match self {
            GaussMap::Rational(r) => Some(r),
            GaussMap::Tanh => None,
        }
    }
}

fn sinh_jet(z: C64) -> [C64; 4] {
    let (s, ch) = (z.sinh(), z.cosh());
    [s, ch, s / 2.0, ch / 6.0]
}

fn cosh_jet(z: C64) -> [C64; 4] {
    let (s, ch) = (z.sinh(), z.cosh());
    [ch, s, ch / 2.0, s / 6.0]
}

/// Taylor coefficients turned into derivatives.
fn jet_to_derivs(j: &[C64; 4]) -> [C64; 4] {
    [j[0], j[1], j[2] * 2.0, j[3] * 6.0]
}

/// The coefficient field `α = [[G, -G²], [1, -G]]·(q/G')` of the null-curve
/// equation `dF = c α F dz`.
#[derive(Clone, Debug)]
pub enum AlphaField {
    /// `α = (a/e)·[[n d, -n²], [d², -n d]]` with `G = n/d`. Near a common
    /// zero `p` of `a` and `e` the quotient is taken from their expansions in
    /// `z - p` with the shared order removed.
    Rational { a: Poly, e: Poly, n: Poly, d: Poly, singular: Vec<C64>, removable: Vec<(C64, Poly, Poly)> },
    /// `α = q·[[sinh cosh, -sinh²], [cosh², -sinh cosh]]`.
    Tanh { q: RationalMap, singular: Vec<C64> },
}

impl AlphaField {
    pub fn new(g: &GaussMap, q: &RationalMap) -> Self {
        match g {
            GaussMap::Rational(g) => {
                let g = g.normalized();
                let w = g.wronskian();
                // Common zeros are not divided out: deflating by approximate
                // multiple roots perturbs the coefficients at the √ε level.
                let a = q.num.clone();
                let e = q.den.mul(&w);
                let zeros = a.root_clusters();
                let mut removable = Vec::new();
                let mut candidates = Vec::new();
                for (p, k) in e.root_clusters() {
                    let shared = zeros
                        .iter()
                        .filter(|(r, _)| (r - p).norm() <= poly::CLUSTER_TOL * (1.0 + p.norm()))
                        .map(|(_, j)| *j)
                        .sum::<usize>()
                        .min(k);
                    if shared > 0 {
                        let local = |f: &Poly| Poly::new(f.taylor(p, f.degree().unwrap_or(0) + 1).split_off(shared));
                        removable.push((p, local(&a), local(&e)));
                    }
                    if shared < k {
                        candidates.push(p);
                    }
                }
                let mut field = AlphaField::Rational { a, e, n: g.num, d: g.den, singular: vec![], removable };
                let singular = candidates.into_iter().filter(|&p| field.blows_up(p)).collect();
                if let AlphaField::Rational { singular: s, .. } = &mut field {
                    *s = singular;
                }
                return field;
            }
            GaussMap::Tanh => {
                let q = q.normalized();
                let singular = q.den.root_clusters().into_iter().map(|(p, _)| p).collect();
                AlphaField::Tanh { q, singular }
            }
        }
    }

    /// `(a, e, w)` with `a/e` to be evaluated at `w`.
    fn quotient<'s>(a: &'s Poly, e: &'s Poly, removable: &'s [(C64, Poly, Poly)], z: C64) -> (&'s Poly, &'s Poly, C64) {
        for (p, la, le) in removable {
            if (z - p).norm() < 1e-6 * (1.0 + p.norm()) {
                return (la, le, z - p);
            }
        }
        (a, e, z)
    }

    /// Whether `|α|` grows like a pole towards `p`: removable cancellations
    /// keep it bounded.
    fn blows_up(&self, p: C64) -> bool {
        let r = 1e-4 * (1.0 + p.norm());
        let probe = |t: f64| {
            (0..4)
                .map(|k| self.eval(p + C64::from_polar(t, 0.3 + k as f64 * std::f64::consts::FRAC_PI_2)).norm())
                .fold(0.0, f64::max)
        };
        let (near, far) = (probe(r / 10.0), probe(r));
        !near.is_finite() || near > 5.0 * far
    }

    /// Finite points where `α` has a pole.
    pub fn singular_points(&self) -> &[C64] {
        match self {
            AlphaField::Rational { singular, .. } | AlphaField::Tanh { singular, .. } => singular,
        }
    }

    pub fn eval(&self, z: C64) -> Mat2C {
        match self {
            AlphaField::Rational { a, e, n, d, removable, .. } => {
                let (a, e, w) = Self::quotient(a, e, removable, z);
                let s = a.eval(w) / e.eval(w);
                let (n, d) = (n.eval(z), d.eval(z));
                let nd = s * n * d;
                Mat2C::new(nd, -s * n * n, s * d * d, -nd)
            }
            AlphaField::Tanh { q, .. } => {
                let s = q.eval(z);
                let (sh, ch) = (z.sinh(), z.cosh());
                let sc = s * sh * ch;
                Mat2C::new(sc, -s * sh * sh, s * ch * ch, -sc)
            }
        }
    }

    /// `α, α', α'', α'''` at `z`.
    pub fn jets(&self, z: C64) -> [Mat2C; 4] {
        let (s, u, v) = match self {
            AlphaField::Rational { a, e, n, d, removable, .. } => {
                let (a, e, w) = Self::quotient(a, e, removable, z);
                (series_div(&to4(&a.taylor(w, 4)), &to4(&e.taylor(w, 4))), to4(&n.taylor(z, 4)), to4(&d.taylor(z, 4)))
            }
            AlphaField::Tanh { q, .. } => (q.jet(z), sinh_jet(z), cosh_jet(z)),
        };
        let uv = jet_to_derivs(&series_mul(&s, &series_mul(&u, &v)));
        let uu = jet_to_derivs(&series_mul(&s, &series_mul(&u, &u)));
        let vv = jet_to_derivs(&series_mul(&s, &series_mul(&v, &v)));
        std::array::from_fn(|k| Mat2C::new(uv[k], -uu[k], vv[k], -uv[k]))
    }
}

/// Polygonal path; closed paths repeat the first point at the end.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyPath {
    #[serde(with = "cser::vec")]
    pub points: Vec<C64>,
    pub closed: bool,
}

impl PolyPath {
    pub fn new(points: Vec<C64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Path("empty path".into()));
        }
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Path("consecutive waypoints coincide".into()));
        }
        let closed = points.len() > 1 && points[0] == points[points.len() - 1];
        Ok(PolyPath { points, closed })
    }

    /// Drop repeated consecutive points, then build.
    pub fn through(points: impl IntoIterator<Item = C64>) -> Result<Self> {
        let mut v: Vec<C64> = Vec::new();
        for p in points {
            if v.last() != Some(&p) {
                v.push(p);
            }
        }
        PolyPath::new(v)
    }

    pub fn point(z: C64) -> Self {
        PolyPath { points: vec![z], closed: false }
    }

    pub fn start(&self) -> C64 {
        self.points[0]
    }

    pub fn end(&self) -> C64 {
        self.points[self.points.len() - 1]
    }

    pub fn reversed(&self) -> Self {
        let mut p = self.points.clone();
        p.reverse();
        PolyPath { points: p, closed: self.closed }
    }

    /// This path followed by `other`, which must start where this one ends.
    pub fn then(&self, other: &PolyPath) -> Result<Self> {
        if (self.end() - other.start()).norm() > 1e-14 {
            return Err(Error::Path("paths do not connect".into()));
        }
        PolyPath::through(self.points.iter().chain(other.points.iter().skip(1)).copied())
    }

    /// The closed path traversed `k` times.
    pub fn repeated(&self, k: usize) -> Result<Self> {
        let mut p = self.points.clone();
        for _ in 1..k {
            p.extend(self.points.iter().skip(1));
        }
        PolyPath::new(p)
    }

    /// Counter-clockwise polygon of `k` sides around `center` starting at `start`.
    pub fn circle(center: C64, start: C64, k: usize) -> Result<Self> {
        let r = start - center;
        let mut pts: Vec<C64> = (0..k)
            .map(|j| center + r * C64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / k as f64))
            .collect();
        pts.push(start);
        PolyPath::new(pts)
    }
}

/// Reject segments that pass too close to a singular point: closer than 1/20
/// of the nearer endpoint's distance, or than 1e-12.
pub fn check_clearance(points: &[C64], singular: &[C64]) -> Result<()> {
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        for &p in singular {
            let ab = b - a;
            let t = (((p - a) * ab.conj()).re / ab.norm_sqr()).clamp(0.0, 1.0);
            let dist = (a + ab * t - p).norm();
            let ends = (a - p).norm().min((b - p).norm());
            if dist < 1e-12 || dist < 0.05 * ends {
                return Err(Error::Path(format!(
                    "segment {a} -> {b} passes within {dist:e} of singular point {p}"
                )));
            }
        }
    }
    if let Some(p) = points.iter().find(|z| singular.iter().any(|s| (*s - **z).norm() < 1e-12)) {
        return Err(Error::SingularPoint(format!("{p}")));
    }
    Ok(())
}

/// Anti-holomorphic involution `z ↦ m(z̄)` together with its SU(2) matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reflection {
    pub label: (usize, usize),
    pub mobius: Mat2C,
    pub sigma: Mat2C,
    pub normal: Option<[f64; 3]>,
    /// Path from the basepoint to a fixed point of the involution.
    pub anchor: PolyPath,
}

impl Reflection {
    pub fn apply(&self, z: C64) -> ExtC {
        mobius_raw(&self.mobius, ExtC::Finite(z.conj()))
    }

    /// Finite image, or an error at the pole of the map.
    pub fn apply_finite(&self, z: C64) -> Result<C64> {
        self.apply(z).finite().ok_or_else(|| Error::SingularPoint(format!("{z} maps to ∞")))
    }

    /// `m'` at `z̄`, so that the pull-back of `q dz²` is `conj(q∘μ · m'(z̄)²)`.
    pub fn map_derivative(&self, z: C64) -> C64 {
        let m = &self.mobius;
        let w = m.a21 * z.conj() + m.a22;
        m.det() / (w * w)
    }

    /// Fixed point reached by the anchor path.
    pub fn anchor_point(&self) -> C64 {
        self.anchor.end()
    }
}

/// `σ` with `σ⁻¹ = [[ν2 + iν1, -iν3], [-iν3, ν2 - iν1]]`.
pub fn sigma_from_normal(nu: [f64; 3]) -> Result<Mat2C> {
    let len = (nu[0] * nu[0] + nu[1] * nu[1] + nu[2] * nu[2]).sqrt();
    if (len - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitNormal(len));
    }
    let inv = Mat2C::new(c(nu[1], nu[0]), c(0.0, -nu[2]), c(0.0, -nu[2]), c(nu[1], -nu[0]));
    Ok(inv.adj())
}

/// Boundary curve of a fundamental piece, in the coordinate chart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Boundary {
    Line {
        #[serde(with = "cser")]
        point: C64,
        #[serde(with = "cser")]
        dir: C64,
    },
    Circle {
        #[serde(with = "cser")]
        center: C64,
        radius: f64,
    },
}

impl Boundary {
    /// Smallest positive `r` with `end + r e^{iφ}` on the curve.
    fn hit(&self, end: C64, phi: f64) -> Option<f64> {
        let u = C64::from_polar(1.0, phi);
        let eps = 1e-9;
        match *self {
            Boundary::Line { point, dir } => {
                let den = (dir.conj() * u).im;
                if den.abs() < 1e-14 {
                    return None;
                }
                let r = -(dir.conj() * (end - point)).im / den;
                (r > eps).then_some(r)
            }
            Boundary::Circle { center, radius } => {
                let b = (u.conj() * (end - center)).re;
                let k = (end - center).norm_sqr() - radius * radius;
                let disc = b * b - k;
                if disc < 0.0 {
                    return None;
                }
                let s = disc.sqrt();
                [-b - s, -b + s].into_iter().filter(|&r| r > eps * (1.0 + radius)).reduce(f64::min)
            }
        }
    }
}

/// Fundamental piece described in polar coordinates `z = end + r e^{iφ}`
/// around one end: `φ` in `phi_range`, `0 < r < radius(φ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PieceSpec {
    #[serde(with = "cser")]
    pub end: C64,
    pub phi_range: (f64, f64),
    /// Angles where the bounding curve changes.
    pub breakpoints: Vec<f64>,
    pub boundaries: Vec<Boundary>,
    /// Number of copies of the piece that tile the surface.
    pub multiplicity: usize,
    /// Straight sides through the end lying on fixed curves: (angle, reflection label).
    pub fixed_sides: Vec<(f64, (usize, usize))>,
}

impl PieceSpec {
    pub fn radius(&self, phi: f64) -> f64 {
        self.boundaries.iter().filter_map(|b| b.hit(self.end, phi)).fold(f64::INFINITY, f64::min)
    }

    /// Angular sub-intervals on which `radius` is smooth.
    pub fn angular_segments(&self) -> Vec<(f64, f64)> {
        let mut cuts = vec![self.phi_range.0];
        cuts.extend(self.breakpoints.iter().copied());
        cuts.push(self.phi_range.1);
        cuts.windows(2).map(|w| (w[0], w[1])).collect()
    }

    pub fn point(&self, r: f64, phi: f64) -> C64 {
        self.end + C64::from_polar(r, phi)
    }
}

/// Genus-zero symmetry type `(m, n)` of the piece.
pub type Symmetry = (usize, usize);

/// Weierstrass data of a surface on a punctured sphere.
#[derive(Clone, Debug)]
pub struct WeierstrassData {
    pub name: String,
    pub g: GaussMap,
    pub q: RationalMap,
    pub punctures: Vec<ExtC>,
    pub reflections: Vec<Reflection>,
    pub loops: BTreeMap<String, PolyPath>,
    pub basepoint: C64,
    pub piece: Option<PieceSpec>,
    pub symmetry: Option<Symmetry>,
    alpha: OnceLock<AlphaField>,
}

impl WeierstrassData {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        g: GaussMap,
        q: RationalMap,
        punctures: Vec<ExtC>,
        reflections: Vec<Reflection>,
        loops: BTreeMap<String, PolyPath>,
        basepoint: C64,
    ) -> Self {
        WeierstrassData {
            name: name.into(),
            g,
            q,
            punctures,
            reflections,
            loops,
            basepoint,
            piece: None,
            symmetry: None,
            alpha: OnceLock::new(),
        }
    }

    pub fn with_piece(mut self, piece: PieceSpec) -> Self {
        self.piece = Some(piece);
        self
    }

    pub fn with_symmetry(mut self, s: Symmetry) -> Self {
        self.symmetry = Some(s);
        self
    }

    pub fn alpha(&self) -> &AlphaField {
        self.alpha.get_or_init(|| AlphaField::new(&self.g, &self.q))
    }

    /// Points a path must avoid: poles of `α` and finite ends.
    pub fn singular_points(&self) -> Vec<C64> {
        // Exact puncture positions win over numerically located poles.
        let mut v: Vec<C64> = self.punctures.iter().filter_map(ExtC::finite).collect();
        for &p in self.alpha().singular_points() {
            if !v.iter().any(|s| (s - p).norm() < 1e-6 * (1.0 + p.norm())) {
                v.push(p);
            }
        }
        v
    }

    pub fn reflection(&self, label: (usize, usize)) -> Result<&Reflection> {
        self.reflections
            .iter()
            .find(|r| r.label == label)
            .ok_or_else(|| Error::InvalidData(format!("no reflection labelled {label:?}")))
    }

    pub fn loop_path(&self, name: &str) -> Result<&PolyPath> {
        self.loops.get(name).ok_or_else(|| Error::UnknownLoop(name.to_string()))
    }

    /// Number of ends.
    pub fn ends(&self) -> usize {
        self.punctures.len()
    }

    pub fn q_at(&self, z: C64) -> C64 {
        self.q.eval(z)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&DataRepr::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: DataRepr = serde_json::from_str(s)?;
        r.try_into()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GaussRepr {
    Rational(RationalMap),
    Analytic { analytic: String },
}

#[derive(Serialize, Deserialize)]
struct DataRepr {
    schema: String,
    name: String,
    #[serde(rename = "G")]
    g: GaussRepr,
    q: RationalMap,
    punctures: Vec<ExtC>,
    reflections: Vec<Reflection>,
    loops: BTreeMap<String, PolyPath>,
    #[serde(with = "cser")]
    basepoint: C64,
    #[serde(default)]
    piece: Option<PieceSpec>,
    #[serde(default)]
    symmetry: Option<Symmetry>,
}

impl From<&WeierstrassData> for DataRepr {
    fn from(d: &WeierstrassData) -> Self {
        DataRepr {
            schema: "v1".into(),
            name: d.name.clone(),
            g: match &d.g {
                GaussMap::Rational(r) => GaussRepr::Rational(r.clone()),
                GaussMap::Tanh => GaussRepr::Analytic { analytic: "tanh".into() },
            },
            q: d.q.clone(),
            punctures: d.punctures.clone(),
            reflections: d.reflections.clone(),
            loops: d.loops.clone(),
            basepoint: d.basepoint,
            piece: d.piece.clone(),
            symmetry: d.symmetry,
        }
    }
}

impl TryFrom<DataRepr> for WeierstrassData {
    type Error = Error;
    fn try_from(r: DataRepr) -> Result<Self> {
        if r.schema != "v1" {
            return Err(Error::InvalidData(format!("unsupported schema `{}`", r.schema)));
        }
        let g = match r.g {
            GaussRepr::Rational(m) => GaussMap::Rational(m),
            GaussRepr::Analytic { analytic } if analytic == "tanh" => GaussMap::Tanh,
            GaussRepr::Analytic { analytic } => {
                return Err(Error::InvalidData(format!("unknown analytic map `{analytic}`")))
            }
        };
        let mut d =
            WeierstrassData::new(r.name, g, r.q, r.punctures, r.reflections, r.loops, r.basepoint);
        d.piece = r.piece;
        d.symmetry = r.symmetry;
        Ok(d)
    }
}

/// Schwarzian `(g''/g')' - ½(g''/g')²` of a rational map.
pub fn schwarzian(g: &RationalMap, z: C64) -> Result<C64> {
    let den = g.den.eval(z);
    if den.norm() < 1e-300 {
        return Err(Error::SingularPoint(format!("{z} is a pole")));
    }
    let j = g.jet(z);
    if j[1].norm() < 1e-12 * (1.0 + j[0].norm()) {
        return Err(Error::SingularPoint(format!("{z} is a critical point")));
    }
    Ok(schwarzian_of_jet(&j))
}

/// Schwarzian of the Gauss map, including the closed-form case.
pub fn gauss_schwarzian(g: &GaussMap, z: C64) -> Result<C64> {
    match g {
        GaussMap::Rational(r) => schwarzian(r, z),
        GaussMap::Tanh => {
            let j = g.jet(z).ok_or_else(|| Error::SingularPoint(format!("{z} is a pole")))?;
            Ok(schwarzian_of_jet(&j))
        }
    }
}

/// Outcome of the divisor comparison `ord_p(Q) = ord_p(dG)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularityReport {
    pub pass: bool,
    /// Violating points with (ord Q, ord dG).
    pub violations: Vec<(ExtC, i64, i64)>,
    /// "divisor" or "sampled".
    pub method: String,
}

fn is_puncture(d: &WeierstrassData, p: ExtC) -> bool {
    d.punctures.iter().any(|e| match (e, p) {
        (ExtC::Infinity, ExtC::Infinity) => true,
        (ExtC::Finite(a), ExtC::Finite(b)) => (a - b).norm() < 1e-6 * (1.0 + a.norm()),
        _ => false,
    })
}

/// Checks that `Q/dG` has neither zeros nor poles away from the ends, so the
/// metric `ds_G²` is positive definite there.
pub fn check_regular(d: &WeierstrassData) -> RegularityReport {
    let g = match &d.g {
        GaussMap::Rational(g) => g.normalized(),
        GaussMap::Tanh => return check_regular_sampled(d),
    };
    let q = d.q.normalized();
    let w = g.wronskian();
    let mut candidates: Vec<C64> = Vec::new();
    for p in [&q.num, &q.den, &w] {
        for (r, _) in p.root_clusters() {
            if !candidates.iter().any(|s| (s - r).norm() < 1e-6 * (1.0 + r.norm())) {
                candidates.push(r);
            }
        }
    }
    let mut violations = Vec::new();
    for p in candidates {
        if is_puncture(d, ExtC::Finite(p)) {
            continue;
        }
        let ord_q = q.num.order_at(p) as i64 - q.den.order_at(p) as i64;
        let ord_dg = w.order_at(p) as i64;
        if ord_q != ord_dg {
            violations.push((ExtC::Finite(p), ord_q, ord_dg));
        }
    }
    if !is_puncture(d, ExtC::Infinity) {
        let deg = |p: &Poly| p.degree().unwrap_or(0) as i64;
        let (dn, dd) = (deg(&g.num), deg(&g.den));
        let local_degree = if dn != dd {
            (dn - dd).abs()
        } else {
            let lead = g.num.leading() / g.den.leading();
            let rest = g.num.sub(&g.den.scale(lead));
            dd - rest.degree().map(|k| k as i64).unwrap_or(i64::MIN / 4)
        };
        let ord_q = deg(&q.den) - deg(&q.num) - 4;
        if ord_q != local_degree - 1 {
            violations.push((ExtC::Infinity, ord_q, local_degree - 1));
        }
    }
    RegularityReport { pass: violations.is_empty(), violations, method: "divisor".into() }
}

fn check_regular_sampled(d: &WeierstrassData) -> RegularityReport {
    let mut violations = Vec::new();
    for z in sample_points(d, 400, 3.0) {
        let v = metric_dsg(d, z).unwrap_or(0.0);
        if !(v > 0.0 && v.is_finite()) {
            violations.push((ExtC::Finite(z), 0, 0));
        }
    }
    RegularityReport { pass: violations.is_empty(), violations, method: "sampled".into() }
}

/// Deterministic sample points in `|z - z0| < radius` away from singular points.
pub fn sample_points(d: &WeierstrassData, k: usize, radius: f64) -> Vec<C64> {
    let sing = d.singular_points();
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut out = Vec::with_capacity(k);
    let mut j = 0usize;
    while out.len() < k && j < 50 * k + 100 {
        j += 1;
        let rr = radius * ((j as f64 - 0.5) / (2 * k) as f64).sqrt().min(1.0);
        let z = d.basepoint + C64::from_polar(rr, j as f64 * golden);
        if sing.iter().all(|s| (s - z).norm() > 0.05) {
            out.push(z);
        }
    }
    out
}

/// Density of `ds_G² = (1 + |G|²)² |q/G'|² |dz|²`.
pub fn metric_dsg(d: &WeierstrassData, z: C64) -> Result<f64> {
    let a = d.alpha().eval(z);
    let v = a.a12.norm() + a.a21.norm();
    if !v.is_finite() {
        return Err(Error::InfiniteDensity(format!("{z}")));
    }
    Ok(v * v)
}

/// Fubini–Study density `4|g'|²/(1 + |g|²)²`.
pub fn fubini_study(g: C64, dg: C64) -> f64 {
    let s = 1.0 + g.norm_sqr();
    4.0 * dg.norm_sqr() / (s * s)
}

/// Density of `dσ² = 4|g'|²/(1 + |g|²)² |dz|²` for a rational `g`.
pub fn metric_dsigma(g: &RationalMap, z: C64) -> Result<f64> {
    let dn = g.den.eval(z);
    let nn = g.num.eval(z);
    let w = g.wronskian().eval(z);
    // 4|W|²/(|d|² + |n|²)², finite at poles of g.
    let s = dn.norm_sqr() + nn.norm_sqr();
    let v = 4.0 * w.norm_sqr() / (s * s);
    if !v.is_finite() {
        return Err(Error::InfiniteDensity(format!("{z}")));
    }
    Ok(v)
}

/// `(α21 + α12, i(α21 - α12), 2α11) = (1 - G², i(1 + G²), 2G)·q/G'`.
fn weierstrass_vector(a: &Mat2C) -> [C64; 3] {
    [a.a21 + a.a12, I * (a.a21 - a.a12), a.a11 * 2.0]
}

fn split(v: [C64; 3]) -> ([f64; 3], [f64; 3]) {
    ([v[0].re, v[1].re, v[2].re], [v[0].im, v[1].im, v[2].im])
}

/// Period of the Euclidean Weierstrass form around a closed loop.
pub fn euclid_period(d: &WeierstrassData, path: &PolyPath) -> Result<([f64; 3], [f64; 3])> {
    if !path.closed {
        return Err(Error::Path("period requires a closed loop".into()));
    }
    check_clearance(&path.points, &d.singular_points())?;
    let f = d.alpha();
    let v = integrate_polygon(|z| weierstrass_vector(&f.eval(z)), &path.points, QUAD_TOL)?;
    Ok(split(v))
}

/// Euclidean minimal immersion at the end of `path`, normalized to 0 at its start.
pub fn minimal_immerse(d: &WeierstrassData, path: &PolyPath) -> Result<[f64; 3]> {
    if path.points.len() < 2 {
        return Ok([0.0; 3]);
    }
    check_clearance(&path.points, &d.singular_points())?;
    let f = d.alpha();
    let v = integrate_polygon(|z| weierstrass_vector(&f.eval(z)), &path.points, QUAD_TOL)?;
    Ok(split(v).0)
}

/// `∮ α dz` along a path.
pub fn alpha_integral(d: &WeierstrassData, path: &PolyPath) -> Result<Mat2C> {
    check_clearance(&path.points, &d.singular_points())?;
    let f = d.alpha();
    integrate_polygon(|z| f.eval(z), &path.points, QUAD_TOL)
}

/// Residuals of the four reflection axioms over sample points.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ReflectionCheck {
    pub involution: f64,
    pub sigma_conj: f64,
    pub gauss: f64,
    pub hopf: f64,
}

impl ReflectionCheck {
    pub fn max(&self) -> f64 {
        self.involution.max(self.sigma_conj).max(self.gauss).max(self.hopf)
    }
}

/// Involution, `σ conj σ = I`, `conj(G∘μ) = σ⁻¹·G` and invariance of `Q`.
pub fn check_reflection(d: &WeierstrassData, r: &Reflection, samples: usize) -> ReflectionCheck {
    let mut out = ReflectionCheck {
        sigma_conj: r.sigma.times_conj().dist(&Mat2C::identity()),
        ..Default::default()
    };
    let sinv = r.sigma.inverse();
    for z in sample_points(d, samples, 1.5) {
        let Some(w) = r.apply(z).finite() else { continue };
        if let Some(back) = r.apply(w).finite() {
            out.involution = out.involution.max((back - z).norm() / (1.0 + z.norm()));
        }
        let lhs = d.g.eval(w).conj();
        let rhs = mobius_raw(&sinv, d.g.eval(z));
        out.gauss = out.gauss.max(lhs.chordal(&rhs));
        let qz = d.q.eval(z);
        let md = r.map_derivative(z);
        let pulled = (d.q.eval(w) * md * md).conj();
        if qz.is_finite() && pulled.is_finite() {
            out.hopf = out.hopf.max((pulled - qz).norm() / (1.0 + qz.norm()));
        }
    }
    out
}

/// Looks for `b ∈ SU(2)` with `g̃ = b·g` and `ω̃ = (b21 g + b22)² ω`, where each
/// pair is `(g, ω/dz)` given as rational maps.
pub fn su2_equivalent(
    d1: (&RationalMap, &RationalMap),
    d2: (&RationalMap, &RationalMap),
) -> Option<Mat2C> {
    let probes: Vec<C64> = (0..40)
        .map(|k| C64::from_polar(0.3 + 0.05 * k as f64, 0.7 + 2.39996 * k as f64))
        .filter(|&z| {
            let a = d1.0.eval(z);
            let b = d2.0.eval(z);
            a.is_finite() && b.is_finite() && a.norm() < 1e6 && b.norm() < 1e6
        })
        .collect();
    if probes.len() < 11 {
        return None;
    }
    let src: Vec<C64> = probes.iter().map(|&z| d1.0.eval(z)).collect();
    let dst: Vec<C64> = probes.iter().map(|&z| d2.0.eval(z)).collect();
    let (i, j, k) = (0, 1, 2);
    if (src[i] - src[j]).norm() < 1e-6 || (src[j] - src[k]).norm() < 1e-6 || (src[i] - src[k]).norm() < 1e-6 {
        return None;
    }
    let to_std = |a: C64, b: C64, cc: C64| Mat2C::new(b - cc, -a * (b - cc), b - a, -cc * (b - a));
    let t1 = to_std(src[i], src[j], src[k]);
    let t2 = to_std(dst[i], dst[j], dst[k]);
    let m = t2.adj() * t1;
    let det = m.det();
    if det.norm() < 1e-300 {
        return None;
    }
    let b = m.scale(ONE / det.sqrt());
    if !b.is_su2(1e-8) {
        return None;
    }
    for (idx, &z) in probes.iter().enumerate().skip(3).take(8) {
        let gv = src[idx];
        let mapped = (b.a11 * gv + b.a12) / (b.a21 * gv + b.a22);
        let f = b.a21 * gv + b.a22;
        let w2 = f * f * d1.1.eval(z);
        let scale = 1.0 + d2.1.eval(z).norm();
        if (mapped - dst[idx]).norm() > 1e-8 * (1.0 + dst[idx].norm())
            || (w2 - d2.1.eval(z)).norm() > 1e-8 * scale
        {
            return None;
        }
    }
    Some(b)
}

#[cfg(test)]
mod tests;
