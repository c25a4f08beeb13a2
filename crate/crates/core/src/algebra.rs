//! Complex 2x2 matrices, the Hermitian model of hyperbolic space, Möbius
//! actions and model conversions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default tolerance for group-membership predicates (Frobenius norm).
pub const DEFAULT_TOL: f64 = 1e-9;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Complex 2x2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2C {
    pub a11: C64,
    pub a12: C64,
    pub a21: C64,
    pub a22: C64,
}

impl Mat2C {
    pub const fn new(a11: C64, a12: C64, a21: C64, a22: C64) -> Self {
        Mat2C { a11, a12, a21, a22 }
    }

    pub const fn identity() -> Self {
        Mat2C::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Mat2C::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub fn diag(a: C64, d: C64) -> Self {
        Mat2C::new(a, ZERO, ZERO, d)
    }

    pub fn real(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Mat2C::new(r(a11), r(a12), r(a21), r(a22))
    }

    pub fn det(&self) -> C64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> C64 {
        self.a11 + self.a22
    }

    /// Adjugate; equals the inverse for unimodular matrices.
    pub fn adj(&self) -> Self {
        Mat2C::new(self.a22, -self.a12, -self.a21, self.a11)
    }

    pub fn inverse(&self) -> Self {
        self.adj().scale(self.det().inv())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Mat2C::new(self.a11.conj(), self.a12.conj(), self.a21.conj(), self.a22.conj())
    }

    pub fn transpose(&self) -> Self {
        Mat2C::new(self.a11, self.a21, self.a12, self.a22)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.conj().transpose()
    }

    pub fn scale(&self, s: C64) -> Self {
        Mat2C::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(r(s))
    }

    pub fn norm(&self) -> f64 {
        (self.a11.norm_sqr() + self.a12.norm_sqr() + self.a21.norm_sqr() + self.a22.norm_sqr())
            .sqrt()
    }

    pub fn dist(&self, other: &Mat2C) -> f64 {
        (*self - *other).norm()
    }

    /// Distance to `other` or to `-other`, whichever is smaller.
    pub fn dist_up_to_sign(&self, other: &Mat2C) -> f64 {
        self.dist(other).min(self.dist(&-*other))
    }

    pub fn commutator(&self, other: &Mat2C) -> Self {
        *self * *other - *other * *self
    }

    pub fn entries(&self) -> [C64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn max_imag(&self) -> f64 {
        self.entries().iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_sl2c(&self, tol: f64) -> bool {
        (self.det() - ONE).norm() <= tol
    }

    pub fn is_su2(&self, tol: f64) -> bool {
        self.is_sl2c(tol) && (*self * self.adjoint()).dist(&Mat2C::identity()) <= tol
    }

    pub fn is_sl2r(&self, tol: f64) -> bool {
        self.is_sl2c(tol) && self.max_imag() <= tol
    }

    pub fn is_hermitian_positive(&self, tol: f64) -> bool {
        self.dist(&self.adjoint()) <= tol * (1.0 + self.norm())
            && self.trace().re > 0.0
            && self.det().re > 0.0
    }

    /// `a·conj(a)`, which is the identity exactly for matrices of the form
    /// `[[p, iγ1], [iγ2, conj p]]`.
    pub fn times_conj(&self) -> Self {
        *self * self.conj()
    }

    /// Exponential of a traceless matrix: `cosh(s) I + sinh(s)/s T`, `s² = -det T`.
    pub fn exp_traceless(&self) -> Self {
        let s = (-self.det()).sqrt();
        let (ch, sh_over_s) = if s.norm() < 1e-8 {
            let s2 = s * s;
            (ONE + s2 / 2.0, ONE + s2 / 6.0)
        } else {
            (s.cosh(), s.sinh() / s)
        };
        Mat2C::identity().scale(ch) + self.scale(sh_over_s)
    }
}

impl Default for Mat2C {
    fn default() -> Self {
        Mat2C::identity()
    }
}

impl Mul for Mat2C {
    type Output = Mat2C;
    fn mul(self, b: Mat2C) -> Mat2C {
        Mat2C::new(
            self.a11 * b.a11 + self.a12 * b.a21,
            self.a11 * b.a12 + self.a12 * b.a22,
            self.a21 * b.a11 + self.a22 * b.a21,
            self.a21 * b.a12 + self.a22 * b.a22,
        )
    }
}

impl Add for Mat2C {
    type Output = Mat2C;
    fn add(self, b: Mat2C) -> Mat2C {
        Mat2C::new(self.a11 + b.a11, self.a12 + b.a12, self.a21 + b.a21, self.a22 + b.a22)
    }
}

impl Sub for Mat2C {
    type Output = Mat2C;
    fn sub(self, b: Mat2C) -> Mat2C {
        Mat2C::new(self.a11 - b.a11, self.a12 - b.a12, self.a21 - b.a21, self.a22 - b.a22)
    }
}

impl Neg for Mat2C {
    type Output = Mat2C;
    fn neg(self) -> Mat2C {
        Mat2C::new(-self.a11, -self.a12, -self.a21, -self.a22)
    }
}

impl fmt::Display for Mat2C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a11, self.a12, self.a21, self.a22)
    }
}

impl Serialize for Mat2C {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let p = |z: C64| [z.re, z.im];
        [[p(self.a11), p(self.a12)], [p(self.a21), p(self.a22)]].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat2C {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m: [[[f64; 2]; 2]; 2] = Deserialize::deserialize(d)?;
        let z = |v: [f64; 2]| c(v[0], v[1]);
        Ok(Mat2C::new(z(m[0][0]), z(m[0][1]), z(m[1][0]), z(m[1][1])))
    }
}

/// Serde helpers writing complex numbers as `[re, im]`.
pub mod cser {
    use super::*;

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<C64, D::Error> {
        let v: [f64; 2] = Deserialize::deserialize(d)?;
        Ok(c(v[0], v[1]))
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
            v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<C64>, D::Error> {
            let v: Vec<[f64; 2]> = Deserialize::deserialize(d)?;
            Ok(v.into_iter().map(|p| c(p[0], p[1])).collect())
        }
    }
}

/// A point of the Riemann sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtC {
    Finite(C64),
    Infinity,
}

impl ExtC {
    /// `u / v` read projectively.
    pub fn from_ratio(u: C64, v: C64) -> ExtC {
        if v == ZERO {
            ExtC::Infinity
        } else {
            ExtC::Finite(u / v)
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtC::Infinity)
    }

    pub fn finite(&self) -> Option<C64> {
        match self {
            ExtC::Finite(z) => Some(*z),
            ExtC::Infinity => None,
        }
    }

    /// Chordal distance on the unit sphere (diameter 2).
    pub fn chordal(&self, other: &ExtC) -> f64 {
        match (self, other) {
            (ExtC::Infinity, ExtC::Infinity) => 0.0,
            (ExtC::Finite(z), ExtC::Infinity) | (ExtC::Infinity, ExtC::Finite(z)) => {
                2.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (ExtC::Finite(a), ExtC::Finite(b)) => {
                2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
            }
        }
    }

    pub fn conj(&self) -> ExtC {
        match self {
            ExtC::Finite(z) => ExtC::Finite(z.conj()),
            ExtC::Infinity => ExtC::Infinity,
        }
    }
}

impl From<C64> for ExtC {
    fn from(z: C64) -> Self {
        ExtC::Finite(z)
    }
}

impl fmt::Display for ExtC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtC::Finite(z) => write!(f, "{z}"),
            ExtC::Infinity => write!(f, "∞"),
        }
    }
}

impl Serialize for ExtC {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtC::Finite(z) => [z.re, z.im].serialize(s),
            ExtC::Infinity => "inf".serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for ExtC {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Pair([f64; 2]),
            Tag(String),
        }
        match Repr::deserialize(d)? {
            Repr::Pair(p) => Ok(ExtC::Finite(c(p[0], p[1]))),
            Repr::Tag(t) if t == "inf" => Ok(ExtC::Infinity),
            Repr::Tag(t) => Err(serde::de::Error::custom(format!("bad extended complex `{t}`"))),
        }
    }
}

/// Projective action without the unimodularity check.
pub fn mobius_raw(a: &Mat2C, z: ExtC) -> ExtC {
    match z {
        ExtC::Finite(z) => ExtC::from_ratio(a.a11 * z + a.a12, a.a21 * z + a.a22),
        ExtC::Infinity => ExtC::from_ratio(a.a11, a.a21),
    }
}

/// `(a11 z + a12) / (a21 z + a22)` with infinity handled projectively.
pub fn mobius_apply(a: &Mat2C, z: ExtC) -> Result<ExtC> {
    let e = (a.det() - ONE).norm();
    if e > DEFAULT_TOL {
        return Err(Error::InvalidMatrix(e));
    }
    Ok(mobius_raw(a, z))
}

/// A point `X = X*`, `det X = 1/c²`, `tr X > 0` of hyperbolic space of
/// curvature `-c²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermitianPoint {
    pub x: Mat2C,
    pub c: f64,
}

impl HermitianPoint {
    pub fn new(x: Mat2C, c: f64) -> Result<Self> {
        if c == 0.0 || !c.is_finite() {
            return Err(Error::InvalidPoint(format!("curvature parameter {c}")));
        }
        let scale = 1.0 + x.norm();
        if x.dist(&x.adjoint()) > 1e-9 * scale {
            return Err(Error::InvalidPoint("not hermitian".into()));
        }
        let target = 1.0 / (c * c);
        if (x.det().re - target).abs() > 1e-9 * scale * scale {
            return Err(Error::InvalidPoint(format!("det {} != {}", x.det().re, target)));
        }
        if x.trace().re <= 0.0 {
            return Err(Error::WrongSheet(x.trace().re / 2.0));
        }
        Ok(HermitianPoint { x, c })
    }

    /// The point fixed by SU(2): `(1/|c|) I`.
    pub fn origin(c: f64) -> Self {
        HermitianPoint { x: Mat2C::identity().scale_re(1.0 / c.abs()), c }
    }

    /// `(x0, x1, x2, x3)` with `X = [[x0+x3, x1+ix2], [x1-ix2, x0-x3]]`.
    pub fn coords(&self) -> [f64; 4] {
        let x = &self.x;
        [
            0.5 * (x.a11.re + x.a22.re),
            0.5 * (x.a12.re + x.a21.re),
            0.5 * (x.a12.im - x.a21.im),
            0.5 * (x.a11.re - x.a22.re),
        ]
    }

    pub fn from_coords(x: [f64; 4], c: f64) -> Self {
        let m = Mat2C::new(
            r(x[0] + x[3]),
            C64::new(x[1], x[2]),
            C64::new(x[1], -x[2]),
            r(x[0] - x[3]),
        );
        HermitianPoint { x: m, c }
    }
}

/// Poincaré ball point of radius `1/|c|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallPoint {
    pub y: [f64; 3],
    pub radius: f64,
}

impl BallPoint {
    /// Coordinates scaled by 2, which tend to the Euclidean limit as the
    /// radius grows.
    pub fn rescaled(&self) -> [f64; 3] {
        [2.0 * self.y[0], 2.0 * self.y[1], 2.0 * self.y[2]]
    }
}

/// `a ∘ p = a p a*`.
pub fn act_on_point(a: &Mat2C, p: &HermitianPoint) -> Result<HermitianPoint> {
    let e = (a.det() - ONE).norm();
    if e > DEFAULT_TOL {
        return Err(Error::InvalidMatrix(e));
    }
    Ok(HermitianPoint { x: *a * p.x * a.adjoint(), c: p.c })
}

pub fn to_ball(p: &HermitianPoint) -> Result<BallPoint> {
    let x = p.coords();
    if x[0] <= 0.0 {
        return Err(Error::WrongSheet(x[0]));
    }
    let k = p.c.abs();
    let xi0 = k * x[0];
    let d = (1.0 + xi0) * k;
    Ok(BallPoint { y: [k * x[1] / d, k * x[2] / d, k * x[3] / d], radius: 1.0 / k })
}

pub fn from_ball(b: &BallPoint, c: f64) -> Result<HermitianPoint> {
    let k = c.abs();
    let u = [b.y[0] * k, b.y[1] * k, b.y[2] * k];
    let u2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    if u2 >= 1.0 {
        return Err(Error::InvalidPoint(format!("outside the ball (|y|/R = {})", u2.sqrt())));
    }
    let s = 1.0 - u2;
    let xi = [(1.0 + u2) / s, 2.0 * u[0] / s, 2.0 * u[1] / s, 2.0 * u[2] / s];
    Ok(HermitianPoint::from_coords([xi[0] / k, xi[1] / k, xi[2] / k, xi[3] / k], c))
}

/// Hyperbolic distance in curvature `-c²`:
/// `cosh(|c| d) = c² · ½ tr(X · adj Y)` (the Minkowski pairing), evaluated
/// through the chord `sinh(|c| d / 2) = ½|c| √(-det(X - Y))`, which stays
/// accurate for nearby points.
pub fn hyperbolic_distance(p: &HermitianPoint, q: &HermitianPoint) -> f64 {
    let k = p.c.abs();
    let chord = (-(p.x - q.x).det().re).max(0.0).sqrt();
    2.0 * (0.5 * k * chord).asinh() / k
}

/// `Δ[a] = a12 - a21`.
pub fn delta(a: &Mat2C) -> C64 {
    a.a12 - a.a21
}

/// Traceless anti-Hermitian `T` with eigenvalues `±iθ`, `θ ∈ (0, π)`, and
/// `exp T = b`.
pub fn su2_log_axis(b: &Mat2C) -> Result<(Mat2C, f64)> {
    let res = (*b * b.adjoint()).dist(&Mat2C::identity()).max((b.det() - ONE).norm());
    if res > DEFAULT_TOL {
        return Err(Error::NotSu2(res));
    }
    let id = Mat2C::identity();
    if b.dist(&id) <= DEFAULT_TOL || b.dist(&-id) <= DEFAULT_TOL {
        return Err(Error::NoAxis);
    }
    let half_trace = (0.5 * b.trace().re).clamp(-1.0, 1.0);
    let theta = half_trace.acos();
    // b = cos θ I + sin θ N with N² = -I; sin θ from the traceless part.
    let n = *b - id.scale_re(half_trace);
    let sin_theta = n.det().re.max(0.0).sqrt();
    if sin_theta <= 0.0 {
        return Err(Error::NoAxis);
    }
    Ok((n.scale_re(theta / sin_theta), theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn su2(p: C64, q: C64) -> Mat2C {
        let n = (p.norm_sqr() + q.norm_sqr()).sqrt();
        let (p, q) = (p / n, q / n);
        Mat2C::new(p, -q.conj(), q, p.conj())
    }

    #[test]
    fn mobius_examples() {
        let z = ExtC::Finite(c(0.3, 0.4));
        assert_eq!(mobius_apply(&Mat2C::identity(), z).unwrap(), z);
        let j = Mat2C::real(0.0, 1.0, -1.0, 0.0);
        assert_eq!(mobius_apply(&j, ExtC::Finite(ZERO)).unwrap(), ExtC::Infinity);
        let rot = Mat2C::diag(C64::from_polar(1.0, PI / 3.0), C64::from_polar(1.0, -PI / 3.0));
        let w = mobius_apply(&rot, ExtC::Finite(ONE)).unwrap().finite().unwrap();
        assert!((w - C64::from_polar(1.0, 2.0 * PI / 3.0)).norm() < 1e-14);
        assert!(mobius_apply(&Mat2C::real(2.0, 0.0, 0.0, 1.0), z).is_err());
        assert_eq!(mobius_apply(&j, ExtC::Infinity).unwrap(), ExtC::Finite(ZERO));
    }

    #[test]
    fn act_on_point_examples() {
        let cc = 0.3;
        let o = HermitianPoint::origin(cc);
        let b = su2(c(0.2, 0.7), c(-0.4, 0.1));
        assert!(act_on_point(&b, &o).unwrap().x.dist(&o.x) < 1e-12);
        let a = Mat2C::real(2.0, 0.0, 0.0, 0.5);
        let p = act_on_point(&a, &o).unwrap();
        assert!(p.x.dist(&Mat2C::real(4.0, 0.0, 0.0, 0.25).scale_re(1.0 / cc)) < 1e-12);
        assert!(act_on_point(&Mat2C::identity(), &p).unwrap().x.dist(&p.x) < 1e-15);
    }

    #[test]
    fn to_ball_examples() {
        for cc in [0.5, -2.0] {
            let o = to_ball(&HermitianPoint::origin(cc)).unwrap();
            assert_eq!(o.y, [0.0, 0.0, 0.0]);
            let k = f64::abs(cc);
            let p = HermitianPoint::from_coords([2f64.sqrt() / k, 1.0 / k, 0.0, 0.0], cc);
            let b = to_ball(&p).unwrap();
            assert!((b.y[0] - 1.0 / (k * (1.0 + 2f64.sqrt()))).abs() < 1e-14);
            assert!(b.y[1].abs() < 1e-15 && b.y[2].abs() < 1e-15);
        }
        let bad = HermitianPoint { x: Mat2C::identity().scale_re(-1.0), c: 1.0 };
        assert!(matches!(to_ball(&bad), Err(Error::WrongSheet(_))));
    }

    #[test]
    fn hermitian_point_validation() {
        assert!(HermitianPoint::new(Mat2C::identity().scale_re(2.0), 0.5).is_ok());
        assert!(HermitianPoint::new(Mat2C::identity(), 0.5).is_err());
        assert!(HermitianPoint::new(Mat2C::real(1.0, 1.0, 0.0, 1.0), 1.0).is_err());
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(&Mat2C::identity()), ZERO);
        let (p, g1, g2) = (c(0.3, 0.5), 0.7, -0.2);
        let a = Mat2C::new(p, I * g1, I * g2, p.conj());
        assert!((delta(&a) - I * (g1 - g2)).norm() < 1e-15);
    }

    #[test]
    fn su2_log_examples() {
        let phi = PI / 4.0;
        let b = Mat2C::diag(C64::from_polar(1.0, phi), C64::from_polar(1.0, -phi));
        let (t, theta) = su2_log_axis(&b).unwrap();
        assert!((theta - phi).abs() < 1e-14);
        assert!(t.dist(&Mat2C::diag(c(0.0, phi), c(0.0, -phi))) < 1e-14);
        let (ti, _) = su2_log_axis(&b.inverse()).unwrap();
        assert!(ti.dist(&-t) < 1e-14);
        assert!(matches!(su2_log_axis(&Mat2C::identity()), Err(Error::NoAxis)));
        assert!(matches!(su2_log_axis(&-Mat2C::identity()), Err(Error::NoAxis)));
    }

    #[test]
    fn exp_of_nilpotent_and_rotation() {
        let n = Mat2C::real(0.0, 1.0, 0.0, 0.0);
        assert!(n.exp_traceless().dist(&Mat2C::real(1.0, 1.0, 0.0, 1.0)) < 1e-15);
        let t = Mat2C::diag(c(0.0, 0.4), c(0.0, -0.4));
        let e = t.exp_traceless();
        assert!(e.dist(&Mat2C::diag(C64::from_polar(1.0, 0.4), C64::from_polar(1.0, -0.4))) < 1e-14);
    }

    #[test]
    fn serde_round_trip() {
        let m = Mat2C::new(c(1.0, 2.0), c(3.0, 4.0), c(5.0, 6.0), c(7.0, 8.0));
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[[1.0,2.0],[3.0,4.0]],[[5.0,6.0],[7.0,8.0]]]");
        let back: Mat2C = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let e: ExtC = serde_json::from_str("\"inf\"").unwrap();
        assert!(e.is_infinite());
    }
}
