//! Dense complex polynomials and rational maps.

use serde::{Deserialize, Serialize};

use crate::algebra::{c, cser, ExtC, C64, ONE, ZERO};

/// Roots closer than this (relative to `1 + |z|`) are treated as one root.
pub(crate) const CLUSTER_TOL: f64 = 1e-5;

/// Polynomial with ascending coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    #[serde(with = "cser::vec")]
    coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Drop leading coefficients below `rel` times the largest one.
    pub fn trimmed(&self, rel: f64) -> Poly {
        let big = self.coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max);
        let mut v = self.coeffs.clone();
        while v.last().is_some_and(|a| a.norm() <= rel * big) {
            v.pop();
        }
        Poly::new(v)
    }

    pub fn real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(a: C64) -> Self {
        Poly::new(vec![a])
    }

    pub fn one() -> Self {
        Poly::constant(ONE)
    }

    /// `a zᵏ`.
    pub fn monomial(a: C64, k: usize) -> Self {
        let mut v = vec![ZERO; k + 1];
        v[k] = a;
        Poly::new(v)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[C64]) -> Self {
        roots.iter().fold(Poly::one(), |p, &r| p.mul(&Poly::new(vec![-r, ONE])))
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> C64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &a| acc * z + a)
    }

    pub fn deriv(&self) -> Poly {
        Poly::new(
            self.coeffs.iter().enumerate().skip(1).map(|(k, &a)| a * k as f64).collect(),
        )
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &[C64], k: usize| v.get(k).copied().unwrap_or(ZERO);
        Poly::new((0..n).map(|k| get(&self.coeffs, k) + get(&o.coeffs, k)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(-ONE))
    }

    pub fn scale(&self, s: C64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| a * s).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![ZERO; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }

    pub fn pow(&self, k: usize) -> Poly {
        (0..k).fold(Poly::one(), |p, _| p.mul(self))
    }

    /// First `k` Taylor coefficients of `P(z + t)` in `t`.
    pub fn taylor(&self, z: C64, k: usize) -> Vec<C64> {
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(k);
        for _ in 0..k {
            if work.is_empty() {
                out.push(ZERO);
                continue;
            }
            // Horner division by (x - z): remainder is the value, quotient carries on.
            let mut acc = ZERO;
            let mut quot = vec![ZERO; work.len().saturating_sub(1)];
            for i in (0..work.len()).rev() {
                acc = acc * z + work[i];
                if i > 0 {
                    quot[i - 1] = acc;
                }
            }
            out.push(acc);
            work = quot;
        }
        out
    }

    /// Quotient of division by `(z - p)`, remainder discarded.
    pub fn deflate(&self, p: C64) -> Poly {
        let n = self.coeffs.len();
        if n <= 1 {
            return Poly::zero();
        }
        let mut quot = vec![ZERO; n - 1];
        let mut acc = ZERO;
        for i in (1..n).rev() {
            acc = acc * p + self.coeffs[i];
            quot[i - 1] = acc;
        }
        Poly::new(quot)
    }

    /// All roots with multiplicity (Aberth iteration, exact zeros at the origin split off).
    pub fn roots(&self) -> Vec<C64> {
        let lead_zeros = self.coeffs.iter().take_while(|a| **a == ZERO).count();
        let core: Vec<C64> = self.coeffs[lead_zeros..].to_vec();
        let mut out = vec![ZERO; lead_zeros];
        let n = core.len().saturating_sub(1);
        if n == 0 {
            return out;
        }
        let lead = core[n];
        let monic: Vec<C64> = core.iter().map(|a| a / lead).collect();
        let p = Poly { coeffs: monic };
        let dp = p.deriv();
        // Start on a circle whose radius is the geometric mean of the root moduli.
        let radius = p.coeffs[0].norm().powf(1.0 / n as f64);
        let mut z: Vec<C64> = (0..n)
            .map(|k| {
                C64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4)
            })
            .collect();
        for _ in 0..2000 {
            let mut moved = 0.0f64;
            for i in 0..n {
                let pv = p.eval(z[i]);
                if pv == ZERO {
                    continue;
                }
                let ratio = pv / dp.eval(z[i]);
                let s: C64 = (0..n).filter(|&j| j != i).map(|j| ONE / (z[i] - z[j])).sum();
                let w = ratio / (ONE - ratio * s);
                if w.re.is_finite() && w.im.is_finite() {
                    z[i] -= w;
                    moved = moved.max(w.norm() / (1.0 + z[i].norm()));
                }
            }
            if moved < 1e-16 {
                break;
            }
        }
        out.extend(z);
        out
    }

    /// Distinct roots with multiplicities; clustered roots are averaged.
    pub fn root_clusters(&self) -> Vec<(C64, usize)> {
        cluster(&self.roots())
    }

    /// Order of vanishing at `p`.
    pub fn order_at(&self, p: C64) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        self.root_clusters()
            .iter()
            .filter(|(r, _)| (r - p).norm() <= CLUSTER_TOL * (1.0 + p.norm()))
            .map(|(_, k)| *k)
            .sum()
    }
}

pub(crate) fn cluster(roots: &[C64]) -> Vec<(C64, usize)> {
    let mut groups: Vec<Vec<C64>> = Vec::new();
    for &r in roots {
        match groups.iter_mut().find(|g| {
            let m = mean(g);
            (m - r).norm() <= CLUSTER_TOL * (1.0 + m.norm())
        }) {
            Some(g) => g.push(r),
            None => groups.push(vec![r]),
        }
    }
    groups.iter().map(|g| (snap(mean(g)), g.len())).collect()
}

fn mean(v: &[C64]) -> C64 {
    v.iter().sum::<C64>() / v.len() as f64
}

/// Round parts that are zero up to roundoff, so symmetric data stays symmetric.
fn snap(z: C64) -> C64 {
    let s = 1e-13 * (1.0 + z.norm());
    c(if z.re.abs() < s { 0.0 } else { z.re }, if z.im.abs() < s { 0.0 } else { z.im })
}

/// `num / den`, evaluated projectively on the Riemann sphere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalMap {
    pub num: Poly,
    pub den: Poly,
}

impl RationalMap {
    pub fn new(num: Poly, den: Poly) -> Self {
        RationalMap { num, den }
    }

    pub fn poly(p: Poly) -> Self {
        RationalMap { num: p, den: Poly::one() }
    }

    /// The identity map `z`.
    pub fn z() -> Self {
        RationalMap::poly(Poly::monomial(ONE, 1))
    }

    /// Cancel common roots so numerator and denominator are coprime.
    pub fn normalized(&self) -> Self {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        for (p, k) in self.num.root_clusters() {
            let shared = k.min(den.order_at(p));
            for _ in 0..shared {
                num = num.deflate(p);
                den = den.deflate(p);
            }
        }
        RationalMap { num, den }
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn eval_ext(&self, z: ExtC) -> ExtC {
        match z {
            ExtC::Finite(z) => ExtC::from_ratio(self.num.eval(z), self.den.eval(z)),
            ExtC::Infinity => {
                let dn = self.num.degree().unwrap_or(0) as i64;
                let dd = self.den.degree().unwrap_or(0) as i64;
                if self.num.is_zero() || dn < dd {
                    ExtC::Finite(ZERO)
                } else if dn > dd {
                    ExtC::Infinity
                } else {
                    ExtC::Finite(self.num.leading() / self.den.leading())
                }
            }
        }
    }

    /// Numerator of the derivative over `den²`: `num' den - num den'`.
    pub fn wronskian(&self) -> Poly {
        self.num.deriv().mul(&self.den).sub(&self.num.mul(&self.den.deriv()))
    }

    pub fn deriv(&self, z: C64) -> C64 {
        let d = self.den.eval(z);
        self.wronskian().eval(z) / (d * d)
    }

    /// Taylor coefficients `c0..c3` at `z`.
    pub fn jet(&self, z: C64) -> [C64; 4] {
        series_div(&to4(&self.num.taylor(z, 4)), &to4(&self.den.taylor(z, 4)))
    }
}

pub(crate) fn to4(v: &[C64]) -> [C64; 4] {
    [v[0], v[1], v[2], v[3]]
}

/// Truncated product of Taylor series.
pub(crate) fn series_mul(a: &[C64; 4], b: &[C64; 4]) -> [C64; 4] {
    let mut r = [ZERO; 4];
    for i in 0..4 {
        for j in 0..4 - i {
            r[i + j] += a[i] * b[j];
        }
    }
    r
}

/// Truncated quotient of Taylor series; `b[0]` must be nonzero.
pub(crate) fn series_div(a: &[C64; 4], b: &[C64; 4]) -> [C64; 4] {
    let mut r = [ZERO; 4];
    for k in 0..4 {
        let mut s = a[k];
        for j in 1..=k {
            s -= b[j] * r[k - j];
        }
        r[k] = s / b[0];
    }
    r
}

/// Schwarzian `g'''/g' - 3/2 (g''/g')²` from Taylor coefficients.
pub(crate) fn schwarzian_of_jet(j: &[C64; 4]) -> C64 {
    let r2 = j[2] / j[1];
    6.0 * j[3] / j[1] - 6.0 * r2 * r2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::I;

    #[test]
    fn eval_and_derivative() {
        let p = Poly::real(&[1.0, -2.0, 0.0, 3.0]);
        assert_eq!(p.eval(c(2.0, 0.0)), c(21.0, 0.0));
        assert_eq!(p.deriv(), Poly::real(&[-2.0, 0.0, 9.0]));
        assert_eq!(Poly::real(&[0.0, 0.0]).degree(), None);
    }

    #[test]
    fn taylor_shift_matches_derivatives() {
        let p = Poly::new(vec![c(1.0, 1.0), c(0.0, 2.0), c(-3.0, 0.5), c(0.7, 0.0), c(0.1, -0.2)]);
        let z = c(0.3, -0.8);
        let t = p.taylor(z, 4);
        assert!((t[0] - p.eval(z)).norm() < 1e-14);
        assert!((t[1] - p.deriv().eval(z)).norm() < 1e-13);
        assert!((t[2] * 2.0 - p.deriv().deriv().eval(z)).norm() < 1e-13);
        assert!((t[3] * 6.0 - p.deriv().deriv().deriv().eval(z)).norm() < 1e-13);
    }

    #[test]
    fn roots_with_multiplicity() {
        let r = [c(1.0, 0.0), c(1.0, 0.0), c(-0.5, 2.0), ZERO, I];
        let p = Poly::from_roots(&r);
        let cl = p.root_clusters();
        assert_eq!(cl.len(), 4);
        assert_eq!(p.order_at(c(1.0, 0.0)), 2);
        assert_eq!(p.order_at(ZERO), 1);
        assert_eq!(p.order_at(c(-0.5, 2.0)), 1);
        assert_eq!(p.order_at(c(5.0, 0.0)), 0);
        let unity = Poly::real(&[-1.0, 0.0, 0.0, 0.0, 0.0, 1.0]).pow(2);
        assert_eq!(unity.root_clusters().len(), 5);
        assert!(unity.root_clusters().iter().all(|(z, k)| *k == 2 && (z.norm() - 1.0).abs() < 1e-7));
    }

    #[test]
    fn normalization_cancels_common_factor() {
        let num = Poly::from_roots(&[c(2.0, 0.0), ZERO]);
        let den = Poly::from_roots(&[ZERO, c(-1.0, 0.0)]);
        let r = RationalMap::new(num, den).normalized();
        assert_eq!(r.num.degree(), Some(1));
        assert_eq!(r.den.degree(), Some(1));
        assert!((r.eval(c(3.0, 0.0)) - c(0.25, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn projective_evaluation() {
        let r = RationalMap::new(Poly::real(&[1.0, 2.0]), Poly::real(&[0.0, 1.0]));
        assert_eq!(r.eval_ext(ExtC::Infinity), ExtC::Finite(c(2.0, 0.0)));
        assert_eq!(r.eval_ext(ExtC::Finite(ZERO)), ExtC::Infinity);
        assert_eq!(RationalMap::z().eval_ext(ExtC::Infinity), ExtC::Infinity);
    }

    #[test]
    fn series_division_inverts_product() {
        let a = [c(1.0, 0.5), c(0.2, 0.0), c(-1.0, 1.0), c(0.0, 3.0)];
        let b = [c(2.0, -1.0), c(0.0, 1.0), c(0.5, 0.0), c(1.0, 1.0)];
        let q = series_div(&series_mul(&a, &b), &b);
        for k in 0..4 {
            assert!((q[k] - a[k]).norm() < 1e-13);
        }
    }
}
