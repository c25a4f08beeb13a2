//! Adaptive Gauss–Kronrod (7/15) quadrature of complex-valued integrands along
//! straight segments and polygonal contours, plus fixed Gauss–Legendre rules.

use crate::algebra::{Mat2C, C64, ZERO};
use crate::error::{Error, Result};

/// Values that can be integrated: a normed vector space over the reals.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, o: Self) -> Self;
    fn scale(self, s: C64) -> Self;
    fn size(&self) -> f64;
}

impl QuadValue for C64 {
    fn zero() -> Self {
        ZERO
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn scale(self, s: C64) -> Self {
        self * s
    }
    fn size(&self) -> f64 {
        self.norm()
    }
}

impl QuadValue for [C64; 3] {
    fn zero() -> Self {
        [ZERO; 3]
    }
    fn add(self, o: Self) -> Self {
        [self[0] + o[0], self[1] + o[1], self[2] + o[2]]
    }
    fn scale(self, s: C64) -> Self {
        [self[0] * s, self[1] * s, self[2] * s]
    }
    fn size(&self) -> f64 {
        (self[0].norm_sqr() + self[1].norm_sqr() + self[2].norm_sqr()).sqrt()
    }
}

impl QuadValue for Mat2C {
    fn zero() -> Self {
        Mat2C::zero()
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn scale(self, s: C64) -> Self {
        Mat2C::scale(&self, s)
    }
    fn size(&self) -> f64 {
        self.norm()
    }
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One G7K15 pass on `[a, b] ⊂ ℝ`; returns (Kronrod estimate, |K - G|).
fn gk15<T: QuadValue>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(mid);
    let mut k = fc.scale(C64::new(WGK[7], 0.0));
    let mut g = fc.scale(C64::new(WG[3], 0.0));
    for j in 0..7 {
        let x = half * XGK[j];
        let s = f(mid - x).add(f(mid + x));
        k = k.add(s.scale(C64::new(WGK[j], 0.0)));
        if j % 2 == 1 {
            g = g.add(s.scale(C64::new(WG[j / 2], 0.0)));
        }
    }
    let h = C64::new(half, 0.0);
    let k = k.scale(h);
    let g = g.scale(h);
    let err = k.add(g.scale(C64::new(-1.0, 0.0))).size();
    (k, err)
}

/// Adaptive integral of `f` over `[a, b]` to absolute-or-relative tolerance `tol`.
pub fn integrate_real<T: QuadValue>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<T> {
    let mut total = T::zero();
    let mut stack = vec![(a, b, 0usize)];
    let (whole, _) = gk15(&mut f, a, b);
    let scale = whole.size().max(1.0);
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = gk15(&mut f, lo, hi);
        let budget = tol * scale * (hi - lo) / (b - a);
        if err <= budget.max(1e-15 * val.size()) {
            total = total.add(val);
        } else if depth >= 40 {
            return Err(Error::Accuracy(format!(
                "quadrature did not converge on [{lo}, {hi}] (error estimate {err:e})"
            )));
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    Ok(total)
}

/// `∫ f(z) dz` along the straight segment from `z0` to `z1`.
pub fn integrate_segment<T: QuadValue>(
    mut f: impl FnMut(C64) -> T,
    z0: C64,
    z1: C64,
    tol: f64,
) -> Result<T> {
    let dz = z1 - z0;
    let v = integrate_real(|t| f(z0 + dz * t), 0.0, 1.0, tol)?;
    Ok(v.scale(dz))
}

/// `∫ f(z) dz` along a polygon through `points`.
pub fn integrate_polygon<T: QuadValue>(
    mut f: impl FnMut(C64) -> T,
    points: &[C64],
    tol: f64,
) -> Result<T> {
    let mut total = T::zero();
    for w in points.windows(2) {
        total = total.add(integrate_segment(&mut f, w[0], w[1], tol)?);
    }
    Ok(total)
}

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre01(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (1.0 - x), 0.5 * w));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{c, I};
    use std::f64::consts::PI;

    #[test]
    fn residue_of_simple_pole() {
        let pts: Vec<C64> =
            (0..=64).map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / 64.0)).collect();
        let v = integrate_polygon(|z: C64| 1.0 / z, &pts, 1e-12).unwrap();
        assert!((v - 2.0 * PI * I).norm() < 1e-10);
        let w = integrate_polygon(|z: C64| 1.0 / (z * z), &pts, 1e-12).unwrap();
        assert!(w.norm() < 1e-10);
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let r = gauss_legendre01(10);
        let s: f64 = r.iter().map(|(x, w)| w * x.powi(19)).sum();
        assert!((s - 1.0 / 20.0).abs() < 1e-14);
        let total: f64 = r.iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_real_integral() {
        let v = integrate_real(|t| c((20.0 * t).sin(), 0.0), 0.0, PI, 1e-12).unwrap();
        assert!(v.norm() < 1e-11);
    }
}
