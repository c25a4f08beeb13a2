//! Null curves `dF = c α F dz` in SL(2,ℂ): integration along polygonal paths,
//! monodromy, reflection matrices, Gauss maps, duality.

use serde::Serialize;

use crate::algebra::{ExtC, HermitianPoint, Mat2C, C64, ONE};
use crate::error::{Error, Result};
use crate::wdata::poly::{schwarzian_of_jet, series_div};
use crate::wdata::{alpha_integral, check_clearance, PolyPath, Reflection, WeierstrassData};

pub const DEFAULT_ODE_TOL: f64 = 1e-10;

/// `F` and the direction `α F` (so that `dF = c·dir·dz`) at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sample {
    #[serde(with = "crate::algebra::cser")]
    pub z: C64,
    pub f: Mat2C,
    pub dir: Mat2C,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

#[derive(Clone, Debug)]
pub struct NullCurveSolution<'a> {
    pub data: &'a WeierstrassData,
    pub c: f64,
    pub path: PolyPath,
    /// One sample per accepted step; waypoints are always sampled.
    pub samples: Vec<Sample>,
    /// Indices into `samples` of the path waypoints.
    pub waypoints: Vec<usize>,
    pub tol: f64,
    pub stats: IntegrationStats,
    /// True for `F⁻¹`.
    pub dual: bool,
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const NODES: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
/// Fifth-order weights minus fourth-order weights.
const ERR: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

const MAX_STEPS: usize = 2_000_000;

/// Rescale to determinant one (the flow preserves it; this removes drift).
fn unimodular(f: Mat2C) -> Mat2C {
    let d = f.det();
    f.scale(ONE / d.sqrt())
}

struct Stepper<'a> {
    d: &'a WeierstrassData,
    c: f64,
    tol: f64,
    stats: IntegrationStats,
}

impl Stepper<'_> {
    fn rhs(&mut self, z: C64, unit: C64, f: &Mat2C) -> Mat2C {
        self.stats.evaluations += 1;
        (self.d.alpha().eval(z) * *f).scale(unit * self.c)
    }

    /// Integrate along the segment `a → b`, pushing a sample after every step.
    fn segment(&mut self, a: C64, b: C64, f0: Mat2C, h0: f64, out: &mut Vec<Sample>) -> Result<(Mat2C, f64)> {
        let len = (b - a).norm();
        let unit = (b - a) / len;
        let mut s = 0.0;
        let mut f = f0;
        let mut h = h0.min(len);
        let mut k1 = self.rhs(a, unit, &f);
        while s < len {
            if self.stats.accepted + self.stats.rejected > MAX_STEPS {
                return Err(Error::StepUnderflow(format!("{}", a + unit * s)));
            }
            let last = s + h >= len;
            if last {
                h = len - s;
            }
            let mut k = [Mat2C::zero(); 7];
            k[0] = k1;
            for i in 1..7 {
                let mut y = f;
                for (j, kj) in k.iter().enumerate().take(i) {
                    let w = A[i - 1][j];
                    if w != 0.0 {
                        y = y + kj.scale_re(h * w);
                    }
                }
                k[i] = self.rhs(a + unit * (s + NODES[i] * h), unit, &y);
            }
            // The sixth stage evaluated at the fifth-order solution.
            let mut y5 = f;
            for (j, kj) in k.iter().enumerate().take(6) {
                y5 = y5 + kj.scale_re(h * A[5][j]);
            }
            let mut e = Mat2C::zero();
            for (j, kj) in k.iter().enumerate() {
                e = e + kj.scale_re(h * ERR[j]);
            }
            let err = (e * y5.adj()).norm();
            if !err.is_finite() {
                return Err(Error::SingularPoint(format!("{}", a + unit * s)));
            }
            if err <= self.tol {
                self.stats.accepted += 1;
                s = if last { len } else { s + h };
                f = unimodular(y5);
                let z = if last { b } else { a + unit * s };
                k1 = k[6];
                let dir = self.d.alpha().eval(z) * f;
                out.push(Sample { z, f, dir });
            } else {
                self.stats.rejected += 1;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * (self.tol / err).powf(0.2)).clamp(0.2, 5.0) };
            h *= factor;
            if h < 1e-13 * len.max(1e-3) {
                return Err(Error::StepUnderflow(format!("{}", a + unit * s)));
            }
        }
        Ok((f, h))
    }
}

/// Solve `dF = c α F dz` along `path` with `F(path.start) = f0`.
pub fn integrate<'a>(
    d: &'a WeierstrassData,
    c: f64,
    path: &PolyPath,
    f0: Mat2C,
    tol: f64,
) -> Result<NullCurveSolution<'a>> {
    let singular = d.singular_points();
    check_clearance(&path.points, &singular)?;
    let start = path.start();
    let mut samples = vec![Sample { z: start, f: f0, dir: d.alpha().eval(start) * f0 }];
    let mut waypoints = vec![0];
    let mut st = Stepper { d, c, tol, stats: IntegrationStats::default() };
    let mut f = f0;
    let mut h = f64::INFINITY;
    for w in path.points.windows(2) {
        if c == 0.0 {
            samples.push(Sample { z: w[1], f, dir: d.alpha().eval(w[1]) * f });
        } else {
            if !h.is_finite() {
                h = 0.05 * (w[1] - w[0]).norm();
            }
            let (fe, he) = st.segment(w[0], w[1], f, h, &mut samples)?;
            f = fe;
            h = he;
        }
        waypoints.push(samples.len() - 1);
    }
    Ok(NullCurveSolution { data: d, c, path: path.clone(), samples, waypoints, tol, stats: st.stats, dual: false })
}

impl<'a> NullCurveSolution<'a> {
    pub fn end(&self) -> &Sample {
        self.samples.last().expect("non-empty")
    }

    /// Sample at the `k`-th waypoint.
    pub fn at_waypoint(&self, k: usize) -> &Sample {
        &self.samples[self.waypoints[k]]
    }

    /// Value at `z`: the nearest stored sample, continued along a straight
    /// segment when `z` is not itself a sample.
    pub fn at(&self, z: C64) -> Result<Sample> {
        let best = self
            .samples
            .iter()
            .min_by(|a, b| (a.z - z).norm().total_cmp(&(b.z - z).norm()))
            .expect("non-empty");
        if (best.z - z).norm() <= 1e-13 * (1.0 + z.norm()) {
            return Ok(*best);
        }
        let base = if self.dual { best.f.inverse() } else { best.f };
        let ext = integrate(self.data, self.c, &PolyPath::new(vec![best.z, z])?, base, self.tol)?;
        let s = *ext.end();
        Ok(if self.dual { dual_sample(&s) } else { s })
    }

    /// Largest `|det F - 1|` over all samples.
    pub fn det_drift(&self) -> f64 {
        self.samples.iter().map(|s| (s.f.det() - ONE).norm()).fold(0.0, f64::max)
    }
}

fn dual_sample(s: &Sample) -> Sample {
    let fi = s.f.inverse();
    Sample { z: s.z, f: fi, dir: -(fi * s.dir * fi) }
}

/// `F ↦ F⁻¹`: the dual null curve, whose equation is `dF⁻¹ = -c F⁻¹ α dz`.
pub fn dualize<'a>(sol: &NullCurveSolution<'a>) -> NullCurveSolution<'a> {
    let mut out = sol.clone();
    out.samples = sol.samples.iter().map(dual_sample).collect();
    out.dual = !sol.dual;
    out
}

/// `F ↦ F a⁻¹`: another null curve with the same `G` and `Q`.
pub fn deform_in_d<'a>(sol: &NullCurveSolution<'a>, a: &Mat2C) -> Result<NullCurveSolution<'a>> {
    let e = (a.det() - ONE).norm();
    if e > crate::algebra::DEFAULT_TOL {
        return Err(Error::InvalidMatrix(e));
    }
    let ai = a.inverse();
    let mut out = sol.clone();
    for s in &mut out.samples {
        s.f = s.f * ai;
        s.dir = s.dir * ai;
    }
    Ok(out)
}

fn ratio_checked(top: C64, bottom: C64, top2: C64, bottom2: C64) -> Result<ExtC> {
    let a = ExtC::from_ratio(top, bottom);
    let b = ExtC::from_ratio(top2, bottom2);
    let scale = top.norm() + bottom.norm();
    let scale2 = top2.norm() + bottom2.norm();
    if scale == 0.0 && scale2 == 0.0 {
        return Err(Error::SingularPoint("degenerate derivative".into()));
    }
    if scale == 0.0 {
        return Ok(b);
    }
    if scale2 == 0.0 {
        return Ok(a);
    }
    if a.chordal(&b) > 1e-7 {
        return Err(Error::Accuracy(format!("Gauss map ratios disagree: {a} vs {b}")));
    }
    Ok(a)
}

/// `dF₁₁/dF₂₁`, cross-checked against `dF₁₂/dF₂₂`.
pub fn hyperbolic_gauss(sol: &NullCurveSolution, z: C64) -> Result<ExtC> {
    let s = sol.at(z)?;
    let m = s.dir;
    ratio_checked(m.a11, m.a21, m.a12, m.a22)
}

/// `(F⁻¹dF)₁₁/(F⁻¹dF)₂₁`, cross-checked against `-(F⁻¹dF)₂₂/(F⁻¹dF)₂₁`.
pub fn secondary_gauss(sol: &NullCurveSolution, z: C64) -> Result<ExtC> {
    let s = sol.at(z)?;
    let m = s.f.inverse() * s.dir;
    ratio_checked(m.a11, m.a21, -m.a22, m.a21)
}

/// Derivatives `M, M', M'', M'''` of `M = F⁻¹ α F` (the direction of
/// `F⁻¹dF`), from the exact jets of `α`.
fn log_derivative_jets(sol: &NullCurveSolution, s: &Sample) -> [Mat2C; 4] {
    let [a0, a1, a2, a3] = sol.data.alpha().jets(s.z);
    let c = C64::new(sol.c, 0.0);
    let comm = |x: &Mat2C, y: &Mat2C| x.commutator(y);
    let x2 = a2 + comm(&a1, &a0).scale(c);
    let x3 = a3 + comm(&a2, &a0).scale(c * 2.0) + comm(&comm(&a1, &a0), &a0).scale(c * c);
    let fi = s.f.inverse();
    [fi * a0 * s.f, fi * a1 * s.f, fi * x2 * s.f, fi * x3 * s.f]
}

/// Schwarzian derivative of the secondary Gauss map at `z`.
pub fn secondary_schwarzian(sol: &NullCurveSolution, z: C64) -> Result<C64> {
    if sol.dual {
        // The secondary map of F⁻¹ is the hyperbolic Gauss map G of F.
        return crate::wdata::gauss_schwarzian(&sol.data.g, z);
    }
    let s = sol.at(z)?;
    let j = log_derivative_jets(sol, &s);
    let fact = [1.0, 1.0, 0.5, 1.0 / 6.0];
    let top: [C64; 4] = std::array::from_fn(|k| j[k].a11 * fact[k]);
    let bottom: [C64; 4] = std::array::from_fn(|k| j[k].a21 * fact[k]);
    if bottom[0].norm() < 1e-300 {
        return Err(Error::SingularPoint(format!("{z}")));
    }
    let g = series_div(&top, &bottom);
    if g[1].norm() < 1e-300 {
        return Err(Error::SingularPoint(format!("{z}")));
    }
    Ok(schwarzian_of_jet(&g))
}

/// `f = (1/|c|) F F*`. For negative `c` this is `-(1/c) F F*`, the same point
/// up to the sign convention of the hyperboloid sheet.
pub fn surface_point(f: &Mat2C, c: f64) -> Result<HermitianPoint> {
    if c == 0.0 {
        return Err(Error::InvalidPoint("c = 0 has no hyperbolic realization".into()));
    }
    let x = (*f * f.adjoint()).scale_re(1.0 / c.abs());
    let x = Mat2C::new(
        C64::new(x.a11.re, 0.0),
        x.a12,
        x.a12.conj(),
        C64::new(x.a22.re, 0.0),
    );
    Ok(HermitianPoint { x, c })
}

/// Monodromy around a named loop, with `F(z0) = I`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonodromyRecord {
    pub loop_name: String,
    pub rho: Mat2C,
    /// Sign of the SL(2,ℂ) representative (`+1` when `Re tr ρ ≥ 0`); the
    /// PSL lift itself is left unresolved.
    pub sign_flag: i8,
    /// Difference to the same monodromy integrated at a tenth of the tolerance.
    pub residual_constancy: f64,
    pub tol: f64,
}

fn loop_monodromy(d: &WeierstrassData, c: f64, path: &PolyPath, tol: f64) -> Result<Mat2C> {
    if !path.closed {
        return Err(Error::Path("monodromy needs a closed loop".into()));
    }
    Ok(integrate(d, c, path, Mat2C::identity(), tol)?.end().f)
}

pub fn monodromy(d: &WeierstrassData, c: f64, loop_name: &str, tol: f64) -> Result<MonodromyRecord> {
    let path = d.loop_path(loop_name)?;
    monodromy_of_path(d, c, loop_name, path, tol)
}

/// As [`monodromy`] for an arbitrary closed loop at the basepoint.
pub fn monodromy_of_path(
    d: &WeierstrassData,
    c: f64,
    name: &str,
    path: &PolyPath,
    tol: f64,
) -> Result<MonodromyRecord> {
    let rho = loop_monodromy(d, c, path, tol)?;
    let fine = loop_monodromy(d, c, path, tol / 10.0)?;
    Ok(MonodromyRecord {
        loop_name: name.to_string(),
        rho,
        sign_flag: if rho.trace().re >= 0.0 { 1 } else { -1 },
        residual_constancy: rho.dist(&fine),
        tol,
    })
}

/// `∂ρ/∂c` at `c = 0`, which is `∮ α`.
pub fn monodromy_c_derivative(d: &WeierstrassData, loop_name: &str) -> Result<Mat2C> {
    alpha_integral(d, d.loop_path(loop_name)?)
}

/// `ρ̂` with `conj(F∘μ) = σ⁻¹ F ρ̂`, from three probes around the anchor.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReflectionRecord {
    pub label: (usize, usize),
    pub rho_hat: Mat2C,
    /// Largest deviation between the probe estimates.
    pub spread: f64,
    /// `‖ρ̂ conj(ρ̂) - I‖`.
    pub conj_residual: f64,
    pub tol: f64,
}

fn probe_radius(d: &WeierstrassData, w: C64) -> f64 {
    let dist = d.singular_points().iter().map(|p| (p - w).norm()).fold(f64::INFINITY, f64::min);
    (0.1 * dist).min(0.05)
}

fn reflection_once(
    d: &WeierstrassData,
    c: f64,
    refl: &Reflection,
    f0: &Mat2C,
    tol: f64,
) -> Result<(Mat2C, f64)> {
    let anchor = if refl.anchor.points.len() > 1 {
        integrate(d, c, &refl.anchor, *f0, tol)?.end().f
    } else {
        *f0
    };
    let w = refl.anchor_point();
    let r = probe_radius(d, w);
    let mut estimates = Vec::with_capacity(3);
    for k in 0..3 {
        let z = w + C64::from_polar(r, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / 3.0);
        let mz = refl.apply_finite(z)?;
        let fz = integrate(d, c, &PolyPath::new(vec![w, z])?, anchor, tol)?.end().f;
        let fm = if (mz - w).norm() < 1e-15 {
            anchor
        } else {
            integrate(d, c, &PolyPath::new(vec![w, mz])?, anchor, tol)?.end().f
        };
        estimates.push(fz.inverse() * refl.sigma * fm.conj());
    }
    let spread = estimates
        .iter()
        .flat_map(|a| estimates.iter().map(move |b| a.dist(b)))
        .fold(0.0, f64::max);
    Ok((estimates[0], spread))
}

/// Reflection matrix for `refl` given `F(z0) = f0`; retried once at a tenth
/// of the tolerance when the probes disagree by more than 1e-6.
pub fn reflection_record(
    d: &WeierstrassData,
    c: f64,
    refl: &Reflection,
    f0: &Mat2C,
    tol: f64,
) -> Result<ReflectionRecord> {
    let (mut rho, mut spread) = reflection_once(d, c, refl, f0, tol)?;
    let mut used = tol;
    if spread > 1e-6 {
        used = tol / 10.0;
        (rho, spread) = reflection_once(d, c, refl, f0, used)?;
        if spread > 1e-6 {
            return Err(Error::Accuracy(format!(
                "reflection {:?}: probe estimates differ by {spread:e}",
                refl.label
            )));
        }
    }
    Ok(ReflectionRecord {
        label: refl.label,
        rho_hat: rho,
        spread,
        conj_residual: rho.times_conj().dist(&Mat2C::identity()),
        tol: used,
    })
}

pub fn reflection_matrix(
    d: &WeierstrassData,
    c: f64,
    refl: &Reflection,
    f0: &Mat2C,
    tol: f64,
) -> Result<Mat2C> {
    Ok(reflection_record(d, c, refl, f0, tol)?.rho_hat)
}

#[cfg(test)]
mod tests;
