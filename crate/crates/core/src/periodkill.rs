//! Normalization of the reflection matrices, the SU(2) period residual, the
//! Broyden period solver and the commutant classification.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::algebra::{c as cx, su2_log_axis, ExtC, Mat2C, C64, ONE, ZERO};
use crate::error::{Error, Result};
use crate::nullcurve::{integrate, reflection_record, NullCurveSolution};
use crate::wdata::poly::{Poly, RationalMap};
use crate::wdata::{euclid_period, sigma_from_normal, GaussMap, PolyPath, Reflection, WeierstrassData};

pub type Label = (usize, usize);

/// Tolerance for commutators and central elements.
pub const COMMUTANT_TOL: f64 = 1e-9;

fn ser_labels<S: Serializer, V: Serialize>(m: &BTreeMap<Label, V>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let named: BTreeMap<String, &V> = m.iter().map(|((j, k), v)| (format!("{j},{k}"), v)).collect();
    named.serialize(s)
}

/// Parameters of a matrix `[[p, iγ₁], [iγ₂, p̄]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReflectionParams {
    #[serde(with = "crate::algebra::cser")]
    pub p: C64,
    pub gamma1: f64,
    pub gamma2: f64,
    /// Distance of the matrix from that form (`conj` residual and real parts of the off-diagonal).
    pub form_residual: f64,
}

impl ReflectionParams {
    pub fn of(a: &Mat2C) -> Self {
        let form = (a.a22 - a.a11.conj()).norm() + a.a12.re.abs() + a.a21.re.abs();
        ReflectionParams { p: a.a11, gamma1: a.a12.im, gamma2: a.a21.im, form_residual: form }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReflectionRep {
    #[serde(serialize_with = "ser_labels")]
    pub rho_hat: BTreeMap<Label, Mat2C>,
    #[serde(serialize_with = "ser_labels")]
    pub params: BTreeMap<Label, ReflectionParams>,
    /// Eigenvalue of `ρ̂(μ₂,₁)` with positive imaginary part.
    #[serde(with = "crate::algebra::cser")]
    pub xi: C64,
    /// Common off-diagonal value of `ρ̂(μ₃,₁)/i`.
    pub beta: f64,
    /// Gauge `g` such that the normalized curve is `F̌ g`, `F̌(z0) = I`.
    pub gauge: Mat2C,
}

/// The fixed curve of `z ↦ m(z̄)` through `z0`, as a polygon of `k` sides and
/// length about `len` starting at `z0`.
pub fn fixed_curve_path(refl: &Reflection, z0: C64, len: f64, k: usize) -> Result<PolyPath> {
    let back = refl.apply(z0);
    if back.chordal(&ExtC::Finite(z0)) > 1e-12 {
        return Err(Error::InvalidData(format!("basepoint {z0} is not fixed by {:?}", refl.label)));
    }
    let m = &refl.mobius;
    let s = ONE / m.det().sqrt();
    let (a, c) = (m.a11 * s, m.a21 * s);
    if c.norm() < 1e-14 {
        // Line: the tangent v satisfies m'(z̄0) v̄ = v.
        let turn = refl.map_derivative(z0);
        let v = C64::from_polar(1.0, 0.5 * turn.arg());
        return PolyPath::through((0..=k).map(|j| z0 + v * (len * j as f64 / k as f64)));
    }
    let center = a / c;
    let r = (z0 - center).norm();
    let span = len / r;
    PolyPath::through((0..=k).map(|j| center + (z0 - center) * C64::from_polar(1.0, span * j as f64 / k as f64)))
}

/// Step I: `F` with `F(z0) = I`, integrated along the fixed curve of `μ₁,₁`.
pub fn step1_base(d: &WeierstrassData, c: f64, tol: f64) -> Result<NullCurveSolution<'_>> {
    let r = d.reflection((1, 1))?;
    let z0 = d.basepoint;
    let clearance = d.singular_points().iter().map(|p| (p - z0).norm()).fold(f64::INFINITY, f64::min);
    let path = fixed_curve_path(r, z0, 0.5 * clearance.min(1.0), 8)?;
    integrate(d, c, &path, Mat2C::identity(), tol)
}

/// Step II: real `u` with `u⁻¹ ρ̂ u = diag(ξ, ξ̄)`, `Im ξ > 0`.
pub fn step2_diagonalize(rho2: &Mat2C) -> Result<(Mat2C, C64)> {
    let pr = ReflectionParams::of(rho2);
    let p = pr.p;
    if p.re.abs() >= 1.0 || p.im <= 0.0 {
        return Err(Error::OutsideValidity(format!("ρ̂₂ has p = {p}; need |Re p| < 1 and Im p > 0")));
    }
    let s = (1.0 - p.re * p.re).sqrt();
    let k = p.im + s;
    let norm = (2.0 * s * k).sqrt();
    let u = Mat2C::real(k / norm, -pr.gamma1 / norm, pr.gamma2 / norm, k / norm);
    Ok((u, cx(p.re, s)))
}

/// Step III: `t = (β₁/β₂)^{1/4}`, `a = diag(t, 1/t)`, after which both
/// off-diagonal entries of `ρ̂₃` equal `iβ`, `β = ±√(β₁β₂)`.
pub fn step3_scale(rho3: &Mat2C) -> Result<(Mat2C, f64)> {
    let pr = ReflectionParams::of(rho3);
    let (b1, b2) = (pr.gamma1, pr.gamma2);
    if b1 * b2 <= 0.0 || !(b1 * b2).is_finite() {
        return Err(Error::NoNormalization(format!("β₁β₂ = {} is not positive", b1 * b2)));
    }
    let t = (b1 / b2).powf(0.25);
    Ok((Mat2C::real(t, 0.0, 0.0, 1.0 / t), b1.signum() * (b1 * b2).sqrt()))
}

/// `ρ̂ ↦ g⁻¹ ρ̂ ḡ`, the effect of `F ↦ F g`.
pub fn regauge(rho: &Mat2C, g: &Mat2C) -> Mat2C {
    g.inverse() * *rho * g.conj()
}

/// Steps II and III applied to matrices computed with `F(z0) = I`.
pub fn normalize_matrices(raw: &BTreeMap<Label, Mat2C>) -> Result<ReflectionRep> {
    let mut gauge = Mat2C::identity();
    let mut xi = ZERO;
    let mut beta = 0.0;
    if let Some(r2) = raw.get(&(2, 1)) {
        let (u, x) = step2_diagonalize(r2)?;
        gauge = u;
        xi = x;
        if let Some(r3) = raw.get(&(3, 1)) {
            let (a, b) = step3_scale(&regauge(r3, &gauge))?;
            gauge = gauge * a;
            beta = b;
        }
    }
    let rho_hat: BTreeMap<Label, Mat2C> = raw.iter().map(|(l, r)| (*l, regauge(r, &gauge))).collect();
    let params = rho_hat.iter().map(|(l, r)| (*l, ReflectionParams::of(r))).collect();
    Ok(ReflectionRep { rho_hat, params, xi, beta, gauge })
}

/// Reflection matrices of every symmetry with `F(z0) = I`, then Steps II-III.
pub fn normalize(d: &WeierstrassData, c: f64, tol: f64) -> Result<ReflectionRep> {
    let raw: Vec<(Label, Mat2C)> = d
        .reflections
        .par_iter()
        .map(|r| reflection_record(d, c, r, &Mat2C::identity(), tol).map(|x| (r.label, x.rho_hat)))
        .collect::<Result<_>>()?;
    normalize_matrices(&raw.into_iter().collect())
}

/// `(γ₁ - γ₂)` for every label `(j, k)` with `k ≥ 2`.
pub fn su2_residual(rep: &ReflectionRep) -> Vec<f64> {
    rep.params.iter().filter(|(l, _)| l.1 >= 2).map(|(_, p)| p.gamma1 - p.gamma2).collect()
}

/// `ρ̂(μ_{j₁}) conj(ρ̂(μ_{j₂})) ρ̂(μ_{j₃}) ⋯` for an even word.
pub fn rho_from_word(rep: &ReflectionRep, word: &[Label]) -> Result<Mat2C> {
    if word.len() % 2 == 1 {
        return Err(Error::OddWord(word.len()));
    }
    let mut out = Mat2C::identity();
    for (i, l) in word.iter().enumerate() {
        let r = rep.rho_hat.get(l).ok_or_else(|| Error::InvalidData(format!("no reflection {l:?}")))?;
        out = out * if i % 2 == 0 { *r } else { r.conj() };
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CommutantClass {
    Point,
    /// Axis `T` normalized to eigenvalues `±i`.
    Geodesic { axis: Mat2C },
    All,
}

fn is_central(a: &Mat2C) -> bool {
    let id = Mat2C::identity();
    a.dist(&id) <= COMMUTANT_TOL || a.dist(&-id) <= COMMUTANT_TOL
}

pub fn is_reducible(gens: &[Mat2C]) -> bool {
    gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| a.commutator(b).norm() <= COMMUTANT_TOL))
}

/// Fixed-point set in H³ of the group generated by `gens ⊂ SU(2)`.
pub fn classify_commutant(gens: &[Mat2C]) -> Result<CommutantClass> {
    for g in gens {
        let res = (*g * g.adjoint()).dist(&Mat2C::identity()).max((g.det() - ONE).norm());
        if res > COMMUTANT_TOL {
            return Err(Error::NotSu2(res));
        }
    }
    let Some(first) = gens.iter().find(|g| !is_central(g)) else {
        return Ok(CommutantClass::All);
    };
    if !is_reducible(gens) {
        return Ok(CommutantClass::Point);
    }
    let (t, theta) = su2_log_axis(first)?;
    Ok(CommutantClass::Geodesic { axis: t.scale_re(1.0 / theta) })
}

/// `ρ̂(μ₁,₁) conj(ρ̂(μ))` for every other reflection.
pub fn rotation_generators(rep: &ReflectionRep) -> Vec<Mat2C> {
    let Some(first) = rep.rho_hat.keys().next().copied() else { return vec![] };
    rep.rho_hat
        .keys()
        .filter(|l| **l != first)
        .map(|l| rho_from_word(rep, &[first, *l]).expect("even word"))
        .collect()
}

pub type DataFn = dyn Fn(&[f64]) -> Result<WeierstrassData> + Send + Sync;
pub type PeriodFn = dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync;

/// A `d`-parameter deformation of Weierstrass data with its Euclidean
/// period map `Λ`.
#[derive(Clone)]
pub struct FamilySpec {
    pub name: String,
    pub dim: usize,
    pub data: Arc<DataFn>,
    pub per_labels: Vec<Label>,
    pub euclid_period: Arc<PeriodFn>,
    /// Largest `|c|` the solver accepts.
    pub c_limit: f64,
}

impl std::fmt::Debug for FamilySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FamilySpec").field("name", &self.name).field("dim", &self.dim).finish()
    }
}

/// `G = z`, `Q = (z⁻² + λ/(πz)) dz²`, with the reflection `z ↦ z̄` read at 1
/// and, continued through the upper half plane, at -1. The real period of the
/// clockwise unit circle is `2λ` along the plane normal, so `Per(λ) = λ`.
pub fn synthetic_data(lambda: f64) -> Result<WeierstrassData> {
    let one = cx(1.0, 0.0);
    let q = RationalMap::new(Poly::new(vec![one, cx(lambda / PI, 0.0)]), Poly::monomial(one, 2));
    let normal = [0.0, 1.0, 0.0];
    let sigma = sigma_from_normal(normal)?;
    let arc: Vec<C64> = (0..=32).map(|k| C64::from_polar(1.0, PI * k as f64 / 32.0)).collect();
    let refl = |label, anchor| Reflection { label, mobius: Mat2C::identity(), sigma, normal: Some(normal), anchor };
    let reflections = vec![refl((1, 1), PolyPath::point(one)), refl((1, 2), PolyPath::new(arc)?)];
    let mut loops = BTreeMap::new();
    loops.insert("per".to_string(), PolyPath::circle(ZERO, one, 64)?.reversed());
    Ok(WeierstrassData::new(
        format!("synthetic({lambda})"),
        GaussMap::Rational(RationalMap::z()),
        q,
        vec![ExtC::Finite(ZERO), ExtC::Infinity],
        reflections,
        loops,
        one,
    ))
}

pub fn synthetic_family() -> FamilySpec {
    FamilySpec {
        name: "synthetic".into(),
        dim: 1,
        data: Arc::new(|l: &[f64]| synthetic_data(l[0])),
        per_labels: vec![(1, 2)],
        euclid_period: Arc::new(|l: &[f64]| {
            let d = synthetic_data(l[0])?;
            let (re, _) = euclid_period(&d, d.loop_path("per")?)?;
            Ok(vec![0.5 * re[1]])
        }),
        c_limit: 0.2,
    }
}

/// Family without parameters around a fixed surface.
pub fn rigid_family(d: WeierstrassData) -> FamilySpec {
    let d = Arc::new(d);
    FamilySpec {
        name: d.name.clone(),
        dim: 0,
        data: Arc::new(move |_| Ok((*d).clone())),
        per_labels: vec![],
        euclid_period: Arc::new(|_| Ok(vec![])),
        c_limit: 0.2,
    }
}

/// Residual components for the family's labels, in order.
pub fn family_residual(fam: &FamilySpec, c: f64, lambda: &[f64], tol: f64) -> Result<(Vec<f64>, ReflectionRep)> {
    let d = (fam.data)(lambda)?;
    let rep = normalize(&d, c, tol)?;
    let r = fam
        .per_labels
        .iter()
        .map(|l| {
            rep.params
                .get(l)
                .map(|p| p.gamma1 - p.gamma2)
                .ok_or_else(|| Error::InvalidData(format!("family has no reflection {l:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((r, rep))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub family: String,
    pub c: f64,
    pub lambda: Vec<f64>,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    pub residual: Vec<f64>,
    pub rep: ReflectionRep,
    pub su2_defect: f64,
    pub reducible: bool,
    pub commutant: Option<CommutantClass>,
}

/// Largest distance of a normalized `ρ̂` from SU(2).
pub fn su2_defect(rep: &ReflectionRep) -> f64 {
    rep.rho_hat
        .values()
        .map(|r| (*r * r.adjoint()).dist(&Mat2C::identity()).max((r.det() - ONE).norm()))
        .fold(0.0, f64::max)
}

/// Broyden iteration on `λ ↦ (γ₁ - γ₂)(c, λ)` from `λ = 0`, with the Jacobian
/// seeded by `2c ∂Λ/∂λ`.
pub fn solve_lambda(fam: &FamilySpec, c: f64, tol: f64, max_iter: usize) -> Result<SolveReport> {
    if c.abs() > fam.c_limit {
        return Err(Error::OutsideValidity(format!("|c| = {} exceeds the limit {}", c.abs(), fam.c_limit)));
    }
    let ode_tol = (tol * 1e-2).clamp(1e-13, 1e-10);
    let dim = fam.dim;
    let mut lambda = DVector::<f64>::zeros(dim);
    let (r0, mut rep) = family_residual(fam, c, lambda.as_slice(), ode_tol)?;
    let mut r = DVector::from_vec(r0);
    let mut history = vec![r.norm()];
    let mut iterations = 0;
    if dim > 0 && r.norm() > tol {
        let h = 1e-5;
        let mut jac = DMatrix::<f64>::zeros(dim, dim);
        let p0 = (fam.euclid_period)(lambda.as_slice())?;
        for j in 0..dim {
            let mut l = lambda.clone();
            l[j] += h;
            let p = (fam.euclid_period)(l.as_slice())?;
            for i in 0..dim {
                jac[(i, j)] = 2.0 * c * (p[i] - p0[i]) / h;
            }
        }
        while r.norm() > tol {
            if iterations >= max_iter {
                return Err(Error::NonConvergence { iterations, residual: r.norm() });
            }
            iterations += 1;
            let step = jac.clone().lu().solve(&(-&r)).ok_or(Error::SingularJacobian)?;
            if !step.iter().all(|x| x.is_finite()) {
                return Err(Error::SingularJacobian);
            }
            lambda += &step;
            let (rn, repn) = family_residual(fam, c, lambda.as_slice(), ode_tol)?;
            let rn = DVector::from_vec(rn);
            let dr = &rn - &r;
            let ss = step.dot(&step);
            if ss > 0.0 {
                jac += (dr - &jac * &step) * step.transpose() / ss;
            }
            r = rn;
            rep = repn;
            history.push(r.norm());
        }
    }
    let gens = rotation_generators(&rep);
    let reducible = is_reducible(&gens);
    let commutant = classify_commutant(&gens).ok();
    Ok(SolveReport {
        family: fam.name.clone(),
        c,
        lambda: lambda.as_slice().to_vec(),
        iterations,
        residual_history: history,
        residual: r.as_slice().to_vec(),
        su2_defect: su2_defect(&rep),
        rep,
        reducible,
        commutant,
    })
}
