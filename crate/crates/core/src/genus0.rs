//! Closed-form analytics for genus-zero surfaces with `N` catenoid-cousin ends
//! and symmetry type `(m, n)`: existence ranges in `c`, the angle `θ(c)`,
//! the σ-matrices of the three symmetry planes, total absolute curvature.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_integer::Roots;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::{c as cx, Mat2C, C64, I};
use crate::error::{Error, Result};

type Q = Rational64;

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// `1/2 < 1/m + 1/n` with `m ≥ 2`, `n ≥ 3`.
pub fn check_admissible(m: usize, n: usize) -> Result<()> {
    if m < 2 || n < 3 || 2 * (m + n) <= m * n {
        return Err(Error::Inadmissible(format!("(m, n) = ({m}, {n})")));
    }
    Ok(())
}

/// Number of ends: `4n / (2m + 2n - mn)`.
pub fn ends(m: usize, n: usize) -> Result<usize> {
    check_admissible(m, n)?;
    Ok(4 * n / (2 * m + 2 * n - m * n))
}

/// `λ = √(1 - 4c)`.
pub fn lambda_of_c(c: f64) -> Result<f64> {
    if c >= 0.25 || !c.is_finite() {
        return Err(Error::OutsideValidity(format!("c = {c} must be below 1/4")));
    }
    Ok((1.0 - 4.0 * c).sqrt())
}

/// `θ(c)` on the branch of `cos mθ = cos πλ` that is continuous in `c` with
/// `θ(0) = π/m`, followed from 0 in steps of `min(1e-3, |c|/50)`.
pub fn theta_of_c(m: usize, n: usize, c: f64) -> Result<f64> {
    check_admissible(m, n)?;
    lambda_of_c(c)?;
    let mf = m as f64;
    if c == 0.0 {
        return Ok(PI / mf);
    }
    let step = (1e-3f64).min(c.abs() / 50.0);
    let count = (c.abs() / step).ceil() as usize;
    let dc = c / count as f64;
    // φ = mθ; at c = 0 the two branches πλ and 2π - πλ cross with slopes ∓2π.
    let mut phi = PI;
    let mut slope = 2.0 * PI;
    let mut prev_c = 0.0;
    for k in 1..=count {
        let ck = if k == count { c } else { dc * k as f64 };
        let target = (PI * lambda_of_c(ck)?).cos().clamp(-1.0, 1.0).acos();
        let predicted = phi + slope * (ck - prev_c);
        let base = (predicted / (2.0 * PI)).round() * 2.0 * PI;
        let next = [-2.0 * PI, 0.0, 2.0 * PI]
            .iter()
            .flat_map(|s| [base + s + target, base + s - target])
            .min_by(|a, b| (a - predicted).abs().total_cmp(&(b - predicted).abs()))
            .expect("candidates");
        slope = (next - phi) / (ck - prev_c);
        phi = next;
        prev_c = ck;
        let theta = phi / mf;
        if theta <= 0.0 || theta >= PI {
            return Err(Error::BranchFailure(format!("θ = {theta} left (0, π) at c = {ck}")));
        }
    }
    Ok(phi / mf)
}

/// `α(c) = cos θ(c) / sin(π/n)`.
pub fn alpha_of_c(m: usize, n: usize, c: f64) -> Result<f64> {
    Ok(theta_of_c(m, n, c)?.cos() / (PI / n as f64).sin())
}

/// Open interval with rational endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Interval {
    #[serde(serialize_with = "ser_q")]
    pub lo: Q,
    #[serde(serialize_with = "ser_q")]
    pub hi: Q,
}

fn ser_q<S: serde::Serializer>(v: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(v))
}

fn fmt_q(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x > to_f64(&self.lo) && x < to_f64(&self.hi)
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // Typographic minus in text output; serialized forms keep ASCII.
        write!(f, "({}, {})", fmt_q(&self.lo).replace('-', "−"), fmt_q(&self.hi).replace('-', "−"))
    }
}

pub fn to_f64(v: &Q) -> f64 {
    *v.numer() as f64 / *v.denom() as f64
}

/// `(-¼[(2 - m/2 + m/n)² - 1], 0)` and `(0, ¼[1 - (m/2 - m/n)²])`.
pub fn c_range(m: usize, n: usize) -> Result<(Interval, Interval)> {
    check_admissible(m, n)?;
    let (mq, nq) = (Q::from(m as i64), Q::from(n as i64));
    let a = Q::from(2) - mq / 2 + mq / nq;
    let b = mq / 2 - mq / nq;
    let quarter = q(1, 4);
    let lo = -(quarter * (a * a - Q::one()));
    let hi = quarter * (Q::one() - b * b);
    Ok((Interval::new(lo, Q::zero()), Interval::new(Q::zero(), hi)))
}

/// The intervals of `c` where `cos πλ + 1 < 2 sin²(π/n)`: `I₀₊`, `I₀₋` and
/// `I_k = (-(k + 1/n)(k + 1 + 1/n), -(k - 1/n)(k + 1 - 1/n))` for `k = 1..=kmax`.
pub fn jm_intervals(n: usize, kmax: usize) -> Result<Vec<Interval>> {
    if n < 3 {
        return Err(Error::Inadmissible(format!("n = {n}")));
    }
    let nq = Q::from(n as i64);
    let inv = Q::one() / nq;
    let mut out = vec![
        Interval::new(Q::zero(), (nq - 1) / (nq * nq)),
        Interval::new(-(nq + 1) / (nq * nq), Q::zero()),
    ];
    for k in 1..=kmax as i64 {
        let k = Q::from(k);
        out.push(Interval::new(-(k + inv) * (k + 1 + inv), -(k - inv) * (k + 1 - inv)));
    }
    Ok(out)
}

/// `cos πλ + 1 < 2 sin²(π/n)`.
pub fn jm_criterion(n: usize, c: f64) -> Result<bool> {
    let l = lambda_of_c(c)?;
    let s = (PI / n as f64).sin();
    Ok((PI * l).cos() + 1.0 < 2.0 * s * s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExistenceFlag {
    /// `c = 0`: the minimal surface itself.
    Minimal,
    /// Inside the certified range of [`c_range`].
    Certified,
    /// `|α| < 1` outside the certified range.
    BeyondTheorem,
    /// `m = 2`, decided by the necessary and sufficient criterion.
    Criterion,
    /// `|α| ≥ 1`.
    NoNormalization,
    /// The continuous branch of `θ` could not be followed.
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Existence {
    pub exists: Option<bool>,
    pub alpha: Option<f64>,
    pub flag: ExistenceFlag,
}

/// Whether the normalization `β₁β₂ > 0` holds, i.e. `|α(c)| < 1`.
pub fn exists_cmc(m: usize, n: usize, c: f64) -> Result<Existence> {
    check_admissible(m, n)?;
    lambda_of_c(c)?;
    if c == 0.0 {
        return Ok(Existence { exists: Some(true), alpha: Some(alpha_of_c(m, n, 0.0)?), flag: ExistenceFlag::Minimal });
    }
    let alpha = match alpha_of_c(m, n, c) {
        Ok(a) => a,
        Err(Error::BranchFailure(_)) if m == 2 => {
            return Ok(Existence { exists: Some(jm_criterion(n, c)?), alpha: None, flag: ExistenceFlag::Criterion });
        }
        Err(Error::BranchFailure(_)) => {
            return Ok(Existence { exists: None, alpha: None, flag: ExistenceFlag::Undetermined });
        }
        Err(e) => return Err(e),
    };
    let ok = alpha.abs() < 1.0;
    let (neg, pos) = c_range(m, n)?;
    let flag = if !ok {
        ExistenceFlag::NoNormalization
    } else if neg.contains(c) || pos.contains(c) {
        ExistenceFlag::Certified
    } else {
        ExistenceFlag::BeyondTheorem
    };
    Ok(Existence { exists: Some(ok), alpha: Some(alpha), flag })
}

/// `TA = 2π[N(√(1-4c) - 1) + 2N - 2]`.
pub fn total_abs_curvature(ends: usize, c: f64) -> Result<f64> {
    let l = lambda_of_c(c)?;
    let n = ends as f64;
    Ok(2.0 * PI * (n * (l - 1.0) + 2.0 * n - 2.0))
}

fn rational_sqrt(v: Q) -> Option<Q> {
    if v.is_negative() {
        return None;
    }
    let (a, b) = (*v.numer(), *v.denom());
    let (ra, rb) = (a.sqrt(), b.sqrt());
    (ra * ra == a && rb * rb == b).then(|| Q::new(ra, rb))
}

/// `TA/π` at a rational `c` whose `1 - 4c` is a rational square.
pub fn total_abs_curvature_over_pi(ends: usize, c: Q) -> Option<Q> {
    let l = rational_sqrt(Q::one() - c * 4)?;
    let n = Q::from(ends as i64);
    Some(Q::from(2) * (n * (l - 1) + n * 2 - 2))
}

/// `(σ₁, σ₂, σ₃)` with `σ₁ = I`, `σ₂ = diag(e^{iπ/n}, e^{-iπ/n})` and
/// `σ₃ = ±i[[α₀e^{iπ/n}, β₀], [β₀, -α₀e^{-iπ/n}]]`, `α₀ = cos(π/m)/sin(π/n)`,
/// the sign chosen so that `tr σ₃ = 2cos(π/m)`.
pub fn sigma_triple(m: usize, n: usize) -> Result<[Mat2C; 3]> {
    check_admissible(m, n)?;
    let a0 = (PI / m as f64).cos() / (PI / n as f64).sin();
    if a0 * a0 > 1.0 {
        return Err(Error::Inadmissible(format!("α₀ = {a0}")));
    }
    let b0 = (1.0 - a0 * a0).sqrt();
    let e = C64::from_polar(1.0, PI / n as f64);
    let s3 = Mat2C::new(e * a0, cx(b0, 0.0), cx(b0, 0.0), -e.conj() * a0).scale(I);
    let s3 = if m >= 3 { -s3 } else { s3 };
    Ok([Mat2C::identity(), Mat2C::diag(e, e.conj()), s3])
}

/// One row of the existence table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub solid: String,
    pub ends: usize,
    pub m: usize,
    pub n: usize,
    pub c_negative: Interval,
    pub c_positive: Interval,
    /// Total absolute curvature ranges, in units of π.
    pub ta_negative: Interval,
    pub ta_positive: Interval,
}

pub fn table_row(solid: &str, m: usize, n: usize) -> Result<TableRow> {
    let ends = ends(m, n)?;
    let (neg, pos) = c_range(m, n)?;
    let ta = |c: Q| {
        total_abs_curvature_over_pi(ends, c)
            .ok_or_else(|| Error::InvalidData(format!("1 - 4c is not a rational square at c = {c}")))
    };
    // TA decreases in c.
    Ok(TableRow {
        solid: solid.to_string(),
        ends,
        m,
        n,
        c_negative: neg,
        c_positive: pos,
        ta_negative: Interval::new(ta(neg.hi)?, ta(neg.lo)?),
        ta_positive: Interval::new(ta(pos.hi)?, ta(pos.lo)?),
    })
}

/// Rows for the five regular solids.
pub fn platonic_table() -> Result<Vec<TableRow>> {
    [("Tetra", 3, 3), ("Hexa", 3, 4), ("Octa", 4, 3), ("Dodeca", 3, 5), ("Icosa", 5, 3)]
        .iter()
        .map(|&(s, m, n)| table_row(s, m, n))
        .collect()
}

fn fmt_pi_interval(iv: &Interval) -> String {
    let f = |v: &Q| if v.is_one() { "π".to_string() } else { format!("{}π", fmt_q(v)) };
    format!("({}, {})", f(&iv.lo), f(&iv.hi))
}

pub fn format_table(rows: &[TableRow]) -> String {
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            [
                r.solid.clone(),
                r.ends.to_string(),
                format!("({},{})", r.m, r.n),
                format!("{} ∪ {}", r.c_negative, r.c_positive),
                // Ascending order, so the positive-c range comes first.
                format!("{} ∪ {}", fmt_pi_interval(&r.ta_positive), fmt_pi_interval(&r.ta_negative)),
            ]
        })
        .collect();
    let header = ["Solid", "N", "(m,n)", "Range of c", "Range of TA"];
    let width: Vec<usize> = (0..5)
        .map(|k| cells.iter().map(|r| r[k].chars().count()).chain([header[k].len()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    let mut line = |row: &[String]| {
        let parts: Vec<String> = row
            .iter()
            .zip(&width)
            .map(|(s, w)| format!("{s}{}", " ".repeat(w - s.chars().count())))
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&header.map(String::from));
    for r in &cells {
        line(r);
    }
    out
}
