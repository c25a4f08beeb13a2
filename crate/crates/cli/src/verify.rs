//! Invariant suites behind `cmcforge verify`.

use std::f64::consts::PI;

use cmcforge::algebra::{act_on_point, from_ball, to_ball, BallPoint, Mat2C, C64};
use cmcforge::genus0::{c_range, format_table, platonic_table};
use cmcforge::nullcurve::{integrate, monodromy, DEFAULT_ODE_TOL};
use cmcforge::periodkill::{normalize, su2_defect};
use cmcforge::surface::{build_fundamental_mesh, GridSpec, Pipeline, CONFORMALITY_TOL};
use cmcforge::wdata::{catalog, catalog_names, catenoid, euclid_period, PolyPath};

use crate::commands::CliError;

pub const SUITES: [&str; 6] = ["algebra", "integration", "reflections", "ranges", "periods", "surface"];

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, value: f64, bound: f64) -> Check {
    Check { name: name.into(), pass: value <= bound, detail: format!("{value:.3e} <= {bound:.0e}") }
}

fn failed(name: impl Into<String>, e: impl std::fmt::Display) -> Check {
    Check { name: name.into(), pass: false, detail: e.to_string() }
}

pub fn run_suite(name: &str) -> Result<Vec<Check>, CliError> {
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        s => return Err(CliError::Usage(format!("unknown suite `{s}`; expected all or one of {}", SUITES.join(", ")))),
    };
    Ok(names.into_iter().flat_map(|s| match s {
        "algebra" => algebra(),
        "integration" => integration(),
        "reflections" => reflections(),
        "ranges" => ranges(),
        "periods" => periods(),
        _ => surface(),
    }).collect())
}

fn algebra() -> Vec<Check> {
    let c = 0.3;
    let (s, t) = (0.6f64.sin(), 0.6f64.cos());
    let u = Mat2C::new(C64::new(t, 0.0), C64::new(0.0, s), C64::new(0.0, s), C64::new(t, 0.0));
    let mut worst_det = 0.0f64;
    let mut worst_ball = 0.0f64;
    for k in 0..20 {
        let y = [0.1 * k as f64, -0.05 * k as f64, 0.02 * k as f64];
        let p = match from_ball(&BallPoint { y, radius: 1.0 / c }, c) {
            Ok(p) => p,
            Err(e) => return vec![failed("algebra.ball", e)],
        };
        let moved = match act_on_point(&u, &p) {
            Ok(q) => q,
            Err(e) => return vec![failed("algebra.isometry", e)],
        };
        worst_det = worst_det.max((moved.x.det().re * c * c - 1.0).abs());
        if let Ok(b) = to_ball(&p) {
            worst_ball = worst_ball.max((0..3).map(|i| (b.y[i] - y[i]).abs()).fold(0.0, f64::max));
        }
    }
    vec![check("algebra.det_after_isometry", worst_det, 1e-8), check("algebra.ball_round_trip", worst_ball, 1e-10)]
}

fn integration() -> Vec<Check> {
    let d = catenoid();
    let mut out = Vec::new();
    for c in [0.1, 0.1875, -0.2] {
        match monodromy(&d, c, "end", DEFAULT_ODE_TOL) {
            Ok(m) => {
                let law = 2.0 * (PI * (1.0 - 4.0 * c).sqrt()).cos().abs();
                out.push(check(format!("integration.trace_law(c={c})"), (m.rho.trace().norm() - law).abs(), 1e-6));
            }
            Err(e) => out.push(failed(format!("integration.trace_law(c={c})"), e)),
        }
        let path = d.loop_path("end").cloned();
        match path.map_err(CliError::from).and_then(|p| Ok(integrate(&d, c, &p, Mat2C::identity(), DEFAULT_ODE_TOL)?)) {
            Ok(sol) => out.push(check(format!("integration.det(c={c})"), sol.det_drift(), 1e-8)),
            Err(e) => out.push(failed(format!("integration.det(c={c})"), e)),
        }
    }
    out
}

/// A value of `c` inside the certified range of each surface.
fn sample_c(name: &str) -> Option<f64> {
    let d = catalog(name).ok()?;
    d.reflections.len().checked_sub(3)?;
    match d.symmetry {
        Some((m, n)) => {
            let (_, pos) = c_range(m, n).ok()?;
            Some(0.5 * cmcforge::genus0::to_f64(&pos.hi))
        }
        None => Some(0.1),
    }
}

fn reflections() -> Vec<Check> {
    let mut out = Vec::new();
    for name in catalog_names() {
        let Ok(d) = catalog(&name) else { continue };
        let sigma = d.reflections.iter().map(|r| r.sigma.times_conj().dist(&Mat2C::identity())).fold(0.0, f64::max);
        out.push(check(format!("reflections.sigma({name})"), sigma, 1e-8));
        let Some(c) = sample_c(&name) else { continue };
        match normalize(&d, c, DEFAULT_ODE_TOL) {
            Ok(rep) => {
                let r = rep.rho_hat.values().map(|r| r.times_conj().dist(&Mat2C::identity())).fold(0.0, f64::max);
                out.push(check(format!("reflections.rho_hat({name}, c={c})"), r, 1e-8));
                out.push(check(format!("reflections.su2({name}, c={c})"), su2_defect(&rep), 1e-6));
            }
            Err(e) => out.push(failed(format!("reflections.rho_hat({name}, c={c})"), e)),
        }
    }
    out
}

fn ranges() -> Vec<Check> {
    let expected = [
        ("Tetra", "(−5/16, 0) ∪ (0, 3/16)", "(8π, 12π) ∪ (12π, 16π)"),
        ("Hexa", "(−9/64, 0) ∪ (0, 7/64)", "(24π, 28π) ∪ (28π, 32π)"),
        ("Octa", "(−7/36, 0) ∪ (0, 5/36)", "(16π, 20π) ∪ (20π, 24π)"),
        ("Dodeca", "(−21/400, 0) ∪ (0, 19/400)", "(72π, 76π) ∪ (76π, 80π)"),
        ("Icosa", "(−13/144, 0) ∪ (0, 11/144)", "(40π, 44π) ∪ (44π, 48π)"),
    ];
    match platonic_table() {
        Ok(rows) => {
            rows
                .iter()
                .zip(expected)
                .map(|(r, (solid, c, ta))| {
                    let got = format!("{} ∪ {}", r.c_negative, r.c_positive);
                    let line = format_table(std::slice::from_ref(r));
                    let pass = r.solid == solid && got == c && line.contains(ta);
                    Check { name: format!("ranges.{solid}"), pass, detail: got }
                })
                .collect()
        }
        Err(e) => vec![failed("ranges", e)],
    }
}

fn periods() -> Vec<Check> {
    let d = catenoid();
    let p: Result<PolyPath, _> = d.loop_path("end").cloned();
    match p.and_then(|p| euclid_period(&d, &p)) {
        Ok((re, im)) => vec![
            check("periods.catenoid_real", re.iter().map(|x| x.abs()).fold(0.0, f64::max), 1e-10),
            check("periods.catenoid_imaginary", (im[2] - 4.0 * PI).abs(), 1e-8),
        ],
        Err(e) => vec![failed("periods.catenoid", e)],
    }
}

fn surface() -> Vec<Check> {
    let d = catenoid();
    let grid = GridSpec { n_radial: 16, n_angular: 16, ..GridSpec::default() };
    match Pipeline::normalized(&d, 0.1, DEFAULT_ODE_TOL).and_then(|p| build_fundamental_mesh(&p, &grid)) {
        Ok(m) => vec![
            check("surface.det", m.det_defect(), 1e-8),
            check("surface.conformality", m.conformality, CONFORMALITY_TOL),
        ],
        Err(e) => vec![failed("surface.mesh", e)],
    }
}
