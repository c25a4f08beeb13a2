//! Built-in surfaces.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::algebra::{c, ExtC, Mat2C, C64, I, ONE, ZERO};
use crate::error::{Error, Result};

use super::poly::{Poly, RationalMap};
use super::{
    platonic, sigma_from_normal, Boundary, GaussMap, PieceSpec, PolyPath, Reflection, Solid,
    WeierstrassData,
};

pub(crate) fn reflection(
    label: (usize, usize),
    mobius: Mat2C,
    normal: [f64; 3],
    anchor: PolyPath,
) -> Reflection {
    let sigma = sigma_from_normal(normal).expect("catalog normals are unit vectors");
    Reflection { label, mobius, sigma, normal: Some(normal), anchor }
}

/// Loop based at `approach[0]`: walk along `approach`, circle once
/// counter-clockwise around `end` starting from the last approach point, and walk back.
pub(crate) fn end_loop(approach: &[C64], end: C64, sides: usize) -> Result<PolyPath> {
    let start = *approach.last().expect("non-empty approach");
    let circle = PolyPath::circle(end, start, sides)?;
    let back: Vec<C64> = approach.iter().rev().skip(1).copied().collect();
    PolyPath::through(approach.iter().copied().chain(circle.points.into_iter().skip(1)).chain(back))
}

/// `G = z`, `q = z⁻²`: the catenoid with ends at 0 and ∞.
pub fn catenoid() -> WeierstrassData {
    let g = GaussMap::Rational(RationalMap::z());
    let q = RationalMap::new(Poly::one(), Poly::monomial(ONE, 2));
    let one = c(1.0, 0.0);
    let reflections = vec![
        reflection((1, 1), Mat2C::identity(), [0.0, 1.0, 0.0], PolyPath::point(one)),
        reflection(
            (2, 1),
            Mat2C::diag(I, -I),
            [-1.0, 0.0, 0.0],
            PolyPath::new(vec![one, C64::from_polar(1.0, PI / 4.0), I]).expect("distinct"),
        ),
        reflection((3, 1), Mat2C::new(ZERO, I, I, ZERO), [0.0, 0.0, 1.0], PolyPath::point(one)),
    ];
    let mut loops = BTreeMap::new();
    loops.insert("end".to_string(), PolyPath::circle(ZERO, one, 64).expect("distinct"));
    let piece = PieceSpec {
        end: ZERO,
        phi_range: (-PI / 2.0, 0.0),
        breakpoints: vec![],
        boundaries: vec![Boundary::Circle { center: ZERO, radius: 1.0 }],
        multiplicity: 8,
        fixed_sides: vec![(0.0, (1, 1)), (-PI / 2.0, (2, 1))],
    };
    WeierstrassData::new(
        "catenoid",
        g,
        q,
        vec![ExtC::Finite(ZERO), ExtC::Infinity],
        reflections,
        loops,
        one,
    )
    .with_piece(piece)
}

/// `G = tanh z`, `q = 1`: the cousin of Enneper's surface, whose minimal
/// data is `(g, ω) = (z, dz)`.
pub fn enneper() -> WeierstrassData {
    let q = RationalMap::poly(Poly::one());
    let reflections = vec![
        reflection((1, 1), Mat2C::identity(), [0.0, 1.0, 0.0], PolyPath::point(ZERO)),
        reflection((2, 1), Mat2C::diag(I, -I), [1.0, 0.0, 0.0], PolyPath::point(ZERO)),
    ];
    WeierstrassData::new(
        "enneper",
        GaussMap::Tanh,
        q,
        vec![ExtC::Infinity],
        reflections,
        BTreeMap::new(),
        ZERO,
    )
}

/// `n` catenoid ends at the `n`-th roots of unity with dihedral symmetry:
/// `G = z^{n-1}`, `q = n² z^{n-2}/(zⁿ - 1)²`.
pub fn noid(n: usize) -> Result<WeierstrassData> {
    if n < 3 {
        return Err(Error::UnknownSurface(format!("noid({n}) needs n >= 3")));
    }
    let nf = n as f64;
    let g = GaussMap::Rational(RationalMap::poly(Poly::monomial(ONE, n - 1)));
    let mut den = vec![ZERO; n + 1];
    den[0] = c(-1.0, 0.0);
    den[n] = ONE;
    let q = RationalMap::new(Poly::monomial(c(nf * nf, 0.0), n - 2), Poly::new(den).pow(2));
    let z0 = c(0.5, 0.0);
    let half_turn = C64::from_polar(1.0, -PI / nf);
    let w2 = z0 * half_turn;
    let w3 = C64::from_polar(1.0, -PI / (2.0 * nf));
    let reflections = vec![
        reflection((1, 1), Mat2C::identity(), [0.0, 1.0, 0.0], PolyPath::point(z0)),
        reflection(
            (2, 1),
            Mat2C::diag(half_turn, half_turn.conj()),
            [-(PI / nf).sin(), (PI / nf).cos(), 0.0],
            PolyPath::new(vec![z0, w2])?,
        ),
        reflection((3, 1), Mat2C::new(ZERO, I, I, ZERO), [0.0, 0.0, 1.0], PolyPath::new(vec![z0, w3])?),
    ];
    let radius = 0.5f64.min((PI / nf).sin());
    let mut loops = BTreeMap::new();
    for k in 0..n {
        let zeta = C64::from_polar(1.0, 2.0 * PI * k as f64 / nf);
        let steps = 16 * k;
        let mut approach: Vec<C64> = (0..=steps)
            .map(|j| C64::from_polar(0.5, 2.0 * PI * k as f64 / nf * j as f64 / steps.max(1) as f64))
            .collect();
        approach.push(zeta * (1.0 - radius));
        loops.insert(format!("end{k}"), end_loop(&approach, zeta, 64)?);
    }
    let piece = PieceSpec {
        end: ONE,
        phi_range: (PI, 1.5 * PI),
        breakpoints: vec![1.5 * PI - PI / (2.0 * nf)],
        boundaries: vec![
            Boundary::Line { point: ZERO, dir: ONE },
            Boundary::Line { point: ZERO, dir: half_turn },
            Boundary::Circle { center: ZERO, radius: 1.0 },
        ],
        multiplicity: 4 * n,
        fixed_sides: vec![(PI, (1, 1))],
    };
    let punctures =
        (0..n).map(|k| ExtC::Finite(C64::from_polar(1.0, 2.0 * PI * k as f64 / nf))).collect();
    Ok(WeierstrassData::new(format!("noid({n})"), g, q, punctures, reflections, loops, z0)
        .with_piece(piece)
        .with_symmetry((2, n)))
}

/// Names accepted by [`catalog`].
pub fn catalog_names() -> Vec<String> {
    let mut v = vec!["catenoid".to_string(), "enneper".to_string(), "trinoid".to_string()];
    v.extend((3..=6).map(|n| format!("noid({n})")));
    v.extend(Solid::ALL.iter().map(|s| format!("platonic({})", s.name())));
    v
}

/// Look up a surface by name: `catenoid`, `enneper`, `trinoid`, `noid(n)`,
/// `platonic(kind)`.
pub fn catalog(name: &str) -> Result<WeierstrassData> {
    let key = name.trim().to_ascii_lowercase();
    let arg = |prefix: &str| {
        key.strip_prefix(prefix)
            .and_then(|s| s.strip_prefix('('))
            .and_then(|s| s.strip_suffix(')'))
            .map(str::trim)
    };
    match key.as_str() {
        "catenoid" => Ok(catenoid()),
        "enneper" => Ok(enneper()),
        "trinoid" => noid(3),
        _ => {
            if let Some(n) = arg("noid") {
                let n: usize = n.parse().map_err(|_| Error::UnknownSurface(name.to_string()))?;
                return noid(n);
            }
            if let Some(kind) = arg("platonic") {
                let s = Solid::from_name(kind).ok_or_else(|| Error::UnknownSurface(name.to_string()))?;
                return platonic(s);
            }
            Err(Error::UnknownSurface(name.to_string()))
        }
    }
}
