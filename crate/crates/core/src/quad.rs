//! Classical quadrature used as an independent check on sewn integrals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadOptions {
    pub tol: f64,
    /// Recursion depth of the 1D rule.
    pub max_depth: usize,
    /// Subdivision depth of the triangle rule.
    pub max_tri_depth: usize,
    /// Step of the five-point derivative stencil.
    pub diff_step: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            tol: 1e-12,
            max_depth: 30,
            max_tri_depth: 10,
            diff_step: 1e-3,
        }
    }
}

/// Five-point central difference `g'(t)`.
pub fn derivative(g: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    (g(t - 2.0 * h) - 8.0 * g(t - h) + 8.0 * g(t + h) - g(t + 2.0 * h)) / (12.0 * h)
}

/// Adaptive Simpson quadrature; fails if some panel is still unresolved at
/// `max_depth`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, opts: &QuadOptions) -> Result<f64> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut failed = false;
    let v = simpson_step(
        &f,
        a,
        b,
        fa,
        fm,
        fb,
        whole,
        opts.tol,
        opts.max_depth,
        &mut failed,
    );
    if failed {
        return Err(Error::Oracle(format!(
            "adaptive Simpson did not reach {} on [{a}, {b}] within depth {}",
            opts.tol, opts.max_depth
        )));
    }
    Ok(v)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
    failed: &mut bool,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    let floor = 1e-15 * (left.abs() + right.abs());
    if delta.abs() <= 15.0 * tol.max(floor) {
        return left + right + delta / 15.0;
    }
    if depth == 0 {
        *failed = true;
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, failed)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, failed)
}

// Degree-5 seven-point rule on the reference triangle, barycentric form.
const A1: f64 = 0.059_715_871_789_770;
const B1: f64 = 0.470_142_064_105_115;
const A2: f64 = 0.797_426_985_353_087;
const B2: f64 = 0.101_286_507_323_456;
const W0: f64 = 0.225;
const W1: f64 = 0.132_394_152_788_506;
const W2: f64 = 0.125_939_180_544_827;
const RULE: [(f64, f64, f64, f64); 7] = [
    (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, W0),
    (A1, B1, B1, W1),
    (B1, A1, B1, W1),
    (B1, B1, A1, W1),
    (A2, B2, B2, W2),
    (B2, A2, B2, W2),
    (B2, B2, A2, W2),
];

type Uv = (f64, f64);

fn rule(f: &impl Fn(f64, f64) -> f64, t: [Uv; 3]) -> f64 {
    let area =
        0.5 * ((t[1].0 - t[0].0) * (t[2].1 - t[0].1) - (t[2].0 - t[0].0) * (t[1].1 - t[0].1)).abs();
    let s: f64 = RULE
        .iter()
        .map(|&(l0, l1, l2, w)| {
            let u = l0 * t[0].0 + l1 * t[1].0 + l2 * t[2].0;
            let v = l0 * t[0].1 + l1 * t[1].1 + l2 * t[2].1;
            w * f(u, v)
        })
        .sum();
    area * s
}

fn mid(a: Uv, b: Uv) -> Uv {
    (0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1))
}

fn tri_step(
    f: &impl Fn(f64, f64) -> f64,
    t: [Uv; 3],
    whole: f64,
    tol: f64,
    depth: usize,
    failed: &mut bool,
) -> f64 {
    let (m01, m12, m02) = (mid(t[0], t[1]), mid(t[1], t[2]), mid(t[0], t[2]));
    let kids = [
        [t[0], m01, m02],
        [m01, t[1], m12],
        [m02, m12, t[2]],
        [m12, m02, m01],
    ];
    let parts: Vec<f64> = kids.iter().map(|k| rule(f, *k)).collect();
    let sum: f64 = parts.iter().sum();
    let floor = 1e-15 * parts.iter().map(|p| p.abs()).sum::<f64>();
    if (sum - whole).abs() <= tol.max(floor) {
        return sum;
    }
    if depth == 0 {
        *failed = true;
        return sum;
    }
    kids.iter()
        .zip(&parts)
        .map(|(k, &p)| tri_step(f, *k, p, 0.25 * tol, depth - 1, failed))
        .sum()
}

/// `∫ f(u, v) du dv` over the reference triangle `{u, v ≥ 0, u + v ≤ 1}`.
pub fn reference_triangle(f: impl Fn(f64, f64) -> f64, opts: &QuadOptions) -> Result<f64> {
    let t = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)];
    let whole = rule(&f, t);
    let mut failed = false;
    let v = tri_step(&f, t, whole, opts.tol, opts.max_tri_depth, &mut failed);
    if failed {
        return Err(Error::Oracle(format!(
            "triangle rule did not reach {} within depth {}",
            opts.tol, opts.max_tri_depth
        )));
    }
    Ok(v)
}
