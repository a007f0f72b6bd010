//! Corrected sewing below the Young / Züst thresholds and the oscillating
//! pure-area families.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::germ::{
    coboundary, cup, seminorm_estimate, Gauge, Germ, SamplerConfig, SeminormEstimate,
};
use crate::integrals::{triangle_quadrature, IntegralResult, Provenance, Scalar0};
use crate::quad::{adaptive_simpson, QuadOptions};
use crate::sew::{sew_eval, SewOptions, SewStatus};
use crate::simplex::{Point, Simplex};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrectionMode {
    /// `sew(base − ω) + ω`.
    WithCorrectorAdded,
    /// `sew(base − ω)`.
    #[default]
    Without,
}

/// A germ `base = f ∪ δη` together with a nonatomic corrector `ω`.
#[derive(Clone, Debug)]
pub struct CorrectedGerm {
    pub base: Germ,
    pub corrector: Germ,
    pub mode: CorrectionMode,
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

impl CorrectedGerm {
    pub fn new(base: Germ, corrector: Germ, mode: CorrectionMode) -> Result<CorrectedGerm> {
        if base.degree() != corrector.degree() {
            return Err(Error::Degree(format!(
                "base has degree {}, corrector degree {}",
                base.degree(),
                corrector.degree()
            )));
        }
        Ok(CorrectedGerm {
            base,
            corrector,
            mode,
        })
    }

    /// `φ(f) ∪ δη` corrected by `φ'(f) ∪ ω`.
    pub fn composed(
        f: &Scalar0,
        eta: &Germ,
        omega: &Germ,
        phi: RealFn,
        dphi: RealFn,
        mode: CorrectionMode,
    ) -> Result<CorrectedGerm> {
        let pf = f.map("φ(f)", move |x| phi(x)).germ();
        let dpf = f.map("φ'(f)", move |x| dphi(x)).germ();
        let base = cup(&pf, &coboundary(eta)?)?;
        let corrector = cup(&dpf, omega)?;
        CorrectedGerm::new(base, corrector, mode)
    }
}

/// `sew(base − ω)`, plus `ω(S)` in [`CorrectionMode::WithCorrectorAdded`].
pub fn corrected_sew(c: &CorrectedGerm, s: &Simplex, opts: &SewOptions) -> Result<IntegralResult> {
    let germ = c.base.minus(&c.corrector)?;
    let report = sew_eval(&germ, s, opts)?;
    if report.status == SewStatus::Diverged {
        return Err(Error::NonConvergent {
            reason: "corrected sewing diverged".into(),
            report: Box::new(report),
        });
    }
    let added = match c.mode {
        CorrectionMode::WithCorrectorAdded => c.corrector.eval(s),
        CorrectionMode::Without => 0.0,
    };
    Ok(IntegralResult {
        value: report.value + added,
        error_estimate: report.error_estimate,
        report,
        inner_reports: Vec::new(),
        provenance: Provenance {
            construction: "corrected".into(),
            inputs: vec![
                c.base.label().unwrap_or("base").to_string(),
                c.corrector.label().unwrap_or("ω").to_string(),
            ],
            simplex: s.to_string(),
        },
        stage1_cache_hits: 0,
        stage1_evals: 0,
        warnings: Vec::new(),
    })
}

/// `fⁿ = cos(n ξ·p)/√n`, `gⁿ = sin(n ξ·p)/√n` with the exact primitive
/// `Iⁿ(p) = ½ ξ·p + sin(2n ξ·p)/(4n)` of `fⁿ dgⁿ`.
#[derive(Clone, Debug)]
pub struct PureArea1d {
    pub n: usize,
    pub xi: Vec<f64>,
    pub f: Scalar0,
    pub g: Scalar0,
    pub primitive: Scalar0,
    /// `ωⁿ = fⁿ ∪ δgⁿ − δIⁿ`.
    pub corrector: Germ,
}

impl PureArea1d {
    /// `δIⁿ(pq)`.
    pub fn exact(&self, s: &Simplex) -> f64 {
        self.primitive.eval(s.vertex(1)) - self.primitive.eval(s.vertex(0))
    }

    /// The weak limit `½ ξ·(q − p)`.
    pub fn limit(&self, s: &Simplex) -> f64 {
        0.5 * dot(&self.xi, &s.vertex(1).sub(s.vertex(0)))
    }

    pub fn corrected(&self, mode: CorrectionMode) -> Result<CorrectedGerm> {
        CorrectedGerm::new(
            cup(&self.f.germ(), &coboundary(&self.g.germ())?)?,
            self.corrector.clone(),
            mode,
        )
    }
}

fn dot(xi: &[f64], p: &Point) -> f64 {
    xi.iter().zip(p.coords()).map(|(a, b)| a * b).sum()
}

pub fn pure_area_family_1d(n: usize, xi: &[f64]) -> Result<PureArea1d> {
    if n == 0 || xi.is_empty() {
        return Err(Error::Parameter(
            "pure-area family needs n ≥ 1 and a nonempty ξ".into(),
        ));
    }
    let nf = n as f64;
    let amp = 1.0 / nf.sqrt();
    let (x1, x2, x3) = (xi.to_vec(), xi.to_vec(), xi.to_vec());
    let f = Scalar0::new(format!("cos({n}ξ·p)/√{n}"), move |p| {
        amp * (nf * dot(&x1, p)).cos()
    })
    .with_holder(0.5, None);
    let g = Scalar0::new(format!("sin({n}ξ·p)/√{n}"), move |p| {
        amp * (nf * dot(&x2, p)).sin()
    })
    .with_holder(0.5, None);
    let primitive = Scalar0::new("I", move |p| {
        let t = dot(&x3, p);
        0.5 * t + (2.0 * nf * t).sin() / (4.0 * nf)
    });
    let (fc, gc, ic) = (f.clone(), g.clone(), primitive.clone());
    let corrector = Germ::new(1, move |s| {
        let (p, q) = (s.vertex(0), s.vertex(1));
        fc.eval(p) * (gc.eval(q) - gc.eval(p)) - (ic.eval(q) - ic.eval(p))
    })
    .with_label("ω");
    Ok(PureArea1d {
        n,
        xi: xi.to_vec(),
        f,
        g,
        primitive,
        corrector,
    })
}

/// `fⁿ = cos(n x)cos(n y)/n^{1−ε}`, `gⁿ = sin(n x)/n^{ε+½}`,
/// `hⁿ = sin(n y)/√n` on the plane.
#[derive(Clone, Debug)]
pub struct PureArea2d {
    pub n: usize,
    pub eps: f64,
    pub f: Scalar0,
    pub g: Scalar0,
    pub h: Scalar0,
    /// `ωⁿ = fⁿ(p)·δηⁿ − ∫ fⁿ dgⁿ ∧ dhⁿ` with `ηⁿ = gⁿ dhⁿ`.
    pub corrector: Germ,
}

impl PureArea2d {
    /// `∫_S fⁿ dgⁿ ∧ dhⁿ = ∫_S cos²(n x) cos²(n y) dx ∧ dy` by quadrature.
    pub fn exact(&self, s: &Simplex) -> Result<f64> {
        area_integral(self.n as f64, s)
    }

    /// `ηⁿ(pq) = ∫_{[pq]} gⁿ dhⁿ` by quadrature.
    pub fn eta(&self, s: &Simplex) -> Result<f64> {
        eta_integral(self.n as f64, self.eps, s)
    }
}

fn quad_opts() -> QuadOptions {
    QuadOptions {
        tol: 1e-13,
        max_tri_depth: 12,
        ..Default::default()
    }
}

fn area_integral(n: f64, s: &Simplex) -> Result<f64> {
    triangle_quadrature(
        |p| {
            let (c1, c2) = ((n * p.get(0)).cos(), (n * p.get(1)).cos());
            c1 * c1 * c2 * c2
        },
        s,
        0,
        1,
        &quad_opts(),
    )
}

fn eta_integral(n: f64, eps: f64, s: &Simplex) -> Result<f64> {
    let (p, q) = (*s.vertex(0), *s.vertex(1));
    let dy = q.get(1) - p.get(1);
    if dy == 0.0 {
        return Ok(0.0);
    }
    let ga = n.powf(-(eps + 0.5));
    // dh/dt = √n cos(n y) · dy along the segment
    adaptive_simpson(
        |t| {
            let x = p.get(0) + t * (q.get(0) - p.get(0));
            let y = p.get(1) + t * dy;
            ga * (n * x).sin() * n.sqrt() * (n * y).cos() * dy
        },
        0.0,
        1.0,
        &quad_opts(),
    )
}

pub fn pure_area_family_2d(n: usize, eps: f64) -> Result<PureArea2d> {
    if n == 0 || !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Parameter(format!(
            "pure-area family needs n ≥ 1 and ε in (0, 1), got {n}, {eps}"
        )));
    }
    let nf = n as f64;
    let fa = nf.powf(-(1.0 - eps));
    let ga = nf.powf(-(eps + 0.5));
    let ha = 1.0 / nf.sqrt();
    let f = Scalar0::new(format!("cos({n}x)cos({n}y)/{n}^{}", 1.0 - eps), move |p| {
        fa * (nf * p.get(0)).cos() * (nf * p.get(1)).cos()
    })
    .with_holder(1.0 - eps, None);
    let g = Scalar0::new(format!("sin({n}x)/{n}^{}", eps + 0.5), move |p| {
        ga * (nf * p.get(0)).sin()
    })
    .with_holder(eps + 0.5, None);
    let h = Scalar0::new(format!("sin({n}y)/√{n}"), move |p| {
        ha * (nf * p.get(1)).sin()
    })
    .with_holder(0.5, None);
    let fc = f.clone();
    let corrector = Germ::new(2, move |s| {
        let v = s.vertices();
        let e = |i: usize, j: usize| {
            eta_integral(nf, eps, &Simplex::from_points_unchecked(&[v[i], v[j]]))
                .unwrap_or(f64::NAN)
        };
        let d_eta = e(1, 2) - e(0, 2) + e(0, 1);
        fc.eval(&v[0]) * d_eta - area_integral(nf, s).unwrap_or(f64::NAN)
    })
    .with_label("ω");
    Ok(PureArea2d {
        n,
        eps,
        f,
        g,
        h,
        corrector,
    })
}

/// Seminorm of the remainder
/// `−δφ'(f) ∪ ω + (δφ(f) − φ'(f) ∪ δf) ∪ δη`
/// against `gauge`; a bounded constant means the composed corrector works.
pub fn corrector_remainder_check(
    f: &Scalar0,
    eta: &Germ,
    omega: &Germ,
    phi: RealFn,
    dphi: RealFn,
    gauge: &Gauge,
    sampler: &SamplerConfig,
) -> Result<SeminormEstimate> {
    if omega.degree() != eta.degree() + 1 {
        return Err(Error::Degree(format!(
            "corrector of degree {} does not match η of degree {}",
            omega.degree(),
            eta.degree()
        )));
    }
    let fg = f.germ();
    let d1 = dphi.clone();
    let pf = f.map("φ(f)", move |x| phi(x)).germ();
    let dpf = f.map("φ'(f)", move |x| d1(x)).germ();
    let first = cup(&coboundary(&dpf)?, omega)?;
    let taylor = coboundary(&pf)?.minus(&cup(&dpf, &coboundary(&fg)?)?)?;
    let second = cup(&taylor, &coboundary(eta)?)?;
    let remainder = second.minus(&first)?;
    seminorm_estimate(&remainder, gauge, sampler)
}
