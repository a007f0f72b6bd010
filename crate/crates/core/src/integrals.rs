//! Young and Züst integrals, their calculus identities and classical
//! quadrature oracles.

use std::fmt;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::compensator::{side_compensator, CompensatorOptions};
use crate::decompose::{dya_iter, Variant};
use crate::error::{Error, Result};
use crate::germ::{Germ, MemoCache};
use crate::quad::{adaptive_simpson, derivative, reference_triangle, QuadOptions};
use crate::sew::{sew_eval, sew_eval_two_point, SewOptions, SewReport, SewStatus};
use crate::simplex::{Chain, Point, PointMap, Simplex, MAX_DIM};

type ScalarFn = dyn Fn(&Point) -> f64 + Send + Sync;
/// A smooth map `ℝⁿ → ℝ` applied to function values.
pub type VecFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A real function on points with optional Hölder metadata.
#[derive(Clone)]
pub struct Scalar0 {
    f: Arc<ScalarFn>,
    pub holder_alpha: Option<f64>,
    pub holder_const: Option<f64>,
    pub label: String,
}

impl fmt::Debug for Scalar0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Scalar0")
            .field("label", &self.label)
            .field("holder_alpha", &self.holder_alpha)
            .field("holder_const", &self.holder_const)
            .finish()
    }
}

impl Scalar0 {
    pub fn new(
        label: impl Into<String>,
        f: impl Fn(&Point) -> f64 + Send + Sync + 'static,
    ) -> Scalar0 {
        Scalar0 {
            f: Arc::new(f),
            holder_alpha: None,
            holder_const: None,
            label: label.into(),
        }
    }

    pub fn with_holder(mut self, alpha: f64, constant: Option<f64>) -> Scalar0 {
        self.holder_alpha = Some(alpha);
        self.holder_const = constant;
        self
    }

    pub fn constant(c: f64) -> Scalar0 {
        Scalar0::new(format!("{c}"), move |_| c).with_holder(1.0, Some(0.0))
    }

    /// `p ↦ p_i`, zero-based.
    pub fn coordinate(i: usize) -> Scalar0 {
        Scalar0::new(format!("x{}", i + 1), move |p| p.get(i)).with_holder(1.0, Some(1.0))
    }

    #[inline]
    pub fn eval(&self, p: &Point) -> f64 {
        (self.f)(p)
    }

    pub fn germ(&self) -> Germ {
        let f = self.f.clone();
        Germ::from_point_fn(move |p| f(p)).with_label(self.label.clone())
    }

    /// `self ∘ m`; Hölder metadata is dropped.
    pub fn compose(&self, m: Arc<dyn PointMap>) -> Scalar0 {
        let f = self.f.clone();
        Scalar0::new(format!("({})∘φ", self.label), move |p| f(&m.map_point(p)))
    }

    pub fn times(&self, other: &Scalar0) -> Scalar0 {
        let (a, b) = (self.f.clone(), other.f.clone());
        let mut out = Scalar0::new(format!("({})·({})", self.label, other.label), move |p| {
            a(p) * b(p)
        });
        out.holder_alpha = match (self.holder_alpha, other.holder_alpha) {
            (Some(x), Some(y)) => Some(x.min(y)),
            _ => None,
        };
        out
    }

    /// `p ↦ h(self(p))`.
    pub fn map(
        &self,
        label: impl Into<String>,
        h: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Scalar0 {
        let f = self.f.clone();
        Scalar0::new(label, move |p| h(f(p)))
    }

    /// Checks `|f(p) − f(q)| ≤ C·|p − q|^α` on random pairs in the unit box;
    /// `None` without complete metadata.
    pub fn holder_spot_check(&self, dim: usize, samples: usize, seed: u64) -> Option<bool> {
        let (alpha, c) = (self.holder_alpha?, self.holder_const?);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pt = |rng: &mut ChaCha8Rng| {
            let xs: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
            Point::from_slice_unchecked(&xs)
        };
        Some((0..samples).all(|_| {
            let (p, q) = (pt(&mut rng), pt(&mut rng));
            (self.eval(&p) - self.eval(&q)).abs()
                <= c * p.dist(&q).powf(alpha) * (1.0 + 1e-9) + 1e-12
        }))
    }
}

/// `Ψ ∘ (g₁, …, gₙ)`.
pub fn compose_values(label: impl Into<String>, psi: VecFn, g: &[Scalar0]) -> Scalar0 {
    let g: Vec<Scalar0> = g.to_vec();
    Scalar0::new(label, move |p| {
        let mut vals = [0.0; 8];
        for (v, gi) in vals.iter_mut().zip(&g) {
            *v = gi.eval(p);
        }
        psi(&vals[..g.len()])
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub construction: String,
    pub inputs: Vec<String>,
    pub simplex: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralResult {
    pub value: f64,
    /// Outer plus inner sewing estimates.
    pub error_estimate: f64,
    pub report: SewReport,
    pub inner_reports: Vec<SewReport>,
    pub provenance: Provenance,
    pub stage1_cache_hits: u64,
    pub stage1_evals: u64,
    pub warnings: Vec<String>,
}

impl IntegralResult {
    pub fn status(&self) -> SewStatus {
        self.report.status
    }
}

fn exponent_warning(alphas: &[Option<f64>], k: usize) -> Vec<String> {
    if alphas.iter().any(|a| a.is_none()) {
        return Vec::new();
    }
    let gamma: f64 = alphas.iter().map(|a| a.unwrap()).sum();
    if gamma <= k as f64 {
        vec![format!(
            "exponent sum {gamma} does not exceed {k}; convergence is not guaranteed"
        )]
    } else {
        Vec::new()
    }
}

fn check_degree(s: &Simplex, k: usize, what: &str) -> Result<()> {
    if s.degree() != k {
        return Err(Error::Degree(format!(
            "{what} integrates over {k}-simplices, got a {}-simplex",
            s.degree()
        )));
    }
    Ok(())
}

fn diverged(what: &str, report: SewReport) -> Error {
    Error::NonConvergent {
        reason: format!("{what} sewing diverged"),
        report: Box::new(report),
    }
}

/// The raw germ `[p q] ↦ f(p)(g(q) − g(p))`.
pub fn young_germ(f: &Scalar0, g: &Scalar0) -> Germ {
    let (f, g) = (f.clone(), g.clone());
    let label = format!("{}∪δ{}", f.label, g.label);
    Germ::new(1, move |s| {
        let (p, q) = (s.vertex(0), s.vertex(1));
        f.eval(p) * (g.eval(q) - g.eval(p))
    })
    .with_label(label)
}

fn young_report(f: &Scalar0, g: &Scalar0, seg: &Simplex, opts: &SewOptions) -> Result<SewReport> {
    sew_eval_two_point(
        seg,
        opts,
        |p| (f.eval(p), g.eval(p)),
        |a, b| a.0 * (b.1 - a.1),
    )
}

/// `∫_{[pq]} f dg` as the sewing of the Young germ.
pub fn young(f: &Scalar0, g: &Scalar0, seg: &Simplex, opts: &SewOptions) -> Result<IntegralResult> {
    check_degree(seg, 1, "young")?;
    let report = young_report(f, g, seg, opts)?;
    if report.status == SewStatus::Diverged {
        return Err(diverged("Young", report));
    }
    Ok(IntegralResult {
        value: report.value,
        error_estimate: report.error_estimate,
        report,
        inner_reports: Vec::new(),
        provenance: Provenance {
            construction: "young".into(),
            inputs: vec![f.label.clone(), g.label.clone()],
            simplex: seg.to_string(),
        },
        stage1_cache_hits: 0,
        stage1_evals: 0,
        warnings: exponent_warning(&[f.holder_alpha, g.holder_alpha], 1),
    })
}

/// The 1-germ `S ↦ young(f, g, S)`; NaN where sewing fails.
pub fn young_sewn_germ(f: &Scalar0, g: &Scalar0, opts: &SewOptions) -> Germ {
    let (f, g, opts) = (f.clone(), g.clone(), opts.clone());
    Germ::new(1, move |s| {
        young_report(&f, &g, s, &opts).map_or(f64::NAN, |r| r.value)
    })
}

/// Lebesgue–Stieltjes value of `∫ f dg` along the segment: adaptive Simpson
/// of `f · (g∘γ)'` with a five-point derivative of `g∘γ`.
pub fn young_oracle(f: &Scalar0, g: &Scalar0, seg: &Simplex, quad: &QuadOptions) -> Result<f64> {
    check_degree(seg, 1, "young_oracle")?;
    let (p, q) = (*seg.vertex(0), *seg.vertex(1));
    let at = |t: f64| Point::lerp(&p, &q, t);
    let gt = |t: f64| g.eval(&at(t));
    adaptive_simpson(
        |t| f.eval(&at(t)) * derivative(gt, t, quad.diff_step),
        0.0,
        1.0,
        quad,
    )
}

/// Inner Young options for a two-stage Züst evaluation: the absolute
/// tolerance is split over the `3·4ⁿ` edges of the deepest outer level.
pub fn inner_options(outer: &SewOptions) -> SewOptions {
    let n = outer.max_level_for(2).min(15) as i32;
    SewOptions {
        max_level: Some(16),
        abs_tol: outer.abs_tol / (3.0 * 4f64.powi(n)),
        rel_tol: outer.rel_tol,
        variant: Variant::Dya,
        extrapolate: true,
        divergence_ratio: outer.divergence_ratio,
        compensated: false,
        min_leaves: 16,
    }
}

type EdgeKey = ([i64; MAX_DIM], [i64; MAX_DIM]);

struct Stage1 {
    g1: Scalar0,
    g2: Scalar0,
    opts: SewOptions,
    cache: MemoCache<(f64, f64), EdgeKey>,
    failure: Mutex<Option<SewReport>>,
}

impl Stage1 {
    /// `(η(ab), error)` with `η = g1 dg2`, computed once per unordered edge.
    fn eta(&self, a: &Point, b: &Point) -> (f64, f64) {
        let q = |x: f64| (x * 1e12).round() as i64;
        let (mut ka, mut kb) = ([0i64; MAX_DIM], [0i64; MAX_DIM]);
        for (k, x) in ka.iter_mut().zip(a.coords()) {
            *k = q(*x);
        }
        for (k, x) in kb.iter_mut().zip(b.coords()) {
            *k = q(*x);
        }
        let (sign, canon, key) = if ka <= kb {
            (1.0, [*a, *b], (ka, kb))
        } else {
            (-1.0, [*b, *a], (kb, ka))
        };
        let (v, e) = self.cache.get_or_insert_with(key, || {
            let canon = Simplex::from_points_unchecked(&canon);
            match young_report(&self.g1, &self.g2, &canon, &self.opts) {
                Ok(r) if r.status != SewStatus::Diverged => (r.value, r.error_estimate),
                Ok(r) => {
                    self.failure.lock().expect("poisoned").get_or_insert(r);
                    (f64::NAN, f64::INFINITY)
                }
                Err(_) => (f64::NAN, f64::INFINITY),
            }
        });
        (sign * v, e)
    }
}

/// `∫_S f dg1 ∧ dg2` with explicit inner options.
pub fn zust_with(
    f: &Scalar0,
    g1: &Scalar0,
    g2: &Scalar0,
    tri: &Simplex,
    opts: &SewOptions,
    inner: &SewOptions,
) -> Result<IntegralResult> {
    check_degree(tri, 2, "zust")?;
    let st = Arc::new(Stage1 {
        g1: g1.clone(),
        g2: g2.clone(),
        opts: inner.clone(),
        cache: MemoCache::new(),
        failure: Mutex::new(None),
    });
    let (stc, fc) = (st.clone(), f.clone());
    let outer = Germ::new(2, move |s| {
        let v = s.vertices();
        let e12 = stc.eta(&v[1], &v[2]).0;
        let e02 = stc.eta(&v[0], &v[2]).0;
        let e01 = stc.eta(&v[0], &v[1]).0;
        fc.eval(&v[0]) * (e12 - e02 + e01)
    });
    let report = sew_eval(&outer, tri, opts)?;
    if let Some(r) = st.failure.lock().expect("poisoned").take() {
        return Err(Error::NonConvergent {
            reason: "stage-1 Young sewing diverged on an edge".into(),
            report: Box::new(r),
        });
    }
    if report.status == SewStatus::Diverged {
        return Err(diverged("Züst", report));
    }

    let mut inner_err = 0.0;
    for (_, leaf) in dya_iter(report.final_level(), tri, opts.variant)? {
        let v = leaf.vertices();
        let e = st.eta(&v[1], &v[2]).1 + st.eta(&v[0], &v[2]).1 + st.eta(&v[0], &v[1]).1;
        inner_err += f.eval(&v[0]).abs() * e;
    }
    let p = tri.vertices();
    let inner_reports = [(1, 2), (0, 2), (0, 1)]
        .iter()
        .map(|&(i, j)| {
            young_report(
                g1,
                g2,
                &Simplex::from_points_unchecked(&[p[i], p[j]]),
                inner,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntegralResult {
        value: report.value,
        error_estimate: report.error_estimate + inner_err,
        report,
        inner_reports,
        provenance: Provenance {
            construction: "zust".into(),
            inputs: vec![f.label.clone(), g1.label.clone(), g2.label.clone()],
            simplex: tri.to_string(),
        },
        stage1_cache_hits: st.cache.hits(),
        stage1_evals: st.cache.misses(),
        warnings: exponent_warning(&[f.holder_alpha, g1.holder_alpha, g2.holder_alpha], 2),
    })
}

/// `∫_S f dg1 ∧ dg2`: sewing of `f ∪ δη` with `η = g1 dg2` sewn per edge.
pub fn zust(
    f: &Scalar0,
    g1: &Scalar0,
    g2: &Scalar0,
    tri: &Simplex,
    opts: &SewOptions,
) -> Result<IntegralResult> {
    zust_with(f, g1, g2, tri, opts, &inner_options(opts))
}

/// `∫_S h dxⁱ ∧ dxʲ` classically, from the affine parametrization of `S`
/// over the reference triangle.
pub fn triangle_quadrature(
    h: impl Fn(&Point) -> f64,
    tri: &Simplex,
    i: usize,
    j: usize,
    quad: &QuadOptions,
) -> Result<f64> {
    check_degree(tri, 2, "triangle quadrature")?;
    let d = tri.dim();
    if i >= d || j >= d {
        return Err(Error::Dimension(format!(
            "axes ({i}, {j}) outside dimension {d}"
        )));
    }
    let p = tri.vertices();
    let (a, b) = (p[1].sub(&p[0]), p[2].sub(&p[0]));
    let jac = a.get(i) * b.get(j) - a.get(j) * b.get(i);
    if jac == 0.0 {
        return Ok(0.0);
    }
    let at = |u: f64, v: f64| p[0].add(&a.scale(u)).add(&b.scale(v));
    Ok(jac * reference_triangle(|u, v| h(&at(u, v)), quad)?)
}

/// `∫_S f dxⁱ ∧ dxʲ` with zero-based axes.
pub fn zust_oracle(
    f: &Scalar0,
    tri: &Simplex,
    i: usize,
    j: usize,
    quad: &QuadOptions,
) -> Result<f64> {
    triangle_quadrature(|p| f.eval(p), tri, i, j, quad)
}

#[derive(Clone, Debug, Serialize)]
pub struct StokesReport {
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_error: f64,
    pub rhs_error: f64,
    pub edge_reports: Vec<SewReport>,
    pub rhs_report: SewReport,
}

impl StokesReport {
    pub fn discrepancy(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }

    pub fn tolerance(&self) -> f64 {
        self.lhs_error + self.rhs_error + 1e-12 * (1.0 + self.lhs.abs())
    }

    pub fn holds(&self) -> bool {
        self.discrepancy() <= self.tolerance()
    }
}

/// `⟨∂S, f dg⟩` against the `dya†` sewing of `δ(f ∪ δg)` at `S`, both at
/// the same level cap.
pub fn stokes_check(
    f: &Scalar0,
    g: &Scalar0,
    tri: &Simplex,
    opts: &SewOptions,
) -> Result<StokesReport> {
    check_degree(tri, 2, "stokes_check")?;
    let level = opts.max_level_for(2);
    let edge_opts = SewOptions {
        max_level: Some(level),
        variant: Variant::Dya,
        ..opts.clone()
    };
    let mut lhs = 0.0;
    let mut lhs_error = 0.0;
    let mut edge_reports = Vec::new();
    for (w, e) in Chain::from_simplex(*tri).boundary()?.terms() {
        let r = young(f, g, e, &edge_opts)?;
        lhs += w * r.value;
        lhs_error += r.error_estimate;
        edge_reports.push(r.report);
    }
    let (fc, gc) = (f.clone(), g.clone());
    let omega = Germ::new(2, move |s| {
        let v = s.vertices();
        let gv = [gc.eval(&v[0]), gc.eval(&v[1]), gc.eval(&v[2])];
        let f0 = fc.eval(&v[0]);
        let f1 = fc.eval(&v[1]);
        f1 * (gv[2] - gv[1]) - f0 * (gv[2] - gv[0]) + f0 * (gv[1] - gv[0])
    });
    let rhs_opts = SewOptions {
        max_level: Some(level),
        variant: Variant::DyaDagger,
        ..opts.clone()
    };
    let rhs_report = sew_eval(&omega, tri, &rhs_opts)?;
    if rhs_report.status == SewStatus::Diverged {
        return Err(diverged("dya† coboundary", rhs_report));
    }
    Ok(StokesReport {
        lhs,
        rhs: rhs_report.value,
        lhs_error,
        rhs_error: rhs_report.error_estimate,
        edge_reports,
        rhs_report,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub discrepancy: f64,
    /// Sum of the error estimates of every integral involved.
    pub tolerance: f64,
    /// The identity needs hypotheses the check does not verify.
    pub notes: Vec<String>,
}

impl IdentityReport {
    fn new(lhs: f64, rhs: f64, err: f64, notes: Vec<String>) -> IdentityReport {
        IdentityReport {
            lhs,
            rhs,
            discrepancy: (lhs - rhs).abs(),
            tolerance: err + 1e-12 * (1.0 + lhs.abs().max(rhs.abs())),
            notes,
        }
    }

    pub fn holds(&self) -> bool {
        self.discrepancy <= self.tolerance
    }
}

const GRADIENT_NOTE: &str =
    "gradient evaluators are trusted; their Hölder continuity is not checked";

/// `f d(Ψ∘g)` against `Σᵢ (f·∂ᵢΨ∘g) dgᵢ` on a segment.
pub fn young_chain_rule_check(
    f: &Scalar0,
    g: &[Scalar0],
    psi: VecFn,
    grad: &[VecFn],
    seg: &Simplex,
    opts: &SewOptions,
) -> Result<IdentityReport> {
    if g.is_empty() || g.len() != grad.len() || g.len() > 8 {
        return Err(Error::Parameter(format!(
            "{} components with {} partials",
            g.len(),
            grad.len()
        )));
    }
    let composed = compose_values("Ψ∘g", psi, g);
    let lhs = young(f, &composed, seg, opts)?;
    let mut rhs = 0.0;
    let mut err = lhs.error_estimate;
    for (gi, di) in g.iter().zip(grad) {
        let weight = f.times(&compose_values("∂Ψ∘g", di.clone(), g));
        let r = young(&weight, gi, seg, opts)?;
        rhs += r.value;
        err += r.error_estimate;
    }
    Ok(IdentityReport::new(
        lhs.value,
        rhs,
        err,
        vec![GRADIENT_NOTE.into()],
    ))
}

/// `f d(Ψ¹∘g) ∧ d(Ψ²∘g)` against `(f·J_Ψ∘g) dg¹ ∧ dg²` for `g = (g¹, g²)`.
pub fn zust_chain_rule_check(
    f: &Scalar0,
    g: [&Scalar0; 2],
    psi: [VecFn; 2],
    jacobian: VecFn,
    tri: &Simplex,
    opts: &SewOptions,
) -> Result<IdentityReport> {
    let gs = [g[0].clone(), g[1].clone()];
    let [p1, p2] = psi;
    let u = compose_values("Ψ¹∘g", p1, &gs);
    let v = compose_values("Ψ²∘g", p2, &gs);
    let lhs = zust(f, &u, &v, tri, opts)?;
    let weight = f.times(&compose_values("J∘g", jacobian, &gs));
    let rhs = zust(&weight, g[0], g[1], tri, opts)?;
    Ok(IdentityReport::new(
        lhs.value,
        rhs.value,
        lhs.error_estimate + rhs.error_estimate,
        vec![GRADIENT_NOTE.into()],
    ))
}

/// `(f h) dg` against the sewing of `f ∪ (h dg)`.
pub fn young_iterated_check(
    f: &Scalar0,
    h: &Scalar0,
    g: &Scalar0,
    seg: &Simplex,
    opts: &SewOptions,
) -> Result<IdentityReport> {
    let direct = young(&f.times(h), g, seg, opts)?;
    let inner = young_sewn_germ(
        h,
        g,
        &SewOptions {
            extrapolate: true,
            ..opts.clone()
        },
    );
    let fc = f.clone();
    let nested = Germ::new(1, move |s| fc.eval(s.vertex(0)) * inner.eval(s));
    let r = sew_eval(&nested, seg, opts)?;
    Ok(IdentityReport::new(
        direct.value,
        r.value,
        direct.error_estimate + r.error_estimate,
        Vec::new(),
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvePullbackReport {
    /// `sew(φ♮(f dg))` on the parameter segment.
    pub sewn_pullback: f64,
    /// `(f∘φ) d(g∘φ)`.
    pub composed: f64,
    /// The composed integral after the substitution `t = s²`.
    pub reparametrized: Option<f64>,
    pub tolerance: f64,
    pub reports: Vec<SewReport>,
}

impl CurvePullbackReport {
    pub fn discrepancy(&self) -> f64 {
        (self.sewn_pullback - self.composed).abs()
    }

    pub fn reparam_discrepancy(&self) -> Option<f64> {
        self.reparametrized.map(|r| (r - self.composed).abs())
    }
}

/// Pull-back of `f dg` along a curve `φ: ℝ → ℝᵈ` over the segment `[a, b]`.
/// The reparametrization check runs when `0 ≤ a ≤ b`.
pub fn pullback_curve(
    f: &Scalar0,
    g: &Scalar0,
    phi: Arc<dyn PointMap>,
    seg: &Simplex,
    opts: &SewOptions,
) -> Result<CurvePullbackReport> {
    check_degree(seg, 1, "pullback_curve")?;
    if phi.source_dim() != 1 || seg.dim() != 1 {
        return Err(Error::Dimension(
            "curve pull-back needs a map on ℝ and a segment in ℝ".into(),
        ));
    }
    let inner = SewOptions {
        extrapolate: true,
        ..opts.clone()
    };
    let chord = young_sewn_germ(f, g, &inner);
    let m = phi.clone();
    let pulled = Germ::new(1, move |s| chord.eval(&s.map_vertices(|p| m.map_point(p))));
    let sewn = sew_eval(&pulled, seg, opts)?;
    let fc = f.compose(phi.clone());
    let gc = g.compose(phi.clone());
    let composed = young(&fc, &gc, seg, opts)?;
    let mut tolerance = sewn.error_estimate + composed.error_estimate;
    let mut reports = vec![sewn.clone(), composed.report.clone()];

    let (a, b) = (seg.vertex(0).get(0), seg.vertex(1).get(0));
    let reparametrized = if a >= 0.0 && b >= 0.0 {
        let rho: Arc<dyn PointMap> = Arc::new(crate::simplex::FnMap::new(1, 1, |p| {
            Point::scalar(p.get(0) * p.get(0))
        }));
        let s2 = Simplex::from_coords(&[&[a.sqrt()], &[b.sqrt()]])?;
        let r = young(&fc.compose(rho.clone()), &gc.compose(rho), &s2, opts)?;
        tolerance += r.error_estimate;
        reports.push(r.report.clone());
        Some(r.value)
    } else {
        None
    };
    Ok(CurvePullbackReport {
        sewn_pullback: sewn.value,
        composed: composed.value,
        reparametrized,
        tolerance: tolerance + 1e-12 * (1.0 + composed.value.abs()),
        reports,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfacePullbackReport {
    /// `∫_{φ♮S} f dg1 ∧ dg2`.
    pub algebraic: f64,
    /// `∫_S (f∘φ) d(g1∘φ) ∧ d(g2∘φ)`.
    pub differential: f64,
    /// `⟨∂S, L(φ♮(f dg1 ∧ dg2))⟩`.
    pub boundary_term: f64,
    pub algebraic_error: f64,
    pub differential_error: f64,
    pub boundary_error: f64,
    /// False off the plane: the three-term identity then need not hold.
    pub top_dimension: bool,
}

impl SurfacePullbackReport {
    pub fn defect(&self) -> f64 {
        self.algebraic - self.differential - self.boundary_term
    }

    pub fn tolerance(&self) -> f64 {
        self.algebraic_error
            + self.differential_error
            + self.boundary_error
            + 1e-12 * (1.0 + self.algebraic.abs())
    }

    pub fn holds(&self) -> bool {
        self.defect().abs() <= self.tolerance()
    }
}

/// Change of variables for the Züst integral along `φ: ℝ² → ℝᵈ`.
pub fn pullback_surface(
    f: &Scalar0,
    g1: &Scalar0,
    g2: &Scalar0,
    phi: Arc<dyn PointMap>,
    tri: &Simplex,
    opts: &SewOptions,
) -> Result<SurfacePullbackReport> {
    check_degree(tri, 2, "pullback_surface")?;
    if phi.source_dim() != 2 || tri.dim() != 2 {
        return Err(Error::Dimension(
            "surface pull-back needs a map on ℝ² and a planar triangle".into(),
        ));
    }
    let image = tri.map_vertices(|p| phi.map_point(p));
    let algebraic = zust(f, g1, g2, &image, opts)?;
    let differential = zust(
        &f.compose(phi.clone()),
        &g1.compose(phi.clone()),
        &g2.compose(phi.clone()),
        tri,
        opts,
    )?;

    let small = SewOptions {
        extrapolate: true,
        abs_tol: opts.abs_tol * 1e-4,
        ..opts.clone()
    };
    let (fc, g1c, g2c, m) = (f.clone(), g1.clone(), g2.clone(), phi.clone());
    let pulled = Germ::new(2, move |s| {
        let img = s.map_vertices(|p| m.map_point(p));
        zust(&fc, &g1c, &g2c, &img, &small).map_or(f64::NAN, |r| r.value)
    });
    let copts = CompensatorOptions {
        abs_tol: opts.abs_tol,
        ..Default::default()
    };
    let mut boundary_term = 0.0;
    let mut boundary_error = 0.0;
    for (w, e) in Chain::from_simplex(*tri).boundary()?.terms() {
        let r = side_compensator(&pulled, e, &copts)?;
        boundary_term += w * r.value;
        boundary_error += r.error_estimate;
    }
    Ok(SurfacePullbackReport {
        algebraic: algebraic.value,
        differential: differential.value,
        boundary_term,
        algebraic_error: algebraic.error_estimate,
        differential_error: differential.error_estimate,
        boundary_error,
        top_dimension: phi.target_dim() == 2,
    })
}
