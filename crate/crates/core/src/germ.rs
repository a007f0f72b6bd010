//! Germs, cochain pairing, coboundary, cup product, pull-back, gauges and
//! sampled seminorm / regularity diagnostics.

use std::fmt;
use std::hash::Hash;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use dashmap::DashMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxBuildHasher;
use serde::Serialize;

use crate::decompose::{self, Variant};
use crate::error::{Error, Result};
use crate::simplex::{self, diam, permutations, permute, vol2, Chain, Point, PointMap, Simplex};
use crate::sum::pairwise_sum;

type GermFn = dyn Fn(&Simplex) -> f64 + Send + Sync;

/// A real function of k-simplices, extended to chains by linearity.
#[derive(Clone)]
pub struct Germ {
    degree: usize,
    dim: Option<usize>,
    f: Arc<GermFn>,
    label: Option<Arc<str>>,
}

impl fmt::Debug for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Germ")
            .field("degree", &self.degree)
            .field("dim", &self.dim)
            .field("label", &self.label)
            .finish()
    }
}

impl Germ {
    pub fn new(degree: usize, f: impl Fn(&Simplex) -> f64 + Send + Sync + 'static) -> Germ {
        Germ {
            degree,
            dim: None,
            f: Arc::new(f),
            label: None,
        }
    }

    /// The 0-germ of a point function.
    pub fn from_point_fn(f: impl Fn(&Point) -> f64 + Send + Sync + 'static) -> Germ {
        Germ::new(0, move |s| f(s.vertex(0)))
    }

    pub fn zero(degree: usize) -> Germ {
        Germ::new(degree, |_| 0.0).with_label("0")
    }

    /// Restricts the declared domain to ℝᵈ; used for dimension checks.
    pub fn with_dim(mut self, dim: usize) -> Germ {
        self.dim = Some(dim);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Germ {
        self.label = Some(Arc::from(label.into()));
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    #[inline]
    pub fn eval(&self, s: &Simplex) -> f64 {
        (self.f)(s)
    }

    fn check_same_degree(&self, other: &Germ) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::Degree(format!(
                "cannot combine germs of degree {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Germ, b: f64) -> Result<Germ> {
        self.check_same_degree(other)?;
        let (f, g) = (self.f.clone(), other.f.clone());
        let mut out = Germ::new(self.degree, move |s| a * f(s) + b * g(s));
        out.dim = self.dim.or(other.dim);
        Ok(out)
    }

    pub fn plus(&self, other: &Germ) -> Result<Germ> {
        self.combine(1.0, other, 1.0)
    }

    pub fn minus(&self, other: &Germ) -> Result<Germ> {
        self.combine(1.0, other, -1.0)
    }

    pub fn scaled(&self, c: f64) -> Germ {
        let f = self.f.clone();
        let mut out = Germ::new(self.degree, move |s| c * f(s));
        out.dim = self.dim;
        out
    }

    /// Wraps the germ with a shared memo cache keyed by quantized vertices.
    ///
    /// With `alternating` set, values are computed on the canonical vertex
    /// order and signed by the sorting permutation.
    pub fn memoized(&self, alternating: bool) -> (Germ, Arc<MemoCache<f64>>) {
        let cache = Arc::new(MemoCache::new());
        let c = cache.clone();
        let f = self.f.clone();
        let mut out = Germ::new(self.degree, move |s| {
            if alternating {
                let (canon, sign) = canonical_order(s);
                sign * c.get_or_insert_with(quantize(&canon), || f(&canon))
            } else {
                c.get_or_insert_with(quantize(s), || f(s))
            }
        });
        out.dim = self.dim;
        out.label = self.label.clone();
        (out, cache)
    }
}

/// Integer key of a simplex with coordinates rounded to 12 decimals.
pub fn quantize(s: &Simplex) -> Vec<i64> {
    s.vertices()
        .iter()
        .flat_map(|p| p.coords().iter().map(|x| (x * 1e12).round() as i64))
        .collect()
}

/// Reorders the vertices by their quantized coordinates; returns the sign of
/// the applied permutation.
pub fn canonical_order(s: &Simplex) -> (Simplex, f64) {
    let v = s.vertices();
    let keys: Vec<Vec<i64>> = v
        .iter()
        .map(|p| {
            p.coords()
                .iter()
                .map(|x| (x * 1e12).round() as i64)
                .collect()
        })
        .collect();
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let pts: Vec<Point> = order.iter().map(|&i| v[i]).collect();
    let sign = simplex::permutation_sign(&order) as f64;
    (Simplex::from_points_unchecked(&pts), sign)
}

/// Concurrency-safe memo table with hit/miss counters. Concurrent inserts
/// of the same key are benign: values are deterministic, last writer wins.
pub struct MemoCache<V, K = Vec<i64>> {
    map: DashMap<K, V, FxBuildHasher>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl<V: Copy, K: Eq + Hash> Default for MemoCache<V, K> {
    fn default() -> Self {
        MemoCache::new()
    }
}

impl<V: Copy, K: Eq + Hash> MemoCache<V, K> {
    pub fn new() -> Self {
        MemoCache {
            map: DashMap::with_hasher(FxBuildHasher),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        }
    }

    pub fn get<Q>(&self, key: &Q) -> Option<V>
    where
        K: std::borrow::Borrow<Q>,
        Q: Eq + Hash + ?Sized,
    {
        self.map.get(key).map(|v| *v)
    }

    pub fn get_or_insert_with(&self, key: K, f: impl FnOnce() -> V) -> V {
        if let Some(v) = self.map.get(&key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return *v;
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let v = f();
        self.map.insert(key, v);
        v
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn clear(&self) {
        self.map.clear();
    }
}

impl<V> fmt::Debug for MemoCache<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MemoCache")
            .field("len", &self.map.len())
            .field("hits", &self.hits.load(Ordering::Relaxed))
            .field("misses", &self.misses.load(Ordering::Relaxed))
            .finish()
    }
}

/// `Σ wᵢ g(Sᵢ)` with pairwise summation.
pub fn eval_chain(g: &Germ, c: &Chain) -> Result<f64> {
    if c.is_empty() {
        return Ok(0.0);
    }
    if g.degree() != c.degree() {
        return Err(Error::Degree(format!(
            "cannot pair a {}-germ with a {}-chain",
            g.degree(),
            c.degree()
        )));
    }
    let vals: Vec<f64> = c.terms().iter().map(|(w, s)| w * g.eval(s)).collect();
    Ok(pairwise_sum(&vals))
}

/// `(δg)(S) = g(∂S)`.
pub fn coboundary(g: &Germ) -> Result<Germ> {
    if g.degree() >= simplex::MAX_DEGREE {
        return Err(Error::Degree(format!(
            "coboundary of a {}-germ needs {}-simplices",
            g.degree(),
            g.degree() + 1
        )));
    }
    let f = g.f.clone();
    let mut out = Germ::new(g.degree() + 1, move |s| {
        let mut acc = 0.0;
        for i in 0..=s.degree() {
            let v = f(&s.face(i));
            if i % 2 == 0 {
                acc += v;
            } else {
                acc -= v;
            }
        }
        acc
    });
    out.dim = g.dim;
    Ok(out)
}

/// `(a ∪ b)[p0 … p_{k+h}] = a[p0 … pk] · b[pk … p_{k+h}]`.
pub fn cup(a: &Germ, b: &Germ) -> Result<Germ> {
    let (k, h) = (a.degree(), b.degree());
    if k + h > simplex::MAX_DEGREE {
        return Err(Error::Degree(format!(
            "cup product of degree {} is not supported",
            k + h
        )));
    }
    let (fa, fb) = (a.f.clone(), b.f.clone());
    let mut out = Germ::new(k + h, move |s| {
        let v = s.vertices();
        let left = Simplex::from_points_unchecked(&v[..=k]);
        let right = Simplex::from_points_unchecked(&v[k..]);
        fa(&left) * fb(&right)
    });
    out.dim = a.dim.or(b.dim);
    Ok(out)
}

/// `(φ♮g)(S) = g(φ♮S)`.
pub fn pullback<M: PointMap + 'static>(m: Arc<M>, g: &Germ) -> Result<Germ> {
    if let Some(d) = g.dim() {
        if d != m.target_dim() {
            return Err(Error::Dimension(format!(
                "map lands in dimension {}, germ lives in dimension {d}",
                m.target_dim()
            )));
        }
    }
    let f = g.f.clone();
    let src = m.source_dim();
    let mut out = Germ::new(g.degree(), move |s| f(&s.map_vertices(|p| m.map_point(p))));
    out.dim = Some(src);
    Ok(out)
}

/// `η[p0 … p_{k-1}] = g[p̄ p0 … p_{k-1}]`; `δη = g` whenever g is closed.
pub fn poincare_primitive(g: &Germ, base: Point) -> Result<Germ> {
    if g.degree() == 0 {
        return Err(Error::Degree("a 0-germ has no primitive".into()));
    }
    let f = g.f.clone();
    let mut out = Germ::new(g.degree() - 1, move |s| {
        let mut pts = Vec::with_capacity(s.degree() + 2);
        pts.push(base);
        pts.extend_from_slice(s.vertices());
        f(&Simplex::from_points_unchecked(&pts))
    });
    out.dim = g.dim;
    Ok(out)
}

/// `[p q r] ↦ ½ det[[qⁱ-pⁱ, rⁱ-pⁱ], [qʲ-pʲ, rʲ-pʲ]]`, the oriented area of
/// the projection to the (i, j) coordinate plane.
pub fn signed_area(i: usize, j: usize) -> Germ {
    Germ::new(2, move |s| {
        let (p, q, r) = (s.vertex(0), s.vertex(1), s.vertex(2));
        let (a, b) = (q.sub(p), r.sub(p));
        0.5 * (a.get(i) * b.get(j) - b.get(i) * a.get(j))
    })
    .with_label(format!("dx{}^dx{}", i + 1, j + 1))
}

/// `[p q] ↦ |q - p|`, additive along lines but not alternating.
pub fn abs_increment() -> Germ {
    Germ::new(1, |s| s.vertex(1).dist(s.vertex(0))).with_label("|t-s|")
}

/// `[p q] ↦ qⁱ - pⁱ`.
pub fn coordinate_increment(i: usize) -> Germ {
    Germ::new(1, move |s| s.vertex(1).get(i) - s.vertex(0).get(i))
        .with_label(format!("dx{}", i + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum GaugeFamily {
    /// `coef · diam^gamma1 · vol₂^gamma2`.
    Power {
        gamma1: f64,
        gamma2: f64,
        coef: f64,
    },
    Custom {
        uniform: bool,
    },
}

/// A nonnegative germ used to measure other germs.
#[derive(Clone, Debug)]
pub struct Gauge {
    germ: Germ,
    family: GaugeFamily,
}

impl Gauge {
    pub fn power(degree: usize, gamma1: f64, gamma2: f64) -> Result<Gauge> {
        Gauge::power_with_coef(degree, gamma1, gamma2, 1.0)
    }

    fn power_with_coef(degree: usize, gamma1: f64, gamma2: f64, coef: f64) -> Result<Gauge> {
        if !(gamma1 >= 0.0 && gamma2 >= 0.0 && coef >= 0.0) {
            return Err(Error::Parameter(format!(
                "power gauge needs nonnegative exponents, got ({gamma1}, {gamma2})"
            )));
        }
        let germ = Germ::new(degree, move |s| {
            let a = diam(s).powf(gamma1);
            let b = if gamma2 == 0.0 {
                1.0
            } else {
                vol2(s).powf(gamma2)
            };
            coef * a * b
        })
        .with_label(format!("diam^{gamma1} vol2^{gamma2}"));
        Ok(Gauge {
            germ,
            family: GaugeFamily::Power {
                gamma1,
                gamma2,
                coef,
            },
        })
    }

    /// `diam^gamma`.
    pub fn diam_pow(degree: usize, gamma: f64) -> Result<Gauge> {
        Gauge::power(degree, gamma, 0.0)
    }

    /// A user gauge; values must be nonnegative.
    pub fn custom(germ: Germ, uniform: bool) -> Gauge {
        Gauge {
            germ,
            family: GaugeFamily::Custom { uniform },
        }
    }

    pub fn eval(&self, s: &Simplex) -> f64 {
        self.germ.eval(s)
    }

    pub fn germ(&self) -> &Germ {
        &self.germ
    }

    pub fn family(&self) -> GaugeFamily {
        self.family
    }

    pub fn degree(&self) -> usize {
        self.germ.degree()
    }

    /// Scaling exponent `γ₁ + 2γ₂` of a power gauge.
    pub fn homogeneity(&self) -> Option<f64> {
        match self.family {
            GaugeFamily::Power { gamma1, gamma2, .. } => Some(gamma1 + 2.0 * gamma2),
            GaugeFamily::Custom { .. } => None,
        }
    }
}

/// `ũ(S) = Σₙ 2ⁿʳ u((2⁻ⁿ)♮S)` in closed form for power gauges.
pub fn dini_transform(u: &Gauge, r: f64) -> Result<Gauge> {
    match u.family {
        GaugeFamily::Power {
            gamma1,
            gamma2,
            coef,
        } => {
            let h = gamma1 + 2.0 * gamma2;
            if r >= h {
                return Err(Error::DivergentGauge { r, homogeneity: h });
            }
            let factor = 1.0 / (1.0 - 2f64.powf(r - h));
            Gauge::power_with_coef(u.degree(), gamma1, gamma2, coef * factor)
        }
        GaugeFamily::Custom { .. } => Err(Error::Parameter(
            "custom gauges need an explicit truncation, see dini_transform_truncated".into(),
        )),
    }
}

/// The Dini series truncated after `terms` terms, scaling about the origin.
pub fn dini_transform_truncated(u: &Gauge, r: f64, terms: usize) -> Gauge {
    let g = u.germ.clone();
    let germ = Germ::new(u.degree(), move |s| {
        let origin = Point::origin(s.dim());
        (0..terms)
            .map(|n| {
                let lam = 0.5f64.powi(n as i32);
                2f64.powf(n as f64 * r) * g.eval(&s.scaled_about(&origin, lam))
            })
            .sum()
    });
    Gauge::custom(
        germ,
        matches!(u.family, GaugeFamily::Custom { uniform: true }),
    )
}

/// Sampling plan for seminorm estimates.
#[derive(Clone, Debug)]
pub struct SamplerConfig {
    pub dim: usize,
    /// Samples are drawn from the box `[lo, hi]^dim`.
    pub lo: f64,
    pub hi: f64,
    /// Simplex whose dyadic descendants are sampled; defaults to a corner
    /// simplex of the box.
    pub reference: Option<Simplex>,
    pub dyadic_depth: usize,
    pub random_samples: usize,
    pub scales: usize,
    /// Number of random simplices shrunk at every scale `2⁻ⁿ`.
    pub multiscale_bases: usize,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn new(dim: usize) -> SamplerConfig {
        SamplerConfig {
            dim,
            lo: 0.0,
            hi: 1.0,
            reference: None,
            dyadic_depth: 8,
            random_samples: 10_000,
            scales: 20,
            multiscale_bases: 32,
            seed: 0x5eed,
        }
    }

    /// A reduced plan for expensive germs.
    pub fn light(dim: usize) -> SamplerConfig {
        SamplerConfig {
            dyadic_depth: 4,
            random_samples: 300,
            scales: 12,
            multiscale_bases: 8,
            ..SamplerConfig::new(dim)
        }
    }

    /// Corner simplex of the box.
    pub fn default_reference(&self, degree: usize) -> Simplex {
        let d = self.dim;
        let p0 = Point::from_slice_unchecked(&vec![self.lo; d]);
        let mut pts = vec![p0];
        for i in 1..=degree {
            if i <= d {
                let mut c = vec![self.lo; d];
                c[i - 1] = self.hi;
                pts.push(Point::from_slice_unchecked(&c));
            } else {
                let m = Point::midpoint(&pts[0], &pts[i - d]);
                pts.push(m);
            }
        }
        Simplex::from_points_unchecked(&pts)
    }

    pub(crate) fn random_point(&self, rng: &mut ChaCha8Rng) -> Point {
        let c: Vec<f64> = (0..self.dim)
            .map(|_| rng.gen_range(self.lo..=self.hi))
            .collect();
        Point::from_slice_unchecked(&c)
    }

    pub(crate) fn random_simplex(&self, degree: usize, rng: &mut ChaCha8Rng) -> Simplex {
        let pts: Vec<Point> = (0..=degree).map(|_| self.random_point(rng)).collect();
        Simplex::from_points_unchecked(&pts)
    }

    /// Visits every sampled simplex in a fixed order.
    pub fn for_each_sample(&self, degree: usize, mut visit: impl FnMut(&Simplex)) {
        let reference = self
            .reference
            .unwrap_or_else(|| self.default_reference(degree));
        if (1..=2).contains(&degree) {
            let mut level = vec![reference];
            for _ in 0..=self.dyadic_depth {
                for s in &level {
                    visit(s);
                }
                if level.len() > 1 << 20 {
                    break;
                }
                let mut next = Vec::with_capacity(level.len() * 4);
                for s in &level {
                    decompose::for_each_child(s, Variant::Dya, |_, c| next.push(c));
                }
                level = next;
            }
        } else {
            visit(&reference);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.random_samples {
            visit(&self.random_simplex(degree, &mut rng));
        }
        let mut bases = vec![reference];
        for _ in 0..self.multiscale_bases {
            bases.push(self.random_simplex(degree, &mut rng));
        }
        for b in &bases {
            for n in 1..=self.scales {
                visit(&b.shrunk(0.5f64.powi(n as i32)));
            }
        }
    }
}

/// Sampled lower bound for `[g]_v = sup |g| / v`.
#[derive(Clone, Debug, Serialize)]
pub struct SeminormEstimate {
    pub value: f64,
    pub witness: Option<String>,
    #[serde(skip)]
    pub witness_simplex: Option<Simplex>,
    pub samples_used: usize,
}

/// Maximum of `|g(S)| / v(S)` over the sample family, skipping `v <= 1e-300`.
pub fn seminorm_estimate(g: &Germ, v: &Gauge, cfg: &SamplerConfig) -> Result<SeminormEstimate> {
    if g.degree() != v.degree() {
        return Err(Error::Degree(format!(
            "germ of degree {} measured by a gauge of degree {}",
            g.degree(),
            v.degree()
        )));
    }
    let mut best = 0.0;
    let mut witness = None;
    let mut used = 0;
    cfg.for_each_sample(g.degree(), |s| {
        let den = v.eval(s);
        if den <= 1e-300 {
            return;
        }
        used += 1;
        let r = g.eval(s).abs() / den;
        if r > best {
            best = r;
            witness = Some(*s);
        }
    });
    Ok(SeminormEstimate {
        value: best,
        witness: witness.map(|s| s.to_string()),
        witness_simplex: witness,
        samples_used: used,
    })
}

/// Settings for [`regularity_probe`].
#[derive(Clone, Debug)]
pub struct ProbeConfig {
    pub dim: usize,
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
    pub seed: u64,
    /// Absolute tolerance, multiplied by `max(1, gauge(S))` when a gauge is set.
    pub tol: f64,
    pub gauge: Option<Gauge>,
}

impl ProbeConfig {
    pub fn new(dim: usize) -> ProbeConfig {
        ProbeConfig {
            dim,
            lo: 0.0,
            hi: 1.0,
            samples: 200,
            seed: 0xfeed,
            tol: 1e-10,
            gauge: None,
        }
    }

    fn tol_at(&self, s: &Simplex) -> f64 {
        let scale = self.gauge.as_ref().map_or(1.0, |g| g.eval(s).max(1.0));
        self.tol * scale
    }

    fn sampler(&self) -> SamplerConfig {
        SamplerConfig {
            lo: self.lo,
            hi: self.hi,
            ..SamplerConfig::new(self.dim)
        }
    }
}

/// Outcome of one sampled identity.
#[derive(Clone, Debug, Serialize)]
pub struct PropertyCheck {
    pub pass: bool,
    pub max_defect: f64,
    pub witness: Option<String>,
    pub checked: usize,
}

impl PropertyCheck {
    fn new() -> PropertyCheck {
        PropertyCheck {
            pass: true,
            max_defect: 0.0,
            witness: None,
            checked: 0,
        }
    }

    pub(crate) fn record(&mut self, defect: f64, tol: f64, s: &Simplex) {
        self.checked += 1;
        let defect = if defect.is_nan() {
            f64::INFINITY
        } else {
            defect
        };
        if defect > self.max_defect {
            self.max_defect = defect;
        }
        if defect > tol && self.pass {
            self.pass = false;
            self.witness = Some(s.to_string());
        }
    }

    pub(crate) fn fresh() -> PropertyCheck {
        PropertyCheck::new()
    }
}

/// Sampled verdicts on the three defining properties of regularity. These
/// are probabilistic: a pass means no counterexample was found.
#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    pub nonatomic: PropertyCheck,
    pub closed_on_planes: PropertyCheck,
    pub alternating: PropertyCheck,
}

impl RegularityReport {
    pub fn verdicts(&self) -> (bool, bool, bool) {
        (
            self.nonatomic.pass,
            self.closed_on_planes.pass,
            self.alternating.pass,
        )
    }

    pub fn is_regular(&self) -> bool {
        self.nonatomic.pass && self.closed_on_planes.pass
    }
}

/// Random affine image of ℝᵐ inside the box: base point plus `m` directions.
fn random_flat(cfg: &SamplerConfig, m: usize, rng: &mut ChaCha8Rng) -> (Point, Vec<Point>) {
    let base = cfg.random_point(rng);
    let half = 0.5 * (cfg.hi - cfg.lo);
    let dirs = (0..m)
        .map(|_| {
            let c: Vec<f64> = (0..cfg.dim).map(|_| rng.gen_range(-half..=half)).collect();
            Point::from_slice_unchecked(&c)
        })
        .collect();
    (base, dirs)
}

fn point_on_flat(base: &Point, dirs: &[Point], rng: &mut ChaCha8Rng) -> Point {
    dirs.iter()
        .fold(*base, |acc, u| acc.add(&u.scale(rng.gen_range(0.0..=1.0))))
}

pub fn regularity_probe(g: &Germ, cfg: &ProbeConfig) -> Result<RegularityReport> {
    let k = g.degree();
    let sampler = cfg.sampler();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut nonatomic = PropertyCheck::new();
    if k >= 1 {
        for i in 0..cfg.samples {
            let s = if i % 2 == 0 {
                let p = sampler.random_point(&mut rng);
                let mut pts = vec![p; k + 1];
                for q in pts.iter_mut().skip(1).take(k - 1) {
                    *q = sampler.random_point(&mut rng);
                }
                pts.swap(0, k);
                Simplex::from_points_unchecked(&pts)
            } else {
                let (base, dirs) = random_flat(&sampler, k - 1, &mut rng);
                let pts: Vec<Point> = (0..=k)
                    .map(|_| point_on_flat(&base, &dirs, &mut rng))
                    .collect();
                Simplex::from_points_unchecked(&pts)
            };
            nonatomic.record(g.eval(&s).abs(), cfg.tol_at(&s), &s);
        }
    }

    let mut closed = PropertyCheck::new();
    if k < simplex::MAX_DEGREE {
        let dg = coboundary(g)?;
        for _ in 0..cfg.samples {
            let (base, dirs) = random_flat(&sampler, k, &mut rng);
            let pts: Vec<Point> = (0..k + 2)
                .map(|_| point_on_flat(&base, &dirs, &mut rng))
                .collect();
            let s = Simplex::from_points_unchecked(&pts);
            closed.record(dg.eval(&s).abs(), cfg.tol_at(&s), &s);
        }
    }

    let mut alternating = PropertyCheck::new();
    let perms = permutations(k + 1);
    for _ in 0..cfg.samples {
        let s = sampler.random_simplex(k, &mut rng);
        let v = g.eval(&s);
        for sigma in &perms {
            let (t, sign) = permute(sigma, &s)?;
            let defect = (g.eval(&t) - sign as f64 * v).abs();
            alternating.record(defect, cfg.tol_at(&s), &s);
        }
    }

    Ok(RegularityReport {
        nonatomic,
        closed_on_planes: closed,
        alternating,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::AffineMap;

    fn tri() -> Simplex {
        Simplex::from_coords(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]).unwrap()
    }

    #[test]
    fn eval_chain_is_linear() {
        let g = Gauge::diam_pow(1, 1.0).unwrap().germ().clone();
        let a = Simplex::from_coords(&[&[0.0], &[1.0]]).unwrap();
        let b = Simplex::from_coords(&[&[0.0], &[3.0]]).unwrap();
        let c = Chain::from_terms(1, vec![(2.0, a), (1.0, b)]).unwrap();
        assert_eq!(eval_chain(&g, &c).unwrap(), 5.0);
        assert_eq!(eval_chain(&g, &Chain::new(1)).unwrap(), 0.0);
        assert!(eval_chain(&signed_area(0, 1), &c).is_err());
    }

    #[test]
    fn coboundary_examples() {
        let f = Germ::from_point_fn(|p| p.get(0));
        let df = coboundary(&f).unwrap();
        let e = Simplex::from_coords(&[&[0.25, 1.0], &[2.0, 0.0]]).unwrap();
        assert_eq!(df.eval(&e), 1.75);
        let ddf = coboundary(&df).unwrap();
        assert_eq!(ddf.eval(&tri()), 0.0);
        let w = Germ::new(1, |s| s.vertex(0).get(0) * s.vertex(1).get(1));
        let dw = coboundary(&w).unwrap();
        let t = tri();
        let expect = w.eval(&t.face(0)) - w.eval(&t.face(1)) + w.eval(&t.face(2));
        assert_eq!(dw.eval(&t), expect);
    }

    #[test]
    fn cup_young_germ_and_commutator() {
        let f = Germ::from_point_fn(|p| p.get(0).sin());
        let g = Germ::from_point_fn(|p| p.get(0) * p.get(0));
        let yg = cup(&f, &coboundary(&g).unwrap()).unwrap();
        let e = Simplex::from_coords(&[&[0.3], &[0.9]]).unwrap();
        assert_eq!(yg.eval(&e), 0.3f64.sin() * (0.81 - 0.09));
        let w = Germ::new(1, |s| s.vertex(1).get(0).exp() - s.vertex(0).get(0));
        let lhs = cup(&w, &f).unwrap().minus(&cup(&f, &w).unwrap()).unwrap();
        let expect = (0.9f64.sin() - 0.3f64.sin()) * w.eval(&e);
        assert!((lhs.eval(&e) - expect).abs() < 1e-15);
    }

    #[test]
    fn pullback_identity_and_dimension_check() {
        let g = signed_area(0, 1).with_dim(2);
        let id = Arc::new(AffineMap::identity(2));
        let pg = pullback(id, &g).unwrap();
        assert_eq!(pg.eval(&tri()), g.eval(&tri()));
        assert!(pullback(Arc::new(AffineMap::identity(3)), &g).is_err());
        let d = Gauge::diam_pow(1, 1.0).unwrap().germ().clone().with_dim(1);
        let scaled = pullback(Arc::new(AffineMap::scaling(1, 3.0)), &d).unwrap();
        let e = Simplex::from_coords(&[&[0.5], &[0.75]]).unwrap();
        assert!((scaled.eval(&e) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn dini_examples() {
        let u = Gauge::diam_pow(1, 2.0).unwrap();
        let e = Simplex::from_coords(&[&[0.0], &[0.5]]).unwrap();
        assert!((dini_transform(&u, 1.0).unwrap().eval(&e) - 2.0 * 0.25).abs() < 1e-15);
        let u3 = Gauge::diam_pow(1, 3.0).unwrap();
        assert!((dini_transform(&u3, 2.0).unwrap().eval(&e) - 2.0 * 0.125).abs() < 1e-15);
        let u15 = Gauge::diam_pow(1, 1.5).unwrap();
        assert!(matches!(
            dini_transform(&u15, 1.5),
            Err(Error::DivergentGauge { .. })
        ));
        let trunc = dini_transform_truncated(&Gauge::custom(u3.germ().clone(), true), 2.0, 60);
        assert!((trunc.eval(&e) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn poincare_of_closed_germ() {
        let f = Germ::from_point_fn(|p| p.get(0));
        let df = coboundary(&f).unwrap();
        let eta = poincare_primitive(&df, Point::origin(1)).unwrap();
        let p = Simplex::from_coords(&[&[0.7]]).unwrap();
        assert_eq!(eta.eval(&p), 0.7);
        let area = signed_area(0, 1);
        let eta = poincare_primitive(&area, Point::origin(2)).unwrap();
        let deta = coboundary(&eta).unwrap();
        let t = Simplex::from_coords(&[&[0.3, 0.2], &[0.9, 0.4], &[0.1, 0.8]]).unwrap();
        assert!((deta.eval(&t) - area.eval(&t)).abs() < 1e-15);
    }

    #[test]
    fn seminorm_simple_cases() {
        let cfg = SamplerConfig {
            random_samples: 500,
            ..SamplerConfig::new(1)
        };
        let d1 = Gauge::diam_pow(1, 1.0).unwrap();
        let est = seminorm_estimate(&abs_increment(), &d1, &cfg).unwrap();
        assert!((est.value - 1.0).abs() < 1e-12);
        let cfg2 = SamplerConfig {
            random_samples: 500,
            ..SamplerConfig::new(2)
        };
        let area = Gauge::power(2, 0.0, 1.0).unwrap();
        let est = seminorm_estimate(&signed_area(0, 1), &area, &cfg2).unwrap();
        assert!((est.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn probe_signed_area_and_abs_increment() {
        let r = regularity_probe(&signed_area(0, 1), &ProbeConfig::new(2)).unwrap();
        assert_eq!(r.verdicts(), (true, true, true));
        let r = regularity_probe(&abs_increment(), &ProbeConfig::new(1)).unwrap();
        assert!(!r.alternating.pass);
        assert!(r.alternating.witness.is_some());
    }

    #[test]
    fn memo_cache_counts_and_alternates() {
        let w = coordinate_increment(0);
        let (m, cache) = w.memoized(true);
        let e = Simplex::from_coords(&[&[0.2], &[0.7]]).unwrap();
        assert!((m.eval(&e) - 0.5).abs() < 1e-15);
        assert!((m.eval(&e.reversed()) + 0.5).abs() < 1e-15);
        assert_eq!(cache.misses(), 1);
        assert_eq!(cache.hits(), 1);
    }
}
