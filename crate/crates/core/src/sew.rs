//! The sewing operator: dyadic refinement of a germ with convergence
//! detection, error estimates and sampled certification of the limit.
//!
//! Convergence and divergence verdicts are numerical heuristics, not proofs
//! of sewability.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decompose::{self, cut_t, flip, for_each_child, Variant, BUDGET};
use crate::error::{Error, Result};
use crate::germ::{eval_chain, Germ, PropertyCheck, SamplerConfig};
use crate::simplex::{Point, Simplex};
use crate::sum::{pairwise_sum, par_pairwise_sum, Neumaier};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SewOptions {
    /// Deepest refinement level; `None` picks 14 for segments, 10 for triangles.
    pub max_level: Option<usize>,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub variant: Variant,
    /// Aitken and Shanks extrapolation of the partial sums.
    pub extrapolate: bool,
    pub divergence_ratio: f64,
    /// Neumaier summation over the streamed leaves instead of the pairwise tree.
    pub compensated: bool,
    /// Convergence is not declared before a level with this many leaves;
    /// coarse levels of kinked data can agree by accident.
    pub min_leaves: usize,
}

impl Default for SewOptions {
    fn default() -> Self {
        SewOptions {
            max_level: None,
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            variant: Variant::Dya,
            extrapolate: false,
            divergence_ratio: 0.95,
            compensated: false,
            min_leaves: 64,
        }
    }
}

impl SewOptions {
    pub fn with_max_level(mut self, n: usize) -> Self {
        self.max_level = Some(n);
        self
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_extrapolation(mut self, on: bool) -> Self {
        self.extrapolate = on;
        self
    }

    pub fn max_level_for(&self, degree: usize) -> usize {
        self.max_level.unwrap_or(if degree <= 1 { 14 } else { 10 })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol >= 0.0) {
            return Err(Error::Parameter(format!(
                "tolerances must be positive, got abs {} rel {}",
                self.abs_tol, self.rel_tol
            )));
        }
        if !(self.divergence_ratio > 0.0) {
            return Err(Error::Parameter("divergence_ratio must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SewStatus {
    Converged,
    MaxLevel,
    Diverged,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SewLevel {
    pub n: usize,
    pub partial_sum: f64,
    /// `|A_n - A_{n-1}|`, absent at level 0.
    pub increment: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SewReport {
    pub value: f64,
    pub status: SewStatus,
    pub levels: Vec<SewLevel>,
    pub observed_rate: Option<f64>,
    pub error_estimate: f64,
}

impl SewReport {
    pub fn partial_sums(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.partial_sum).collect()
    }

    pub fn increments(&self) -> Vec<f64> {
        self.levels.iter().filter_map(|l| l.increment).collect()
    }

    pub fn final_level(&self) -> usize {
        self.levels.last().map_or(0, |l| l.n)
    }

    pub fn converged(&self) -> bool {
        self.status == SewStatus::Converged
    }

    /// Increments that stand above the rounding floor of the partial sums.
    pub fn significant_increments(&self) -> usize {
        let floor = rounding_floor(&self.partial_sums());
        self.increments().iter().filter(|d| **d > floor).count()
    }
}

const RATE_WINDOW: usize = 8;

/// `A_n + Δ_n·r/(1 − r)` with `r = Δ_n/Δ_{n-1}` over the last three terms,
/// skipped when the ratio is not clearly contracting.
fn aitken(seq: &[f64]) -> Option<f64> {
    let m = seq.len();
    if m < 3 {
        return None;
    }
    let (d0, d1) = (seq[m - 2] - seq[m - 3], seq[m - 1] - seq[m - 2]);
    if d0 == 0.0 {
        return None;
    }
    let r = d1 / d0;
    (r.abs() < 0.95).then(|| seq[m - 1] + d1 * r / (1.0 - r))
}

/// Shanks `e₂` of the last five terms by Wynn's ε table; exact on
/// sequences with two geometric error modes.
fn wynn_e2(seq: &[f64]) -> Option<f64> {
    let m = seq.len();
    if m < 5 {
        return None;
    }
    let e0 = &seq[m - 5..];
    let inv = |d: f64| (d != 0.0).then(|| 1.0 / d);
    let mut e1 = [0.0; 4];
    for j in 0..4 {
        e1[j] = inv(e0[j + 1] - e0[j])?;
    }
    let mut e2 = [0.0; 3];
    for j in 0..3 {
        e2[j] = e0[j + 1] + inv(e1[j + 1] - e1[j])?;
    }
    let mut e3 = [0.0; 2];
    for j in 0..2 {
        e3[j] = e1[j + 1] + inv(e2[j + 1] - e2[j])?;
    }
    let v = e2[1] + inv(e3[1] - e3[0])?;
    let last = e0[4];
    let step = (e0[4] - e0[3]).abs();
    (v.is_finite() && (v - last).abs() <= 20.0 * step).then_some(v)
}

fn rounding_floor(sums: &[f64]) -> f64 {
    let scale = sums.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    8.0 * f64::EPSILON * scale + f64::MIN_POSITIVE
}

/// Geometric mean of the last ratios `|Δ_{n}| / |Δ_{n-1}|` along the
/// trailing run of increments above the rounding floor. The product
/// telescopes, so only the window end points matter.
pub fn fitted_rate(deltas: &[f64], sums: &[f64]) -> Option<f64> {
    let floor = rounding_floor(sums);
    let mut start = deltas.len();
    while start > 0 && deltas[start - 1].abs() > floor {
        start -= 1;
    }
    let run = &deltas[start..];
    if run.len() < 2 {
        return None;
    }
    let first = run.len().saturating_sub(RATE_WINDOW + 1);
    let w = &run[first..];
    let ratios = (w.len() - 1) as f64;
    Some((w[w.len() - 1].abs() / w[0].abs()).powf(1.0 / ratios))
}

/// Incremental convergence bookkeeping shared by sewing and compensators.
#[derive(Clone, Debug)]
pub(crate) struct Monitor {
    abs_tol: f64,
    rel_tol: f64,
    extrapolate: bool,
    divergence_ratio: f64,
    sums: Vec<f64>,
    deltas: Vec<f64>,
    extrapolated: Vec<f64>,
    first_pass: Vec<f64>,
    plain_streak: usize,
    extrap_streak: usize,
    first_streak: usize,
    diverge_streak: usize,
    // Divergence is only declared from this level on.
    divergence_floor: usize,
    // Convergence likewise.
    min_level: usize,
    // Stopped because the single Aitken pass settled first.
    settled_first: bool,
}

impl Monitor {
    pub(crate) fn new(
        abs_tol: f64,
        rel_tol: f64,
        extrapolate: bool,
        divergence_ratio: f64,
    ) -> Monitor {
        Monitor {
            abs_tol,
            rel_tol,
            extrapolate,
            divergence_ratio,
            sums: Vec::with_capacity(24),
            deltas: Vec::with_capacity(24),
            extrapolated: Vec::with_capacity(24),
            first_pass: Vec::with_capacity(24),
            plain_streak: 0,
            extrap_streak: 0,
            diverge_streak: 0,
            divergence_floor: 0,
            min_level: 0,
            first_streak: 0,
            settled_first: false,
        }
    }

    /// Increments may grow while the grid is still coarser than the
    /// features of the data, so divergence is judged on the deeper half of
    /// the level range only.
    pub(crate) fn from_options(o: &SewOptions, degree: usize, max_level: usize) -> Monitor {
        let mut min_level = 0;
        while min_level < max_level && (1usize << (degree * min_level)) < o.min_leaves {
            min_level += 1;
        }
        Monitor {
            divergence_floor: max_level / 2,
            min_level,
            ..Monitor::new(o.abs_tol, o.rel_tol, o.extrapolate, o.divergence_ratio)
        }
    }

    fn tol(&self, x: f64) -> f64 {
        self.abs_tol + self.rel_tol * x.abs()
    }

    /// Records the next partial sum; returns a terminal status if reached.
    pub(crate) fn push(&mut self, a: f64) -> Option<SewStatus> {
        let n = self.sums.len();
        self.sums.push(a);
        if n == 0 {
            self.extrapolated.push(a);
            self.first_pass.push(a);
            return None;
        }
        let prev = self.sums[n - 1];
        let d = a - prev;
        self.deltas.push(d);
        if d.abs() <= self.tol(prev) {
            self.plain_streak += 1;
        } else {
            self.plain_streak = 0;
        }

        let r_ext = self.richardson();
        let prev_ext = self.extrapolated[n - 1];
        self.extrapolated.push(r_ext);
        if self.extrapolate && n >= 2 && (r_ext - prev_ext).abs() <= self.tol(prev_ext) {
            self.extrap_streak += 1;
        } else {
            self.extrap_streak = 0;
        }
        let (r1, prev_r1) = (self.first_pass[n], self.first_pass[n - 1]);
        if self.extrapolate && n >= 2 && (r1 - prev_r1).abs() <= self.tol(prev_r1) {
            self.first_streak += 1;
        } else {
            self.first_streak = 0;
        }

        if n >= 2 {
            let before = self.deltas[n - 2].abs();
            let ratio = if before > 0.0 {
                d.abs() / before
            } else {
                f64::INFINITY
            };
            if ratio >= self.divergence_ratio && d.abs() > self.abs_tol {
                self.diverge_streak += 1;
            } else {
                self.diverge_streak = 0;
            }
        }

        let deep = n >= self.min_level;
        if deep && self.plain_streak >= 2 {
            return Some(SewStatus::Converged);
        }
        if deep && self.extrapolate && self.extrap_streak >= 2 {
            return Some(SewStatus::Converged);
        }
        if deep && self.extrapolate && self.first_streak >= 2 {
            self.settled_first = true;
            return Some(SewStatus::Converged);
        }
        if self.diverge_streak >= 4 && n >= self.divergence_floor {
            return Some(SewStatus::Diverged);
        }
        None
    }

    /// Aitken's Δ² on the last three sums, stored as the first pass, and
    /// Shanks `e₂` on the last five as the returned value.
    fn richardson(&mut self) -> f64 {
        let r1 = aitken(&self.sums).unwrap_or(*self.sums.last().expect("non-empty"));
        self.first_pass.push(r1);
        wynn_e2(&self.sums).unwrap_or(r1)
    }

    pub(crate) fn report(&self, status: SewStatus) -> SewReport {
        let levels = self
            .sums
            .iter()
            .enumerate()
            .map(|(n, &s)| SewLevel {
                n,
                partial_sum: s,
                increment: if n == 0 {
                    None
                } else {
                    Some(self.deltas[n - 1].abs())
                },
            })
            .collect();
        let rate = fitted_rate(&self.deltas, &self.sums);
        let use_ext = self.extrapolate && self.sums.len() >= 3;
        let ext = if self.settled_first {
            &self.first_pass
        } else {
            &self.extrapolated
        };
        let value = if use_ext {
            *ext.last().expect("non-empty")
        } else {
            *self.sums.last().expect("non-empty")
        };
        let last = if use_ext {
            let m = ext.len();
            (ext[m - 1] - ext[m - 2]).abs()
        } else {
            self.deltas.last().map_or(0.0, |d| d.abs())
        };
        let error_estimate = match (status, rate) {
            (SewStatus::Diverged, _) => f64::INFINITY,
            (_, Some(r)) if r < 1.0 => last / (1.0 - r),
            (_, Some(_)) => f64::INFINITY,
            (_, None) => last,
        };
        SewReport {
            value,
            status,
            levels,
            observed_rate: rate,
            error_estimate,
        }
    }
}

const FORK_DEPTH: usize = 6;

fn tree_sum(g: &Germ, s: &Simplex, depth: usize, variant: Variant, fork: bool) -> f64 {
    if depth == 0 {
        return g.eval(s);
    }
    let mut kids = [(0.0, *s); 4];
    let mut m = 0;
    for_each_child(s, variant, |w, c| {
        kids[m] = (w, c);
        m += 1;
    });
    let fork = fork && depth >= FORK_DEPTH;
    let sub = |i: usize| kids[i].0 * tree_sum(g, &kids[i].1, depth - 1, variant, fork);
    match (m, fork) {
        (2, false) => sub(0) + sub(1),
        (2, true) => {
            let (a, b) = rayon::join(|| sub(0), || sub(1));
            a + b
        }
        (4, false) => (sub(0) + sub(1)) + (sub(2) + sub(3)),
        (4, true) => {
            let ((a, b), (c, d)) = rayon::join(
                || rayon::join(|| sub(0), || sub(1)),
                || rayon::join(|| sub(2), || sub(3)),
            );
            (a + b) + (c + d)
        }
        _ => unreachable!("dyadic step of a {}-simplex", s.degree()),
    }
}

/// `⟨dyaⁿ S, g⟩` summed along the fixed dyadic tree; the reduction order
/// does not depend on the number of threads.
pub fn partial_sum(g: &Germ, s: &Simplex, n: usize, variant: Variant) -> Result<f64> {
    decompose::check_budget(s.degree(), n)?;
    if n > 0 && !(1..=2).contains(&s.degree()) {
        return Err(Error::Degree(format!(
            "cannot refine a {}-simplex",
            s.degree()
        )));
    }
    Ok(tree_sum(g, s, n, variant, rayon::current_num_threads() > 1))
}

fn compensated_sum(g: &Germ, s: &Simplex, n: usize, variant: Variant) -> Result<f64> {
    let mut acc = Neumaier::new();
    for (w, leaf) in decompose::dya_iter(n, s, variant)? {
        acc.add(w * g.eval(&leaf));
    }
    Ok(acc.value())
}

fn check_sewable_degree(g: &Germ, s: &Simplex) -> Result<()> {
    if g.degree() != s.degree() {
        return Err(Error::Degree(format!(
            "a {}-germ cannot be sewn on a {}-simplex",
            g.degree(),
            s.degree()
        )));
    }
    if !(1..=2).contains(&s.degree()) {
        return Err(Error::Degree(format!(
            "sewing is defined for k in {{1, 2}}, got {}",
            s.degree()
        )));
    }
    Ok(())
}

/// Iterates `A_n = ⟨dyaⁿ S, g⟩` until two consecutive increments fall below
/// `abs_tol + rel_tol·|A_n|`, four consecutive increment ratios exceed
/// `divergence_ratio` in the deeper half of the level range, or the level
/// cap is reached.
pub fn sew_eval(g: &Germ, s: &Simplex, opts: &SewOptions) -> Result<SewReport> {
    check_sewable_degree(g, s)?;
    opts.validate()?;
    let k = s.degree();
    let max_level = opts.max_level_for(k).min(BUDGET / k);
    let mut mon = Monitor::from_options(opts, k, max_level);
    for n in 0..=max_level {
        let a = if opts.compensated {
            compensated_sum(g, s, n, opts.variant)?
        } else {
            partial_sum(g, s, n, opts.variant)?
        };
        if let Some(status) = mon.push(a) {
            return Ok(mon.report(status));
        }
    }
    Ok(mon.report(SewStatus::MaxLevel))
}

/// Sewing of a two-point germ `[p q] ↦ germ(val(p), val(q))` on a segment.
///
/// Point values are computed once per dyadic node and reused by every later
/// level up to `2^STORED_LEVEL` segments; deeper levels recurse below the
/// stored nodes instead of materializing them. Partial sums agree bit for
/// bit with [`sew_eval`] on the same germ.
pub fn sew_eval_two_point<V, F, G>(
    s: &Simplex,
    opts: &SewOptions,
    val: F,
    germ: G,
) -> Result<SewReport>
where
    V: Copy + Send + Sync,
    F: Fn(&Point) -> V + Sync,
    G: Fn(V, V) -> f64 + Sync,
{
    if s.degree() != 1 {
        return Err(Error::Degree(format!(
            "two-point sewing needs a segment, got a {}-simplex",
            s.degree()
        )));
    }
    opts.validate()?;
    let max_level = opts.max_level_for(1).min(BUDGET);
    const CAP: usize = 33;
    let mut pts = Vec::with_capacity(CAP);
    pts.extend([*s.vertex(0), *s.vertex(1)]);
    let mut vals: Vec<V> = Vec::with_capacity(CAP);
    vals.extend(pts.iter().map(&val));
    let (mut np, mut nv): (Vec<Point>, Vec<V>) = (Vec::with_capacity(CAP), Vec::with_capacity(CAP));
    let mut mon = Monitor::from_options(opts, 1, max_level);
    let mut terms: Vec<f64> = Vec::with_capacity(CAP);
    for n in 0..=max_level {
        if n > STORED_LEVEL {
            let a = deep_sum(&pts, &vals, n - STORED_LEVEL, opts.compensated, &val, &germ);
            if let Some(status) = mon.push(a) {
                return Ok(mon.report(status));
            }
            continue;
        }
        if n > 0 {
            np.clear();
            nv.clear();
            if pts.len() > 4096 && rayon::current_num_threads() > 1 {
                use rayon::prelude::*;
                let mids: Vec<Point> = pts
                    .windows(2)
                    .map(|w| Point::midpoint(&w[0], &w[1]))
                    .collect();
                let mid_vals: Vec<V> = mids.par_iter().map(&val).collect();
                for i in 0..mids.len() {
                    np.extend([pts[i], mids[i]]);
                    nv.extend([vals[i], mid_vals[i]]);
                }
            } else {
                for i in 0..pts.len() - 1 {
                    let m = Point::midpoint(&pts[i], &pts[i + 1]);
                    np.extend([pts[i], m]);
                    nv.extend([vals[i], val(&m)]);
                }
            }
            np.push(pts[pts.len() - 1]);
            nv.push(vals[vals.len() - 1]);
            std::mem::swap(&mut pts, &mut np);
            std::mem::swap(&mut vals, &mut nv);
        }
        terms.clear();
        terms.extend(vals.windows(2).map(|w| germ(w[0], w[1])));
        let a = if opts.compensated {
            let mut acc = Neumaier::new();
            terms.iter().for_each(|t| acc.add(*t));
            acc.value()
        } else {
            par_pairwise_sum(&terms, 1 << 14)
        };
        if let Some(status) = mon.push(a) {
            return Ok(mon.report(status));
        }
    }
    Ok(mon.report(SewStatus::MaxLevel))
}

const STORED_LEVEL: usize = 18;

/// Level-`STORED_LEVEL + depth` sum, refining each stored segment depth
/// first. A pairwise sum over `2ᵈ` terms has the same tree as the dyadic
/// refinement, so the result matches the materialized path.
fn deep_sum<V, F, G>(
    pts: &[Point],
    vals: &[V],
    depth: usize,
    compensated: bool,
    val: &F,
    germ: &G,
) -> f64
where
    V: Copy + Send + Sync,
    F: Fn(&Point) -> V + Sync,
    G: Fn(V, V) -> f64 + Sync,
{
    fn tree<V: Copy, F: Fn(&Point) -> V, G: Fn(V, V) -> f64>(
        a: (&Point, V),
        b: (&Point, V),
        d: usize,
        val: &F,
        germ: &G,
        acc: &mut Option<&mut Neumaier>,
    ) -> f64 {
        if d == 0 {
            let t = germ(a.1, b.1);
            if let Some(n) = acc.as_deref_mut() {
                n.add(t);
            }
            return t;
        }
        let m = Point::midpoint(a.0, b.0);
        let vm = val(&m);
        tree(a, (&m, vm), d - 1, val, germ, acc) + tree((&m, vm), b, d - 1, val, germ, acc)
    }
    let seg = |i: usize, acc: &mut Option<&mut Neumaier>| {
        tree(
            (&pts[i], vals[i]),
            (&pts[i + 1], vals[i + 1]),
            depth,
            val,
            germ,
            acc,
        )
    };
    if compensated {
        let mut n = Neumaier::new();
        for i in 0..pts.len() - 1 {
            seg(i, &mut Some(&mut n));
        }
        return n.value();
    }
    use rayon::prelude::*;
    let subtotals: Vec<f64> = (0..pts.len() - 1)
        .into_par_iter()
        .map(|i| seg(i, &mut None))
        .collect();
    pairwise_sum(&subtotals)
}

/// Observed geometric decay ratio of the increments of [`sew_eval`]. For
/// `δg ≈ 0` with respect to `diam^γ` the theoretical ratio is `2^{k-γ}`.
pub fn sew_rate(g: &Germ, s: &Simplex, opts: &SewOptions) -> Result<f64> {
    rate_of(&sew_eval(g, s, opts)?)
}

/// The observed rate of a report, requiring three significant increments.
pub fn rate_of(report: &SewReport) -> Result<f64> {
    let sig = report.significant_increments();
    if sig < 3 {
        return Err(Error::InsufficientData(format!(
            "{sig} significant increment(s); at least 3 are needed"
        )));
    }
    report
        .observed_rate
        .ok_or_else(|| Error::InsufficientData("no trailing run of increments".into()))
}

/// The germ `S ↦ value of sew_eval(g, S)`; NaN where sewing fails.
pub fn sewn_germ(g: &Germ, opts: &SewOptions) -> Germ {
    let g = g.clone();
    let opts = opts.clone();
    let label = format!("sew({})", g.label().unwrap_or("ω"));
    Germ::new(g.degree(), move |s| {
        sew_eval(&g, s, &opts).map_or(f64::NAN, |r| r.value)
    })
    .with_label(label)
}

/// Settings for [`certify_sewn`].
#[derive(Clone, Debug)]
pub struct CertifyConfig {
    pub dim: usize,
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
    pub seed: u64,
    /// Absolute tolerance scaled by `max(1, |value|)`.
    pub tol: f64,
    pub cut_params: Vec<f64>,
}

impl CertifyConfig {
    pub fn new(dim: usize) -> CertifyConfig {
        CertifyConfig {
            dim,
            lo: 0.0,
            hi: 1.0,
            samples: 6,
            seed: 0xce27,
            tol: 1e-7,
            cut_params: vec![0.3, 0.5, 0.9],
        }
    }
}

/// Sampled checks that a sewn germ behaves like a regular germ.
#[derive(Clone, Debug, Serialize)]
pub struct CertificationReport {
    pub antisymmetric: PropertyCheck,
    pub cut_additive: PropertyCheck,
    /// Vacuous for segments.
    pub flip_annihilated: PropertyCheck,
    pub nonatomic: PropertyCheck,
}

impl CertificationReport {
    pub fn passed(&self) -> bool {
        self.antisymmetric.pass
            && self.cut_additive.pass
            && self.flip_annihilated.pass
            && self.nonatomic.pass
    }
}

/// Verifies on samples that `sewn` is antisymmetric under an odd vertex
/// swap, additive under `cut_t`, annihilates flip chains and vanishes on
/// degenerate simplices. The first probe is the corner simplex of the box.
pub fn certify_sewn(sewn: &Germ, cfg: &CertifyConfig) -> Result<CertificationReport> {
    let k = sewn.degree();
    if !(1..=2).contains(&k) {
        return Err(Error::Degree(format!(
            "certification covers k in {{1, 2}}, got {k}"
        )));
    }
    let sampler = SamplerConfig {
        lo: cfg.lo,
        hi: cfg.hi,
        ..SamplerConfig::new(cfg.dim)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut probes = vec![sampler.default_reference(k)];
    while probes.len() < cfg.samples.max(1) {
        probes.push(sampler.random_simplex(k, &mut rng));
    }
    let tol = |v: f64| cfg.tol * v.abs().max(1.0);

    let mut antisymmetric = PropertyCheck::fresh();
    let mut cut_additive = PropertyCheck::fresh();
    let mut flip_annihilated = PropertyCheck::fresh();
    let mut nonatomic = PropertyCheck::fresh();
    for s in &probes {
        let v = sewn.eval(s);
        let swapped = if k == 1 {
            s.reversed()
        } else {
            Simplex::from_points_unchecked(&[*s.vertex(0), *s.vertex(2), *s.vertex(1)])
        };
        antisymmetric.record((sewn.eval(&swapped) + v).abs(), tol(v), s);
        for &t in &cfg.cut_params {
            let c = cut_t(t, s)?;
            cut_additive.record((eval_chain(sewn, &c)? - v).abs(), tol(v), s);
        }
        if k == 2 {
            let f = flip(s)?;
            flip_annihilated.record(eval_chain(sewn, &f)?.abs(), tol(v), s);
        }
        let p = *s.vertex(0);
        let degenerate = if k == 1 {
            Simplex::from_points_unchecked(&[p, p])
        } else {
            let q = *s.vertex(1);
            let t: f64 = rng.gen_range(0.1..0.9);
            Simplex::from_points_unchecked(&[p, Point::lerp(&p, &q, t), q])
        };
        nonatomic.record(sewn.eval(&degenerate).abs(), tol(0.0), &degenerate);
    }
    Ok(CertificationReport {
        antisymmetric,
        cut_additive,
        flip_annihilated,
        nonatomic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::{abs_increment, coboundary, cup, signed_area};

    fn e(a: f64, b: f64) -> Simplex {
        Simplex::from_coords(&[&[a], &[b]]).unwrap()
    }

    fn young_germ(f: fn(f64) -> f64, g: fn(f64) -> f64) -> Germ {
        let fg = Germ::from_point_fn(move |p| f(p.get(0)));
        let gg = Germ::from_point_fn(move |p| g(p.get(0)));
        cup(&fg, &coboundary(&gg).unwrap()).unwrap()
    }

    #[test]
    fn constant_times_identity() {
        let r = sew_eval(
            &young_germ(|_| 1.0, |t| t),
            &e(0.0, 2.0),
            &SewOptions::default(),
        )
        .unwrap();
        assert_eq!(r.status, SewStatus::Converged);
        assert_eq!(r.value, 2.0);
        assert!(r.increments().iter().all(|d| *d == 0.0));
    }

    #[test]
    fn coordinate_young_germ_in_the_plane() {
        let f = Germ::from_point_fn(|p| p.get(0));
        let g = Germ::from_point_fn(|p| p.get(1));
        let w = cup(&f, &coboundary(&g).unwrap()).unwrap();
        let s = Simplex::from_coords(&[&[0.0, 0.0], &[1.0, 1.0]]).unwrap();
        let opts = SewOptions::default().with_extrapolation(true);
        let r = sew_eval(&w, &s, &opts).unwrap();
        assert!(r.converged());
        assert!((r.value - 0.5).abs() < 1e-9, "{}", r.value);
        let plain = sew_eval(&w, &s, &SewOptions::default().with_max_level(20)).unwrap();
        assert!((plain.value - 0.5).abs() < 1e-6);
    }

    #[test]
    fn regular_germ_has_zero_increments() {
        let s = Simplex::from_coords(&[&[0.1, 0.2], &[0.8, 0.1], &[0.3, 0.9]]).unwrap();
        let r = sew_eval(&signed_area(0, 1), &s, &SewOptions::default()).unwrap();
        assert!(r.converged());
        assert!(r.increments().iter().all(|d| *d < 1e-16));
        assert!(matches!(rate_of(&r), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn two_point_path_matches_generic_bitwise() {
        let opts = SewOptions::default().with_max_level(9);
        let s = e(0.1, 1.3);
        let generic = sew_eval(&young_germ(f64::sin, f64::cos), &s, &opts).unwrap();
        let fast = sew_eval_two_point(
            &s,
            &opts,
            |p| (p.get(0).sin(), p.get(0).cos()),
            |a, b| a.0 * (b.1 - a.1),
        )
        .unwrap();
        assert_eq!(generic, fast);
    }

    #[test]
    fn deep_levels_match_generic_bitwise() {
        for compensated in [false, true] {
            let opts = SewOptions {
                max_level: Some(STORED_LEVEL + 2),
                abs_tol: 1e-300,
                rel_tol: 0.0,
                compensated,
                ..Default::default()
            };
            let s = e(0.1, 1.3);
            let generic = sew_eval(&young_germ(f64::sin, f64::cos), &s, &opts).unwrap();
            let fast = sew_eval_two_point(
                &s,
                &opts,
                |p| (p.get(0).sin(), p.get(0).cos()),
                |a, b| a.0 * (b.1 - a.1),
            )
            .unwrap();
            assert_eq!(generic.levels.len(), STORED_LEVEL + 3);
            assert_eq!(generic, fast);
        }
    }

    #[test]
    fn smooth_rate_is_one_half() {
        let r = sew_rate(
            &young_germ(f64::sin, f64::exp),
            &e(0.0, 1.0),
            &SewOptions::default(),
        )
        .unwrap();
        assert!((r - 0.5).abs() < 0.02, "{r}");
    }

    #[test]
    fn divergent_germ_is_flagged() {
        let g = Germ::new(1, |s| s.vertex(1).dist(s.vertex(0)).sqrt());
        let r = sew_eval(&g, &e(0.0, 1.0), &SewOptions::default()).unwrap();
        assert_eq!(r.status, SewStatus::Diverged);
        assert!(r.error_estimate.is_infinite());
    }

    #[test]
    fn abs_increment_fails_certification() {
        let sewn = sewn_germ(&abs_increment(), &SewOptions::default());
        let rep = certify_sewn(&sewn, &CertifyConfig::new(1)).unwrap();
        assert!(!rep.antisymmetric.pass);
        assert_eq!(rep.antisymmetric.witness.as_deref(), Some("0;1"));
        assert!(rep.cut_additive.pass);
    }

    #[test]
    fn report_serializes_with_the_documented_keys() {
        let r = sew_eval(
            &young_germ(|t| t, |t| t * t),
            &e(0.0, 1.0),
            &SewOptions::default().with_max_level(3),
        )
        .unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "value",
            "status",
            "levels",
            "observed_rate",
            "error_estimate",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["levels"][0]["increment"], serde_json::Value::Null);
        assert_eq!(v["status"], "MaxLevel");
    }
}
