//! Side compensators of 2-germs along segments.
//!
//! `L(ω)` is the 1-germ satisfying `η(pq) = η(pr) + η(rq) − ω(prq)` for the
//! midpoint `r`, obtained as the limit of
//! `Lⁿ⁺¹(pq) = Lⁿ(pr) + Lⁿ(rq) − ω(prq)`, `L⁰(pq) = ω(prq)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::germ::{Germ, SamplerConfig};
use crate::sew::{Monitor, SewReport, SewStatus};
use crate::simplex::{Chain, Point, Simplex};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompensatorOptions {
    pub max_depth: usize,
    pub abs_tol: f64,
    /// Aitken extrapolation of `Lⁿ`.
    pub extrapolate: bool,
}

impl Default for CompensatorOptions {
    fn default() -> Self {
        CompensatorOptions {
            max_depth: 24,
            abs_tol: 1e-10,
            extrapolate: true,
        }
    }
}

impl CompensatorOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_depth == 0 || !(self.abs_tol > 0.0) {
            return Err(Error::Parameter(format!(
                "compensator needs max_depth > 0 and abs_tol > 0, got {} and {}",
                self.max_depth, self.abs_tol
            )));
        }
        if self.max_depth > crate::decompose::BUDGET {
            return Err(Error::Budget {
                cost: self.max_depth,
                cap: crate::decompose::BUDGET,
            });
        }
        Ok(())
    }
}

/// `(1 − 2^{1−α})⁻¹`, the factor relating `[L(ω)]` for `diam^α` to `[ω]`.
pub fn bound_constant(alpha: f64) -> Result<f64> {
    if alpha <= 1.0 {
        return Err(Error::DivergentGauge {
            r: 1.0,
            homogeneity: alpha,
        });
    }
    Ok(1.0 / (1.0 - 2f64.powf(1.0 - alpha)))
}

const FORK_DEPTH: usize = 8;

/// `Σ ω(a, m, b)` over the depth-`depth` segments `[a, b]` of the midpoint
/// tree of `[p, q]`, summed pairwise along the tree.
fn midpoint_tree_sum(omega: &Germ, p: Point, q: Point, depth: usize, fork: bool) -> f64 {
    let m = Point::midpoint(&p, &q);
    if depth == 0 {
        return omega.eval(&Simplex::from_points_unchecked(&[p, m, q]));
    }
    if fork && depth >= FORK_DEPTH {
        let (a, b) = rayon::join(
            || midpoint_tree_sum(omega, p, m, depth - 1, fork),
            || midpoint_tree_sum(omega, m, q, depth - 1, fork),
        );
        a + b
    } else {
        midpoint_tree_sum(omega, p, m, depth - 1, fork)
            + midpoint_tree_sum(omega, m, q, depth - 1, fork)
    }
}

/// `L(ω)` on the segment `seg`. `Lⁿ = T_n − Σ_{d<n} T_d` where `T_d` sums
/// `ω` over the midpoint triangles at depth `d`; the report lists `Lⁿ`.
pub fn side_compensator(
    omega: &Germ,
    seg: &Simplex,
    opts: &CompensatorOptions,
) -> Result<SewReport> {
    if omega.degree() != 2 {
        return Err(Error::Degree(format!(
            "side compensators take 2-germs, got degree {}",
            omega.degree()
        )));
    }
    if seg.degree() != 1 {
        return Err(Error::Degree(format!(
            "side compensators live on segments, got a {}-simplex",
            seg.degree()
        )));
    }
    opts.validate()?;
    let (p, q) = (*seg.vertex(0), *seg.vertex(1));
    let fork = rayon::current_num_threads() > 1;
    let mut mon = Monitor::new(opts.abs_tol, 0.0, opts.extrapolate, f64::INFINITY);
    let mut below = 0.0;
    for n in 0..=opts.max_depth {
        let t = midpoint_tree_sum(omega, p, q, n, fork);
        let l = t - below;
        below += t;
        if let Some(status) = mon.push(l) {
            return Ok(mon.report(status));
        }
    }
    Ok(mon.report(SewStatus::MaxLevel))
}

/// The 1-germ `pq ↦ L(ω)(pq)`; NaN where the recursion fails.
pub fn compensator_germ(omega: &Germ, opts: &CompensatorOptions) -> Germ {
    let omega = omega.clone();
    let opts = opts.clone();
    Germ::new(1, move |s| {
        side_compensator(&omega, s, &opts).map_or(f64::NAN, |r| r.value)
    })
    .with_label("L(ω)")
}

#[derive(Clone, Debug)]
pub struct CancellationConfig {
    pub sampler: SamplerConfig,
    pub samples: usize,
    pub opts: CompensatorOptions,
}

impl CancellationConfig {
    pub fn new(dim: usize) -> CancellationConfig {
        CancellationConfig {
            sampler: SamplerConfig::new(dim),
            samples: 20,
            opts: CompensatorOptions::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CancellationReport {
    pub max_discrepancy: f64,
    pub witness: Option<String>,
    pub samples: usize,
    /// Every compensator evaluation reached `Converged`.
    pub all_converged: bool,
}

/// Compares `ω(S)` with `⟨∂S, L(ω)⟩` on sampled triangles.
pub fn cancellation_check(omega: &Germ, cfg: &CancellationConfig) -> Result<CancellationReport> {
    if omega.degree() != 2 {
        return Err(Error::Degree(format!(
            "cancellation needs a 2-germ, got degree {}",
            omega.degree()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.sampler.seed);
    let mut probes = vec![cfg.sampler.default_reference(2)];
    while probes.len() < cfg.samples.max(1) {
        probes.push(cfg.sampler.random_simplex(2, &mut rng));
    }
    let mut report = CancellationReport {
        max_discrepancy: 0.0,
        witness: None,
        samples: probes.len(),
        all_converged: true,
    };
    for s in &probes {
        let mut rhs = 0.0;
        for (w, e) in Chain::from_simplex(*s).boundary()?.terms() {
            let r = side_compensator(omega, e, &cfg.opts)?;
            report.all_converged &= r.converged();
            rhs += w * r.value;
        }
        let d = (omega.eval(s) - rhs).abs();
        if d > report.max_discrepancy || d.is_nan() {
            report.max_discrepancy = if d.is_nan() { f64::INFINITY } else { d };
            report.witness = Some(s.to_string());
        }
    }
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct UniquenessConfig {
    pub sampler: SamplerConfig,
    pub samples: usize,
    /// Halving steps for the decay check.
    pub levels: usize,
    pub tol: f64,
}

impl UniquenessConfig {
    pub fn new(dim: usize) -> UniquenessConfig {
        UniquenessConfig {
            sampler: SamplerConfig::new(dim),
            samples: 20,
            levels: 20,
            tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UniquenessReport {
    /// `max |η(pq) − η(pr) − η(rq)|` over the probes.
    pub additivity_defect: f64,
    pub midpoint_additive: bool,
    /// Worst final value of `2ⁿ·|η(p, p + 2⁻ⁿ(q − p))| / max(1, |η(pq)|)`.
    pub decay_tail: f64,
    pub dini_decay: bool,
    pub max_abs: f64,
}

impl UniquenessReport {
    /// Both hypotheses hold, so the germ must vanish.
    pub fn holds(&self) -> bool {
        self.midpoint_additive && self.dini_decay
    }
}

/// Probes the hypotheses under which a midpoint-additive 1-germ is zero:
/// midpoint additivity and decay of `2ⁿ·η` on `2⁻ⁿ`-scaled segments.
pub fn compensator_uniqueness_probe(
    eta: &Germ,
    cfg: &UniquenessConfig,
) -> Result<UniquenessReport> {
    if eta.degree() != 1 {
        return Err(Error::Degree(format!(
            "uniqueness probe takes a 1-germ, got degree {}",
            eta.degree()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.sampler.seed);
    let mut probes = vec![cfg.sampler.default_reference(1)];
    while probes.len() < cfg.samples.max(1) {
        probes.push(cfg.sampler.random_simplex(1, &mut rng));
    }
    let mut rep = UniquenessReport {
        additivity_defect: 0.0,
        midpoint_additive: true,
        decay_tail: 0.0,
        dini_decay: true,
        max_abs: 0.0,
    };
    for s in &probes {
        let (p, q) = (*s.vertex(0), *s.vertex(1));
        let r = Point::midpoint(&p, &q);
        let whole = eta.eval(s);
        let seg = |a: Point, b: Point| eta.eval(&Simplex::from_points_unchecked(&[a, b]));
        let defect = (whole - seg(p, r) - seg(r, q)).abs();
        rep.additivity_defect = rep.additivity_defect.max(defect);
        rep.max_abs = rep.max_abs.max(whole.abs());
        let dir = q.sub(&p);
        let n = cfg.levels;
        let scale = 0.5f64.powi(n as i32);
        let tail =
            2f64.powi(n as i32) * seg(p, p.add(&dir.scale(scale))).abs() / whole.abs().max(1.0);
        rep.decay_tail = rep.decay_tail.max(tail);
    }
    rep.midpoint_additive = rep.additivity_defect <= cfg.tol;
    rep.dini_decay = rep.decay_tail <= 1e-2f64.max(cfg.tol);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::{coboundary, signed_area};

    fn unit() -> Simplex {
        Simplex::from_coords(&[&[0.0], &[1.0]]).unwrap()
    }

    fn power_germ(a: f64) -> Germ {
        Germ::new(1, move |s| s.vertex(1).dist(s.vertex(0)).powf(a))
    }

    #[test]
    fn recovers_eta_from_its_coboundary() {
        let w = coboundary(&power_germ(1.5)).unwrap();
        let r = side_compensator(&w, &unit(), &CompensatorOptions::default()).unwrap();
        assert!(r.converged(), "{:?}", r.status);
        assert!((r.value - 1.0).abs() < 1e-8, "{}", r.value);
    }

    #[test]
    fn plain_recursion_is_slow_but_monotone() {
        let w = coboundary(&power_germ(1.5)).unwrap();
        let opts = CompensatorOptions {
            extrapolate: false,
            max_depth: 12,
            ..Default::default()
        };
        let r = side_compensator(&w, &unit(), &opts).unwrap();
        assert_eq!(r.status, SewStatus::MaxLevel);
        let inc = r.increments();
        assert!(inc.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn area_germ_has_zero_compensator() {
        let s = Simplex::from_coords(&[&[0.0, 0.0], &[1.0, 0.2]]).unwrap();
        let r = side_compensator(&signed_area(0, 1), &s, &CompensatorOptions::default()).unwrap();
        assert!(r.value.abs() < 1e-15);
        let rep = cancellation_check(&signed_area(0, 1), &CancellationConfig::new(2)).unwrap();
        assert!(rep.max_discrepancy > 0.1);
    }

    #[test]
    fn uniqueness_probe_examples() {
        let cfg = UniquenessConfig::new(1);
        assert!(compensator_uniqueness_probe(&Germ::zero(1), &cfg)
            .unwrap()
            .holds());
        let pw = compensator_uniqueness_probe(&power_germ(1.5), &cfg).unwrap();
        assert!(!pw.midpoint_additive && pw.dini_decay);
        let expected = 1.0 - 2.0 * 0.5f64.powf(1.5);
        assert!(pw.additivity_defect >= expected - 1e-12);
        let lin = Germ::new(1, |s| s.vertex(1).get(0) - s.vertex(0).get(0));
        let l = compensator_uniqueness_probe(&lin, &cfg).unwrap();
        assert!(l.midpoint_additive && !l.dini_decay);
    }

    #[test]
    fn bound_constant_at_three_halves() {
        assert!((bound_constant(1.5).unwrap() - (2.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!(bound_constant(1.0).is_err());
    }
}
