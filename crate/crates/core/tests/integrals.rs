use std::sync::Arc;

use proptest::prelude::*;

use roughforms::funcs::{rough_catalog, smooth_catalog, weierstrass_scalar};
use roughforms::germ::{signed_area, Germ};
use roughforms::integrals::{
    pullback_curve, pullback_surface, stokes_check, young, young_germ, young_iterated_check,
    young_oracle, zust, zust_oracle, Scalar0,
};
use roughforms::quad::QuadOptions;
use roughforms::sew::{
    certify_sewn, sew_eval, sew_rate, sewn_germ, CertifyConfig, SewOptions, SewStatus,
};
use roughforms::simplex::{AffineMap, FnMap, Point, PointMap, Simplex};

fn seg(a: f64, b: f64) -> Simplex {
    Simplex::from_coords(&[&[a], &[b]]).unwrap()
}

fn unit_tri() -> Simplex {
    Simplex::from_coords(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]).unwrap()
}

fn x() -> Scalar0 {
    Scalar0::coordinate(0)
}

fn y() -> Scalar0 {
    Scalar0::coordinate(1)
}

fn opts() -> SewOptions {
    SewOptions::default().with_extrapolation(true)
}

#[test]
fn constant_integrand_against_identity() {
    let r = young(
        &Scalar0::constant(1.0),
        &x(),
        &seg(0.0, 2.0),
        &SewOptions::default(),
    )
    .unwrap();
    assert_eq!(r.value, 2.0);
    assert_eq!(r.status(), SewStatus::Converged);
    assert!(r
        .report
        .levels
        .iter()
        .skip(1)
        .all(|l| l.increment == Some(0.0)));
}

#[test]
fn young_polynomial_and_oracle() {
    let g = Scalar0::new("t²", |p| p.get(0) * p.get(0));
    let r = young(&x(), &g, &seg(0.0, 1.0), &opts()).unwrap();
    assert!((r.value - 2.0 / 3.0).abs() <= 1e-8);
    let o = young_oracle(&x(), &g, &seg(0.0, 1.0), &QuadOptions::default()).unwrap();
    assert!((o - 2.0 / 3.0).abs() <= 1e-10);
    let sin = Scalar0::new("sin", |p| p.get(0).sin());
    let o = young_oracle(
        &sin,
        &x(),
        &seg(0.0, std::f64::consts::PI),
        &QuadOptions::default(),
    )
    .unwrap();
    assert!((o - 2.0).abs() <= 1e-10);
}

#[test]
fn diagonal_segment_closed_form() {
    let s = Simplex::from_coords(&[&[0.0, 0.0], &[1.0, 1.0]]).unwrap();
    let r = young(&x(), &y(), &s, &opts()).unwrap();
    assert!((r.value - 0.5).abs() <= 1e-9);
}

#[test]
fn young_is_local_and_alternating() {
    let w = weierstrass_scalar(0.5, 3.0, 40, &[1.0]).unwrap();
    let c = young(
        &w,
        &Scalar0::constant(3.0),
        &seg(0.0, 1.0),
        &SewOptions::default(),
    )
    .unwrap();
    assert_eq!(c.value, 0.0);
    let g = Scalar0::new("exp", |p| p.get(0).exp());
    let f = Scalar0::new("cos", |p| (2.0 * p.get(0)).cos());
    let a = young(&f, &g, &seg(0.2, 0.9), &opts()).unwrap();
    let b = young(&f, &g, &seg(0.9, 0.2), &opts()).unwrap();
    assert!((a.value + b.value).abs() <= a.error_estimate + b.error_estimate + 1e-12);
}

#[test]
fn zust_examples() {
    let one = Scalar0::constant(1.0);
    let r = zust(&x(), &x(), &y(), &unit_tri(), &opts()).unwrap();
    assert!((r.value - 1.0 / 6.0).abs() <= 1e-8, "{}", r.value);
    let c = zust(&x(), &Scalar0::constant(2.0), &y(), &unit_tri(), &opts()).unwrap();
    assert_eq!(c.value, 0.0);
    let a = zust(&one, &x(), &y(), &unit_tri(), &opts()).unwrap();
    let b = zust(&one, &y(), &x(), &unit_tri(), &opts()).unwrap();
    assert!((a.value + b.value).abs() <= 1e-10);
}

#[test]
fn zust_oracle_examples() {
    let q = QuadOptions::default();
    assert!(
        (zust_oracle(&Scalar0::constant(1.0), &unit_tri(), 0, 1, &q).unwrap() - 0.5).abs() < 1e-12
    );
    assert!((zust_oracle(&x(), &unit_tri(), 0, 1, &q).unwrap() - 1.0 / 6.0).abs() < 1e-12);
    let rev = Simplex::from_coords(&[&[0.0, 0.0], &[0.0, 1.0], &[1.0, 0.0]]).unwrap();
    assert!((zust_oracle(&Scalar0::constant(1.0), &rev, 0, 1, &q).unwrap() + 0.5).abs() < 1e-12);
}

#[test]
fn stokes_on_coordinates() {
    let r = stokes_check(&x(), &y(), &unit_tri(), &opts()).unwrap();
    assert!((r.lhs - 0.5).abs() <= 1e-9 && (r.rhs - 0.5).abs() <= 1e-9);
    let c = stokes_check(
        &Scalar0::constant(2.0),
        &x(),
        &unit_tri(),
        &SewOptions::default(),
    )
    .unwrap();
    assert!(c.lhs.abs() <= 1e-12 && c.rhs.abs() <= 1e-12);
}

#[test]
fn rough_stokes_diagonal() {
    let w = weierstrass_scalar(0.5, 3.0, 40, &[1.0, 1.0]).unwrap();
    let tri = Simplex::from_coords(&[&[0.1, 0.0], &[0.8, 0.2], &[0.3, 0.7]]).unwrap();
    let r = stokes_check(&w, &w, &tri, &SewOptions::default().with_max_level(7)).unwrap();
    assert!(r.holds(), "{} > {}", r.discrepancy(), r.tolerance());
}

#[test]
fn regular_germ_has_zero_increments() {
    let r = sew_eval(&signed_area(0, 1), &unit_tri(), &SewOptions::default()).unwrap();
    assert!(r.levels.iter().skip(1).all(|l| l.increment == Some(0.0)));
    assert!(sew_rate(&signed_area(0, 1), &unit_tri(), &SewOptions::default()).is_err());
}

#[test]
fn smooth_rate_is_one_half() {
    let f = Scalar0::new("sin", |p| p.get(0).sin());
    let g = Scalar0::new("exp", |p| p.get(0).exp());
    let plain = SewOptions::default()
        .with_tolerances(1e-300, 0.0)
        .with_max_level(14);
    let rate = sew_rate(&young_germ(&f, &g), &seg(0.0, 1.0), &plain).unwrap();
    assert!((rate - 0.5).abs() <= 0.1, "{rate}");
}

#[test]
fn sewn_smooth_germ_certifies() {
    let f = Scalar0::new("cos", |p| (2.0 * p.get(0)).cos());
    let g = Scalar0::new("exp", |p| p.get(0).exp());
    let sewn = sewn_germ(&young_germ(&f, &g), &opts());
    let mut cfg = CertifyConfig::new(1);
    cfg.samples = 3;
    let r = certify_sewn(&sewn, &cfg).unwrap();
    assert!(r.passed(), "{r:?}");
}

#[test]
fn weierstrass_antisymmetry_defect_shrinks_with_level() {
    // Reversing [0, 1] swaps left-point for right-point sums, so the defect
    // is the level-n quadratic variation of W.
    let w = weierstrass_scalar(0.5, 3.0, 40, &[1.0]).unwrap();
    let g = young_germ(&w, &w);
    let defect = |n: usize| {
        let o = SewOptions::default()
            .with_tolerances(1e-300, 0.0)
            .with_max_level(n);
        let a = sew_eval(&g, &seg(0.0, 1.0), &o).unwrap().value;
        let b = sew_eval(&g, &seg(1.0, 0.0), &o).unwrap().value;
        (a + b).abs()
    };
    let (d8, d12, d16) = (defect(8), defect(12), defect(16));
    assert!(d12 < d8 && d16 < d12, "{d8} {d12} {d16}");
    assert!(d16 > 1e-3);
}

#[test]
fn iterated_product() {
    let cat = smooth_catalog(1);
    let r = young_iterated_check(
        &cat[1].scalar,
        &cat[2].scalar,
        &cat[4].scalar,
        &seg(0.1, 0.7),
        &opts(),
    )
    .unwrap();
    assert!(r.holds(), "{} > {}", r.discrepancy, r.tolerance);
}

#[test]
fn affine_curve_pullback() {
    let phi: Arc<dyn PointMap> =
        Arc::new(AffineMap::new(vec![2.0, -1.0], 1, vec![0.5, 0.25]).unwrap());
    let f = Scalar0::new("x+y²", |p| p.get(0) + p.get(1) * p.get(1));
    let g = Scalar0::new("sin x·y", |p| p.get(0).sin() * p.get(1));
    let r = pullback_curve(&f, &g, phi, &seg(0.0, 1.0), &opts()).unwrap();
    assert!(r.discrepancy() <= 1e-9, "{}", r.discrepancy());
    assert!(r.reparam_discrepancy().unwrap() <= 1e-8);
}

#[test]
fn rough_curve_pullback() {
    let w = weierstrass_scalar(0.5, 3.0, 40, &[1.0]).unwrap();
    let phi: Arc<dyn PointMap> = Arc::new(FnMap::new(1, 2, move |p| {
        Point::new(&[p.get(0), w.eval(p)]).unwrap()
    }));
    let r = pullback_curve(&y(), &x(), phi, &seg(0.0, 1.0), &opts().with_max_level(16)).unwrap();
    assert!(
        r.discrepancy() <= r.tolerance,
        "{} > {}",
        r.discrepancy(),
        r.tolerance
    );
}

#[test]
fn surface_pullback_scaling() {
    let phi: Arc<dyn PointMap> = Arc::new(AffineMap::scaling(2, 2.0));
    let r = pullback_surface(
        &Scalar0::constant(1.0),
        &x(),
        &y(),
        phi,
        &unit_tri(),
        &opts(),
    )
    .unwrap();
    assert!((r.algebraic - 2.0).abs() <= 1e-9 && (r.differential - 2.0).abs() <= 1e-9);
    assert!(r.boundary_term.abs() <= 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn young_is_linear_in_f(a in -2.0f64..2.0, b in -2.0f64..2.0, i in 0usize..8, j in 0usize..10) {
        let f1 = rough_catalog(1)[i].scalar.clone();
        let f2 = smooth_catalog(1)[j].scalar.clone();
        let g = Scalar0::new("cos", |p| (1.5 * p.get(0)).cos());
        let o = opts().with_max_level(16);
        let s = seg(0.0, 0.6);
        let (c1, c2) = (f1.clone(), f2.clone());
        let combo = Scalar0::new("combo", move |p| a * c1.eval(p) + b * c2.eval(p));
        let lhs = young(&combo, &g, &s, &o).unwrap();
        let r1 = young(&f1, &g, &s, &o).unwrap();
        let r2 = young(&f2, &g, &s, &o).unwrap();
        let tol = lhs.error_estimate + a.abs() * r1.error_estimate + b.abs() * r2.error_estimate + 1e-12;
        prop_assert!((lhs.value - a * r1.value - b * r2.value).abs() <= tol);
    }

    #[test]
    fn sewing_a_sewn_germ_is_idempotent(p in 0.0f64..0.4, q in 0.6f64..1.0) {
        let f = Scalar0::new("sin", |p| (3.0 * p.get(0)).sin());
        let g = Scalar0::new("x³", |p| p.get(0).powi(3));
        let o = opts();
        let once = young(&f, &g, &seg(p, q), &o).unwrap();
        let sewn: Germ = sewn_germ(&young_germ(&f, &g), &o);
        let twice = sew_eval(&sewn, &seg(p, q), &SewOptions::default().with_max_level(4)).unwrap();
        prop_assert!((twice.value - once.value).abs() <= 1e-8);
    }
}
