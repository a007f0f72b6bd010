use std::sync::Arc;

use roughforms::germ::{Gauge, Germ, SamplerConfig};
use roughforms::integrals::{young, zust};
use roughforms::rough::{
    corrected_sew, corrector_remainder_check, pure_area_family_1d, pure_area_family_2d,
    CorrectedGerm, CorrectionMode,
};
use roughforms::sew::SewOptions;
use roughforms::simplex::Simplex;

fn seg(a: f64, b: f64) -> Simplex {
    Simplex::from_coords(&[&[a], &[b]]).unwrap()
}

fn opts() -> SewOptions {
    SewOptions::default()
        .with_extrapolation(true)
        .with_max_level(20)
}

#[test]
fn one_dimensional_family_matches_its_primitive() {
    for n in [1, 7, 40] {
        let fam = pure_area_family_1d(n, &[1.0]).unwrap();
        let s = seg(0.1, 0.85);
        let r = young(&fam.f, &fam.g, &s, &opts()).unwrap();
        assert!(
            (r.value - fam.exact(&s)).abs() <= r.error_estimate + 1e-9,
            "n={n}"
        );
        assert!((fam.exact(&s) - fam.limit(&s)).abs() <= 1.0 / (2.0 * n as f64));
    }
}

#[test]
fn corrected_sewing_modes() {
    let fam = pure_area_family_1d(25, &[1.0]).unwrap();
    let s = seg(0.0, 1.0);
    let base = fam.corrected(CorrectionMode::Without).unwrap().base;
    let without = corrected_sew(
        &fam.corrected(CorrectionMode::Without).unwrap(),
        &s,
        &opts(),
    )
    .unwrap();
    assert!((without.value - fam.exact(&s)).abs() <= 1e-12);
    let with = corrected_sew(
        &fam.corrected(CorrectionMode::WithCorrectorAdded).unwrap(),
        &s,
        &opts(),
    )
    .unwrap();
    assert!((with.value - base.eval(&s)).abs() <= 1e-12);

    // The trivial corrector ω = base returns base(S).
    let trivial = CorrectedGerm::new(
        base.clone(),
        base.clone(),
        CorrectionMode::WithCorrectorAdded,
    )
    .unwrap();
    assert_eq!(
        corrected_sew(&trivial, &s, &opts()).unwrap().value,
        base.eval(&s)
    );

    // A zero corrector is plain sewing.
    let zero = CorrectedGerm::new(base.clone(), Germ::zero(1), CorrectionMode::Without).unwrap();
    let plain = young(&fam.f, &fam.g, &s, &opts()).unwrap();
    assert!((corrected_sew(&zero, &s, &opts()).unwrap().value - plain.value).abs() <= 1e-12);
}

#[test]
fn two_dimensional_family_matches_quadrature() {
    let fam = pure_area_family_2d(2, 0.25).unwrap();
    let tri = Simplex::from_coords(&[&[0.0, 0.0], &[0.5, 0.0], &[0.0, 0.5]]).unwrap();
    let r = zust(
        &fam.f,
        &fam.g,
        &fam.h,
        &tri,
        &SewOptions::default()
            .with_extrapolation(true)
            .with_max_level(8),
    )
    .unwrap();
    let exact = fam.exact(&tri).unwrap();
    assert!(
        (r.value - exact).abs() <= r.error_estimate + 1e-8,
        "{} vs {exact}",
        r.value
    );
}

#[test]
fn two_dimensional_corrector_vanishes_on_degenerate_triangles() {
    let fam = pure_area_family_2d(4, 0.25).unwrap();
    let flat = Simplex::from_coords(&[&[0.0, 0.0], &[0.5, 0.5], &[1.0, 1.0]]).unwrap();
    assert!(fam.corrector.eval(&flat).abs() <= 1e-10);
}

#[test]
fn composed_corrector_remainder_is_bounded() {
    let fam = pure_area_family_1d(10, &[1.0]).unwrap();
    let eta = fam.g.germ();
    let est = corrector_remainder_check(
        &fam.f,
        &eta,
        &fam.corrector,
        Arc::new(|x: f64| x * x),
        Arc::new(|x: f64| 2.0 * x),
        &Gauge::diam_pow(2, 1.5).unwrap(),
        &SamplerConfig::light(1),
    )
    .unwrap();
    assert!(est.value.is_finite());
}
