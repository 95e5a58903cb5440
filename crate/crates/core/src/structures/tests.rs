use super::*;
use crate::calculus::Coordinate;
use crate::expr::Expr;

fn plan() -> SamplePlan {
    SamplePlan::new(4, 40, 7)
}

fn r4() -> Arc<Chart> {
    Chart::boxed(&["x", "y", "z", "w"], -1.0, 1.0).unwrap()
}

fn standard_pair() -> EngelPair {
    let c = r4();
    EngelPair::new(
        KForm::parse(&c, "dz - w*dx", Some(1)).unwrap(),
        KForm::parse(&c, "dy - z*dx", Some(1)).unwrap(),
    )
    .unwrap()
}

#[test]
fn standard_contact_form() {
    let c = Chart::boxed(&["x", "y", "z"], -1.0, 1.0).unwrap();
    let alpha = KForm::parse(&c, "dy - z*dx", Some(1)).unwrap();
    let r = check_contact_3d(&alpha, &plan(), &Tolerances::default()).unwrap();
    assert!(r.passed);
    let c0 = r.check("alpha^dalpha").unwrap();
    assert!(c0.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
}

#[test]
fn closed_form_is_not_contact() {
    let c = Chart::boxed(&["x", "y", "z"], -1.0, 1.0).unwrap();
    let alpha = KForm::parse(&c, "dy", Some(1)).unwrap();
    let r = check_contact_3d(&alpha, &plan(), &Tolerances::default()).unwrap();
    assert!(!r.passed);
    assert_eq!(r.first_failure().unwrap().0, "alpha^dalpha");
}

#[test]
fn dimension_is_enforced() {
    let alpha = KForm::parse(&r4(), "dy - z*dx", Some(1)).unwrap();
    assert!(matches!(
        check_contact_3d(&alpha, &plan(), &Tolerances::default()),
        Err(Error::WrongDimension { expected: 3, found: 4 })
    ));
}

#[test]
fn standard_engel_pair_and_its_swap() {
    let tol = Tolerances::default();
    let pair = standard_pair();
    let r = check_engel_pair(&pair, &plan(), &tol).unwrap();
    assert!(r.passed, "{r:#?}");
    let auto = check_engel_pair_auto(&pair.swapped(), &plan(), &tol).unwrap();
    assert_eq!(auto.satisfied_by, PairOrder::Swapped);
    assert!(!auto.as_given.passed);
    assert!(check_even_contact(&pair.beta, &plan(), &tol).unwrap().passed);
}

#[test]
fn integrable_distribution_is_not_engel() {
    let c = r4();
    let d = Distribution2::new(VectorField::coordinate(&c, 0), VectorField::coordinate(&c, 1)).unwrap();
    let r = check_engel_frame(&d, &plan(), &Tolerances::default()).unwrap();
    assert!(r.check("rank_D").unwrap().passed);
    assert!(!r.check("rank_D2").unwrap().passed);
    assert!(!r.passed);
}

fn standard_frame() -> Distribution2 {
    let c = r4();
    Distribution2::new(
        VectorField::coordinate(&c, 3),
        VectorField::parse(&c, &["1", "z", "w", "0"]).unwrap(),
    )
    .unwrap()
}

#[test]
fn standard_engel_frame() {
    let r = check_engel_frame(&standard_frame(), &plan(), &Tolerances::default()).unwrap();
    assert!(r.passed, "{r:#?}");
    assert!(r.check("periodic_span").is_none());
}

#[test]
fn annihilator_of_derived_square_is_beta() {
    let tol = Tolerances::default();
    let d = standard_frame();
    let frame = derived_square(&d, &plan(), &tol).unwrap();
    let beta = annihilator_1form(&frame, &plan(), &tol).unwrap();
    let expected = standard_pair().beta;
    for p in sample_points(d.chart(), &plan()) {
        let b = beta.eval_dense(&p).unwrap();
        let e = expected.eval_dense(&p).unwrap();
        let k = b[1] / e[1];
        for (u, v) in b.iter().zip(&e) {
            assert!((u - k * v).abs() < 1e-12);
        }
    }
}

#[test]
fn characteristic_of_standard_even_contact() {
    let tol = Tolerances::default();
    let c = r4();
    let beta = standard_pair().beta;
    let omega = KForm::volume(&c, Expr::ONE).unwrap();
    let x0 = characteristic_vector_field(&beta, &omega, &plan(), &tol).unwrap();
    // beta ^ dbeta = dx^dy^dz up to sign, so X0 is a multiple of d/dw.
    for p in sample_points(&c, &plan()) {
        let v = x0.eval_at(&p).unwrap();
        assert_eq!(&v[..3], &[0.0, 0.0, 0.0]);
        assert!((v[3].abs() - 1.0).abs() < 1e-12);
    }
    let r = check_characteristic(&x0, &beta, &plan(), &tol).unwrap();
    assert!(r.passed, "{r:#?}");
    let v = VectorField::parse(&c, &["1", "z", "w", "0"]).unwrap();
    assert!(check_twisting_condition(&x0, &v, &plan(), &tol).unwrap().passed);
    let flat = VectorField::coordinate(&c, 2);
    assert!(!check_twisting_condition(&x0, &flat, &plan(), &tol).unwrap().passed);
}

#[test]
fn non_characteristic_field_fails() {
    let tol = Tolerances::default();
    let c = r4();
    let beta = standard_pair().beta;
    let x = VectorField::coordinate(&c, 2);
    let r = check_characteristic(&x, &beta, &plan(), &tol).unwrap();
    assert!(!r.passed);
}

#[test]
fn periodic_span_detects_twisted_plane_field() {
    let c = Chart::new(vec![
        Coordinate::interval("x", -1.0, 1.0),
        Coordinate::interval("y", -1.0, 1.0),
        Coordinate::interval("z", -1.0, 1.0),
        Coordinate::periodic("theta", 0.0, 2.0 * std::f64::consts::PI),
    ])
    .unwrap();
    let tol = Tolerances::default();
    let good = Distribution2::new(
        VectorField::coordinate(&c, 3),
        VectorField::parse(&c, &["cos(theta)", "z*cos(theta)", "sin(theta)", "0"]).unwrap(),
    )
    .unwrap();
    let r = check_engel_frame(&good, &plan(), &tol).unwrap();
    assert!(r.passed, "{r:#?}");
    let third = Distribution2::new(
        VectorField::coordinate(&c, 3),
        VectorField::parse(&c, &["cos(theta/3)", "z*cos(theta/3)", "sin(theta/3)", "0"]).unwrap(),
    )
    .unwrap();
    let r = check_engel_frame(&third, &plan(), &tol).unwrap();
    assert!(!r.check("periodic_span").unwrap().passed);
}
