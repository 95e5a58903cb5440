use super::*;
use crate::fixtures::{standard_contact_frame, t3_contact_frame};
use crate::numeric::line_angle;
use crate::structures::check_engel_frame;

fn plan() -> SamplePlan {
    SamplePlan::new(3, 30, 1)
}

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn fixture_frames_are_contact() {
    for f in [standard_contact_frame(), t3_contact_frame()] {
        assert!(f.verify(&plan(), &tol()).unwrap().passed);
    }
    let c = standard_contact_frame().chart().clone();
    let flat = ContactFrame::new(
        VectorField::coordinate(&c, 0),
        VectorField::coordinate(&c, 1),
        &plan(),
        &tol(),
    );
    assert!(matches!(flat, Err(Error::NotContact(_))));
}

#[test]
fn contact_form_annihilates_frame() {
    let f = t3_contact_frame();
    let alpha = f.contact_form().unwrap();
    for p in sample_points(f.chart(), &plan()) {
        let a = alpha.eval_dense(&p).unwrap();
        for v in [f.v0().eval_at(&p).unwrap(), f.v1().eval_at(&p).unwrap()] {
            assert!(a.iter().zip(&v).map(|(x, y)| x * y).sum::<f64>().abs() < 1e-14);
        }
    }
}

#[test]
fn prolongations_are_engel() {
    for frame in [standard_contact_frame(), t3_contact_frame()] {
        for n in 1..=3 {
            let p = prolong(&frame, n).unwrap();
            let r = check_engel_frame(p.distribution(), &plan(), &tol()).unwrap();
            assert!(r.passed, "n = {n}: {:?}", r.first_failure());
        }
    }
    assert!(matches!(
        prolong(&standard_contact_frame(), 0),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn deprolongation_recovers_contact_plane() {
    let frame = standard_contact_frame();
    let reference = frame.contact_form().unwrap();
    let pro = prolong(&frame, 2).unwrap();
    for section in [0.0, 1.0, PI / 2.0, 5.0] {
        let alpha = deprolong(pro.distribution(), section, &plan(), &tol()).unwrap();
        for p in sample_points(frame.chart(), &plan()) {
            let u = alpha.eval_dense(&p).unwrap();
            let v = reference.eval_dense(&p).unwrap();
            assert!(line_angle(&u, &v) < 1e-12);
        }
    }
}

#[test]
fn non_engel_plane_field_cannot_be_deprolonged() {
    let pro = prolong(&standard_contact_frame(), 1).unwrap();
    let c = pro.chart().clone();
    let d = Distribution2::new(VectorField::coordinate(&c, 3), VectorField::coordinate(&c, 0)).unwrap();
    assert!(deprolong(&d, 0.0, &plan(), &tol()).is_err());
}

#[test]
fn development_angle_has_slope_half_n() {
    for n in 1..=4 {
        let pro = prolong(&standard_contact_frame(), n).unwrap();
        let dev = Development::new(pro.distribution(), pro.frame(), &plan(), &tol()).unwrap();
        let prof = dev.profile(&[0.3, -0.2, 0.7]).unwrap();
        let (c0, c1, resid) = prof.linear_fit();
        assert!((c1 - n as f64 / 2.0).abs() < 1e-12);
        assert!(c0.abs() < 1e-12);
        assert!(resid < 1e-12);
        assert!((prof.total() - n as f64 * PI).abs() < 1e-10);
        let s = dev.angle(&[0.3, -0.2, 0.7], 1.0).unwrap();
        assert!((s - n as f64 / 2.0).abs() < 1e-12);
    }
}

#[test]
fn swapped_frame_reverses_development() {
    let pro = prolong(&standard_contact_frame(), 1).unwrap();
    let dev = Development::new(pro.distribution(), &pro.frame().swapped(), &plan(), &tol()).unwrap();
    assert!((dev.profile(&[0.0, 0.0, 0.0]).unwrap().total() + PI).abs() < 1e-10);
}

#[test]
fn development_rejects_vectors_outside_the_plane() {
    let pro = prolong(&standard_contact_frame(), 1).unwrap();
    let other = ContactFrame::unchecked(
        standard_contact_frame().v0().clone(),
        VectorField::coordinate(standard_contact_frame().chart(), 0),
    )
    .unwrap();
    let dev = Development::unchecked(pro.distribution(), &other, &tol()).unwrap();
    assert!(matches!(
        dev.raw_angle(&[0.0, 0.0, 0.5], 1.0),
        Err(Error::ProjectionResidual { .. })
    ));
}

#[test]
fn developed_sections() {
    let f = standard_contact_frame();
    let g = develop_section(&f, &(Expr::pi() / Expr::c(2.0)), 2, &plan()).unwrap();
    assert!((g.constant_value().unwrap() - 2.5 * PI).abs() < 1e-15);
    assert!(matches!(
        develop_section(&f, &Expr::var("x").powi(2), 0, &plan()),
        Err(Error::Normalization(_))
    ));
    let wavy = Expr::pi() / Expr::c(2.0) + Expr::c(0.25) * Expr::var("x").sin();
    let g = develop_section(&f, &wavy, 0, &plan()).unwrap();
    assert!((f.chart().eval(&g, &[0.5, 0.0, 0.0]).unwrap() - (PI / 2.0 + 0.25 * 0.5f64.sin())).abs() < 1e-15);
}
