use super::*;
use crate::fixtures::{standard_contact_frame, t3_contact_frame};
use crate::invariants::{ambient_line_distance, induced_legendrian_line, line_angle_distance};
use crate::numeric::line_angle;
use crate::prolongation::deprolong;

fn plan() -> SamplePlan {
    SamplePlan::new(3, 20, 5)
}

fn tol() -> Tolerances {
    Tolerances::default()
}

fn x() -> Expr {
    Expr::var("x")
}

fn half_pi() -> Expr {
    Expr::pi() / Expr::c(2.0)
}

#[test]
fn angle_function_examples() {
    let f = standard_contact_frame();
    let quarter = legendrian_angle_function(&f, &Expr::ZERO, &Expr::ONE, &plan(), &tol()).unwrap();
    assert!(quarter.values.iter().all(|g| (g - PI / 2.0).abs() < 1e-15));
    assert!(!quarter.boundary_warning);

    let same = legendrian_angle_function(&f, &Expr::ONE, &Expr::ZERO, &plan(), &tol()).unwrap();
    assert!(same.values.iter().all(|g| (g - PI).abs() < 1e-15));
    assert!(same.boundary_warning);

    let u = x() / Expr::c(4.0) + Expr::ONE;
    let wavy = legendrian_angle_function(&f, &u.clone().cos(), &u.clone().sin(), &plan(), &tol()).unwrap();
    assert_eq!(wavy.symbolic, Some(u));
    assert!((wavy.min - 0.75).abs() < 1e-12);
}

#[test]
fn angle_function_failures() {
    let f = standard_contact_frame();
    assert!(matches!(
        legendrian_angle_function(&f, &Expr::ZERO, &Expr::ZERO, &plan(), &tol()),
        Err(Error::Vanishing { .. })
    ));
    let fast = Expr::c(20.0) * x();
    assert!(matches!(
        legendrian_angle_function(&f, &fast.clone().cos(), &fast.sin(), &plan(), &tol()),
        Err(Error::ContinuityViolation { .. })
    ));
    let spec = ExtensionSpec::new(&f, Expr::ONE, x() + Expr::c(2.0), 0);
    assert!(matches!(extend(&spec, &plan(), &tol()), Err(Error::AngleNotClosedForm)));
}

#[test]
fn holonomy_is_detected_on_periodic_axes() {
    // The line turns by pi/2 around the z circle, so no continuous lift exists.
    let f = t3_contact_frame();
    let u = Expr::var("z") / Expr::c(4.0);
    let r = legendrian_angle_function(&f, &u.clone().cos(), &u.sin(), &SamplePlan::new(8, 0, 0), &tol());
    assert!(matches!(r, Err(Error::ContinuityViolation { .. })));
}

fn g_choices() -> Vec<Expr> {
    vec![half_pi(), Expr::c(0.3), half_pi() + Expr::c(0.25) * x().sin()]
}

#[test]
fn extensions_are_engel_with_expected_ends_and_twist() {
    let f = standard_contact_frame();
    for g in g_choices() {
        for n in 0..=2 {
            let ext = extend(&ExtensionSpec::from_angle(&f, g.clone(), n), &plan(), &tol()).unwrap();
            let ids = verify_extension_identities(&ext, &plan(), &tol()).unwrap();
            assert!(ids.passed, "{g} n={n}: {:?}", ids.first_failure());

            let start = induced_legendrian_line(ext.distribution(), &f, 0.0, &plan(), &tol()).unwrap();
            let end = induced_legendrian_line(ext.distribution(), &f, 1.0, &plan(), &tol()).unwrap();
            let f0 = LegendrianLineField::first_axis(&f);
            assert!(line_angle_distance(&start, &f0, &plan()).unwrap() <= 1e-9);
            let target = ext.target(&plan(), &tol()).unwrap();
            assert!(line_angle_distance(&end, &target, &plan()).unwrap() <= 1e-9);

            let mtw = minimal_twisting_number(ext.distribution(), &f, &plan(), &tol()).unwrap();
            assert_eq!(mtw.value, n as u64, "{g} n={n}");
            assert!(!mtw.boundary_warning);
        }
    }
}

#[test]
fn t3_extension_hits_second_axis() {
    let f = t3_contact_frame();
    let ext = extend(&ExtensionSpec::new(&f, Expr::ZERO, Expr::ONE, 0), &plan(), &tol()).unwrap();
    assert!((ext.g().constant_value().unwrap() - PI / 2.0).abs() < 1e-15);
    assert!(verify_extension_identities(&ext, &plan(), &tol()).unwrap().passed);
    assert!(matches!(
        extend(&ExtensionSpec::new(&f, Expr::ZERO, Expr::ONE, -1), &plan(), &tol()),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn bracket_scales_with_rate() {
    let f = standard_contact_frame();
    let e0 = extend(&ExtensionSpec::from_angle(&f, half_pi(), 0), &plan(), &tol()).unwrap();
    let e2 = extend(&ExtensionSpec::from_angle(&f, half_pi(), 2), &plan(), &tol()).unwrap();
    let p = [0.2, -0.4, 0.1, 0.0];
    let b0 = lie_bracket(&VectorField::coordinate(e0.chart(), 3), e0.distribution().y()).unwrap();
    let b2 = lie_bracket(&VectorField::coordinate(e2.chart(), 3), e2.distribution().y()).unwrap();
    let n0 = b0.eval_at(&p).unwrap().iter().map(|v| v * v).sum::<f64>().sqrt();
    let n2 = b2.eval_at(&p).unwrap().iter().map(|v| v * v).sum::<f64>().sqrt();
    assert!((n2 / n0 - 5.0).abs() < 1e-12);
}

#[test]
fn extension_deprolongs_to_the_base_plane() {
    let f = standard_contact_frame();
    let ext = extend(&ExtensionSpec::from_angle(&f, Expr::c(0.3), 1), &plan(), &tol()).unwrap();
    let reference = f.contact_form().unwrap();
    for section in [0.0, 0.5, 1.0] {
        let alpha = deprolong(ext.distribution(), section, &plan(), &tol()).unwrap();
        for p in sample_points(f.chart(), &plan()) {
            let u = alpha.eval_dense(&p).unwrap();
            let v = reference.eval_dense(&p).unwrap();
            assert!(line_angle(&u, &v) <= 1e-9);
        }
    }
}

fn end_data(ext: &Extension) -> (LegendrianLineField, u64) {
    let frame = ext.frame();
    let end = induced_legendrian_line(ext.distribution(), frame, 1.0, &plan(), &tol()).unwrap();
    let mtw = minimal_twisting_number(ext.distribution(), frame, &plan(), &tol()).unwrap();
    (end, mtw.value)
}

#[test]
fn frame_change_keeps_end_data_and_twist() {
    let f = standard_contact_frame();
    let g = Expr::c(1.2);
    let (a, b) = (g.clone().cos(), g.clone().sin());
    for n in 0..=2 {
        let (end, mtw) = end_data(&extend(&ExtensionSpec::from_angle(&f, g.clone(), n), &plan(), &tol()).unwrap());

        // Constant change (2 V0, V0/2 + V1): F1 = (a/2 - b/4) V0' + b V1'.
        let other = f.reframed(&Expr::c(2.0), &Expr::c(0.5), &Expr::ONE).unwrap();
        let spec = ExtensionSpec::new(
            &other,
            (a.clone() / Expr::c(2.0) - b.clone() / Expr::c(4.0)).simplify(),
            b.clone(),
            n,
        );
        let (end2, mtw2) = end_data(&extend(&spec, &plan(), &tol()).unwrap());
        assert!(ambient_line_distance(&end, &end2, &plan()).unwrap() <= 1e-9);
        assert_eq!(mtw, mtw2);

        // Conformal change (h V0, h V1) keeps the angle, supplied explicitly.
        let h = Expr::ONE + x().powi(2) / Expr::c(4.0);
        let other = f.reframed(&h, &Expr::ZERO, &h).unwrap();
        let spec = ExtensionSpec::new(&other, a.clone() / h.clone(), b.clone() / h.clone(), n).with_angle(g.clone());
        let (end3, mtw3) = end_data(&extend(&spec, &plan(), &tol()).unwrap());
        assert!(ambient_line_distance(&end, &end3, &plan()).unwrap() <= 1e-9);
        assert_eq!(mtw, mtw3);
    }
}

#[test]
fn family_steps_by_one() {
    let f = standard_contact_frame();
    let slices: Vec<FamilySlice> = [(0.0, 0), (0.25, 0), (0.75, 1), (1.0, 1)]
        .into_iter()
        .map(|(s, n)| {
            let total = half_pi() + Expr::c(s) * Expr::pi();
            let g = if n == 0 { total } else { total - Expr::pi() };
            let g = g.simplify();
            FamilySlice {
                s,
                a: g.clone().cos(),
                b: g.clone().sin(),
                g: Some(g),
                n,
            }
        })
        .collect();
    let members = extend_family(&f, &slices, &plan(), &tol()).unwrap();
    let profile: Vec<u64> = members.iter().map(|m| m.mtw.value).collect();
    assert_eq!(profile, vec![0, 0, 1, 1]);

    let mut jumped = slices.clone();
    jumped[2].n = 2;
    assert!(matches!(
        extend_family(&f, &jumped, &plan(), &tol()),
        Err(Error::FamilyJump {
            index: 2,
            from: 0,
            to: 2
        })
    ));
}
