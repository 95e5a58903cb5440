//! Standard structures used by the examples, tests, and bundled manifests.

use std::f64::consts::TAU;
use std::sync::Arc;

use crate::calculus::{Chart, Coordinate, KForm, VectorField};
use crate::prolongation::ContactFrame;
use crate::structures::{Distribution2, EngelPair};

/// `[-1, 1]^3` with coordinates `x, y, z`.
pub fn r3_chart() -> Arc<Chart> {
    Chart::boxed(&["x", "y", "z"], -1.0, 1.0).expect("valid chart")
}

/// The 3-torus with `2 pi`-periodic `x, y, z`.
pub fn t3_chart() -> Arc<Chart> {
    Chart::new(vec![
        Coordinate::periodic("x", 0.0, TAU),
        Coordinate::periodic("y", 0.0, TAU),
        Coordinate::periodic("z", 0.0, TAU),
    ])
    .expect("valid chart")
}

/// `[-1, 1]^4` with coordinates `x, y, z, w`.
pub fn r4_chart() -> Arc<Chart> {
    Chart::boxed(&["x", "y", "z", "w"], -1.0, 1.0).expect("valid chart")
}

/// `(d/dz, d/dx + z d/dy)`, spanning `ker(dy - z dx)`.
pub fn standard_contact_frame() -> ContactFrame {
    let c = r3_chart();
    ContactFrame::unchecked(
        VectorField::coordinate(&c, 2),
        VectorField::parse(&c, &["1", "z", "0"]).expect("valid field"),
    )
    .expect("same chart")
}

/// `(sin z d/dx + cos z d/dy, d/dz)`, spanning `ker(cos z dx - sin z dy)`.
pub fn t3_contact_frame() -> ContactFrame {
    let c = t3_chart();
    ContactFrame::unchecked(
        VectorField::parse(&c, &["sin(z)", "cos(z)", "0"]).expect("valid field"),
        VectorField::coordinate(&c, 2),
    )
    .expect("same chart")
}

pub fn standard_contact_form() -> KForm {
    KForm::parse(&r3_chart(), "dy - z*dx", Some(1)).expect("valid form")
}

pub fn t3_contact_form() -> KForm {
    KForm::parse(&t3_chart(), "cos(z)*dx - sin(z)*dy", Some(1)).expect("valid form")
}

/// `(dz - w dx, dy - z dx)` on `[-1, 1]^4`.
pub fn standard_engel_pair() -> EngelPair {
    let c = r4_chart();
    EngelPair::new(
        KForm::parse(&c, "dz - w*dx", Some(1)).expect("valid form"),
        KForm::parse(&c, "dy - z*dx", Some(1)).expect("valid form"),
    )
    .expect("valid pair")
}

/// `span(d/dw, d/dx + z d/dy + w d/dz)`.
pub fn standard_engel_frame() -> Distribution2 {
    let c = r4_chart();
    Distribution2::new(
        VectorField::coordinate(&c, 3),
        VectorField::parse(&c, &["1", "z", "w", "0"]).expect("valid field"),
    )
    .expect("same chart")
}
