//! Coordinate charts, vector fields, differential forms, and the exterior
//! calculus on them.

mod chart;
mod field;
mod form;
mod ops;
mod sample;

pub(crate) use chart::same_chart;
pub use chart::{Chart, Coordinate, PointBinding};
pub use field::{norm_sq, VectorField};
pub use form::{permutation_sign, subsets, IndexSet, KForm};
pub use ops::{
    exterior_derivative, fd_lie_bracket, interior_product, lie_bracket, lie_derivative_form, wedge, wedge_all,
};
pub use sample::{grid_points, random_points, sample_points, SamplePlan};
