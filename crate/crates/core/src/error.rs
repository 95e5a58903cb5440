use thiserror::Error;

use crate::expr::{EvalError, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("objects live on different charts")]
    ChartMismatch,
    #[error("expression uses `{0}`, which is not a chart coordinate")]
    ForeignVariable(String),
    #[error("degree overflow: degree {degree} exceeds chart dimension {dim}")]
    DegreeOverflow { degree: usize, dim: usize },
    #[error("expected a {expected}-dimensional chart, found dimension {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("rank {found} (expected {expected}) at point {point:?}")]
    RankDeficient {
        expected: usize,
        found: usize,
        point: Vec<f64>,
    },
    #[error("{what} vanishes at point {point:?}")]
    Vanishing { what: String, point: Vec<f64> },
    #[error("characteristic direction is not the fiber field: {0}")]
    FiberNotCharacteristic(String),
    #[error("projection onto the contact frame has residual {residual:e} at {point:?}")]
    ProjectionResidual { residual: f64, point: Vec<f64> },
    #[error("angle tracking exceeded refinement depth near fiber value {fiber_value} at {point:?}")]
    RefinementDepth { point: Vec<f64>, fiber_value: f64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not a contact structure: {0}")]
    NotContact(String),
    #[error("not an Engel structure: {0}")]
    NotEngel(String),
    #[error("twisting totals disagree across base points: {0:?}")]
    TwistDisagreement(Vec<i64>),
    #[error("fiber total {total} is not an integer multiple of pi at {point:?}")]
    NonIntegerTwist { total: f64, point: Vec<f64> },
    #[error("angle change {change} is negative at {point:?}")]
    NegativeAngleChange { change: f64, point: Vec<f64> },
    #[error("angle function is discontinuous between {a:?} and {b:?}")]
    ContinuityViolation { a: Vec<f64>, b: Vec<f64> },
    #[error("angle function has no closed form; supply `g` explicitly")]
    AngleNotClosedForm,
    #[error("normalization violated: {0}")]
    Normalization(String),
    #[error("twist jumps from {from} to {to} at family index {index}")]
    FamilyJump { index: usize, from: i64, to: i64 },
}
