//! Line-oriented manifest files describing a chart, named fields and forms,
//! structures, and tasks.
//!
//! ```text
//! [chart]
//! coords = x, y, z, w
//! box = [-1, 1]
//!
//! [sampling]
//! grid = 5
//! random = 200
//! seed = 0
//!
//! [forms]
//! alpha = dz - w*dx
//! beta = dy - z*dx
//!
//! [structure std]
//! kind = engel_pair
//! alpha = alpha
//! beta = beta
//!
//! [task pair]
//! kind = verify
//! structure = std
//! ```

mod parse;
mod write;

use std::sync::Arc;

use crate::calculus::{Chart, KForm, SamplePlan, VectorField};
use crate::expr::Expr;
use crate::extension::FamilySlice;
use crate::tolerance::Tolerances;

pub use parse::{parse_manifest, ManifestError};
pub use write::{write_engel_manifest, ConstructedFrame};

/// A parsed, name-resolved manifest.
#[derive(Debug, Clone)]
pub struct Manifest {
    pub chart: Arc<Chart>,
    pub plan: SamplePlan,
    pub tolerances: Tolerances,
    pub structures: Vec<Structure>,
    pub tasks: Vec<Task>,
}

impl Manifest {
    pub fn structure(&self, name: &str) -> Option<&Structure> {
        self.structures.iter().find(|s| s.name == name)
    }
}

#[derive(Debug, Clone)]
pub struct Structure {
    pub name: String,
    pub line: usize,
    pub kind: StructureKind,
}

/// A pair of base-chart fields `(V0, V1)`.
pub type FramePair = (VectorField, VectorField);

#[derive(Debug, Clone)]
pub enum StructureKind {
    Contact {
        form: Option<KForm>,
        frame: Option<FramePair>,
    },
    EvenContact {
        form: KForm,
        volume: Option<KForm>,
    },
    EngelPair {
        alpha: KForm,
        beta: KForm,
        auto_orient: bool,
    },
    EngelFrame {
        x: VectorField,
        y: VectorField,
        base_frame: Option<FramePair>,
    },
    Prolongation {
        frame: FramePair,
        n: i64,
    },
    Extension {
        frame: FramePair,
        a: Expr,
        b: Expr,
        g: Option<Expr>,
        n: i64,
    },
    ExtensionFamily {
        frame: FramePair,
        slices: Vec<FamilySlice>,
    },
}

impl StructureKind {
    pub fn name(&self) -> &'static str {
        match self {
            StructureKind::Contact { .. } => "contact",
            StructureKind::EvenContact { .. } => "even_contact",
            StructureKind::EngelPair { .. } => "engel_pair",
            StructureKind::EngelFrame { .. } => "engel_frame",
            StructureKind::Prolongation { .. } => "prolongation",
            StructureKind::Extension { .. } => "extension",
            StructureKind::ExtensionFamily { .. } => "extension_family",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    Verify,
    Invariant,
    Construct,
    Identities,
}

impl TaskKind {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "verify" => TaskKind::Verify,
            "invariant" => TaskKind::Invariant,
            "construct" => TaskKind::Construct,
            "identities" => TaskKind::Identities,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Task {
    pub id: String,
    pub line: usize,
    pub kind: TaskKind,
    pub structure: String,
    /// Expected integer invariant(s).
    pub expect: Option<Vec<i64>>,
    /// Number of random base points for twisting numbers.
    pub base_points: Option<usize>,
}
