use std::fmt::Write as _;

use crate::calculus::{Coordinate, SamplePlan};
use crate::prolongation::ContactFrame;
use crate::structures::Distribution2;
use crate::tolerance::Tolerances;

/// An Engel frame built over a contact frame, ready to be written out.
#[derive(Debug, Clone)]
pub struct ConstructedFrame<'a> {
    pub name: &'a str,
    pub distribution: &'a Distribution2,
    pub base: &'a ContactFrame,
    /// Twisting number for a periodic fiber, minimal twisting number otherwise.
    pub expect: i64,
}

fn coordinate_line(c: &Coordinate) -> String {
    match c.period {
        Some(p) => format!("{} = periodic({:?}, {:?})", c.name, c.lo, p),
        None => format!("{} = [{:?}, {:?}]", c.name, c.lo, c.hi),
    }
}

fn tuple(components: &[crate::expr::Expr]) -> String {
    let parts: Vec<String> = components.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Renders a manifest declaring `frame` as an `engel_frame` structure with
/// a verify task and an invariant task. The output parses with
/// [`parse_manifest`](super::parse_manifest).
pub fn write_engel_manifest(frame: &ConstructedFrame, plan: &SamplePlan, tol: &Tolerances) -> String {
    let chart = frame.distribution.chart();
    let mut out = String::new();
    let names = chart.names().join(", ");
    let _ = writeln!(out, "[chart]\ncoords = {names}");
    for c in chart.coords() {
        let _ = writeln!(out, "{}", coordinate_line(c));
    }
    let grid: Vec<String> = plan.grid.iter().map(ToString::to_string).collect();
    let _ = writeln!(
        out,
        "\n[sampling]\ngrid = {}\nrandom = {}\nseed = {}",
        grid.join(", "),
        plan.random,
        plan.seed
    );
    let _ = writeln!(
        out,
        "\n[tolerances]\nrank = {:?}\nnonvanishing = {:?}\nzero = {:?}\nnonzero_sq = {:?}\n\
         projection = {:?}\nannihilation = {:?}\nfd_step = {:?}",
        tol.rank, tol.nonvanishing, tol.zero, tol.nonzero_sq, tol.projection, tol.annihilation, tol.fd_step
    );
    let _ = writeln!(
        out,
        "\n[fields]\nX = {}\nY = {}\nV0 = {}\nV1 = {}",
        tuple(frame.distribution.x().components()),
        tuple(frame.distribution.y().components()),
        tuple(frame.base.v0().components()),
        tuple(frame.base.v1().components()),
    );
    let name = frame.name;
    let _ = writeln!(
        out,
        "\n[structure {name}]\nkind = engel_frame\nframe = X, Y\nbase_frame = V0, V1\n\n\
         [task {name}-verify]\nkind = verify\nstructure = {name}\n\n\
         [task {name}-invariant]\nkind = invariant\nstructure = {name}\nexpect = {}",
        frame.expect
    );
    out
}
