//! Executes manifest tasks and collects a serializable report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::calculus::{fd_lie_bracket, lie_bracket, random_points, sample_points, SamplePlan, VectorField};
use crate::error::{Error, Result};
use crate::extension::{extend, extend_family, verify_extension_identities, Extension, ExtensionSpec};
use crate::invariants::{minimal_twisting_number, twisting_number};
use crate::manifest::{
    parse_manifest, write_engel_manifest, ConstructedFrame, FramePair, Manifest, StructureKind, Task, TaskKind,
};
use crate::prolongation::{prolong, ContactFrame};
use crate::structures::{
    characteristic_vector_field, check_characteristic, check_contact_3d, check_engel_frame, check_engel_pair,
    check_engel_pair_auto, check_even_contact, check_twisting_condition, CheckReport, Criterion, Distribution2,
    EngelPair, PairOrder, VerificationReport,
};
use crate::tolerance::Tolerances;

/// Default number of random base points for twisting numbers.
pub const DEFAULT_BASE_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct TaskRecord {
    pub id: String,
    pub kind: TaskKind,
    pub structure: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Vec<i64>>,
    pub witnesses: BTreeMap<String, Value>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Where a construct task's manifest was written.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    /// Manifest text produced by a construct task.
    #[serde(skip)]
    pub constructed: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: String,
    pub manifest_digest: String,
    pub tasks: Vec<TaskRecord>,
    pub passed: bool,
    pub sampling: SamplePlan,
    pub tolerances: Tolerances,
    pub duration_ms: u64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.tasks {
            let verdict = match t.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Error => "ERROR",
            };
            let _ = write!(out, "{verdict:5} {} [{:?} {}]", t.id, t.kind, t.structure);
            if let Some(v) = &t.value {
                let _ = write!(out, " value={v:?}");
            }
            if let Some(e) = &t.expected {
                let _ = write!(out, " expected={e:?}");
            }
            if let Some(f) = t.witnesses.get("first_failure") {
                let _ = write!(out, " first_failure={f}");
            }
            if let Some(e) = &t.error {
                let _ = write!(out, " error: {e}");
            }
            if let Some(o) = &t.output {
                let _ = write!(out, " -> {o}");
            }
            out.push('\n');
            for w in &t.warnings {
                let _ = writeln!(out, "      warning: {w}");
            }
        }
        let passed = self.tasks.iter().filter(|t| t.verdict == Verdict::Pass).count();
        let _ = writeln!(out, "{passed}/{} tasks passed", self.tasks.len());
        out
    }
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn applicable(kind: TaskKind, s: &StructureKind) -> bool {
    match kind {
        TaskKind::Verify => true,
        TaskKind::Invariant => matches!(
            s,
            StructureKind::Prolongation { .. }
                | StructureKind::Extension { .. }
                | StructureKind::ExtensionFamily { .. }
                | StructureKind::EngelFrame {
                    base_frame: Some(_),
                    ..
                }
        ),
        TaskKind::Construct => matches!(s, StructureKind::Prolongation { .. } | StructureKind::Extension { .. }),
        TaskKind::Identities => matches!(s, StructureKind::Extension { .. }),
    }
}

/// The tasks to run. With `kind`, the manifest's tasks of that kind, or one
/// synthesized per applicable structure if there are none. Without `kind`,
/// every task, or a verify task per structure if there are none.
pub fn select_tasks(m: &Manifest, kind: Option<TaskKind>) -> std::result::Result<Vec<Task>, String> {
    for t in &m.tasks {
        let s = m.structure(&t.structure).expect("parser resolves structure names");
        if !applicable(t.kind, &s.kind) {
            return Err(format!(
                "line {}: task `{}` of kind {:?} does not apply to {} structure `{}`",
                t.line,
                t.id,
                t.kind,
                s.kind.name(),
                s.name
            ));
        }
    }
    let listed: Vec<Task> = m
        .tasks
        .iter()
        .filter(|t| kind.is_none_or(|k| t.kind == k))
        .cloned()
        .collect();
    if !listed.is_empty() {
        return Ok(listed);
    }
    if kind.is_none() && m.structures.is_empty() {
        return Ok(Vec::new());
    }
    let kind = kind.unwrap_or(TaskKind::Verify);
    let synthesized: Vec<Task> = m
        .structures
        .iter()
        .filter(|s| applicable(kind, &s.kind))
        .map(|s| Task {
            id: format!("{}-{}", s.name, serde_json::to_value(kind).unwrap().as_str().unwrap()),
            line: s.line,
            kind,
            structure: s.name.clone(),
            expect: None,
            base_points: None,
        })
        .collect();
    if synthesized.is_empty() {
        return Err(format!("no structure in the manifest supports {kind:?} tasks"));
    }
    Ok(synthesized)
}

/// Runs `tasks` in order. Task failures are recorded, never propagated.
pub fn run_tasks(m: &Manifest, tasks: &[Task], manifest_digest: String) -> Report {
    let start = std::time::Instant::now();
    let records: Vec<TaskRecord> = tasks.iter().map(|t| run_task(m, t)).collect();
    Report {
        version: env!("CARGO_PKG_VERSION").into(),
        manifest_digest,
        sampling: m.plan.clone(),
        tolerances: m.tolerances,
        passed: records.iter().all(|r| r.verdict == Verdict::Pass),
        tasks: records,
        duration_ms: start.elapsed().as_millis() as u64,
    }
}

struct Ctx<'a> {
    plan: &'a SamplePlan,
    tol: &'a Tolerances,
    witnesses: BTreeMap<String, Value>,
    warnings: Vec<String>,
    value: Option<Vec<i64>>,
    expected: Option<Vec<i64>>,
    constructed: Option<String>,
    passed: bool,
}

impl Ctx<'_> {
    fn report(&mut self, prefix: &str, r: &VerificationReport) {
        for c in &r.checks {
            self.witnesses
                .insert(format!("{prefix}{}", c.name), check_witness(c, &r.points));
        }
        if let Some((name, point)) = r.first_failure() {
            if !self.witnesses.contains_key("first_failure") {
                self.witnesses.insert(
                    "first_failure".into(),
                    json!({ "check": format!("{prefix}{name}"), "point": point }),
                );
            }
        }
        self.passed &= r.passed;
    }

    fn check(&mut self, c: &CheckReport, points: &[Vec<f64>]) {
        self.witnesses.insert(c.name.clone(), check_witness(c, points));
        if let Some(i) = c.first_failure {
            self.witnesses
                .entry("first_failure".into())
                .or_insert_with(|| json!({ "check": c.name, "point": points.get(i) }));
        }
        self.passed &= c.passed;
    }

    fn set(&mut self, key: &str, v: Value) {
        self.witnesses.insert(key.into(), v);
    }

    fn invariant(&mut self, value: Vec<i64>, default_expect: Option<Vec<i64>>, explicit: Option<&Vec<i64>>) {
        let expected = explicit.cloned().or(default_expect);
        if let Some(e) = &expected {
            self.passed &= *e == value;
        }
        self.value = Some(value);
        self.expected = expected;
    }
}

fn check_witness(c: &CheckReport, points: &[Vec<f64>]) -> Value {
    let mut w = json!({
        "passed": c.passed,
        "min": c.min(),
        "max": c.max(),
        "threshold": c.threshold,
    });
    match c.criterion {
        Criterion::NeverVanishing => w["min_relative"] = json!(c.min_relative()),
        Criterion::Rank { expected } => {
            w["expected_rank"] = json!(expected);
            w["min_singular_ratio"] = json!(c.min_singular_ratio());
        }
        Criterion::IdenticallyZero => w["scale"] = json!(c.scale),
    }
    if let Some(i) = c.first_failure {
        w["first_failure"] = json!(points.get(i));
    }
    w
}

fn run_task(m: &Manifest, task: &Task) -> TaskRecord {
    let structure = m.structure(&task.structure).expect("parser resolves structure names");
    let mut ctx = Ctx {
        plan: &m.plan,
        tol: &m.tolerances,
        witnesses: BTreeMap::new(),
        warnings: Vec::new(),
        value: None,
        expected: task.expect.clone(),
        constructed: None,
        passed: true,
    };
    let outcome = match task.kind {
        TaskKind::Verify => verify(&mut ctx, &structure.kind),
        TaskKind::Invariant => invariant(&mut ctx, &structure.kind, task),
        TaskKind::Construct => construct(&mut ctx, &structure.kind, &structure.name),
        TaskKind::Identities => identities(&mut ctx, &structure.kind),
    };
    let (verdict, error) = match outcome {
        Ok(()) if ctx.passed => (Verdict::Pass, None),
        Ok(()) => (Verdict::Fail, None),
        Err(e) => (Verdict::Error, Some(e.to_string())),
    };
    TaskRecord {
        id: task.id.clone(),
        kind: task.kind,
        structure: structure.name.clone(),
        verdict,
        expected: ctx.expected,
        value: ctx.value,
        witnesses: ctx.witnesses,
        warnings: ctx.warnings,
        error,
        output: None,
        constructed: ctx.constructed,
    }
}

fn contact_frame(ctx: &mut Ctx, pair: &FramePair) -> Result<ContactFrame> {
    let frame = ContactFrame::unchecked(pair.0.clone(), pair.1.clone())?;
    let report = frame.verify(ctx.plan, ctx.tol)?;
    ctx.report("base.", &report);
    if !report.passed {
        return Err(Error::NotContact("the base frame fails its rank checks".into()));
    }
    Ok(frame)
}

fn extension(
    ctx: &mut Ctx,
    pair: &FramePair,
    a: &crate::expr::Expr,
    b: &crate::expr::Expr,
    g: Option<&crate::expr::Expr>,
    n: i64,
) -> Result<Extension> {
    let frame = contact_frame(ctx, pair)?;
    let mut spec = ExtensionSpec::new(&frame, a.clone(), b.clone(), n);
    if let Some(g) = g {
        spec = spec.with_angle(g.clone());
    }
    let ext = extend(&spec, ctx.plan, ctx.tol)?;
    let angle = ext.angle_function();
    ctx.set("g", json!(ext.g().to_string()));
    ctx.set("g_min", json!(angle.min));
    if angle.boundary_warning {
        ctx.warnings.push(format!(
            "min g = {} lies on the boundary pi; the target line equals F0 there",
            angle.min
        ));
    }
    Ok(ext)
}

/// Largest component difference between the symbolic bracket and the
/// central-difference oracle at step `h`.
fn fd_bracket_residual(x: &VectorField, y: &VectorField, points: &[Vec<f64>], h: f64) -> Result<f64> {
    let exact = lie_bracket(x, y)?;
    let mut worst: f64 = 0.0;
    for p in points {
        let fd = fd_lie_bracket(x, y, p, h)?;
        for (a, b) in exact.eval_at(p)?.iter().zip(&fd) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

fn verify(ctx: &mut Ctx, kind: &StructureKind) -> Result<()> {
    match kind {
        StructureKind::Contact { form, frame } => {
            if let Some(alpha) = form {
                let r = check_contact_3d(alpha, ctx.plan, ctx.tol)?;
                ctx.report("", &r);
            }
            if let Some(pair) = frame {
                let frame = ContactFrame::unchecked(pair.0.clone(), pair.1.clone())?;
                let r = frame.verify(ctx.plan, ctx.tol)?;
                ctx.report("", &r);
            }
        }
        StructureKind::EvenContact { form, volume } => {
            let r = check_even_contact(form, ctx.plan, ctx.tol)?;
            ctx.report("", &r);
            if let (Some(omega), true) = (volume, r.passed) {
                let x0 = characteristic_vector_field(form, omega, ctx.plan, ctx.tol)?;
                let names: Vec<String> = x0.components().iter().map(ToString::to_string).collect();
                ctx.set("characteristic_field", json!(names));
                let r = check_characteristic(&x0, form, ctx.plan, ctx.tol)?;
                ctx.report("characteristic.", &r);
            }
        }
        StructureKind::EngelPair {
            alpha,
            beta,
            auto_orient,
        } => {
            let pair = EngelPair::new(alpha.clone(), beta.clone())?;
            if *auto_orient {
                let r = check_engel_pair_auto(&pair, ctx.plan, ctx.tol)?;
                let given_passed = r.as_given.passed;
                ctx.report("given.", &r.as_given);
                ctx.report("swapped.", &r.swapped);
                ctx.passed = r.satisfied_by != PairOrder::Neither;
                ctx.set(
                    "satisfied_by",
                    serde_json::to_value(r.satisfied_by).unwrap_or(Value::Null),
                );
                if !given_passed && r.satisfied_by == PairOrder::Swapped {
                    ctx.warnings
                        .push("the pair satisfies the conditions only in swapped order".into());
                }
            } else {
                let r = check_engel_pair(&pair, ctx.plan, ctx.tol)?;
                ctx.report("", &r);
            }
        }
        StructureKind::EngelFrame { x, y, base_frame } => {
            let d = Distribution2::new(x.clone(), y.clone())?;
            let r = check_engel_frame(&d, ctx.plan, ctx.tol)?;
            ctx.report("", &r);
            let fd = fd_bracket_residual(x, y, &r.points, ctx.tol.fd_step)?;
            ctx.set("fd_bracket_max_error", json!(fd));
            if let Some(pair) = base_frame {
                contact_frame(ctx, pair)?;
            }
        }
        StructureKind::Prolongation { frame, n } => {
            let frame = contact_frame(ctx, frame)?;
            let p = prolong(&frame, *n)?;
            let r = check_engel_frame(p.distribution(), ctx.plan, ctx.tol)?;
            ctx.report("", &r);
            let c = check_twisting_condition(&p.fiber_field(), p.distribution().y(), ctx.plan, ctx.tol)?;
            let points = sample_points(p.chart(), ctx.plan);
            ctx.check(&c, &points);
        }
        StructureKind::Extension { frame, a, b, g, n } => {
            let ext = extension(ctx, frame, a, b, g.as_ref(), *n)?;
            let r = check_engel_frame(ext.distribution(), ctx.plan, ctx.tol)?;
            ctx.report("", &r);
            let r = verify_extension_identities(&ext, ctx.plan, ctx.tol)?;
            ctx.report("", &r);
        }
        StructureKind::ExtensionFamily { frame, slices } => {
            let frame = contact_frame(ctx, frame)?;
            let members = extend_family(&frame, slices, ctx.plan, ctx.tol)?;
            for (i, m) in members.iter().enumerate() {
                let r = check_engel_frame(m.extension.distribution(), ctx.plan, ctx.tol)?;
                ctx.report(&format!("slice{i}."), &r);
            }
            let profile: Vec<u64> = members.iter().map(|m| m.mtw.value).collect();
            ctx.set("mtw_profile", json!(profile));
        }
    }
    Ok(())
}

fn invariant(ctx: &mut Ctx, kind: &StructureKind, task: &Task) -> Result<()> {
    let count = task.base_points.unwrap_or(DEFAULT_BASE_POINTS);
    match kind {
        StructureKind::Prolongation { frame, n } => {
            let frame = contact_frame(ctx, frame)?;
            let p = prolong(&frame, *n)?;
            let base = random_points(frame.chart(), count, ctx.plan.seed);
            let tw = twisting_number(p.distribution(), &frame, &base, ctx.plan, ctx.tol)?;
            ctx.set("tw_totals", json!(tw.totals));
            ctx.set("tw_absolute", json!(tw.absolute));
            ctx.invariant(vec![tw.signed], Some(vec![*n]), task.expect.as_ref());
        }
        StructureKind::EngelFrame {
            x,
            y,
            base_frame: Some(pair),
        } => {
            let frame = contact_frame(ctx, pair)?;
            let d = Distribution2::new(x.clone(), y.clone())?;
            if d.chart().fiber()?.is_periodic() {
                let base = random_points(frame.chart(), count, ctx.plan.seed);
                let tw = twisting_number(&d, &frame, &base, ctx.plan, ctx.tol)?;
                ctx.set("tw_totals", json!(tw.totals));
                ctx.set("tw_absolute", json!(tw.absolute));
                ctx.invariant(vec![tw.signed], None, task.expect.as_ref());
            } else {
                let mtw = minimal_twisting_number(&d, &frame, ctx.plan, ctx.tol)?;
                mtw_witnesses(ctx, mtw.min_angle, mtw.boundary_warning);
                ctx.invariant(vec![mtw.value as i64], None, task.expect.as_ref());
            }
        }
        StructureKind::Extension { frame, a, b, g, n } => {
            let ext = extension(ctx, frame, a, b, g.as_ref(), *n)?;
            let mtw = minimal_twisting_number(ext.distribution(), ext.frame(), ctx.plan, ctx.tol)?;
            mtw_witnesses(ctx, mtw.min_angle, mtw.boundary_warning);
            ctx.invariant(vec![mtw.value as i64], Some(vec![*n]), task.expect.as_ref());
        }
        StructureKind::ExtensionFamily { frame, slices } => {
            let frame = contact_frame(ctx, frame)?;
            let members = extend_family(&frame, slices, ctx.plan, ctx.tol)?;
            let values: Vec<i64> = members.iter().map(|m| m.mtw.value as i64).collect();
            let mins: Vec<f64> = members.iter().map(|m| m.mtw.min_angle).collect();
            ctx.set("min_angles", json!(mins));
            ctx.set("s", json!(members.iter().map(|m| m.s).collect::<Vec<_>>()));
            for m in members.iter().filter(|m| m.mtw.boundary_warning) {
                ctx.warnings
                    .push(format!("slice s = {}: min angle on a multiple of pi", m.s));
            }
            let default = slices.iter().map(|s| s.n).collect();
            ctx.invariant(values, Some(default), task.expect.as_ref());
        }
        _ => return Err(Error::Precondition("structure has no integer invariant".into())),
    }
    Ok(())
}

fn mtw_witnesses(ctx: &mut Ctx, min_angle: f64, boundary: bool) {
    ctx.set("min_angle", json!(min_angle));
    if boundary {
        ctx.warnings.push(format!(
            "min development angle {min_angle} is within tolerance of a multiple of pi"
        ));
    }
}

fn construct(ctx: &mut Ctx, kind: &StructureKind, name: &str) -> Result<()> {
    let (text, expect) = match kind {
        StructureKind::Prolongation { frame, n } => {
            let frame = contact_frame(ctx, frame)?;
            let p = prolong(&frame, *n)?;
            let out = ConstructedFrame {
                name,
                distribution: p.distribution(),
                base: &frame,
                expect: *n,
            };
            (write_engel_manifest(&out, ctx.plan, ctx.tol), *n)
        }
        StructureKind::Extension { frame, a, b, g, n } => {
            let ext = extension(ctx, frame, a, b, g.as_ref(), *n)?;
            let out = ConstructedFrame {
                name,
                distribution: ext.distribution(),
                base: ext.frame(),
                expect: *n,
            };
            (write_engel_manifest(&out, ctx.plan, ctx.tol), *n)
        }
        _ => {
            return Err(Error::Precondition(
                "only prolongations and extensions can be constructed".into(),
            ))
        }
    };
    let reparsed =
        parse_manifest(&text).map_err(|e| Error::Precondition(format!("constructed manifest does not parse: {e}")))?;
    match reparsed.structure(name).map(|s| &s.kind) {
        Some(StructureKind::EngelFrame { x, y, .. }) => {
            let d = Distribution2::new(x.clone(), y.clone())?;
            let r = check_engel_frame(&d, ctx.plan, ctx.tol)?;
            ctx.report("constructed.", &r);
        }
        _ => return Err(Error::Precondition("constructed manifest lacks its Engel frame".into())),
    }
    ctx.set("expect", json!(expect));
    ctx.constructed = Some(text);
    Ok(())
}

fn identities(ctx: &mut Ctx, kind: &StructureKind) -> Result<()> {
    let StructureKind::Extension { frame, a, b, g, n } = kind else {
        return Err(Error::Precondition("identities apply to extensions only".into()));
    };
    let ext = extension(ctx, frame, a, b, g.as_ref(), *n)?;
    let r = verify_extension_identities(&ext, ctx.plan, ctx.tol)?;
    ctx.report("", &r);
    Ok(())
}
