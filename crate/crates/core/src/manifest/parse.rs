use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use super::{FramePair, Manifest, Structure, StructureKind, Task, TaskKind};
use crate::calculus::{Chart, Coordinate, KForm, SamplePlan, VectorField};
use crate::expr::{parse_scalar_expr, Expr, VarBinding};
use crate::extension::FamilySlice;
use crate::tolerance::Tolerances;

/// The first problem found in a manifest, with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ManifestError {
    pub line: usize,
    pub message: String,
}

type PResult<T> = Result<T, ManifestError>;

fn err<T>(line: usize, message: impl Into<String>) -> PResult<T> {
    Err(ManifestError {
        line,
        message: message.into(),
    })
}

#[derive(Debug)]
struct Entry {
    key: String,
    value: String,
    line: usize,
}

#[derive(Debug)]
struct Section {
    header: String,
    arg: Option<String>,
    line: usize,
    entries: Vec<Entry>,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn split_sections(text: &str) -> PResult<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let Some(inner) = rest.strip_suffix(']') else {
                return err(line, "unterminated section header");
            };
            let mut words = inner.split_whitespace();
            let header = words.next().unwrap_or("").to_string();
            let arg = words.next().map(str::to_string);
            if words.next().is_some() {
                return err(line, "section header takes at most one name");
            }
            if let Some(a) = &arg {
                if !is_identifier(a) {
                    return err(line, format!("invalid name `{a}`"));
                }
            }
            sections.push(Section {
                header,
                arg,
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return err(line, "expected `key = value`");
        };
        let Some(section) = sections.last_mut() else {
            return err(line, "entry outside of any section");
        };
        let key = key.trim();
        if key.is_empty() {
            return err(line, "empty key");
        }
        section.entries.push(Entry {
            key: key.to_string(),
            value: value.trim().to_string(),
            line,
        });
    }
    Ok(sections)
}

/// Splits on commas outside parentheses and brackets.
fn split_top(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts
}

fn number(value: &str, line: usize) -> PResult<f64> {
    let e = parse_scalar_expr::<&str>(value, &[]).map_err(|e| ManifestError {
        line,
        message: format!("invalid number `{value}`: {e}"),
    })?;
    match e.evaluate(&VarBinding::default()) {
        Ok(v) if v.is_finite() => Ok(v),
        _ => err(line, format!("`{value}` does not evaluate to a finite number")),
    }
}

fn integer(value: &str, line: usize) -> PResult<i64> {
    value
        .parse::<i64>()
        .or_else(|_| err(line, format!("expected an integer, got `{value}`")))
}

fn integers(value: &str, line: usize) -> PResult<Vec<i64>> {
    split_top(value).into_iter().map(|v| integer(v, line)).collect()
}

fn enclosed(value: &str, open: char, close: char, line: usize) -> PResult<&str> {
    match value.strip_prefix(open).and_then(|v| v.strip_suffix(close)) {
        Some(inner) => Ok(inner),
        None => err(line, format!("expected `{open}...{close}`, got `{value}`")),
    }
}

fn coordinate(name: &str, value: &str, line: usize) -> PResult<Coordinate> {
    if let Some(rest) = value.strip_prefix("periodic") {
        let parts = split_top(enclosed(rest.trim(), '(', ')', line)?);
        if parts.len() != 2 {
            return err(line, "expected `periodic(lo, period)`");
        }
        return Ok(Coordinate::periodic(
            name,
            number(parts[0], line)?,
            number(parts[1], line)?,
        ));
    }
    let parts = split_top(enclosed(value, '[', ']', line)?);
    if parts.len() != 2 {
        return err(line, "expected `[lo, hi]`");
    }
    Ok(Coordinate::interval(
        name,
        number(parts[0], line)?,
        number(parts[1], line)?,
    ))
}

/// Entries of one section, consumed by key.
struct Keys<'a> {
    section: &'a Section,
    used: Vec<bool>,
}

impl<'a> Keys<'a> {
    fn new(section: &'a Section) -> PResult<Self> {
        for (i, e) in section.entries.iter().enumerate() {
            let repeatable = e.key == "slice";
            if !repeatable && section.entries[..i].iter().any(|f| f.key == e.key) {
                return err(e.line, format!("duplicate key `{}`", e.key));
            }
        }
        Ok(Keys {
            section,
            used: vec![false; section.entries.len()],
        })
    }

    fn get(&mut self, key: &str) -> Option<&'a Entry> {
        let i = self.section.entries.iter().position(|e| e.key == key)?;
        self.used[i] = true;
        Some(&self.section.entries[i])
    }

    fn all(&mut self, key: &str) -> Vec<&'a Entry> {
        let mut out = Vec::new();
        for (i, e) in self.section.entries.iter().enumerate() {
            if e.key == key {
                self.used[i] = true;
                out.push(e);
            }
        }
        out
    }

    fn require(&mut self, key: &str) -> PResult<&'a Entry> {
        let line = self.section.line;
        match self.get(key) {
            Some(e) => Ok(e),
            None => err(line, format!("missing key `{key}` in [{}]", self.section.header)),
        }
    }

    fn finish(self) -> PResult<()> {
        match self.used.iter().position(|u| !u) {
            Some(i) => {
                let e = &self.section.entries[i];
                err(e.line, format!("unknown key `{}` in [{}]", e.key, self.section.header))
            }
            None => Ok(()),
        }
    }
}

#[derive(Default)]
struct State {
    chart: Option<Arc<Chart>>,
    plan: SamplePlan,
    tolerances: Tolerances,
    fields: BTreeMap<String, VectorField>,
    forms: BTreeMap<String, KForm>,
    structures: Vec<Structure>,
    tasks: Vec<Task>,
}

impl State {
    fn chart(&self, line: usize) -> PResult<&Arc<Chart>> {
        match &self.chart {
            Some(c) => Ok(c),
            None => err(line, "a [chart] section must come first"),
        }
    }

    /// The 3-chart carrying contact frames.
    fn base_chart(&self, line: usize) -> PResult<Arc<Chart>> {
        let chart = self.chart(line)?;
        if chart.dim() == 3 {
            Ok(chart.clone())
        } else {
            chart.base().or_else(|e| err(line, e.to_string()))
        }
    }

    fn field(&self, name: &str, line: usize) -> PResult<&VectorField> {
        match self.fields.get(name) {
            Some(f) => Ok(f),
            None => err(line, format!("undefined field `{name}`")),
        }
    }

    fn form(&self, name: &str, line: usize) -> PResult<&KForm> {
        match self.forms.get(name) {
            Some(f) => Ok(f),
            None => err(line, format!("undefined form `{name}`")),
        }
    }

    fn one_form(&self, name: &str, line: usize) -> PResult<KForm> {
        let f = self.form(name, line)?;
        if f.degree() != 1 {
            return err(line, format!("form `{name}` has degree {}, expected 1", f.degree()));
        }
        Ok(f.clone())
    }

    fn field_pair(&self, entry: &Entry) -> PResult<(VectorField, VectorField)> {
        let names = split_top(&entry.value);
        if names.len() != 2 {
            return err(entry.line, "expected two field names");
        }
        Ok((
            self.field(names[0], entry.line)?.clone(),
            self.field(names[1], entry.line)?.clone(),
        ))
    }

    fn base_frame(&self, entry: &Entry) -> PResult<FramePair> {
        let pair = self.field_pair(entry)?;
        if pair.0.chart().dim() != 3 || pair.1.chart().dim() != 3 {
            return err(entry.line, "a contact frame needs fields with three components");
        }
        Ok(pair)
    }

    fn base_expr(&self, entry: &Entry, extra: &[&str]) -> PResult<Expr> {
        let base = self.base_chart(entry.line)?;
        let mut names = base.names();
        names.extend_from_slice(extra);
        parse_scalar_expr(&entry.value, &names).map_err(|e| ManifestError {
            line: entry.line,
            message: format!("`{}`: {e}", entry.value),
        })
    }

    fn require_dim(&self, dim: usize, kind: &str, line: usize) -> PResult<()> {
        let found = self.chart(line)?.dim();
        if found == dim {
            Ok(())
        } else {
            err(line, format!("{kind} needs a {dim}-dimensional chart, found {found}"))
        }
    }
}

fn parse_chart(section: &Section) -> PResult<Arc<Chart>> {
    let mut keys = Keys::new(section)?;
    let coords = keys.require("coords")?;
    let names: Vec<&str> = split_top(&coords.value);
    let default = keys.get("box");
    let mut out = Vec::with_capacity(names.len());
    for name in &names {
        if !is_identifier(name) || name.contains('-') {
            return err(coords.line, format!("invalid coordinate name `{name}`"));
        }
        let coord = match (keys.get(name), default) {
            (Some(e), _) => coordinate(name, &e.value, e.line)?,
            (None, Some(e)) => coordinate(name, &e.value, e.line)?,
            (None, None) => return err(coords.line, format!("no interval given for `{name}`")),
        };
        out.push(coord);
    }
    keys.finish()?;
    Chart::new(out).or_else(|e| err(coords.line, e.to_string()))
}

fn parse_sampling(section: &Section, state: &mut State) -> PResult<()> {
    let mut keys = Keys::new(section)?;
    if let Some(e) = keys.get("grid") {
        let grid = integers(&e.value, e.line)?;
        if grid.iter().any(|g| *g < 2) {
            return err(e.line, "grid resolutions must be at least 2");
        }
        state.plan.grid = grid.into_iter().map(|g| g as usize).collect();
    }
    if let Some(e) = keys.get("random") {
        state.plan.random = usize::try_from(integer(&e.value, e.line)?).or_else(|_| err(e.line, "negative count"))?;
    }
    if let Some(e) = keys.get("seed") {
        state.plan.seed = e
            .value
            .parse()
            .or_else(|_| err(e.line, "seed must be a non-negative integer"))?;
    }
    keys.finish()
}

fn parse_tolerances(section: &Section, tol: &mut Tolerances) -> PResult<()> {
    for e in &section.entries {
        let v = number(&e.value, e.line)?;
        if !(v > 0.0) {
            return err(e.line, "tolerances must be positive");
        }
        let slot = match e.key.as_str() {
            "rank" => &mut tol.rank,
            "nonvanishing" => &mut tol.nonvanishing,
            "zero" => &mut tol.zero,
            "nonzero_sq" => &mut tol.nonzero_sq,
            "projection" => &mut tol.projection,
            "annihilation" => &mut tol.annihilation,
            "fd_step" => &mut tol.fd_step,
            other => return err(e.line, format!("unknown tolerance `{other}`")),
        };
        *slot = v;
    }
    Ok(())
}

fn check_new_name<T>(map: &BTreeMap<String, T>, name: &str, line: usize) -> PResult<()> {
    if !is_identifier(name) {
        return err(line, format!("invalid name `{name}`"));
    }
    if map.contains_key(name) {
        return err(line, format!("`{name}` is already defined"));
    }
    Ok(())
}

fn parse_fields(section: &Section, state: &mut State) -> PResult<()> {
    for e in &section.entries {
        check_new_name(&state.fields, &e.key, e.line)?;
        let chart = state.chart(e.line)?.clone();
        let comps = split_top(enclosed(&e.value, '(', ')', e.line)?);
        let target = if comps.len() == chart.dim() {
            chart
        } else if comps.len() == 3 && chart.dim() == 4 {
            state.base_chart(e.line)?
        } else {
            return err(
                e.line,
                format!(
                    "field `{}` has {} components on a {}-chart",
                    e.key,
                    comps.len(),
                    chart.dim()
                ),
            );
        };
        let field = VectorField::parse(&target, &comps).map_err(|err| ManifestError {
            line: e.line,
            message: format!("field `{}`: {err}", e.key),
        })?;
        state.fields.insert(e.key.clone(), field);
    }
    Ok(())
}

fn parse_forms(section: &Section, state: &mut State) -> PResult<()> {
    for e in &section.entries {
        check_new_name(&state.forms, &e.key, e.line)?;
        let chart = state.chart(e.line)?;
        let form = KForm::parse(chart, &e.value, None).map_err(|err| ManifestError {
            line: e.line,
            message: format!("form `{}`: {err}", e.key),
        })?;
        state.forms.insert(e.key.clone(), form);
    }
    Ok(())
}

fn twist(keys: &mut Keys, line: usize) -> PResult<i64> {
    let e = keys.require("n")?;
    let n = integer(&e.value, e.line)?;
    if n < 0 {
        return err(line.max(e.line), "n must be non-negative");
    }
    Ok(n)
}

fn parse_structure(section: &Section, state: &State) -> PResult<Structure> {
    let name = section.arg.clone().ok_or_else(|| ManifestError {
        line: section.line,
        message: "structure needs a name: [structure NAME]".into(),
    })?;
    if state.structures.iter().any(|s| s.name == name) {
        return err(section.line, format!("structure `{name}` is already defined"));
    }
    let mut keys = Keys::new(section)?;
    let kind_entry = keys.require("kind")?;
    let line = kind_entry.line;
    let kind = match kind_entry.value.as_str() {
        "contact" => {
            state.require_dim(3, "contact", line)?;
            let form = match keys.get("form") {
                Some(e) => Some(state.one_form(&e.value, e.line)?),
                None => None,
            };
            let frame = match keys.get("frame") {
                Some(e) => Some(state.base_frame(e)?),
                None => None,
            };
            if form.is_none() && frame.is_none() {
                return err(line, "contact structure needs `form` or `frame`");
            }
            StructureKind::Contact { form, frame }
        }
        "even_contact" => {
            state.require_dim(4, "even_contact", line)?;
            let e = keys.require("form")?;
            let form = state.one_form(&e.value, e.line)?;
            let volume = match keys.get("volume") {
                Some(e) => {
                    let v = state.form(&e.value, e.line)?;
                    if v.degree() != 4 {
                        return err(e.line, "volume form must have degree 4");
                    }
                    Some(v.clone())
                }
                None => None,
            };
            StructureKind::EvenContact { form, volume }
        }
        "engel_pair" => {
            state.require_dim(4, "engel_pair", line)?;
            let a = keys.require("alpha")?;
            let alpha = state.one_form(&a.value, a.line)?;
            let b = keys.require("beta")?;
            let beta = state.one_form(&b.value, b.line)?;
            let auto_orient = match keys.get("order") {
                None => false,
                Some(e) => match e.value.as_str() {
                    "given" => false,
                    "auto" => true,
                    other => return err(e.line, format!("order must be `given` or `auto`, got `{other}`")),
                },
            };
            StructureKind::EngelPair {
                alpha,
                beta,
                auto_orient,
            }
        }
        "engel_frame" => {
            state.require_dim(4, "engel_frame", line)?;
            let e = keys.require("frame")?;
            let (x, y) = state.field_pair(e)?;
            if x.chart().dim() != 4 || y.chart().dim() != 4 {
                return err(e.line, "an Engel frame needs fields with four components");
            }
            let base_frame = match keys.get("base_frame") {
                Some(e) => Some(state.base_frame(e)?),
                None => None,
            };
            StructureKind::EngelFrame { x, y, base_frame }
        }
        "prolongation" => {
            state.require_dim(3, "prolongation", line)?;
            let frame = state.base_frame(keys.require("frame")?)?;
            let n = twist(&mut keys, line)?;
            if n < 1 {
                return err(line, "a prolongation needs n >= 1");
            }
            StructureKind::Prolongation { frame, n }
        }
        "extension" => {
            state.require_dim(3, "extension", line)?;
            let frame = state.base_frame(keys.require("frame")?)?;
            let n = twist(&mut keys, line)?;
            let g = match keys.get("g") {
                Some(e) => Some(state.base_expr(e, &[])?),
                None => None,
            };
            let (a, b) = match (keys.get("a"), keys.get("b"), &g) {
                (Some(a), Some(b), _) => (state.base_expr(a, &[])?, state.base_expr(b, &[])?),
                (None, None, Some(g)) => (g.clone().cos(), g.clone().sin()),
                _ => return err(line, "extension needs both `a` and `b`, or `g`"),
            };
            StructureKind::Extension { frame, a, b, g, n }
        }
        "extension_family" => {
            state.require_dim(3, "extension_family", line)?;
            let frame = state.base_frame(keys.require("frame")?)?;
            let mut slices = Vec::new();
            for e in keys.all("slice") {
                let parts = split_top(&e.value);
                if parts.len() != 3 {
                    return err(e.line, "expected `slice = s, g, n`");
                }
                let s = number(parts[0], e.line)?;
                let g_entry = Entry {
                    key: "g".into(),
                    value: parts[1].to_string(),
                    line: e.line,
                };
                let g = state.base_expr(&g_entry, &[])?;
                let n = integer(parts[2], e.line)?;
                if n < 0 {
                    return err(e.line, "n must be non-negative");
                }
                slices.push(FamilySlice {
                    s,
                    a: g.clone().cos(),
                    b: g.clone().sin(),
                    g: Some(g),
                    n,
                });
            }
            if slices.is_empty() {
                return err(line, "extension_family needs at least one `slice`");
            }
            StructureKind::ExtensionFamily { frame, slices }
        }
        other => return err(line, format!("unknown structure kind `{other}`")),
    };
    keys.finish()?;
    Ok(Structure {
        name,
        line: section.line,
        kind,
    })
}

fn parse_task(section: &Section, state: &State) -> PResult<Task> {
    let id = section.arg.clone().ok_or_else(|| ManifestError {
        line: section.line,
        message: "task needs an id: [task ID]".into(),
    })?;
    if state.tasks.iter().any(|t| t.id == id) {
        return err(section.line, format!("task `{id}` is already defined"));
    }
    let mut keys = Keys::new(section)?;
    let k = keys.require("kind")?;
    let kind = TaskKind::parse(&k.value).ok_or_else(|| ManifestError {
        line: k.line,
        message: format!("unknown task kind `{}`", k.value),
    })?;
    let s = keys.require("structure")?;
    if !state.structures.iter().any(|st| st.name == s.value) {
        return err(s.line, format!("undefined structure `{}`", s.value));
    }
    let expect = match keys.get("expect") {
        Some(e) => Some(integers(&e.value, e.line)?),
        None => None,
    };
    let base_points = match keys.get("base_points") {
        Some(e) => {
            let n = integer(&e.value, e.line)?;
            if n < 1 {
                return err(e.line, "base_points must be positive");
            }
            Some(n as usize)
        }
        None => None,
    };
    keys.finish()?;
    Ok(Task {
        id,
        line: section.line,
        kind,
        structure: s.value.clone(),
        expect,
        base_points,
    })
}

pub fn parse_manifest(text: &str) -> Result<Manifest, ManifestError> {
    let mut state = State::default();
    for section in split_sections(text)? {
        let single = |s: &Section| match &s.arg {
            Some(_) => err(s.line, format!("[{}] takes no name", s.header)),
            None => Ok(()),
        };
        match section.header.as_str() {
            "chart" => {
                single(&section)?;
                if state.chart.is_some() {
                    return err(section.line, "duplicate [chart] section");
                }
                state.chart = Some(parse_chart(&section)?);
            }
            "sampling" => {
                single(&section)?;
                parse_sampling(&section, &mut state)?;
            }
            "tolerances" => {
                single(&section)?;
                parse_tolerances(&section, &mut state.tolerances)?;
            }
            "fields" => {
                single(&section)?;
                parse_fields(&section, &mut state)?;
            }
            "forms" => {
                single(&section)?;
                parse_forms(&section, &mut state)?;
            }
            "structure" => {
                let s = parse_structure(&section, &state)?;
                state.structures.push(s);
            }
            "task" => {
                let t = parse_task(&section, &state)?;
                state.tasks.push(t);
            }
            other => return err(section.line, format!("unknown section [{other}]")),
        }
    }
    let Some(chart) = state.chart else {
        return err(1, "missing [chart] section");
    };
    Ok(Manifest {
        chart,
        plan: state.plan,
        tolerances: state.tolerances,
        structures: state.structures,
        tasks: state.tasks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[chart]
coords = x, y, z, w
box = [-1, 1]

[forms]
alpha = dz - w*dx   # first form
beta = dy - z*dx

[structure std]
kind = engel_pair
alpha = alpha
beta = beta

[task pair]
kind = verify
structure = std
";

    #[test]
    fn minimal_manifest() {
        let m = parse_manifest(MINIMAL).unwrap();
        assert_eq!(m.chart.dim(), 4);
        assert_eq!(m.tasks.len(), 1);
        assert_eq!(m.plan, SamplePlan::default());
        assert!(matches!(
            m.structure("std").unwrap().kind,
            StructureKind::EngelPair { .. }
        ));
    }

    #[test]
    fn undefined_field_names_line() {
        let text = "[chart]\ncoords = x, y, z, w\nbox = [-1, 1]\n[fields]\nX = (0, 0, 0, 1)\n\
                    [structure d]\nkind = engel_frame\nframe = X, V9\n";
        let e = parse_manifest(text).unwrap_err();
        assert_eq!(e.line, 8);
        assert!(e.message.contains("V9"), "{e}");
    }

    #[test]
    fn zero_period_is_rejected() {
        let text = "[chart]\ncoords = x, y, theta\nx = [0, 1]\ny = [0, 1]\ntheta = periodic(0, 0)\n";
        let e = parse_manifest(text).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("period"), "{e}");
    }

    #[test]
    fn periodic_and_expression_bounds() {
        let text = "[chart]\ncoords = x, y, z\nbox = periodic(0, 2*pi)\n[sampling]\ngrid = 4, 4, 8\nseed = 9\n";
        let m = parse_manifest(text).unwrap();
        assert!((m.chart.coord(2).hi - std::f64::consts::TAU).abs() < 1e-15);
        assert_eq!(m.plan.resolution(2), 8);
        assert_eq!(m.plan.seed, 9);
    }

    #[test]
    fn assorted_errors() {
        let cases = [
            ("x = 1\n", 1, "outside"),
            (
                "[chart]\ncoords = x, y, z\nbox = [0, 1]\nbox = [0, 2]\n",
                4,
                "duplicate",
            ),
            (
                "[chart]\ncoords = x, y, z\nbox = [0, 1]\ncolour = red\n",
                4,
                "unknown key",
            ),
            ("[forms]\na = dx\n", 2, "chart"),
            (
                "[chart]\ncoords = x, y, z\nbox = [0, 1]\n[fields]\nV = (1, 2)\n",
                5,
                "components",
            ),
            (
                "[chart]\ncoords = x, y, z\nbox = [0, 1]\n[task t]\nkind = verify\nstructure = nope\n",
                6,
                "nope",
            ),
            (
                "[chart]\ncoords = x, y, z\nbox = [0, 1]\n[sampling]\ngrid = 1\n",
                5,
                "at least 2",
            ),
            (
                "[chart]\ncoords = x, y, z\nbox = [0, 1]\n[forms]\nb = dy - q*dx\n",
                5,
                "q",
            ),
        ];
        for (text, line, needle) in cases {
            let e = parse_manifest(text).unwrap_err();
            assert_eq!(e.line, line, "{text}: {e}");
            assert!(e.message.contains(needle), "{text}: {e}");
        }
    }

    #[test]
    fn families_and_extensions() {
        let text = "\
[chart]
coords = x, y, z
box = [-1, 1]
[fields]
V0 = (0, 0, 1)
V1 = (1, z, 0)
[structure e]
kind = extension
frame = V0, V1
g = pi/2
n = 2
[structure fam]
kind = extension_family
frame = V0, V1
slice = 0, pi/2, 0
slice = 1, pi/2, 1
";
        let m = parse_manifest(text).unwrap();
        match &m.structure("fam").unwrap().kind {
            StructureKind::ExtensionFamily { slices, .. } => assert_eq!(slices.len(), 2),
            other => panic!("{other:?}"),
        }
        let bad = text.replace("n = 2", "n = -1");
        assert!(parse_manifest(&bad).unwrap_err().message.contains("non-negative"));
    }
}
