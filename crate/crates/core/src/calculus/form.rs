use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::chart::{same_chart, Chart};
use crate::error::{Error, Result};
use crate::expr::{parse_scalar_expr, EvalError, Expr};

/// A strictly increasing tuple of coordinate indices, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct IndexSet(u8);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn single(i: usize) -> Self {
        IndexSet(1 << i)
    }

    /// Builds the set from indices in any order; `None` if an index repeats.
    pub fn from_indices(idx: &[usize]) -> Option<Self> {
        let mut bits = 0u8;
        for &i in idx {
            debug_assert!(i < 8);
            if bits & (1 << i) != 0 {
                return None;
            }
            bits |= 1 << i;
        }
        Some(IndexSet(bits))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> Vec<usize> {
        (0..8).filter(|&i| self.contains(i)).collect()
    }

    pub fn with(self, i: usize) -> Self {
        IndexSet(self.0 | (1 << i))
    }

    pub fn without(self, i: usize) -> Self {
        IndexSet(self.0 & !(1 << i))
    }

    pub fn is_disjoint(self, other: IndexSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: IndexSet) -> Self {
        IndexSet(self.0 | other.0)
    }

    /// Number of elements of `self` strictly below `i`.
    pub fn count_below(self, i: usize) -> usize {
        (self.0 & ((1u16 << i) - 1) as u8).count_ones() as usize
    }

    /// Sign of the permutation sorting the concatenation `self ++ other`.
    pub fn wedge_sign(self, other: IndexSet) -> f64 {
        let inversions: usize = other.indices().iter().map(|&j| self.len() - self.count_below(j)).sum();
        if inversions.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// The complement inside `{0, .., dim-1}`.
    pub fn complement(self, dim: usize) -> Self {
        IndexSet(!self.0 & ((1u16 << dim) - 1) as u8)
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.indices().cmp(&other.indices())
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All `k`-subsets of `{0, .., dim-1}` in lexicographic order.
pub fn subsets(dim: usize, k: usize) -> Vec<IndexSet> {
    let mut out: Vec<IndexSet> = (0u16..(1 << dim))
        .map(|b| IndexSet(b as u8))
        .filter(|s| s.len() == k)
        .collect();
    out.sort();
    out
}

/// A differential form of degree `k`, stored sparsely over increasing index
/// tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct KForm {
    chart: Arc<Chart>,
    degree: usize,
    coeffs: BTreeMap<IndexSet, Expr>,
}

impl KForm {
    pub fn zero(chart: &Arc<Chart>, degree: usize) -> Result<Self> {
        if degree > chart.dim() {
            return Err(Error::DegreeOverflow {
                degree,
                dim: chart.dim(),
            });
        }
        Ok(KForm {
            chart: chart.clone(),
            degree,
            coeffs: BTreeMap::new(),
        })
    }

    /// Accumulates `coef * dx^{i_1} ^ ... ^ dx^{i_k}` terms given in any index
    /// order; repeated indices contribute nothing.
    pub fn from_terms(chart: &Arc<Chart>, degree: usize, terms: Vec<(Vec<usize>, Expr)>) -> Result<Self> {
        let mut form = KForm::zero(chart, degree)?;
        for (idx, coef) in terms {
            if idx.len() != degree {
                return Err(Error::Precondition(format!(
                    "term with {} indices in a {degree}-form",
                    idx.len()
                )));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= chart.dim()) {
                return Err(Error::Precondition(format!("index {bad} outside the chart")));
            }
            chart.check_expr(&coef)?;
            let Some(set) = IndexSet::from_indices(&idx) else {
                continue;
            };
            let sign = permutation_sign(&idx);
            form.accumulate(set, if sign > 0.0 { coef } else { -coef });
        }
        form.tidy();
        Ok(form)
    }

    /// `sum_i c_i dx^i`.
    pub fn one_form(chart: &Arc<Chart>, coefficients: Vec<Expr>) -> Result<Self> {
        if coefficients.len() != chart.dim() {
            return Err(Error::WrongDimension {
                expected: chart.dim(),
                found: coefficients.len(),
            });
        }
        let terms = coefficients
            .into_iter()
            .enumerate()
            .map(|(i, c)| (vec![i], c))
            .collect();
        KForm::from_terms(chart, 1, terms)
    }

    /// `rho dx^1 ^ ... ^ dx^n`.
    pub fn volume(chart: &Arc<Chart>, rho: Expr) -> Result<Self> {
        KForm::from_terms(chart, chart.dim(), vec![((0..chart.dim()).collect(), rho)])
    }

    pub fn scalar(chart: &Arc<Chart>, f: Expr) -> Result<Self> {
        KForm::from_terms(chart, 0, vec![(vec![], f)])
    }

    /// Parses a form written as a polynomial in the differentials `d<coord>`;
    /// products of differentials are wedge products, e.g. `dy - z*dx` or
    /// `2*dx*dz`. `degree` is needed only when the text denotes the zero form.
    pub fn parse(chart: &Arc<Chart>, text: &str, degree: Option<usize>) -> Result<Self> {
        let mut allowed: Vec<String> = chart.names().iter().map(|s| s.to_string()).collect();
        let diffs: Vec<String> = chart.names().iter().map(|n| format!("d{n}")).collect();
        allowed.extend(diffs.iter().cloned());
        let e = parse_scalar_expr(text, &allowed)?;
        let poly: Poly = expand(&e, &diffs)?
            .into_iter()
            .map(|(k, v)| (k, v.simplify()))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        let mut degrees = poly.keys().map(|s| s.len()).collect::<Vec<_>>();
        degrees.sort_unstable();
        degrees.dedup();
        let degree = match (degrees.as_slice(), degree) {
            ([], Some(k)) => k,
            ([], None) => return Err(Error::Precondition(format!("cannot infer the degree of `{text}`"))),
            ([k], None) => *k,
            ([k], Some(want)) if *k == want => want,
            _ => {
                return Err(Error::Precondition(format!(
                    "`{text}` is not a homogeneous form of the expected degree"
                )))
            }
        };
        let mut form = KForm::zero(chart, degree)?;
        for (set, c) in poly {
            form.accumulate(set, c);
        }
        form.tidy();
        Ok(form)
    }

    pub(crate) fn accumulate(&mut self, set: IndexSet, coef: Expr) {
        let entry = self.coeffs.entry(set).or_insert(Expr::ZERO);
        *entry = if entry.is_zero() { coef } else { entry.clone() + coef };
    }

    /// Simplifies coefficients and drops structural zeros.
    pub(crate) fn tidy(&mut self) {
        let coeffs = std::mem::take(&mut self.coeffs);
        self.coeffs = coeffs
            .into_iter()
            .map(|(k, v)| (k, v.simplify()))
            .filter(|(_, v)| !v.is_zero())
            .collect();
    }

    pub(crate) fn with_coeffs(chart: &Arc<Chart>, degree: usize, coeffs: BTreeMap<IndexSet, Expr>) -> Self {
        let mut f = KForm {
            chart: chart.clone(),
            degree,
            coeffs,
        };
        f.tidy();
        f
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IndexSet, &Expr)> {
        self.coeffs.iter()
    }

    /// Coefficient on the increasing index tuple `idx`.
    pub fn coefficient(&self, idx: &[usize]) -> Expr {
        IndexSet::from_indices(idx)
            .and_then(|s| self.coeffs.get(&s).cloned())
            .unwrap_or(Expr::ZERO)
    }

    pub fn coefficient_at(&self, set: IndexSet) -> Expr {
        self.coeffs.get(&set).cloned().unwrap_or(Expr::ZERO)
    }

    /// True when every stored coefficient is structurally zero.
    pub fn is_structurally_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, f: &Expr) -> Self {
        let coeffs = self.coeffs.iter().map(|(k, v)| (*k, f.clone() * v.clone())).collect();
        KForm::with_coeffs(&self.chart, self.degree, coeffs)
    }

    pub fn add(&self, other: &KForm) -> Result<Self> {
        same_chart(&self.chart, &other.chart)?;
        if self.degree != other.degree {
            return Err(Error::Precondition(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.accumulate(*k, v.clone());
        }
        out.tidy();
        Ok(out)
    }

    pub fn sub(&self, other: &KForm) -> Result<Self> {
        self.add(&other.scale(&Expr::c(-1.0)))
    }

    pub fn substitute(&self, var: &str, value: &Expr) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, v)| (*k, v.substitute(var, value)))
            .collect();
        KForm::with_coeffs(&self.chart, self.degree, coeffs)
    }

    /// Coefficients at `point` over all `k`-subsets in lexicographic order.
    pub fn eval_dense(&self, point: &[f64]) -> Result<Vec<f64>, EvalError> {
        subsets(self.chart.dim(), self.degree)
            .into_iter()
            .map(|s| match self.coeffs.get(&s) {
                Some(c) => self.chart.eval(c, point),
                None => Ok(0.0),
            })
            .collect()
    }

    /// Euclidean norm of the coefficient vector at `point`.
    pub fn norm_at(&self, point: &[f64]) -> Result<f64, EvalError> {
        Ok(self.eval_dense(point)?.iter().map(|x| x * x).sum::<f64>().sqrt())
    }

    /// Evaluates the form on `k` vectors (alternating multilinear map).
    pub fn apply_to(&self, point: &[f64], vectors: &[Vec<f64>]) -> Result<f64, EvalError> {
        assert_eq!(vectors.len(), self.degree, "need one vector per slot");
        let mut total = 0.0;
        for (set, coef) in &self.coeffs {
            let idx = set.indices();
            let c = self.chart.eval(coef, point)?;
            total += c * det_minor(vectors, &idx);
        }
        Ok(total)
    }
}

fn det_minor(vectors: &[Vec<f64>], idx: &[usize]) -> f64 {
    let k = idx.len();
    let m = nalgebra::DMatrix::from_fn(k, k, |r, c| vectors[c][idx[r]]);
    if k == 0 {
        1.0
    } else {
        m.determinant()
    }
}

/// Sign of the permutation that sorts `idx` (assumed distinct).
pub fn permutation_sign(idx: &[usize]) -> f64 {
    let mut inv = 0;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] > idx[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

type Poly = BTreeMap<IndexSet, Expr>;

fn scalar_only(p: &Poly, what: &str) -> Result<Expr> {
    match p.len() {
        0 => Ok(Expr::ZERO),
        1 if p.contains_key(&IndexSet::EMPTY) => Ok(p[&IndexSet::EMPTY].clone()),
        _ => Err(Error::Precondition(format!(
            "differentials may not appear inside {what}"
        ))),
    }
}

fn map_poly(p: Poly, f: impl Fn(Expr) -> Expr) -> Poly {
    p.into_iter().map(|(k, v)| (k, f(v))).collect()
}

fn merge(mut a: Poly, b: Poly, sign: f64) -> Poly {
    for (k, v) in b {
        let v = if sign < 0.0 { -v } else { v };
        match a.remove(&k) {
            Some(old) => a.insert(k, old + v),
            None => a.insert(k, v),
        };
    }
    a
}

/// Expands an expression polynomial in anticommuting differentials.
fn expand(e: &Expr, diffs: &[String]) -> Result<Poly> {
    let scalar = |e: &Expr| Poly::from([(IndexSet::EMPTY, e.clone())]);
    Ok(match e {
        Expr::Var(v) => match diffs.iter().position(|d| d == v) {
            Some(i) => Poly::from([(IndexSet::single(i), Expr::ONE)]),
            None => scalar(e),
        },
        Expr::Const(_) | Expr::Named(_) => scalar(e),
        Expr::Neg(a) => map_poly(expand(a, diffs)?, |c| -c),
        Expr::Add(a, b) => merge(expand(a, diffs)?, expand(b, diffs)?, 1.0),
        Expr::Sub(a, b) => merge(expand(a, diffs)?, expand(b, diffs)?, -1.0),
        Expr::Mul(a, b) => {
            let (pa, pb) = (expand(a, diffs)?, expand(b, diffs)?);
            let mut out = Poly::new();
            for (sa, ca) in &pa {
                for (sb, cb) in &pb {
                    if !sa.is_disjoint(*sb) {
                        continue;
                    }
                    let term = ca.clone() * cb.clone();
                    let term = if sa.wedge_sign(*sb) < 0.0 { -term } else { term };
                    out = merge(out, Poly::from([(sa.union(*sb), term)]), 1.0);
                }
            }
            out
        }
        Expr::Div(a, b) => {
            let den = scalar_only(&expand(b, diffs)?, "a denominator")?;
            map_poly(expand(a, diffs)?, |c| c / den.clone())
        }
        Expr::Pow(a, k) => scalar(&scalar_only(&expand(a, diffs)?, "a power")?.powi(*k)),
        Expr::Sin(a) => scalar(&scalar_only(&expand(a, diffs)?, "sin")?.sin()),
        Expr::Cos(a) => scalar(&scalar_only(&expand(a, diffs)?, "cos")?.cos()),
        Expr::Exp(a) => scalar(&scalar_only(&expand(a, diffs)?, "exp")?.exp()),
    })
}

/// Prints in the syntax accepted by [`KForm::parse`].
impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (n, (set, coef)) in self.coeffs.iter().enumerate() {
            let diffs: Vec<String> = set
                .indices()
                .iter()
                .map(|&i| format!("d{}", self.chart.coord(i).name))
                .collect();
            let (negative, magnitude) = match coef {
                Expr::Const(c) if *c < 0.0 => (true, Expr::c(-c)),
                _ => (false, coef.clone()),
            };
            match (n > 0, negative) {
                (true, true) => write!(f, " - ")?,
                (true, false) => write!(f, " + ")?,
                (false, true) => write!(f, "-")?,
                (false, false) => {}
            }
            let atomic = matches!(magnitude, Expr::Const(_) | Expr::Var(_) | Expr::Named(_));
            match (magnitude.is_one(), diffs.is_empty(), atomic) {
                (true, false, _) => write!(f, "{}", diffs.join("*"))?,
                (_, true, true) => write!(f, "{magnitude}")?,
                (_, true, false) => write!(f, "({magnitude})")?,
                (false, false, true) => write!(f, "{magnitude}*{}", diffs.join("*"))?,
                (false, false, false) => write!(f, "({magnitude})*{}", diffs.join("*"))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r4() -> Arc<Chart> {
        Chart::boxed(&["x", "y", "z", "w"], -1.0, 1.0).unwrap()
    }

    #[test]
    fn wedge_sign_counts_inversions() {
        let a = IndexSet::from_indices(&[1]).unwrap();
        let b = IndexSet::from_indices(&[0, 2]).unwrap();
        assert_eq!(a.wedge_sign(b), -1.0);
        assert_eq!(b.wedge_sign(a), -1.0);
        let c = IndexSet::from_indices(&[3]).unwrap();
        assert_eq!(b.wedge_sign(c), 1.0);
        assert_eq!(c.wedge_sign(IndexSet::from_indices(&[0, 1, 2]).unwrap()), -1.0);
    }

    #[test]
    fn display_parses_back() {
        let chart = r4();
        for text in ["dz - w*dx", "-2*dx*dy + (x*y)*dz*dw - dy*dz", "-dx*dy*dz*dw"] {
            let form = KForm::parse(&chart, text, None).unwrap();
            let again = KForm::parse(&chart, &form.to_string(), None).unwrap();
            assert_eq!(again, form, "{text} printed as {form}");
        }
        assert_eq!(
            KForm::parse(&chart, "-dx*dy*dz*dw", None).unwrap().to_string(),
            "-dx*dy*dz*dw"
        );
    }

    #[test]
    fn subsets_are_lexicographic() {
        let s: Vec<Vec<usize>> = subsets(4, 2).into_iter().map(|s| s.indices()).collect();
        assert_eq!(
            s,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(subsets(4, 3).len(), 4);
        assert_eq!(subsets(3, 0), vec![IndexSet::EMPTY]);
    }

    #[test]
    fn parses_polynomial_forms() {
        let c = r4();
        let beta = KForm::parse(&c, "dy - z*dx", None).unwrap();
        assert_eq!(beta.degree(), 1);
        assert_eq!(beta.coefficient(&[1]), Expr::ONE);
        assert_eq!(beta.coefficient(&[0]), -Expr::var("z"));

        let two = KForm::parse(&c, "dz*dx", None).unwrap();
        assert_eq!(two.coefficient(&[0, 2]), Expr::c(-1.0));

        let vol = KForm::parse(&c, "dx*dy*dz*dw", None).unwrap();
        assert_eq!(vol.degree(), 4);

        assert!(KForm::parse(&c, "dx + dx*dy", None).is_err());
        assert!(KForm::parse(&c, "sin(dx)", None).is_err());
        assert!(KForm::parse(&c, "0", None).is_err());
        assert_eq!(KForm::parse(&c, "0", Some(2)).unwrap().degree(), 2);
        assert!(KForm::parse(&c, "dx*dx", Some(2)).unwrap().is_structurally_zero());
    }

    #[test]
    fn display_round_trips() {
        let c = r4();
        for src in ["dy - z*dx", "dx*dz", "(1 + w^2)*dx*dy*dz*dw - 0.5*dz*dw*dy*dx"] {
            let f = KForm::parse(&c, src, None).unwrap();
            let g = KForm::parse(&c, &f.to_string(), None).unwrap();
            for p in [[0.1, 0.2, 0.3, 0.4], [-0.5, 0.9, 0.0, 0.7]] {
                assert_eq!(f.eval_dense(&p).unwrap(), g.eval_dense(&p).unwrap());
            }
        }
    }

    #[test]
    fn apply_to_basis_vectors() {
        let c = r4();
        let e = |i: usize| (0..4).map(|j| if i == j { 1.0 } else { 0.0 }).collect::<Vec<_>>();
        let f = KForm::parse(&c, "dx*dz", None).unwrap();
        let p = [0.0; 4];
        assert_eq!(f.apply_to(&p, &[e(0), e(2)]).unwrap(), 1.0);
        assert_eq!(f.apply_to(&p, &[e(2), e(0)]).unwrap(), -1.0);
        assert_eq!(f.apply_to(&p, &[e(0), e(1)]).unwrap(), 0.0);
    }
}
