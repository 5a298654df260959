//! Linear symplectic generators, torus weight spaces of `⋀^2`, orbit-span
//! saturation and the pointwise large family.
//!
//! A word `[g_1, …, g_L]` denotes `T = g_1 ∘ … ∘ g_L`, so
//! `T^* α = g_L^*( … g_1^* α)`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::form::{standard_symplectic_form, Form};
use crate::index::{binomial, Basis};
use crate::json::{form_to_value, parse_scalar_value};
use crate::linalg::{Matrix, SpanBasis};
use crate::linear_map::LinearMap;
use crate::report::CheckReport;
use crate::scalar::{format_scalar, int, ratio, Scalar};

/// A linear map with `T^* ω = ω` and `det T = 1`, checked at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticMatrix(LinearMap);

impl SymplecticMatrix {
    pub fn new(map: LinearMap) -> Result<Self> {
        let omega = standard_symplectic_form(map.n())?;
        if omega.pullback(&map)? != omega {
            return Err(Error::NotSymplectic(format!("T^*ω ≠ ω for\n{map}")));
        }
        if !map.determinant().is_one() {
            return Err(Error::NotSymplectic("determinant is not 1".into()));
        }
        Ok(SymplecticMatrix(map))
    }

    pub fn map(&self) -> &LinearMap {
        &self.0
    }

    pub fn into_map(self) -> LinearMap {
        self.0
    }

    pub fn pullback(&self, a: &Form) -> Result<Form> {
        a.pullback(&self.0)
    }
}

fn check_plane(n: usize, i: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::InvalidArgument(format!("plane {i} outside 1..={n}")));
    }
    Ok(())
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    check_plane(n, i)?;
    check_plane(n, j)?;
    if i == j {
        return Err(Error::InvalidArgument(format!("planes must differ, got {i} twice")));
    }
    Ok(())
}

/// `x_i ↦ t_i x_i`, `y_i ↦ y_i / t_i`.
pub fn torus_element(t: &[Scalar]) -> Result<SymplecticMatrix> {
    let n = t.len();
    if t.iter().any(Zero::is_zero) {
        return Err(Error::InvalidArgument("torus parameters must be nonzero".into()));
    }
    let diag = t.iter().cloned().chain(t.iter().map(|v| v.recip())).collect();
    SymplecticMatrix::new(LinearMap::diagonal(n, diag)?)
}

/// Swaps the `(x_r, y_r)` and `(x_i, y_i)` planes.
pub fn plane_swap(n: usize, r: usize, i: usize) -> Result<SymplecticMatrix> {
    check_pair(n, r, i)?;
    let mut m = Matrix::identity(2 * n);
    for (a, b) in [(r, i), (n + r, n + i)] {
        m.set(a - 1, a - 1, int(0));
        m.set(b - 1, b - 1, int(0));
        m.set(a - 1, b - 1, int(1));
        m.set(b - 1, a - 1, int(1));
    }
    SymplecticMatrix::new(LinearMap::from_matrix(n, m)?)
}

/// `f_{i,j}`: `x_j ↦ x_j - x_i`, `y_i ↦ y_i + y_j`.
pub fn shear_f_ij(n: usize, i: usize, j: usize) -> Result<SymplecticMatrix> {
    check_pair(n, i, j)?;
    let mut m = Matrix::identity(2 * n);
    m.set(j - 1, i - 1, int(-1));
    m.set(n + i - 1, n + j - 1, int(1));
    SymplecticMatrix::new(LinearMap::from_matrix(n, m)?)
}

/// `(x_j, y_j) ↦ (-y_j, x_j)`.
pub fn rotation_j(n: usize, j: usize) -> Result<SymplecticMatrix> {
    check_plane(n, j)?;
    let mut m = Matrix::identity(2 * n);
    let (x, y) = (j - 1, n + j - 1);
    m.set(x, x, int(0));
    m.set(y, y, int(0));
    m.set(x, y, int(-1));
    m.set(y, x, int(1));
    SymplecticMatrix::new(LinearMap::from_matrix(n, m)?)
}

/// `x_r ↦ x_r + y_s`, `x_s ↦ x_s + y_r`.
pub fn hyperbolic_shear(n: usize, r: usize, s: usize) -> Result<SymplecticMatrix> {
    check_pair(n, r, s)?;
    let mut m = Matrix::identity(2 * n);
    m.set(r - 1, n + s - 1, int(1));
    m.set(s - 1, n + r - 1, int(1));
    SymplecticMatrix::new(LinearMap::from_matrix(n, m)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Torus(Vec<Scalar>),
    Swap(usize, usize),
    Shear(usize, usize),
    Rotation(usize),
    Hyperbolic(usize, usize),
}

impl Generator {
    pub fn matrix(&self, n: usize) -> Result<SymplecticMatrix> {
        match self {
            Generator::Torus(t) if t.len() == n => torus_element(t),
            Generator::Torus(t) => Err(Error::InvalidArgument(format!(
                "torus element has {} parameters, expected {n}",
                t.len()
            ))),
            Generator::Swap(r, i) => plane_swap(n, *r, *i),
            Generator::Shear(i, j) => shear_f_ij(n, *i, *j),
            Generator::Rotation(j) => rotation_j(n, *j),
            Generator::Hyperbolic(r, s) => hyperbolic_shear(n, *r, *s),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Generator::Torus(_) => "torus",
            Generator::Swap(..) => "swap",
            Generator::Shear(..) => "shear",
            Generator::Rotation(_) => "rotation",
            Generator::Hyperbolic(..) => "hyperbolic",
        }
    }

    /// `{"gen": name, "args": [...]}`; torus parameters are `"p/q"` strings.
    pub fn to_value(&self) -> Value {
        let args = match self {
            Generator::Torus(t) => t.iter().map(|v| json!(format_scalar(v))).collect(),
            Generator::Swap(a, b) | Generator::Shear(a, b) | Generator::Hyperbolic(a, b) => vec![json!(a), json!(b)],
            Generator::Rotation(j) => vec![json!(j)],
        };
        json!({ "gen": self.name(), "args": args })
    }

    pub fn from_value(value: &Value) -> Result<Generator> {
        let bad = |reason: &str| Error::schema("generator", reason.to_string());
        let obj = value.as_object().ok_or_else(|| bad("expected an object"))?;
        if obj.keys().any(|k| k != "gen" && k != "args") {
            return Err(bad("unknown field"));
        }
        let name = obj
            .get("gen")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing \"gen\""))?;
        let args = obj
            .get("args")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"args\""))?;
        let planes = |count: usize| -> Result<Vec<usize>> {
            if args.len() != count {
                return Err(bad(&format!("{name} takes {count} arguments")));
            }
            args.iter()
                .map(|a| {
                    a.as_u64()
                        .map(|v| v as usize)
                        .ok_or_else(|| bad("plane indices must be integers"))
                })
                .collect()
        };
        Ok(match name {
            "torus" => Generator::Torus(
                args.iter()
                    .enumerate()
                    .map(|(i, a)| parse_scalar_value(a, &format!("generator.args[{i}]")))
                    .collect::<Result<_>>()?,
            ),
            "swap" => planes(2).map(|p| Generator::Swap(p[0], p[1]))?,
            "shear" => planes(2).map(|p| Generator::Shear(p[0], p[1]))?,
            "rotation" => planes(1).map(|p| Generator::Rotation(p[0]))?,
            "hyperbolic" => planes(2).map(|p| Generator::Hyperbolic(p[0], p[1]))?,
            other => return Err(bad(&format!("unknown generator {other:?}"))),
        })
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Torus(t) => write!(f, "torus({})", t.iter().map(format_scalar).join(",")),
            Generator::Swap(a, b) => write!(f, "swap({a},{b})"),
            Generator::Shear(a, b) => write!(f, "shear({a},{b})"),
            Generator::Rotation(j) => write!(f, "rotation({j})"),
            Generator::Hyperbolic(a, b) => write!(f, "hyperbolic({a},{b})"),
        }
    }
}

pub fn word_to_value(word: &[Generator]) -> Value {
    Value::Array(word.iter().map(Generator::to_value).collect())
}

/// `g_1 ∘ … ∘ g_L`.
pub fn word_map(n: usize, word: &[Generator]) -> Result<LinearMap> {
    word.iter()
        .try_fold(LinearMap::identity(n), |acc, g| acc.compose(g.matrix(n)?.map()))
}

/// Torus elements with one parameter in `{2, 1/2}` and the rest 1, then
/// swaps, shears, rotations and hyperbolic shears, in that order.
pub fn generator_catalog(n: usize) -> Vec<Generator> {
    let mut out = Vec::new();
    for p in 0..n {
        for t in [int(2), ratio(1, 2)] {
            let mut params = vec![int(1); n];
            params[p] = t;
            out.push(Generator::Torus(params));
        }
    }
    let pairs: Vec<(usize, usize)> = (1..=n).tuple_combinations().collect();
    out.extend(pairs.iter().map(|&(r, i)| Generator::Swap(r, i)));
    out.extend(
        (1..=n)
            .cartesian_product(1..=n)
            .filter(|(i, j)| i != j)
            .map(|(i, j)| Generator::Shear(i, j)),
    );
    out.extend((1..=n).map(Generator::Rotation));
    out.extend(pairs.iter().map(|&(r, s)| Generator::Hyperbolic(r, s)));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WeightLabel {
    /// `dx_i ^ dx_j`, `i < j`.
    E(usize, usize),
    /// `dy_i ^ dy_j`, `i < j`.
    EPrime(usize, usize),
    /// `dx_i ^ dy_j`, `i ≠ j`.
    F(usize, usize),
    /// `dx_i ^ dy_i`.
    Fi(usize),
}

impl WeightLabel {
    pub fn monomial(self, n: usize) -> Form {
        match self {
            WeightLabel::E(i, j) => Form::dx_dx(n, i, j),
            WeightLabel::EPrime(i, j) => Form::dy_dy(n, i, j),
            WeightLabel::F(i, j) => Form::dx_dy(n, i, j),
            WeightLabel::Fi(i) => Form::dx_dy(n, i, i),
        }
    }

    /// Eigenvalue of the torus element `t` on this weight space.
    pub fn character(self, t: &[Scalar]) -> Scalar {
        match self {
            WeightLabel::E(i, j) => &t[i - 1] * &t[j - 1],
            WeightLabel::EPrime(i, j) => (&t[i - 1] * &t[j - 1]).recip(),
            WeightLabel::F(i, j) => &t[i - 1] / &t[j - 1],
            WeightLabel::Fi(_) => int(1),
        }
    }

    /// `E`, `E'` or `F`; `F_ij` and `F_i` share the class `F`.
    pub fn class(self) -> &'static str {
        match self {
            WeightLabel::E(..) => "E",
            WeightLabel::EPrime(..) => "E'",
            WeightLabel::F(..) | WeightLabel::Fi(_) => "F",
        }
    }
}

impl fmt::Display for WeightLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightLabel::E(i, j) => write!(f, "E{i}{j}"),
            WeightLabel::EPrime(i, j) => write!(f, "E'{i}{j}"),
            WeightLabel::F(i, j) => write!(f, "F{i}{j}"),
            WeightLabel::Fi(i) => write!(f, "F{i}"),
        }
    }
}

/// Coordinates of a 2-form in the monomial weight basis; absent labels are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightComponents {
    pub n: usize,
    pub components: BTreeMap<WeightLabel, Scalar>,
}

impl WeightComponents {
    pub fn get(&self, label: WeightLabel) -> Scalar {
        self.components.get(&label).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn reassemble(&self) -> Form {
        let mut out = Form::zero(self.n, 2);
        for (label, c) in &self.components {
            out += &label.monomial(self.n).scale(c);
        }
        out
    }

    /// Weight classes present, in the order `E`, `E'`, `F`.
    pub fn classes(&self) -> Vec<&'static str> {
        ["E", "E'", "F"]
            .into_iter()
            .filter(|c| self.components.keys().any(|l| l.class() == *c))
            .collect()
    }
}

pub fn weight_decompose(a: &Form) -> Result<WeightComponents> {
    if a.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            got: a.degree(),
        });
    }
    let n = a.n();
    let components = a
        .terms()
        .iter()
        .map(|(idx, c)| {
            let v = idx.to_vec();
            let label = match (v[0] <= n, v[1] <= n) {
                (true, true) => WeightLabel::E(v[0], v[1]),
                (false, false) => WeightLabel::EPrime(v[0] - n, v[1] - n),
                _ if v[1] - n == v[0] => WeightLabel::Fi(v[0]),
                _ => WeightLabel::F(v[0], v[1] - n),
            };
            (label, c.clone())
        })
        .collect();
    Ok(WeightComponents { n, components })
}

fn is_multiple_of(a: &Form, b: &Form) -> bool {
    let Some((idx, cb)) = b.terms().iter().next() else {
        return a.is_zero();
    };
    let lambda = a.coefficient(idx) / cb;
    &b.scale(&lambda) == a
}

/// Rejects degenerate 2-forms and multiples of `ω`.
pub fn check_orbit_seed(alpha: &Form) -> Result<()> {
    if alpha.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            got: alpha.degree(),
        });
    }
    if alpha.power(alpha.n()).is_zero() {
        return Err(Error::DegenerateForm);
    }
    if is_multiple_of(alpha, &standard_symplectic_form(alpha.n())?) {
        return Err(Error::ProportionalToOmega);
    }
    Ok(())
}

/// A form reached by a word, recorded in a span certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanElement {
    pub word: Vec<Generator>,
    pub form: Form,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSpan {
    pub n: usize,
    pub budget: usize,
    /// Rank of `⟨ω⟩ + span` after each word length `0..=budget` explored.
    pub rank_by_length: Vec<usize>,
    /// Forms that raised the rank, in discovery order; `ω` is adjoined first.
    pub basis: Vec<SpanElement>,
    pub target: usize,
}

impl OrbitSpan {
    pub fn rank(&self) -> usize {
        self.rank_by_length.last().copied().unwrap_or(0)
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.target
    }
}

/// Saturates `⟨T^* α⟩ + ⟨ω⟩` over generator words of length `≤ budget`.
///
/// Only rank-raising forms are expanded: if `B` spans the words of length
/// `≤ L`, then `{g^* b}` spans those of length `L + 1` modulo `B`.
pub fn orbit_span(alpha: &Form, budget: usize) -> Result<OrbitSpan> {
    check_orbit_seed(alpha)?;
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    let n = alpha.n();
    let basis2 = Basis::new(2 * n, 2);
    let target = basis2.len();
    let catalog: Vec<(Generator, SymplecticMatrix)> = generator_catalog(n)
        .into_iter()
        .map(|g| g.matrix(n).map(|m| (g, m)))
        .collect::<Result<_>>()?;
    let mut span = SpanBasis::new(target);
    let omega = standard_symplectic_form(n)?;
    span.insert(&omega.to_coords(&basis2));
    let mut basis = Vec::new();
    let mut frontier = Vec::new();
    if span.insert(&alpha.to_coords(&basis2)) {
        let e = SpanElement {
            word: Vec::new(),
            form: alpha.clone(),
        };
        basis.push(e.clone());
        frontier.push(e);
    }
    let mut rank_by_length = vec![span.rank()];
    for _ in 0..budget {
        let mut next = Vec::new();
        for elem in &frontier {
            if span.is_full() {
                break;
            }
            for (g, m) in &catalog {
                let form = m.pullback(&elem.form)?;
                if span.insert(&form.to_coords(&basis2)) {
                    let mut word = elem.word.clone();
                    word.push(g.clone());
                    let e = SpanElement { word, form };
                    basis.push(e.clone());
                    next.push(e);
                }
            }
        }
        rank_by_length.push(span.rank());
        frontier = next;
    }
    Ok(OrbitSpan {
        n,
        budget,
        rank_by_length,
        basis,
        target,
    })
}

pub fn orbit_span_report(alpha: &Form, budget: usize) -> Result<CheckReport> {
    let result = orbit_span(alpha, budget)?;
    let certificate: Vec<Value> = result
        .basis
        .iter()
        .map(|e| json!({ "word": word_to_value(&e.word), "form": form_to_value(&e.form) }))
        .collect();
    Ok(CheckReport::new(
        "orbit_span",
        json!({ "n": result.n, "budget": budget, "alpha": form_to_value(alpha) }),
        result.is_full(),
        Some(json!({
            "rank": result.rank(),
            "target": result.target,
            "rank_by_length": result.rank_by_length,
            "omega_adjoined": true,
            "certificate": certificate,
        })),
    ))
}

/// Span of a growing set of 2-forms with a record of what was added.
struct StepSpan {
    basis: Basis,
    span: SpanBasis,
    n: usize,
}

impl StepSpan {
    fn new(n: usize, seed: &Form) -> Result<Self> {
        let basis = Basis::new(2 * n, 2);
        let mut span = SpanBasis::new(basis.len());
        span.insert(&standard_symplectic_form(n)?.to_coords(&basis));
        span.insert(&seed.to_coords(&basis));
        Ok(StepSpan { basis, span, n })
    }

    fn add(&mut self, f: &Form) {
        self.span.insert(&f.to_coords(&self.basis));
    }

    fn contains(&self, f: &Form) -> bool {
        self.span.contains(&f.to_coords(&self.basis))
    }

    /// Adds `g^* f` for every listed map and every element of `forms`.
    fn close_under(&mut self, forms: &[Form], maps: &[SymplecticMatrix]) -> Result<Vec<Form>> {
        let mut out = Vec::new();
        for f in forms {
            for m in maps {
                let g = m.pullback(f)?;
                self.add(&g);
                out.push(g);
            }
        }
        Ok(out)
    }

    fn all_swaps(&self) -> Result<Vec<SymplecticMatrix>> {
        (1..=self.n)
            .tuple_combinations()
            .map(|(a, b)| plane_swap(self.n, a, b))
            .collect()
    }
}

/// One implication of the weight-space loop and the identities it relies on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofStep {
    pub name: &'static str,
    pub identities: Vec<(String, bool)>,
    pub reached: bool,
}

impl ProofStep {
    fn passed(&self) -> bool {
        self.reached && self.identities.iter().all(|(_, ok)| *ok)
    }
}

/// Replays the three implications `F_r ⟹ F_ij, F_i`, `F_rs ⟹ E_ij, E'_ij`
/// and `E_rs ⟹ F_i` starting from a single monomial plus `ω`, with the
/// explicit transformations used to move between weight spaces.
pub fn span_proof_steps(n: usize, r: usize, s: usize) -> Result<Vec<ProofStep>> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: n });
    }
    check_pair(n, r, s)?;
    let all_f: Vec<WeightLabel> = (1..=n)
        .cartesian_product(1..=n)
        .map(|(i, j)| {
            if i == j {
                WeightLabel::Fi(i)
            } else {
                WeightLabel::F(i, j)
            }
        })
        .collect();
    let all_e: Vec<WeightLabel> = (1..=n)
        .tuple_combinations()
        .flat_map(|(i, j)| [WeightLabel::E(i, j), WeightLabel::EPrime(i, j)])
        .collect();
    let all_fi: Vec<WeightLabel> = (1..=n).map(WeightLabel::Fi).collect();
    let covers = |span: &StepSpan, labels: &[WeightLabel]| labels.iter().all(|l| span.contains(&l.monomial(n)));
    let mut steps = Vec::new();

    // F_r ⟹ all F_i by swaps, then F_ij through f_{i,j}.
    {
        let seed = Form::dx_dy(n, r, r);
        let mut span = StepSpan::new(n, &seed)?;
        let swaps = span.all_swaps()?;
        let mut diag = vec![seed.clone()];
        for _ in 0..n {
            let more = span.close_under(&diag, &swaps)?;
            diag.extend(more);
        }
        let mut identities = Vec::new();
        for (i, j) in (1..=n).cartesian_product(1..=n).filter(|(i, j)| i != j) {
            let f = shear_f_ij(n, i, j)?;
            let di = Form::dx_dy(n, i, i);
            let lhs = &f.pullback(&di)? - &di;
            span.add(&f.pullback(&di)?);
            identities.push((
                format!("f_{{{i},{j}}}^*(dx{i}^dy{i}) - dx{i}^dy{i} = dx{i}^dy{j}"),
                lhs == Form::dx_dy(n, i, j),
            ));
        }
        steps.push(ProofStep {
            name: "F_r implies all F_ij and F_i",
            identities,
            reached: covers(&span, &all_f),
        });
    }

    // F_rs ⟹ all F_ij by swaps, then E_ij and E'_ij by quarter rotations.
    {
        let seed = Form::dx_dy(n, r, s);
        let mut span = StepSpan::new(n, &seed)?;
        let swaps = span.all_swaps()?;
        let mut mixed = vec![seed.clone()];
        for _ in 0..n {
            let more = span.close_under(&mixed, &swaps)?;
            mixed.extend(more);
        }
        let mut identities = Vec::new();
        for (i, j) in (1..=n).cartesian_product(1..=n).filter(|(i, j)| i != j) {
            let fij = Form::dx_dy(n, i, j);
            let e = rotation_j(n, j)?.pullback(&fij)?;
            let e_prime = rotation_j(n, i)?.pullback(&fij)?;
            span.add(&e);
            span.add(&e_prime);
            let (lo, hi) = (i.min(j), i.max(j));
            let sign = if i < j { int(1) } else { int(-1) };
            identities.push((
                format!("rotation_{j}^*(dx{i}^dy{j}) = dx{i}^dx{j}"),
                e == Form::dx_dx(n, lo, hi).scale(&sign),
            ));
            identities.push((
                format!("rotation_{i}^*(dx{i}^dy{j}) = -dy{i}^dy{j}"),
                e_prime == Form::dy_dy(n, lo, hi).scale(&-sign),
            ));
        }
        steps.push(ProofStep {
            name: "F_rs implies all E_ij and E'_ij",
            identities,
            reached: covers(&span, &all_e),
        });
    }

    // E_rs ⟹ E'_rs, then α_i = dx_r^dy_r - dx_i^dy_i via the hyperbolic
    // shear, the average recovers dx_r^dy_r, and swaps give every F_i.
    {
        let seed = Form::dx_dx(n, r.min(s), r.max(s));
        let mut span = StepSpan::new(n, &seed)?;
        let mut identities = Vec::new();
        let both = rotation_j(n, r)?.into_map().compose(rotation_j(n, s)?.map())?;
        let flipped = seed.pullback(&both)?;
        span.add(&flipped);
        identities.push((
            format!("rotation_{r}^* rotation_{s}^* (dx^dx) = dy^dy on planes {r},{s}"),
            flipped == Form::dy_dy(n, r.min(s), r.max(s)),
        ));
        // Move E_rs to every E_ri by swapping plane s with plane i.
        let mut e_forms = vec![seed.clone(), flipped];
        for i in (1..=n).filter(|&i| i != r && i != s) {
            let sw = plane_swap(n, s, i)?;
            let moved = span.close_under(&e_forms[..2], &[sw])?;
            e_forms.extend(moved);
        }
        let mut alphas = Vec::new();
        for i in 1..=n {
            if i == r {
                alphas.push(Form::zero(n, 2));
                continue;
            }
            let h = hyperbolic_shear(n, r, i)?;
            let dxdx = Form::dx_dx(n, r, i);
            let dydy = Form::dy_dy(n, r, i);
            let image = h.pullback(&dxdx)?;
            span.add(&image);
            let lhs = &(&image - &dxdx) + &dydy;
            let alpha_i = &Form::dx_dy(n, r, r) - &Form::dx_dy(n, i, i);
            identities.push((
                format!("f^*(dx{r}^dx{i}) - dx{r}^dx{i} + dy{r}^dy{i} = dx{r}^dy{r} - dx{i}^dy{i}"),
                lhs == alpha_i,
            ));
            alphas.push(alpha_i);
        }
        let omega = standard_symplectic_form(n)?;
        let mut total = omega.clone();
        for a in &alphas {
            total += a;
        }
        let average = total.scale(&ratio(1, n as i64));
        identities.push((
            format!("(1/{n})(α_1 + … + α_{n} + ω) = dx{r}^dy{r}"),
            average == Form::dx_dy(n, r, r),
        ));
        let swaps = span.all_swaps()?;
        span.close_under(&[average], &swaps)?;
        steps.push(ProofStep {
            name: "E_rs implies all F_i",
            identities,
            reached: covers(&span, &all_fi),
        });
    }
    Ok(steps)
}

pub fn span_proof_report(n: usize) -> Result<CheckReport> {
    let (r, s) = (1, 2);
    let steps = span_proof_steps(n, r, s)?;
    let passed = steps.iter().all(ProofStep::passed);
    let witness: Vec<Value> = steps
        .iter()
        .map(|st| {
            json!({
                "step": st.name,
                "reached": st.reached,
                "identities": st.identities.iter().map(|(text, ok)| json!({ "identity": text, "holds": ok })).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(CheckReport::new(
        "orbit_span.proof_steps",
        json!({ "n": n, "r": r, "s": s }),
        passed,
        Some(Value::Array(witness)),
    ))
}

/// `T = seed ∘ word`, so `ω_T = word^*(seed^* ω)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMember {
    pub seed: usize,
    pub word: Vec<Generator>,
    pub form: Form,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LargeFamily {
    pub n: usize,
    pub seeds: Vec<LinearMap>,
    pub members: Vec<FamilyMember>,
    /// Rank of `span{ω_i^{n-1}}`.
    pub rank: usize,
    pub target: usize,
}

impl LargeFamily {
    pub fn is_complete(&self) -> bool {
        self.rank == self.target
    }

    /// Every member satisfies `ω_i^n = ω^n`.
    pub fn volumes_match(&self) -> Result<bool> {
        let top = standard_symplectic_form(self.n)?.power(self.n);
        Ok(self.members.iter().all(|m| m.form.power(self.n) == top))
    }

    /// Recomputes each member from its seed and word.
    pub fn members_reproduce(&self) -> Result<bool> {
        let omega = standard_symplectic_form(self.n)?;
        for m in &self.members {
            let t = self.seeds[m.seed].compose(&word_map(self.n, &m.word)?)?;
            if omega.pullback(&t)? != m.form {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `swap(p, n) ∘ f ∘ swap(p, n)` for each plane `p`, where `f` is the
/// volume-preserving diagonal with `2` on every coordinate except
/// `y_n ↦ 2^{1-2n} y_n`.
pub fn default_family_pool(n: usize) -> Result<Vec<LinearMap>> {
    let s = int(2);
    let mut diag = vec![s.clone(); 2 * n];
    diag[2 * n - 1] = crate::scalar::pow(&s, 1 - 2 * n as i64);
    let f = LinearMap::diagonal(n, diag)?;
    (1..=n)
        .map(|p| {
            if p == n {
                return Ok(f.clone());
            }
            let sw = plane_swap(n, p, n)?.into_map();
            sw.compose(&f)?.compose(&sw)
        })
        .collect()
}

/// Greedy breadth-first search over `seed ∘ word` for forms whose
/// `(n-1)`-st powers raise the rank, up to words of length `budget`.
pub fn construct_large_family(n: usize, pool: Option<Vec<LinearMap>>, budget: usize) -> Result<LargeFamily> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: n });
    }
    let seeds = match pool {
        Some(p) if p.is_empty() => return Err(Error::InvalidArgument("seed pool is empty".into())),
        Some(p) => p,
        None => default_family_pool(n)?,
    };
    let omega = standard_symplectic_form(n)?;
    let top = omega.power(n);
    let mut start = Vec::with_capacity(seeds.len());
    for (i, s) in seeds.iter().enumerate() {
        if s.n() != n {
            return Err(Error::DimensionMismatch { left: n, right: s.n() });
        }
        let form = omega.pullback(s)?;
        if form.power(n) != top {
            return Err(Error::NotVolumePreserving(format!("seed {i} changes ω^n")));
        }
        start.push(FamilyMember {
            seed: i,
            word: Vec::new(),
            form,
        });
    }
    let catalog: Vec<(Generator, SymplecticMatrix)> = generator_catalog(n)
        .into_iter()
        .map(|g| g.matrix(n).map(|m| (g, m)))
        .collect::<Result<_>>()?;
    let basis = Basis::new(2 * n, 2 * n - 2);
    let target = basis.len();
    let mut span = SpanBasis::new(target);
    let mut members = Vec::new();
    let mut seen: HashSet<Form> = HashSet::new();
    let mut frontier: Vec<FamilyMember> = Vec::new();
    for m in start {
        if seen.insert(m.form.clone()) {
            frontier.push(m);
        }
    }
    let mut length = 0;
    loop {
        // Powers are computed in parallel; rank updates stay in BFS order.
        let powers: Vec<Vec<Scalar>> = frontier
            .par_iter()
            .map(|m| m.form.power(n - 1).to_coords(&basis))
            .collect();
        for (m, p) in frontier.iter().zip(&powers) {
            if span.is_full() {
                break;
            }
            if span.insert(p) {
                members.push(m.clone());
            }
        }
        if span.is_full() || length == budget {
            break;
        }
        let next: Vec<Vec<FamilyMember>> = frontier
            .par_iter()
            .map(|m| {
                catalog
                    .iter()
                    .map(|(g, t)| {
                        let mut word = m.word.clone();
                        word.push(g.clone());
                        Ok(FamilyMember {
                            seed: m.seed,
                            word,
                            form: t.pullback(&m.form)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        frontier = next
            .into_iter()
            .flatten()
            .filter(|m| seen.insert(m.form.clone()))
            .collect();
        length += 1;
    }
    Ok(LargeFamily {
        n,
        seeds,
        members,
        rank: span.rank(),
        target,
    })
}

pub fn large_family_report(n: usize, budget: usize) -> Result<CheckReport> {
    let family = construct_large_family(n, None, budget)?;
    let volumes = family.volumes_match()?;
    let reproduce = family.members_reproduce()?;
    let members: Vec<Value> = family
        .members
        .iter()
        .map(|m| json!({ "seed": m.seed, "word": word_to_value(&m.word), "form": form_to_value(&m.form) }))
        .collect();
    Ok(CheckReport::new(
        "large_family",
        json!({ "n": n, "budget": budget }),
        family.is_complete() && volumes && reproduce,
        Some(json!({
            "rank": family.rank,
            "target": family.target,
            "volumes_match": volumes,
            "members_reproduce": reproduce,
            "members": members,
        })),
    ))
}

/// `dim ⋀^2`; the orbit-span target.
pub fn two_form_dimension(n: usize) -> usize {
    binomial(2 * n, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_symplectic() {
        for n in 1..=4 {
            for g in generator_catalog(n) {
                assert!(g.matrix(n).is_ok(), "{g}");
            }
        }
        let bad = LinearMap::diagonal(1, vec![int(2), int(1)]).unwrap();
        assert!(matches!(SymplecticMatrix::new(bad), Err(Error::NotSymplectic(_))));
    }

    #[test]
    fn torus_examples() {
        let id = torus_element(&[int(1), int(1)]).unwrap();
        assert!(id.map().is_identity());
        let t = torus_element(&[int(2), int(1)]).unwrap();
        assert_eq!(t.pullback(&Form::dx_dy(2, 1, 1)).unwrap(), Form::dx_dy(2, 1, 1));
        assert_eq!(
            t.pullback(&Form::dx_dx(2, 1, 2)).unwrap(),
            Form::dx_dx(2, 1, 2).scale(&int(2))
        );
        assert!(torus_element(&[int(0), int(1)]).is_err());
    }

    #[test]
    fn swap_and_rotation_examples() {
        let sw = plane_swap(2, 1, 2).unwrap();
        assert_eq!(sw.pullback(&Form::dx_dy(2, 1, 1)).unwrap(), Form::dx_dy(2, 2, 2));
        assert!(sw.map().compose(sw.map()).unwrap().is_identity());
        assert!(plane_swap(2, 1, 1).is_err());
        let rot = rotation_j(3, 2).unwrap();
        assert!(rot.map().pow(4).is_identity());
        assert_eq!(rot.pullback(&Form::dx_dy(3, 1, 2)).unwrap(), Form::dx_dx(3, 1, 2));
    }

    #[test]
    fn shear_identities() {
        let f = shear_f_ij(3, 1, 2).unwrap();
        let d = Form::dx_dy(3, 1, 1);
        assert_eq!(&f.pullback(&d).unwrap() - &d, Form::dx_dy(3, 1, 2));
        let m = f.map();
        let changed: Vec<_> = (1..=6)
            .cartesian_product(1..=6)
            .filter(|&(r, c)| m.entry(r, c) != &int(i64::from(r == c)))
            .collect();
        assert_eq!(changed, vec![(2, 1), (4, 5)]);
        assert!(shear_f_ij(3, 2, 2).is_err());

        let h = hyperbolic_shear(3, 1, 2).unwrap();
        let lhs = &(&h.pullback(&Form::dx_dx(3, 1, 2)).unwrap() - &Form::dx_dx(3, 1, 2)) + &Form::dy_dy(3, 1, 2);
        assert_eq!(lhs, &Form::dx_dy(3, 1, 1) - &Form::dx_dy(3, 2, 2));
    }

    #[test]
    fn weights() {
        let w = weight_decompose(&standard_symplectic_form(3).unwrap()).unwrap();
        assert!((1..=3).all(|i| w.get(WeightLabel::Fi(i)) == int(1)));
        assert_eq!(w.components.len(), 3);
        assert_eq!(w.classes(), vec!["F"]);
        let a = &Form::dx_dx(2, 1, 2) + &Form::dy_dy(2, 1, 2).scale(&int(2));
        let w = weight_decompose(&a).unwrap();
        assert_eq!(w.get(WeightLabel::E(1, 2)), int(1));
        assert_eq!(w.get(WeightLabel::EPrime(1, 2)), int(2));
        assert_eq!(w.reassemble(), a);
        assert!(weight_decompose(&Form::dx(2, 1)).is_err());
    }

    #[test]
    fn generator_json_round_trip() {
        for g in generator_catalog(2) {
            assert_eq!(Generator::from_value(&g.to_value()).unwrap(), g);
        }
        assert_eq!(
            Generator::Torus(vec![int(2), ratio(1, 2)]).to_value().to_string(),
            r#"{"gen":"torus","args":["2","1/2"]}"#
        );
        assert!(Generator::from_value(&json!({"gen": "spin", "args": []})).is_err());
    }

    #[test]
    fn word_convention() {
        let word = vec![Generator::Shear(1, 2), Generator::Rotation(2)];
        let t = word_map(2, &word).unwrap();
        let a = Form::dx_dy(2, 1, 1);
        let stepwise = rotation_j(2, 2)
            .unwrap()
            .pullback(&shear_f_ij(2, 1, 2).unwrap().pullback(&a).unwrap())
            .unwrap();
        assert_eq!(a.pullback(&t).unwrap(), stepwise);
    }

    #[test]
    fn orbit_span_examples() {
        let a = &Form::dx_dy(2, 1, 1) - &Form::dx_dy(2, 2, 2);
        let r = orbit_span(&a, 3).unwrap();
        assert!(r.is_full());
        assert_eq!(r.target, 6);
        let b = &standard_symplectic_form(3).unwrap() + &Form::dx_dx(3, 1, 2);
        assert!(orbit_span(&b, 4).unwrap().is_full());
        let two_omega = standard_symplectic_form(3).unwrap().scale(&int(2));
        assert!(matches!(orbit_span(&two_omega, 2), Err(Error::ProportionalToOmega)));
        assert!(matches!(
            orbit_span(&Form::dx_dx(3, 1, 2), 2),
            Err(Error::DegenerateForm)
        ));
    }

    #[test]
    fn proof_steps_hold() {
        for n in 2..=4 {
            for st in span_proof_steps(n, 1, 2).unwrap() {
                assert!(st.passed(), "n={n}: {st:?}");
            }
        }
        assert!(span_proof_report(3).unwrap().passed());
    }

    #[test]
    fn large_family_small() {
        for n in 2..=3 {
            let fam = construct_large_family(n, None, 4).unwrap();
            assert!(fam.is_complete(), "n={n}: rank {}", fam.rank);
            assert!(fam.volumes_match().unwrap());
            assert!(fam.members_reproduce().unwrap());
        }
        let symplectic_only = vec![LinearMap::identity(2)];
        let fam = construct_large_family(2, Some(symplectic_only), 3).unwrap();
        assert!(!fam.is_complete());
        assert_eq!(fam.rank, 1);
        let bad = vec![LinearMap::diagonal(2, vec![int(2); 4]).unwrap()];
        assert!(matches!(
            construct_large_family(2, Some(bad), 1),
            Err(Error::NotVolumePreserving(_))
        ));
    }
}
