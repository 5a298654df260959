//! Injectivity of `α ↦ ω^{k-1} ^ α` on 2-forms, by exact rank and by an
//! elimination certificate on a symbolic 2-form
//!
//! ```text
//! α = Σ_{i<j} a_ij dx_i^dx_j + Σ_{i,j} b_ij dx_i^dy_j + Σ_{i<j} c_ij dy_i^dy_j
//! ```
//!
//! The certificate kills `a_ij`, `c_ij` and the off-diagonal `b_ij` through
//! monomials `dx_i^dx_j^dx_I^dy_I` (and their `dy`/mixed analogues) in which
//! exactly one unknown survives, then derives relations between the
//! diagonal `b_ii`: pairwise `b_ll = -b_kk` when `n = 3`, and
//! `b_ii = -(k-1) b_jj` for `n ≥ 4` by contracting with `∂/∂x_i` and
//! recursing to `(n-1, k-1)`. A three-step chain of relations forces every
//! `b_ii` to zero.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::form::{standard_symplectic_form, Form};
use crate::index::{binomial, Basis, MultiIndex};
use crate::lefschetz::{matrix_at, Operator};
use crate::linalg::Matrix;
use crate::linear_map::Vector;
use crate::metric::CompatibleTriple;
use crate::report::CheckReport;
use crate::scalar::{format_scalar, int, Scalar};

/// Matrix of `α ↦ ω^{k-1} ^ α` on `⋀^2`.
pub fn wedge_power_matrix(n: usize, k: usize) -> Result<Matrix> {
    let triple = CompatibleTriple::standard(n)?;
    matrix_at(&Operator::LPow(k - 1), 2, &triple)
}

fn check_dimensions(n: usize, k: usize, min_n: usize) -> Result<()> {
    if n < min_n {
        return Err(Error::DimensionTooSmall { min: min_n, got: n });
    }
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "k must satisfy 0 < k ≤ n, got k={k}, n={n}"
        )));
    }
    Ok(())
}

/// Kernel dimension of `α ↦ ω^{k-1} ^ α` on `⋀^2` by exact rank. Passes when
/// the kernel is zero for `k < n` and has dimension `C(2n,2) - 1` for `k = n`.
/// `n = 2` is accepted and flagged trivial.
pub fn verify_injectivity(n: usize, k: usize) -> Result<CheckReport> {
    check_dimensions(n, k, 2)?;
    let rank = wedge_power_matrix(n, k)?.rank();
    let dim = binomial(2 * n, 2);
    let kernel = dim - rank;
    let expected = if k < n { 0 } else { dim - 1 };
    Ok(CheckReport::new(
        "injectivity.rank",
        json!({ "n": n, "k": k }),
        kernel == expected,
        Some(json!({
            "rank": rank,
            "kernel_dim": kernel,
            "expected_kernel_dim": expected,
            "contrast_case": k == n,
            "trivial": n == 2,
        })),
    ))
}

/// Checks `ker(^ω^{k-1}) ⊆ ker(^ω^{n-1})` on `⋀^2`.
pub fn kernel_chain_check(n: usize, k: usize) -> Result<CheckReport> {
    check_dimensions(n, k, 2)?;
    let left = wedge_power_matrix(n, k)?;
    let right = wedge_power_matrix(n, n)?;
    let kernel = left.kernel_basis();
    let escaped = kernel
        .iter()
        .position(|v| right.mul_vec(v).iter().any(|c| !c.is_zero()));
    Ok(CheckReport::new(
        "injectivity.kernel_chain",
        json!({ "n": n, "k": k }),
        escaped.is_none(),
        Some(json!({
            "left_kernel_dim": kernel.len(),
            "right_kernel_dim": right.nullity(),
            "first_escaping_vector": escaped,
        })),
    ))
}

/// An unknown coefficient of the symbolic 2-form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Unknown {
    /// `dx_i ^ dx_j`, `i < j`.
    A(usize, usize),
    /// `dx_i ^ dy_j`.
    B(usize, usize),
    /// `dy_i ^ dy_j`, `i < j`.
    C(usize, usize),
}

impl Unknown {
    fn monomial(self, n: usize) -> Form {
        match self {
            Unknown::A(i, j) => Form::dx_dx(n, i, j),
            Unknown::B(i, j) => Form::dx_dy(n, i, j),
            Unknown::C(i, j) => Form::dy_dy(n, i, j),
        }
    }

    fn all(n: usize) -> Vec<Unknown> {
        let pairs: Vec<_> = (1..=n).tuple_combinations().collect();
        let mut out: Vec<_> = pairs.iter().map(|&(i, j)| Unknown::A(i, j)).collect();
        out.extend((1..=n).cartesian_product(1..=n).map(|(i, j)| Unknown::B(i, j)));
        out.extend(pairs.iter().map(|&(i, j)| Unknown::C(i, j)));
        out
    }
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, i, j) = match *self {
            Unknown::A(i, j) => ('a', i, j),
            Unknown::B(i, j) => ('b', i, j),
            Unknown::C(i, j) => ('c', i, j),
        };
        if i < 10 && j < 10 {
            write!(f, "{name}_{i}{j}")
        } else {
            write!(f, "{name}_{i},{j}")
        }
    }
}

/// `Σ_u u · forms[u]`, linear in the unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
struct SymbolicForm {
    forms: BTreeMap<Unknown, Form>,
}

impl SymbolicForm {
    fn map(&self, mut f: impl FnMut(&Form) -> Result<Form>) -> Result<SymbolicForm> {
        let forms = self
            .forms
            .iter()
            .map(|(u, form)| Ok((*u, f(form)?)))
            .collect::<Result<_>>()?;
        Ok(SymbolicForm { forms })
    }

    /// Linear equation carried by one monomial.
    fn coefficient(&self, idx: &MultiIndex) -> BTreeMap<Unknown, Scalar> {
        self.forms
            .iter()
            .map(|(u, f)| (*u, f.coefficient(idx)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    fn support(&self) -> BTreeSet<MultiIndex> {
        self.forms.values().flat_map(|f| f.terms().keys().cloned()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub kind: &'static str,
    pub statement: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monomial: Option<Vec<usize>>,
}

impl TraceStep {
    fn new(kind: &'static str, statement: String, monomial: Option<&MultiIndex>) -> Self {
        TraceStep {
            kind,
            statement,
            monomial: monomial.map(MultiIndex::to_vec),
        }
    }
}

/// Monomial whose equation failed to force the expected conclusion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateFailure {
    pub step: String,
    pub monomial: Option<Vec<usize>>,
    pub equation: String,
}

fn render_equation(eq: &BTreeMap<Unknown, Scalar>) -> String {
    if eq.is_empty() {
        return "0 = 0".into();
    }
    let lhs = eq
        .iter()
        .map(|(u, c)| format!("({}) {u}", format_scalar(c)))
        .join(" + ");
    format!("{lhs} = 0")
}

/// Renders `c · u` as `u`, `-u` or `c u`.
fn scaled(c: &Scalar, u: Unknown) -> String {
    if c.is_one() {
        format!("{u}")
    } else if (-c).is_one() {
        format!("-{u}")
    } else {
        format!("{} {u}", format_scalar(c))
    }
}

/// Lexicographically smallest `size`-subset of `1..=n` avoiding `avoid`.
fn disjoint_set(n: usize, size: usize, avoid: &[usize]) -> Option<Vec<usize>> {
    let free: Vec<_> = (1..=n).filter(|i| !avoid.contains(i)).collect();
    (free.len() >= size).then(|| free[..size].to_vec())
}

/// Sorted index of `dx_{xs} ^ dy_{ys}`, ignoring sign.
fn monomial_index(n: usize, xs: &[usize], ys: &[usize]) -> MultiIndex {
    let mut all: Vec<_> = xs.iter().copied().chain(ys.iter().map(|j| n + j)).collect();
    all.sort_unstable();
    MultiIndex::new(&all, 2 * n).expect("distinct indices in range")
}

/// `b_ii` and `b_jj` are tied by `b_ii = factor · b_jj`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalRelation {
    pub i: usize,
    pub j: usize,
    #[serde(serialize_with = "serialize_scalar")]
    pub factor: Scalar,
}

fn serialize_scalar<S: serde::Serializer>(value: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_scalar(value))
}

impl fmt::Display for DiagonalRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = {}",
            Unknown::B(self.i, self.i),
            scaled(&self.factor, Unknown::B(self.j, self.j))
        )
    }
}

/// Replayed elimination for one `(n, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelCertificate {
    pub n: usize,
    pub k: usize,
    pub trace: Vec<TraceStep>,
    pub relations: Vec<DiagonalRelation>,
    /// The three-step relation chain returning to `b_11`.
    pub chain: Option<String>,
}

struct Elimination {
    n: usize,
    k: usize,
    trace: Vec<TraceStep>,
    zero: BTreeSet<Unknown>,
}

impl Elimination {
    fn fail(&self, step: String, monomial: Option<&MultiIndex>, eq: &BTreeMap<Unknown, Scalar>) -> CertificateFailure {
        CertificateFailure {
            step,
            monomial: monomial.map(MultiIndex::to_vec),
            equation: render_equation(eq),
        }
    }

    fn live(&self, mut eq: BTreeMap<Unknown, Scalar>) -> BTreeMap<Unknown, Scalar> {
        eq.retain(|u, _| !self.zero.contains(u));
        eq
    }

    /// The equation on `idx` must involve `target` alone once known zeros are dropped.
    fn kill(&mut self, product: &SymbolicForm, target: Unknown, idx: &MultiIndex) -> Result<(), CertificateFailure> {
        let eq = self.live(product.coefficient(idx));
        if eq.len() != 1 || !eq.contains_key(&target) {
            return Err(self.fail(format!("eliminate {target}"), Some(idx), &eq));
        }
        self.zero.insert(target);
        self.trace.push(TraceStep::new(
            "eliminate",
            format!("{target} = 0 (sole unknown on this monomial)"),
            Some(idx),
        ));
        Ok(())
    }

    /// Steps (i) and (ii): everything but the diagonal `b_ii` vanishes.
    fn off_diagonal(&mut self, product: &SymbolicForm) -> Result<(), CertificateFailure> {
        let (n, size) = (self.n, self.k - 1);
        for (i, j) in (1..=n).tuple_combinations() {
            let set = disjoint_set(n, size, &[i, j]).expect("k - 1 ≤ n - 2");
            let xs: Vec<_> = [i, j].into_iter().chain(set.iter().copied()).collect();
            self.kill(product, Unknown::A(i, j), &monomial_index(n, &xs, &set))?;
        }
        for (i, j) in (1..=n).tuple_combinations() {
            let set = disjoint_set(n, size, &[i, j]).expect("k - 1 ≤ n - 2");
            let ys: Vec<_> = [i, j].into_iter().chain(set.iter().copied()).collect();
            self.kill(product, Unknown::C(i, j), &monomial_index(n, &set, &ys))?;
        }
        for (r, s) in (1..=n).cartesian_product(1..=n).filter(|(r, s)| r != s) {
            let set = disjoint_set(n, size, &[r, s]).expect("k - 1 ≤ n - 2");
            let xs: Vec<_> = std::iter::once(r).chain(set.iter().copied()).collect();
            let ys: Vec<_> = std::iter::once(s).chain(set.iter().copied()).collect();
            self.kill(product, Unknown::B(r, s), &monomial_index(n, &xs, &ys))?;
        }
        Ok(())
    }

    /// Base case `n = 3, k = 2`: `dx_k^dy_k^dx_l^dy_l` carries `b_kk + b_ll`.
    fn pair_relations(&mut self, product: &SymbolicForm) -> Result<Vec<DiagonalRelation>, CertificateFailure> {
        let mut out = Vec::new();
        for (k, l) in (1..=self.n).tuple_combinations() {
            let idx = monomial_index(self.n, &[k, l], &[k, l]);
            let eq = self.live(product.coefficient(&idx));
            let (bk, bl) = (Unknown::B(k, k), Unknown::B(l, l));
            let balanced = eq.len() == 2 && matches!((eq.get(&bk), eq.get(&bl)), (Some(p), Some(q)) if p == q);
            if !balanced {
                return Err(self.fail(format!("relate {bk} and {bl}"), Some(&idx), &eq));
            }
            let rel = DiagonalRelation {
                i: l,
                j: k,
                factor: int(-1),
            };
            self.trace.push(TraceStep::new("relation", rel.to_string(), Some(&idx)));
            out.push(rel);
            out.push(DiagonalRelation {
                i: k,
                j: l,
                factor: int(-1),
            });
        }
        Ok(out)
    }

    /// Inductive step for plane `i`: contract by `∂/∂x_i`, split off `dy_i`,
    /// and apply the `(n-1, k-1)` case to the remainder.
    fn contraction_relations(&mut self, i: usize, omega: &Form) -> Result<Vec<DiagonalRelation>, CertificateFailure> {
        let (n, k) = (self.n, self.k);
        let err = |e: Error| CertificateFailure {
            step: format!("contraction by d/dx_{i}"),
            monomial: None,
            equation: e.to_string(),
        };
        let f = int(k as i64 - 1);
        let diagonal = SymbolicForm {
            forms: (1..=n).map(|j| (Unknown::B(j, j), Form::dx_dy(n, j, j))).collect(),
        };
        let w_k1 = omega.power(k - 1);
        let w_k2 = omega.power(k - 2);
        let x = Vector::e(n, i);
        let lhs = diagonal.map(|a| a.wedge(&w_k1)?.interior(&x)).map_err(err)?;
        // b_ii ω + (k-1) α
        let combined = diagonal.map(|a| Ok(a.scale(&f))).map_err(err)?;
        let mut combined = combined;
        let own = combined.forms.get_mut(&Unknown::B(i, i)).expect("diagonal unknown");
        *own = &*own + omega;
        let dy = Form::dy(n, i);
        let rhs = combined.map(|c| dy.wedge(c)?.wedge(&w_k2)).map_err(err)?;
        if lhs != rhs {
            let idx = lhs
                .support()
                .union(&rhs.support())
                .find(|m| lhs.coefficient(m) != rhs.coefficient(m))
                .cloned();
            let eq = lhs.coefficient(idx.as_ref().expect("forms differ"));
            return Err(self.fail(format!("Leibniz step for d/dx_{i}"), idx.as_ref(), &eq));
        }
        self.trace.push(TraceStep::new(
            "contraction",
            format!(
                "i_{{d/dx_{i}}}(ω^{} ^ α) = dy_{i} ^ (b_{i}{i} ω + {} α) ^ ω^{}",
                k - 1,
                k - 1,
                k - 2
            ),
            None,
        ));

        let off_plane = |form: &Form| form.filter_terms(|idx| !idx.contains(i) && !idx.contains(n + i));
        let alpha_1 = combined.map(|c| Ok(off_plane(c))).map_err(err)?;
        let omega_1 = off_plane(&w_k2);
        let split = alpha_1.map(|a| dy.wedge(a)?.wedge(&omega_1)).map_err(err)?;
        if split != rhs {
            return Err(self.fail(format!("dy_{i} split for d/dx_{i}"), None, &BTreeMap::new()));
        }
        let reduced_omega = drop_plane(&omega_1, i).map_err(err)?;
        if reduced_omega != standard_symplectic_form(n - 1).map_err(err)?.power(k - 2) {
            return Err(self.fail(format!("reduced ω^{} for plane {i}", k - 2), None, &BTreeMap::new()));
        }
        self.trace.push(TraceStep::new(
            "induction",
            format!(
                "α_{i} ^ ω_{i}^{} = 0 on R^{}, so α_{i} = 0 by the case (n, k) = ({}, {})",
                k - 2,
                2 * n - 2,
                n - 1,
                k - 1
            ),
            None,
        ));

        let mut out = Vec::new();
        for idx in alpha_1.support() {
            let eq = alpha_1.coefficient(&idx);
            let (bi, pos) = (Unknown::B(i, i), idx.to_vec());
            let j = pos[0];
            let diagonal_pair = pos.len() == 2 && pos[1] == n + j && j != i;
            let bj = Unknown::B(j, j);
            let shaped =
                diagonal_pair && eq.len() == 2 && eq.get(&bi).is_some_and(One::is_one) && eq.get(&bj) == Some(&f);
            if !shaped {
                return Err(self.fail(format!("coefficient of α_{i}"), Some(&idx), &eq));
            }
            let rel = DiagonalRelation {
                i,
                j,
                factor: -f.clone(),
            };
            self.trace.push(TraceStep::new("relation", rel.to_string(), Some(&idx)));
            out.push(rel);
        }
        Ok(out)
    }
}

/// Relabels a form on `R^{2n}` not involving plane `i` to `R^{2n-2}`.
fn drop_plane(form: &Form, i: usize) -> Result<Form> {
    let n = form.n();
    let shift = |c: usize| -> usize {
        let (plane, is_y) = if c > n { (c - n, true) } else { (c, false) };
        let p = if plane > i { plane - 1 } else { plane };
        if is_y {
            p + n - 1
        } else {
            p
        }
    };
    if form.involves(i) || form.involves(n + i) {
        return Err(Error::InvalidArgument(format!("form involves plane {i}")));
    }
    let terms = form
        .terms()
        .iter()
        .map(|(idx, c)| {
            let mapped: Vec<_> = idx.iter().map(shift).collect();
            Ok((MultiIndex::new(&mapped, 2 * n - 2)?, c.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    Form::from_terms(n - 1, form.degree(), terms)
}

fn chain_statement(relations: &[DiagonalRelation]) -> Option<(String, Scalar)> {
    let find = |i, j| {
        relations
            .iter()
            .find(|r| r.i == i && r.j == j)
            .map(|r| r.factor.clone())
    };
    let (f12, f23, f31) = (find(1, 2)?, find(2, 3)?, find(3, 1)?);
    let c2 = f12;
    let c3 = &c2 * &f23;
    let c1 = &c3 * &f31;
    let text = format!(
        "b_11 = {} = {} = {}",
        scaled(&c2, Unknown::B(2, 2)),
        scaled(&c3, Unknown::B(3, 3)),
        scaled(&c1, Unknown::B(1, 1)),
    );
    Some((text, c1))
}

/// Replays the elimination for `(n, k)` with `n ≥ 3` and `0 < k < n`.
pub fn certify_kernel(n: usize, k: usize) -> Result<std::result::Result<KernelCertificate, CertificateFailure>> {
    if n < 3 {
        return Err(Error::DimensionTooSmall { min: 3, got: n });
    }
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!(
            "the certificate needs 0 < k < n, got k={k}, n={n}"
        )));
    }
    let mut run = Elimination {
        n,
        k,
        trace: Vec::new(),
        zero: BTreeSet::new(),
    };
    if k == 1 {
        run.trace
            .push(TraceStep::new("trivial", "k = 1: ω^0 ^ α = α".into(), None));
        return Ok(Ok(KernelCertificate {
            n,
            k,
            trace: run.trace,
            relations: Vec::new(),
            chain: None,
        }));
    }
    let omega = standard_symplectic_form(n)?;
    let power = omega.power(k - 1);
    let product = SymbolicForm {
        forms: Unknown::all(n)
            .into_iter()
            .map(|u| Ok((u, u.monomial(n).wedge(&power)?)))
            .collect::<Result<_>>()?,
    };
    if let Err(f) = run.off_diagonal(&product) {
        return Ok(Err(f));
    }

    let relations = if n == 3 {
        match run.pair_relations(&product) {
            Ok(r) => r,
            Err(f) => return Ok(Err(f)),
        }
    } else {
        if let Err(f) = certify_kernel(n - 1, k - 1)? {
            return Ok(Err(CertificateFailure {
                step: format!("induction hypothesis ({}, {}): {}", n - 1, k - 1, f.step),
                ..f
            }));
        }
        let mut all = Vec::new();
        for i in 1..=n {
            match run.contraction_relations(i, &omega) {
                Ok(r) => all.extend(r),
                Err(f) => return Ok(Err(f)),
            }
        }
        all
    };

    let Some((chain, factor)) = chain_statement(&relations) else {
        return Ok(Err(CertificateFailure {
            step: "relation chain".into(),
            monomial: None,
            equation: "missing relation among b_11, b_22, b_33".into(),
        }));
    };
    if factor.is_one() {
        return Ok(Err(CertificateFailure {
            step: "relation chain".into(),
            monomial: None,
            equation: format!("{chain} does not force b_11 = 0"),
        }));
    }
    run.trace.push(TraceStep::new("chain", chain.clone(), None));
    let every_b_reached = (2..=n).all(|j| relations.iter().any(|r| r.i == 1 && r.j == j || r.i == j && r.j == 1));
    if !every_b_reached {
        return Ok(Err(CertificateFailure {
            step: "conclusion".into(),
            monomial: None,
            equation: "some b_ii is not related to b_11".into(),
        }));
    }
    run.trace.push(TraceStep::new(
        "conclusion",
        "b_11 = 0, hence every b_ii = 0 and α = 0".into(),
        None,
    ));
    Ok(Ok(KernelCertificate {
        n,
        k,
        trace: run.trace,
        relations,
        chain: Some(chain),
    }))
}

/// The elimination certificate as a report; passes when the elimination
/// reaches `α = 0` and the rank route also finds a zero kernel.
pub fn proof_certificate_kernel(n: usize, k: usize) -> Result<CheckReport> {
    let certificate = certify_kernel(n, k)?;
    let kernel = binomial(2 * n, 2) - wedge_power_matrix(n, k)?.rank();
    let params = json!({ "n": n, "k": k });
    Ok(match certificate {
        Ok(cert) => CheckReport::new(
            "injectivity.certificate",
            params,
            kernel == 0,
            Some(json!({
                "trace": cert.trace,
                "chain": cert.chain,
                "rank_kernel_dim": kernel,
            })),
        ),
        Err(failure) => CheckReport::new(
            "injectivity.certificate",
            params,
            false,
            Some(json!({ "failure": failure, "rank_kernel_dim": kernel })),
        ),
    })
}

/// Coordinates of `ω^{k-1} ^ α` for a concrete `α`, used by the tests as a
/// direct evaluation of the map.
pub fn apply_wedge_power(alpha: &Form, k: usize) -> Result<Vec<Scalar>> {
    let n = alpha.n();
    let image = standard_symplectic_form(n)?.power(k - 1).wedge(alpha)?;
    Ok(image.to_coords(&Basis::new(2 * n, 2 * k)))
}
