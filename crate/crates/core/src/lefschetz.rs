//! The Lefschetz operators `L`, `Λ`, `H`, their exact matrices, primitive
//! subspaces and the primitive decomposition.
//!
//! `Λ` is available three ways: as the `g`-adjoint of `L` (Gram matrices),
//! as `*⁻¹ L *`, and as the contraction `Σ_{a<b} ω_ab ι_{(e^b)♯} ι_{(e^a)♯}`.
//! The first is the definition used by [`operator_matrix`]; the others are
//! independent routes for cross-checks.
//!
//! Operator matrices act on coordinates in the lexicographic monomial bases
//! of [`crate::index::Basis`]. Degrees outside `0..=2n` name the zero space,
//! so compositions such as `L ∘ Λ` on `⋀^1` have the right (zero) shape.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::form::Form;
use crate::index::{binomial, Basis};
use crate::linalg::Matrix;
use crate::metric::CompatibleTriple;
use crate::scalar::{int, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Operator {
    /// `L^i`; `L^1` is the Lefschetz operator.
    LPow(usize),
    Lambda,
    H,
    Star,
    /// `outer ∘ inner`.
    Compose(Box<Operator>, Box<Operator>),
}

impl Operator {
    pub const L: Operator = Operator::LPow(1);

    pub fn then(self, outer: Operator) -> Operator {
        Operator::Compose(Box::new(outer), Box::new(self))
    }

    pub fn compose(outer: Operator, inner: Operator) -> Operator {
        Operator::Compose(Box::new(outer), Box::new(inner))
    }

    pub fn target_degree(&self, k: isize, n: usize) -> isize {
        match self {
            Operator::LPow(i) => k + 2 * *i as isize,
            Operator::Lambda => k - 2,
            Operator::H => k,
            Operator::Star => 2 * n as isize - k,
            Operator::Compose(outer, inner) => outer.target_degree(inner.target_degree(k, n), n),
        }
    }

    /// Parses `L`, `Lambda`, `H`, `star` or `Lpow:i`.
    pub fn parse(name: &str) -> Result<Operator> {
        match name {
            "L" => Ok(Operator::L),
            "Lambda" => Ok(Operator::Lambda),
            "H" => Ok(Operator::H),
            "star" => Ok(Operator::Star),
            other => other
                .strip_prefix("Lpow:")
                .and_then(|i| i.parse::<usize>().ok())
                .map(Operator::LPow)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "unknown operator {other:?}; expected L, Lambda, H, star or Lpow:i"
                    ))
                }),
        }
    }

    /// Applies the operator to a form.
    pub fn apply(&self, a: &Form, triple: &CompatibleTriple) -> Result<Form> {
        let out = match self {
            Operator::LPow(i) => triple.omega().power(*i).wedge(a)?,
            Operator::Lambda => op_lambda(a, triple)?,
            Operator::H => op_h(a, triple)?,
            Operator::Star => triple.hodge_star(a)?,
            Operator::Compose(outer, inner) => outer.apply(&inner.apply(a, triple)?, triple)?,
        };
        let target = self.target_degree(a.degree() as isize, triple.n());
        if out.is_zero() && target >= 0 && out.degree() != target as usize {
            return Ok(Form::zero(triple.n(), target as usize));
        }
        Ok(out)
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::LPow(1) => write!(f, "L"),
            Operator::LPow(i) => write!(f, "L^{i}"),
            Operator::Lambda => write!(f, "Lambda"),
            Operator::H => write!(f, "H"),
            Operator::Star => write!(f, "star"),
            Operator::Compose(outer, inner) => write!(f, "({outer})∘({inner})"),
        }
    }
}

/// `L(α) = ω ^ α`.
pub fn op_l(a: &Form, triple: &CompatibleTriple) -> Result<Form> {
    triple.omega().wedge(a)
}

/// `Λ` by contraction. On degrees 0 and 1 this is the zero form of degree 0.
pub fn op_lambda(a: &Form, triple: &CompatibleTriple) -> Result<Form> {
    let n = triple.n();
    if a.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: a.n() });
    }
    if a.degree() < 2 {
        return Ok(Form::zero(n, 0));
    }
    let mut out = Form::zero(n, a.degree() - 2);
    for (idx, w) in triple.omega().terms() {
        let pair = idx.to_vec();
        let first = a.interior(&triple.raised_covector(pair[0]))?;
        if first.is_zero() {
            continue;
        }
        let second = first.interior(&triple.raised_covector(pair[1]))?;
        out += &second.scale(w);
    }
    Ok(out)
}

/// `Λ = *⁻¹ ∘ L ∘ *`.
pub fn op_lambda_via_star(a: &Form, triple: &CompatibleTriple) -> Result<Form> {
    if a.degree() < 2 {
        return Ok(Form::zero(triple.n(), 0));
    }
    triple.hodge_star_inverse(&op_l(&triple.hodge_star(a)?, triple)?)
}

/// `H = (k - n) id` on `⋀^k`.
pub fn op_h(a: &Form, triple: &CompatibleTriple) -> Result<Form> {
    if a.n() != triple.n() {
        return Err(Error::DimensionMismatch {
            left: triple.n(),
            right: a.n(),
        });
    }
    Ok(a.scale(&int(a.degree() as i64 - triple.n() as i64)))
}

/// Matrix of an operator between two exterior powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorMatrix {
    pub n: usize,
    pub source_degree: usize,
    pub target_degree: isize,
    pub matrix: Matrix,
}

impl OperatorMatrix {
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

pub fn space_dim(n: usize, degree: isize) -> usize {
    binomial(2 * n, degree)
}

fn basis_at(n: usize, degree: isize) -> Option<Basis> {
    (0..=2 * n as isize)
        .contains(&degree)
        .then(|| Basis::new(2 * n, degree as usize))
}

/// Matrix whose column `j` is `f(e_j)` on the basis of `⋀^k`.
fn matrix_by_columns(n: usize, k: isize, target: isize, mut f: impl FnMut(&Form) -> Result<Form>) -> Result<Matrix> {
    let rows = space_dim(n, target);
    let (Some(src), Some(dst)) = (basis_at(n, k), basis_at(n, target)) else {
        return Ok(Matrix::zeros(rows, space_dim(n, k)));
    };
    let columns = src
        .elems()
        .iter()
        .map(|idx| {
            let e = Form::from_terms(n, k as usize, [(idx.clone(), Scalar::from_integer(1.into()))])?;
            Ok(f(&e)?.to_coords(&dst))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(rows, &columns))
}

/// Matrix of `op` on `⋀^k` for any integer degree.
pub(crate) fn matrix_at(op: &Operator, k: isize, triple: &CompatibleTriple) -> Result<Matrix> {
    let n = triple.n();
    let target = op.target_degree(k, n);
    match op {
        Operator::LPow(i) => {
            let w = triple.omega().power(*i);
            matrix_by_columns(n, k, target, |e| w.wedge(e))
        }
        Operator::H => {
            let s = int(k as i64 - n as i64);
            Ok(Matrix::identity(space_dim(n, k)).scale(&s))
        }
        Operator::Star => matrix_by_columns(n, k, target, |e| triple.hodge_star(e)),
        Operator::Lambda => lambda_adjoint_matrix(k, triple),
        Operator::Compose(outer, inner) => {
            let inner_m = matrix_at(inner, k, triple)?;
            let outer_m = matrix_at(outer, inner.target_degree(k, n), triple)?;
            Ok(outer_m.mul(&inner_m))
        }
    }
}

pub fn operator_matrix(op: &Operator, k: usize, triple: &CompatibleTriple) -> Result<OperatorMatrix> {
    let n = triple.n();
    if k > 2 * n {
        return Err(Error::DegreeOutOfRange { degree: k, n });
    }
    Ok(OperatorMatrix {
        n,
        source_degree: k,
        target_degree: op.target_degree(k as isize, n),
        matrix: matrix_at(op, k as isize, triple)?,
    })
}

/// `Λ: ⋀^k → ⋀^{k-2}` as `G_{k-2}⁻¹ Lᵀ G_k`.
pub fn lambda_adjoint_matrix(k: isize, triple: &CompatibleTriple) -> Result<Matrix> {
    let n = triple.n();
    let cols = space_dim(n, k);
    let rows = space_dim(n, k - 2);
    if rows == 0 || cols == 0 {
        return Ok(Matrix::zeros(rows, cols));
    }
    let l = matrix_at(&Operator::L, k - 2, triple)?;
    let g_src = triple.gram_matrix(k as usize);
    let g_dst = triple.gram_matrix((k - 2) as usize);
    Ok(g_dst.inverse()?.mul(&l.transpose()).mul(&g_src))
}

/// `Λ: ⋀^k → ⋀^{k-2}` as `*⁻¹ L *`, inverting the star matrix on `⋀^{k-2}`.
pub fn lambda_star_matrix(k: isize, triple: &CompatibleTriple) -> Result<Matrix> {
    let n = triple.n();
    let cols = space_dim(n, k);
    let rows = space_dim(n, k - 2);
    if rows == 0 || cols == 0 {
        return Ok(Matrix::zeros(rows, cols));
    }
    let star_k = matrix_at(&Operator::Star, k, triple)?;
    let l = matrix_at(&Operator::L, 2 * n as isize - k, triple)?;
    let star_low = matrix_at(&Operator::Star, k - 2, triple)?;
    Ok(star_low.inverse()?.mul(&l).mul(&star_k))
}

/// `Λ: ⋀^k → ⋀^{k-2}` from the contraction formula.
pub fn lambda_contraction_matrix(k: isize, triple: &CompatibleTriple) -> Result<Matrix> {
    let n = triple.n();
    if k < 2 {
        return Ok(Matrix::zeros(space_dim(n, k - 2), space_dim(n, k)));
    }
    matrix_by_columns(n, k, k - 2, |e| op_lambda(e, triple))
}

/// Write-once memo of operator matrices for one triple; safe to share
/// between threads.
pub struct OperatorCache<'a> {
    triple: &'a CompatibleTriple,
    entries: Mutex<HashMap<(Operator, isize), Arc<Matrix>>>,
}

impl<'a> OperatorCache<'a> {
    pub fn new(triple: &'a CompatibleTriple) -> Self {
        OperatorCache {
            triple,
            entries: Mutex::new(HashMap::new()),
        }
    }

    pub fn triple(&self) -> &CompatibleTriple {
        self.triple
    }

    /// Matrix of `op` on `⋀^k`; compositions are multiplied from cached factors.
    pub fn get(&self, op: &Operator, k: isize) -> Result<Arc<Matrix>> {
        let key = (op.clone(), k);
        if let Some(m) = self.entries.lock().expect("cache lock").get(&key) {
            return Ok(Arc::clone(m));
        }
        let computed = match op {
            Operator::Compose(outer, inner) => {
                let inner_m = self.get(inner, k)?;
                let outer_m = self.get(outer, inner.target_degree(k, self.triple.n()))?;
                outer_m.mul(&inner_m)
            }
            _ => matrix_at(op, k, self.triple)?,
        };
        let mut entries = self.entries.lock().expect("cache lock");
        Ok(Arc::clone(entries.entry(key).or_insert_with(|| Arc::new(computed))))
    }
}

/// Basis of `P^k = ker Λ ∩ ⋀^k`.
pub fn primitive_space_basis(k: usize, triple: &CompatibleTriple) -> Result<Vec<Form>> {
    let n = triple.n();
    if k > 2 * n {
        return Err(Error::DegreeOutOfRange { degree: k, n });
    }
    let lambda = lambda_adjoint_matrix(k as isize, triple)?;
    let basis = Basis::new(2 * n, k);
    Ok(lambda
        .kernel_basis()
        .iter()
        .map(|v| Form::from_coords(n, k, &basis, v))
        .collect())
}

/// `α = Σ_i L^i(β_i)` with every `β_i` primitive of degree `deg α - 2i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveDecomposition {
    pub degree: usize,
    /// `(i, β_i)` for `i = 0..=degree/2`, zero components included.
    pub components: Vec<(usize, Form)>,
}

impl PrimitiveDecomposition {
    pub fn component(&self, i: usize) -> Option<&Form> {
        self.components.iter().find(|(j, _)| *j == i).map(|(_, f)| f)
    }

    pub fn reconstruct(&self, triple: &CompatibleTriple) -> Result<Form> {
        let mut acc = Form::zero(triple.n(), self.degree);
        for (i, beta) in &self.components {
            acc += &Operator::LPow(*i).apply(beta, triple)?;
        }
        Ok(acc)
    }
}

/// Solves for primitive decompositions on one degree; the candidate basis
/// `∪_i L^i(P^{k-2i})` is inverted once and reused. Components with
/// `L^i(P^{k-2i}) = 0` are returned as zero.
pub struct PrimitiveDecomposer {
    n: usize,
    degree: usize,
    basis: Basis,
    /// `(i, primitive basis of P^{k-2i})` in column order.
    blocks: Vec<(usize, Vec<Form>)>,
    inverse: Matrix,
}

impl PrimitiveDecomposer {
    pub fn new(k: usize, triple: &CompatibleTriple) -> Result<Self> {
        let n = triple.n();
        if k > 2 * n {
            return Err(Error::DegreeOutOfRange { degree: k, n });
        }
        let basis = Basis::new(2 * n, k);
        let mut blocks = Vec::new();
        let mut columns = Vec::new();
        for i in 0..=k / 2 {
            // `L^i` vanishes on `P^{k-2i}` once `k - i > n`; such blocks stay empty.
            if k - i > n {
                blocks.push((i, Vec::new()));
                continue;
            }
            let prim = primitive_space_basis(k - 2 * i, triple)?;
            let power = triple.omega().power(i);
            for beta in &prim {
                columns.push(power.wedge(beta)?.to_coords(&basis));
            }
            blocks.push((i, prim));
        }
        if columns.len() != basis.len() {
            return Err(Error::InvalidArgument(format!(
                "candidate basis has {} elements for a space of dimension {}",
                columns.len(),
                basis.len()
            )));
        }
        let inverse = Matrix::from_columns(basis.len(), &columns).inverse()?;
        Ok(PrimitiveDecomposer {
            n,
            degree: k,
            basis,
            blocks,
            inverse,
        })
    }

    pub fn decompose(&self, a: &Form) -> Result<PrimitiveDecomposition> {
        if a.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: a.n(),
            });
        }
        if a.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: a.degree(),
            });
        }
        let coords = self.inverse.mul_vec(&a.to_coords(&self.basis));
        let mut offset = 0;
        let mut components = Vec::new();
        for (i, prim) in &self.blocks {
            let mut beta = Form::zero(self.n, self.degree - 2 * i);
            for (form, c) in prim.iter().zip(&coords[offset..]) {
                if !c.is_zero() {
                    beta += &form.scale(c);
                }
            }
            offset += prim.len();
            components.push((*i, beta));
        }
        Ok(PrimitiveDecomposition {
            degree: self.degree,
            components,
        })
    }
}

pub fn primitive_decompose(a: &Form, triple: &CompatibleTriple) -> Result<PrimitiveDecomposition> {
    PrimitiveDecomposer::new(a.degree(), triple)?.decompose(a)
}
