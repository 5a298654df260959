//! Sparse alternating forms on `R^{2n}` with exact coefficients.
//!
//! A [`Form`] of degree `k` is a map from [`MultiIndex`] to nonzero
//! [`Scalar`]; monomials are stored with strictly increasing indices and
//! every sign is normalised on insertion, so structural equality is equality
//! of forms. Evaluation uses the determinant convention:
//! `(dz_1 ^ dz_2)(e_1, e_2) = 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::index::{Basis, MultiIndex};
use crate::linalg::determinant;
use crate::linear_map::{LinearMap, Vector};
use crate::scalar::{format_scalar, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    n: usize,
    degree: usize,
    terms: BTreeMap<MultiIndex, Scalar>,
}

impl Form {
    pub fn zero(n: usize, degree: usize) -> Self {
        Form {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, value: Scalar) -> Self {
        let mut f = Form::zero(n, 0);
        f.add_term(MultiIndex::empty(), value);
        f
    }

    /// Builds a form from `(index, coefficient)` pairs, summing repeats and
    /// dropping zeros.
    pub fn from_terms(n: usize, degree: usize, terms: impl IntoIterator<Item = (MultiIndex, Scalar)>) -> Result<Self> {
        let mut f = Form::zero(n, degree);
        for (idx, c) in terms {
            if idx.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    got: idx.degree(),
                });
            }
            if idx.max_index() > 2 * n {
                return Err(Error::InvalidIndex {
                    indices: idx.to_vec(),
                    reason: format!("entries must lie in 1..={}", 2 * n),
                });
            }
            f.add_term(idx, c);
        }
        Ok(f)
    }

    /// `coeff * dz_{i_1} ^ ... ^ dz_{i_k}` for indices in any order; repeated
    /// indices give the zero form.
    pub fn monomial(n: usize, indices: &[usize], coeff: Scalar) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > 2 * n) {
            return Err(Error::InvalidIndex {
                indices: indices.to_vec(),
                reason: format!("entry {bad} outside 1..={}", 2 * n),
            });
        }
        let mut f = Form::zero(n, indices.len());
        if let Some((idx, odd)) = MultiIndex::sort_signed(indices) {
            f.add_term(idx, if odd { -coeff } else { coeff });
        }
        Ok(f)
    }

    /// The 1-form `dz_index`.
    pub fn coordinate(n: usize, index: usize) -> Self {
        Form::monomial(n, &[index], Scalar::one()).expect("index in range")
    }

    pub fn dx(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i));
        Form::coordinate(n, i)
    }

    pub fn dy(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i));
        Form::coordinate(n, n + i)
    }

    /// `dx_i ^ dy_j`.
    pub fn dx_dy(n: usize, i: usize, j: usize) -> Self {
        Form::monomial(n, &[i, n + j], Scalar::one()).expect("index in range")
    }

    /// `dx_i ^ dx_j`.
    pub fn dx_dx(n: usize, i: usize, j: usize) -> Self {
        Form::monomial(n, &[i, j], Scalar::one()).expect("index in range")
    }

    /// `dy_i ^ dy_j`.
    pub fn dy_dy(n: usize, i: usize, j: usize) -> Self {
        Form::monomial(n, &[n + i, n + j], Scalar::one()).expect("index in range")
    }

    pub fn from_coords(n: usize, degree: usize, basis: &Basis, coords: &[Scalar]) -> Self {
        assert_eq!(basis.len(), coords.len());
        let mut f = Form::zero(n, degree);
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                f.terms.insert(basis.get(i).clone(), c.clone());
            }
        }
        f
    }

    pub fn to_coords(&self, basis: &Basis) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); basis.len()];
        for (idx, c) in &self.terms {
            let p = basis.position(idx).expect("basis must match the form's degree");
            v[p] = c.clone();
        }
        v
    }

    fn add_term(&mut self, idx: MultiIndex, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(idx);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Scalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> Scalar {
        self.terms.get(idx).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Coefficient of the monomial written with indices in the given order.
    pub fn coefficient_of(&self, indices: &[usize]) -> Scalar {
        match MultiIndex::sort_signed(indices) {
            Some((idx, odd)) => {
                let c = self.coefficient(&idx);
                if odd {
                    -c
                } else {
                    c
                }
            }
            None => Scalar::zero(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        if s.is_zero() {
            return Form::zero(self.n, self.degree);
        }
        Form {
            n: self.n,
            degree: self.degree,
            terms: self.terms.iter().map(|(i, c)| (i.clone(), c * s)).collect(),
        }
    }

    /// Terms whose index satisfies `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&MultiIndex) -> bool) -> Form {
        Form {
            n: self.n,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(i, _)| keep(i))
                .map(|(i, c)| (i.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_same_space(&self, other: &Form) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Form) -> Result<Form> {
        self.check_same_space(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.add_term(i.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Form) -> Result<Form> {
        self.check_same_space(other)?;
        let mut out = Form::zero(self.n, self.degree + other.degree);
        if out.degree > 2 * self.n {
            return Ok(out);
        }
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                if let Some((idx, odd)) = i.merge(j) {
                    let c = a * b;
                    out.add_term(idx, if odd { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `k`-fold wedge power; `k = 0` gives the constant 1.
    pub fn power(&self, k: usize) -> Form {
        let mut acc = Form::constant(self.n, Scalar::one());
        for _ in 0..k {
            acc = acc.wedge(self).expect("same space");
        }
        acc
    }

    pub fn evaluate(&self, vectors: &[Vector]) -> Result<Scalar> {
        if vectors.len() != self.degree {
            return Err(Error::ArityMismatch {
                expected: self.degree,
                got: vectors.len(),
            });
        }
        if let Some(v) = vectors.iter().find(|v| v.n() != self.n) {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: v.n(),
            });
        }
        let mut total = Scalar::zero();
        for (idx, c) in &self.terms {
            let minor: Vec<Vec<Scalar>> = idx
                .iter()
                .map(|row| vectors.iter().map(|v| v.coord(row).clone()).collect())
                .collect();
            let d = determinant(minor);
            if !d.is_zero() {
                total += c * d;
            }
        }
        Ok(total)
    }

    /// Contraction `ι_X self`, lowering the degree by one.
    pub fn interior(&self, x: &Vector) -> Result<Form> {
        if self.degree == 0 {
            return Err(Error::ContractionOfScalar);
        }
        if x.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: x.n(),
            });
        }
        let mut out = Form::zero(self.n, self.degree - 1);
        for (idx, c) in &self.terms {
            for (pos, i) in idx.iter().enumerate() {
                let xi = x.coord(i);
                if xi.is_zero() {
                    continue;
                }
                let v = c * xi;
                out.add_term(idx.remove_at(pos), if pos % 2 == 1 { -v } else { v });
            }
        }
        Ok(out)
    }

    /// `T^* self`, i.e. `(T^* a)(v_1, ..., v_k) = a(T v_1, ..., T v_k)`.
    pub fn pullback(&self, t: &LinearMap) -> Result<Form> {
        if t.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: t.n(),
            });
        }
        let dim = 2 * self.n;
        // T^* dz_r = sum_c T[r][c] dz_c
        let pulled: Vec<Form> = (1..=dim)
            .map(|r| {
                let terms = (1..=dim).filter_map(|c| {
                    let e = t.entry(r, c);
                    (!e.is_zero()).then(|| (MultiIndex::from_sorted(vec![c as u8]), e.clone()))
                });
                Form::from_terms(self.n, 1, terms).expect("valid 1-form")
            })
            .collect();
        let mut out = Form::zero(self.n, self.degree);
        'terms: for (idx, c) in &self.terms {
            let mut acc = Form::constant(self.n, c.clone());
            for i in idx.iter() {
                acc = acc.wedge(&pulled[i - 1])?;
                // A vanished partial product contributes nothing at any degree.
                if acc.is_zero() {
                    continue 'terms;
                }
            }
            out = out.checked_add(&acc)?;
        }
        Ok(out)
    }

    /// Whether any term involves coordinate `index`.
    pub fn involves(&self, index: usize) -> bool {
        self.terms.keys().any(|i| i.contains(index))
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let n = self.n;
        let name = |i: usize| {
            if i <= n {
                format!("dx{i}")
            } else {
                format!("dy{}", i - n)
            }
        };
        let mut first = true;
        for (idx, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = idx.iter().map(name).collect();
            if mono.is_empty() {
                write!(f, "{}", format_scalar(c))?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("^"))?;
            } else {
                write!(f, "({})*{}", format_scalar(c), mono.join("^"))?;
            }
        }
        Ok(())
    }
}

impl Add for &Form {
    type Output = Form;

    /// Panics if the operands live in different spaces or degrees.
    fn add(self, rhs: &Form) -> Form {
        self.checked_add(rhs).expect("forms of the same shape")
    }
}

impl Add for Form {
    type Output = Form;

    fn add(self, rhs: Form) -> Form {
        &self + &rhs
    }
}

impl AddAssign<&Form> for Form {
    fn add_assign(&mut self, rhs: &Form) {
        *self = &*self + rhs;
    }
}

impl Sub for &Form {
    type Output = Form;

    fn sub(self, rhs: &Form) -> Form {
        self + &(-rhs)
    }
}

impl Sub for Form {
    type Output = Form;

    fn sub(self, rhs: Form) -> Form {
        &self - &rhs
    }
}

impl Neg for &Form {
    type Output = Form;

    fn neg(self) -> Form {
        self.scale(&-Scalar::one())
    }
}

impl Neg for Form {
    type Output = Form;

    fn neg(self) -> Form {
        -&self
    }
}

impl Mul<&Form> for &Scalar {
    type Output = Form;

    fn mul(self, rhs: &Form) -> Form {
        rhs.scale(self)
    }
}

/// `dx_1 ^ dy_1 + ... + dx_n ^ dy_n`.
pub fn standard_symplectic_form(n: usize) -> Result<Form> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { min: 1, got: 0 });
    }
    Form::from_terms(
        n,
        2,
        (1..=n).map(|i| (MultiIndex::from_sorted(vec![i as u8, (n + i) as u8]), Scalar::one())),
    )
}

pub fn wedge(a: &Form, b: &Form) -> Result<Form> {
    a.wedge(b)
}

pub fn form_power(a: &Form, k: usize) -> Form {
    a.power(k)
}

pub fn evaluate(a: &Form, vectors: &[Vector]) -> Result<Scalar> {
    a.evaluate(vectors)
}

pub fn interior_product(x: &Vector, a: &Form) -> Result<Form> {
    a.interior(x)
}

pub fn pullback(t: &LinearMap, a: &Form) -> Result<Form> {
    a.pullback(t)
}

/// Sign relating the block ordering `dx_I ^ dy_I` to the paired ordering
/// `(dx_{i_1} ^ dy_{i_1}) ^ ... ^ (dx_{i_m} ^ dy_{i_m})` for `|I| = m`:
/// `dx_I ^ dy_I = (-1)^{m(m-1)/2} * paired`.
pub fn block_ordering_sign(m: usize) -> Scalar {
    crate::scalar::sign_power(m * m.saturating_sub(1) / 2)
}

/// `m! * sum_{|I| = m} (dx_{i_1} ^ dy_{i_1}) ^ ... ^ (dx_{i_m} ^ dy_{i_m})`,
/// the closed form of `omega^m` assembled directly from monomials.
pub fn symplectic_power_closed_form(n: usize, m: usize) -> Result<Form> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { min: 1, got: 0 });
    }
    let prefactor = crate::scalar::factorial(m) * block_ordering_sign(m);
    let mut terms = Vec::new();
    for planes in crate::index::basis(n, m) {
        let idx: Vec<usize> = planes.iter().chain(planes.iter().map(|i| i + n)).collect();
        terms.push((MultiIndex::new(&idx, 2 * n)?, prefactor.clone()));
    }
    Form::from_terms(n, 2 * m, terms)
}
