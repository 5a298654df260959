//! Compatible triples `(g, J, ω)` and the induced metric structure on forms.
//!
//! The inner product on `⋀^k` is the Gram-determinant extension of the dual
//! metric `g^{-1}` on covectors: `g(e^I, e^J) = det(g^{-1}[I, J])`. The
//! volume form is `ω^n / n!`, which has unit length and induces the
//! orientation of `J`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::form::Form;
use crate::index::{Basis, MultiIndex};
use crate::linalg::{determinant, Matrix};
use crate::linear_map::{LinearMap, Vector};
use crate::scalar::{factorial, Scalar};

#[derive(Clone, Debug)]
pub struct CompatibleTriple {
    n: usize,
    metric: Matrix,
    dual: Matrix,
    j: LinearMap,
    omega: Form,
    /// Diagonal of `dual` when it is diagonal, for the fast Gram path.
    dual_diagonal: Option<Vec<Scalar>>,
}

impl CompatibleTriple {
    /// Identity metric, `J e_i = e_i'`, `J e_i' = -e_i`, standard `ω`.
    pub fn standard(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        let mut j = Matrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            j.set(n + i, i, Scalar::one());
            j.set(i, n + i, -Scalar::one());
        }
        CompatibleTriple::new(Matrix::identity(2 * n), LinearMap::from_matrix(n, j)?)
    }

    /// Validates `J² = -1`, `g(J·, J·) = g` and positivity of `g`, and sets
    /// `ω(v, w) = g(Jv, w)`.
    pub fn new(metric: Matrix, j: LinearMap) -> Result<Self> {
        let n = j.n();
        let dim = 2 * n;
        if metric.rows() != dim || metric.cols() != dim {
            return Err(Error::IncompatibleTriple(format!("metric must be {dim}x{dim}")));
        }
        if metric != metric.transpose() {
            return Err(Error::IncompatibleTriple("metric is not symmetric".into()));
        }
        for size in 1..=dim {
            let minor: Vec<Vec<Scalar>> = (0..size).map(|r| metric.row(r)[..size].to_vec()).collect();
            if determinant(minor) <= Scalar::zero() {
                return Err(Error::IncompatibleTriple("metric is not positive definite".into()));
            }
        }
        let jm = j.matrix();
        if jm.mul(jm) != Matrix::identity(dim).scale(&-Scalar::one()) {
            return Err(Error::IncompatibleTriple("J∘J is not -id".into()));
        }
        if jm.transpose().mul(&metric).mul(jm) != metric {
            return Err(Error::IncompatibleTriple("J is not a g-isometry".into()));
        }
        // ω(e_a, e_b) = g(J e_a, e_b) = (Jᵀ g)_{ab}
        let w = jm.transpose().mul(&metric);
        let mut terms = Vec::new();
        for a in 0..dim {
            for b in a + 1..dim {
                let v = w.get(a, b);
                if !v.is_zero() {
                    terms.push((MultiIndex::new(&[a + 1, b + 1], dim)?, v.clone()));
                }
            }
        }
        let omega = Form::from_terms(n, 2, terms)?;
        let dual = metric.inverse()?;
        let is_diag = (0..dim).all(|r| (0..dim).all(|c| r == c || dual.get(r, c).is_zero()));
        let dual_diagonal = is_diag.then(|| (0..dim).map(|i| dual.get(i, i).clone()).collect());
        Ok(CompatibleTriple {
            n,
            metric,
            dual,
            j,
            omega,
            dual_diagonal,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn metric(&self) -> &Matrix {
        &self.metric
    }

    pub fn complex_structure(&self) -> &LinearMap {
        &self.j
    }

    pub fn omega(&self) -> &Form {
        &self.omega
    }

    /// `g(v, w)` on vectors.
    pub fn metric_on_vectors(&self, v: &Vector, w: &Vector) -> Scalar {
        let gw = self.metric.mul_vec(w.coords());
        v.coords().iter().zip(&gw).map(|(a, b)| a * b).sum()
    }

    /// Re-checks the three defining identities on all pairs of basis vectors.
    pub fn check_invariants(&self) -> bool {
        let dim = 2 * self.n;
        let basis: Vec<Vector> = (1..=dim).map(|i| Vector::basis(self.n, i)).collect();
        let j = &self.j;
        let jj = j.compose(j).expect("same n");
        basis.iter().all(|v| {
            let jjv = jj.apply(v).expect("same n");
            jjv.coords().iter().zip(v.coords()).all(|(a, b)| *a == -b)
        }) && basis.iter().all(|v| {
            basis.iter().all(|w| {
                let jv = j.apply(v).expect("same n");
                let jw = j.apply(w).expect("same n");
                let w_vw = self.omega.evaluate(&[v.clone(), w.clone()]).expect("degree 2");
                self.metric_on_vectors(&jv, &jw) == self.metric_on_vectors(v, w)
                    && w_vw == self.metric_on_vectors(&jv, w)
            })
        })
    }

    /// `(e^a)^♯` for the 1-based coordinate `a`.
    pub(crate) fn raised_covector(&self, a: usize) -> Vector {
        Vector::new(self.n, self.dual.column(a - 1)).expect("length 2n")
    }

    /// Inner product of two basis monomials.
    pub fn monomial_inner_product(&self, i: &MultiIndex, j: &MultiIndex) -> Scalar {
        if i.degree() != j.degree() {
            return Scalar::zero();
        }
        if let Some(diag) = &self.dual_diagonal {
            return if i == j {
                i.iter().map(|a| diag[a - 1].clone()).product()
            } else {
                Scalar::zero()
            };
        }
        let minor: Vec<Vec<Scalar>> = i
            .iter()
            .map(|a| j.iter().map(|b| self.dual.get(a - 1, b - 1).clone()).collect())
            .collect();
        determinant(minor)
    }

    pub fn inner_product(&self, a: &Form, b: &Form) -> Result<Scalar> {
        self.check_form(a)?;
        self.check_form(b)?;
        if a.degree() != b.degree() {
            return Err(Error::DegreeMismatch {
                expected: a.degree(),
                got: b.degree(),
            });
        }
        let mut total = Scalar::zero();
        if self.dual_diagonal.is_some() {
            for (i, x) in a.terms() {
                if let Some(y) = b.terms().get(i) {
                    total += x * y * self.monomial_inner_product(i, i);
                }
            }
            return Ok(total);
        }
        for (i, x) in a.terms() {
            for (j, y) in b.terms() {
                let g = self.monomial_inner_product(i, j);
                if !g.is_zero() {
                    total += x * y * g;
                }
            }
        }
        Ok(total)
    }

    /// Gram matrix of the induced inner product on `⋀^k`.
    pub fn gram_matrix(&self, k: usize) -> Matrix {
        let basis = Basis::new(2 * self.n, k);
        let mut m = Matrix::zeros(basis.len(), basis.len());
        for (r, i) in basis.elems().iter().enumerate() {
            for (c, j) in basis.elems().iter().enumerate() {
                let g = self.monomial_inner_product(i, j);
                if !g.is_zero() {
                    m.set(r, c, g);
                }
            }
        }
        m
    }

    /// Gram matrix on `⋀^k` of the metric `g` itself (not its dual). By
    /// Cauchy-Binet this is the inverse of [`Self::gram_matrix`].
    fn primal_monomial_product(&self, i: &MultiIndex, j: &MultiIndex) -> Scalar {
        let minor: Vec<Vec<Scalar>> = i
            .iter()
            .map(|a| j.iter().map(|b| self.metric.get(a - 1, b - 1).clone()).collect())
            .collect();
        determinant(minor)
    }

    pub fn volume_form(&self) -> Form {
        self.omega.power(self.n).scale(&factorial(self.n).recip())
    }

    fn volume_coefficient(&self) -> Scalar {
        let top = MultiIndex::from_sorted((1..=(2 * self.n) as u8).collect());
        self.volume_form().coefficient(&top)
    }

    fn check_form(&self, a: &Form) -> Result<()> {
        if a.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: a.n(),
            });
        }
        if a.degree() > 2 * self.n {
            return Err(Error::DegreeOutOfRange {
                degree: a.degree(),
                n: self.n,
            });
        }
        Ok(())
    }

    /// Hodge star, the unique `(2n-k)`-form with `α ^ *β = g(α, β) vol` for
    /// every `k`-form `α`.
    ///
    /// With `vol = c e^{1..2n}` and `e^I ^ e^{I^c} = s_I e^{1..2n}`, the
    /// defining equations are monomial: `(*β)_{I^c} = c s_I (Gβ)_I`.
    pub fn hodge_star(&self, beta: &Form) -> Result<Form> {
        self.check_form(beta)?;
        let dim = 2 * self.n;
        let k = beta.degree();
        let c = self.volume_coefficient();
        let mut out = Form::zero(self.n, dim - k);
        let lowered: Vec<(MultiIndex, Scalar)> = if self.dual_diagonal.is_some() {
            beta.terms()
                .iter()
                .map(|(i, x)| (i.clone(), x * self.monomial_inner_product(i, i)))
                .collect()
        } else {
            Basis::new(dim, k)
                .elems()
                .iter()
                .map(|i| {
                    let v = beta
                        .terms()
                        .iter()
                        .map(|(j, x)| x * self.monomial_inner_product(i, j))
                        .sum::<Scalar>();
                    (i.clone(), v)
                })
                .collect()
        };
        let mut terms = Vec::new();
        for (i, v) in lowered {
            if v.is_zero() {
                continue;
            }
            let comp = i.complement(dim);
            let (_, odd) = i.merge(&comp).expect("disjoint");
            let s = if odd { -&c } else { c.clone() };
            terms.push((comp, s * v));
        }
        out = out.checked_add(&Form::from_terms(self.n, dim - k, terms)?)?;
        Ok(out)
    }

    /// Inverse of the Hodge star: `*^{-1} γ = G_g (c s)^{-1} γ` where `G_g`
    /// is the Gram matrix of `g` on `⋀^{2n-deg γ}`.
    pub fn hodge_star_inverse(&self, gamma: &Form) -> Result<Form> {
        self.check_form(gamma)?;
        let dim = 2 * self.n;
        let k = dim - gamma.degree();
        let c = self.volume_coefficient();
        // undo the monomial part first
        let mut pre = Vec::new();
        for (comp, v) in gamma.terms() {
            let i = comp.complement(dim);
            let (_, odd) = i.merge(comp).expect("disjoint");
            let s = if odd { -&c } else { c.clone() };
            pre.push((i, v / s));
        }
        let pre = Form::from_terms(self.n, k, pre)?;
        if let Some(diag) = &self.dual_diagonal {
            let terms = pre.terms().iter().map(|(i, v)| {
                let g: Scalar = i.iter().map(|a| diag[a - 1].recip()).product();
                (i.clone(), v * g)
            });
            return Form::from_terms(self.n, k, terms.collect::<Vec<_>>());
        }
        let terms: Vec<(MultiIndex, Scalar)> = Basis::new(dim, k)
            .elems()
            .iter()
            .map(|i| {
                let v = pre
                    .terms()
                    .iter()
                    .map(|(j, x)| x * self.primal_monomial_product(i, j))
                    .sum::<Scalar>();
                (i.clone(), v)
            })
            .collect();
        Form::from_terms(self.n, k, terms)
    }
}

pub fn induced_inner_product(a: &Form, b: &Form, triple: &CompatibleTriple) -> Result<Scalar> {
    triple.inner_product(a, b)
}

pub fn volume_form(triple: &CompatibleTriple) -> Form {
    triple.volume_form()
}

pub fn hodge_star(a: &Form, triple: &CompatibleTriple) -> Result<Form> {
    triple.hodge_star(a)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::form::standard_symplectic_form;
    use crate::scalar::{int, ratio};

    fn scaled_triple(weights: &[i64]) -> CompatibleTriple {
        let n = weights.len();
        let diag: Vec<Scalar> = weights.iter().chain(weights).map(|&w| int(w)).collect();
        let g = LinearMap::diagonal(n, diag).unwrap().matrix().clone();
        let j = CompatibleTriple::standard(n).unwrap().complex_structure().clone();
        CompatibleTriple::new(g, j).unwrap()
    }

    #[test]
    fn standard_triple_is_consistent() {
        for n in 1..=3 {
            let t = CompatibleTriple::standard(n).unwrap();
            assert_eq!(t.omega(), &standard_symplectic_form(n).unwrap());
            assert!(t.check_invariants());
        }
    }

    #[test]
    fn rejects_incompatible_structures() {
        let n = 1;
        let g = Matrix::identity(2);
        let not_complex = LinearMap::identity(n);
        assert!(matches!(
            CompatibleTriple::new(g.clone(), not_complex),
            Err(Error::IncompatibleTriple(_))
        ));
        let j = CompatibleTriple::standard(1).unwrap().complex_structure().clone();
        let skewed = Matrix::from_rows(vec![vec![int(2), int(0)], vec![int(0), int(1)]]);
        assert!(CompatibleTriple::new(skewed, j.clone()).is_err());
        let indefinite = Matrix::from_rows(vec![vec![int(-1), int(0)], vec![int(0), int(-1)]]);
        assert!(CompatibleTriple::new(indefinite, j).is_err());
    }

    #[test]
    fn inner_product_examples() {
        let t = CompatibleTriple::standard(3).unwrap();
        let a = Form::dx_dy(3, 1, 1);
        assert_eq!(t.inner_product(&a, &a).unwrap(), int(1));
        assert_eq!(t.inner_product(&a, &Form::dx_dy(3, 2, 2)).unwrap(), int(0));
        assert_eq!(t.inner_product(t.omega(), t.omega()).unwrap(), int(3));
        assert!(t.inner_product(&a, &Form::dx(3, 1)).is_err());
    }

    #[test]
    fn volume_examples() {
        let t1 = CompatibleTriple::standard(1).unwrap();
        assert_eq!(t1.volume_form(), Form::dx_dy(1, 1, 1));
        let t3 = CompatibleTriple::standard(3).unwrap();
        let vol = t3.volume_form();
        let mut frame = Vector::interleaved_frame(3, 1..=3);
        assert_eq!(vol.evaluate(&frame).unwrap(), int(1));
        frame.swap(0, 1);
        assert_eq!(vol.evaluate(&frame).unwrap(), int(-1));
        assert_eq!(vol, t3.omega().power(3).scale(&ratio(1, 6)));
    }

    #[test]
    fn star_extremes_and_low_dimension() {
        let t = CompatibleTriple::standard(2).unwrap();
        let one = Form::constant(2, int(1));
        assert_eq!(t.hodge_star(&one).unwrap(), t.volume_form());
        assert_eq!(t.hodge_star(&t.volume_form()).unwrap(), one);
        let t1 = CompatibleTriple::standard(1).unwrap();
        let dx = Form::dx(1, 1);
        let star = t1.hodge_star(&dx).unwrap();
        assert_eq!(star, Form::dy(1, 1));
        assert_eq!(
            dx.wedge(&star).unwrap(),
            t1.volume_form().scale(&t1.inner_product(&dx, &dx).unwrap())
        );
    }

    /// `(Sᵀ g S, S⁻¹ J S)` for the standard pair: compatible, not diagonal.
    pub(crate) fn conjugated_triple(n: usize) -> CompatibleTriple {
        let std = CompatibleTriple::standard(n).unwrap();
        let mut s = Matrix::identity(2 * n);
        s.set(0, 1, int(1));
        s.set(2 * n - 1, 0, ratio(1, 2));
        let s_inv = s.inverse().unwrap();
        let g = s.transpose().mul(std.metric()).mul(&s);
        let j = s_inv.mul(std.complex_structure().matrix()).mul(&s);
        CompatibleTriple::new(g, LinearMap::from_matrix(n, j).unwrap()).unwrap()
    }

    #[test]
    fn star_satisfies_defining_equation_for_non_diagonal_metric() {
        let t = conjugated_triple(2);
        assert!(t.dual_diagonal.is_none());
        assert!(t.check_invariants());
        star_defining_equation(&t);
    }

    #[test]
    fn star_satisfies_defining_equation_for_weighted_metric() {
        let t = scaled_triple(&[2, 3]);
        star_defining_equation(&t);
    }

    fn star_defining_equation(t: &CompatibleTriple) {
        assert!(t.check_invariants());
        let vol = t.volume_form();
        assert_eq!(t.inner_product(&vol, &vol).unwrap(), int(1));
        for k in 0..=4 {
            let basis = Basis::new(4, k);
            for b in basis.elems() {
                let beta = Form::from_terms(2, k, [(b.clone(), int(1))]).unwrap();
                let star = t.hodge_star(&beta).unwrap();
                assert_eq!(t.hodge_star_inverse(&star).unwrap(), beta);
                for a in basis.elems() {
                    let alpha = Form::from_terms(2, k, [(a.clone(), int(1))]).unwrap();
                    let lhs = alpha.wedge(&star).unwrap();
                    let rhs = vol.scale(&t.inner_product(&alpha, &beta).unwrap());
                    assert_eq!(lhs, rhs, "k={k} a={a} b={b}");
                }
            }
        }
    }
}
