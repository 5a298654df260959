//! Exact checks of the Kähler identities and the Lefschetz structure on
//! every degree of `⋀ R^{2n}`.
//!
//! | check                          | identity                                          |
//! |--------------------------------|---------------------------------------------------|
//! | `kahler.star_squared`          | `(* ∘ *)|_{⋀^k} = (-1)^k`                         |
//! | `kahler.lambda_star`           | `Λ = *⁻¹ L *`, also equal to the contraction form |
//! | `kahler.sl2`                   | `[H,L] = 2L`, `[H,Λ] = -2Λ`, `[L,Λ] = H`          |
//! | `kahler.power_commutator`      | `[L^i,Λ] = i(k-n+i-1) L^{i-1}` on `⋀^k`           |
//! | `kahler.decomposition`         | `⋀^k = ⊕ L^i(P^{k-2i})`, exact reconstruction     |
//! | `kahler.primitive_vanishing`   | `dim P^k = C(2n,k) - C(2n,k-2)`, `P^k = 0` for `k > n` |
//! | `kahler.primitive_injectivity` | `L^{n-k}` injective on `P^k` for `k ≤ n`          |
//! | `kahler.lefschetz_bijectivity` | `L^{n-k}: ⋀^k → ⋀^{2n-k}` has rank `C(2n,k)`      |

use serde_json::{json, Value};

use crate::error::Result;
use crate::form::Form;
use crate::index::{binomial, Basis};
use crate::lefschetz::{
    lambda_contraction_matrix, lambda_star_matrix, primitive_space_basis, Operator, OperatorCache, PrimitiveDecomposer,
};
use crate::linalg::Matrix;
use crate::metric::CompatibleTriple;
use crate::report::{matrix_difference, CheckReport};
use crate::scalar::{int, sign_power};

fn params(n: usize) -> Value {
    json!({ "n": n })
}

fn first_failure(check: &str, n: usize, mut cases: impl FnMut() -> Result<Option<Value>>) -> Result<CheckReport> {
    let witness = cases()?;
    Ok(CheckReport::new(check, params(n), witness.is_none(), witness))
}

fn with_degree(k: usize, extra: Value) -> Value {
    let mut w = json!({ "degree": k });
    if let (Some(obj), Value::Object(more)) = (w.as_object_mut(), extra) {
        obj.extend(more);
    }
    w
}

fn commutator(cache: &OperatorCache, a: &Operator, b: &Operator, k: isize) -> Result<Matrix> {
    let ab = cache.get(&Operator::compose(a.clone(), b.clone()), k)?;
    let ba = cache.get(&Operator::compose(b.clone(), a.clone()), k)?;
    Ok(ab.sub(&ba))
}

pub fn check_star_squared(cache: &OperatorCache) -> Result<CheckReport> {
    let n = cache.triple().n();
    let star2 = Operator::compose(Operator::Star, Operator::Star);
    first_failure("kahler.star_squared", n, || {
        for k in 0..=2 * n {
            let expected = Matrix::identity(binomial(2 * n, k as isize)).scale(&sign_power(k));
            if let Some(d) = matrix_difference(&*cache.get(&star2, k as isize)?, &expected) {
                return Ok(Some(with_degree(k, d)));
            }
        }
        Ok(None)
    })
}

pub fn check_lambda_star(cache: &OperatorCache) -> Result<CheckReport> {
    let triple = cache.triple();
    let n = triple.n();
    first_failure("kahler.lambda_star", n, || {
        for k in 0..=2 * n as isize {
            let adjoint = cache.get(&Operator::Lambda, k)?;
            let routes = [
                ("star", lambda_star_matrix(k, triple)?),
                ("contraction", lambda_contraction_matrix(k, triple)?),
            ];
            for (route, m) in routes {
                if let Some(d) = matrix_difference(&m, &adjoint) {
                    return Ok(Some(with_degree(k as usize, json!({ "route": route, "entry": d }))));
                }
            }
        }
        Ok(None)
    })
}

pub fn check_sl2(cache: &OperatorCache) -> Result<CheckReport> {
    let n = cache.triple().n();
    let (l, lambda, h) = (Operator::L, Operator::Lambda, Operator::H);
    first_failure("kahler.sl2", n, || {
        for k in 0..=2 * n as isize {
            let cases = [
                (
                    "[H,L] = 2L",
                    commutator(cache, &h, &l, k)?,
                    cache.get(&l, k)?.scale(&int(2)),
                ),
                (
                    "[H,Lambda] = -2Lambda",
                    commutator(cache, &h, &lambda, k)?,
                    cache.get(&lambda, k)?.scale(&int(-2)),
                ),
                (
                    "[L,Lambda] = H",
                    commutator(cache, &l, &lambda, k)?,
                    (*cache.get(&h, k)?).clone(),
                ),
            ];
            for (identity, got, expected) in cases {
                if let Some(d) = matrix_difference(&got, &expected) {
                    return Ok(Some(with_degree(
                        k as usize,
                        json!({ "identity": identity, "entry": d }),
                    )));
                }
            }
        }
        Ok(None)
    })
}

pub fn check_power_commutator(cache: &OperatorCache) -> Result<CheckReport> {
    let n = cache.triple().n();
    first_failure("kahler.power_commutator", n, || {
        for i in 1..=n {
            for k in 0..=2 * n {
                let got = commutator(cache, &Operator::LPow(i), &Operator::Lambda, k as isize)?;
                let factor = int(i as i64 * (k as i64 - n as i64 + i as i64 - 1));
                let expected = cache.get(&Operator::LPow(i - 1), k as isize)?.scale(&factor);
                if let Some(d) = matrix_difference(&got, &expected) {
                    return Ok(Some(with_degree(k, json!({ "i": i, "entry": d }))));
                }
            }
        }
        Ok(None)
    })
}

/// Decomposes every basis monomial of every degree and checks that the
/// components are primitive and reconstruct the monomial.
pub fn check_decomposition(cache: &OperatorCache) -> Result<CheckReport> {
    let triple = cache.triple();
    let n = triple.n();
    first_failure("kahler.decomposition", n, || {
        for k in 0..=2 * n {
            let decomposer = match PrimitiveDecomposer::new(k, triple) {
                Ok(d) => d,
                Err(e) => return Ok(Some(with_degree(k, json!({ "error": e.to_string() })))),
            };
            let basis = Basis::new(2 * n, k);
            for idx in basis.elems() {
                let e = Form::from_terms(n, k, [(idx.clone(), int(1))])?;
                let d = decomposer.decompose(&e)?;
                for (i, beta) in &d.components {
                    if !Operator::Lambda.apply(beta, triple)?.is_zero() {
                        return Ok(Some(with_degree(
                            k,
                            json!({ "monomial": idx.to_vec(), "non_primitive_component": i }),
                        )));
                    }
                }
                if d.reconstruct(triple)? != e {
                    return Ok(Some(with_degree(
                        k,
                        json!({ "monomial": idx.to_vec(), "reconstruction": "differs" }),
                    )));
                }
            }
        }
        Ok(None)
    })
}

pub fn check_primitive_vanishing(cache: &OperatorCache) -> Result<CheckReport> {
    let triple = cache.triple();
    let n = triple.n();
    first_failure("kahler.primitive_vanishing", n, || {
        for k in 0..=2 * n {
            let got = primitive_space_basis(k, triple)?.len();
            let expected = if k <= n {
                binomial(2 * n, k as isize) - binomial(2 * n, k as isize - 2)
            } else {
                0
            };
            if got != expected {
                return Ok(Some(with_degree(k, json!({ "dim": got, "expected": expected }))));
            }
        }
        Ok(None)
    })
}

pub fn check_primitive_injectivity(cache: &OperatorCache) -> Result<CheckReport> {
    let triple = cache.triple();
    let n = triple.n();
    first_failure("kahler.primitive_injectivity", n, || {
        for k in 0..=n {
            let prim = primitive_space_basis(k, triple)?;
            let l = cache.get(&Operator::LPow(n - k), k as isize)?;
            let basis = Basis::new(2 * n, k);
            let columns: Vec<_> = prim.iter().map(|b| l.mul_vec(&b.to_coords(&basis))).collect();
            let rank = Matrix::from_columns(l.rows(), &columns).rank();
            if rank != prim.len() {
                return Ok(Some(with_degree(k, json!({ "rank": rank, "dim": prim.len() }))));
            }
        }
        Ok(None)
    })
}

pub fn check_lefschetz_bijectivity(cache: &OperatorCache) -> Result<CheckReport> {
    let n = cache.triple().n();
    first_failure("kahler.lefschetz_bijectivity", n, || {
        for k in 0..=n {
            let rank = cache.get(&Operator::LPow(n - k), k as isize)?.rank();
            let expected = binomial(2 * n, k as isize);
            if rank != expected {
                return Ok(Some(with_degree(k, json!({ "rank": rank, "expected": expected }))));
            }
        }
        Ok(None)
    })
}

/// All eight checks for one triple, in table order.
pub fn kahler_checks(triple: &CompatibleTriple) -> Result<Vec<CheckReport>> {
    let cache = OperatorCache::new(triple);
    Ok(vec![
        check_star_squared(&cache)?,
        check_lambda_star(&cache)?,
        check_sl2(&cache)?,
        check_power_commutator(&cache)?,
        check_decomposition(&cache)?,
        check_primitive_vanishing(&cache)?,
        check_primitive_injectivity(&cache)?,
        check_lefschetz_bijectivity(&cache)?,
    ])
}
