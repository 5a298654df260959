//! The diagonal map `f_s = diag(s, …, s, s, …, s, s^{1-2n})` (scale `s` on
//! every `x_i` and on `y_1 … y_{n-1}`) preserves `ω^n` but no `ω^k` with
//! `0 < k < n`.
//!
//! Storage coefficients of `ω^k` carry the block-ordering sign of the sorted
//! index `(x_I, y_I)`; witnesses therefore also report the coefficient on
//! the interleaved order `dx_i ^ dy_i ^ …`, which is `k!` for `ω^k`.

use num_traits::{One, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::form::{standard_symplectic_form, Form};
use crate::linear_map::{LinearMap, Vector};
use crate::report::CheckReport;
use crate::scalar::{format_scalar, is_positive, pow, sign_power, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleMap {
    n: usize,
    scale: Scalar,
    map: LinearMap,
}

impl CounterexampleMap {
    /// Requires `n ≥ 2` and `s > 1`.
    pub fn new(n: usize, s: Scalar) -> Result<Self> {
        if s <= Scalar::one() {
            return Err(Error::InvalidArgument(format!(
                "scale must exceed 1, got {}",
                format_scalar(&s)
            )));
        }
        Self::build(n, s)
    }

    /// `s = 1`, the identity; kept separate so `new` can insist on `s > 1`.
    pub fn identity(n: usize) -> Result<Self> {
        Self::build(n, Scalar::one())
    }

    fn build(n: usize, s: Scalar) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall { min: 2, got: n });
        }
        let mut diag = vec![s.clone(); 2 * n];
        diag[2 * n - 1] = pow(&s, 1 - 2 * n as i64);
        let map = LinearMap::diagonal(n, diag)?;
        if !map.determinant().is_one() {
            return Err(Error::NotVolumePreserving("determinant is not 1".into()));
        }
        Ok(CounterexampleMap { n, scale: s, map })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> &Scalar {
        &self.scale
    }

    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    pub fn is_trivial(&self) -> bool {
        self.scale.is_one()
    }

    /// `f_s ∘ f_t = f_{st}`.
    pub fn compose(&self, other: &CounterexampleMap) -> Result<CounterexampleMap> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Self::build(self.n, &self.scale * &other.scale)
    }

    pub fn pullback(&self, a: &Form) -> Result<Form> {
        a.pullback(&self.map)
    }
}

pub fn counterexample_map(n: usize, s: Scalar) -> Result<CounterexampleMap> {
    CounterexampleMap::new(n, s)
}

fn params(f: &CounterexampleMap) -> serde_json::Value {
    json!({ "n": f.n, "scale": format_scalar(&f.scale) })
}

/// Passes iff `f^* ω^n = ω^n`.
pub fn verify_volume_preserving(f: &CounterexampleMap) -> Result<CheckReport> {
    let top = standard_symplectic_form(f.n)?.power(f.n);
    let pulled = f.pullback(&top)?;
    let (idx, original) = top.terms().iter().next().expect("ω^n is nonzero");
    Ok(CheckReport::new(
        "counterexample.volume",
        params(f),
        pulled == top,
        Some(json!({
            "monomial": idx.to_vec(),
            "pulled_back": format_scalar(&pulled.coefficient(idx)),
            "original": format_scalar(original),
            "trivial": f.is_trivial(),
        })),
    ))
}

/// Passes iff `f^* ω^k ≠ ω^k`; the witness is the lexicographically smallest
/// monomial where the coefficients differ.
pub fn verify_not_k_preserving(f: &CounterexampleMap, k: usize) -> Result<CheckReport> {
    if k == 0 || k >= f.n {
        return Err(Error::InvalidArgument(format!(
            "k must satisfy 0 < k < n, got k={k}, n={}",
            f.n
        )));
    }
    let wk = standard_symplectic_form(f.n)?.power(k);
    let pulled = f.pullback(&wk)?;
    let mut support: Vec<_> = wk.terms().keys().chain(pulled.terms().keys()).cloned().collect();
    support.sort();
    support.dedup();
    let witness = support
        .into_iter()
        .find(|idx| wk.coefficient(idx) != pulled.coefficient(idx))
        .map(|idx| {
            let interleaved = interleave(&idx.to_vec(), f.n);
            json!({
                "monomial": idx.to_vec(),
                "pulled_back": format_scalar(&pulled.coefficient(&idx)),
                "original": format_scalar(&wk.coefficient(&idx)),
                "interleaved_order": interleaved,
                "pulled_back_interleaved": format_scalar(&pulled.coefficient_of(&interleaved)),
                "original_interleaved": format_scalar(&wk.coefficient_of(&interleaved)),
            })
        });
    let mut p = params(f);
    p["k"] = json!(k);
    Ok(CheckReport::new(
        "counterexample.not_preserving",
        p,
        witness.is_some(),
        witness,
    ))
}

/// Reorders a sorted index so each `x_i` is followed by its `y_i` when present.
fn interleave(idx: &[usize], n: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(idx.len());
    for &i in idx.iter().filter(|&&i| i <= n) {
        out.push(i);
        if idx.contains(&(n + i)) {
            out.push(n + i);
        }
    }
    out.extend(idx.iter().filter(|&&j| j > n && !idx.contains(&(j - n))));
    out
}

/// `ω^{n-1}` and `f^* ω^{n-1}` on `(e_1, e_1', …, e_{n-1}, e_{n-1}')`; passes
/// iff their ratio is `s^{2n-2}`. The tuple on planes `2..=n`, which contains
/// `e_n'`, is reported alongside (ratio `s^{-2}`). `s = 1` uses the identity.
pub fn scaling_factor_check(n: usize, s: Scalar) -> Result<CheckReport> {
    if !is_positive(&s) || s < Scalar::one() {
        return Err(Error::InvalidArgument(format!(
            "scale must be at least 1, got {}",
            format_scalar(&s)
        )));
    }
    let f = if s.is_one() {
        CounterexampleMap::identity(n)?
    } else {
        CounterexampleMap::new(n, s.clone())?
    };
    let w = standard_symplectic_form(n)?.power(n - 1);
    let pulled = f.pullback(&w)?;
    let ratio_on = |planes: Vec<usize>| -> Result<(Scalar, Scalar, Scalar)> {
        let frame = Vector::interleaved_frame(n, planes);
        let before = w.evaluate(&frame)?;
        let after = pulled.evaluate(&frame)?;
        let r = if before.is_zero() {
            Scalar::zero()
        } else {
            &after / &before
        };
        Ok((before, after, r))
    };
    let (before, after, ratio) = ratio_on((1..n).collect())?;
    let expected = pow(&s, 2 * n as i64 - 2);
    let (before_n, after_n, ratio_n) = ratio_on((2..=n).collect())?;
    let stated_sign = sign_power(n);
    let stated_magnitude = crate::scalar::factorial(n - 1);
    Ok(CheckReport::new(
        "counterexample.scaling",
        params(&f),
        ratio == expected,
        Some(json!({
            "tuple": "e_1, e_1', …, e_{n-1}, e_{n-1}'",
            "original": format_scalar(&before),
            "pulled_back": format_scalar(&after),
            "ratio": format_scalar(&ratio),
            "expected_ratio": format_scalar(&expected),
            "stated_value": format_scalar(&(&stated_sign * &stated_magnitude)),
            "sign_convention": "ω^m(e_1, e_1', …, e_m, e_m') = m! with ω = Σ dx_i ^ dy_i",
            "tuple_with_plane_n": {
                "tuple": "e_2, e_2', …, e_n, e_n'",
                "original": format_scalar(&before_n),
                "pulled_back": format_scalar(&after_n),
                "ratio": format_scalar(&ratio_n),
            },
        })),
    ))
}

/// Volume check, every non-preservation check and the scaling ratio for one map.
pub fn counterexample_checks(n: usize, s: &Scalar) -> Result<Vec<CheckReport>> {
    let f = CounterexampleMap::new(n, s.clone())?;
    let mut out = vec![verify_volume_preserving(&f)?];
    for k in 1..n {
        out.push(verify_not_k_preserving(&f, k)?);
    }
    out.push(scaling_factor_check(n, s.clone())?);
    Ok(out)
}

/// Only the checks for one `k`, as requested on the command line.
pub fn counterexample_checks_for_k(n: usize, s: &Scalar, k: usize) -> Result<Vec<CheckReport>> {
    let f = CounterexampleMap::new(n, s.clone())?;
    Ok(vec![
        verify_volume_preserving(&f)?,
        verify_not_k_preserving(&f, k)?,
        scaling_factor_check(n, s.clone())?,
    ])
}
