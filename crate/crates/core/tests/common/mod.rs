//! Brute-force oracles that share no code with the library's wedge,
//! evaluation or sign logic.

#![allow(dead_code)]

use lefschetz::scalar::{int, ratio};
use lefschetz::{Form, MultiIndex, Scalar, Vector};
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::Rng;

/// Sign of a permutation of `0..len` by counting inversions.
pub fn permutation_sign(p: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All permutations of `0..k` in Heap's order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k - 1 {
            heap(k - 1, a, out);
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
        heap(k - 1, a, out);
    }
    let mut a: Vec<usize> = (0..k).collect();
    let mut out = Vec::new();
    heap(k, &mut a, &mut out);
    out
}

/// `α(v_1, …, v_k) = Σ_I c_I Σ_σ sgn σ Π_i v_{σ(i)}[I_i]`.
pub fn evaluate_by_permutations(terms: &[(Vec<usize>, Scalar)], vectors: &[Vec<Scalar>]) -> Scalar {
    let k = vectors.len();
    let perms = permutations(k);
    let mut total = Scalar::zero();
    for (idx, c) in terms {
        assert_eq!(idx.len(), k);
        for p in &perms {
            let mut prod = int(permutation_sign(p));
            for i in 0..k {
                prod *= &vectors[p[i]][idx[i] - 1];
            }
            total += &prod * c;
        }
    }
    total
}

/// Coefficients of `α ^ β` on sorted index sets by the shuffle formula
/// `(α^β)_J = Σ_{S ⊂ J} sgn(S, J∖S) α_S β_{J∖S}`.
pub fn wedge_by_shuffles(
    dim: usize,
    alpha: &[(Vec<usize>, Scalar)],
    p: usize,
    beta: &[(Vec<usize>, Scalar)],
    q: usize,
) -> Vec<(Vec<usize>, Scalar)> {
    let lookup = |terms: &[(Vec<usize>, Scalar)], idx: &[usize]| -> Scalar {
        terms
            .iter()
            .find(|(i, _)| i.as_slice() == idx)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Scalar::zero)
    };
    let mut out = Vec::new();
    for j in subsets(&(1..=dim).collect::<Vec<_>>(), p + q) {
        let mut coeff = Scalar::zero();
        for positions in subsets(&(0..p + q).collect::<Vec<_>>(), p) {
            let s: Vec<usize> = positions.iter().map(|&i| j[i]).collect();
            let rest_pos: Vec<usize> = (0..p + q).filter(|i| !positions.contains(i)).collect();
            let rest: Vec<usize> = rest_pos.iter().map(|&i| j[i]).collect();
            let perm: Vec<usize> = positions.iter().chain(rest_pos.iter()).copied().collect();
            let a = lookup(alpha, &s);
            let b = lookup(beta, &rest);
            if !a.is_zero() && !b.is_zero() {
                coeff += &(&a * &b) * &int(permutation_sign(&perm));
            }
        }
        if !coeff.is_zero() {
            out.push((j, coeff));
        }
    }
    out
}

/// `size`-subsets of `items`, lexicographic.
pub fn subsets(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    if items.len() < size {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], size - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn terms_of(form: &Form) -> Vec<(Vec<usize>, Scalar)> {
    form.terms().iter().map(|(i, c)| (i.to_vec(), c.clone())).collect()
}

pub fn form_of(n: usize, degree: usize, terms: &[(Vec<usize>, Scalar)]) -> Form {
    Form::from_terms(
        n,
        degree,
        terms
            .iter()
            .map(|(i, c)| (MultiIndex::new(i, 2 * n).unwrap(), c.clone())),
    )
    .unwrap()
}

pub fn random_scalar(rng: &mut StdRng) -> Scalar {
    let num = rng.gen_range(-5i64..=5);
    let den = rng.gen_range(1i64..=4);
    ratio(num, den)
}

/// A sparse random form with up to `max_terms` monomials.
pub fn random_form(rng: &mut StdRng, n: usize, degree: usize, max_terms: usize) -> Vec<(Vec<usize>, Scalar)> {
    let all = subsets(&(1..=2 * n).collect::<Vec<_>>(), degree);
    let count = rng.gen_range(1..=max_terms.min(all.len()));
    let mut out: Vec<(Vec<usize>, Scalar)> = Vec::new();
    for _ in 0..count {
        let idx = all[rng.gen_range(0..all.len())].clone();
        if out.iter().all(|(i, _)| *i != idx) {
            let c = random_scalar(rng);
            if !c.is_zero() {
                out.push((idx, c));
            }
        }
    }
    out.sort();
    out
}

pub fn random_vectors(rng: &mut StdRng, n: usize, count: usize) -> Vec<Vec<Scalar>> {
    (0..count)
        .map(|_| (0..2 * n).map(|_| random_scalar(rng)).collect())
        .collect()
}

pub fn to_vectors(n: usize, raw: &[Vec<Scalar>]) -> Vec<Vector> {
    raw.iter().map(|v| Vector::new(n, v.clone()).unwrap()).collect()
}

/// `ω = Σ dx_i ^ dy_i` written out directly.
pub fn omega_terms(n: usize) -> Vec<(Vec<usize>, Scalar)> {
    (1..=n).map(|i| (vec![i, n + i], int(1))).collect()
}

/// `C(n, k)` by the multiplicative formula, `0` outside `0..=n`.
pub fn choose(n: i64, k: i64) -> usize {
    if k < 0 || k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}
