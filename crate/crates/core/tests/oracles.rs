mod common;

use lefschetz::scalar::{factorial, int};
use lefschetz::{standard_symplectic_form, Vector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::*;

#[test]
fn oracle_permutations_are_complete() {
    let perms = permutations(4);
    assert_eq!(perms.len(), 24);
    let even = perms.iter().filter(|p| permutation_sign(p) == 1).count();
    assert_eq!(even, 12);
    let mut sorted = perms.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), 24);
}

#[test]
fn symplectic_powers_match_repeated_shuffles() {
    for n in 1..=4 {
        let omega = omega_terms(n);
        let mut oracle = vec![(Vec::new(), int(1))];
        let library = standard_symplectic_form(n).unwrap();
        for m in 1..=n {
            oracle = wedge_by_shuffles(2 * n, &oracle, 2 * (m - 1), &omega, 2);
            assert_eq!(terms_of(&library.power(m)), oracle, "n = {n}, m = {m}");
        }
    }
}

#[test]
fn top_power_on_interleaved_frame_is_factorial() {
    for n in 1..=4 {
        let frame = Vector::interleaved_frame(n, 1..=n);
        let raw: Vec<Vec<_>> = frame.iter().map(|v| v.coords().to_vec()).collect();
        let oracle = evaluate_by_permutations(&terms_of(&standard_symplectic_form(n).unwrap().power(n)), &raw);
        assert_eq!(oracle, factorial(n));
        assert_eq!(
            standard_symplectic_form(n).unwrap().power(n).evaluate(&frame).unwrap(),
            oracle
        );
    }
}

#[test]
fn wedge_is_graded_commutative_against_oracle() {
    let n = 3;
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..40 {
        let p = rng.gen_range(1..=3);
        let q = rng.gen_range(1..=3);
        let a = random_form(&mut rng, n, p, 4);
        let b = random_form(&mut rng, n, q, 4);
        let ab = form_of(n, p, &a).wedge(&form_of(n, q, &b)).unwrap();
        let ba = wedge_by_shuffles(2 * n, &b, q, &a, p);
        let sign = if p * q % 2 == 0 { int(1) } else { int(-1) };
        assert_eq!(ab.scale(&sign), form_of(n, p + q, &ba));
    }
}
