//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines always reach the test log; exits non-zero when any
//! criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use lefschetz::counterexample::{
    scaling_factor_check, verify_not_k_preserving, verify_volume_preserving, CounterexampleMap,
};
use lefschetz::injectivity::{certify_kernel, kernel_chain_check, proof_certificate_kernel, verify_injectivity};
use lefschetz::kahler::{
    check_decomposition, check_lambda_star, check_lefschetz_bijectivity, check_power_commutator,
    check_primitive_injectivity, check_primitive_vanishing, check_sl2, check_star_squared,
};
use lefschetz::lefschetz::{op_h, op_l, op_lambda, primitive_decompose, primitive_space_basis, OperatorCache};
use lefschetz::metric::CompatibleTriple;
use lefschetz::scalar::{int, pow, ratio};
use lefschetz::suite::orbit_seeds;
use lefschetz::symplectic::{check_orbit_seed, construct_large_family, orbit_span, span_proof_report};
use lefschetz::{standard_symplectic_form, Basis, Form};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: lefschetz::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// `[L^i, Λ] α = i(k - n + i - 1) L^{i-1} α` with `L^i` applied as repeated
/// wedging by `ω` written out here. Requires `2 <= k` and `k + 2i <= 2n`.
fn power_commutator_on(alpha: &Form, i: usize, triple: &CompatibleTriple) -> Result<bool, String> {
    let n = alpha.n();
    let k = alpha.degree() as i64;
    let omega = form_of(n, 2, &omega_terms(n));
    let l_pow =
        |a: &Form, p: usize| -> Result<Form, String> { (0..p).try_fold(a.clone(), |acc, _| lib(omega.wedge(&acc))) };
    let first = l_pow(&lib(op_lambda(alpha, triple))?, i)?;
    let second = lib(op_lambda(&l_pow(alpha, i)?, triple))?;
    let commutator = lib(first.checked_add(&second.scale(&int(-1))))?;
    let factor = int(i as i64 * (k - n as i64 + i as i64 - 1));
    Ok(commutator == l_pow(alpha, i - 1)?.scale(&factor))
}

fn criterion_kahler() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x6b61);
    for n in 2..=5 {
        let triple = lib(CompatibleTriple::standard(n))?;
        let cache = OperatorCache::new(&triple);
        for report in [
            lib(check_star_squared(&cache))?,
            lib(check_lambda_star(&cache))?,
            lib(check_sl2(&cache))?,
            lib(check_power_commutator(&cache))?,
        ] {
            ensure(report.passed(), || {
                format!("{} failed at n = {n}: {:?}", report.check, report.witness)
            })?;
        }
        // Spot checks on random forms against values computed here.
        for _ in 0..6 {
            let k = rng.gen_range(2..=2 * n - 2);
            let alpha = form_of(n, k, &random_form(&mut rng, n, k, 4));
            let star = lib(triple.hodge_star(&alpha))?;
            let star2 = lib(triple.hodge_star(&star))?;
            let sign = if k % 2 == 0 { int(1) } else { int(-1) };
            ensure(star2 == alpha.scale(&sign), || {
                format!("star twice at n = {n}, k = {k}")
            })?;
            let h = lib(op_h(&alpha, &triple))?;
            ensure(h == alpha.scale(&int(k as i64 - n as i64)), || {
                format!("H at n = {n}, k = {k}")
            })?;
            let bracket = lib(lib(op_lambda(&lib(op_l(&alpha, &triple))?, &triple))?
                .scale(&int(-1))
                .checked_add(&lib(op_l(&lib(op_lambda(&alpha, &triple))?, &triple))?))?;
            ensure(bracket == h, || format!("[L, Lambda] at n = {n}, k = {k}"))?;
            for i in (1..=n.min(3)).filter(|i| k + 2 * i <= 2 * n) {
                ensure(power_commutator_on(&alpha, i, &triple)?, || {
                    format!("[L^{i}, Lambda] at n = {n}, k = {k}")
                })?;
            }
        }
    }
    Ok("parts 1-4 exact for n = 2..5, all degrees".into())
}

fn criterion_lefschetz_structure() -> Outcome {
    for n in 1..=4 {
        let triple = lib(CompatibleTriple::standard(n))?;
        let cache = OperatorCache::new(&triple);
        for report in [
            lib(check_primitive_vanishing(&cache))?,
            lib(check_primitive_injectivity(&cache))?,
            lib(check_lefschetz_bijectivity(&cache))?,
            lib(check_decomposition(&cache))?,
        ] {
            ensure(report.passed(), || {
                format!("{} failed at n = {n}: {:?}", report.check, report.witness)
            })?;
        }
        for k in 0..=2 * n {
            let expected = if k <= n {
                choose(2 * n as i64, k as i64) - choose(2 * n as i64, k as i64 - 2)
            } else {
                0
            };
            let got = lib(primitive_space_basis(k, &triple))?.len();
            ensure(got == expected, || {
                format!("dim P^{k} = {got}, expected {expected} at n = {n}")
            })?;
        }
        // Reconstruction of every basis monomial, independently of the report.
        for k in 0..=2 * n {
            for idx in Basis::new(2 * n, k).elems() {
                let mono = lib(Form::from_terms(n, k, [(idx.clone(), int(1))]))?;
                let decomposition = lib(primitive_decompose(&mono, &triple))?;
                let rebuilt = lib(decomposition.reconstruct(&triple))?;
                ensure(rebuilt == mono, || format!("{idx:?} at n = {n} not reconstructed"))?;
            }
        }
    }
    Ok("dim P^k, rank of L^{n-k} and decomposition exact for n <= 4".into())
}

fn criterion_wedge_injectivity() -> Outcome {
    for n in 3..=5 {
        for k in 1..n {
            let rank = lib(verify_injectivity(n, k))?;
            let witness = rank.witness.clone().unwrap_or_default();
            ensure(rank.passed() && witness["kernel_dim"] == 0, || {
                format!("kernel nonzero at n = {n}, k = {k}")
            })?;
            ensure(witness["rank"] == choose(2 * n as i64, 2), || {
                format!("rank at n = {n}, k = {k}")
            })?;
            let report = lib(proof_certificate_kernel(n, k))?;
            ensure(report.passed(), || {
                format!("certificate failed at n = {n}, k = {k}: {:?}", report.witness)
            })?;
            let cert = lib(certify_kernel(n, k))?.map_err(|f| format!("{f:?}"))?;
            if k >= 2 {
                let factor = int(-(k as i64 - 1));
                ensure(!cert.relations.is_empty(), || {
                    format!("no relations at n = {n}, k = {k}")
                })?;
                ensure(cert.relations.iter().all(|r| r.factor == factor), || {
                    format!("relation factor differs from -(k-1) at n = {n}, k = {k}")
                })?;
            }
        }
        let contrast = lib(verify_injectivity(n, n))?;
        let expected = choose(2 * n as i64, 2) - 1;
        ensure(
            contrast.passed() && contrast.witness.as_ref().unwrap()["kernel_dim"] == expected,
            || format!("contrast kernel at n = {n}"),
        )?;
    }
    let base = lib(certify_kernel(3, 2))?.map_err(|f| format!("{f:?}"))?;
    let chain = base.chain.clone().unwrap_or_default();
    ensure(chain == "b_11 = -b_22 = b_33 = -b_11", || {
        format!("base chain {chain:?}")
    })?;
    let general: Vec<String> = lib(certify_kernel(4, 3))?
        .map_err(|f| format!("{f:?}"))?
        .relations
        .iter()
        .map(|r| r.to_string())
        .collect();
    ensure(general.iter().any(|r| r == "b_11 = -2 b_22"), || {
        format!("relations {general:?}")
    })?;
    Ok(format!(
        "zero kernel for n = 3..5, 0 < k < n; chain \"{chain}\"; contrast kernel C(2n,2) - 1"
    ))
}

fn criterion_kernel_chain() -> Outcome {
    for n in 2..=5 {
        for k in 1..=n {
            let r = lib(kernel_chain_check(n, k))?;
            ensure(r.passed(), || {
                format!("chain fails at n = {n}, k = {k}: {:?}", r.witness)
            })?;
        }
    }
    Ok("ker(^w^{k-1}) inside ker(^w^{n-1}) for 0 < k <= n <= 5".into())
}

fn criterion_orbit_span() -> Outcome {
    for n in 2..=3 {
        let seeds = lib(orbit_seeds(n))?;
        ensure(seeds.len() >= 3, || "fewer than three seeds".into())?;
        let omega = lib(standard_symplectic_form(n))?;
        for (a, s) in seeds.iter().enumerate() {
            lib(check_orbit_seed(s))?;
            ensure(!s.power(n).is_zero(), || format!("seed {a} degenerate"))?;
            // Pairwise non-proportional, and not a multiple of ω.
            for t in seeds[a + 1..].iter().chain(std::iter::once(&omega)) {
                let basis = Basis::new(2 * n, 2);
                let (u, v) = (s.to_coords(&basis), t.to_coords(&basis));
                let proportional = (0..u.len()).all(|i| (0..u.len()).all(|j| &u[i] * &v[j] == &u[j] * &v[i]));
                ensure(!proportional, || format!("seed {a} proportional to another form"))?;
            }
            let span = lib(orbit_span(s, 4))?;
            ensure(span.rank() == choose(2 * n as i64, 2), || {
                format!("seed {a} reaches rank {} at n = {n}", span.rank())
            })?;
        }
        let proof = lib(span_proof_report(n))?;
        ensure(proof.passed(), || {
            format!("proof steps fail at n = {n}: {:?}", proof.witness)
        })?;
        let text = proof.witness.as_ref().map(|w| w.to_string()).unwrap_or_default();
        ensure(text.contains("f_{1,2}^*(dx1^dy1) - dx1^dy1 = dx1^dy2"), || {
            "f_ij identity missing".into()
        })?;
        ensure(text.contains(&format!("(1/{n})")), || {
            "averaging identity missing".into()
        })?;
    }
    Ok("four seeds reach C(2n,2) within budget 4 for n = 2, 3; proof steps hold".into())
}

fn criterion_large_family() -> Outcome {
    for n in 2..=3 {
        let family = lib(construct_large_family(n, None, 4))?;
        let target = choose(2 * n as i64, 2 * n as i64 - 2);
        ensure(family.rank == target && family.is_complete(), || {
            format!("rank {} of {target} at n = {n}", family.rank)
        })?;
        let volume = lib(standard_symplectic_form(n))?.power(n);
        for m in &family.members {
            ensure(m.form.power(n) == volume, || format!("member changes w^n at n = {n}"))?;
        }
        ensure(family.members.len() >= target, || "too few members".into())?;
        ensure(lib(family.members_reproduce())?, || "members do not reproduce".into())?;
    }
    Ok("rank C(2n,2n-2) with w_i^n = w^n for n = 2, 3".into())
}

fn criterion_counterexample() -> Outcome {
    for n in 2..=5 {
        for s in [int(2), int(3), ratio(3, 2)] {
            let f = lib(CounterexampleMap::new(n, s.clone()))?;
            let omega = lib(standard_symplectic_form(n))?;
            let volume = omega.power(n);
            ensure(lib(f.pullback(&volume))? == volume, || {
                format!("volume changes at n = {n}")
            })?;
            ensure(lib(verify_volume_preserving(&f))?.passed(), || "volume report".into())?;
            for k in 1..n {
                let r = lib(verify_not_k_preserving(&f, k))?;
                let w = r.witness.clone().unwrap_or_default();
                ensure(r.passed() && w.get("monomial").is_some(), || {
                    format!("no witness at n = {n}, k = {k}")
                })?;
                let idx: Vec<usize> = serde_json::from_value(w["monomial"].clone()).map_err(|e| e.to_string())?;
                let power = omega.power(k);
                let before = power.coefficient_of(&idx);
                let after = lib(f.pullback(&power))?.coefficient_of(&idx);
                ensure(before != after, || format!("witness {idx:?} does not differ"))?;
            }
            let r = lib(scaling_factor_check(n, s.clone()))?;
            let expected = pow(&s, 2 * n as i64 - 2);
            ensure(r.passed(), || format!("scaling fails at n = {n}"))?;
            ensure(
                r.witness.as_ref().unwrap()["ratio"] == lefschetz::scalar::format_scalar(&expected),
                || format!("ratio differs from s^(2n-2) at n = {n}"),
            )?;
        }
    }
    Ok("w^n kept, w^k moved with witnesses, ratio s^(2n-2) for n = 2..5, s in {2, 3, 3/2}".into())
}

fn criterion_cross_oracle() -> Outcome {
    let n = 3;
    let mut rng = StdRng::seed_from_u64(20261016);
    for case in 0..100 {
        let p = rng.gen_range(0..=4);
        let q = rng.gen_range(0..=(2 * n - p).min(3));
        let a_terms = random_form(&mut rng, n, p, 5);
        let b_terms = random_form(&mut rng, n, q, 5);
        let alpha = form_of(n, p, &a_terms);
        let beta = form_of(n, q, &b_terms);
        let raw = random_vectors(&mut rng, n, p);
        let got = lib(alpha.evaluate(&to_vectors(n, &raw)))?;
        let want = evaluate_by_permutations(&a_terms, &raw);
        ensure(got == want, || format!("case {case}: evaluate {got} vs {want}"))?;
        let product = lib(alpha.wedge(&beta))?;
        let oracle = wedge_by_shuffles(2 * n, &a_terms, p, &b_terms, q);
        ensure(terms_of(&product) == oracle, || format!("case {case}: wedge differs"))?;
        let raw = random_vectors(&mut rng, n, p + q);
        let got = lib(product.evaluate(&to_vectors(n, &raw)))?;
        let want = evaluate_by_permutations(&oracle, &raw);
        ensure(got == want, || {
            format!("case {case}: evaluate of wedge {got} vs {want}")
        })?;
    }
    Ok("100 seeded n = 3 instances agree exactly".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("kahler identities", criterion_kahler),
        ("lefschetz structure", criterion_lefschetz_structure),
        ("wedge injectivity on 2-forms", criterion_wedge_injectivity),
        ("kernel chain", criterion_kernel_chain),
        ("orbit span", criterion_orbit_span),
        ("large family", criterion_large_family),
        ("volume-preserving counterexample", criterion_counterexample),
        ("cross-oracle agreement", criterion_cross_oracle),
    ];
    let mut failures = 0;
    for (number, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): pass [{secs:.1}s] {detail}", number + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {} ({name}): FAIL [{secs:.1}s] {why}", number + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
