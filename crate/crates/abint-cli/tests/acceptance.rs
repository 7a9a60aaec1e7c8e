//! Acceptance criteria, one PASS/FAIL line each; exits non-zero if any fails.

use std::time::{Duration, Instant};

use abint::abelian::{full_report, integrate_eta, Problem};
use abint::algebra::{BiPoly, GaussRat, RatC, UniPoly};
use abint::catalog::{
    broughton_automorphism, broughton_normal_form, broughton_problem, bundled, oscillator_automorphism,
    oscillator_normal_form, oscillator_problem, BUNDLED,
};
use abint::family::{NormalForm, Shape};
use abint::oracle::check_report;
use abint::rectify::RectifyingMap;
use abint::sample::{random_form, random_normal_form, random_poly, CLASSES};
use abint::transform::{reduce_to_nonexact_basis, OneForm, PolyAutomorphism};
use abint_cli::run::generic_c_values;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { passed: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { passed: false, detail: detail.into() }
}

fn prod(fs: &[&[i64]]) -> UniPoly {
    fs.iter().fold(UniPoly::one(), |acc, f| &acc * &UniPoly::from_ints(f))
}

fn shape_0112() -> Shape {
    Shape { p1: 0, p: 1, q1: 1, q: 2, k: 1, poly_p: UniPoly::from_ints(&[-1]) }
}

fn golden(
    nf: NormalForm,
    w: OneForm,
    want: &[UniPoly],
    zeros: &[usize],
    n_bc: usize,
    limit: Duration,
) -> Outcome {
    let t = Instant::now();
    let rep = match full_report(&Problem::new(nf, w)) {
        Ok(r) => r,
        Err(e) => return fail(format!("pipeline error: {e}")),
    };
    let elapsed = t.elapsed();
    let got: Vec<UniPoly> = rep.integrals.iter().map(|a| a.value.clone()).collect();
    if got != want {
        let shown: Vec<String> = got.iter().map(|p| p.to_string()).collect();
        return fail(format!("integrals differ: {shown:?}"));
    }
    let z: Vec<Option<usize>> = zeros.iter().copied().map(Some).collect();
    if rep.zeros != z || rep.n_bc != Some(n_bc) {
        return fail(format!("zeros {:?}, N_BC {:?}", rep.zeros, rep.n_bc));
    }
    if elapsed > limit {
        return fail(format!("took {elapsed:?}, limit {limit:?}"));
    }
    pass(format!("exact integrals, Z = {zeros:?}, N_BC = {n_bc}, {elapsed:.2?}"))
}

fn criterion_1() -> Outcome {
    let nf = NormalForm::F2 { shape: shape_0112(), a: vec![1], beta: vec![GaussRat::one()] };
    let w = OneForm::dx(BiPoly::from_int_terms(&[(0, 3, 1), (1, 2, -108), (0, 1, -66)]));
    let want = [
        prod(&[&[3], &[1, 1], &[-58, -36, 0, 0, 0, 3, 4]]),
        prod(&[&[-3], &[-1, 1], &[2, 1], &[-58, 18, -2, 8, 3, 4]]),
    ];
    golden(nf, w, &want, &[6, 7], 13, Duration::from_secs(5))
}

fn criterion_2() -> Outcome {
    let nf = NormalForm::F1 { shape: shape_0112(), a: vec![1], beta: vec![GaussRat::one()] };
    let w = OneForm::dx(BiPoly::from_int_terms(&[(0, 3, 1), (2, 1, -96), (0, 1, 1008)]));
    let want = [
        prod(&[&[6], &[1, 1], &[168, 0, 0, 1, -1, -2, 2]]),
        prod(&[&[-6], &[-2, 1], &[252, 42, 21, 10, 5, 4, 2]]),
        prod(&[&[96], &[5, 2], &[-4, 1]]),
    ];
    golden(nf, w, &want, &[6, 7, 2], 15, Duration::from_secs(10))
}

/// Random form of degree exactly `n`.
fn random_form_of_degree(rng: &mut ChaCha8Rng, n: u32) -> OneForm {
    let mut w = random_form(rng, n);
    if w.degree() != Some(n) {
        let i = rng.gen_range(0..=n);
        let c = GaussRat::from_int(if rng.gen_bool(0.5) { 1 } else { -1 } * rng.gen_range(1..=9));
        w.a.add_term(i, n - i, &c);
    }
    w
}

/// Extremal zero counts plus `deg J ≤ bound(n)` on 200 random forms in original coordinates.
fn law(
    extremal: impl Fn(u32) -> Problem,
    extremal_ns: &[u32],
    zeros: impl Fn(u32) -> usize,
    nf: NormalForm,
    aut: PolyAutomorphism,
    hdeg: u32,
    bound: impl Fn(u32) -> usize,
    seed: u64,
) -> Outcome {
    let mut got = Vec::new();
    for &n in extremal_ns {
        let rep = match full_report(&extremal(n)) {
            Ok(r) => r,
            Err(e) => return fail(format!("n = {n}: {e}")),
        };
        let z = rep.zeros[0];
        if z != Some(zeros(n)) {
            return fail(format!("n = {n}: Z = {z:?}, expected {}", zeros(n)));
        }
        got.push(z.unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..200 {
        let n = 1 + (k % 9) as u32;
        let mut p = Problem::new(nf.clone(), random_form_of_degree(&mut rng, n));
        p.automorphism = Some(aut.clone());
        p.original_hamiltonian_degree = Some(hdeg);
        let rep = match full_report(&p) {
            Ok(r) => r,
            Err(e) => return fail(format!("random form {k}: {e}")),
        };
        let d = rep.integrals[0].degree().unwrap_or(0);
        if d > bound(n) {
            return fail(format!("random form {k} of degree {n}: deg J = {d} > {}", bound(n)));
        }
    }
    pass(format!("Z = {got:?} at n = {extremal_ns:?}; 200 random forms within the degree bound"))
}

fn criterion_3() -> Outcome {
    law(
        oscillator_problem,
        &[1, 3, 5, 7, 9],
        |n| ((n - 1) / 2) as usize,
        oscillator_normal_form(),
        oscillator_automorphism(),
        2,
        |n| ((n + 1) / 2) as usize,
        31,
    )
}

fn criterion_4() -> Outcome {
    law(
        broughton_problem,
        &[2, 5, 8],
        |n| ((n + 1) / 3) as usize,
        broughton_normal_form(),
        broughton_automorphism(),
        3,
        |n| ((n + 1) / 3) as usize,
        32,
    )
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let t = Instant::now();
    let mut checks = 0;
    for k in 0..500 {
        let nf = random_normal_form(&mut rng, CLASSES[k % 5], 9);
        let n = rng.gen_range(1..=5);
        let w = random_form_of_degree(&mut rng, n);
        let rep = match full_report(&Problem::new(nf.clone(), w)) {
            Ok(r) => r,
            Err(e) => return fail(format!("instance {k} ({nf:?}): {e}")),
        };
        if rep.facts.m() > 8 {
            return fail(format!("instance {k}: m = {} exceeds 8", rep.facts.m()));
        }
        if let Some(v) = rep.ledger.violations().first() {
            return fail(format!("instance {k}: {} ({} {} {})", v.name, v.observed, v.relation.symbol(), v.bound));
        }
        checks += rep.ledger.checks.len();
    }
    pass(format!("500 instances, {checks} ledger checks, all integrals polynomial, {:.1?}", t.elapsed()))
}

fn strict_relative(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let (mut exact_gap, mut fiber_gap) = (0.0f64, 0.0f64);
    for name in BUNDLED {
        let ex = bundled(name).expect("bundled");
        let rep = match full_report(&ex.problem) {
            Ok(r) => r,
            Err(e) => return fail(format!("{name}: {e}")),
        };
        for c in generic_c_values(&rep, 10, 0) {
            let checks = match check_report(&rep, c.to_complex(), 64) {
                Ok(v) => v,
                Err(e) => return fail(format!("{name} at c = {c}: {e}")),
            };
            for chk in checks {
                exact_gap = exact_gap.max(strict_relative(chk.rectified, chk.exact));
                fiber_gap = fiber_gap.max(strict_relative(chk.fiber, chk.rectified));
            }
        }
    }
    let elapsed = t.elapsed();
    let detail = format!(
        "max relative gap {exact_gap:.1e} numeric vs exact, {fiber_gap:.1e} fiber vs rectified, {elapsed:.1?}"
    );
    if exact_gap < 1e-8 && fiber_gap < 1e-8 && elapsed < Duration::from_secs(60) {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let mut poles = 0;
    for k in 0..100 {
        let nf = random_normal_form(&mut rng, CLASSES[k % 5], 9);
        let facts = nf.validate().expect("valid sample");
        let rm = RectifyingMap::build(&nf, &facts).expect("rectifier");
        let n = rng.gen_range(1..=5);
        let basis = reduce_to_nonexact_basis(&random_form_of_degree(&mut rng, n));
        let eta = rm.pushforward_dx(&basis.as_polynomial());
        let mut total = eta.residue_at_infinity();
        for (root, _) in eta.finite_poles() {
            poles += 1;
            match eta.residue(&root) {
                Ok(r) => total = &total + &r,
                Err(e) => return fail(format!("form {k}: {e}")),
            }
        }
        if total != RatC::zero() {
            return fail(format!("form {k}: residue sum {total}"));
        }
    }
    pass(format!("100 forms, {poles} finite poles, every residue sum exactly 0"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    let mut cycles = 0;
    for k in 0..100 {
        let nf = random_normal_form(&mut rng, CLASSES[k % 5], 9);
        let facts = nf.validate().expect("valid sample");
        let rm = RectifyingMap::build(&nf, &facts).expect("rectifier");
        let q = random_poly(&mut rng, 6, 0.4);
        let eta = rm.pushforward(&OneForm::exact(&q)).eta_t;
        for cycle in &rm.cycles {
            cycles += 1;
            match integrate_eta(&eta, cycle) {
                Ok(ai) if ai.value.is_zero() => {}
                Ok(ai) => return fail(format!("dQ {k} on cycle {}: {}", cycle.index, ai.value)),
                Err(e) => return fail(format!("dQ {k}: {e}")),
            }
        }
    }
    pass(format!("100 exact forms, {cycles} cycle integrals, all exactly 0"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("second-family golden integrals", criterion_1),
        ("first-family golden integrals with moving puncture", criterion_2),
        ("harmonic oscillator zero law and degree bound", criterion_3),
        ("Broughton zero law and degree bound", criterion_4),
        ("polynomiality and bound ledger on random instances", criterion_5),
        ("numeric oracle agreement on bundled examples", criterion_6),
        ("residue-sum identity", criterion_7),
        ("exact forms integrate to zero", criterion_8),
    ];
    let mut failed = Vec::new();
    for (i, (label, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = run();
        let verdict = if out.passed { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {}: {label}: {} [{:.2?}]", i + 1, out.detail, t.elapsed());
        if !out.passed {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
