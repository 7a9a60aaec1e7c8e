//! Random valid normal forms and one-forms, for property checks and stress runs.

use crate::algebra::{BiPoly, GaussRat, UniPoly};
use crate::family::{NormalForm, Shape};
use crate::transform::OneForm;
use rand::seq::SliceRandom;
use rand::Rng;

/// Sign class of a random instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    F1Plus,
    F1Minus,
    F2Plus,
    F2Minus,
    F3,
}

pub const CLASSES: [Class; 5] = [Class::F1Plus, Class::F1Minus, Class::F2Plus, Class::F2Minus, Class::F3];

/// Exponents `(p1, p, q1, q)` with `0 <= p1 < p`, `0 <= q1 < q` and `p·q1 − q·p1 = sign`.
fn exponents(sign: i64, max_degree: u32) -> Vec<(u32, u32, u32, u32)> {
    let mut out = Vec::new();
    for p in 1..=max_degree {
        for p1 in 0..p {
            for q in 1..=max_degree {
                for q1 in 0..q {
                    let s = p as i64 * q1 as i64 - q as i64 * p1 as i64;
                    // k = 1 and sum a >= 1
                    if s == sign && p1 + 2 * p + q1 + 2 * q <= max_degree {
                        out.push((p1, p, q1, q));
                    }
                }
            }
        }
    }
    out
}

fn small_gauss<R: Rng>(rng: &mut R) -> GaussRat {
    let re = rng.gen_range(-4..=4);
    let im = if rng.gen_bool(0.3) { rng.gen_range(-2..=2) } else { 0 };
    let den = *[1, 1, 1, 2, 3].choose(rng).unwrap();
    GaussRat::from_parts((re, den), (im, den))
}

fn nonzero_gauss<R: Rng>(rng: &mut R) -> GaussRat {
    loop {
        let g = small_gauss(rng);
        if !g.is_zero() {
            return g;
        }
    }
}

/// Distinct nonzero `beta` with positive `a` summing to at most `budget`.
fn roots<R: Rng>(rng: &mut R, count: usize, budget: u32) -> (Vec<u32>, Vec<GaussRat>) {
    let mut a = vec![1; count];
    let mut left = budget - count as u32;
    while left > 0 && rng.gen_bool(0.5) {
        let i = rng.gen_range(0..count);
        a[i] += 1;
        left -= 1;
    }
    let mut beta: Vec<GaussRat> = Vec::new();
    while beta.len() < count {
        let b = nonzero_gauss(rng);
        if !beta.contains(&b) {
            beta.push(b);
        }
    }
    (a, beta)
}

/// A random valid normal form of degree at most `max_degree`, with `k = 1`.
pub fn random_normal_form<R: Rng>(rng: &mut R, class: Class, max_degree: u32) -> NormalForm {
    match class {
        Class::F3 => {
            let count = rng.gen_range(1..=3.min(max_degree as usize - 1));
            let (a, beta) = roots(rng, count, max_degree - 1);
            let sum: u32 = a.iter().sum();
            let hdeg = rng.gen_range(0..sum) as usize;
            let h = UniPoly::new((0..=hdeg).map(|_| small_gauss(rng)).collect());
            NormalForm::F3 { a, beta, h }
        }
        Class::F2Plus if rng.gen_bool(0.25) => {
            // r = 1: (q1, q) are synthesized from (p1, p)
            let choices: Vec<(u32, u32)> = (1..=max_degree / 2)
                .flat_map(|p| (0..p).map(move |p1| (p1, p)))
                .filter(|&(p1, p)| num_integer::gcd(p1, p) == 1 && p1 + 2 * p <= max_degree)
                .collect();
            let &(p1, p) = choices.choose(rng).expect("admissible exponents");
            let shape = Shape { p1, p, q1: 0, q: 0, k: 1, poly_p: UniPoly::constant(small_gauss(rng)) };
            NormalForm::F2 { shape, a: Vec::new(), beta: Vec::new() }
        }
        _ => {
            let sign = if matches!(class, Class::F1Plus | Class::F2Plus) { 1 } else { -1 };
            let (p1, p, q1, q) = *exponents(sign, max_degree).choose(rng).expect("admissible exponents");
            let base = p1 + 2 * p;
            let per = q1 + 2 * q;
            let budget = (max_degree - base) / per;
            let count = rng.gen_range(1..=budget.min(3) as usize);
            let (a, beta) = roots(rng, count, budget);
            let shape = Shape { p1, p, q1, q, k: 1, poly_p: UniPoly::constant(small_gauss(rng)) };
            if matches!(class, Class::F1Plus | Class::F1Minus) {
                NormalForm::F1 { shape, a, beta }
            } else {
                NormalForm::F2 { shape, a, beta }
            }
        }
    }
}

/// Random polynomial of total degree at most `deg` with small integer coefficients.
pub fn random_poly<R: Rng>(rng: &mut R, deg: u32, density: f64) -> BiPoly {
    let mut p = BiPoly::zero();
    for i in 0..=deg {
        for j in 0..=(deg - i) {
            if rng.gen_bool(density) {
                let c = rng.gen_range(-9..=9);
                p.add_term(i, j, &GaussRat::from_int(c));
            }
        }
    }
    p
}

/// Random one-form `A dx + B dy` of degree at most `n`.
pub fn random_form<R: Rng>(rng: &mut R, n: u32) -> OneForm {
    OneForm::new(random_poly(rng, n, 0.5), random_poly(rng, n, 0.5))
}
