//! Bundled worked examples: the harmonic oscillator, Broughton's polynomial,
//! two multi-cycle normal forms and a generic type (0,2) polynomial.

use crate::abelian::Problem;
use crate::algebra::{BiPoly, GaussRat, UniPoly};
use crate::family::{NormalForm, Shape};
use crate::transform::{OneForm, PolyAutomorphism};

/// A named problem with its known exact integrals and zero counts, when available.
#[derive(Clone, Debug)]
pub struct Example {
    pub name: &'static str,
    pub summary: &'static str,
    pub problem: Problem,
    pub golden_integrals: Option<Vec<UniPoly>>,
    pub golden_zeros: Option<Vec<usize>>,
}

pub const BUNDLED: [&str; 5] = ["oscillator", "broughton", "f2_type03", "f1_type04", "type02_generic"];

/// Looks up a bundled example by name.
pub fn bundled(name: &str) -> Option<Example> {
    match name {
        "oscillator" => Some(oscillator_example()),
        "broughton" => Some(broughton_example()),
        "f2_type03" => Some(f2_type03()),
        "f1_type04" => Some(f1_type04()),
        "type02_generic" => Some(type02_generic()),
        _ => None,
    }
}

fn g(re: i64) -> GaussRat {
    GaussRat::from_int(re)
}

fn poly(c: &[i64]) -> UniPoly {
    UniPoly::from_ints(c)
}

fn prod(fs: &[UniPoly]) -> UniPoly {
    fs.iter().fold(UniPoly::one(), |a, b| &a * b)
}

/// `(u² + v²)/2`.
pub fn oscillator_hamiltonian() -> BiPoly {
    BiPoly::from_terms([((2, 0), GaussRat::from_frac(1, 2)), ((0, 2), GaussRat::from_frac(1, 2))])
}

/// `ψ(u, v) = (1 − u − iv, (u − iv)/2)` with `σ = id`, taking the oscillator to `y(1 − x)`.
pub fn oscillator_automorphism() -> PolyAutomorphism {
    let i = GaussRat::i();
    let half = GaussRat::from_frac(1, 2);
    let forward = (
        BiPoly::from_terms([((0, 0), g(1)), ((1, 0), g(-1)), ((0, 1), -&i)]),
        BiPoly::from_terms([((1, 0), half.clone()), ((0, 1), -&(&i * &half))]),
    );
    // u = (1 − x + 2y)/2, v = −i(1 − x − 2y)/2
    let inverse = (
        BiPoly::from_terms([((0, 0), half.clone()), ((1, 0), -&half), ((0, 1), g(1))]),
        BiPoly::from_terms([((0, 0), -&(&i * &half)), ((1, 0), &i * &half), ((0, 1), i.clone())]),
    );
    PolyAutomorphism::new(forward, inverse, g(1), g(0)).expect("oscillator automorphism")
}

/// `y(1 − x)`.
pub fn oscillator_normal_form() -> NormalForm {
    NormalForm::F3 { a: vec![1], beta: vec![g(1)], h: UniPoly::zero() }
}

/// `ψ^*(A(y(1 − x))·y dx)` with `A(c) = ∏(c − c_i)`, of degree `2s + 1`.
pub fn oscillator_extremal_form(roots: &[GaussRat]) -> OneForm {
    let hn = BiPoly::from_int_terms(&[(0, 1, 1), (1, 1, -1)]);
    let a = roots.iter().fold(BiPoly::one(), |acc, c| &acc * &(&hn - &BiPoly::constant(c.clone())));
    oscillator_automorphism().pullback_oneform(&OneForm::dx(&a * &BiPoly::y()))
}

/// Oscillator problem for the extremal form of odd degree `n`.
pub fn oscillator_problem(n: u32) -> Problem {
    let s = (n.saturating_sub(1) / 2) as i64;
    let roots: Vec<GaussRat> = (1..=s).map(g).collect();
    let mut p = Problem::new(oscillator_normal_form(), oscillator_extremal_form(&roots));
    p.automorphism = Some(oscillator_automorphism());
    p.original_hamiltonian_degree = Some(2);
    p
}

fn oscillator_example() -> Example {
    Example {
        name: "oscillator",
        summary: "harmonic oscillator (u^2+v^2)/2 with the extremal degree-5 form",
        problem: oscillator_problem(5),
        // −c(c − 1)(c − 2)
        golden_integrals: Some(vec![prod(&[poly(&[0, -1]), poly(&[-1, 1]), poly(&[-2, 1])])]),
        golden_zeros: Some(vec![2]),
    }
}

/// `u(uv − 1)`.
pub fn broughton_hamiltonian() -> BiPoly {
    BiPoly::from_int_terms(&[(2, 1, 1), (1, 0, -1)])
}

/// The involution `ψ(u, v) = (1 − u, v)` with `σ = id`.
pub fn broughton_automorphism() -> PolyAutomorphism {
    let psi = (BiPoly::from_int_terms(&[(0, 0, 1), (1, 0, -1)]), BiPoly::y());
    PolyAutomorphism::new(psi.clone(), psi, g(1), g(0)).expect("broughton automorphism")
}

/// `y(1 − x)² + (x − 1)`.
pub fn broughton_normal_form() -> NormalForm {
    NormalForm::F3 { a: vec![2], beta: vec![g(1)], h: poly(&[-1, 1]) }
}

/// `−(v^n − s(u^(2s−1)·v^s − v)) du` with `s = [(n + 1)/3]`.
pub fn broughton_extremal_form(n: u32) -> OneForm {
    let s = (n + 1) / 3;
    let si = s as i64;
    let mut a = BiPoly::monomial(0, n, g(-1));
    if s > 0 {
        a.add_term(2 * s - 1, s, &g(si));
        a.add_term(0, 1, &g(-si));
    }
    OneForm::dx(a)
}

pub fn broughton_problem(n: u32) -> Problem {
    let mut p = Problem::new(broughton_normal_form(), broughton_extremal_form(n));
    p.automorphism = Some(broughton_automorphism());
    p.original_hamiltonian_degree = Some(3);
    p
}

fn broughton_example() -> Example {
    Example {
        name: "broughton",
        summary: "Broughton's polynomial u(uv-1) with the extremal degree-5 form",
        problem: broughton_problem(5),
        // s(c^s − 1) with s = 2
        golden_integrals: Some(vec![poly(&[-2, 0, 2])]),
        golden_zeros: Some(vec![2]),
    }
}

fn shape_0112() -> Shape {
    Shape { p1: 0, p: 1, q1: 1, q: 2, k: 1, poly_p: poly(&[-1]) }
}

/// `(xy − 1)(1 − x(xy − 1)²)` with `y(y² − 108xy − 66) dx`.
fn f2_type03() -> Example {
    let nf = NormalForm::F2 { shape: shape_0112(), a: vec![1], beta: vec![g(1)] };
    let w = OneForm::dx(BiPoly::from_int_terms(&[(0, 3, 1), (1, 2, -108), (0, 1, -66)]));
    Example {
        name: "f2_type03",
        summary: "isotrivial type (0,3) polynomial (xy-1)(1-x(xy-1)^2) in the second family",
        problem: Problem::new(nf, w),
        golden_integrals: Some(vec![
            prod(&[poly(&[3]), poly(&[1, 1]), poly(&[-58, -36, 0, 0, 0, 3, 4])]),
            prod(&[poly(&[-3]), poly(&[-1, 1]), poly(&[2, 1]), poly(&[-58, 18, -2, 8, 3, 4])]),
        ]),
        golden_zeros: Some(vec![6, 7]),
    }
}

/// First-family type (0,4) polynomial with the moving puncture `t = 𝔠`, and `y(y² − 96x² + 1008) dx`.
fn f1_type04() -> Example {
    let nf = NormalForm::F1 { shape: shape_0112(), a: vec![1], beta: vec![g(1)] };
    let w = OneForm::dx(BiPoly::from_int_terms(&[(0, 3, 1), (2, 1, -96), (0, 1, 1008)]));
    Example {
        name: "f1_type04",
        summary: "non-isotrivial type (0,4) polynomial in the first family",
        problem: Problem::new(nf, w),
        golden_integrals: Some(vec![
            prod(&[poly(&[6]), poly(&[1, 1]), poly(&[168, 0, 0, 1, -1, -2, 2])]),
            prod(&[poly(&[-6]), poly(&[-2, 1]), poly(&[252, 42, 21, 10, 5, 4, 2])]),
            prod(&[poly(&[96]), poly(&[5, 2]), poly(&[-4, 1])]),
        ]),
        golden_zeros: Some(vec![6, 7, 2]),
    }
}

/// `x(x²y + 1 + x)²`, a type (0,2) normal form, with a degree-8 form.
fn type02_generic() -> Example {
    let shape = Shape { p1: 1, p: 2, q1: 0, q: 0, k: 2, poly_p: poly(&[1, 1]) };
    let nf = NormalForm::F2 { shape, a: Vec::new(), beta: Vec::new() };
    let w = OneForm::new(
        BiPoly::from_int_terms(&[(6, 2, 1), (3, 1, -2), (0, 1, 5), (2, 3, 1)]),
        BiPoly::from_int_terms(&[(1, 0, 1), (4, 2, 3)]),
    );
    Example {
        name: "type02_generic",
        summary: "type (0,2) polynomial x(x^2 y + 1 + x)^2 with a degree-8 form",
        problem: Problem::new(nf, w),
        golden_integrals: None,
        golden_zeros: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::full_report;

    #[test]
    fn automorphisms_reach_their_normal_forms() {
        let osc = oscillator_automorphism().pushforward_polynomial(&oscillator_hamiltonian());
        let nf = oscillator_normal_form();
        assert_eq!(osc, nf.expand(&nf.validate().unwrap()));
        let br = broughton_automorphism().pushforward_polynomial(&broughton_hamiltonian());
        let nf = broughton_normal_form();
        assert_eq!(br, nf.expand(&nf.validate().unwrap()));
    }

    #[test]
    fn every_bundled_example_matches_its_golden() {
        for name in BUNDLED {
            let ex = bundled(name).unwrap();
            let rep = full_report(&ex.problem).unwrap();
            if let Some(gold) = &ex.golden_integrals {
                let got: Vec<UniPoly> = rep.integrals.iter().map(|a| a.value.clone()).collect();
                assert_eq!(&got, gold, "{name}");
            }
            if let Some(z) = &ex.golden_zeros {
                let got: Vec<usize> = rep.zeros.iter().map(|z| z.unwrap()).collect();
                assert_eq!(&got, z, "{name}");
            }
            assert!(rep.ledger.satisfied(), "{name}: {:?}", rep.ledger.violations());
        }
    }
}
