//! The three Neumann-Norbury normal-form families and their structural data.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::algebra::{BiPoly, GaussRat, UniPoly, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid family: {0}")]
    Invalid(String),
    #[error("invalid family: F3 with r = 1 has no cycles (a and beta must be nonempty)")]
    NoCycles,
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, FamilyError> {
    Err(FamilyError::Invalid(msg.into()))
}

/// Exponent data shared by the first two families.
///
/// `S = x^k·y + P(x)`, `G = x^q1·S^q`, and the family polynomial carries `x^p1·S^p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    pub p1: u32,
    pub p: u32,
    pub q1: u32,
    pub q: u32,
    pub k: u32,
    pub poly_p: UniPoly,
}

impl Shape {
    /// `p·q1 − q·p1`.
    pub fn sign(&self) -> i64 {
        self.p as i64 * self.q1 as i64 - self.q as i64 * self.p1 as i64
    }

    /// `S(x, y) = x^k·y + P(x)`.
    pub fn s_poly(&self) -> BiPoly {
        &BiPoly::monomial(self.k, 1, GaussRat::one()) + &BiPoly::from_unipoly(&self.poly_p, Var::X)
    }

    /// `G(x, y) = x^q1·S^q`.
    pub fn g_poly(&self) -> BiPoly {
        &BiPoly::monomial(self.q1, 0, GaussRat::one()) * &self.s_poly().pow(self.q)
    }

    /// `x^p1·S^p`.
    pub fn b_poly(&self) -> BiPoly {
        &BiPoly::monomial(self.p1, 0, GaussRat::one()) * &self.s_poly().pow(self.p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    F1,
    F2,
    F3,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::F1 => "F1",
            Family::F2 => "F2",
            Family::F3 => "F3",
        })
    }
}

/// A normal form in one of the three families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalForm {
    /// `G + x^p1·S^p·Π(G)`.
    F1 { shape: Shape, a: Vec<u32>, beta: Vec<GaussRat> },
    /// `x^p1·S^p·Π(G)`.
    F2 { shape: Shape, a: Vec<u32>, beta: Vec<GaussRat> },
    /// `y·Π(x) + h(x)`.
    F3 { a: Vec<u32>, beta: Vec<GaussRat>, h: UniPoly },
}

/// Location of a puncture of the rectified fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Puncture {
    Zero,
    /// One-based index into `beta`.
    Beta(usize),
    MovingC,
}

impl fmt::Display for Puncture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Puncture::Zero => f.write_str("zero"),
            Puncture::Beta(i) => write!(f, "beta{i}"),
            Puncture::MovingC => f.write_str("moving_c"),
        }
    }
}

/// Derived structural data of a validated normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyFacts {
    pub family: Family,
    /// Total degree of the family polynomial.
    pub degree: u32,
    /// Rank of the first homology of a generic fiber.
    pub homology_rank: usize,
    /// Number of factors of `Π` plus one.
    pub r: usize,
    pub punctures: Vec<Puncture>,
    pub beta: Vec<GaussRat>,
    pub bifurcation_candidates: Vec<GaussRat>,
    /// `p·q1 − q·p1` for the first two families.
    pub sign_case: Option<i64>,
    /// Shape with any synthesized `(q1, q)` filled in.
    pub shape: Option<Shape>,
}

impl FamilyFacts {
    /// The number `𝔪` with degree `𝔪 + 1`.
    pub fn m(&self) -> u32 {
        self.degree - 1
    }
}

impl NormalForm {
    pub fn family(&self) -> Family {
        match self {
            NormalForm::F1 { .. } => Family::F1,
            NormalForm::F2 { .. } => Family::F2,
            NormalForm::F3 { .. } => Family::F3,
        }
    }

    pub fn a(&self) -> &[u32] {
        match self {
            NormalForm::F1 { a, .. } | NormalForm::F2 { a, .. } | NormalForm::F3 { a, .. } => a,
        }
    }

    pub fn beta(&self) -> &[GaussRat] {
        match self {
            NormalForm::F1 { beta, .. } | NormalForm::F2 { beta, .. } | NormalForm::F3 { beta, .. } => beta,
        }
    }

    pub fn shape(&self) -> Option<&Shape> {
        match self {
            NormalForm::F1 { shape, .. } | NormalForm::F2 { shape, .. } => Some(shape),
            NormalForm::F3 { .. } => None,
        }
    }

    pub fn r(&self) -> usize {
        self.a().len() + 1
    }

    pub fn sum_a(&self) -> u32 {
        self.a().iter().sum()
    }

    /// `Π(t) = ∏(β_i − t)^a_i`.
    pub fn pi_poly(&self) -> UniPoly {
        self.a().iter().zip(self.beta()).fold(UniPoly::one(), |acc, (&ai, b)| {
            &acc * &UniPoly::new(vec![b.clone(), GaussRat::from_int(-1)]).pow(ai)
        })
    }

    /// Checks every family constraint and derives the structural facts.
    pub fn validate(&self) -> Result<FamilyFacts, FamilyError> {
        let (a, beta) = (self.a(), self.beta());
        if a.len() != beta.len() {
            return invalid(format!("a has {} entries but beta has {}", a.len(), beta.len()));
        }
        if a.contains(&0) {
            return invalid("a entries must be positive");
        }
        let distinct: BTreeSet<&GaussRat> = beta.iter().collect();
        if distinct.len() != beta.len() {
            return invalid("beta entries distinct");
        }
        let r = self.r();
        let sum_a = self.sum_a();
        let family = self.family();
        let mut shape_out = None;
        let mut sign_case = None;
        let degree = match self {
            NormalForm::F3 { h, .. } => {
                if r == 1 {
                    return Err(FamilyError::NoCycles);
                }
                if h.degree().is_some_and(|d| d as u32 >= sum_a) {
                    return invalid("deg h must be less than the sum of a");
                }
                1 + sum_a
            }
            NormalForm::F1 { shape, .. } | NormalForm::F2 { shape, .. } => {
                if beta.iter().any(GaussRat::is_zero) {
                    return invalid("beta entries must be nonzero");
                }
                if shape.k == 0 {
                    return invalid("k must be positive");
                }
                if shape.poly_p.degree().is_some_and(|d| d as u32 >= shape.k) {
                    return invalid("deg P must be at most k - 1");
                }
                if family == Family::F1 && r < 2 {
                    return invalid("F1 needs r >= 2 (a and beta nonempty)");
                }
                let shape = if family == Family::F2 && r == 1 {
                    synthesize_q(shape)?
                } else {
                    check_exponents(shape)?;
                    shape.clone()
                };
                sign_case = Some(shape.sign());
                let d = shape.p1 + shape.p * (shape.k + 1) + (shape.q1 + shape.q * (shape.k + 1)) * sum_a;
                shape_out = Some(shape);
                d
            }
        };
        let homology_rank = match family {
            Family::F1 => r + 1,
            Family::F2 => r,
            Family::F3 => r - 1,
        };
        let betas = (1..r).map(Puncture::Beta);
        let punctures: Vec<Puncture> = match family {
            Family::F1 => std::iter::once(Puncture::Zero)
                .chain(betas)
                .chain(std::iter::once(Puncture::MovingC))
                .collect(),
            Family::F2 => std::iter::once(Puncture::Zero).chain(betas).collect(),
            Family::F3 => betas.collect(),
        };
        let mut facts = FamilyFacts {
            family,
            degree,
            homology_rank,
            r,
            punctures,
            beta: beta.to_vec(),
            bifurcation_candidates: Vec::new(),
            sign_case,
            shape: shape_out,
        };
        facts.bifurcation_candidates = self.candidates(&facts);
        Ok(facts)
    }

    /// The expanded family polynomial; `facts` must come from [`NormalForm::validate`].
    pub fn expand(&self, facts: &FamilyFacts) -> BiPoly {
        match self {
            NormalForm::F3 { h, .. } => {
                let pi = BiPoly::from_unipoly(&self.pi_poly(), Var::X);
                &(&BiPoly::y() * &pi) + &BiPoly::from_unipoly(h, Var::X)
            }
            NormalForm::F1 { .. } | NormalForm::F2 { .. } => {
                let shape = facts.shape.as_ref().expect("shape for F1/F2");
                let g = shape.g_poly();
                let pi_g = self.pi_poly().coeffs().iter().enumerate().fold(BiPoly::zero(), |acc, (e, c)| {
                    &acc + &g.pow(e as u32).scale(c)
                });
                let body = &shape.b_poly() * &pi_g;
                if self.family() == Family::F1 {
                    &g + &body
                } else {
                    body
                }
            }
        }
    }

    /// Images of the ramification locus of the rectifying map, deduplicated.
    fn candidates(&self, facts: &FamilyFacts) -> Vec<GaussRat> {
        let mut out: Vec<GaussRat> = Vec::new();
        let mut push = |v: GaussRat| {
            if !out.contains(&v) {
                out.push(v);
            }
        };
        let prod_beta = || {
            self.a()
                .iter()
                .zip(self.beta())
                .fold(GaussRat::one(), |acc, (&ai, b)| &acc * &b.pow(ai))
        };
        match self {
            NormalForm::F3 { h, beta, .. } => {
                for b in beta {
                    push(h.eval(b));
                }
            }
            NormalForm::F1 { beta, .. } => {
                let shape = facts.shape.as_ref().expect("shape");
                let p0 = shape.poly_p.coeff(0);
                if shape.q1 == 0 {
                    push(p0.clone());
                }
                if shape.p1 == 0 {
                    push(&p0.pow(shape.p) * &prod_beta());
                }
                push(GaussRat::zero());
                for b in beta {
                    push(b.clone());
                }
            }
            NormalForm::F2 { .. } => {
                let shape = facts.shape.as_ref().expect("shape");
                if shape.p1 == 0 {
                    push(&shape.poly_p.coeff(0).pow(shape.p) * &prod_beta());
                }
                push(GaussRat::zero());
            }
        }
        out
    }
}

fn check_exponents(s: &Shape) -> Result<(), FamilyError> {
    if s.p1 >= s.p {
        return invalid("need 0 <= p1 < p");
    }
    if s.q1 >= s.q {
        return invalid("need 0 <= q1 < q");
    }
    if s.sign().abs() != 1 {
        return invalid("need p*q1 - q*p1 = +1 or -1");
    }
    Ok(())
}

/// Picks the smallest `q1 >= 1` with `p·q1 − q·p1 = 1` and `q1 < q`.
fn synthesize_q(s: &Shape) -> Result<Shape, FamilyError> {
    if s.p1 >= s.p {
        return invalid("need 0 <= p1 < p");
    }
    if num_integer::gcd(s.p1, s.p) != 1 {
        return invalid("F2 with r = 1 needs gcd(p1, p) = 1");
    }
    let mut out = s.clone();
    if s.p1 == 0 {
        // p = 1: q1 = 1 and any q > 1 works
        out.q1 = 1;
        out.q = 2;
        return Ok(out);
    }
    for q1 in 1..=(s.p1 * (s.p + 2) + 2) {
        let num = s.p as i64 * q1 as i64 - 1;
        if num % s.p1 as i64 == 0 {
            let q = (num / s.p1 as i64) as u32;
            if q > q1 {
                out.q1 = q1;
                out.q = q;
                return Ok(out);
            }
        }
    }
    invalid("no (q1, q) with p*q1 - q*p1 = 1 exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn f2_example() -> NormalForm {
        NormalForm::F2 {
            shape: Shape { p1: 0, p: 1, q1: 1, q: 2, k: 1, poly_p: UniPoly::from_ints(&[-1]) },
            a: vec![1],
            beta: vec![GaussRat::one()],
        }
    }

    #[test]
    fn oscillator_facts() {
        let nf = NormalForm::F3 { a: vec![1], beta: vec![GaussRat::one()], h: UniPoly::zero() };
        let f = nf.validate().unwrap();
        assert_eq!((f.degree, f.homology_rank), (2, 1));
        assert_eq!(f.punctures, vec![Puncture::Beta(1)]);
        assert_eq!(f.bifurcation_candidates, vec![GaussRat::zero()]);
        assert_eq!(nf.expand(&f), BiPoly::from_int_terms(&[(0, 1, 1), (1, 1, -1)]));
    }

    #[test]
    fn f2_example_facts() {
        let nf = f2_example();
        let f = nf.validate().unwrap();
        assert_eq!((f.degree, f.homology_rank), (7, 2));
        assert_eq!(f.punctures, vec![Puncture::Zero, Puncture::Beta(1)]);
        assert_eq!(f.sign_case, Some(1));
        assert_eq!(nf.expand(&f).total_degree(), Some(7));
    }

    #[test]
    fn f3_degree_boundary_rejected() {
        let nf = NormalForm::F3 { a: vec![1], beta: vec![GaussRat::one()], h: UniPoly::from_ints(&[0, 1]) };
        assert!(matches!(nf.validate(), Err(FamilyError::Invalid(_))));
        let nf = NormalForm::F3 { a: vec![], beta: vec![], h: UniPoly::zero() };
        assert_eq!(nf.validate(), Err(FamilyError::NoCycles));
    }

    #[test]
    fn duplicate_beta_named() {
        let nf = NormalForm::F3 {
            a: vec![1, 1],
            beta: vec![GaussRat::one(), GaussRat::one()],
            h: UniPoly::zero(),
        };
        let err = nf.validate().unwrap_err().to_string();
        assert!(err.contains("beta entries distinct"), "{err}");
    }

    #[test]
    fn synthesized_pair_satisfies_sign() {
        for (p1, p) in [(0, 1), (1, 2), (1, 3), (2, 3), (3, 5), (2, 7)] {
            let nf = NormalForm::F2 {
                shape: Shape { p1, p, q1: 0, q: 0, k: 1, poly_p: UniPoly::zero() },
                a: vec![],
                beta: vec![],
            };
            let f = nf.validate().unwrap();
            let s = f.shape.unwrap();
            assert_eq!(s.sign(), 1, "{p1} {p}");
            assert!(s.q1 < s.q);
        }
    }
}
