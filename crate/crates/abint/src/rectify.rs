//! Rectifying maps `(G, H)` with explicit inverses, and push-forward of
//! polynomial one-forms to rational one-forms on the `(t, 𝔠)` plane.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{BiPoly, Denom, GaussRat, LinAtom, RatFunc, UniPoly, Var};
use crate::family::{Family, FamilyFacts, NormalForm, Puncture};
use crate::transform::OneForm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RectifyError {
    #[error("rectifier construction failed: {0}")]
    ConstructionFailure(String),
}

/// Product of linear atoms with integer exponents, times a scalar.
#[derive(Clone, Debug)]
struct AtomMono {
    scale: GaussRat,
    exps: BTreeMap<LinAtom, i64>,
}

impl AtomMono {
    fn scalar(s: GaussRat) -> Self {
        AtomMono { scale: s, exps: BTreeMap::new() }
    }

    fn atom(a: LinAtom) -> Self {
        AtomMono { scale: GaussRat::one(), exps: BTreeMap::from([(a, 1)]) }
    }

    fn mul(&self, o: &AtomMono) -> AtomMono {
        let mut exps = self.exps.clone();
        for (a, e) in &o.exps {
            *exps.entry(a.clone()).or_insert(0) += e;
        }
        exps.retain(|_, e| *e != 0);
        AtomMono { scale: &self.scale * &o.scale, exps }
    }

    fn powi(&self, k: i64) -> AtomMono {
        AtomMono {
            scale: self.scale.powi(k),
            exps: self.exps.iter().filter(|_| k != 0).map(|(a, e)| (a.clone(), e * k)).collect(),
        }
    }

    fn to_ratfunc(&self) -> RatFunc {
        let factors: Vec<(LinAtom, i64)> = self.exps.iter().map(|(a, e)| (a.clone(), *e)).collect();
        RatFunc::from_atoms(&self.scale, &factors)
    }
}

/// `∏(β_i − t)^a_i` as signed atoms.
fn pi_mono(a: &[u32], beta: &[GaussRat]) -> AtomMono {
    a.iter().zip(beta).fold(AtomMono::scalar(GaussRat::one()), |acc, (&ai, b)| {
        let root = UniPoly::constant(b.clone());
        let mut f = AtomMono::atom(LinAtom::t_minus(&root).expect("constant root"));
        f.scale = GaussRat::from_int(-1);
        acc.mul(&f.powi(ai as i64))
    })
}

/// One canonical cycle: a small anti-clockwise loop around one finite puncture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalCycle {
    pub index: usize,
    pub puncture: Puncture,
    /// Puncture location `t = π(𝔠)`.
    pub location: UniPoly,
}

/// Rational one-form `eta_t dt + eta_c d𝔠`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalOneForm {
    pub eta_t: RatFunc,
    /// Vanishes along every loop in a fiber `𝔠 = const`.
    pub eta_c: RatFunc,
}

/// `𝓡 = (G, H)` with its inverse `(x(t, 𝔠), y(t, 𝔠))`.
#[derive(Clone, Debug)]
pub struct RectifyingMap {
    pub family: Family,
    pub g: BiPoly,
    pub h: BiPoly,
    pub inverse_x: RatFunc,
    pub inverse_y: RatFunc,
    /// Jacobian `G_x·H_y − G_y·H_x`, whose zero set is the ramification locus.
    pub ramification_locus: BiPoly,
    /// Reduced product of the lines where the inverse is undefined.
    pub removed_divisor: Denom,
    pub cycles: Vec<CanonicalCycle>,
    x_t: RatFunc,
    x_c: RatFunc,
    y_t: RatFunc,
    y_c: RatFunc,
}

impl RectifyingMap {
    /// Builds and symbolically verifies the rectifier of a validated normal form.
    pub fn build(nf: &NormalForm, facts: &FamilyFacts) -> Result<Self, RectifyError> {
        let h = nf.expand(facts);
        let (g, inverse_x, inverse_y) = match nf {
            NormalForm::F3 { a, beta, h: hx } => {
                // x = t, y = (𝔠 − h(t))/Π(t)
                let num = &BiPoly::y() - &BiPoly::from_unipoly(hx, Var::X);
                let y = &RatFunc::from_bipoly(num) * &pi_mono(a, beta).powi(-1).to_ratfunc();
                (BiPoly::x(), RatFunc::t(), y)
            }
            NormalForm::F1 { a, beta, .. } | NormalForm::F2 { a, beta, .. } => {
                let shape = facts.shape.as_ref().expect("validated shape");
                let (p1, p, q1, q, k) = (
                    shape.p1 as i64,
                    shape.p as i64,
                    shape.q1 as i64,
                    shape.q as i64,
                    shape.k as i64,
                );
                // G = x^q1·S^q = t and x^p1·S^p = B with H = B·Π(t) (+ t for F1)
                let t = AtomMono::atom(LinAtom::t());
                let numer = if nf.family() == Family::F1 {
                    let mut m = AtomMono::atom(LinAtom::t_minus(&UniPoly::var()).expect("linear"));
                    m.scale = GaussRat::from_int(-1);
                    m
                } else {
                    AtomMono::atom(LinAtom::c())
                };
                let b = numer.mul(&pi_mono(a, beta).powi(-1));
                let (x, s) = if shape.sign() == 1 {
                    (t.powi(p).mul(&b.powi(-q)), b.powi(q1).mul(&t.powi(-p1)))
                } else {
                    (b.powi(q).mul(&t.powi(-p)), t.powi(p1).mul(&b.powi(-q1)))
                };
                // y = (S − P(x))/x^k
                let mut y = s.mul(&x.powi(-k)).to_ratfunc();
                for (j, c) in shape.poly_p.coeffs().iter().enumerate() {
                    if !c.is_zero() {
                        let term = x.powi(j as i64 - k).to_ratfunc().scale(c);
                        y = &y - &term;
                    }
                }
                (shape.g_poly(), x.to_ratfunc(), y)
            }
        };
        if h.substitute(&inverse_x, &inverse_y) != RatFunc::c() {
            return Err(RectifyError::ConstructionFailure("H does not rectify to c".into()));
        }
        if g.substitute(&inverse_x, &inverse_y) != RatFunc::t() {
            return Err(RectifyError::ConstructionFailure("G does not rectify to t".into()));
        }
        let ramification_locus =
            &(&g.partial(Var::X) * &h.partial(Var::Y)) - &(&g.partial(Var::Y) * &h.partial(Var::X));
        let removed_divisor = inverse_x
            .denom()
            .lcm(inverse_y.denom())
            .atoms()
            .fold(Denom::one(), |acc, (a, _)| acc.mul(&Denom::atom(a.clone(), 1)));
        let cycles = canonical_cycles(facts);
        Ok(RectifyingMap {
            family: nf.family(),
            x_t: inverse_x.partial(Var::X),
            x_c: inverse_x.partial(Var::Y),
            y_t: inverse_y.partial(Var::X),
            y_c: inverse_y.partial(Var::Y),
            g,
            h,
            inverse_x,
            inverse_y,
            ramification_locus,
            removed_divisor,
            cycles,
        })
    }

    /// Push-forward of `x^i·y^j dx`.
    pub fn pushforward_basis_form(&self, i: u32, j: u32) -> RationalOneForm {
        let coeff = BiPoly::monomial(i, j, GaussRat::one()).substitute(&self.inverse_x, &self.inverse_y);
        RationalOneForm { eta_t: &coeff * &self.x_t, eta_c: &coeff * &self.x_c }
    }

    /// Push-forward of a general polynomial one-form `A dx + B dy`.
    pub fn pushforward(&self, w: &OneForm) -> RationalOneForm {
        let a = w.a.substitute(&self.inverse_x, &self.inverse_y);
        let b = w.b.substitute(&self.inverse_x, &self.inverse_y);
        RationalOneForm {
            eta_t: &(&a * &self.x_t) + &(&b * &self.y_t),
            eta_c: &(&a * &self.x_c) + &(&b * &self.y_c),
        }
    }

    /// Push-forward of `A(x, y) dx`, the shape produced by the basis reduction.
    pub fn pushforward_dx(&self, a: &BiPoly) -> RatFunc {
        &a.substitute(&self.inverse_x, &self.inverse_y) * &self.x_t
    }

    /// `∂x/∂t` and `∂y/∂t` of the inverse map.
    pub fn inverse_t_derivatives(&self) -> (&RatFunc, &RatFunc) {
        (&self.x_t, &self.y_t)
    }
}

/// Canonical cycles in the fixed order: `0`, then `β_1 … β_(r−1)`, then `𝔠`.
pub fn canonical_cycles(facts: &FamilyFacts) -> Vec<CanonicalCycle> {
    facts
        .punctures
        .iter()
        .enumerate()
        .map(|(index, &puncture)| {
            let location = match puncture {
                Puncture::Zero => UniPoly::zero(),
                Puncture::Beta(i) => UniPoly::constant(facts.beta[i - 1].clone()),
                Puncture::MovingC => UniPoly::var(),
            };
            CanonicalCycle { index, puncture, location }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Shape;

    fn build(nf: &NormalForm) -> RectifyingMap {
        RectifyingMap::build(nf, &nf.validate().unwrap()).unwrap()
    }

    fn rat(num: &[(u32, u32, i64)], den: &[(i64, i64)]) -> RatFunc {
        // den entries: (root, exponent) of t-atoms
        let factors: Vec<(LinAtom, i64)> = den
            .iter()
            .map(|&(root, e)| (LinAtom::t_minus(&UniPoly::from_ints(&[root])).unwrap(), -e))
            .collect();
        &RatFunc::from_bipoly(BiPoly::from_int_terms(num)) * &RatFunc::from_atoms(&GaussRat::one(), &factors)
    }

    #[test]
    fn oscillator_inverse() {
        let rm = build(&NormalForm::F3 { a: vec![1], beta: vec![GaussRat::one()], h: UniPoly::zero() });
        assert_eq!(rm.inverse_x, RatFunc::t());
        // 𝔠/(1 − t) = −𝔠/(t − 1)
        assert_eq!(rm.inverse_y, rat(&[(0, 1, -1)], &[(1, 1)]));
        assert_eq!(rm.pushforward_basis_form(0, 1).eta_t, rat(&[(0, 1, -1)], &[(1, 1)]));
    }

    #[test]
    fn broughton_inverse() {
        let rm = build(&NormalForm::F3 { a: vec![2], beta: vec![GaussRat::one()], h: UniPoly::from_ints(&[-1, 1]) });
        let expected = rat(&[(0, 1, 1), (0, 0, 1), (1, 0, -1)], &[(1, 2)]);
        assert_eq!(rm.inverse_y, expected);
        assert_eq!(rm.pushforward_basis_form(0, 1).eta_t, expected);
    }

    #[test]
    fn f1_inverse_y() {
        let nf = NormalForm::F1 {
            shape: Shape { p1: 0, p: 1, q1: 1, q: 2, k: 1, poly_p: UniPoly::from_ints(&[-1]) },
            a: vec![1],
            beta: vec![GaussRat::one()],
        };
        let rm = build(&nf);
        // (𝔠 + 1 − 2t)(𝔠 − t)²/(t(1 − t)³)
        let num = &BiPoly::from_int_terms(&[(0, 1, 1), (0, 0, 1), (1, 0, -2)])
            * &BiPoly::from_int_terms(&[(0, 1, 1), (1, 0, -1)]).pow(2);
        let den = RatFunc::from_atoms(
            &GaussRat::from_int(-1),
            &[(LinAtom::t(), -1), (LinAtom::t_minus(&UniPoly::from_ints(&[1])).unwrap(), -3)],
        );
        assert_eq!(rm.inverse_y, &RatFunc::from_bipoly(num) * &den);
        let punct: Vec<Puncture> = rm.cycles.iter().map(|c| c.puncture).collect();
        assert_eq!(punct, vec![Puncture::Zero, Puncture::Beta(1), Puncture::MovingC]);
    }

    #[test]
    fn exact_hamiltonian_differential_rectifies() {
        let nf = NormalForm::F3 { a: vec![2, 1], beta: vec![GaussRat::one(), GaussRat::from_int(-2)], h: UniPoly::from_ints(&[3, 0, 1]) };
        let rm = build(&nf);
        let eta = rm.pushforward(&OneForm::exact(&rm.h));
        assert!(eta.eta_t.is_zero());
        assert_eq!(eta.eta_c, RatFunc::one());
    }
}
