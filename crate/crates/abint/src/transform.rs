//! Polynomial automorphisms acting on Hamiltonians and one-forms, and the
//! reduction of one-forms to the non-exact monomial basis.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};

use thiserror::Error;

use crate::algebra::{BiPoly, GaussRat, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("automorphism check failed: {0}")]
    NotInverse(&'static str),
    #[error("sigma must have a nonzero linear coefficient")]
    DegenerateSigma,
}

/// Polynomial one-form `A dx + B dy`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OneForm {
    pub a: BiPoly,
    pub b: BiPoly,
}

impl OneForm {
    pub fn new(a: BiPoly, b: BiPoly) -> Self {
        OneForm { a, b }
    }

    /// `f dx`.
    pub fn dx(f: BiPoly) -> Self {
        OneForm { a: f, b: BiPoly::zero() }
    }

    /// `f dy`.
    pub fn dy(f: BiPoly) -> Self {
        OneForm { a: BiPoly::zero(), b: f }
    }

    /// The exact form `dQ`.
    pub fn exact(q: &BiPoly) -> Self {
        OneForm { a: q.partial(Var::X), b: q.partial(Var::Y) }
    }

    /// Maximal total degree of the two coefficients, `None` for the zero form.
    pub fn degree(&self) -> Option<u32> {
        self.a.total_degree().max(self.b.total_degree())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        OneForm { a: self.a.scale(c), b: self.b.scale(c) }
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) dx + ({}) dy", self.a, self.b)
    }
}

impl<'a> Add<&'a OneForm> for &'a OneForm {
    type Output = OneForm;
    fn add(self, o: &OneForm) -> OneForm {
        OneForm { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl<'a> Sub<&'a OneForm> for &'a OneForm {
    type Output = OneForm;
    fn sub(self, o: &OneForm) -> OneForm {
        OneForm { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

/// Pair `(ψ, σ)`: `ψ(u, v) = (x, y)` with explicit inverse and `σ(c) = s1·c + s0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyAutomorphism {
    forward: (BiPoly, BiPoly),
    inverse: (BiPoly, BiPoly),
    s1: GaussRat,
    s0: GaussRat,
}

impl PolyAutomorphism {
    /// Verifies both compositions symbolically.
    pub fn new(
        forward: (BiPoly, BiPoly),
        inverse: (BiPoly, BiPoly),
        s1: GaussRat,
        s0: GaussRat,
    ) -> Result<Self, TransformError> {
        if s1.is_zero() {
            return Err(TransformError::DegenerateSigma);
        }
        let (x, y) = (BiPoly::x(), BiPoly::y());
        if forward.0.compose(&inverse.0, &inverse.1) != x || forward.1.compose(&inverse.0, &inverse.1) != y {
            return Err(TransformError::NotInverse("forward after inverse is not the identity"));
        }
        if inverse.0.compose(&forward.0, &forward.1) != x || inverse.1.compose(&forward.0, &forward.1) != y {
            return Err(TransformError::NotInverse("inverse after forward is not the identity"));
        }
        Ok(PolyAutomorphism { forward, inverse, s1, s0 })
    }

    pub fn identity() -> Self {
        let id = (BiPoly::x(), BiPoly::y());
        PolyAutomorphism { forward: id.clone(), inverse: id, s1: GaussRat::one(), s0: GaussRat::zero() }
    }

    pub fn forward(&self) -> &(BiPoly, BiPoly) {
        &self.forward
    }

    pub fn inverse(&self) -> &(BiPoly, BiPoly) {
        &self.inverse
    }

    /// `σ'`.
    pub fn sigma_prime(&self) -> &GaussRat {
        &self.s1
    }

    pub fn sigma(&self, c: &GaussRat) -> GaussRat {
        &(&self.s1 * c) + &self.s0
    }

    /// Largest total degree among the components of `ψ⁻¹`.
    pub fn inverse_degree(&self) -> u32 {
        self.inverse.0.total_degree().max(self.inverse.1.total_degree()).unwrap_or(0)
    }

    /// `σ ∘ H ∘ ψ⁻¹`.
    pub fn pushforward_polynomial(&self, h: &BiPoly) -> BiPoly {
        &h.compose(&self.inverse.0, &self.inverse.1).scale(&self.s1) + &BiPoly::constant(self.s0.clone())
    }

    /// `σ'·(ψ⁻¹)^*ω`.
    pub fn pushforward_oneform(&self, w: &OneForm) -> OneForm {
        let (i1, i2) = &self.inverse;
        let a = w.a.compose(i1, i2);
        let b = w.b.compose(i1, i2);
        let dx_part = &(&a * &i1.partial(Var::X)) + &(&b * &i2.partial(Var::X));
        let dy_part = &(&a * &i1.partial(Var::Y)) + &(&b * &i2.partial(Var::Y));
        OneForm::new(dx_part, dy_part).scale(&self.s1)
    }

    /// `ψ^*ϑ / σ'`, the inverse of [`PolyAutomorphism::pushforward_oneform`].
    pub fn pullback_oneform(&self, w: &OneForm) -> OneForm {
        let (f1, f2) = &self.forward;
        let a = w.a.compose(f1, f2);
        let b = w.b.compose(f1, f2);
        let du_part = &(&a * &f1.partial(Var::X)) + &(&b * &f2.partial(Var::X));
        let dv_part = &(&a * &f1.partial(Var::Y)) + &(&b * &f2.partial(Var::Y));
        OneForm::new(du_part, dv_part).scale(&self.s1.inv().expect("nonzero sigma'"))
    }
}

/// `w = dQ + Σ coeffs[(i, j)]·x^i·y^j dx` with every `j >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NonExactReduction {
    pub coeffs: BTreeMap<(u32, u32), GaussRat>,
    pub exact_part: BiPoly,
}

impl NonExactReduction {
    /// `Σ coeffs·x^i·y^j` as a single polynomial.
    pub fn as_polynomial(&self) -> BiPoly {
        BiPoly::from_terms(self.coeffs.iter().map(|(&k, c)| (k, c.clone())))
    }

    /// Largest `i + j` among the basis terms.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(i, j)| i + j).max()
    }

    /// Reassembles `dQ + Σ coeffs·x^i·y^j dx`.
    pub fn reassemble(&self) -> OneForm {
        &OneForm::exact(&self.exact_part) + &OneForm::dx(self.as_polynomial())
    }
}

/// Splits a polynomial one-form into an exact part and the non-exact basis `x^i y^j dx`.
pub fn reduce_to_nonexact_basis(w: &OneForm) -> NonExactReduction {
    // a_i0 x^i dx = d(a_i0 x^(i+1)/(i+1)); b_ij x^i y^j dy = d(b_ij x^i y^(j+1)/(j+1)) − …dx
    let mut q = BiPoly::zero();
    for (&(i, j), c) in w.a.terms() {
        if j == 0 {
            q.add_term(i + 1, 0, &(c / &GaussRat::from_int(i as i64 + 1)));
        }
    }
    for (&(i, j), c) in w.b.terms() {
        q.add_term(i, j + 1, &(c / &GaussRat::from_int(j as i64 + 1)));
    }
    let rest = w - &OneForm::exact(&q);
    debug_assert!(rest.b.is_zero());
    let coeffs = rest.a.terms().map(|(&k, c)| (k, c.clone())).collect();
    NonExactReduction { coeffs, exact_part: q }
}
