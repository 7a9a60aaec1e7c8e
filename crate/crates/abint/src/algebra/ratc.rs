//! Univariate rational functions in 𝔠 over ℚ(i).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{GaussRat, UniPoly};

/// Reduced fraction `num/den` with `den` monic.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatC {
    num: UniPoly,
    den: UniPoly,
}

impl RatC {
    /// Panics on a zero denominator.
    pub fn new(num: UniPoly, den: UniPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatC::zero();
        }
        let g = UniPoly::gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        let l = den.lead().inv().expect("nonzero lead");
        RatC { num: num.scale(&l), den: den.scale(&l) }
    }

    pub fn zero() -> Self {
        RatC { num: UniPoly::zero(), den: UniPoly::one() }
    }

    pub fn one() -> Self {
        RatC::from_poly(UniPoly::one())
    }

    pub fn from_poly(p: UniPoly) -> Self {
        RatC { num: p, den: UniPoly::one() }
    }

    pub fn constant(c: GaussRat) -> Self {
        RatC::from_poly(UniPoly::constant(c))
    }

    pub fn numer(&self) -> &UniPoly {
        &self.num
    }

    pub fn denom(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial this equals, if the denominator is trivial.
    pub fn to_poly(&self) -> Option<UniPoly> {
        self.den.is_constant().then(|| self.num.clone())
    }

    pub fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| RatC::new(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        RatC::new(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        RatC { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn eval_complex(&self, c: Complex64) -> Complex64 {
        self.num.eval_complex(c) / self.den.eval_complex(c)
    }
}

impl fmt::Display for RatC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl<'a> Add<&'a RatC> for &'a RatC {
    type Output = RatC;
    fn add(self, o: &RatC) -> RatC {
        if self.den == o.den {
            return RatC::new(&self.num + &o.num, self.den.clone());
        }
        RatC::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl<'a> Sub<&'a RatC> for &'a RatC {
    type Output = RatC;
    fn sub(self, o: &RatC) -> RatC {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatC> for &'a RatC {
    type Output = RatC;
    fn mul(self, o: &RatC) -> RatC {
        RatC::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl<'a> Div<&'a RatC> for &'a RatC {
    type Output = RatC;
    fn div(self, o: &RatC) -> RatC {
        self * &o.inv().expect("division by zero rational function")
    }
}

impl Neg for &RatC {
    type Output = RatC;
    fn neg(self) -> RatC {
        RatC { num: -&self.num, den: self.den.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_common_factors() {
        let r = RatC::new(UniPoly::from_ints(&[-1, 0, 1]), UniPoly::from_ints(&[2, 2]));
        assert_eq!(r.to_poly(), Some(UniPoly::new(vec![GaussRat::from_frac(-1, 2), GaussRat::from_frac(1, 2)])));
    }

    #[test]
    fn field_ops() {
        let a = RatC::new(UniPoly::from_ints(&[1]), UniPoly::from_ints(&[0, 1]));
        let b = RatC::new(UniPoly::from_ints(&[1]), UniPoly::from_ints(&[1, 1]));
        let s = &a + &b;
        assert_eq!(s, RatC::new(UniPoly::from_ints(&[1, 2]), UniPoly::from_ints(&[0, 1, 1])));
        assert_eq!(&(&s - &b), &a);
        assert_eq!(&(&a / &a), &RatC::one());
    }
}
