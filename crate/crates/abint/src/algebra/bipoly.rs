//! Sparse bivariate polynomials over ℚ(i).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{GaussRat, RatFunc, UniPoly};

/// Which of the two variables an operation refers to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    X,
    Y,
}

/// Sparse polynomial in two variables; keys are `(deg_x, deg_y)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), GaussRat>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        BiPoly::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        BiPoly::monomial(0, 0, c)
    }

    pub fn x() -> Self {
        BiPoly::monomial(1, 0, GaussRat::one())
    }

    pub fn y() -> Self {
        BiPoly::monomial(0, 1, GaussRat::one())
    }

    pub fn monomial(i: u32, j: u32, c: GaussRat) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(i, j, &c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), GaussRat)>>(it: I) -> Self {
        let mut p = BiPoly::zero();
        for ((i, j), c) in it {
            p.add_term(i, j, &c);
        }
        p
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_int_terms(terms: &[(u32, u32, i64)]) -> Self {
        BiPoly::from_terms(terms.iter().map(|&(i, j, c)| ((i, j), GaussRat::from_int(c))))
    }

    /// Embeds a univariate polynomial in the chosen variable.
    pub fn from_unipoly(u: &UniPoly, var: Var) -> Self {
        BiPoly::from_terms(u.coeffs().iter().enumerate().map(|(k, c)| {
            let k = k as u32;
            match var {
                Var::X => ((k, 0), c.clone()),
                Var::Y => ((0, k), c.clone()),
            }
        }))
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: &GaussRat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &GaussRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> GaussRat {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn degree_in(&self, var: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(i, j)| if var == Var::X { i } else { j })
            .max()
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = BiPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial(&self, var: Var) -> Self {
        BiPoly::from_terms(self.terms.iter().filter_map(|(&(i, j), c)| {
            let (e, key) = match var {
                Var::X => (i, (i.checked_sub(1)?, j)),
                Var::Y => (j, (i, j.checked_sub(1)?)),
            };
            Some((key, c * &GaussRat::from_int(e as i64)))
        }))
    }

    pub fn eval(&self, x: &GaussRat, y: &GaussRat) -> GaussRat {
        let mut acc = GaussRat::zero();
        for (&(i, j), c) in &self.terms {
            acc += &(&(c * &x.pow(i)) * &y.pow(j));
        }
        acc
    }

    pub fn eval_complex(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c.to_complex() * x.powu(i) * y.powu(j))
            .sum()
    }

    /// Collects coefficients by powers of `var`; entry `k` is a polynomial in the other variable.
    pub fn to_major(&self, var: Var) -> Vec<UniPoly> {
        let Some(d) = self.degree_in(var) else {
            return Vec::new();
        };
        let mut rows: Vec<Vec<GaussRat>> = vec![Vec::new(); d as usize + 1];
        for (&(i, j), c) in &self.terms {
            let (major, minor) = if var == Var::X { (i, j) } else { (j, i) };
            let row = &mut rows[major as usize];
            if row.len() <= minor as usize {
                row.resize(minor as usize + 1, GaussRat::zero());
            }
            row[minor as usize] = c.clone();
        }
        rows.into_iter().map(UniPoly::new).collect()
    }

    /// Inverse of [`BiPoly::to_major`].
    pub fn from_major(rows: &[UniPoly], var: Var) -> Self {
        let mut p = BiPoly::zero();
        for (major, row) in rows.iter().enumerate() {
            for (minor, c) in row.coeffs().iter().enumerate() {
                let (i, j) = if var == Var::X {
                    (major as u32, minor as u32)
                } else {
                    (minor as u32, major as u32)
                };
                p.add_term(i, j, c);
            }
        }
        p
    }

    /// Polynomial composition `p(sx, sy)`.
    pub fn compose(&self, sx: &BiPoly, sy: &BiPoly) -> BiPoly {
        let dx = self.degree_in(Var::X).unwrap_or(0);
        let dy = self.degree_in(Var::Y).unwrap_or(0);
        let px = powers(sx, dx);
        let py = powers(sy, dy);
        let mut acc = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            let t = &px[i as usize] * &py[j as usize];
            acc = &acc + &t.scale(c);
        }
        acc
    }

    /// Rational substitution `p(rx, ry)` as a normalized rational function in `(t, c)`.
    pub fn substitute(&self, rx: &RatFunc, ry: &RatFunc) -> RatFunc {
        let dx = self.degree_in(Var::X).unwrap_or(0);
        let dy = self.degree_in(Var::Y).unwrap_or(0);
        // p(Nx/Dx, Ny/Dy) = Σ c·Nx^i·Dx^(dx−i)·Ny^j·Dy^(dy−j) / (Dx^dx·Dy^dy)
        let nx = powers(rx.numer(), dx);
        let ny = powers(ry.numer(), dy);
        let dxp = powers(&rx.denom_poly(), dx);
        let dyp = powers(&ry.denom_poly(), dy);
        let mut num = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            let (i, j) = (i as usize, j as usize);
            let a = &nx[i] * &dxp[dx as usize - i];
            let b = &ny[j] * &dyp[dy as usize - j];
            num = &num + &(&a * &b).scale(c);
        }
        let den = rx.denom().pow(dx).mul(&ry.denom().pow(dy));
        RatFunc::from_parts(num, den)
    }

    /// Renders with the given variable names.
    pub fn display_with(&self, vx: &str, vy: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        for (i, j) in keys {
            let c = &self.terms[&(i, j)];
            let mut mono = Vec::new();
            for (v, e) in [(vx, i), (vy, j)] {
                match e {
                    0 => {}
                    1 => mono.push(v.to_string()),
                    _ => mono.push(format!("{v}^{e}")),
                }
            }
            let mono = mono.join("*");
            let cs = c.to_string();
            let cs = if c.is_compound() { format!("({cs})") } else { cs };
            let term = match (mono.is_empty(), cs.as_str()) {
                (true, _) => cs,
                (false, "1") => mono,
                (false, "-1") => format!("-{mono}"),
                (false, _) => format!("{cs}*{mono}"),
            };
            if out.is_empty() {
                out = term;
            } else if let Some(rest) = term.strip_prefix('-') {
                out = format!("{out} - {rest}");
            } else {
                out = format!("{out} + {term}");
            }
        }
        out
    }
}

/// `[p^0, p^1, …, p^d]`.
pub(crate) fn powers(p: &BiPoly, d: u32) -> Vec<BiPoly> {
    let mut v = Vec::with_capacity(d as usize + 1);
    v.push(BiPoly::one());
    for k in 0..d as usize {
        let next = &v[k] * p;
        v.push(next);
    }
    v
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x", "y"))
    }
}

impl<'a> Add<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn add(self, o: &BiPoly) -> BiPoly {
        let mut r = self.clone();
        for (&(i, j), c) in &o.terms {
            r.add_term(i, j, c);
        }
        r
    }
}

impl<'a> Sub<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn sub(self, o: &BiPoly) -> BiPoly {
        let mut r = self.clone();
        for (&(i, j), c) in &o.terms {
            r.add_term(i, j, &-c);
        }
        r
    }
}

impl<'a> Mul<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn mul(self, o: &BiPoly) -> BiPoly {
        let mut acc: BTreeMap<(u32, u32), GaussRat> = BTreeMap::new();
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &o.terms {
                *acc.entry((i1 + i2, j1 + j2)).or_default() += &(a * b);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        BiPoly { terms: acc }
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(&GaussRat::from_int(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy_minus_one() -> BiPoly {
        BiPoly::from_int_terms(&[(1, 1, 1), (0, 0, -1)])
    }

    #[test]
    fn difference_of_squares() {
        let a = &BiPoly::x() + &BiPoly::y();
        let b = &BiPoly::x() - &BiPoly::y();
        assert_eq!(&a * &b, BiPoly::from_int_terms(&[(2, 0, 1), (0, 2, -1)]));
        assert!((&a * &BiPoly::zero()).is_zero());
    }

    #[test]
    fn square_of_xy_minus_one() {
        let s = xy_minus_one().pow(2);
        assert_eq!(s, BiPoly::from_int_terms(&[(2, 2, 1), (1, 1, -2), (0, 0, 1)]));
        assert_eq!(s.total_degree(), Some(4));
    }

    #[test]
    fn partial_derivatives() {
        let p = BiPoly::from_int_terms(&[(2, 1, 1)]);
        assert_eq!(p.partial(Var::X), BiPoly::from_int_terms(&[(1, 1, 2)]));
        let osc = BiPoly::from_int_terms(&[(0, 1, 1), (1, 1, -1)]);
        assert_eq!(osc.partial(Var::Y), BiPoly::from_int_terms(&[(0, 0, 1), (1, 0, -1)]));
        assert!(BiPoly::constant(GaussRat::from_int(7)).partial(Var::X).is_zero());
    }

    #[test]
    fn major_roundtrip() {
        let p = BiPoly::from_int_terms(&[(3, 1, 2), (0, 2, -1), (1, 0, 5)]);
        for v in [Var::X, Var::Y] {
            assert_eq!(BiPoly::from_major(&p.to_major(v), v), p);
        }
    }

    #[test]
    fn display_is_graded() {
        assert_eq!(xy_minus_one().pow(2).to_string(), "x^2*y^2 - 2*x*y + 1");
    }
}
