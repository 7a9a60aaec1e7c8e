//! Rational functions in `(t, 𝔠)` whose denominators split into linear factors.
//!
//! A [`RatFunc`] stores a polynomial numerator in `(t, 𝔠)` and a denominator
//! kept as a product of normalized linear atoms `a·t + b·𝔠 + d`. Every pole
//! that arises from the rectifying inverses lives on such a line, so exact
//! cancellation only needs division by an atom.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{AlgebraError, BiPoly, GaussRat, RatC, UniPoly, Var};

// Inside `RatFunc` numerators, `Var::X` plays `t` and `Var::Y` plays `𝔠`.
const T: Var = Var::X;
const C: Var = Var::Y;

/// Linear polynomial `t − π(𝔠)` (a t-atom) or `𝔠 + k` (a 𝔠-atom).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum LinAtom {
    /// `t − (alpha·𝔠 + beta)`.
    T { alpha: GaussRat, beta: GaussRat },
    /// `𝔠 + k`.
    C { k: GaussRat },
}

impl LinAtom {
    /// Normalizes `a·t + b·𝔠 + d` to `scale·atom`; errors on a constant.
    pub fn from_linear(a: &GaussRat, b: &GaussRat, d: &GaussRat) -> Result<(GaussRat, LinAtom), AlgebraError> {
        if !a.is_zero() {
            let alpha = -&(b / a);
            let beta = -&(d / a);
            Ok((a.clone(), LinAtom::T { alpha, beta }))
        } else if !b.is_zero() {
            Ok((b.clone(), LinAtom::C { k: d / b }))
        } else {
            Err(AlgebraError::ConstantAtom)
        }
    }

    /// `t − root` where `root` is a polynomial of degree at most one in 𝔠.
    pub fn t_minus(root: &UniPoly) -> Result<LinAtom, AlgebraError> {
        if root.degree().is_some_and(|d| d > 1) {
            return Err(AlgebraError::PoleNotLinear);
        }
        Ok(LinAtom::T { alpha: root.coeff(1), beta: root.coeff(0) })
    }

    pub fn t() -> LinAtom {
        LinAtom::T { alpha: GaussRat::zero(), beta: GaussRat::zero() }
    }

    pub fn c() -> LinAtom {
        LinAtom::C { k: GaussRat::zero() }
    }

    pub fn involves_t(&self) -> bool {
        matches!(self, LinAtom::T { .. })
    }

    /// For a t-atom, the root `π(𝔠)` of the atom as a polynomial in 𝔠.
    pub fn t_root(&self) -> Option<UniPoly> {
        match self {
            LinAtom::T { alpha, beta } => Some(UniPoly::new(vec![beta.clone(), alpha.clone()])),
            LinAtom::C { .. } => None,
        }
    }

    pub fn to_bipoly(&self) -> BiPoly {
        match self {
            LinAtom::T { alpha, beta } => BiPoly::from_terms([
                ((1, 0), GaussRat::one()),
                ((0, 1), -alpha),
                ((0, 0), -beta),
            ]),
            LinAtom::C { k } => BiPoly::from_terms([((0, 1), GaussRat::one()), ((0, 0), k.clone())]),
        }
    }

    /// `∂/∂var` of the atom, a constant.
    fn partial(&self, var: Var) -> GaussRat {
        match (self, var) {
            (LinAtom::T { .. }, Var::X) => GaussRat::one(),
            (LinAtom::T { alpha, .. }, Var::Y) => -alpha,
            (LinAtom::C { .. }, Var::X) => GaussRat::zero(),
            (LinAtom::C { .. }, Var::Y) => GaussRat::one(),
        }
    }

    /// Value of the atom on the line `t = root(𝔠)`, a polynomial in 𝔠.
    fn at_t(&self, root: &UniPoly) -> UniPoly {
        match self {
            LinAtom::T { .. } => root - &self.t_root().expect("t-atom"),
            LinAtom::C { k } => UniPoly::new(vec![k.clone(), GaussRat::one()]),
        }
    }

    pub fn eval_complex(&self, t: Complex64, c: Complex64) -> Complex64 {
        match self {
            LinAtom::T { alpha, beta } => t - alpha.to_complex() * c - beta.to_complex(),
            LinAtom::C { k } => c + k.to_complex(),
        }
    }

    /// Exact quotient of `p` by this atom, if it divides.
    pub fn divide(&self, p: &BiPoly) -> Option<BiPoly> {
        let (var, root) = match self {
            LinAtom::T { .. } => (T, self.t_root().expect("t-atom")),
            LinAtom::C { k } => (C, UniPoly::constant(-k)),
        };
        let rows = p.to_major(var);
        let (q, r) = synthetic_division(&rows, &root);
        r.is_zero().then(|| BiPoly::from_major(&q, var))
    }
}

impl fmt::Display for LinAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_bipoly().display_with("t", "c"))
    }
}

/// Divides `Σ rows[k]·v^k` by `v − root`, with coefficients in the other variable.
fn synthetic_division(rows: &[UniPoly], root: &UniPoly) -> (Vec<UniPoly>, UniPoly) {
    if rows.is_empty() {
        return (Vec::new(), UniPoly::zero());
    }
    let n = rows.len() - 1;
    let mut q = vec![UniPoly::zero(); n];
    let mut carry = rows[n].clone();
    for k in (0..n).rev() {
        q[k] = carry.clone();
        carry = &rows[k] + &(root * &carry);
    }
    (q, carry)
}

/// Product of linear atoms with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Denom {
    atoms: BTreeMap<LinAtom, u32>,
}

impl Denom {
    pub fn one() -> Self {
        Denom::default()
    }

    pub fn atom(a: LinAtom, e: u32) -> Self {
        let mut d = Denom::one();
        if e > 0 {
            d.atoms.insert(a, e);
        }
        d
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&LinAtom, u32)> {
        self.atoms.iter().map(|(a, &e)| (a, e))
    }

    pub fn exponent(&self, a: &LinAtom) -> u32 {
        self.atoms.get(a).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn mul(&self, o: &Denom) -> Denom {
        let mut r = self.clone();
        for (a, &e) in &o.atoms {
            *r.atoms.entry(a.clone()).or_insert(0) += e;
        }
        r
    }

    pub fn pow(&self, e: u32) -> Denom {
        let atoms = self
            .atoms
            .iter()
            .filter(|_| e > 0)
            .map(|(a, &k)| (a.clone(), k * e))
            .collect();
        Denom { atoms }
    }

    /// Least common multiple (exponent-wise maximum).
    pub fn lcm(&self, o: &Denom) -> Denom {
        let mut r = self.clone();
        for (a, &e) in &o.atoms {
            let slot = r.atoms.entry(a.clone()).or_insert(0);
            *slot = (*slot).max(e);
        }
        r
    }

    /// `self / o`, assuming `o` divides `self`.
    fn quotient(&self, o: &Denom) -> Denom {
        let mut r = self.clone();
        for (a, &e) in &o.atoms {
            let slot = r.atoms.get_mut(a).expect("divisor atom present");
            *slot -= e;
            if *slot == 0 {
                r.atoms.remove(a);
            }
        }
        r
    }

    pub fn to_bipoly(&self) -> BiPoly {
        let mut p = BiPoly::one();
        for (a, &e) in &self.atoms {
            p = &p * &a.to_bipoly().pow(e);
        }
        p
    }

    /// Product of the 𝔠-atoms only, as a polynomial in 𝔠.
    fn c_part(&self) -> UniPoly {
        let mut p = UniPoly::one();
        for (a, &e) in &self.atoms {
            if let LinAtom::C { k } = a {
                p = &p * &UniPoly::new(vec![k.clone(), GaussRat::one()]).pow(e);
            }
        }
        p
    }

    /// Product of the t-atoms only, as rows of powers of `t` with coefficients in 𝔠.
    fn t_part_rows(&self) -> Vec<UniPoly> {
        let mut p = BiPoly::one();
        for (a, &e) in &self.atoms {
            if a.involves_t() {
                p = &p * &a.to_bipoly().pow(e);
            }
        }
        p.to_major(T)
    }

    pub fn eval_complex(&self, t: Complex64, c: Complex64) -> Complex64 {
        self.atoms
            .iter()
            .map(|(a, &e)| a.eval_complex(t, c).powu(e))
            .product()
    }
}

impl fmt::Display for Denom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .atoms
            .iter()
            .map(|(a, &e)| if e == 1 { format!("({a})") } else { format!("({a})^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Reduced quotient `num / den` in `(t, 𝔠)`.
///
/// After normalization no atom of `den` divides `num`; since atoms are
/// irreducible this makes the fraction reduced.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct RatFunc {
    num: BiPoly,
    den: Denom,
}

impl RatFunc {
    pub fn from_parts(num: BiPoly, den: Denom) -> Self {
        let mut r = RatFunc { num, den };
        r.normalize();
        r
    }

    pub fn from_bipoly(p: BiPoly) -> Self {
        RatFunc { num: p, den: Denom::one() }
    }

    pub fn zero() -> Self {
        RatFunc::default()
    }

    pub fn one() -> Self {
        RatFunc::from_bipoly(BiPoly::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        RatFunc::from_bipoly(BiPoly::constant(c))
    }

    pub fn t() -> Self {
        RatFunc::from_bipoly(BiPoly::x())
    }

    pub fn c() -> Self {
        RatFunc::from_bipoly(BiPoly::y())
    }

    /// `scale · ∏ atom^e` with integer exponents of either sign.
    pub fn from_atoms(scale: &GaussRat, factors: &[(LinAtom, i64)]) -> Self {
        let mut num = BiPoly::constant(scale.clone());
        let mut den = Denom::one();
        for (a, e) in factors {
            if *e >= 0 {
                num = &num * &a.to_bipoly().pow(*e as u32);
            } else {
                den = den.mul(&Denom::atom(a.clone(), (-e) as u32));
            }
        }
        RatFunc::from_parts(num, den)
    }

    pub fn numer(&self) -> &BiPoly {
        &self.num
    }

    pub fn denom(&self) -> &Denom {
        &self.den
    }

    pub fn denom_poly(&self) -> BiPoly {
        self.den.to_bipoly()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial this equals, if the denominator is trivial.
    pub fn to_bipoly(&self) -> Option<BiPoly> {
        self.den.is_one().then(|| self.num.clone())
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = Denom::one();
            return;
        }
        let atoms: Vec<LinAtom> = self.den.atoms.keys().cloned().collect();
        for a in atoms {
            while self.den.exponent(&a) > 0 {
                match a.divide(&self.num) {
                    Some(q) => {
                        self.num = q;
                        self.den = self.den.quotient(&Denom::atom(a.clone(), 1));
                    }
                    None => break,
                }
            }
        }
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        RatFunc::from_parts(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        // a reduced fraction stays reduced under powers
        RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Partial derivative in `t` (`Var::X`) or 𝔠 (`Var::Y`).
    pub fn partial(&self, var: Var) -> Self {
        // d(N/∏L^e) = (N'·∏L − N·Σ e·L'·∏_{other}L) / (D·∏L) over atoms with L' ≠ 0
        let moving: Vec<(&LinAtom, u32, GaussRat)> = self
            .den
            .atoms
            .iter()
            .map(|(a, &e)| (a, e, a.partial(var)))
            .filter(|(_, _, d)| !d.is_zero())
            .collect();
        let prod_all = moving
            .iter()
            .fold(BiPoly::one(), |acc, (a, _, _)| &acc * &a.to_bipoly());
        let mut num = &self.num.partial(var) * &prod_all;
        for (k, (_, e, d)) in moving.iter().enumerate() {
            let others = moving
                .iter()
                .enumerate()
                .filter(|(l, _)| *l != k)
                .fold(BiPoly::one(), |acc, (_, (b, _, _))| &acc * &b.to_bipoly());
            let coef = d * &GaussRat::from_int(*e as i64);
            num = &num - &(&self.num * &others).scale(&coef);
        }
        let extra = moving
            .iter()
            .fold(Denom::one(), |acc, (a, _, _)| acc.mul(&Denom::atom((*a).clone(), 1)));
        RatFunc::from_parts(num, self.den.mul(&extra))
    }

    /// Restriction to the line `t = root(𝔠)`; `None` if that line is a pole.
    pub fn restrict_t(&self, root: &UniPoly) -> Option<RatC> {
        let mut num = UniPoly::zero();
        for (k, row) in self.num.to_major(T).iter().enumerate() {
            num = &num + &(row * &root.pow(k as u32));
        }
        let mut den = UniPoly::one();
        for (a, &e) in &self.den.atoms {
            den = &den * &a.at_t(root).pow(e);
        }
        (!den.is_zero()).then(|| RatC::new(num, den))
    }

    /// Order of the pole along `t = root(𝔠)` (0 if regular there).
    pub fn pole_order(&self, root: &UniPoly) -> Result<u32, AlgebraError> {
        Ok(self.den.exponent(&LinAtom::t_minus(root)?))
    }

    /// Principal-part coefficients of `(t−π)^(−ν) … (t−π)^(−1)`; the last is the residue.
    pub fn laurent_coefficients(&self, root: &UniPoly, nu: u32) -> Result<Vec<RatC>, AlgebraError> {
        let atom = LinAtom::t_minus(root)?;
        let actual = self.den.exponent(&atom);
        if actual != nu {
            return Err(AlgebraError::PoleOrderMismatch { declared: nu, actual });
        }
        let n = nu as usize;
        if n == 0 {
            return Ok(Vec::new());
        }
        let (series, den) = self.laurent_numerators(root, &atom, n)?;
        Ok(series.into_iter().map(|c| RatC::new(c, den.clone())).collect())
    }

    /// Laurent numerators over one common denominator, so no gcd runs until the end.
    fn laurent_numerators(&self, root: &UniPoly, atom: &LinAtom, n: usize) -> Result<(Vec<UniPoly>, UniPoly), AlgebraError> {
        // Taylor coefficients of the numerator at t = π via repeated synthetic division
        let mut rows = self.num.to_major(T);
        let mut series: Vec<UniPoly> = Vec::with_capacity(n);
        for _ in 0..n {
            let (q, r) = synthetic_division(&rows, root);
            series.push(r);
            rows = q;
        }
        let mut den = UniPoly::one();
        for (other, &e) in &self.den.atoms {
            if other == atom {
                continue;
            }
            let w = other.at_t(root);
            if w.is_zero() {
                return Err(AlgebraError::CoincidentPoles);
            }
            match other {
                // 1/(s + w)^e = Σ_m binom(−e, m)·s^m / w^(e+m); scale every term by w^(e+n−1)
                LinAtom::T { .. } => {
                    let mut factor = Vec::with_capacity(n);
                    let mut binom = GaussRat::one();
                    for m in 0..n {
                        factor.push(w.pow((n - 1 - m) as u32).scale(&binom));
                        // binom(−e, m+1) = binom(−e, m)·(−e−m)/(m+1)
                        binom = &binom * &GaussRat::from_frac(-(e as i64) - m as i64, m as i64 + 1);
                    }
                    series = mul_poly_series(&series, &factor);
                    den = &den * &w.pow(e + n as u32 - 1);
                }
                LinAtom::C { .. } => den = &den * &w.pow(e),
            }
        }
        Ok((series, den))
    }

    /// Residue along `t = π(𝔠)` through `1/(ν−1)!·∂^(ν−1)R/∂t^(ν−1)` with `R = f·(t−π)^ν`.
    pub fn residue_by_derivative(&self, root: &UniPoly) -> Result<RatC, AlgebraError> {
        let atom = LinAtom::t_minus(root)?;
        let nu = self.den.exponent(&atom);
        if nu == 0 {
            return Ok(RatC::zero());
        }
        let mut r = RatFunc::from_parts(self.num.clone(), self.den.quotient(&Denom::atom(atom, nu)));
        let mut fact = GaussRat::one();
        for k in 1..nu {
            r = r.partial(T);
            fact = &fact * &GaussRat::from_int(k as i64);
        }
        let v = r.restrict_t(root).ok_or(AlgebraError::CoincidentPoles)?;
        Ok(v.scale(&fact.inv().expect("nonzero factorial")))
    }

    /// Residue at the pole `t = π(𝔠)`, zero if there is no pole.
    pub fn residue(&self, root: &UniPoly) -> Result<RatC, AlgebraError> {
        let nu = self.pole_order(root)?;
        if nu == 0 {
            return Ok(RatC::zero());
        }
        let atom = LinAtom::t_minus(root)?;
        let (mut series, den) = self.laurent_numerators(root, &atom, nu as usize)?;
        Ok(RatC::new(series.pop().expect("nu > 0"), den))
    }

    /// Distinct finite poles in `t` with their orders.
    pub fn finite_poles(&self) -> Vec<(UniPoly, u32)> {
        self.den
            .atoms
            .iter()
            .filter_map(|(a, &e)| a.t_root().map(|r| (r, e)))
            .collect()
    }

    /// Residue at `t = ∞`, minus the coefficient of `1/t` in the expansion at infinity.
    pub fn residue_at_infinity(&self) -> RatC {
        let rows = self.num.to_major(T);
        let drows = self.den.t_part_rows();
        let dd = drows.len() - 1;
        // the t-part of the denominator is monic, so division stays polynomial in 𝔠
        let mut rem = rows;
        if rem.len() > dd {
            for k in (dd..rem.len()).rev() {
                let q = rem[k].clone();
                if q.is_zero() {
                    continue;
                }
                for (j, dc) in drows.iter().enumerate() {
                    let shift = k - dd + j;
                    rem[shift] = &rem[shift] - &(&q * dc);
                }
            }
        }
        let top = if dd >= 1 { rem.get(dd - 1).cloned().unwrap_or_default() } else { UniPoly::zero() };
        -&RatC::new(top, self.den.c_part())
    }

    pub fn eval_complex(&self, t: Complex64, c: Complex64) -> Complex64 {
        self.num.eval_complex(t, c) / self.den.eval_complex(t, c)
    }
}

/// Truncated product of two power series of equal length with polynomial coefficients.
fn mul_poly_series(a: &[UniPoly], b: &[UniPoly]) -> Vec<UniPoly> {
    let n = a.len();
    (0..n)
        .map(|k| {
            (0..=k).fold(UniPoly::zero(), |acc, i| {
                if a[i].is_zero() || b[k - i].is_zero() {
                    acc
                } else {
                    &acc + &(&a[i] * &b[k - i])
                }
            })
        })
        .collect()
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.num.display_with("t", "c");
        if self.den.is_one() {
            f.write_str(&n)
        } else {
            write!(f, "({n})/({})", self.den)
        }
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let l = self.den.lcm(&o.den);
        let a = &self.num * &l.quotient(&self.den).to_bipoly();
        let b = &o.num * &l.quotient(&o.den).to_bipoly();
        RatFunc::from_parts(&a + &b, l)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        RatFunc::from_parts(&self.num * &o.num, self.den.mul(&o.den))
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}
