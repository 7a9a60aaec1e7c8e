//! Floating-point cross-checks: trapezoidal contour integrals on circles and
//! simultaneous-iteration root finding.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::abelian::IntegralReport;
use num_rational::BigRational;

use crate::algebra::{BiPoly, GaussRat, LinAtom, RatFunc, UniPoly, Var};
use crate::rectify::{CanonicalCycle, RectifyingMap};
use crate::transform::{OneForm, PolyAutomorphism};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("no convergence after {samples} samples (last change {delta:e}, estimate {estimate})")]
    NonConvergence { samples: usize, delta: f64, estimate: Complex64 },
    #[error("invalid contour: {0}")]
    InvalidContour(String),
    #[error("root finder did not converge within {0} iterations")]
    RootsNotConverged(usize),
}

const REL_TOL: f64 = 1e-10;
const MAX_SAMPLES: usize = 1 << 20;

/// Circle `center + radius·e^(iθ)` sampled at `samples` points (a power of two).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourSpec {
    pub center: Complex64,
    pub radius: f64,
    pub samples: usize,
}

impl ContourSpec {
    pub fn new(center: Complex64, radius: f64, samples: usize) -> Result<Self, OracleError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(OracleError::InvalidContour(format!("radius {radius} must be positive")));
        }
        if !samples.is_power_of_two() || samples < 4 {
            return Err(OracleError::InvalidContour(format!("samples {samples} must be a power of two >= 4")));
        }
        Ok(ContourSpec { center, radius, samples })
    }

    /// Circle just inside a quarter of the distance to the nearest other puncture.
    pub fn around(center: Complex64, others: &[Complex64], samples: usize) -> Result<Self, OracleError> {
        let d = others
            .iter()
            .map(|o| (o - center).norm())
            .fold(f64::INFINITY, f64::min);
        let radius = if d.is_finite() { 0.95 * d / 4.0 } else { 0.5 };
        if radius < 1e-9 {
            return Err(OracleError::InvalidContour("punctures nearly coincide".into()));
        }
        ContourSpec::new(center, radius, samples)
    }

    fn point(&self, k: usize, n: usize) -> (Complex64, Complex64) {
        let e = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
        (self.center + e * self.radius, e)
    }
}

/// Trapezoidal rule with sample doubling; `g(t, e^(iθ))` returns the integrand times `dt/dθ / i`.
fn adaptive_circle<F: Fn(Complex64, Complex64) -> Complex64>(spec: &ContourSpec, g: F) -> Result<Complex64, OracleError> {
    let mut n = spec.samples;
    let mut sum: Complex64 = (0..n).map(|k| {
        let (t, e) = spec.point(k, n);
        g(t, e)
    }).sum();
    let mut est = sum / n as f64;
    loop {
        // reuse the old points; add the odd ones of the refined grid
        let fresh: Complex64 = (0..n).map(|k| {
            let (t, e) = spec.point(2 * k + 1, 2 * n);
            g(t, e)
        }).sum();
        sum += fresh;
        n *= 2;
        let next = sum / n as f64;
        let delta = (next - est).norm();
        if !delta.is_finite() {
            return Err(OracleError::NonConvergence { samples: n, delta, estimate: next });
        }
        if delta <= REL_TOL * next.norm().max(1.0) {
            return Ok(next);
        }
        if n >= MAX_SAMPLES {
            return Err(OracleError::NonConvergence { samples: n, delta, estimate: next });
        }
        est = next;
    }
}

/// Bivariate polynomial with `f64` coefficients for fast repeated evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct NumBiPoly {
    terms: Vec<(i32, i32, Complex64)>,
}

impl NumBiPoly {
    pub fn new(p: &BiPoly) -> Self {
        NumBiPoly { terms: p.terms().map(|(&(i, j), c)| (i as i32, j as i32, c.to_complex())).collect() }
    }

    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.terms.iter().map(|&(i, j, c)| c * x.powi(i) * y.powi(j)).sum()
    }
}

/// Rational function in `(t, 𝔠)` with `f64` coefficients; the denominator stays factored.
#[derive(Clone, Debug, PartialEq)]
pub struct NumRatFunc {
    num: NumBiPoly,
    // (alpha, beta, e) for (t − alpha·𝔠 − beta)^e, and (k, e) for (𝔠 + k)^e
    t_atoms: Vec<(Complex64, Complex64, i32)>,
    c_atoms: Vec<(Complex64, i32)>,
}

impl NumRatFunc {
    pub fn new(f: &RatFunc) -> Self {
        let mut t_atoms = Vec::new();
        let mut c_atoms = Vec::new();
        for (atom, e) in f.denom().atoms() {
            match atom {
                LinAtom::T { alpha, beta } => t_atoms.push((alpha.to_complex(), beta.to_complex(), e as i32)),
                LinAtom::C { k } => c_atoms.push((k.to_complex(), e as i32)),
            }
        }
        NumRatFunc { num: NumBiPoly::new(f.numer()), t_atoms, c_atoms }
    }

    pub fn eval(&self, t: Complex64, c: Complex64) -> Complex64 {
        let den: Complex64 = self
            .t_atoms
            .iter()
            .map(|&(a, b, e)| (t - a * c - b).powi(e))
            .chain(self.c_atoms.iter().map(|&(k, e)| (c + k).powi(e)))
            .product();
        self.num.eval(t, c) / den
    }
}

/// Exact Gaussian rational equal to a finite double-precision complex number.
fn exact_complex(z: Complex64) -> Result<GaussRat, OracleError> {
    let conv = |v: f64| BigRational::from_float(v).ok_or_else(|| OracleError::InvalidContour(format!("non-finite value {v}")));
    Ok(GaussRat::new(conv(z.re)?, conv(z.im)?))
}

/// `f(center + s, c)` as a function of `s`, with the numerator Taylor-shifted exactly.
///
/// Evaluating the expanded numerator next to a high-order pole loses every digit
/// to cancellation; the shifted form keeps each term small.
struct Centered {
    num: Vec<Complex64>,
    offsets: Vec<(Complex64, i32)>,
    scale: Complex64,
}

impl Centered {
    fn new(f: &RatFunc, center: &UniPoly, c: Complex64) -> Result<Self, OracleError> {
        let ce = exact_complex(c)?;
        let pi = center.eval(&ce);
        let rows = f.numer().to_major(Var::X);
        let in_t = UniPoly::new(rows.iter().map(|r| r.eval(&ce)).collect());
        let shifted = in_t.compose(&UniPoly::new(vec![pi.clone(), GaussRat::one()]));
        let mut offsets = Vec::new();
        let mut scale = Complex64::new(1.0, 0.0);
        for (atom, e) in f.denom().atoms() {
            match atom {
                LinAtom::T { alpha, beta } => {
                    let off = &(&pi - &(alpha * &ce)) - beta;
                    offsets.push((off.to_complex(), e as i32));
                }
                LinAtom::C { k } => scale /= (&ce + k).to_complex().powi(e as i32),
            }
        }
        Ok(Centered { num: shifted.coeffs().iter().map(GaussRat::to_complex).collect(), offsets, scale })
    }

    fn eval(&self, s: Complex64) -> Complex64 {
        let n = self.num.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * s + c);
        let d: Complex64 = self.offsets.iter().map(|&(o, e)| (s + o).powi(e)).product();
        self.scale * n / d
    }
}

/// `(1/2π√−1)·∮ eta_t dt` around the circle `spec` centered at `location(c)`.
pub fn contour_integral_t(
    eta_t: &RatFunc,
    location: &UniPoly,
    c: Complex64,
    spec: &ContourSpec,
) -> Result<Complex64, OracleError> {
    let f = Centered::new(eta_t, location, c)?;
    let center = spec.center;
    // dt = i·r·e^(iθ) dθ, and dividing by 2πi leaves r·e^(iθ)·f / (2π) dθ
    adaptive_circle(spec, |t, e| f.eval(t - center) * e * spec.radius)
}

/// Derivative of an analytic function of `t` by a Cauchy integral on a small circle.
fn cauchy_derivative<F: Fn(Complex64) -> Complex64>(f: &F, t: Complex64, h: f64) -> Complex64 {
    const M: usize = 32;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..M {
        let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / M as f64);
        acc += f(t + w * h) / w;
    }
    acc / (M as f64 * h)
}

/// `(1/2π√−1)·∮ w` along the fiber loop `t ↦ (x(t, c), y(t, c))` over the circle `spec`.
///
/// The inverse map is evaluated numerically and differentiated by Cauchy integrals,
/// so this path shares no symbolic step with the residue computation.
pub fn contour_integral_fiber(
    w: &OneForm,
    rm: &RectifyingMap,
    c: Complex64,
    spec: &ContourSpec,
) -> Result<Complex64, OracleError> {
    let (ix, iy) = (NumRatFunc::new(&rm.inverse_x), NumRatFunc::new(&rm.inverse_y));
    let (a, b) = (NumBiPoly::new(&w.a), NumBiPoly::new(&w.b));
    let x = |t: Complex64| ix.eval(t, c);
    let y = |t: Complex64| iy.eval(t, c);
    let h = spec.radius / 4.0;
    adaptive_circle(spec, |t, e| {
        let (xv, yv) = (x(t), y(t));
        let dx = cauchy_derivative(&x, t, h);
        let dy = cauchy_derivative(&y, t, h);
        (a.eval(xv, yv) * dx + b.eval(xv, yv) * dy) * e * spec.radius
    })
}

/// `(1/2π√−1)·∮ ω` along the original-coordinate cycle `ψ⁻¹(x(t, 𝔠), y(t, 𝔠))`, `𝔠 = σ(c)`.
///
/// The circle `spec` lives in the rectified `t`-plane at level `σ(c)`.
pub fn contour_integral_original(
    w: &OneForm,
    aut: &PolyAutomorphism,
    rm: &RectifyingMap,
    c: Complex64,
    spec: &ContourSpec,
) -> Result<Complex64, OracleError> {
    let sc = aut.sigma_prime().to_complex() * c + aut.sigma(&GaussRat::zero()).to_complex();
    let (ix, iy) = (NumRatFunc::new(&rm.inverse_x), NumRatFunc::new(&rm.inverse_y));
    let (pu, pv) = (NumBiPoly::new(&aut.inverse().0), NumBiPoly::new(&aut.inverse().1));
    let (a, b) = (NumBiPoly::new(&w.a), NumBiPoly::new(&w.b));
    let u = |t: Complex64| pu.eval(ix.eval(t, sc), iy.eval(t, sc));
    let v = |t: Complex64| pv.eval(ix.eval(t, sc), iy.eval(t, sc));
    let h = spec.radius / 4.0;
    adaptive_circle(spec, |t, e| {
        let (uv, vv) = (u(t), v(t));
        let du = cauchy_derivative(&u, t, h);
        let dv = cauchy_derivative(&v, t, h);
        (a.eval(uv, vv) * du + b.eval(uv, vv) * dv) * e * spec.radius
    })
}

/// `(1/2π√−1)·∮ eta_c d𝔠` along the loop `θ ↦ (t(θ), 𝔠(θ))` with `𝔠(θ) = c`.
///
/// `d𝔠/dθ` comes from a central difference of the path coordinate.
pub fn contour_integral_dc(eta_c: &RatFunc, c: Complex64, spec: &ContourSpec) -> Result<Complex64, OracleError> {
    let f = NumRatFunc::new(eta_c);
    let path_c = |_theta: f64| c;
    let h = 1e-4;
    adaptive_circle(spec, |t, e| {
        let theta = e.arg();
        let dc = (path_c(theta + h) - path_c(theta - h)) / (2.0 * h);
        f.eval(t, c) * dc / Complex64::new(0.0, 1.0)
    })
}

/// Numeric positions of the cycle punctures at the value `c`.
pub fn puncture_positions(cycles: &[CanonicalCycle], c: Complex64) -> Vec<Complex64> {
    cycles.iter().map(|cy| cy.location.eval_complex(c)).collect()
}

/// Contour around `cycles[idx]` avoiding every other puncture and the line `t = c`.
pub fn contour_for(cycles: &[CanonicalCycle], idx: usize, c: Complex64, samples: usize) -> Result<ContourSpec, OracleError> {
    let pos = puncture_positions(cycles, c);
    let others: Vec<Complex64> = pos
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != idx)
        .map(|(_, p)| *p)
        .collect();
    ContourSpec::around(pos[idx], &others, samples)
}

/// Radius for the contour around `cycles[idx]` that minimizes the peak of `|eta_t|·r`.
///
/// Candidates are the admissible radius halved up to ten times, or powers of two
/// from 1/64 to 256 for an isolated puncture. Roundoff in the trapezoid sums
/// scales with that peak.
pub fn tuned_contour(
    eta_t: &RatFunc,
    cycles: &[CanonicalCycle],
    idx: usize,
    c: Complex64,
    samples: usize,
) -> Result<ContourSpec, OracleError> {
    let base = contour_for(cycles, idx, c, samples)?;
    let f = Centered::new(eta_t, &cycles[idx].location, c)?;
    let candidates: Vec<f64> = if cycles.len() == 1 {
        (-6..=8).map(|j| 2f64.powi(j)).collect()
    } else {
        (0..=10).map(|j| base.radius / 2f64.powi(j)).collect()
    };
    const PROBE: usize = 64;
    let peak = |r: f64| {
        (0..PROBE)
            .map(|k| (f.eval(Complex64::from_polar(r, 2.0 * PI * k as f64 / PROBE as f64)) * r).norm())
            .fold(0.0, f64::max)
    };
    let mut best = (f64::INFINITY, base.radius);
    for r in candidates {
        let p = peak(r);
        if p.is_finite() && p < best.0 {
            best = (p, r);
        }
    }
    ContourSpec::new(base.center, best.1, samples)
}

/// Square-free decomposition `p = ∏ f_k^k` (Yun), dropping constant factors.
fn square_free(p: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    let dp = p.derivative();
    let mut a = UniPoly::gcd(p, &dp);
    if a.is_zero() {
        return out;
    }
    let mut b = p.exact_div(&a).expect("gcd divides");
    let mut c = dp.exact_div(&a).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut k = 1;
    while !b.is_constant() {
        a = UniPoly::gcd(&b, &d);
        let next_b = b.exact_div(&a).expect("gcd divides");
        c = d.exact_div(&a).expect("gcd divides");
        if !a.is_constant() {
            out.push((a.clone(), k));
        }
        b = next_b;
        d = &c - &b.derivative();
        k += 1;
    }
    out
}

/// Durand-Kerner iteration on a square-free polynomial.
fn durand_kerner(p: &UniPoly) -> Result<Vec<Complex64>, OracleError> {
    let n = p.degree().unwrap_or(0);
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = p.lead().to_complex();
    let coeffs: Vec<Complex64> = p.coeffs().iter().map(|c| c.to_complex() / lead).collect();
    let eval = |z: Complex64| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    // Cauchy bound on root moduli
    let bound = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * (bound / 2.0).max(0.5)).collect();
    const CAP: usize = 5000;
    for _ in 0..CAP {
        let mut change: f64 = 0.0;
        for i in 0..n {
            let denom: Complex64 = (0..n).filter(|&j| j != i).map(|j| z[i] - z[j]).product();
            let step = eval(z[i]) / denom;
            z[i] -= step;
            change = change.max(step.norm() / z[i].norm().max(1.0));
        }
        if change < 1e-15 {
            break;
        }
    }
    let scale: f64 = coeffs.iter().map(|c| c.norm()).sum();
    for zi in &z {
        let mag = coeffs.iter().enumerate().map(|(k, c)| c.norm() * zi.norm().powi(k as i32)).sum::<f64>();
        if eval(*zi).norm() > 1e-10 * mag.max(scale) {
            return Err(OracleError::RootsNotConverged(CAP));
        }
    }
    Ok(z)
}

/// All complex roots with multiplicity, so the count equals the degree.
pub fn locate_roots(p: &UniPoly) -> Result<Vec<Complex64>, OracleError> {
    let mut roots = Vec::new();
    for (f, k) in square_free(p) {
        for z in durand_kerner(&f)? {
            roots.extend(std::iter::repeat_n(z, k));
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

/// Relative mismatch `|a − b| / (1 + |b|)`.
pub fn relative_gap(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

/// Exact value beside the two numeric contour integrals for one cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleCheck {
    pub cycle: usize,
    pub exact: Complex64,
    pub rectified: Complex64,
    pub fiber: Complex64,
    pub dc_component: Complex64,
    pub spec: ContourSpec,
}

impl CycleCheck {
    /// Largest relative gap between the exact value and either numeric estimate.
    pub fn gap(&self) -> f64 {
        relative_gap(self.rectified, self.exact).max(relative_gap(self.fiber, self.exact))
    }
}

/// Compares every integral of `report` at `c` against both contour integrals.
pub fn check_report(report: &IntegralReport, c: Complex64, samples: usize) -> Result<Vec<CycleCheck>, OracleError> {
    let rm = &report.rectifier;
    let eta = rm.pushforward(&report.transformed_form);
    report
        .integrals
        .iter()
        .enumerate()
        .map(|(idx, ai)| {
            let spec = tuned_contour(&eta.eta_t, &rm.cycles, idx, c, samples)?;
            Ok(CycleCheck {
                cycle: ai.cycle.index,
                exact: ai.value.eval_complex(c),
                rectified: contour_integral_t(&eta.eta_t, &ai.cycle.location, c, &spec)?,
                fiber: contour_integral_fiber(&report.transformed_form, rm, c, &spec)?,
                dc_component: contour_integral_dc(&eta.eta_c, c, &spec)?,
                spec,
            })
        })
        .collect()
}
