//! Machine-readable `report.json` and human-readable `report.txt`.
//!
//! Exact numbers are written as strings (`"a/b"`) or `{"re": "a/b", "im": "c/d"}`;
//! only oracle deltas are floats. Keys are sorted, so re-serializing a parsed
//! report reproduces it byte for byte.

use std::fmt::Write as _;

use abint::abelian::IntegralReport;
use abint::algebra::{BiPoly, GaussRat, UniPoly};
use abint::oracle::locate_roots;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

/// Oracle comparison for one cycle at one value of `𝔠`.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleCycle {
    pub cycle: usize,
    /// `|rectified − exact| / (1 + |exact|)`.
    pub rectified_delta: f64,
    /// `|fiber − rectified| / (1 + |rectified|)`.
    pub fiber_delta: f64,
    /// Gap of the original-coordinate loop, when an automorphism is present.
    pub original_delta: Option<f64>,
    pub dc_component: f64,
}

impl OracleCycle {
    pub fn worst(&self) -> f64 {
        self.rectified_delta.max(self.fiber_delta).max(self.original_delta.unwrap_or(0.0))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleSample {
    pub c: GaussRat,
    pub cycles: Vec<OracleCycle>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleSummary {
    pub samples: usize,
    pub tolerance: f64,
    pub evaluations: Vec<OracleSample>,
    /// Set when an integral failed to converge or a contour could not be placed.
    pub failure: Option<String>,
}

impl OracleSummary {
    pub fn max_delta(&self) -> f64 {
        self.evaluations.iter().flat_map(|s| &s.cycles).map(OracleCycle::worst).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.max_delta() <= self.tolerance
    }
}

/// Golden comparison of a bundled example.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenCheck {
    pub matched: bool,
    /// One line per mismatching item, e.g. `cycle 1: got − expected = ...`.
    pub diff: Vec<String>,
}

pub fn exact_json(c: &GaussRat) -> Value {
    if c.is_real() {
        Value::String(c.re().to_string())
    } else {
        json!({"re": c.re().to_string(), "im": c.im().to_string()})
    }
}

fn exact_list(v: &[GaussRat]) -> Value {
    Value::Array(v.iter().map(exact_json).collect())
}

fn terms_json(p: &BiPoly) -> Value {
    Value::Array(p.terms().map(|(&(i, j), c)| json!({"i": i, "j": j, "coeff": exact_json(c)})).collect())
}

fn float_json(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

/// Content and factors of a polynomial in `𝔠`, with linear factors over `ℚ(i)` split off.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factored {
    pub content: GaussRat,
    /// Linear factors with multiplicity, followed by the remaining cofactor when nonconstant.
    pub factors: Vec<(UniPoly, usize)>,
}

impl Factored {
    pub fn expand(&self) -> UniPoly {
        self.factors
            .iter()
            .fold(UniPoly::constant(self.content.clone()), |acc, (f, k)| &acc * &f.pow(*k as u32))
    }
}

impl std::fmt::Display for Factored {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut out = String::new();
        let single = self.factors.len() == 1 && self.factors[0].1 == 1;
        match self.content.to_string().as_str() {
            "1" if !self.factors.is_empty() => {}
            "-1" if !self.factors.is_empty() => out.push('-'),
            s if self.content.is_compound() => write!(out, "({s})").unwrap(),
            s => out.push_str(s),
        }
        for (p, k) in &self.factors {
            if single && out.is_empty() {
                out.push_str(&p.to_string());
                continue;
            }
            write!(out, "({p})").unwrap();
            if *k > 1 {
                write!(out, "^{k}").unwrap();
            }
        }
        f.write_str(&out)
    }
}

fn gauss_round(z: Complex64, q: i64) -> GaussRat {
    GaussRat::from_parts(((z.re * q as f64).round() as i64, q), ((z.im * q as f64).round() as i64, q))
}

/// Integer-primitive cofactor with positive leading coefficient for rational polynomials,
/// the monic one otherwise.
fn normalize(p: &UniPoly) -> UniPoly {
    if !p.coeffs().iter().all(GaussRat::is_real) {
        return p.monic();
    }
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for c in p.coeffs() {
        num = num.gcd(c.re().numer());
        den = den.lcm(c.re().denom());
    }
    let mut content = GaussRat::from(BigRational::new(num, den));
    if p.lead().re().is_negative() {
        content = -content;
    }
    p.scale(&content.inv().expect("nonzero content"))
}

/// Splits off every linear factor with a root in `ℚ(i)` whose denominator is at most 64.
///
/// Candidate roots come from rounding numeric roots and are confirmed exactly.
pub fn factor_linear(p: &UniPoly) -> Factored {
    if p.is_constant() {
        return Factored { content: p.coeff(0), factors: Vec::new() };
    }
    let mut rest = p.clone();
    let mut factors: Vec<(UniPoly, usize)> = Vec::new();
    for z in locate_roots(p).unwrap_or_default() {
        let found = (1..=64).map(|q| gauss_round(z, q)).find(|cand| rest.eval(cand).is_zero());
        let Some(root) = found else { continue };
        let lin = UniPoly::linear_root(&root);
        let mut k = 0;
        while let Some(next) = rest.exact_div(&lin) {
            rest = next;
            k += 1;
        }
        factors.push((normalize(&lin), k));
    }
    factors.sort_by(|a, b| a.0.coeffs().cmp(b.0.coeffs()));
    if !rest.is_constant() {
        factors.push((normalize(&rest), 1));
    }
    let mut out = Factored { content: GaussRat::one(), factors };
    out.content = &p.lead() / &out.expand().lead();
    out
}

/// Builds `report.json`.
pub fn report_json(
    name: &str,
    rep: &IntegralReport,
    oracle: Option<&OracleSummary>,
    golden: Option<&GoldenCheck>,
) -> Value {
    let facts = &rep.facts;
    let mut family = Map::new();
    family.insert("tag".into(), json!(facts.family.to_string()));
    family.insert("degree".into(), json!(facts.degree));
    family.insert("homology_rank".into(), json!(facts.homology_rank));
    family.insert("r".into(), json!(facts.r));
    family.insert("sign_case".into(), json!(facts.sign_case));
    family.insert("beta".into(), exact_list(&facts.beta));
    family.insert("punctures".into(), json!(facts.punctures.iter().map(|p| p.to_string()).collect::<Vec<_>>()));
    if let Some(s) = &facts.shape {
        family.insert(
            "shape".into(),
            json!({"p1": s.p1, "p": s.p, "q1": s.q1, "q": s.q, "k": s.k, "P": exact_list(s.poly_p.coeffs())}),
        );
    }

    let integrals: Vec<Value> = rep
        .integrals
        .iter()
        .zip(&rep.zeros)
        .map(|(ai, z)| {
            json!({
                "cycle": ai.cycle.index,
                "puncture": ai.cycle.puncture.to_string(),
                "location": exact_list(ai.cycle.location.coeffs()),
                "coefficients": exact_list(ai.value.coeffs()),
                "degree": ai.degree(),
                "zeros": z,
                "polynomial": ai.value.to_string(),
            })
        })
        .collect();

    let checks: Vec<Value> = rep
        .ledger
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "observed": c.observed,
                "relation": c.relation.symbol(),
                "bound": c.bound,
                "satisfied": c.satisfied(),
            })
        })
        .collect();
    let d = rep.degrees;

    let oracle_json = oracle.map(|o| {
        let evals: Vec<Value> = o
            .evaluations
            .iter()
            .map(|s| {
                let cycles: Vec<Value> = s
                    .cycles
                    .iter()
                    .map(|c| {
                        let mut m = Map::new();
                        m.insert("cycle".into(), json!(c.cycle));
                        m.insert("rectified_delta".into(), float_json(c.rectified_delta));
                        m.insert("fiber_delta".into(), float_json(c.fiber_delta));
                        m.insert("dc_component".into(), float_json(c.dc_component));
                        if let Some(od) = c.original_delta {
                            m.insert("original_delta".into(), float_json(od));
                        }
                        Value::Object(m)
                    })
                    .collect();
                json!({"c": exact_json(&s.c), "cycles": cycles})
            })
            .collect();
        json!({
            "samples": o.samples,
            "tolerance": float_json(o.tolerance),
            "max_delta": float_json(o.max_delta()),
            "passed": o.passed(),
            "failure": o.failure,
            "evaluations": evals,
        })
    });

    let mut root = Map::new();
    root.insert("name".into(), json!(name));
    root.insert("family".into(), Value::Object(family));
    root.insert("bifurcation_set".into(), exact_list(&rep.bifurcation_set_used));
    root.insert(
        "degrees".into(),
        json!({"m": d.m, "n": d.n, "m_normal_form": d.m_nf, "n_normal_form": d.n_nf, "n_nonexact": d.n_ne}),
    );
    root.insert(
        "transformed_form".into(),
        json!({"dx": terms_json(&rep.transformed_form.a), "dy": terms_json(&rep.transformed_form.b)}),
    );
    root.insert(
        "nonexact_basis".into(),
        Value::Array(rep.basis.coeffs.iter().map(|(&(i, j), c)| json!({"i": i, "j": j, "coeff": exact_json(c)})).collect()),
    );
    root.insert("exact_part".into(), terms_json(&rep.basis.exact_part));
    root.insert("integrals".into(), Value::Array(integrals));
    root.insert("n_bc".into(), json!(rep.n_bc));
    root.insert("nonconservative".into(), json!(rep.nonconservative));
    root.insert(
        "bounds".into(),
        json!({"zeta": rep.ledger.zeta, "satisfied": rep.ledger.satisfied(), "checks": checks}),
    );
    root.insert("oracle".into(), oracle_json.unwrap_or(Value::Null));
    if let Some(g) = golden {
        root.insert("golden".into(), json!({"matched": g.matched, "diff": g.diff}));
    }
    Value::Object(root)
}

/// Canonical text of a JSON value: sorted keys, two-space indent, trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Builds `report.txt`.
pub fn report_text(
    name: &str,
    rep: &IntegralReport,
    oracle: Option<&OracleSummary>,
    golden: Option<&GoldenCheck>,
) -> String {
    let mut out = String::new();
    let facts = &rep.facts;
    let d = rep.degrees;
    writeln!(out, "{name}").unwrap();
    writeln!(out, "{}", "=".repeat(name.chars().count().max(1))).unwrap();
    writeln!(
        out,
        "family {} of degree {}, homology rank {}, punctures: {}",
        facts.family,
        facts.degree,
        facts.homology_rank,
        facts.punctures.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
    )
    .unwrap();
    writeln!(out, "degrees: m = {}, n = {}, normal-form form degree {}, non-exact degree {}", d.m, d.n, d.n_nf, d.n_ne).unwrap();
    let bset: Vec<String> = rep.bifurcation_set_used.iter().map(|b| b.to_string()).collect();
    writeln!(out, "bifurcation set: {{{}}}", bset.join(", ")).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "integrals (coefficients of 2*pi*i):").unwrap();
    for (ai, z) in rep.integrals.iter().zip(&rep.zeros) {
        let label = format!("  I{} around {}", ai.cycle.index, ai.cycle.puncture);
        writeln!(out, "{label} = {}", factor_linear(&ai.value)).unwrap();
        match z {
            Some(z) => writeln!(out, "    degree {}, zeros outside the bifurcation set: {z}", ai.degree().unwrap_or(0)).unwrap(),
            None => writeln!(out, "    identically zero").unwrap(),
        }
        if ai.degree().unwrap_or(0) > 0 {
            if let Ok(roots) = locate_roots(&ai.value) {
                let rs: Vec<String> = roots.iter().map(|r| format!("{:.6}{:+.6}i", r.re, r.im)).collect();
                writeln!(out, "    roots: {}", rs.join(", ")).unwrap();
            }
        }
    }
    match rep.n_bc {
        Some(n) => writeln!(out, "N_BC = {n}").unwrap(),
        None => writeln!(out, "N_BC undefined: some integral vanishes identically").unwrap(),
    }
    writeln!(out).unwrap();
    writeln!(out, "bound ledger (Z(m,n,rank) = {}):", rep.ledger.zeta).unwrap();
    for c in &rep.ledger.checks {
        let mark = if c.satisfied() { "ok  " } else { "FAIL" };
        writeln!(out, "  [{mark}] {}: {} {} {}", c.name, c.observed, c.relation.symbol(), c.bound).unwrap();
    }
    if let Some(o) = oracle {
        writeln!(out).unwrap();
        let verdict = if o.passed() { "agrees" } else { "MISMATCH" };
        writeln!(
            out,
            "oracle: {verdict}, {} values of c, max relative delta {:.3e} (tolerance {:.0e})",
            o.evaluations.len(),
            o.max_delta(),
            o.tolerance
        )
        .unwrap();
        if let Some(f) = &o.failure {
            writeln!(out, "  failure: {f}").unwrap();
        }
    }
    if let Some(g) = golden {
        writeln!(out).unwrap();
        writeln!(out, "golden comparison: {}", if g.matched { "match" } else { "MISMATCH" }).unwrap();
        for line in &g.diff {
            writeln!(out, "  {line}").unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_rational_linear_factors() {
        // 3(c + 1)(4c^6 + 3c^5 − 36c − 58)
        let p = &(&UniPoly::from_ints(&[3]) * &UniPoly::from_ints(&[1, 1])) * &UniPoly::from_ints(&[-58, -36, 0, 0, 0, 3, 4]);
        let f = factor_linear(&p);
        assert_eq!(f.expand(), p);
        assert_eq!(f.to_string(), "3(c + 1)(4*c^6 + 3*c^5 - 36*c - 58)");
    }

    #[test]
    fn splits_repeated_and_fractional_roots() {
        // (2c − 1)²(c + i)
        let lin = UniPoly::from_ints(&[-1, 2]);
        let p = &lin.pow(2) * &UniPoly::new(vec![GaussRat::i(), GaussRat::one()]);
        let f = factor_linear(&p);
        assert_eq!(f.expand(), p);
        assert_eq!(f.factors.len(), 2);
        assert!(f.factors.iter().any(|(g, k)| *g == lin && *k == 2));
    }

    #[test]
    fn irreducible_quadratic_stays_whole() {
        let p = UniPoly::from_ints(&[2, 0, 1]);
        let f = factor_linear(&p);
        assert_eq!(f.factors, vec![(p.clone(), 1)]);
        assert_eq!(f.to_string(), "c^2 + 2");
    }

    #[test]
    fn exact_numbers_serialize_as_strings() {
        assert_eq!(exact_json(&GaussRat::from_frac(-3, 4)), json!("-3/4"));
        assert_eq!(exact_json(&GaussRat::from_parts((1, 2), (-1, 1))), json!({"re": "1/2", "im": "-1"}));
    }
}
