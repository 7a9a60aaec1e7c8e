//! JSON problem configuration and its conversion to a [`Problem`].

use abint::abelian::Problem;
use abint::algebra::{BiPoly, GaussRat, UniPoly};
use abint::catalog::{self, Example};
use abint::family::{NormalForm, Shape};
use abint::transform::{OneForm, PolyAutomorphism};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::report::exact_json;
use crate::CliError;

/// Exact number written as `"a/b"`, `"a/b+c/di"`, an integer, or `{"re": .., "im": ..}`.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(try_from = "Value")]
pub struct Exact(pub GaussRat);

fn rational_part(v: &Value) -> Result<GaussRat, String> {
    match v {
        Value::String(s) => s.parse().map_err(|_| format!("cannot parse {s:?} as an exact rational")),
        Value::Number(n) => n
            .as_i64()
            .map(GaussRat::from_int)
            .ok_or_else(|| format!("{n} is not an integer; write fractions as strings like \"1/3\"")),
        other => Err(format!("expected a number or string, found {other}")),
    }
}

impl TryFrom<Value> for Exact {
    type Error = String;

    fn try_from(v: Value) -> Result<Self, String> {
        match &v {
            Value::Object(map) => {
                if let Some(k) = map.keys().find(|k| *k != "re" && *k != "im") {
                    return Err(format!("unknown key {k:?} in complex number"));
                }
                let part = |k: &str| map.get(k).map(rational_part).transpose().map(Option::unwrap_or_default);
                let re = part("re")?;
                let im = part("im")?;
                if !re.is_real() || !im.is_real() {
                    return Err("re and im must be real".into());
                }
                Ok(Exact(&re + &(&im * &GaussRat::i())))
            }
            _ => rational_part(&v).map(Exact),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Differential {
    Dx,
    Dy,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormTerm {
    pub i: u32,
    pub j: u32,
    pub coeff: Exact,
    pub differential: Differential,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTerm {
    pub i: u32,
    pub j: u32,
    pub coeff: Exact,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyMap {
    pub x: Vec<PolyTerm>,
    pub y: Vec<PolyTerm>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismConfig {
    /// `ψ(u, v) = (x, y)`.
    pub forward: PolyMap,
    /// `ψ⁻¹(x, y) = (u, v)`.
    pub inverse: PolyMap,
    /// `[s0, s1]` for `σ(c) = s0 + s1·c`.
    pub sigma: Vec<Exact>,
    /// The original Hamiltonian, checked against the normal form when present.
    #[serde(default)]
    pub hamiltonian: Option<Vec<PolyTerm>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeParams {
    pub p1: u32,
    pub p: u32,
    #[serde(default)]
    pub q1: Option<u32>,
    #[serde(default)]
    pub q: Option<u32>,
    pub k: u32,
    /// Coefficients of `P`, constant term first.
    #[serde(rename = "P", default)]
    pub poly_p: Vec<Exact>,
    #[serde(default)]
    pub a: Vec<u32>,
    #[serde(default)]
    pub beta: Vec<Exact>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "tag")]
pub enum FamilyConfig {
    F1(ShapeParams),
    F2(ShapeParams),
    F3 {
        a: Vec<u32>,
        beta: Vec<Exact>,
        /// Coefficients of `h`, constant term first.
        #[serde(default)]
        h: Vec<Exact>,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(default = "default_true")]
    pub enabled: bool,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Explicit values of `𝔠`; when empty, `count` generic values are drawn from `seed`.
    #[serde(default)]
    pub seed_c_values: Vec<Exact>,
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_true() -> bool {
    true
}

fn default_samples() -> usize {
    64
}

fn default_count() -> usize {
    10
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { enabled: true, samples: 64, seed_c_values: Vec::new(), count: 10, seed: 0 }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub family: FamilyConfig,
    pub one_form: Vec<FormTerm>,
    #[serde(default)]
    pub automorphism: Option<AutomorphismConfig>,
    #[serde(default)]
    pub bifurcation_set: Vec<Exact>,
    #[serde(default)]
    pub mu: Option<i64>,
    #[serde(default)]
    pub oracle: OracleConfig,
}

/// Parses a configuration, reporting the line, column and key path of the first error.
pub fn parse_config(text: &str, origin: &str) -> Result<ProblemConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: ProblemConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let at = if path.is_empty() || path == "." { String::new() } else { format!(" at key `{path}`") };
        CliError::Parse(format!("{origin}:{}:{}{at}: {inner}", inner.line(), inner.column()))
    })?;
    let s = cfg.oracle.samples;
    if !s.is_power_of_two() || s < 4 {
        return Err(CliError::Parse(format!("{origin}: oracle.samples = {s} must be a power of two >= 4")));
    }
    Ok(cfg)
}

fn nums(v: &[Exact]) -> Vec<GaussRat> {
    v.iter().map(|e| e.0.clone()).collect()
}

fn poly_from_terms(terms: &[PolyTerm]) -> BiPoly {
    let mut p = BiPoly::zero();
    for t in terms {
        p.add_term(t.i, t.j, &t.coeff.0);
    }
    p
}

impl ProblemConfig {
    pub fn normal_form(&self) -> Result<NormalForm, CliError> {
        Ok(match &self.family {
            FamilyConfig::F3 { a, beta, h } => NormalForm::F3 { a: a.clone(), beta: nums(beta), h: UniPoly::new(nums(h)) },
            FamilyConfig::F1(s) | FamilyConfig::F2(s) => {
                let is_f1 = matches!(self.family, FamilyConfig::F1(_));
                let single = !is_f1 && s.a.is_empty();
                let (q1, q) = match (s.q1, s.q) {
                    (Some(q1), Some(q)) => (q1, q),
                    // synthesized during validation
                    _ if single => (0, 0),
                    _ => return Err(CliError::InvalidFamily("family.q1 and family.q are required unless F2 has no roots".into())),
                };
                let shape = Shape { p1: s.p1, p: s.p, q1, q, k: s.k, poly_p: UniPoly::new(nums(&s.poly_p)) };
                if is_f1 {
                    NormalForm::F1 { shape, a: s.a.clone(), beta: nums(&s.beta) }
                } else {
                    NormalForm::F2 { shape, a: s.a.clone(), beta: nums(&s.beta) }
                }
            }
        })
    }

    pub fn form(&self) -> OneForm {
        let mut a = BiPoly::zero();
        let mut b = BiPoly::zero();
        for t in &self.one_form {
            let target = if t.differential == Differential::Dx { &mut a } else { &mut b };
            target.add_term(t.i, t.j, &t.coeff.0);
        }
        OneForm::new(a, b)
    }

    /// Builds the pipeline input, checking the automorphism and optional original Hamiltonian.
    pub fn problem(&self) -> Result<Problem, CliError> {
        let nf = self.normal_form()?;
        let facts = nf.validate().map_err(|e| CliError::InvalidFamily(e.to_string()))?;
        let mut p = Problem::new(nf.clone(), self.form());
        p.extra_bifurcation = nums(&self.bifurcation_set);
        p.mu = self.mu;
        if let Some(ac) = &self.automorphism {
            let sigma = nums(&ac.sigma);
            if sigma.len() != 2 {
                return Err(CliError::Parse("automorphism.sigma must be [s0, s1]".into()));
            }
            let aut = PolyAutomorphism::new(
                (poly_from_terms(&ac.forward.x), poly_from_terms(&ac.forward.y)),
                (poly_from_terms(&ac.inverse.x), poly_from_terms(&ac.inverse.y)),
                sigma[1].clone(),
                sigma[0].clone(),
            )
            .map_err(|e| CliError::Parse(format!("automorphism: {e}")))?;
            let normal = nf.expand(&facts);
            let degree = match &ac.hamiltonian {
                Some(terms) => {
                    let h = poly_from_terms(terms);
                    if aut.pushforward_polynomial(&h) != normal {
                        return Err(CliError::InvalidFamily(
                            "automorphism does not take the Hamiltonian to the normal form".into(),
                        ));
                    }
                    h.total_degree()
                }
                // H = σ⁻¹ ∘ 𝓗 ∘ ψ has the degree of 𝓗 ∘ ψ
                None => normal.compose(&aut.forward().0, &aut.forward().1).total_degree(),
            };
            p.original_hamiltonian_degree = degree;
            p.automorphism = Some(aut);
        }
        Ok(p)
    }
}

fn terms_json(p: &BiPoly) -> Value {
    Value::Array(p.terms().map(|(&(i, j), c)| json!({"i": i, "j": j, "coeff": exact_json(c)})).collect())
}

fn form_json(w: &OneForm) -> Value {
    let mut out = Vec::new();
    for (p, d) in [(&w.a, "dx"), (&w.b, "dy")] {
        out.extend(p.terms().map(|(&(i, j), c)| json!({"i": i, "j": j, "coeff": exact_json(c), "differential": d})));
    }
    Value::Array(out)
}

fn family_json(nf: &NormalForm) -> Value {
    let list = |v: &[GaussRat]| Value::Array(v.iter().map(exact_json).collect());
    match nf {
        NormalForm::F3 { a, beta, h } => json!({"tag": "F3", "a": a, "beta": list(beta), "h": list(h.coeffs())}),
        NormalForm::F1 { shape, a, beta } | NormalForm::F2 { shape, a, beta } => {
            let tag = if matches!(nf, NormalForm::F1 { .. }) { "F1" } else { "F2" };
            let mut m = json!({
                "tag": tag, "p1": shape.p1, "p": shape.p, "k": shape.k,
                "P": list(shape.poly_p.coeffs()), "a": a, "beta": list(beta),
            });
            if shape.q > 0 {
                m["q1"] = json!(shape.q1);
                m["q"] = json!(shape.q);
            }
            m
        }
    }
}

/// Configuration reproducing a bundled example.
pub fn example_config_json(ex: &Example) -> Value {
    let p = &ex.problem;
    let mut cfg = json!({
        "name": ex.name,
        "family": family_json(&p.normal_form),
        "one_form": form_json(&p.form),
        "oracle": {"enabled": true, "samples": 64, "count": 10, "seed": 0},
    });
    if let Some(aut) = &p.automorphism {
        let (f, i) = (aut.forward(), aut.inverse());
        let mut a = json!({
            "forward": {"x": terms_json(&f.0), "y": terms_json(&f.1)},
            "inverse": {"x": terms_json(&i.0), "y": terms_json(&i.1)},
            "sigma": [exact_json(&aut.sigma(&GaussRat::zero())), exact_json(aut.sigma_prime())],
        });
        let original = match ex.name {
            "oscillator" => Some(catalog::oscillator_hamiltonian()),
            "broughton" => Some(catalog::broughton_hamiltonian()),
            _ => None,
        };
        if let Some(h) = original {
            a["hamiltonian"] = terms_json(&h);
        }
        cfg["automorphism"] = a;
    }
    if !p.extra_bifurcation.is_empty() {
        cfg["bifurcation_set"] = Value::Array(p.extra_bifurcation.iter().map(exact_json).collect());
    }
    if let Some(mu) = p.mu {
        cfg["mu"] = json!(mu);
    }
    cfg
}

#[cfg(test)]
mod tests {
    use super::*;

    const F2: &str = r#"{
        "family": {"tag": "F2", "p1": 0, "p": 1, "q1": 1, "q": 2, "k": 1, "P": ["-1"], "a": [1], "beta": ["1"]},
        "one_form": [
            {"i": 0, "j": 3, "coeff": 1, "differential": "dx"},
            {"i": 1, "j": 2, "coeff": "-108", "differential": "dx"},
            {"i": 0, "j": 1, "coeff": {"re": "-66"}, "differential": "dx"}
        ]
    }"#;

    #[test]
    fn parses_second_family_example() {
        let cfg = parse_config(F2, "f2.json").unwrap();
        let p = cfg.problem().unwrap();
        assert_eq!(p.form, OneForm::dx(BiPoly::from_int_terms(&[(0, 3, 1), (1, 2, -108), (0, 1, -66)])));
        assert!(cfg.oracle.enabled);
    }

    #[test]
    fn reports_line_and_key() {
        let bad = F2.replace("\"beta\": [\"1\"]", "\"beta\": [\"1/x\"]");
        let err = parse_config(&bad, "f2.json").unwrap_err().to_string();
        assert!(err.contains("f2.json:2:"), "{err}");
        assert!(err.contains("family.beta[0]") || err.contains("family"), "{err}");
    }

    #[test]
    fn duplicate_beta_is_an_invalid_family() {
        let bad = F2.replace("\"a\": [1], \"beta\": [\"1\"]", "\"a\": [1, 1], \"beta\": [\"1\", \"1\"]");
        let err = parse_config(&bad, "f2.json").unwrap().problem().unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("beta entries distinct"));
    }

    #[test]
    fn complex_numbers_parse() {
        let v: Exact = serde_json::from_str(r#"{"re": "1/2", "im": -3}"#).unwrap();
        assert_eq!(v.0, GaussRat::from_parts((1, 2), (-3, 1)));
        let w: Exact = serde_json::from_str(r#""2-i""#).unwrap();
        assert_eq!(w.0, GaussRat::from_parts((2, 1), (-1, 1)));
        assert!(serde_json::from_str::<Exact>("0.5").is_err());
    }
}
