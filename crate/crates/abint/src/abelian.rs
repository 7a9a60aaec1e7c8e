//! Abelian integrals along canonical cycles by residue calculus, zero counts
//! outside the bifurcation set, and the ledger of degree and zero bounds.

use thiserror::Error;

use crate::algebra::{AlgebraError, GaussRat, RatFunc, UniPoly};
use crate::family::{Family, FamilyError, FamilyFacts, NormalForm};
use crate::rectify::{CanonicalCycle, RectifyError, RectifyingMap};
use crate::transform::{reduce_to_nonexact_basis, NonExactReduction, OneForm, PolyAutomorphism};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianError {
    #[error("residue along cycle {cycle} is not a polynomial in c: {value}")]
    NonPolynomialResidue { cycle: usize, value: String },
    #[error("integral is identically zero")]
    IdenticallyZero,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Rectify(#[from] RectifyError),
}

/// Integral along one cycle, as the coefficient of `2π√−1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianIntegral {
    pub cycle: CanonicalCycle,
    pub value: UniPoly,
}

impl AbelianIntegral {
    pub fn identically_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn degree(&self) -> Option<usize> {
        self.value.degree()
    }
}

/// Residue of `eta_t` at the cycle's puncture, required to be a polynomial in 𝔠.
pub fn integrate_eta(eta_t: &RatFunc, cycle: &CanonicalCycle) -> Result<AbelianIntegral, AbelianError> {
    let res = eta_t.residue(&cycle.location)?;
    let value = res.to_poly().ok_or_else(|| AbelianError::NonPolynomialResidue {
        cycle: cycle.index,
        value: res.to_string(),
    })?;
    Ok(AbelianIntegral { cycle: cycle.clone(), value })
}

/// `Σ ã_ij ∮ η_ij` along one cycle.
pub fn integrate_cycle(
    rm: &RectifyingMap,
    basis: &NonExactReduction,
    cycle: &CanonicalCycle,
) -> Result<AbelianIntegral, AbelianError> {
    integrate_eta(&rm.pushforward_dx(&basis.as_polynomial()), cycle)
}

/// Integrals along every canonical cycle, sharing one push-forward.
pub fn integrate_all(rm: &RectifyingMap, basis: &NonExactReduction) -> Result<Vec<AbelianIntegral>, AbelianError> {
    let eta_t = rm.pushforward_dx(&basis.as_polynomial());
    rm.cycles.iter().map(|c| integrate_eta(&eta_t, c)).collect()
}

/// Zeros of the integral outside `bifurcation_set`, with multiplicity.
pub fn count_zeros(ai: &AbelianIntegral, bifurcation_set: &[GaussRat]) -> Result<usize, AbelianError> {
    let deg = ai.value.degree().ok_or(AbelianError::IdenticallyZero)?;
    let mut seen: Vec<&GaussRat> = Vec::new();
    let mut at_b = 0;
    for b in bifurcation_set {
        if !seen.contains(&b) {
            seen.push(b);
            at_b += ai.value.multiplicity(b);
        }
    }
    Ok(deg - at_b)
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

/// The bound `𝒵(m, n, 𝔯)` on the degree of every Abelian integral.
pub fn zeta_bound(m: i64, n: i64, rank: i64) -> i64 {
    match m {
        1 => floor_div(n + 1, 2),
        2..=8 => (n + 1) * (m - 1) - 1,
        _ => ((n + 1) * floor_div(m - rank, rank) - 1) * (m - rank - 2) - rank + 1,
    }
}

/// Per-cycle degree bound for normal forms, by family, sign and cycle index.
pub fn family_degree_bound(facts: &FamilyFacts, n: i64, cycle_index: usize) -> Option<(String, i64)> {
    let m = facts.m() as i64;
    let r = facts.r as i64;
    let plus = facts.sign_case == Some(1);
    let row = |name: &str, v: i64| Some((name.to_string(), v));
    match facts.family {
        Family::F1 => {
            let last = cycle_index as i64 == r;
            match (plus, last) {
                (true, false) => row("F1+ cycles 0..r-1", n * (floor_div(m - 1, r - 1) - 2) - 2),
                (true, true) => row("F1+ cycle r", (n - 1) * floor_div(m - r - 2, 2)),
                (false, false) => row("F1- cycles 0..r-1", (n - 1) * floor_div(m - 4, 2 * (r - 1))),
                (false, true) => row("F1- cycle r", n * (m - 1 - r) - r),
            }
        }
        Family::F2 if r == 1 => row("F2 r=1", floor_div(n + 1, m + 1)),
        Family::F2 if plus => row("F2+ r>1", n * (floor_div(m - 1, r - 1) - 2) - 2),
        Family::F2 => row("F2- r>1", (n - 1) * floor_div(m - 4, 2 * (r - 1))),
        Family::F3 => match r {
            1 => row("F3 r=1", 0),
            2 => row("F3 r=2", floor_div(n + 1, m + 1)),
            _ => row("F3 r>2", n),
        },
    }
}

/// Bound on the total number of limit cycles born from the canonical cycles.
pub fn family_count_bound(facts: &FamilyFacts, n: i64) -> (String, i64) {
    let m = facts.m() as i64;
    let r = facts.r as i64;
    let plus = facts.sign_case == Some(1);
    let (name, v) = match facts.family {
        Family::F1 if plus => (
            "F1+",
            r * (n * floor_div(m + 1 - 2 * r, r - 1) - 2) + (n - 1) * floor_div(m - r - 2, 2),
        ),
        Family::F1 => ("F1-", n * (m - r - 1) + r * ((n - 1) * floor_div(m - 4, 2 * (r - 1)) - 1)),
        Family::F2 if r == 1 => ("F2 r=1", floor_div(n + 1, m + 1)),
        Family::F2 if plus => ("F2+ r>1", r * (n * floor_div(m + 1 - 2 * r, r - 1) - 2)),
        Family::F2 => ("F2- r>1", r * (n - 1) * floor_div(m - 4, 2 * (r - 1))),
        Family::F3 => match r {
            1 => ("F3 r=1", 0),
            2 => ("F3 r=2", floor_div(n + 1, m + 1)),
            _ => ("F3 r>2", (r - 1) * n),
        },
    };
    (name.to_string(), v)
}

/// How an observation is compared with its bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    AtMost,
    AtLeast,
}

impl Relation {
    pub fn symbol(&self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        }
    }
}

/// One instantiated inequality `observed <= bound` or `observed >= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub name: String,
    pub observed: i64,
    pub bound: i64,
    pub relation: Relation,
}

impl BoundCheck {
    fn new(name: impl Into<String>, observed: i64, bound: i64) -> Self {
        BoundCheck { name: name.into(), observed, bound, relation: Relation::AtMost }
    }

    fn at_least(name: impl Into<String>, observed: i64, bound: i64) -> Self {
        BoundCheck { name: name.into(), observed, bound, relation: Relation::AtLeast }
    }

    pub fn satisfied(&self) -> bool {
        match self.relation {
            Relation::AtMost => self.observed <= self.bound,
            Relation::AtLeast => self.observed >= self.bound,
        }
    }
}

/// Degrees of the problem in original and normal-form coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Degrees {
    /// `deg H − 1` of the original Hamiltonian.
    pub m: i64,
    /// Degree of the original one-form.
    pub n: i64,
    /// `deg 𝓗 − 1`.
    pub m_nf: i64,
    /// Degree of the transformed one-form.
    pub n_nf: i64,
    /// Degree of its non-exact part.
    pub n_ne: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundLedger {
    pub zeta: i64,
    pub checks: Vec<BoundCheck>,
}

impl BoundLedger {
    pub fn satisfied(&self) -> bool {
        self.checks.iter().all(BoundCheck::satisfied)
    }

    pub fn violations(&self) -> Vec<&BoundCheck> {
        self.checks.iter().filter(|c| !c.satisfied()).collect()
    }
}

/// Instantiates every applicable bound and compares it with the observations.
pub fn bound_ledger(
    facts: &FamilyFacts,
    deg: Degrees,
    integrals: &[AbelianIntegral],
    zeros: Option<&[usize]>,
    mu: Option<i64>,
) -> BoundLedger {
    let rank = facts.homology_rank as i64;
    let zeta = zeta_bound(deg.m, deg.n, rank);
    let mut checks = Vec::new();
    for ai in integrals {
        let Some(d) = ai.degree() else { continue };
        let d = d as i64;
        let i = ai.cycle.index;
        checks.push(BoundCheck::new(format!("cycle {i}: degree <= Z(m,n,rank)"), d, zeta));
        if let Some((row, b)) = family_degree_bound(facts, deg.n_ne, i) {
            checks.push(BoundCheck::new(format!("cycle {i}: degree <= {row} bound"), d, b));
        }
    }
    // normal-form degree control
    let hdeg = facts.degree as i64;
    checks.push(BoundCheck::new("deg normal form <= m+1", hdeg, deg.m + 1));
    let (low, form_bound) = match facts.family {
        Family::F1 => (7, (deg.n + 1) * floor_div(deg.m - rank, rank) - 1),
        Family::F2 if rank == 1 => (2, (deg.n + 1) * deg.m - 1),
        Family::F2 => (7, (deg.n + 1) * floor_div(deg.m - rank - 1, rank + 1) - 1),
        Family::F3 => (rank + 1, (deg.n + 1) * (deg.m + 1 - rank) - 1),
    };
    checks.push(BoundCheck::at_least("deg normal form lower bound", hdeg, low));
    checks.push(BoundCheck::new("deg transformed form bound", deg.n_nf, form_bound));
    let nonconservative = !integrals.is_empty() && integrals.iter().all(|ai| !ai.identically_zero());
    if let (Some(z), true) = (zeros, nonconservative) {
        let total: i64 = z.iter().map(|&v| v as i64).sum();
        checks.push(BoundCheck::new("N_BC <= rank*Z(m,n,rank)", total, rank * zeta));
        let (row, b) = family_count_bound(facts, deg.n_ne);
        checks.push(BoundCheck::new(format!("N_BC <= {row} count bound"), total, b));
        if let Some(mu) = mu {
            checks.push(BoundCheck::new("N_BC <= rank*Z(m,n,rank) - mu", total, rank * zeta - mu));
        }
    }
    BoundLedger { zeta, checks }
}

/// Everything computed for one problem.
#[derive(Clone, Debug)]
pub struct IntegralReport {
    pub facts: FamilyFacts,
    pub rectifier: RectifyingMap,
    pub transformed_form: OneForm,
    pub basis: NonExactReduction,
    pub integrals: Vec<AbelianIntegral>,
    /// `None` for identically zero integrals.
    pub zeros: Vec<Option<usize>>,
    pub n_bc: Option<usize>,
    pub nonconservative: bool,
    pub bifurcation_set_used: Vec<GaussRat>,
    pub degrees: Degrees,
    pub ledger: BoundLedger,
}

/// Input of the end-to-end pipeline.
#[derive(Clone, Debug)]
pub struct Problem {
    pub normal_form: NormalForm,
    /// One-form in the original coordinates (or the normal-form ones without an automorphism).
    pub form: OneForm,
    pub automorphism: Option<PolyAutomorphism>,
    /// Hamiltonian in original coordinates, used only for degree bookkeeping.
    pub original_hamiltonian_degree: Option<u32>,
    pub extra_bifurcation: Vec<GaussRat>,
    pub mu: Option<i64>,
}

impl Problem {
    pub fn new(normal_form: NormalForm, form: OneForm) -> Self {
        Problem {
            normal_form,
            form,
            automorphism: None,
            original_hamiltonian_degree: None,
            extra_bifurcation: Vec::new(),
            mu: None,
        }
    }
}

/// Reduce, rectify, integrate, count, and check bounds.
pub fn full_report(problem: &Problem) -> Result<IntegralReport, AbelianError> {
    let facts = problem.normal_form.validate()?;
    let rectifier = RectifyingMap::build(&problem.normal_form, &facts)?;
    let transformed_form = match &problem.automorphism {
        Some(aut) => aut.pushforward_oneform(&problem.form),
        None => problem.form.clone(),
    };
    let basis = reduce_to_nonexact_basis(&transformed_form);
    let integrals = integrate_all(&rectifier, &basis)?;
    let mut bset = facts.bifurcation_candidates.clone();
    for b in &problem.extra_bifurcation {
        if !bset.contains(b) {
            bset.push(b.clone());
        }
    }
    let zeros: Vec<Option<usize>> = integrals.iter().map(|ai| count_zeros(ai, &bset).ok()).collect();
    let nonconservative = zeros.iter().all(Option::is_some);
    let n_bc = nonconservative.then(|| zeros.iter().flatten().sum());
    let m_nf = facts.m() as i64;
    let n_nf = transformed_form.degree().unwrap_or(0) as i64;
    let n_ne = basis.degree().unwrap_or(0) as i64;
    let degrees = Degrees {
        m: problem.original_hamiltonian_degree.map(|d| d as i64 - 1).unwrap_or(m_nf),
        n: problem.form.degree().unwrap_or(0) as i64,
        m_nf,
        n_nf,
        n_ne,
    };
    let flat: Vec<usize> = zeros.iter().flatten().copied().collect();
    let ledger = bound_ledger(&facts, degrees, &integrals, Some(&flat), problem.mu);
    Ok(IntegralReport {
        facts,
        rectifier,
        transformed_form,
        basis,
        integrals,
        zeros,
        n_bc,
        nonconservative,
        bifurcation_set_used: bset,
        degrees,
        ledger,
    })
}
