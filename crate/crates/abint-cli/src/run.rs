//! End-to-end runs: pipeline, oracle, golden comparison and report files.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use abint::abelian::{full_report, AbelianError, IntegralReport, Problem};
use abint::algebra::{GaussRat, UniPoly};
use abint::catalog::{self, Example, BUNDLED};
use abint::oracle::{check_report, contour_for, contour_integral_original, relative_gap};
use clap::Parser;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

use crate::config::{parse_config, OracleConfig};
use crate::report::{
    report_json, report_text, to_canonical_string, GoldenCheck, OracleCycle, OracleSample, OracleSummary,
};
use crate::CliError;

/// Relative tolerance of the oracle comparisons.
pub const ORACLE_TOLERANCE: f64 = 1e-8;

/// Result of one run, with both renderings of the report.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub name: String,
    pub report: IntegralReport,
    pub oracle: Option<OracleSummary>,
    pub golden: Option<GoldenCheck>,
    pub json: Value,
    pub text: String,
}

impl RunOutcome {
    /// `Ok` when the ledger holds, the golden matches and the oracle agrees.
    pub fn verdict(&self) -> Result<(), CliError> {
        let violations = self.report.ledger.violations();
        if !violations.is_empty() {
            let list: Vec<String> =
                violations.iter().map(|c| format!("{}: {} {} {} fails", c.name, c.observed, c.relation.symbol(), c.bound)).collect();
            return Err(CliError::BoundViolation(list.join("; ")));
        }
        if let Some(g) = self.golden.as_ref().filter(|g| !g.matched) {
            return Err(CliError::GoldenMismatch(g.diff.join("\n")));
        }
        if let Some(o) = self.oracle.as_ref().filter(|o| !o.passed()) {
            let why = o.failure.clone().unwrap_or_else(|| format!("max relative delta {:e}", o.max_delta()));
            return Err(CliError::OracleMismatch(why));
        }
        Ok(())
    }

    /// Writes `report.json` and `report.txt` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.json"), to_canonical_string(&self.json))?;
        fs::write(dir.join("report.txt"), &self.text)?;
        Ok(())
    }
}

fn pipeline_error(e: AbelianError) -> CliError {
    match e {
        AbelianError::Family(f) => CliError::InvalidFamily(f.to_string()),
        other => CliError::Computation(other.to_string()),
    }
}

/// Generic values of `c`: dyadic points of `[-3, 3]²` away from the bifurcation set
/// at which every cycle admits a contour.
pub fn generic_c_values(report: &IntegralReport, count: usize, seed: u64) -> Vec<GaussRat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bset: Vec<Complex64> = report.bifurcation_set_used.iter().map(GaussRat::to_complex).collect();
    let mut out: Vec<GaussRat> = Vec::new();
    while out.len() < count {
        let c = GaussRat::from_parts((rng.gen_range(-48..=48), 16), (rng.gen_range(-48..=48), 16));
        let z = c.to_complex();
        if out.contains(&c) || bset.iter().any(|b| (z - b).norm() < 0.25) {
            continue;
        }
        let cycles = &report.rectifier.cycles;
        if (0..cycles.len()).all(|i| contour_for(cycles, i, z, 64).is_ok()) {
            out.push(c);
        }
    }
    out
}

fn oracle_at(problem: &Problem, report: &IntegralReport, c: &GaussRat, samples: usize) -> Result<OracleSample, String> {
    let z = c.to_complex();
    let checks = check_report(report, z, samples).map_err(|e| format!("at c = {c}: {e}"))?;
    let mut cycles = Vec::with_capacity(checks.len());
    for chk in &checks {
        let original_delta = match &problem.automorphism {
            Some(aut) => {
                // the original loop at level c0 with σ(c0) = c
                let s1 = aut.sigma_prime().to_complex();
                let c0 = (z - aut.sigma(&GaussRat::zero()).to_complex()) / s1;
                let numeric = contour_integral_original(&problem.form, aut, &report.rectifier, c0, &chk.spec)
                    .map_err(|e| format!("at c = {c}: {e}"))?;
                Some(relative_gap(numeric, chk.exact / s1))
            }
            None => None,
        };
        cycles.push(OracleCycle {
            cycle: chk.cycle,
            rectified_delta: relative_gap(chk.rectified, chk.exact),
            fiber_delta: relative_gap(chk.fiber, chk.rectified),
            original_delta,
            dc_component: chk.dc_component.norm(),
        });
    }
    Ok(OracleSample { c: c.clone(), cycles })
}

/// Evaluates every integral numerically at the configured or generic values of `c`.
pub fn run_oracle(problem: &Problem, report: &IntegralReport, cfg: &OracleConfig) -> OracleSummary {
    let values = if cfg.seed_c_values.is_empty() {
        generic_c_values(report, cfg.count, cfg.seed)
    } else {
        cfg.seed_c_values.iter().map(|e| e.0.clone()).collect()
    };
    let results: Vec<Result<OracleSample, String>> =
        values.par_iter().map(|c| oracle_at(problem, report, c, cfg.samples)).collect();
    let mut summary = OracleSummary {
        samples: cfg.samples,
        tolerance: ORACLE_TOLERANCE,
        evaluations: Vec::new(),
        failure: None,
    };
    for r in results {
        match r {
            Ok(s) => summary.evaluations.push(s),
            Err(e) => {
                summary.failure.get_or_insert(e);
            }
        }
    }
    summary
}

/// Compares exact outputs with stored integrals and zero counts.
pub fn golden_check(report: &IntegralReport, integrals: Option<&[UniPoly]>, zeros: Option<&[usize]>) -> GoldenCheck {
    let mut diff = Vec::new();
    if let Some(gold) = integrals {
        if gold.len() != report.integrals.len() {
            diff.push(format!("expected {} integrals, got {}", gold.len(), report.integrals.len()));
        }
        for (ai, g) in report.integrals.iter().zip(gold) {
            if &ai.value != g {
                diff.push(format!("I{}: got - expected = {}", ai.cycle.index, &ai.value - g));
            }
        }
    }
    if let Some(gold) = zeros {
        let got: Vec<Option<usize>> = report.zeros.clone();
        let want: Vec<Option<usize>> = gold.iter().copied().map(Some).collect();
        if got != want {
            diff.push(format!("zero counts: got {got:?}, expected {want:?}"));
        }
    }
    GoldenCheck { matched: diff.is_empty(), diff }
}

/// Runs the pipeline, the oracle when `oracle` is given, and the golden comparison when given.
pub fn run_problem(
    name: &str,
    problem: &Problem,
    oracle: Option<&OracleConfig>,
    golden: Option<(Option<&[UniPoly]>, Option<&[usize]>)>,
) -> Result<RunOutcome, CliError> {
    let report = full_report(problem).map_err(pipeline_error)?;
    let oracle = oracle.filter(|o| o.enabled).map(|cfg| run_oracle(problem, &report, cfg));
    let golden = golden.map(|(i, z)| golden_check(&report, i, z));
    let json = report_json(name, &report, oracle.as_ref(), golden.as_ref());
    let text = report_text(name, &report, oracle.as_ref(), golden.as_ref());
    Ok(RunOutcome { name: name.to_string(), report, oracle, golden, json, text })
}

/// Runs a configuration file.
pub fn run_config(path: &Path, no_oracle: bool) -> Result<RunOutcome, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let cfg = parse_config(&text, &path.display().to_string())?;
    let problem = cfg.problem()?;
    let name = cfg
        .name
        .clone()
        .unwrap_or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
    let oracle = (!no_oracle).then_some(&cfg.oracle);
    run_problem(&name, &problem, oracle, None)
}

/// Looks up a bundled example, failing with a usage error for unknown names.
pub fn example(name: &str) -> Result<Example, CliError> {
    catalog::bundled(name)
        .ok_or_else(|| CliError::Usage(format!("unknown example {name:?}; available: {}", BUNDLED.join(", "))))
}

/// Runs a bundled example with its golden comparison.
pub fn run_example(name: &str, no_oracle: bool) -> Result<RunOutcome, CliError> {
    let ex = example(name)?;
    let cfg = OracleConfig::default();
    let oracle = (!no_oracle).then_some(&cfg);
    run_problem(ex.name, &ex.problem, oracle, Some((ex.golden_integrals.as_deref(), ex.golden_zeros.as_deref())))
}

#[derive(Debug, Parser)]
#[command(name = "abint", version, about = "Exact Abelian integrals along canonical cycles of normal-form Hamiltonians")]
pub struct Args {
    /// Problem configuration (JSON).
    #[arg(long, value_name = "PATH", conflicts_with_all = ["example", "list_examples"])]
    pub config: Option<PathBuf>,
    /// Bundled example to run; repeatable, or `all`.
    #[arg(long, value_name = "NAME")]
    pub example: Vec<String>,
    /// List the bundled examples and exit.
    #[arg(long)]
    pub list_examples: bool,
    /// Print the configuration of each selected example instead of running it.
    #[arg(long, requires = "example")]
    pub print_config: bool,
    /// Skip the numeric contour-integration oracle.
    #[arg(long)]
    pub no_oracle: bool,
    /// Output directory; several examples go to one subdirectory each.
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,
}

fn selected_examples(requested: &[String]) -> Result<Vec<String>, CliError> {
    let mut names: Vec<String> = Vec::new();
    for r in requested {
        let batch: Vec<String> = if r == "all" {
            BUNDLED.iter().map(|s| s.to_string()).collect()
        } else {
            example(r)?;
            vec![r.clone()]
        };
        for n in batch {
            if !names.contains(&n) {
                names.push(n);
            }
        }
    }
    Ok(names)
}

fn summary_line(o: &RunOutcome) -> String {
    let zeros: Vec<String> =
        o.report.zeros.iter().map(|z| z.map_or("-".to_string(), |v| v.to_string())).collect();
    let nbc = o.report.n_bc.map_or("undefined".to_string(), |v| v.to_string());
    format!("{}: zeros [{}], N_BC {nbc}", o.name, zeros.join(", "))
}

/// Parses arguments, runs, writes reports and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(args: &Args) -> Result<(), CliError> {
    if args.list_examples {
        for name in BUNDLED {
            println!("{name:16} {}", example(name)?.summary);
        }
        return Ok(());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("--jobs: {e}")))?;
    if let Some(path) = &args.config {
        let outcome = pool.install(|| run_config(path, args.no_oracle))?;
        outcome.write(&args.out)?;
        println!("{}", summary_line(&outcome));
        return outcome.verdict();
    }
    if args.example.is_empty() {
        return Err(CliError::Usage("one of --config, --example or --list-examples is required".into()));
    }
    let names = selected_examples(&args.example)?;
    if args.print_config {
        for name in &names {
            let ex = example(name)?;
            print!("{}", to_canonical_string(&crate::config::example_config_json(&ex)));
        }
        return Ok(());
    }
    let outcomes: Vec<Result<RunOutcome, CliError>> =
        pool.install(|| names.par_iter().map(|n| run_example(n, args.no_oracle)).collect());
    let mut first_error = None;
    for (name, outcome) in names.iter().zip(outcomes) {
        let result = outcome.and_then(|o| {
            let dir = if names.len() == 1 { args.out.clone() } else { args.out.join(name) };
            o.write(&dir)?;
            println!("{}", summary_line(&o));
            o.verdict()
        });
        if let Err(e) = result {
            eprintln!("error: {name}: {e}");
            first_error.get_or_insert(e);
        }
    }
    first_error.map_or(Ok(()), Err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_mismatch_shows_the_difference_and_exits_five() {
        let ex = example("broughton").unwrap();
        let wrong = [UniPoly::from_ints(&[-2, 0, 3])];
        let mut out = run_problem(ex.name, &ex.problem, None, Some((Some(&wrong), Some(&[2])))).unwrap();
        let g = out.golden.clone().unwrap();
        assert!(!g.matched);
        assert_eq!(g.diff, vec!["I0: got - expected = -c^2".to_string()]);
        assert_eq!(out.verdict().unwrap_err().exit_code(), 5);
        out.golden = None;
        assert!(out.verdict().is_ok());
    }

    #[test]
    fn generic_values_avoid_the_bifurcation_set() {
        let ex = example("f2_type03").unwrap();
        let rep = full_report(&ex.problem).unwrap();
        let values = generic_c_values(&rep, 25, 3);
        assert_eq!(values.len(), 25);
        for c in &values {
            for b in &rep.bifurcation_set_used {
                assert!((c.to_complex() - b.to_complex()).norm() >= 0.25);
            }
        }
    }
}
