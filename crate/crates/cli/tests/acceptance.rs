//! Acceptance run: one pass/fail line per criterion.
//!
//! The binary exits nonzero when a criterion fails for any reason other than
//! the known inadmissible parameter pair `(1.5, 0.2)` in criteria 3 and 4.

use std::f64::consts::{FRAC_PI_4, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use extremals_cli::suites::{calabi, families, harmonic, maps};
use extremals_cli::{run, Check, Scenario, SuiteKind, Verb};
use extremals_core::exact::int;
use extremals_core::minimal_graphs::{DensityFamily, Sign};

const PAIRS: [(f64, f64); 3] = [(1.0, 1.0), (0.8, 0.5), (1.5, 0.2)];
const INADMISSIBLE: (f64, f64) = (1.5, 0.2);

struct Outcome {
    id: u32,
    title: &'static str,
    checks: Vec<Check>,
    elapsed: Duration,
    budget: Option<Duration>,
}

impl Outcome {
    fn within_budget(&self) -> bool {
        self.budget.is_none_or(|b| self.elapsed < b)
    }

    fn passed(&self) -> bool {
        self.within_budget() && !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    /// Failures are exactly the parameter violations of the inadmissible pair.
    fn only_inadmissible_failures(&self) -> bool {
        let label = format!("a={} c={}", INADMISSIBLE.0, INADMISSIBLE.1);
        let f = self.failures();
        self.within_budget()
            && !f.is_empty()
            && f.iter().all(|c| {
                c.name.starts_with(&label) && c.witness.as_deref().is_some_and(|w| w.starts_with("parameter violation"))
            })
    }

    fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut notes = vec![format!("{} check{}, {:.2} s", self.checks.len(), if self.checks.len() == 1 { "" } else { "s" }, self.elapsed.as_secs_f64())];
        if let Some(b) = self.budget {
            if !self.within_budget() {
                notes.push(format!("over budget {} s", b.as_secs()));
            }
        }
        for c in self.failures() {
            let why = c
                .witness
                .clone()
                .or_else(|| c.max_residual.map(|r| format!("residual {r:e} against {:e}", c.tolerance.unwrap_or(0.0))))
                .unwrap_or_default();
            notes.push(format!("{}: {why}", c.name));
        }
        format!("criterion {} [{}]: {status} ({})", self.id, self.title, notes.join("; "))
    }
}

fn timed(id: u32, title: &'static str, budget: Option<u64>, f: impl FnOnce() -> Vec<Check>) -> Outcome {
    let start = Instant::now();
    let checks = f();
    Outcome { id, title, checks, elapsed: start.elapsed(), budget: budget.map(Duration::from_secs) }
}

fn probe_grid() -> extremals_cli::scenario::Grid {
    extremals_cli::scenario::Grid { x_min: 1.1, x_max: 1.9, y_min: -0.3, y_max: 0.9, nx: 20, ny: 20 }
}

fn scherk() -> Vec<Check> {
    let grid = extremals_cli::scenario::Grid { x_min: 0.5, x_max: 3.0, y_min: 0.0, y_max: TAU, nx: 50, ny: 50 };
    families::scherk_checks(&grid, &[0.0, 0.4, 1.1, 2.3, 4.0], 1e-9, 1e-10)
}

fn first_integrals() -> Vec<Check> {
    let grid = probe_grid();
    let mut out = Vec::new();
    for fam in [DensityFamily::HeliCatenoid { phi: 0.3 }, DensityFamily::DoublyPeriodic { a: 1.0, c: 1.0 }] {
        out.extend(families::first_integral_checks(&fam, &grid, 1e-9, 1e-9, 1e-10));
    }
    out
}

fn winding() -> Vec<Check> {
    PAIRS.iter().flat_map(|&(a, c)| families::winding_checks(a, c, 8.0, 2000, 2000, 1e-3, 1e-6)).collect()
}

fn period() -> Vec<Check> {
    let tol = families::PeriodTolerances { min_abs: 1e-3, refinement: 1e-7, negation: 1e-7 };
    PAIRS.iter().flat_map(|&(a, c)| families::period_checks(a, c, Sign::Plus, 512, tol).0).collect()
}

fn two_graphs() -> Vec<Check> {
    let grid = probe_grid();
    let mut out = Vec::new();
    for fam in [DensityFamily::HeliCatenoid { phi: FRAC_PI_4 }, DensityFamily::DoublyPeriodic { a: 1.0, c: 1.0 }] {
        out.extend(families::two_graph_checks(&fam, &grid, 1e-8, 1e-3));
    }
    out
}

fn calabi_density() -> Vec<Check> {
    calabi::density_checks(1000, 6, 1e-10, 1e-12)
}

fn calabi_branches() -> Vec<Check> {
    let mut out = calabi::branch_count_checks(10_000, 7);
    out.extend(calabi::extraction_checks(&calabi::random_jets(10_000, 7), &[0.37, -0.61, 0.83], 1e-9));
    out
}

fn identities() -> Vec<Check> {
    harmonic::identity_checks(&[3, 4, 5], 4, 50, 8, 1)
}

fn spectrum() -> Vec<Check> {
    harmonic::spectrum_checks(&[3, 4, 5], &int(1), 40)
}

fn constant_energy_maps() -> Vec<Check> {
    let mut out = Vec::new();
    for (m, kernel_min, margin_min) in [(1u32, 0usize, i64::MIN), (2, 10, 4)] {
        let sol = match maps::solve(4, m) {
            Ok(s) => s,
            Err(e) => {
                out.push(Check::error(format!("(4,{m}) solution space"), e));
                continue;
            }
        };
        let tag = |c: Check| Check { name: format!("(4,{m}) {}", c.name), ..c };
        let (kc, summary) = maps::kernel_checks(&sol);
        out.extend(kc.into_iter().map(tag));
        if m == 2 {
            out.push(Check::exact(
                format!("(4,{m}) kernel dimension at least {kernel_min}"),
                summary.kernel_dimension >= kernel_min,
                Some(format!("kernel {}", summary.kernel_dimension)),
            ));
            out.push(Check::exact(
                format!("(4,{m}) nonuniqueness margin at least {margin_min}"),
                summary.margin >= margin_min,
                Some(format!("margin {} over rotations {}", summary.margin, summary.rotation_dimension)),
            ));
        }
        let (built, found) = maps::construct_maps(&sol, None, false);
        out.extend(built.into_iter().map(tag));
        let exact = found.iter().all(|f| f.is_exact());
        out.push(Check::exact(format!("(4,{m}) maps use exact arithmetic"), exact && !found.is_empty(), None));
        out.extend(maps::energy_checks(&found, 100, 10, 1e-9).into_iter().map(tag));
        if m == 1 {
            let identity = found.first().is_some_and(|f| f.lambda() == 3 && f.len() == 4);
            out.push(Check::exact("(4,1) identity map with density 3", identity, None));
        }
    }
    out
}

fn dims() -> Vec<Check> {
    harmonic::dims_checks(5, 6)
}

fn scenario(suite: SuiteKind, params: serde_json::Value, seed: u64) -> Scenario {
    let mut s = Scenario::new(suite);
    s.params = params.as_object().cloned().unwrap_or_default();
    s.seed = seed;
    s
}

fn determinism() -> Vec<Check> {
    let runs = [
        (scenario(SuiteKind::Calabi, serde_json::json!({ "samples": 200, "jets": 300 }), 42), Verb::CalabiExtract),
        (scenario(SuiteKind::Calabi, serde_json::json!({ "samples": 200 }), 42), Verb::CalabiResidual),
        (scenario(SuiteKind::Harmonic, serde_json::json!({ "n": [3, 4], "d_max": 2, "trials": 5 }), 42), Verb::HarmonicIdentities),
        (scenario(SuiteKind::Maps, serde_json::json!({ "points": 20 }), 42), Verb::MapsVerify),
        (
            scenario(SuiteKind::Families, serde_json::json!({ "family": { "kind": "doubly_periodic", "a": 1.0, "c": 1.0 } }), 42),
            Verb::FamiliesVerify,
        ),
    ];
    runs.iter()
        .map(|(s, verb)| {
            let name = format!("{} {} bodies are identical", s.suite.name(), verb.name());
            match (run(s, *verb), run(s, *verb)) {
                (Ok(a), Ok(b)) => {
                    let (x, y) = (a.report.body_json(), b.report.body_json());
                    Check::exact(name, x == y, (x != y).then(|| "bodies differ".to_string()))
                }
                (Err(e), _) | (_, Err(e)) => Check::error(name, e),
            }
        })
        .collect()
}

fn main() -> ExitCode {
    let outcomes = vec![
        timed(1, "closed-form Scherk graphs", Some(5), scherk),
        timed(2, "first integrals", Some(2), first_integrals),
        timed(3, "winding", None, winding),
        timed(4, "period", None, period),
        timed(5, "two-graph certificate", None, two_graphs),
        timed(6, "Calabi prescribed density", None, calabi_density),
        timed(7, "Calabi branch bound", None, calabi_branches),
        timed(8, "harmonic identities", Some(60), identities),
        timed(9, "spectral dichotomy", None, spectrum),
        timed(10, "constant-energy maps", Some(120), constant_energy_maps),
        timed(11, "dimension formula", None, dims),
        timed(12, "determinism", None, determinism),
    ];
    let mut unexpected = Vec::new();
    for o in &outcomes {
        println!("{}", o.line());
        let known = matches!(o.id, 3 | 4) && o.only_inadmissible_failures();
        if !o.passed() && !known {
            unexpected.push(o.id);
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    println!("{passed}/{} criteria pass", outcomes.len());
    if unexpected.is_empty() {
        println!("remaining failures come only from the inadmissible pair (1.5, 0.2), which violates |a − c| < 1 < a + c");
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
