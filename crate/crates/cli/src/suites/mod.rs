//! Suite dispatch: scenario and verb to checks.

pub mod calabi;
pub mod families;
pub mod harmonic;
pub mod maps;

use std::f64::consts::TAU;
use std::time::Instant;

use extremals_core::exact::parse_rational;
use extremals_core::Jet;

use crate::export::map_json;
use crate::report::{Check, Report, Table};
use crate::scenario::{CalabiParams, FamiliesParams, FamilySpec, Grid, HarmonicParams, MapsParams, Scenario, SuiteKind};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verb {
    FamiliesVerify,
    FamiliesSample,
    FamiliesPeriod,
    FamiliesWinding,
    CalabiResidual,
    CalabiBranches,
    CalabiExtract,
    HarmonicIdentities,
    HarmonicSpectrum,
    HarmonicDims,
    MapsKernel,
    MapsConstruct,
    MapsVerify,
    MapsExport,
}

impl Verb {
    pub fn parse(suite: SuiteKind, verb: &str) -> Result<Verb, CliError> {
        use SuiteKind::*;
        use Verb::*;
        Ok(match (suite, verb) {
            (Families, "verify") => FamiliesVerify,
            (Families, "sample") => FamiliesSample,
            (Families, "period") => FamiliesPeriod,
            (Families, "winding") => FamiliesWinding,
            (Calabi, "residual") => CalabiResidual,
            (Calabi, "branches") => CalabiBranches,
            (Calabi, "extract") => CalabiExtract,
            (Harmonic, "identities") => HarmonicIdentities,
            (Harmonic, "spectrum") => HarmonicSpectrum,
            (Harmonic, "dims") => HarmonicDims,
            (Maps, "kernel") => MapsKernel,
            (Maps, "construct") => MapsConstruct,
            (Maps, "verify") => MapsVerify,
            (Maps, "export") => MapsExport,
            _ => return Err(CliError::usage(format!("unknown verb `{verb}` for suite {}", suite.name()))),
        })
    }

    pub fn suite(self) -> SuiteKind {
        use Verb::*;
        match self {
            FamiliesVerify | FamiliesSample | FamiliesPeriod | FamiliesWinding => SuiteKind::Families,
            CalabiResidual | CalabiBranches | CalabiExtract => SuiteKind::Calabi,
            HarmonicIdentities | HarmonicSpectrum | HarmonicDims => SuiteKind::Harmonic,
            MapsKernel | MapsConstruct | MapsVerify | MapsExport => SuiteKind::Maps,
        }
    }

    pub fn name(self) -> &'static str {
        use Verb::*;
        match self {
            FamiliesVerify => "verify",
            FamiliesSample => "sample",
            FamiliesPeriod => "period",
            FamiliesWinding => "winding",
            CalabiResidual => "residual",
            CalabiBranches => "branches",
            CalabiExtract => "extract",
            HarmonicIdentities => "identities",
            HarmonicSpectrum => "spectrum",
            HarmonicDims => "dims",
            MapsKernel => "kernel",
            MapsConstruct => "construct",
            MapsVerify => "verify",
            MapsExport => "export",
        }
    }
}

/// A finished run: the report, and any table or exported map it produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub table: Option<Table>,
    pub map: Option<serde_json::Value>,
}

/// Default grid for a family.
pub fn default_grid(family: &FamilySpec) -> Grid {
    match family {
        FamilySpec::Scherk => Grid { x_min: 0.5, x_max: 3.0, y_min: 0.0, y_max: TAU, nx: 50, ny: 50 },
        FamilySpec::Constant { .. } => Grid { x_min: 0.0, x_max: 1.0, y_min: 0.0, y_max: 1.0, nx: 20, ny: 20 },
        _ => Grid { x_min: 1.1, x_max: 1.9, y_min: -0.3, y_max: 0.9, nx: 20, ny: 20 },
    }
}

pub fn run(scenario: &Scenario, verb: Verb) -> Result<Outcome, CliError> {
    if scenario.suite != verb.suite() {
        return Err(CliError::usage(format!(
            "scenario is for suite {}, not {}",
            scenario.suite.name(),
            verb.suite().name()
        )));
    }
    let start = Instant::now();
    let (checks, table, map) = match verb.suite() {
        SuiteKind::Families => run_families(scenario, verb)?,
        SuiteKind::Calabi => (run_calabi(scenario, verb)?, None, None),
        SuiteKind::Harmonic => (run_harmonic(scenario, verb)?, None, None),
        SuiteKind::Maps => {
            let (c, m) = run_maps(scenario, verb)?;
            (c, None, m)
        }
    };
    let report = Report::new(scenario, verb.name(), checks, start.elapsed());
    Ok(Outcome { report, table, map })
}

type FamiliesOut = (Vec<Check>, Option<Table>, Option<serde_json::Value>);

fn run_families(s: &Scenario, verb: Verb) -> Result<FamiliesOut, CliError> {
    let p: FamiliesParams = s.params()?;
    p.validate()?;
    let family = p.family.family();
    let grid = s.grid_or(default_grid(&p.family));
    Ok(match verb {
        Verb::FamiliesVerify => {
            let checks = match p.family {
                FamilySpec::Scherk => {
                    families::scherk_checks(&grid, &p.psi, s.tol("minimal_residual", 1e-9), s.tol("density", 1e-10))
                }
                FamilySpec::Constant { .. } => families::phase_graph_checks(&family, &grid, p.phase, s.tol("density", 1e-8)),
                _ => {
                    let mut c = families::first_integral_checks(
                        &family,
                        &grid,
                        s.tol("spread", 1e-9),
                        s.tol("integral_value", 1e-9),
                        s.tol("c_system", 1e-10),
                    );
                    c.extend(families::two_graph_checks(&family, &grid, s.tol("density", 1e-8), s.tol("variation", 1e-3)));
                    c
                }
            };
            (checks, None, None)
        }
        Verb::FamiliesSample => {
            let (table, checks) = families::sample_field(&family, &grid, p.field);
            (checks, Some(table), None)
        }
        Verb::FamiliesPeriod => {
            let (a, c) = p.doubly_periodic()?;
            let tol = families::PeriodTolerances {
                min_abs: s.tol("period_min", 1e-3),
                refinement: s.tol("refinement", 1e-7),
                negation: s.tol("negation", 1e-7),
            };
            (families::period_checks(a, c, p.seed_sign.into(), p.period_samples, tol).0, None, None)
        }
        Verb::FamiliesWinding => {
            let (a, c) = p.doubly_periodic()?;
            let checks = families::winding_checks(
                a,
                c,
                p.radius,
                p.per_side,
                p.section_samples,
                s.tol("winding", 1e-3),
                s.tol("section_winding", 1e-6),
            );
            (checks, None, None)
        }
        _ => unreachable!("verb belongs to another suite"),
    })
}

fn run_calabi(s: &Scenario, verb: Verb) -> Result<Vec<Check>, CliError> {
    let p: CalabiParams = s.params()?;
    p.validate()?;
    Ok(match verb {
        Verb::CalabiResidual => {
            calabi::density_checks(p.samples, s.seed, s.tol("calabi_density", 1e-10), s.tol("compatibility", 1e-12))
        }
        Verb::CalabiBranches => calabi::branch_count_checks(p.jets, s.seed),
        Verb::CalabiExtract => {
            let mut jets = calabi::random_jets(p.jets, s.seed);
            let mut checks = Vec::new();
            if let Some(a) = p.jet {
                let j = Jet::from_array(a, 3);
                checks.push(calabi::describe_jet(&j));
                jets.push(j);
            }
            checks.extend(calabi::extraction_checks(&jets, &p.held_out, s.tol("held_out", 1e-9)));
            checks
        }
        _ => unreachable!("verb belongs to another suite"),
    })
}

fn run_harmonic(s: &Scenario, verb: Verb) -> Result<Vec<Check>, CliError> {
    let p: HarmonicParams = s.params()?;
    p.validate()?;
    Ok(match verb {
        Verb::HarmonicIdentities => harmonic::identity_checks(&p.n, p.d_max, p.trials, s.seed, p.mutation_offset),
        Verb::HarmonicSpectrum => {
            let k = parse_rational(&p.k).expect("validated");
            harmonic::spectrum_checks(&p.n, &k, p.lambda_max)
        }
        Verb::HarmonicDims => harmonic::dims_checks(p.dims_n_max, p.dims_m_max),
        _ => unreachable!("verb belongs to another suite"),
    })
}

fn run_maps(s: &Scenario, verb: Verb) -> Result<(Vec<Check>, Option<serde_json::Value>), CliError> {
    let p: MapsParams = s.params()?;
    p.validate()?;
    let sol = match maps::solve(p.n_ambient, p.m) {
        Ok(sol) => sol,
        Err(e) => return Ok((vec![Check::error("solution space", e)], None)),
    };
    let (mut checks, _) = maps::kernel_checks(&sol);
    if verb == Verb::MapsKernel {
        return Ok((checks, None));
    }
    let (built, maps) = maps::construct_maps(&sol, p.direction, p.float);
    checks.extend(built);
    match verb {
        Verb::MapsConstruct => Ok((checks, None)),
        Verb::MapsVerify => {
            checks.extend(maps::energy_checks(&maps, p.points, s.seed, s.tol("energy", 1e-9)));
            Ok((checks, None))
        }
        Verb::MapsExport => {
            let chosen = if p.direction.is_some() { maps.last() } else { maps.first() };
            Ok((checks, chosen.map(map_json)))
        }
        _ => unreachable!("verb belongs to another suite"),
    }
}
