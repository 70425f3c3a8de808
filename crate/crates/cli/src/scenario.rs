//! Scenario documents: one JSON object per run.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use extremals_core::minimal_graphs::DensityFamily;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteKind {
    Families,
    Calabi,
    Harmonic,
    Maps,
}

impl SuiteKind {
    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::Families => "families",
            SuiteKind::Calabi => "calabi",
            SuiteKind::Harmonic => "harmonic",
            SuiteKind::Maps => "maps",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.nx < 2 || self.ny < 2 {
            return Err(CliError::usage(format!("grid counts must be at least 2, got {}×{}", self.nx, self.ny)));
        }
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max].iter().all(|v| v.is_finite());
        if !finite || self.x_min >= self.x_max || self.y_min >= self.y_max {
            return Err(CliError::usage("grid bounds must be finite with min < max"));
        }
        Ok(())
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + (self.x_max - self.x_min) * i as f64 / (self.nx - 1) as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_min + (self.y_max - self.y_min) * j as f64 / (self.ny - 1) as f64
    }

    /// Nodes row by row, `y` in the outer loop.
    pub fn points(&self) -> Vec<(f64, f64)> {
        (0..self.ny).flat_map(|j| (0..self.nx).map(move |i| (self.x(i), self.y(j)))).collect()
    }

    /// Nodes in boustrophedon order, so consecutive nodes are neighbours.
    pub fn serpentine(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.nx * self.ny);
        for j in 0..self.ny {
            let row: Vec<usize> = if j % 2 == 0 { (0..self.nx).collect() } else { (0..self.nx).rev().collect() };
            out.extend(row.into_iter().map(|i| (self.x(i), self.y(j))));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub suite: SuiteKind,
    #[serde(default)]
    pub params: serde_json::Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
}

/// Tolerance names a scenario may override.
pub const TOLERANCE_NAMES: [&str; 16] = [
    "minimal_residual",
    "density",
    "spread",
    "integral_value",
    "c_system",
    "winding",
    "section_winding",
    "period_min",
    "refinement",
    "negation",
    "variation",
    "calabi_density",
    "compatibility",
    "held_out",
    "energy",
    "float_identity",
];

impl Scenario {
    pub fn new(suite: SuiteKind) -> Self {
        Scenario { suite, params: Default::default(), grid: None, tolerances: BTreeMap::new(), seed: 0 }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| CliError::usage(format!("scenario: {e}")))?;
        s.validate_common()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })?;
        Scenario::from_json(&text)
    }

    fn validate_common(&self) -> Result<(), CliError> {
        if let Some(g) = &self.grid {
            g.validate()?;
        }
        for (k, v) in &self.tolerances {
            if !TOLERANCE_NAMES.contains(&k.as_str()) {
                return Err(CliError::usage(format!("unknown tolerance `{k}`")));
            }
            if !(*v > 0.0 && v.is_finite()) {
                return Err(CliError::usage(format!("tolerance `{k}` must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn tol(&self, name: &str, default: f64) -> f64 {
        debug_assert!(TOLERANCE_NAMES.contains(&name));
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    /// Suite parameters with defaults filled in.
    pub fn params<T: for<'de> Deserialize<'de>>(&self) -> Result<T, CliError> {
        serde_json::from_value(Value::Object(self.params.clone()))
            .map_err(|e| CliError::usage(format!("{} parameters: {e}", self.suite.name())))
    }

    pub fn grid_or(&self, default: Grid) -> Grid {
        self.grid.unwrap_or(default)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    Constant { c: f64 },
    Scherk,
    HeliCatenoid { phi: f64 },
    DoublyPeriodic { a: f64, c: f64 },
}

impl FamilySpec {
    pub fn family(self) -> DensityFamily {
        match self {
            FamilySpec::Constant { c } => DensityFamily::ConstantPlane { c },
            FamilySpec::Scherk => DensityFamily::ScherkFifth,
            FamilySpec::HeliCatenoid { phi } => DensityFamily::HeliCatenoid { phi },
            FamilySpec::DoublyPeriodic { a, c } => DensityFamily::DoublyPeriodic { a, c },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SheetSign {
    Plus,
    Minus,
}

impl From<SheetSign> for extremals_core::minimal_graphs::Sign {
    fn from(s: SheetSign) -> Self {
        match s {
            SheetSign::Plus => extremals_core::minimal_graphs::Sign::Plus,
            SheetSign::Minus => extremals_core::minimal_graphs::Sign::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Density,
    PField,
    Cos2Plus,
    Cos2Minus,
    MinimalResidual,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Density => "density",
            Field::PField => "p_field",
            Field::Cos2Plus => "cos2_plus",
            Field::Cos2Minus => "cos2_minus",
            Field::MinimalResidual => "minimal_residual",
        }
    }
}

fn default_psi() -> Vec<f64> {
    vec![0.0, 0.4, 1.1, 2.3, 4.0]
}
fn default_radius() -> f64 {
    8.0
}
fn default_per_side() -> usize {
    2000
}
fn default_section_samples() -> usize {
    2000
}
fn default_period_samples() -> usize {
    512
}
fn default_seed_sign() -> SheetSign {
    SheetSign::Plus
}
fn default_field() -> Field {
    Field::Density
}
fn default_phase() -> f64 {
    0.3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamiliesParams {
    pub family: FamilySpec,
    /// Phases of the closed-form Scherk graphs.
    #[serde(default = "default_psi")]
    pub psi: Vec<f64>,
    /// Half-width of the rectangle loop.
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_per_side")]
    pub per_side: usize,
    #[serde(default = "default_section_samples")]
    pub section_samples: usize,
    #[serde(default = "default_period_samples")]
    pub period_samples: usize,
    #[serde(default = "default_seed_sign")]
    pub seed_sign: SheetSign,
    #[serde(default = "default_field")]
    pub field: Field,
    /// Starting angle for families whose angle is not fixed by a branch.
    #[serde(default = "default_phase")]
    pub phase: f64,
}

impl FamiliesParams {
    pub fn validate(&self) -> Result<(), CliError> {
        self.family.family().validate().map_err(|e| CliError::usage(e.to_string()))?;
        if !(self.radius > 0.0) || self.per_side < 4 || self.section_samples < 8 || self.period_samples < 8 {
            return Err(CliError::usage("loop sizes must be positive"));
        }
        Ok(())
    }

    pub fn doubly_periodic(&self) -> Result<(f64, f64), CliError> {
        match self.family {
            FamilySpec::DoublyPeriodic { a, c } => Ok((a, c)),
            other => Err(CliError::usage(format!("this verb needs the doubly periodic family, got {other:?}"))),
        }
    }
}

fn default_samples() -> usize {
    1000
}
fn default_jets() -> usize {
    10_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalabiParams {
    /// Random `(φ, θ)` samples on the ellipse.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Random third-order jets of `φ`.
    #[serde(default = "default_jets")]
    pub jets: usize,
    /// An explicit jet `[φ, φx, φy, φxx, φxy, φyy, φxxx, φxxy, φxyy, φyyy]`.
    #[serde(default)]
    pub jet: Option<[f64; 10]>,
    /// Held-out angles for the extraction check, as fractions of `π/2 − φ`.
    #[serde(default = "default_held_out")]
    pub held_out: Vec<f64>,
}

fn default_held_out() -> Vec<f64> {
    vec![0.37, -0.61, 0.83]
}

impl CalabiParams {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.held_out.iter().any(|f| !(f.abs() < 1.0)) {
            return Err(CliError::usage("held-out fractions must lie in (−1, 1)"));
        }
        if let Some(j) = &self.jet {
            if !(j[0] > 0.0 && j[0] < std::f64::consts::FRAC_PI_4) || j.iter().any(|v| !v.is_finite()) {
                return Err(CliError::usage("jet value φ must lie in (0, π/4) with finite derivatives"));
            }
        }
        Ok(())
    }
}

fn default_n() -> Vec<usize> {
    vec![3]
}
fn default_d_max() -> u32 {
    3
}
fn default_trials() -> usize {
    50
}
fn default_k() -> String {
    "1".into()
}
fn default_lambda_max() -> i64 {
    40
}
fn default_dims_n_max() -> usize {
    5
}
fn default_dims_m_max() -> u32 {
    6
}
fn default_offset() -> i64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicParams {
    #[serde(default = "default_n")]
    pub n: Vec<usize>,
    #[serde(default = "default_d_max")]
    pub d_max: u32,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Shift of the `∨` normalization in the mutation run.
    #[serde(default = "default_offset")]
    pub mutation_offset: i64,
    /// Curvature as a `"num/den"` string.
    #[serde(default = "default_k")]
    pub k: String,
    #[serde(default = "default_lambda_max")]
    pub lambda_max: i64,
    #[serde(default = "default_dims_n_max")]
    pub dims_n_max: usize,
    #[serde(default = "default_dims_m_max")]
    pub dims_m_max: u32,
}

impl HarmonicParams {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.n.is_empty() || self.n.iter().any(|&n| n < 3) {
            return Err(CliError::usage("dimensions n must be at least 3"));
        }
        if self.mutation_offset == 0 {
            return Err(CliError::usage("mutation offset must be nonzero"));
        }
        if self.lambda_max < 0 {
            return Err(CliError::usage("lambda_max must be non-negative"));
        }
        match extremals_core::exact::parse_rational(&self.k) {
            Some(k) if k > extremals_core::exact::int(0) => Ok(()),
            _ => Err(CliError::usage(format!("curvature must be a positive rational, got {}", self.k))),
        }
    }
}

fn default_n_ambient() -> usize {
    4
}
fn default_m() -> u32 {
    2
}
fn default_points() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapsParams {
    #[serde(default = "default_n_ambient")]
    pub n_ambient: usize,
    #[serde(default = "default_m")]
    pub m: u32,
    /// Random sphere points for the energy check.
    #[serde(default = "default_points")]
    pub points: usize,
    /// Kernel direction for the line search, if any.
    #[serde(default)]
    pub direction: Option<usize>,
    /// Export the floating factorization instead of the exact one.
    #[serde(default)]
    pub float: bool,
}

impl MapsParams {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.n_ambient < 4 {
            return Err(CliError::usage(format!("ambient dimension must be at least 4, got {}", self.n_ambient)));
        }
        if self.m == 0 {
            return Err(CliError::usage("degree m must be positive"));
        }
        if self.points == 0 {
            return Err(CliError::usage("points must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_validates() {
        let s = Scenario::from_json(
            r#"{"suite":"families","params":{"family":{"kind":"scherk"}},
                "grid":{"x_min":0.5,"x_max":3,"y_min":0,"y_max":6.28,"nx":3,"ny":2},"seed":7}"#,
        )
        .unwrap();
        assert_eq!(s.suite, SuiteKind::Families);
        let p: FamiliesParams = s.params().unwrap();
        assert_eq!(p.family, FamilySpec::Scherk);
        assert_eq!(p.psi.len(), 5);
        let g = s.grid.unwrap();
        assert_eq!(g.points()[..3], [(0.5, 0.0), (1.75, 0.0), (3.0, 0.0)]);
        assert_eq!(g.serpentine()[3], (3.0, 6.28));
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(Scenario::from_json(r#"{"suite":"nope"}"#).is_err());
        assert!(Scenario::from_json(r#"{"suite":"maps","extra":1}"#).is_err());
        let g = r#"{"suite":"maps","grid":{"x_min":0,"x_max":1,"y_min":0,"y_max":1,"nx":1,"ny":5}}"#;
        assert!(Scenario::from_json(g).is_err());
        assert!(Scenario::from_json(r#"{"suite":"maps","tolerances":{"energy":-1}}"#).is_err());
        assert!(Scenario::from_json(r#"{"suite":"maps","tolerances":{"bogus":1}}"#).is_err());
        let s = Scenario::from_json(r#"{"suite":"harmonic","params":{"n":[2]}}"#).unwrap();
        assert!(s.params::<HarmonicParams>().unwrap().validate().is_err());
        let s = Scenario::from_json(r#"{"suite":"harmonic","params":{"k":"-1/2"}}"#).unwrap();
        assert!(s.params::<HarmonicParams>().unwrap().validate().is_err());
    }

    #[test]
    fn inadmissible_family_is_a_usage_error() {
        let s = Scenario::from_json(r#"{"suite":"families","params":{"family":{"kind":"doubly_periodic","a":1.5,"c":0.2}}}"#)
            .unwrap();
        let p: FamiliesParams = s.params().unwrap();
        assert!(matches!(p.validate(), Err(CliError::Usage(_))));
    }
}
