//! CSV tables and map documents.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Value};

use extremals_core::constant_energy_maps::{MapComponents, SphericalHarmonicMap};
use extremals_core::exact::fmt_rational;

use crate::report::{Report, Table};
use crate::CliError;

fn exponent_key(e: &[u32]) -> String {
    e.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// `{n, m, lambda, exact, components}`. Each component maps exponent lists
/// such as `"2,0,1,0"` to coefficients: `"num/den"` strings with a rational
/// `scale_squared` on the exact path, decimal strings otherwise.
pub fn map_json(map: &SphericalHarmonicMap) -> Value {
    let components: Vec<Value> = match &map.components {
        MapComponents::Exact(c) => c
            .iter()
            .map(|f| {
                let coeffs: BTreeMap<String, String> =
                    f.poly.terms().map(|(m, c)| (exponent_key(&m.0), fmt_rational(c))).collect();
                json!({ "scale_squared": fmt_rational(&f.scale_squared), "coefficients": coeffs })
            })
            .collect(),
        MapComponents::Float(_) => map
            .float_components()
            .iter()
            .map(|f| {
                let coeffs: BTreeMap<String, String> = f
                    .iter()
                    .filter(|(_, c)| *c != 0.0)
                    .map(|(m, c)| (exponent_key(&m.0), c.to_string()))
                    .collect();
                json!({ "coefficients": coeffs })
            })
            .collect(),
    };
    json!({
        "n": map.n(),
        "m": map.m,
        "lambda": map.lambda(),
        "exact": map.is_exact(),
        "components": components,
    })
}

pub fn checks_table(report: &Report) -> Table {
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    Table {
        name: "checks".into(),
        header: ["name", "status", "max_residual", "tolerance", "exact", "witness", "detail"].map(String::from).to_vec(),
        rows: report
            .checks
            .iter()
            .map(|c| {
                vec![
                    c.name.clone(),
                    c.status().into(),
                    opt(c.max_residual),
                    opt(c.tolerance),
                    c.exact.map(|b| b.to_string()).unwrap_or_default(),
                    c.witness.clone().unwrap_or_default(),
                    c.detail.clone().unwrap_or_default(),
                ]
            })
            .collect(),
    }
}

pub fn table_to_csv(table: &Table) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header)?;
    for r in &table.rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })
}
