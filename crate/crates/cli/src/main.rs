use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use extremals_cli::export::{checks_table, table_to_csv, write_file};
use extremals_cli::{exit_code, run, CliError, Scenario, SuiteKind, Verb};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Suite {
    Families,
    Calabi,
    Harmonic,
    Maps,
}

impl From<Suite> for SuiteKind {
    fn from(s: Suite) -> Self {
        match s {
            Suite::Families => SuiteKind::Families,
            Suite::Calabi => SuiteKind::Calabi,
            Suite::Harmonic => SuiteKind::Harmonic,
            Suite::Maps => SuiteKind::Maps,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Verification suites for minimal graphs, Calabi's density and
/// constant-energy maps.
#[derive(Debug, Parser)]
#[command(name = "extremals", version)]
struct Args {
    suite: Suite,
    /// families: verify|sample|period|winding; calabi: residual|branches|extract;
    /// harmonic: identities|spectrum|dims; maps: kernel|construct|verify|export
    verb: String,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn execute(args: &Args) -> Result<i32, CliError> {
    let suite = SuiteKind::from(args.suite);
    let verb = Verb::parse(suite, &args.verb)?;
    let mut scenario = match &args.config {
        Some(p) => Scenario::load(p)?,
        None => Scenario::new(suite),
    };
    if let Some(seed) = args.seed {
        scenario.seed = seed;
    }
    let outcome = run(&scenario, verb)?;
    let report = &outcome.report;
    for line in report.summary_lines() {
        eprintln!("{line}");
    }
    eprintln!("overall: {}", if report.passed { "pass" } else { "fail" });
    match &args.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Io { path: dir.clone(), source: e })?;
            match args.format {
                Format::Json => write_file(&dir.join("report.json"), &report.full_json())?,
                Format::Csv => write_file(&dir.join("checks.csv"), &table_to_csv(&checks_table(report))?)?,
            }
            if let Some(t) = &outcome.table {
                write_file(&dir.join(format!("{}.csv", t.name)), &table_to_csv(t)?)?;
            }
            if let Some(m) = &outcome.map {
                write_file(&dir.join("map.json"), &serde_json::to_string_pretty(m).expect("map serializes"))?;
            }
        }
        None => match args.format {
            Format::Json => println!("{}", report.full_json()),
            Format::Csv => match &outcome.table {
                Some(t) => print!("{}", table_to_csv(t)?),
                None => print!("{}", table_to_csv(&checks_table(report))?),
            },
        },
    }
    Ok(exit_code(report))
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
